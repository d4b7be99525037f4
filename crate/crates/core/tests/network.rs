use std::sync::Arc;

use hyperfoam_core::lattice::{Lattice, LatticeOptions, TorusShape};
use hyperfoam_core::network::{LeafState, Move, Pairing, SpinNetwork};
use hyperfoam_core::supernode::Variant;
use proptest::prelude::*;

fn net(n: u32, variant: Variant, multigraph: bool) -> SpinNetwork {
    let lat = Lattice::build(TorusShape::new(n), variant, LatticeOptions { multigraph }).unwrap();
    SpinNetwork::assemble(Arc::new(lat)).unwrap()
}

#[test]
fn pristine_counts() {
    let g = net(3, Variant::F4, false);
    assert_eq!(g.node_count(), 162 * 144);
    assert_eq!(g.superlink_count(), 162 * 24);
    // 168 internal edges per supernode, two per super-link
    assert_eq!(g.edge_count(), 162 * 168 + 2 * 162 * 24);
    assert!(g.check_trivalent());
    assert_eq!(g.bits().iter().filter(|&&b| b == 1).count(), 162 * 75);
    let sl = g.superlinks();
    assert_eq!(sl.len(), g.superlink_count());
    for l in &sl {
        for [a, b] in l.edges {
            assert!(g.slots(a).iter().any(|s| s.to == b));
        }
    }
}

#[test]
fn small_tori_need_multigraph_mode() {
    assert!(Lattice::build(TorusShape::new(2), Variant::F4, LatticeOptions::default()).is_err());
    for n in [1, 2] {
        let g = net(n, Variant::F4, true);
        assert!(g.check_trivalent(), "n={n}");
    }
    assert!(net(1, Variant::D4, true).check_trivalent());
}

#[test]
fn pristine_leaves_match_their_type() {
    let g = net(3, Variant::F4, false);
    for ls in 0..48 {
        let want = if ls % 2 == 1 { LeafState::Triangle } else { LeafState::Plain };
        assert_eq!(g.leaf_state(5, ls), want);
        assert_eq!(g.pristine_leaf_state(ls), want);
    }
    assert!(g.active_leaves(0).iter().all(|&a| a));
}

#[test]
fn move_then_restoring_move_is_identity() {
    let mut g = net(3, Variant::F4, false);
    let before = g.state_hash();
    let edges = g.movable_edges();
    for &(p, q) in edges.iter().take(400) {
        for pairing in [Pairing::A, Pairing::B] {
            let Ok(ev) = g.pachner_22(Move::new(p, q, pairing)) else { continue };
            assert!(g.check_trivalent());
            let back = g.restoring_move(&ev).expect("every move has a 2-2 inverse");
            g.pachner_22(back).unwrap();
            assert_eq!(g.state_hash(), before, "{p} {q} {pairing:?}");
        }
    }
}

#[test]
fn illegal_moves_leave_state_untouched() {
    let mut g = net(3, Variant::F4, false);
    let h = g.state_hash();
    let t = g.nodes_per_supernode() as u32;
    // not an edge
    assert!(g.pachner_22(Move::new(0, 100, Pairing::A)).is_err());
    // across supernodes
    let near = g.template().leaves()[0].stub_nodes[0] as u32;
    let far = *g.slots(near).iter().find(|s| !s.is_internal()).unwrap();
    assert!(g.pachner_22(Move::new(near, far.to, Pairing::A)).is_err());
    // out of range
    assert!(g.pachner_22(Move::new(0, 162 * t, Pairing::A)).is_err());
    assert!(g.pachner_22(Move::new(3, 3, Pairing::B)).is_err());
    assert_eq!(g.state_hash(), h);
    assert!(g.history().is_empty());
}

#[test]
fn a_move_on_the_central_triangle_changes_bits() {
    let mut g = net(3, Variant::F4, false);
    let ev = g.pachner_22(Move::new(0, 1, Pairing::A)).unwrap();
    assert_ne!(ev.bits_before, ev.bits_after);
    assert!(ev.affected.contains(&0));
    assert_eq!(ev.kind, "2-2");
}

#[test]
fn cut_edge_breaks_trivalence() {
    let mut g = net(3, Variant::F4, false);
    g.debug_cut_edge(0, 1);
    assert!(!g.check_trivalent());
}

#[test]
fn invert_bit_exchanges_and_restores() {
    let mut g = net(3, Variant::F4, false);
    let h = g.state_hash();
    let corner: Vec<u32> = [0usize, 1].iter().flat_map(|&ls| {
        let l = &g.template().leaves()[ls];
        [l.parent, l.attach, l.stub_nodes[0], l.stub_nodes[1]].map(|x| g.global(7, x))
    }).collect();
    let bits_of = |g: &SpinNetwork| corner.iter().map(|&u| g.bit(u)).collect::<Vec<_>>();
    let pristine_bits = bits_of(&g);
    let events = g.invert_bit(7, 1).unwrap();
    assert!(!events.is_empty());
    assert!(g.check_trivalent());
    assert_eq!(g.leaf_state(7, 0), LeafState::Triangle);
    assert_eq!(g.leaf_state(7, 1), LeafState::Plain);
    assert_ne!(bits_of(&g), pristine_bits);
    let back = g.invert_bit(7, 2).unwrap();
    assert!(!back.is_empty());
    assert_eq!(g.state_hash(), h);
}

#[test]
fn invert_bit_rejections() {
    let mut g = net(3, Variant::F4, false);
    assert!(g.invert_bit(10_000, 1).is_err());
    assert!(g.invert_bit(0, 49).is_err());
    g.pachner_22(Move::new(0, 1, Pairing::A)).unwrap();
    // the corner under node 3's subtree is still pristine
    assert!(g.invert_bit(0, 1).is_ok());
    let mut d = net(3, Variant::D4, false);
    assert!(d.invert_bit(0, 1).is_err());
}

#[test]
fn replay_reproduces_state() {
    let mut g = net(3, Variant::F4, false);
    let edges = g.movable_edges();
    for (i, &(p, q)) in edges.iter().step_by(37).take(60).enumerate() {
        let _ = g.pachner_22(Move::new(p, q, if i % 2 == 0 { Pairing::A } else { Pairing::B }));
    }
    let again = SpinNetwork::replay(Arc::new(g.lattice().clone()), g.history()).unwrap();
    assert!(again.same_state(&g));
    assert_eq!(again.state_hash(), g.state_hash());
}

#[test]
fn exports_are_well_formed() {
    let g = net(1, Variant::D4, true);
    let v: serde_json::Value = serde_json::from_str(&g.to_json()).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["nodes"].as_array().unwrap().len(), g.node_count());
    let dot = g.to_dot();
    assert!(dot.starts_with("graph spin_network {"));
    assert!(dot.trim_end().ends_with('}'));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_moves_keep_the_network_trivalent(picks in prop::collection::vec((any::<u32>(), any::<bool>()), 1..40)) {
        let mut g = net(1, Variant::F4, true);
        let start = g.state_hash();
        let mut done = Vec::new();
        for (pick, b) in picks {
            let edges = g.movable_edges();
            let (p, q) = edges[pick as usize % edges.len()];
            if let Ok(ev) = g.pachner_22(Move::new(p, q, if b { Pairing::A } else { Pairing::B })) {
                done.push(ev);
            }
        }
        prop_assert!(g.check_trivalent());
        for ev in done.iter().rev() {
            let back = g.restoring_move(ev).unwrap();
            g.pachner_22(back).unwrap();
        }
        prop_assert_eq!(g.state_hash(), start);
    }
}

#[test]
fn bitswap_fixture_applies_and_unapplies() {
    use hyperfoam_core::observables::supernode_frame;
    use hyperfoam_core::particles::fixture_bitswap_pattern;
    use num_rational::Rational64;

    let mut g = net(3, Variant::F4, false);
    let h = g.state_hash();
    let p = fixture_bitswap_pattern().unwrap();
    assert_eq!(p.len(), 21);
    let ev = p.apply(&mut g, 4).unwrap();
    assert!(ev.len() >= 21);
    assert!(g.check_trivalent());
    assert!(supernode_frame(&g, 4).anisotropy() > Rational64::from_integer(0));
    assert_eq!(supernode_frame(&g, 5).anisotropy(), Rational64::from_integer(0));
    p.unapply(&mut g, 4).unwrap();
    assert_eq!(g.state_hash(), h);
}
