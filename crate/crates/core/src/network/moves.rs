//! Pachner 2-2 moves on a trivalent multigraph, seen from the dual graph side.
//!
//! Flipping an edge `p–q` keeps the edge and exchanges one of `p`'s other two
//! neighbours with one of `q`'s. Sorting each side's two other slots gives
//! `P1 < P2` and `Q1 < Q2`; the two non-trivial regroupings are
//!
//! * pairing A: `{P1, Q1} | {P2, Q2}`
//! * pairing B: `{P1, Q2} | {P2, Q1}`
//!
//! and the first-listed endpoint `p` takes the group holding the smallest of
//! the four slots. Under this rule every accepted move has an inverse that is
//! itself a 2-2 move on the same edge, possibly listed as `q–p`.

use serde::{Deserialize, Serialize};

/// Marks a slot whose edge stays inside one supernode.
pub const INTERNAL: u8 = u8::MAX;

/// One end of an edge, as seen from the node that owns it.
///
/// External (super-link) edges carry the owner's port, `2·leaf_slot + stub`,
/// which travels with the edge when a move hands it to another node.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Slot {
    pub to: u32,
    pub port: u8,
}

impl Slot {
    pub const VACANT: Slot = Slot { to: u32::MAX, port: INTERNAL };

    pub fn internal(to: u32) -> Self {
        Slot { to, port: INTERNAL }
    }

    pub fn is_internal(&self) -> bool {
        self.port == INTERNAL
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Pairing {
    A,
    B,
}

/// A requested 2-2 move on edge `p–q`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Move {
    pub p: u32,
    pub q: u32,
    pub pairing: Pairing,
}

impl Move {
    pub fn new(p: u32, q: u32, pairing: Pairing) -> Self {
        Move { p, q, pairing }
    }
}

/// Which slot each endpoint hands to the other.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) struct Swap {
    pub from_p: Slot,
    pub from_q: Slot,
}

/// Work out the exchange for `mv` from the two endpoints' slots. Returns a
/// reason string when the move is illegal.
pub(crate) fn plan_swap(mv: &Move, p_slots: &[Slot; 3], q_slots: &[Slot; 3]) -> Result<Swap, String> {
    if mv.p == mv.q {
        return Err("endpoints coincide".into());
    }
    let to_q: Vec<&Slot> = p_slots.iter().filter(|s| s.to == mv.q).collect();
    match to_q.as_slice() {
        [] => return Err("not an edge".into()),
        [s] if !s.is_internal() => return Err("super-link edges do not move".into()),
        [_] => {}
        _ => return Err("edge is one of a parallel pair".into()),
    }
    let others = |slots: &[Slot; 3], other: u32| -> Result<[Slot; 2], String> {
        let mut v: Vec<Slot> = slots.iter().copied().filter(|s| s.to != other).collect();
        if v.len() != 2 || v.contains(&Slot::VACANT) {
            return Err("endpoint is not trivalent".into());
        }
        v.sort_unstable();
        Ok([v[0], v[1]])
    };
    let [p1, p2] = others(p_slots, mv.q)?;
    let [q1, q2] = others(q_slots, mv.p)?;
    let swap = match mv.pairing {
        Pairing::A => Swap { from_p: p2, from_q: q1 },
        Pairing::B if p1 < q1 => Swap { from_p: p2, from_q: q2 },
        Pairing::B => Swap { from_p: p1, from_q: q1 },
    };
    if swap.from_p == swap.from_q {
        return Err("move leaves the adjacency unchanged".into());
    }
    Ok(swap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slots(a: [u32; 3]) -> [Slot; 3] {
        let mut s = a.map(Slot::internal);
        s.sort();
        s
    }

    fn apply(p: &mut [Slot; 3], q: &mut [Slot; 3], sw: Swap) {
        let ip = p.iter().position(|s| *s == sw.from_p).unwrap();
        let iq = q.iter().position(|s| *s == sw.from_q).unwrap();
        p[ip] = sw.from_q;
        q[iq] = sw.from_p;
        p.sort();
        q.sort();
    }

    #[test]
    fn rejects_bad_edges() {
        let p = slots([1, 5, 6]);
        let q = slots([0, 7, 8]);
        assert!(plan_swap(&Move::new(0, 0, Pairing::A), &p, &q).is_err());
        assert!(plan_swap(&Move::new(0, 2, Pairing::A), &p, &q).is_err());
        let para = slots([1, 1, 6]);
        assert!(plan_swap(&Move::new(0, 1, Pairing::A), &para, &slots([0, 0, 3])).is_err());
        let ext = [Slot { to: 1, port: 3 }, Slot::internal(5), Slot::internal(6)];
        assert!(plan_swap(&Move::new(0, 1, Pairing::A), &ext, &q).is_err());
    }

    #[test]
    fn pairings_regroup_neighbours() {
        // p = 0 with {5, 6}, q = 1 with {7, 8}
        let p = slots([1, 5, 6]);
        let q = slots([0, 7, 8]);
        let a = plan_swap(&Move::new(0, 1, Pairing::A), &p, &q).unwrap();
        assert_eq!((a.from_p.to, a.from_q.to), (6, 7)); // p ends with {5, 7}
        let b = plan_swap(&Move::new(0, 1, Pairing::B), &p, &q).unwrap();
        assert_eq!((b.from_p.to, b.from_q.to), (6, 8)); // p ends with {5, 8}
    }

    #[test]
    fn every_move_has_a_two_two_inverse() {
        // All relative orders of the four outer neighbours.
        let labels = [10u32, 11, 12, 13];
        let mut perms = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let v = [a, b, c, d];
                        if (0..4).all(|i| v.contains(&i)) {
                            perms.push(v.map(|i| labels[i]));
                        }
                    }
                }
            }
        }
        for [a, b, c, d] in perms {
            for pairing in [Pairing::A, Pairing::B] {
                let (mut p, mut q) = (slots([1, a, b]), slots([0, c, d]));
                let (p0, q0) = (p, q);
                let sw = plan_swap(&Move::new(0, 1, pairing), &p, &q).unwrap();
                apply(&mut p, &mut q, sw);
                let restored = [(0, 1, Pairing::A), (0, 1, Pairing::B), (1, 0, Pairing::A), (1, 0, Pairing::B)]
                    .into_iter()
                    .any(|(x, y, pr)| {
                        let (mut pp, mut qq) = (p, q);
                        let (sx, sy) = if x == 0 { (&mut pp, &mut qq) } else { (&mut qq, &mut pp) };
                        match plan_swap(&Move::new(x, y, pr), sx, sy) {
                            Ok(s) => {
                                apply(sx, sy, s);
                                pp == p0 && qq == q0
                            }
                            Err(_) => false,
                        }
                    });
                assert!(restored, "{a} {b} {c} {d} {pairing:?}");
            }
        }
    }
}
