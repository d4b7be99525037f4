//! The global trivalent spin network and its 2-2 move dynamics.
//!
//! Every lattice site carries a copy of the supernode template. Leaf `K` of
//! site `A` and leaf `opposite(K)` of the neighbour `A + direction(K)` are
//! joined by two edges, stub 0 to stub 0 and stub 1 to stub 1; the pair is one
//! super-link. Moves rewire only edges inside a supernode, so the lattice and
//! its super-links are fixed while bit content flows.

mod export;
mod local;
mod moves;

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::NetworkError;
use crate::graph::Graph;
use crate::holonomy::ensure_bijection;
use crate::lattice::{Lattice, SupernodeId};
use crate::supernode::{NodeKind, SupernodeGraph, TemplateSlot, Variant};

pub use export::{history_jsonl, toy_export, GraphExport, NodeRecord, SuperlinkRecord, ToyExport, EXPORT_SCHEMA_VERSION};
pub use moves::{Move, Pairing, Slot, INTERNAL};

/// Structural state of a leaf position, read off where its two ports sit.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LeafState {
    /// Both stubs on one node.
    Plain,
    /// Stubs on two adjacent nodes that close a 3-cycle with a third.
    Triangle,
    Disturbed,
}

/// One accepted 2-2 move in the spin-foam history.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FoamEvent {
    pub seq: u64,
    pub kind: String,
    pub edge: [u32; 2],
    pub pairing: Pairing,
    /// `[to, port]` of the slot each endpoint handed over (p's first).
    pub exchanged: [[u32; 2]; 2],
    /// Nodes whose 3-cycle membership was recomputed, ascending.
    pub affected: Vec<u32>,
    pub bits_before: String,
    pub bits_after: String,
}

impl FoamEvent {
    pub fn as_move(&self) -> Move {
        Move::new(self.edge[0], self.edge[1], self.pairing)
    }
}

#[derive(Clone, Debug)]
pub struct SpinNetwork {
    lattice: Arc<Lattice>,
    template: Arc<SupernodeGraph>,
    adj: Vec<[Slot; 3]>,
    bits: Vec<u8>,
    /// Node currently holding each `(supernode, port)`.
    port_holder: Vec<u32>,
    history: Vec<FoamEvent>,
    revision: u64,
}

/// Build the network over `lattice`, checking the leaf-direction bijection first.
pub fn assemble(lattice: Lattice) -> Result<SpinNetwork, NetworkError> {
    SpinNetwork::assemble(Arc::new(lattice))
}

/// Slots of a node in the pristine network, sorted.
fn template_slots(lattice: &Lattice, template: &SupernodeGraph, sn: u32, local: u16) -> [Slot; 3] {
    let t = template.node_count() as u32;
    let mut slots = template.adjacency(local).map(|ts| match ts {
        TemplateSlot::Internal(n) => Slot::internal(sn * t + n as u32),
        TemplateSlot::Stub { leaf_slot, stub } => {
            let ls = leaf_slot as usize;
            let b = lattice.neighbor(SupernodeId(sn), ls);
            let far = template.leaves()[lattice.opposite_slot(ls)].stub_nodes[stub as usize];
            Slot { to: b.0 * t + far as u32, port: (2 * ls) as u8 + stub }
        }
    });
    slots.sort_unstable();
    slots
}

impl SpinNetwork {
    pub fn assemble(lattice: Arc<Lattice>) -> Result<SpinNetwork, NetworkError> {
        ensure_bijection()?;
        let template = Arc::new(SupernodeGraph::build(lattice.variant()));
        let t = template.node_count();
        let ports = 2 * lattice.degree();
        let count = lattice.supernode_count();

        let mut adj = vec![[Slot::VACANT; 3]; count * t];
        adj.par_chunks_mut(t).enumerate().for_each(|(sn, block)| {
            for (local, slots) in block.iter_mut().enumerate() {
                *slots = template_slots(&lattice, &template, sn as u32, local as u16);
            }
        });

        let mut port_holder = vec![u32::MAX; count * ports];
        for (node, slots) in adj.iter().enumerate() {
            for s in slots.iter().filter(|s| !s.is_internal()) {
                let idx = (node / t) * ports + s.port as usize;
                if port_holder[idx] != u32::MAX {
                    return Err(NetworkError::Assembly(format!("port {} of supernode {} used twice", s.port, node / t)));
                }
                port_holder[idx] = node as u32;
            }
        }
        if let Some(i) = port_holder.iter().position(|&h| h == u32::MAX) {
            return Err(NetworkError::Assembly(format!("port {} of supernode {} unused", i % ports, i / ports)));
        }

        let bits = template.bits().iter().copied().cycle().take(count * t).collect();
        let net = SpinNetwork { lattice, template, adj, bits, port_holder, history: Vec::new(), revision: 0 };
        if let Some(bad) = (0..net.node_count()).find(|&u| !net.node_is_consistent(u as u32)) {
            return Err(NetworkError::Assembly(format!("stub pairing inconsistent at node {bad}")));
        }
        Ok(net)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn template(&self) -> &SupernodeGraph {
        &self.template
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn nodes_per_supernode(&self) -> usize {
        self.template.node_count()
    }

    /// Every edge counted once, parallel copies included.
    pub fn edge_count(&self) -> usize {
        self.adj.iter().flatten().filter(|s| **s != Slot::VACANT).count() / 2
    }

    pub fn superlink_count(&self) -> usize {
        self.lattice.supernode_count() * self.lattice.degree() / 2
    }

    pub fn revision(&self) -> u64 {
        self.revision
    }

    pub fn supernode_of(&self, node: u32) -> u32 {
        node / self.template.node_count() as u32
    }

    pub fn local_of(&self, node: u32) -> u16 {
        (node % self.template.node_count() as u32) as u16
    }

    pub fn global(&self, supernode: u32, local: u16) -> u32 {
        supernode * self.template.node_count() as u32 + local as u32
    }

    pub fn kind(&self, node: u32) -> NodeKind {
        self.template.kind(self.local_of(node))
    }

    pub fn slots(&self, node: u32) -> &[Slot; 3] {
        &self.adj[node as usize]
    }

    /// 3-cycle membership, kept current after every move.
    pub fn bit(&self, node: u32) -> u8 {
        self.bits[node as usize]
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn history(&self) -> &[FoamEvent] {
        &self.history
    }

    pub(crate) fn pristine_slots(&self, supernode: u32, local: u16) -> [Slot; 3] {
        template_slots(&self.lattice, &self.template, supernode, local)
    }

    fn ports_per_supernode(&self) -> usize {
        2 * self.lattice.degree()
    }

    pub fn port_holder(&self, supernode: u32, port: u8) -> u32 {
        self.port_holder[supernode as usize * self.ports_per_supernode() + port as usize]
    }

    /// The port at the other end of an edge leaving through `port`.
    pub(crate) fn partner_port(&self, port: u8) -> u8 {
        if port == INTERNAL {
            INTERNAL
        } else {
            let ls = port as usize / 2;
            (2 * self.lattice.opposite_slot(ls)) as u8 + port % 2
        }
    }

    fn node_is_consistent(&self, u: u32) -> bool {
        let slots = &self.adj[u as usize];
        slots.iter().all(|s| {
            if *s == Slot::VACANT || s.to == u || s.to as usize >= self.adj.len() {
                return false;
            }
            if !s.is_internal() && self.supernode_of(u) == self.supernode_of(s.to) && !self.lattice.is_multigraph() {
                return false;
            }
            if s.is_internal() && self.supernode_of(u) != self.supernode_of(s.to) {
                return false;
            }
            let back = Slot { to: u, port: self.partner_port(s.port) };
            let here = slots.iter().filter(|x| **x == *s).count();
            let there = self.adj[s.to as usize].iter().filter(|x| **x == back).count();
            here == there
        })
    }

    /// Full scan: every node has three live, mutually consistent edge ends.
    pub fn check_trivalent(&self) -> bool {
        (0..self.adj.len() as u32).into_par_iter().all(|u| self.node_is_consistent(u))
    }

    /// Cut one copy of edge `p–q` for invariant tests. The network is left
    /// inconsistent on purpose.
    #[doc(hidden)]
    pub fn debug_cut_edge(&mut self, p: u32, q: u32) {
        for (a, b) in [(p, q), (q, p)] {
            if let Some(s) = self.adj[a as usize].iter_mut().find(|s| s.to == b) {
                *s = Slot::VACANT;
            }
        }
    }

    fn compute_bit(&self, u: u32) -> u8 {
        let n = &self.adj[u as usize];
        for i in 0..3 {
            for j in i + 1..3 {
                let (a, b) = (n[i].to, n[j].to);
                if a != b && a != u && b != u && self.adj[a as usize].iter().any(|s| s.to == b) {
                    return 1;
                }
            }
        }
        0
    }

    /// Apply a 2-2 move. Illegal moves leave the network untouched.
    pub fn pachner_22(&mut self, mv: Move) -> Result<FoamEvent, NetworkError> {
        let illegal = |reason: String| NetworkError::IllegalMove { p: mv.p, q: mv.q, reason };
        let n = self.adj.len() as u32;
        if mv.p >= n || mv.q >= n {
            return Err(illegal("no such node".into()));
        }
        if self.supernode_of(mv.p) != self.supernode_of(mv.q) {
            return Err(illegal("endpoints lie in different supernodes".into()));
        }
        let swap = moves::plan_swap(&mv, &self.adj[mv.p as usize], &self.adj[mv.q as usize]).map_err(illegal)?;

        let x = swap.from_p;
        let y = swap.from_q;
        let mut touched: BTreeSet<u32> = [mv.p, mv.q, x.to, y.to].into();
        for &u in [mv.p, mv.q, x.to, y.to].iter() {
            touched.extend(self.adj[u as usize].iter().map(|s| s.to));
        }

        // Locate the far ends before changing anything.
        let x_back = Slot { to: mv.p, port: self.partner_port(x.port) };
        let y_back = Slot { to: mv.q, port: self.partner_port(y.port) };
        let xi = self.adj[x.to as usize].iter().position(|s| *s == x_back);
        let yi = self.adj[y.to as usize].iter().position(|s| *s == y_back);
        let (Some(xi), Some(yi)) = (xi, yi) else {
            return Err(NetworkError::Assembly(format!("edge ends out of sync around ({}, {})", mv.p, mv.q)));
        };

        let replace = |slots: &mut [Slot; 3], old: Slot, new: Slot| {
            let i = slots.iter().position(|s| *s == old).expect("slot present");
            slots[i] = new;
            slots.sort_unstable();
        };
        replace(&mut self.adj[mv.p as usize], x, y);
        replace(&mut self.adj[mv.q as usize], y, x);
        self.adj[x.to as usize][xi].to = mv.q;
        self.adj[y.to as usize][yi].to = mv.p;
        self.adj[x.to as usize].sort_unstable();
        self.adj[y.to as usize].sort_unstable();

        let sn = self.supernode_of(mv.p) as usize * self.ports_per_supernode();
        if !x.is_internal() {
            self.port_holder[sn + x.port as usize] = mv.q;
        }
        if !y.is_internal() {
            self.port_holder[sn + y.port as usize] = mv.p;
        }

        for &u in [mv.p, mv.q, x.to, y.to].iter() {
            touched.extend(self.adj[u as usize].iter().map(|s| s.to));
        }
        let affected: Vec<u32> = touched.into_iter().collect();
        let bits_before: String = affected.iter().map(|&u| char::from(b'0' + self.bits[u as usize])).collect();
        for &u in &affected {
            self.bits[u as usize] = self.compute_bit(u);
        }
        let bits_after: String = affected.iter().map(|&u| char::from(b'0' + self.bits[u as usize])).collect();

        debug_assert!(affected.iter().all(|&u| self.node_is_consistent(u)));

        self.revision += 1;
        let event = FoamEvent {
            seq: self.history.len() as u64,
            kind: "2-2".into(),
            edge: [mv.p, mv.q],
            pairing: mv.pairing,
            exchanged: [[x.to, x.port as u32], [y.to, y.port as u32]],
            affected,
            bits_before,
            bits_after,
        };
        self.history.push(event.clone());
        Ok(event)
    }

    /// The move that undoes `event`, valid on the state right after it.
    pub fn restoring_move(&self, event: &FoamEvent) -> Option<Move> {
        let [p, q] = event.edge;
        let given_p = Slot { to: event.exchanged[0][0], port: event.exchanged[0][1] as u8 };
        let given_q = Slot { to: event.exchanged[1][0], port: event.exchanged[1][1] as u8 };
        [(p, q, Pairing::A), (p, q, Pairing::B), (q, p, Pairing::A), (q, p, Pairing::B)]
            .into_iter()
            .map(|(a, b, pr)| Move::new(a, b, pr))
            .find(|mv| {
                let swap = moves::plan_swap(mv, &self.adj[mv.p as usize], &self.adj[mv.q as usize]);
                match swap {
                    // p now holds what q gave, and must give it back.
                    Ok(s) if mv.p == p => s.from_p == given_q && s.from_q == given_p,
                    Ok(s) => s.from_p == given_p && s.from_q == given_q,
                    Err(_) => false,
                }
            })
    }

    /// Where the two ports of a leaf position currently sit.
    pub fn leaf_state(&self, supernode: u32, leaf_slot: usize) -> LeafState {
        let a = self.port_holder(supernode, (2 * leaf_slot) as u8);
        let b = self.port_holder(supernode, (2 * leaf_slot + 1) as u8);
        if a == b {
            return LeafState::Plain;
        }
        let internal = |u: u32| self.adj[u as usize].iter().filter(|s| s.is_internal()).map(|s| s.to).collect::<Vec<_>>();
        let na = internal(a);
        let nb = internal(b);
        if na.contains(&b) && na.iter().any(|c| *c != b && nb.contains(c)) {
            LeafState::Triangle
        } else {
            LeafState::Disturbed
        }
    }

    /// The structure a leaf position has in the pristine network.
    pub fn pristine_leaf_state(&self, leaf_slot: usize) -> LeafState {
        if self.template.leaves()[leaf_slot].triangle {
            LeafState::Triangle
        } else {
            LeafState::Plain
        }
    }

    /// Leaf slots of a supernode whose structure matches the pristine one.
    pub fn active_leaves(&self, supernode: u32) -> Vec<bool> {
        (0..self.lattice.degree()).map(|ls| self.leaf_state(supernode, ls) == self.pristine_leaf_state(ls)).collect()
    }

    /// Swap the triangle between leaf `k` and its sibling under the same tree
    /// node, by the shortest sequence of 2-2 moves inside that corner of the
    /// supernode. Applying it twice restores the exact adjacency.
    pub fn invert_bit(&mut self, supernode: u32, k: u32) -> Result<Vec<FoamEvent>, NetworkError> {
        let reject = |reason: &str| NetworkError::InversionRejected { supernode, leaf: k, reason: reason.into() };
        if supernode as usize >= self.lattice.supernode_count() {
            return Err(NetworkError::NoSuchSupernode(supernode));
        }
        if self.lattice.variant() != Variant::F4 {
            return Err(reject("the D4 supernode has no triangle leaves"));
        }
        let slot = self.lattice.variant().slot_of(k)?;
        let plan = local::plan_inversion(self, supernode, slot).map_err(|r| reject(&r))?;
        let start = self.history.len();
        for mv in plan {
            if let Err(e) = self.pachner_22(mv) {
                // The plan was found on an exact copy of the neighbourhood, so
                // this only happens if the copy and the network disagree.
                return Err(NetworkError::Assembly(format!("inversion plan failed: {e}")));
            }
        }
        Ok(self.history[start..].to_vec())
    }

    /// SHA-256 over adjacency and bits.
    pub fn state_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.adj.len() as u64).to_le_bytes());
        for slots in &self.adj {
            for s in slots {
                h.update(s.to.to_le_bytes());
                h.update([s.port]);
            }
        }
        h.update(&self.bits);
        hex::encode(h.finalize())
    }

    /// Apply logged moves in order to a fresh network over `lattice`.
    pub fn replay(lattice: Arc<Lattice>, events: &[FoamEvent]) -> Result<SpinNetwork, NetworkError> {
        let mut net = SpinNetwork::assemble(lattice)?;
        for ev in events {
            net.pachner_22(ev.as_move())?;
        }
        Ok(net)
    }

    /// Adjacency-only equality (ignores history).
    pub fn same_state(&self, other: &SpinNetwork) -> bool {
        self.adj == other.adj && self.bits == other.bits
    }

    /// Apply `count` random legal moves drawn from a seeded ChaCha stream.
    /// Returns the accepted events; a candidate that is illegal is redrawn.
    pub fn random_moves(&mut self, count: usize, seed: u64) -> Vec<FoamEvent> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.adj.len() as u32;
        let mut out = Vec::with_capacity(count);
        let mut misses = 0usize;
        while out.len() < count {
            let p = rng.gen_range(0..n);
            let s = self.adj[p as usize][rng.gen_range(0..3)];
            let pairing = if rng.gen::<bool>() { Pairing::A } else { Pairing::B };
            if !s.is_internal() {
                continue;
            }
            match self.pachner_22(Move::new(p, s.to, pairing)) {
                Ok(ev) => out.push(ev),
                Err(_) => {
                    misses += 1;
                    assert!(misses < 1000 * (count + 1), "no legal move found");
                }
            }
        }
        out
    }

    /// Internal edges `(p, q)` that currently admit a 2-2 move, ascending.
    pub fn movable_edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for (u, slots) in self.adj.iter().enumerate() {
            let u = u as u32;
            for s in slots {
                if s.is_internal() && s.to > u && slots.iter().filter(|x| x.to == s.to).count() == 1 {
                    out.push((u, s.to));
                }
            }
        }
        out
    }
}

impl Graph for SpinNetwork {
    fn node_count(&self) -> usize {
        self.adj.len()
    }

    fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[u].iter().map(|s| s.to as usize)
    }
}
