//! Move search restricted to one corner of a supernode: a tree node and the
//! two sibling leaves hanging from it.

use std::collections::{HashMap, VecDeque};

use super::moves::{plan_swap, Move, Pairing, Slot, INTERNAL};
use super::SpinNetwork;

/// Longest sequence the search will consider.
const MAX_DEPTH: usize = 8;

type Corner = [[Slot; 3]; 5];

struct Frame<'a> {
    net: &'a SpinNetwork,
    nodes: [u32; 5],
    /// Port pairs of the (pristine) plain leaf and triangle leaf.
    plain_ports: [u8; 2],
    tri_ports: [u8; 2],
    /// The edge into the corner from above.
    up: Slot,
}

impl Frame<'_> {
    fn index(&self, u: u32) -> Option<usize> {
        self.nodes.iter().position(|&n| n == u)
    }

    fn holder(&self, c: &Corner, port: u8) -> Option<usize> {
        c.iter().position(|s| s.iter().any(|x| x.port == port && !x.is_internal()))
    }

    fn internal(&self, c: &Corner, i: usize) -> Vec<usize> {
        c[i].iter().filter(|s| s.is_internal()).filter_map(|s| self.index(s.to)).collect()
    }

    /// The same corner with the two leaves' structures exchanged: the node on
    /// the upward edge has two corner children, one carrying both triangle-leaf
    /// ports and one rooting a 3-cycle whose other members carry the plain-leaf ports.
    fn is_swapped(&self, c: &Corner) -> bool {
        let Some(top) = c.iter().position(|s| s.contains(&self.up)) else { return false };
        let (Some(u), Some(v1), Some(v2)) =
            (self.holder(c, self.tri_ports[0]), self.holder(c, self.plain_ports[0]), self.holder(c, self.plain_ports[1]))
        else {
            return false;
        };
        if self.holder(c, self.tri_ports[1]) != Some(u) || v1 == v2 {
            return false;
        }
        let top_n = self.internal(c, top);
        let Some(&v) = top_n.iter().find(|&&x| x != u) else { return false };
        let vn = self.internal(c, v);
        top_n.len() == 2
            && top_n.contains(&u)
            && self.internal(c, u) == [top]
            && [top, v1, v2].iter().all(|x| vn.contains(x))
            && self.internal(c, v1).contains(&v2)
    }

    fn apply(&self, c: &Corner, mv: &Move) -> Option<Corner> {
        let (ip, iq) = (self.index(mv.p)?, self.index(mv.q)?);
        let sw = plan_swap(mv, &c[ip], &c[iq]).ok()?;
        let mut next = *c;
        let i = next[ip].iter().position(|x| *x == sw.from_p)?;
        next[ip][i] = sw.from_q;
        let i = next[iq].iter().position(|x| *x == sw.from_q)?;
        next[iq][i] = sw.from_p;
        // Redirect far ends that are themselves corner nodes.
        for (s, old, new) in [(sw.from_p, mv.p, mv.q), (sw.from_q, mv.q, mv.p)] {
            if let Some(f) = self.index(s.to) {
                let back = Slot { to: old, port: self.net.partner_port(s.port) };
                let i = next[f].iter().position(|x| *x == back)?;
                next[f][i].to = new;
            }
        }
        for slots in next.iter_mut() {
            if slots.iter().any(|s| s.to == u32::MAX) {
                return None;
            }
            slots.sort_unstable();
        }
        Some(next)
    }

    fn candidate_moves(&self, c: &Corner) -> Vec<Move> {
        let mut out = Vec::new();
        for (i, slots) in c.iter().enumerate() {
            for s in slots.iter().filter(|s| s.is_internal() && s.port == INTERNAL) {
                if self.index(s.to).is_some() && s.to != self.nodes[i] {
                    for pr in [Pairing::A, Pairing::B] {
                        out.push(Move::new(self.nodes[i], s.to, pr));
                    }
                }
            }
        }
        out.sort_by_key(|m| (m.p, m.q, m.pairing == Pairing::B));
        out.dedup();
        out
    }

    fn search(&self, start: Corner, goal: impl Fn(&Corner) -> bool) -> Option<Vec<Move>> {
        let mut prev: HashMap<Corner, Option<(Corner, Move)>> = HashMap::new();
        prev.insert(start, None);
        let mut queue = VecDeque::from([(start, 0usize)]);
        while let Some((c, depth)) = queue.pop_front() {
            if goal(&c) {
                let mut path = Vec::new();
                let mut cur = c;
                while let Some(Some((p, mv))) = prev.get(&cur) {
                    path.push(*mv);
                    cur = *p;
                }
                path.reverse();
                return Some(path);
            }
            if depth == MAX_DEPTH {
                continue;
            }
            for mv in self.candidate_moves(&c) {
                if let Some(next) = self.apply(&c, &mv) {
                    if let std::collections::hash_map::Entry::Vacant(e) = prev.entry(next) {
                        e.insert(Some((c, mv)));
                        queue.push_back((next, depth + 1));
                    }
                }
            }
        }
        None
    }
}

/// Moves that exchange the structures of leaf `slot` and its sibling, or
/// undo an earlier exchange. The corner must be pristine or exactly as an
/// earlier exchange left it.
pub(super) fn plan_inversion(net: &SpinNetwork, supernode: u32, slot: usize) -> Result<Vec<Move>, String> {
    let t = net.template();
    let leaves = t.leaves();
    let (a, b) = (&leaves[slot & !1], &leaves[slot | 1]);
    let (plain, tri) = match (a.triangle, b.triangle) {
        (false, true) => (a, b),
        (true, false) => (b, a),
        _ => return Err("sibling leaves do not form a plain/triangle pair".into()),
    };
    let parent = plain.parent;
    let tri_slot = t.variant().slot_of(tri.code.k).map_err(|e| e.to_string())?;
    let plain_slot = t.variant().slot_of(plain.code.k).map_err(|e| e.to_string())?;
    let locals = [parent, plain.attach, tri.attach, tri.stub_nodes[0], tri.stub_nodes[1]];
    let nodes = locals.map(|l| net.global(supernode, l));

    let pristine: Corner = locals.map(|l| net.pristine_slots(supernode, l));
    let up = *pristine[0]
        .iter()
        .find(|s| s.is_internal() && !nodes.contains(&s.to))
        .ok_or("corner has no upward edge")?;
    let frame = Frame {
        net,
        nodes,
        plain_ports: [2 * plain_slot as u8, 2 * plain_slot as u8 + 1],
        tri_ports: [2 * tri_slot as u8, 2 * tri_slot as u8 + 1],
        up,
    };
    let current: Corner = nodes.map(|n| *net.slots(n));

    if current == pristine {
        frame.search(current, |c| frame.is_swapped(c)).ok_or_else(|| "no exchange sequence found".into())
    } else if frame.is_swapped(&current) {
        frame.search(current, |c| *c == pristine).ok_or_else(|| "no restoring sequence found".into())
    } else {
        Err("corner is neither pristine nor exchanged".into())
    }
}
