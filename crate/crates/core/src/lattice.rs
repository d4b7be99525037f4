//! Periodic supernode lattices: the T⁴ F4 (or D4) torus and the 2D toy torus.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::LatticeError;
use crate::geometry::Vec4;
use crate::graph::{bfs, Graph};
use crate::holonomy::{leaf_direction, opposite_leaf};
use crate::supernode::Variant;

/// A 4-torus of side `2n` along each axis.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct TorusShape {
    pub n: u32,
}

impl TorusShape {
    pub fn new(n: u32) -> Self {
        TorusShape { n }
    }

    pub fn side(&self) -> u32 {
        2 * self.n
    }

    /// Sites with all coordinates of equal parity: `2n⁴`.
    pub fn supernode_count(&self) -> usize {
        2 * (self.n as usize).pow(4)
    }
}

/// Four residues mod `2n`, all of the same parity.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct SupernodeCoord(pub [u32; 4]);

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct SupernodeId(pub u32);

impl SupernodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct LatticeOptions {
    /// Allow tori with `n < 3`, where opposite directions reach the same site.
    pub multigraph: bool,
}

/// Supernode sites with their neighbour tables.
///
/// Slot `s` of every site points along the direction of the `s`-th leaf of the
/// variant (ascending leaf label), so slot order and leaf order coincide.
#[derive(Clone, Debug)]
pub struct Lattice {
    shape: TorusShape,
    variant: Variant,
    multigraph: bool,
    directions: Vec<Vec4>,
    leaf_labels: Vec<u32>,
    opposite_slot: Vec<usize>,
    neighbors: Vec<u32>,
}

pub fn build_lattice(shape: TorusShape) -> Result<Lattice, LatticeError> {
    Lattice::build(shape, Variant::F4, LatticeOptions::default())
}

impl Lattice {
    pub fn build(shape: TorusShape, variant: Variant, opts: LatticeOptions) -> Result<Lattice, LatticeError> {
        if shape.n == 0 {
            return Err(LatticeError::Empty(shape.n));
        }
        if shape.n < 3 && !opts.multigraph {
            return Err(LatticeError::TooSmall(shape.n));
        }
        let leaf_labels = variant.leaf_labels();
        let directions: Vec<Vec4> =
            leaf_labels.iter().map(|&k| leaf_direction(k).expect("leaf labels are in range")).collect();
        let opposite_slot = leaf_labels
            .iter()
            .map(|&k| {
                let o = opposite_leaf(k).expect("leaf labels are in range");
                variant.slot_of(o).expect("opposite stays in the variant's shell")
            })
            .collect();

        let mut lat = Lattice {
            shape,
            variant,
            multigraph: opts.multigraph,
            directions,
            leaf_labels,
            opposite_slot,
            neighbors: Vec::new(),
        };
        let deg = lat.degree();
        let count = shape.supernode_count();
        let mut neighbors = vec![0u32; count * deg];
        neighbors.par_chunks_mut(deg).enumerate().for_each(|(id, row)| {
            let c = lat.coord(SupernodeId(id as u32));
            for (slot, out) in row.iter_mut().enumerate() {
                *out = lat.id(lat.translate(c, lat.directions[slot])).0;
            }
        });
        lat.neighbors = neighbors;
        Ok(lat)
    }

    pub fn shape(&self) -> TorusShape {
        self.shape
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn is_multigraph(&self) -> bool {
        self.multigraph
    }

    pub fn supernode_count(&self) -> usize {
        self.shape.supernode_count()
    }

    /// Neighbour slots per site: 48 for F4, 24 for D4.
    pub fn degree(&self) -> usize {
        self.directions.len()
    }

    pub fn direction(&self, slot: usize) -> Vec4 {
        self.directions[slot]
    }

    pub fn leaf_label(&self, slot: usize) -> u32 {
        self.leaf_labels[slot]
    }

    pub fn opposite_slot(&self, slot: usize) -> usize {
        self.opposite_slot[slot]
    }

    /// Dense codec: parity first, then `(c − parity)/2` lexicographically.
    pub fn id(&self, c: SupernodeCoord) -> SupernodeId {
        let n = self.shape.n;
        let p = c.0[0] % 2;
        let t = c.0.map(|x| (x - p) / 2);
        SupernodeId(p * n.pow(4) + ((t[0] * n + t[1]) * n + t[2]) * n + t[3])
    }

    pub fn try_id(&self, c: SupernodeCoord) -> Result<SupernodeId, LatticeError> {
        let side = self.shape.side();
        let p = c.0[0] % 2;
        if c.0.iter().any(|&x| x >= side || x % 2 != p) {
            return Err(LatticeError::BadCoord(c.0));
        }
        Ok(self.id(c))
    }

    pub fn coord(&self, id: SupernodeId) -> SupernodeCoord {
        let n = self.shape.n;
        let n4 = n.pow(4);
        let p = id.0 / n4;
        let mut r = id.0 % n4;
        let mut t = [0u32; 4];
        for i in (0..4).rev() {
            t[i] = r % n;
            r /= n;
        }
        SupernodeCoord(t.map(|x| 2 * x + p))
    }

    pub fn translate(&self, c: SupernodeCoord, d: Vec4) -> SupernodeCoord {
        let side = self.shape.side() as i64;
        SupernodeCoord(std::array::from_fn(|i| (c.0[i] as i64 + d.0[i]).rem_euclid(side) as u32))
    }

    pub fn neighbor(&self, id: SupernodeId, slot: usize) -> SupernodeId {
        SupernodeId(self.neighbors[id.index() * self.degree() + slot])
    }

    pub fn neighbor_row(&self, id: SupernodeId) -> &[u32] {
        let d = self.degree();
        &self.neighbors[id.index() * d..(id.index() + 1) * d]
    }

    /// Shortest-path length in the supernode graph.
    pub fn word_distance(&self, a: SupernodeId, b: SupernodeId) -> u32 {
        bfs(self, a.index())[b.index()]
    }
}

impl Graph for Lattice {
    fn node_count(&self) -> usize {
        self.supernode_count()
    }

    fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.neighbor_row(SupernodeId(u as u32)).iter().map(|&v| v as usize)
    }
}

/// Square `m × m` torus with one diagonal per cell, and its dual graph.
///
/// Dual sites are triangles, addressed as `(row, col)` with `col = 2c + t` for
/// square `(row, c)` and triangle `t` (0 = below the diagonal, 1 = above).
#[derive(Clone, Debug)]
pub struct ToyLattice2D {
    m: usize,
    /// Three dual neighbours per site, one per triangle edge.
    dual: Vec<[usize; 3]>,
    bits: Vec<u8>,
}

pub fn build_toy_2d(m: usize) -> Result<ToyLattice2D, LatticeError> {
    ToyLattice2D::new(m)
}

impl ToyLattice2D {
    pub fn new(m: usize) -> Result<Self, LatticeError> {
        if m < 3 {
            return Err(LatticeError::ToyTooSmall(m));
        }
        let vertex = |r: usize, c: usize| (r % m) * m + (c % m);
        let mut triangles = Vec::with_capacity(2 * m * m);
        for r in 0..m {
            for c in 0..m {
                // Diagonal from (r, c) to (r+1, c+1) in every cell.
                triangles.push([vertex(r, c), vertex(r + 1, c), vertex(r + 1, c + 1)]);
                triangles.push([vertex(r, c), vertex(r, c + 1), vertex(r + 1, c + 1)]);
            }
        }
        let mut by_edge: std::collections::BTreeMap<(usize, usize), Vec<usize>> = Default::default();
        for (t, tri) in triangles.iter().enumerate() {
            for (a, b) in [(tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])] {
                by_edge.entry((a.min(b), a.max(b))).or_default().push(t);
            }
        }
        let mut dual = vec![[usize::MAX; 3]; triangles.len()];
        let mut fill = vec![0usize; triangles.len()];
        for sites in by_edge.values() {
            debug_assert_eq!(sites.len(), 2);
            let (a, b) = (sites[0], sites[1]);
            dual[a][fill[a]] = b;
            fill[a] += 1;
            dual[b][fill[b]] = a;
            fill[b] += 1;
        }
        let cols = 2 * m;
        let bits = (0..triangles.len()).map(|s| (((s / cols) + (s % cols)) % 2) as u8).collect();
        Ok(ToyLattice2D { m, dual, bits })
    }

    pub fn side(&self) -> usize {
        self.m
    }

    pub fn site_count(&self) -> usize {
        self.dual.len()
    }

    pub fn site(&self, row: usize, col: usize) -> usize {
        row * 2 * self.m + col
    }

    pub fn row_col(&self, site: usize) -> (usize, usize) {
        (site / (2 * self.m), site % (2 * self.m))
    }

    pub fn dual_neighbors(&self, site: usize) -> &[usize; 3] {
        &self.dual[site]
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn bit(&self, site: usize) -> u8 {
        self.bits[site]
    }

    /// Copy with the listed sites' bits inverted.
    pub fn with_defects(&self, defects: &[usize]) -> ToyLattice2D {
        let mut out = self.clone();
        for &d in defects {
            out.bits[d] ^= 1;
        }
        out
    }
}

impl Graph for ToyLattice2D {
    fn node_count(&self) -> usize {
        self.site_count()
    }

    fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.dual[u].iter().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::in_d4;
    use crate::graph::bfs;

    fn lattice(n: u32) -> Lattice {
        Lattice::build(TorusShape::new(n), Variant::F4, LatticeOptions { multigraph: n < 3 }).unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(build_lattice(TorusShape::new(3)).unwrap().supernode_count(), 162);
        assert_eq!(lattice(1).supernode_count(), 2);
        assert_eq!(build_lattice(TorusShape::new(1)).unwrap_err(), LatticeError::TooSmall(1));
        assert_eq!(build_lattice(TorusShape::new(2)).unwrap_err(), LatticeError::TooSmall(2));
        assert!(Lattice::build(TorusShape::new(0), Variant::F4, LatticeOptions { multigraph: true }).is_err());
        for n in 1..=5 {
            assert_eq!(lattice(n).supernode_count(), 2 * (n as usize).pow(4));
        }
    }

    #[test]
    fn codec_round_trips() {
        let lat = lattice(3);
        for id in 0..lat.supernode_count() as u32 {
            let c = lat.coord(SupernodeId(id));
            let lift = Vec4(c.0.map(|x| x as i64));
            assert!(in_d4(&lift));
            assert_eq!(lat.id(c), SupernodeId(id));
            assert_eq!(lat.try_id(c), Ok(SupernodeId(id)));
        }
        assert!(lat.try_id(SupernodeCoord([1, 0, 0, 0])).is_err());
        assert!(lat.try_id(SupernodeCoord([6, 0, 0, 0])).is_err());
    }

    #[test]
    fn neighbor_examples() {
        let lat = lattice(3);
        let origin = lat.id(SupernodeCoord([0; 4]));
        let plus = lat.variant().slot_of(1).unwrap();
        let minus = lat.variant().slot_of(25).unwrap();
        assert_eq!(lat.direction(plus), Vec4::new(2, 0, 0, 0));
        assert_eq!(lat.coord(lat.neighbor(origin, plus)), SupernodeCoord([2, 0, 0, 0]));
        assert_eq!(lat.coord(lat.neighbor(origin, minus)), SupernodeCoord([4, 0, 0, 0]));
        assert_eq!(lat.degree(), 48);
        for id in 0..lat.supernode_count() as u32 {
            for slot in 0..48 {
                let there = lat.neighbor(SupernodeId(id), slot);
                assert_eq!(lat.neighbor(there, lat.opposite_slot(slot)), SupernodeId(id));
            }
        }
    }

    #[test]
    fn neighbor_is_a_permutation_per_direction() {
        let lat = lattice(3);
        for slot in 0..lat.degree() {
            let mut hit = vec![false; lat.supernode_count()];
            for id in 0..lat.supernode_count() as u32 {
                let t = lat.neighbor(SupernodeId(id), slot).index();
                assert!(!hit[t]);
                hit[t] = true;
            }
        }
    }

    #[test]
    fn word_distance_examples() {
        let lat = lattice(4);
        let o = lat.id(SupernodeCoord([0; 4]));
        assert_eq!(lat.word_distance(o, o), 0);
        assert_eq!(lat.word_distance(o, lat.neighbor(o, 5)), 1);
        assert_eq!(lat.word_distance(o, lat.id(SupernodeCoord([4, 0, 0, 0]))), 2);
    }

    #[test]
    fn word_distance_matches_brute_force() {
        // Oracle: explicit search over integer lifts of the torus, no neighbour table.
        let lat = lattice(3);
        let dirs: Vec<Vec4> = crate::geometry::first_shell()
            .vectors
            .into_iter()
            .chain(crate::geometry::second_shell().vectors)
            .collect();
        let side = 6i64;
        let wrap = |v: Vec4| Vec4(v.0.map(|c| c.rem_euclid(side)));
        let mut dist = std::collections::HashMap::new();
        let mut frontier = vec![Vec4::ZERO];
        dist.insert(Vec4::ZERO, 0u32);
        let mut r = 0;
        while !frontier.is_empty() {
            r += 1;
            let mut next = Vec::new();
            for v in frontier {
                for d in &dirs {
                    let w = wrap(v + *d);
                    if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(w) {
                        e.insert(r);
                        next.push(w);
                    }
                }
            }
            frontier = next;
        }
        let field = bfs(&lat, 0);
        assert_eq!(dist.len(), lat.supernode_count());
        for (v, d) in dist {
            let id = lat.id(SupernodeCoord(v.0.map(|c| c as u32)));
            assert_eq!(field[id.index()], d, "at {v}");
        }
    }

    #[test]
    fn vertex_transitive_ball_growth() {
        let lat = lattice(4);
        let profile = |s: usize| {
            let mut d = bfs(&lat, s);
            d.sort_unstable();
            d
        };
        let base = profile(0);
        for s in [1, 77, 300, lat.supernode_count() - 1] {
            assert_eq!(profile(s), base);
        }
    }

    #[test]
    fn d4_lattice_uses_first_shell_only() {
        let lat = Lattice::build(TorusShape::new(3), Variant::D4, LatticeOptions::default()).unwrap();
        assert_eq!(lat.degree(), 24);
        assert!((0..24).all(|s| lat.direction(s).norm2() == 4));
    }

    #[test]
    fn toy_2d() {
        let toy = build_toy_2d(3).unwrap();
        assert_eq!(toy.site_count(), 18);
        assert!(build_toy_2d(2).is_err());
        let toy = build_toy_2d(6).unwrap();
        assert_eq!(toy.site_count(), 72);
        for s in 0..toy.site_count() {
            let n = toy.dual_neighbors(s);
            assert!(n.iter().all(|&x| x != s && x < toy.site_count()));
            assert!(n[0] != n[1] && n[1] != n[2] && n[0] != n[2]);
            for &x in n {
                assert!(toy.dual_neighbors(x).contains(&s));
            }
        }
        // alternating along every row
        for r in 0..6 {
            for c in 0..11 {
                assert_ne!(toy.bit(toy.site(r, c)), toy.bit(toy.site(r, c + 1)));
            }
        }
    }
}
