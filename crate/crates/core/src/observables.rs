//! Emergent geometry read off the graph: hop distances, ball growth, geodesic
//! deflection around bit defects, and the Gram matrix of active leaf directions.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio, Rational64};
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::graph::{bfs, bfs_multi, Graph, UNREACHED};
use crate::holonomy::leaf_direction;
use crate::lattice::{Lattice, SupernodeId, ToyLattice2D};
use crate::network::SpinNetwork;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceField {
    pub source: usize,
    pub dist: Vec<u32>,
}

impl DistanceField {
    pub fn get(&self, v: usize) -> Option<u32> {
        match self.dist[v] {
            UNREACHED => None,
            d => Some(d),
        }
    }

    /// Node counts per distance, index = distance.
    pub fn histogram(&self) -> Vec<u64> {
        let max = self.dist.iter().filter(|&&d| d != UNREACHED).max().copied().unwrap_or(0);
        let mut h = vec![0u64; max as usize + 1];
        for &d in self.dist.iter().filter(|&&d| d != UNREACHED) {
            h[d as usize] += 1;
        }
        h
    }
}

/// Hop distances from `source`. Panics if `source` is not a node of `g`.
pub fn bfs_distance<G: Graph>(g: &G, source: usize) -> DistanceField {
    assert!(source < g.node_count(), "source {source} out of range");
    DistanceField { source, dist: bfs(g, source) }
}

#[derive(Clone, Debug, Serialize)]
pub struct SphereGrowth {
    pub source: u32,
    /// `ball[r]` = sites within word distance `r`.
    pub ball: Vec<u64>,
    /// `shell[r]` = sites at exactly `r`.
    pub shell: Vec<u64>,
    pub fit_from: usize,
    pub fit_to: usize,
    /// Least-squares slope of ln ball(r) against ln r over the fit window.
    pub slope: Option<f64>,
}

/// Ball sizes around `source` up to `rmax`, with the log-log slope fitted over
/// `r ∈ [2, rmax]`.
pub fn sphere_growth(lattice: &Lattice, source: SupernodeId, rmax: usize) -> SphereGrowth {
    let field = bfs(lattice, source.index());
    let mut shell = vec![0u64; rmax + 1];
    for &d in &field {
        if (d as usize) <= rmax {
            shell[d as usize] += 1;
        }
    }
    let ball: Vec<u64> = shell
        .iter()
        .scan(0u64, |acc, &s| {
            *acc += s;
            Some(*acc)
        })
        .collect();
    let fit_from = 2;
    let points: Vec<(f64, f64)> =
        (fit_from..=rmax).map(|r| ((r as f64).ln(), (ball[r] as f64).ln())).collect();
    SphereGrowth { source: source.0, ball, shell, fit_from, fit_to: rmax, slope: fit_slope(&points) }
}

fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Distance in the bit-weighted dual metric, in half-hops.
///
/// Crossing the edge between sites `u` and `v` costs `2 + bit(u) + bit(v)`
/// half-hops: every hop is one unit, and passing into or out of a site that
/// carries a 1 costs an extra half. A flipped bit therefore stretches or
/// shrinks only the paths that run through its site.
pub fn weighted_distances(toy: &ToyLattice2D, source: usize) -> Vec<u64> {
    let mut dist = vec![u64::MAX; toy.site_count()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0;
    heap.push(Reverse((0u64, source)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &v in toy.dual_neighbors(u) {
            let nd = d + 2 + toy.bit(u) as u64 + toy.bit(v) as u64;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Reverse((nd, v)));
            }
        }
    }
    dist
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChangedPair {
    pub a: usize,
    pub b: usize,
    /// Half-hops.
    pub before: u64,
    pub after: u64,
}

impl ChangedPair {
    pub fn delta_hops(&self) -> Ratio<i64> {
        Ratio::new(self.after as i64 - self.before as i64, 2)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DeflectionReport {
    pub m: usize,
    pub defects: Vec<usize>,
    pub pairs_compared: usize,
    pub changed: Vec<ChangedPair>,
    /// Largest |Δd| in hops.
    pub max_abs_delta: Ratio<i64>,
    /// Largest hop distance from the defect set to the nearest site of a
    /// changed pair's pristine geodesic corridor; `None` with no changes.
    pub locality_radius: Option<u32>,
    /// Every pair whose corridor stays farther than the radius kept its distance.
    pub unchanged_beyond_radius: bool,
}

/// Compare every pair of toy sites before and after flipping the bits at
/// `defects`. Panics on an out-of-range defect index.
pub fn geodesic_deflection(toy: &ToyLattice2D, defects: &[usize]) -> DeflectionReport {
    let n = toy.site_count();
    assert!(defects.iter().all(|&d| d < n), "defect out of range");
    let bent = toy.with_defects(defects);
    let before: Vec<Vec<u64>> = (0..n).into_par_iter().map(|s| weighted_distances(toy, s)).collect();
    let after: Vec<Vec<u64>> = (0..n).into_par_iter().map(|s| weighted_distances(&bent, s)).collect();
    let from_defect = if defects.is_empty() { vec![UNREACHED; n] } else { bfs_multi(toy, defects.iter().copied()) };

    // Hop distance from the defects to the nearest site on some pristine geodesic a→b.
    let corridor = |a: usize, b: usize| -> u32 {
        (0..n)
            .filter(|&x| before[a][x] + before[x][b] == before[a][b])
            .map(|x| from_defect[x])
            .min()
            .unwrap_or(UNREACHED)
    };

    // Per source row: its changed pairs, and (corridor distance, changed) for every pair.
    type Row = (Vec<ChangedPair>, Vec<(u32, bool)>);
    let rows: Vec<Row> = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut changed = Vec::new();
            let mut reach = Vec::new();
            for b in a + 1..n {
                let c = corridor(a, b);
                let moved = before[a][b] != after[a][b];
                if moved {
                    changed.push(ChangedPair { a, b, before: before[a][b], after: after[a][b] });
                }
                reach.push((c, moved));
            }
            (changed, reach)
        })
        .collect();

    let changed: Vec<ChangedPair> = rows.iter().flat_map(|r| r.0.iter().cloned()).collect();
    let locality_radius = rows.iter().flat_map(|r| r.1.iter()).filter(|(_, moved)| *moved).map(|(c, _)| *c).max();
    let unchanged_beyond_radius = match locality_radius {
        None => changed.is_empty(),
        Some(r) => rows.iter().flat_map(|r| r.1.iter()).all(|&(c, moved)| c <= r || !moved),
    };
    let max_abs_delta = changed.iter().map(|c| c.delta_hops().abs()).max().unwrap_or_else(Ratio::zero);
    DeflectionReport {
        m: toy.side(),
        defects: defects.to_vec(),
        pairs_compared: n * (n - 1) / 2,
        changed,
        max_abs_delta,
        locality_radius,
        unchanged_beyond_radius,
    }
}

/// Symmetric 4×4 Gram matrix of leaf directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameGram(pub [[Rational64; 4]; 4]);

impl FrameGram {
    pub fn zero() -> Self {
        FrameGram([[Rational64::zero(); 4]; 4])
    }

    pub fn scalar(s: i64) -> Self {
        let mut g = Self::zero();
        for i in 0..4 {
            g.0[i][i] = Rational64::from_integer(s);
        }
        g
    }

    pub fn trace(&self) -> Rational64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    /// `max |G_ij − δ_ij·tr(G)/4|`.
    pub fn anisotropy(&self) -> Rational64 {
        let mean = self.trace() / 4;
        let mut worst = Rational64::zero();
        for i in 0..4 {
            for j in 0..4 {
                let d = (self.0[i][j] - if i == j { mean } else { Rational64::zero() }).abs();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_symmetric(&self) -> bool {
        (0..4).all(|i| (0..4).all(|j| self.0[i][j] == self.0[j][i]))
    }

    /// Every principal minor is non-negative.
    pub fn is_positive_semidefinite(&self) -> bool {
        let big = |r: Rational64| BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()));
        (1u32..16).all(|mask| {
            let idx: Vec<usize> = (0..4).filter(|i| mask & (1 << i) != 0).collect();
            let m: Vec<Vec<BigRational>> = idx.iter().map(|&i| idx.iter().map(|&j| big(self.0[i][j])).collect()).collect();
            !determinant(m).is_negative()
        })
    }

    pub fn to_f64(&self) -> [[f64; 4]; 4] {
        self.0.map(|row| row.map(|x| *x.numer() as f64 / *x.denom() as f64))
    }
}

fn determinant(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::from_integer(1.into());
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else { return BigRational::zero() };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let pivot = m[c][c].clone();
        det *= &pivot;
        for r in c + 1..n {
            let f = &m[r][c] / &pivot;
            let (top, rest) = m.split_at_mut(r);
            for (x, y) in rest[0][c..].iter_mut().zip(&top[c][c..]) {
                *x -= &f * y;
            }
        }
    }
    det
}

/// `Σ w_K · dir(K)·dir(K)ᵀ` over the 48 leaves, `weights[K−1] = w_K`.
pub fn emergent_frame_weighted(weights: &[Rational64]) -> FrameGram {
    let mut g = FrameGram::zero();
    for (i, w) in weights.iter().enumerate().filter(|(_, w)| !w.is_zero()) {
        let d = leaf_direction(i as u32 + 1).expect("weights cover leaves 1..=48").0;
        for a in 0..4 {
            for b in 0..4 {
                g.0[a][b] += *w * Rational64::from_integer(d[a] * d[b]);
            }
        }
    }
    g
}

/// Unit weight on each active leaf, `active[K−1]`.
pub fn emergent_frame(active: &[bool]) -> FrameGram {
    let w: Vec<Rational64> = active.iter().map(|&a| Rational64::from_integer(a as i64)).collect();
    emergent_frame_weighted(&w)
}

/// Frame of one supernode: leaves whose structure still matches the pristine one count.
pub fn supernode_frame(net: &SpinNetwork, supernode: u32) -> FrameGram {
    let lat = net.lattice();
    let mut active = vec![false; 48];
    for (ls, a) in net.active_leaves(supernode).into_iter().enumerate() {
        active[lat.leaf_label(ls) as usize - 1] = a;
    }
    emergent_frame(&active)
}

pub fn sphere_csv(s: &SphereGrowth) -> String {
    let mut out = String::from("radius,shell,ball\n");
    for (r, (sh, b)) in s.shell.iter().zip(&s.ball).enumerate() {
        let _ = writeln!(out, "{r},{sh},{b}");
    }
    out
}

pub fn deflection_csv(r: &DeflectionReport) -> String {
    let mut out = String::from("a,b,before_hops,after_hops,delta_hops\n");
    let h = |x: u64| Ratio::new(x as i64, 2);
    for c in &r.changed {
        let _ = writeln!(out, "{},{},{},{},{}", c.a, c.b, h(c.before), h(c.after), c.delta_hops());
    }
    out
}

/// One row per supernode: active leaf count, trace and anisotropy of its frame.
pub fn anisotropy_csv(net: &SpinNetwork) -> String {
    let rows: Vec<String> = (0..net.lattice().supernode_count() as u32)
        .into_par_iter()
        .map(|sn| {
            let g = supernode_frame(net, sn);
            let active = net.active_leaves(sn).iter().filter(|&&a| a).count();
            format!("{sn},{active},{},{}\n", g.trace(), g.anisotropy())
        })
        .collect();
    let mut out = String::from("supernode,active_leaves,trace,anisotropy\n");
    out.extend(rows);
    out
}
