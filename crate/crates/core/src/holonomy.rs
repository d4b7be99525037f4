//! Leaf holonomies and the translation vectors they encode.
//!
//! The holonomy of leaf `K` is the ordered product of generators along the
//! root-to-leaf path:
//!
//! ```text
//! ζ(K) = R120^β · R60^b3 · QI^b2 · QJ^b1 · E8TH^b0,   β = 2·b5 + b4
//! ```
//!
//! Scaling by 2 (when `b0 = 0`) or by 2√2 (when `b0 = 1`) turns `ζ(K)` into an
//! integer 4-vector: a first-shell neighbour direction or a dual-shell one. The
//! 48 leaves cover both shells exactly once, which is what lets the leaf label
//! alone say where a super-link goes.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::HolonomyError;
use crate::geometry::{first_shell, second_shell, Vec4};
use crate::quat::{axis_angle, AxisTag, ExactQuaternion, ExactScalar, GeneratorSet};
use crate::supernode::{leaf_code, LeafCode};

#[derive(Clone, Debug)]
pub struct LeafHolonomy {
    pub code: LeafCode,
    pub zeta: ExactQuaternion,
    /// Fraction of a full turn, `ζ = exp(2π·omega·axis)`.
    pub omega: Ratio<i64>,
    pub axis: [f64; 3],
    pub axis_tag: AxisTag,
    /// Squared length of `direction`: 4 or 8.
    pub modulus2: i64,
    pub direction: Vec4,
}

fn compute_zeta(code: &LeafCode, g: &GeneratorSet) -> ExactQuaternion {
    g.r120
        .pow(code.branch as u32)
        .mul(&g.r60.pow(code.b3 as u32))
        .mul(&g.qi.pow(code.b2 as u32))
        .mul(&g.qj.pow(code.b1 as u32))
        .mul(&g.e8th.pow(code.b0 as u32))
}

fn compute_leaf(k: u32, g: &GeneratorSet) -> Result<LeafHolonomy, HolonomyError> {
    let code = leaf_code(k)?;
    let z = compute_zeta(&code, g);
    let scale = if code.b0 == 0 { ExactScalar::integer(2) } else { &ExactScalar::integer(2) * &ExactScalar::sqrt2() };
    let scaled = z.scale(&scale);
    let direction = scaled
        .to_integers()
        .map(Vec4)
        .ok_or_else(|| HolonomyError::NonIntegralDirection { leaf: k, value: scaled.to_string() })?;
    let aa = axis_angle(&z).map_err(|_| HolonomyError::NonIntegralDirection { leaf: k, value: z.to_string() })?;
    Ok(LeafHolonomy {
        code,
        modulus2: direction.norm2(),
        direction,
        zeta: z,
        omega: aa.omega,
        axis: aa.axis,
        axis_tag: aa.tag,
    })
}

/// All 48 leaf holonomies, evaluated once.
///
/// Panics if any scaled holonomy is non-integral: that would mean the generator
/// conventions are wrong, and no lattice or network built on them is valid.
pub fn leaf_table() -> &'static [LeafHolonomy] {
    static TABLE: OnceLock<Vec<LeafHolonomy>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let g = GeneratorSet::new();
        (1..=48)
            .map(|k| compute_leaf(k, &g).unwrap_or_else(|e| panic!("holonomy convention error: {e}")))
            .collect()
    })
}

pub fn holonomy(k: u32) -> Result<&'static LeafHolonomy, HolonomyError> {
    let code = leaf_code(k)?;
    Ok(&leaf_table()[code.index() as usize])
}

pub fn zeta(k: u32) -> Result<ExactQuaternion, HolonomyError> {
    Ok(holonomy(k)?.zeta.clone())
}

pub fn leaf_direction(k: u32) -> Result<Vec4, HolonomyError> {
    Ok(holonomy(k)?.direction)
}

/// Leaf directions equal the union of the two shells with no repeats, and
/// `b0 = 0` leaves land on the first shell while `b0 = 1` leaves land on the second.
pub fn direction_bijection_check() -> bool {
    let (first, second) = (first_shell(), second_shell());
    let mut seen = BTreeSet::new();
    for h in leaf_table() {
        let shell = if h.code.b0 == 0 { &first } else { &second };
        if !shell.contains(&h.direction) || !seen.insert(h.direction) {
            return false;
        }
    }
    let union: BTreeSet<Vec4> = first.as_set().union(&second.as_set()).copied().collect();
    seen == union
}

/// Like [`direction_bijection_check`] but as a gate.
pub fn ensure_bijection() -> Result<(), HolonomyError> {
    if direction_bijection_check() {
        Ok(())
    } else {
        Err(HolonomyError::BijectionFailed)
    }
}

/// The leaf whose direction is the negation of leaf `k`'s.
pub fn opposite_leaf(k: u32) -> Result<u32, HolonomyError> {
    static OPP: OnceLock<Vec<u32>> = OnceLock::new();
    let code = leaf_code(k)?;
    let table = OPP.get_or_init(|| {
        let dirs: Vec<Vec4> = leaf_table().iter().map(|h| h.direction).collect();
        dirs.iter()
            .map(|d| dirs.iter().position(|e| *e == -*d).expect("shells are centrosymmetric") as u32 + 1)
            .collect()
    });
    Ok(table[code.index() as usize])
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub k: u32,
    /// `w, x, y, z` rendered exactly.
    pub zeta: [String; 4],
    pub omega: String,
    pub axis: &'static str,
    pub modulus2: i64,
    pub direction: [i64; 4],
}

/// The 48-row holonomy table with exact entries.
pub fn regenerate_table() -> Vec<TableRow> {
    leaf_table()
        .iter()
        .map(|h| TableRow {
            k: h.code.k,
            zeta: h.zeta.components().map(|c| c.to_string()),
            omega: if h.omega.is_integer() { h.omega.numer().to_string() } else { h.omega.to_string() },
            axis: h.axis_tag.as_str(),
            modulus2: h.modulus2,
            direction: h.direction.0,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn quat(c: [(i64, i64); 4]) -> ExactQuaternion {
        ExactQuaternion::from_ratios(c)
    }

    #[test]
    fn table_anchor_rows() {
        assert_eq!(zeta(1).unwrap(), ExactQuaternion::one());
        assert_eq!(holonomy(1).unwrap().omega, Ratio::new(0, 1));
        assert_eq!(zeta(3).unwrap(), ExactQuaternion::j());
        assert_eq!(zeta(25).unwrap(), ExactQuaternion::one().neg());
        assert_eq!(zeta(27).unwrap(), ExactQuaternion::j().neg());
    }

    #[test]
    fn direction_examples() {
        assert_eq!(leaf_direction(1).unwrap(), Vec4::new(2, 0, 0, 0));
        assert_eq!(leaf_direction(2).unwrap(), Vec4::new(2, 2, 0, 0));
        assert_eq!(leaf_direction(25).unwrap(), Vec4::new(-2, 0, 0, 0));
        assert!(leaf_direction(0).is_err());
    }

    #[test]
    fn bijection_oracle() {
        // Independent of direction_bijection_check: brute-force against both shells.
        let first = first_shell();
        let second = second_shell();
        let dirs: Vec<(u8, Vec4)> = (1..=48).map(|k| (leaf_code(k).unwrap().b0, leaf_direction(k).unwrap())).collect();
        let evens: BTreeSet<Vec4> = dirs.iter().filter(|(b, _)| *b == 0).map(|(_, d)| *d).collect();
        let odds: BTreeSet<Vec4> = dirs.iter().filter(|(b, _)| *b == 1).map(|(_, d)| *d).collect();
        assert_eq!(evens, first.as_set());
        assert_eq!(odds, second.as_set());
        assert!(direction_bijection_check());
    }

    #[test]
    fn even_leaves_form_the_unit_hurwitz_group() {
        let group: Vec<ExactQuaternion> =
            leaf_table().iter().filter(|h| h.code.b0 == 0).map(|h| h.zeta.clone()).collect();
        assert_eq!(group.len(), 24);
        let set: std::collections::HashSet<_> = group.iter().cloned().collect();
        assert_eq!(set.len(), 24);
        for a in &group {
            for b in &group {
                assert!(set.contains(&a.mul(b)), "{a} * {b} escapes");
            }
        }
        // Hurwitz: all-integer or all-half-odd-integer components.
        let half = ExactScalar::rational(1, 2);
        for q in &group {
            let all_int = q.components().iter().all(|c| c.to_integer().is_some());
            let all_half = q.components().iter().all(|c| {
                let d = &(*c).clone() - &half;
                d.to_integer().is_some()
            });
            assert!(all_int || all_half, "{q}");
        }
    }

    #[test]
    fn holonomies_are_unit_and_omega_has_small_denominator() {
        for h in leaf_table() {
            assert!(h.zeta.is_unit());
            assert_eq!(24 % h.omega.denom(), 0, "K={} omega={}", h.code.k, h.omega);
            assert!(h.modulus2 == 4 || h.modulus2 == 8);
            assert_eq!(h.modulus2, if h.code.b0 == 0 { 4 } else { 8 });
        }
    }

    #[test]
    fn opposite_examples() {
        assert_eq!(opposite_leaf(1).unwrap(), 25);
        for k in 1..=48 {
            let o = opposite_leaf(k).unwrap();
            assert_ne!(o, k);
            assert_eq!(opposite_leaf(o).unwrap(), k);
            assert_eq!(leaf_direction(o).unwrap(), -leaf_direction(k).unwrap());
        }
    }

    #[test]
    fn factor_order_is_left_to_right() {
        // m = 30: β = 1, b3 = 1, b2 = 1, b1 = 1: (−1)·i·j = −k.
        assert_eq!(zeta(31).unwrap(), ExactQuaternion::k().neg());
        // m = 6 (b2 = b1 = 1): i·j = k, whereas j·i would give −k.
        assert_eq!(zeta(7).unwrap(), ExactQuaternion::k());
        // m = 8: R60 alone.
        assert_eq!(zeta(9).unwrap(), quat([(1, 2), (1, 2), (1, 2), (1, 2)]));
    }

    #[test]
    fn table_rows() {
        let t = regenerate_table();
        assert_eq!(t.len(), 48);
        assert_eq!(t[0].zeta, ["1", "0", "0", "0"].map(String::from));
        assert_eq!(t[0].omega, "0");
        assert_eq!(t[2].zeta, ["0", "0", "1", "0"].map(String::from));
        assert_eq!(t[26].zeta, ["0", "0", "-1", "0"].map(String::from));
        assert_eq!(t[1].zeta, ["1/2·√2", "1/2·√2", "0", "0"].map(String::from));
        assert_eq!(t[1].omega, "1/8");
        assert!(leaf_table().iter().all(|h| !h.zeta.norm2().is_zero()));
    }
}
