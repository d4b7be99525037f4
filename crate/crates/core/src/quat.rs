//! Exact quaternion arithmetic over the ring `Q(√2) = { a + b√2 : a, b ∈ Q }`.
//!
//! Every holonomy generator used by the supernode (rotations by 2π/3 and 2π/6
//! about `u = (i+j+k)/√3`, quarter turns about `i` and `j`, and the eighth turn
//! about `i`) has components in this ring once the `1/√3` in `u` cancels against
//! `sin(π/3) = √3/2`. So `u` itself is never stored; only the five precomposed
//! generators are.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::QuatError;

/// A number `rat + rad·√2` with arbitrary-precision rational parts.
///
/// `BigRational` keeps both parts in lowest terms with a positive denominator,
/// and since √2 is irrational the pair is a unique representation, so derived
/// equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ExactScalar {
    rat: BigRational,
    rad: BigRational,
}

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl ExactScalar {
    pub fn new(rat: BigRational, rad: BigRational) -> Self {
        ExactScalar { rat, rad }
    }

    /// `num/den + 0·√2`.
    pub fn rational(num: i64, den: i64) -> Self {
        ExactScalar::new(ratio(num, den), BigRational::zero())
    }

    /// `0 + (num/den)·√2`.
    pub fn surd(num: i64, den: i64) -> Self {
        ExactScalar::new(BigRational::zero(), ratio(num, den))
    }

    pub fn integer(n: i64) -> Self {
        ExactScalar::rational(n, 1)
    }

    pub fn sqrt2() -> Self {
        ExactScalar::surd(1, 1)
    }

    pub fn rat_part(&self) -> &BigRational {
        &self.rat
    }

    pub fn rad_part(&self) -> &BigRational {
        &self.rad
    }

    pub fn is_rational(&self) -> bool {
        self.rad.is_zero()
    }

    /// The value as an `i64` when it is an exact integer.
    pub fn to_integer(&self) -> Option<i64> {
        if self.is_rational() && self.rat.is_integer() {
            self.rat.to_integer().to_i64()
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        // Parts never carry large numerators here; f64 conversion of the
        // ratio is exact enough for export and metric use.
        let r = self.rat.to_f64().unwrap_or(f64::NAN);
        let s = self.rad.to_f64().unwrap_or(f64::NAN);
        r + s * std::f64::consts::SQRT_2
    }

    /// Sign of the real number, computed exactly.
    pub fn signum(&self) -> i32 {
        let a = &self.rat;
        let b = &self.rad;
        let sa = sign_of(a);
        let sb = sign_of(b);
        if sa == 0 {
            return sb;
        }
        if sb == 0 || sa == sb {
            return sa;
        }
        // Opposite signs: compare a² against 2b².
        let a2 = a * a;
        let b2 = b * b * BigRational::from_integer(BigInt::from(2));
        if a2 > b2 {
            sa
        } else if a2 < b2 {
            sb
        } else {
            0
        }
    }
}

fn sign_of(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl Zero for ExactScalar {
    fn zero() -> Self {
        ExactScalar::default()
    }
    fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.rad.is_zero()
    }
}

impl One for ExactScalar {
    fn one() -> Self {
        ExactScalar::integer(1)
    }
}

impl<'a> Add<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn add(self, o: &ExactScalar) -> ExactScalar {
        ExactScalar::new(&self.rat + &o.rat, &self.rad + &o.rad)
    }
}

impl<'a> Sub<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn sub(self, o: &ExactScalar) -> ExactScalar {
        ExactScalar::new(&self.rat - &o.rat, &self.rad - &o.rad)
    }
}

impl<'a> Mul<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn mul(self, o: &ExactScalar) -> ExactScalar {
        // (a + b√2)(c + d√2) = (ac + 2bd) + (ad + bc)√2
        let two = BigRational::from_integer(BigInt::from(2));
        let rat = &self.rat * &o.rat + &self.rad * &o.rad * two;
        let rad = &self.rat * &o.rad + &self.rad * &o.rat;
        ExactScalar::new(rat, rad)
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::new(-&self.rat, -&self.rad)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, o: ExactScalar) -> ExactScalar {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

fn fmt_ratio(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for ExactScalar {
    /// `p/q`, `p/q·√2`, or `p/q + r/s·√2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rat.is_zero(), self.rad.is_zero()) {
            (_, true) => write!(f, "{}", fmt_ratio(&self.rat)),
            (true, false) => write!(f, "{}·√2", fmt_ratio(&self.rad)),
            (false, false) => {
                let sign = if self.rad.is_negative() { '-' } else { '+' };
                write!(f, "{} {} {}·√2", fmt_ratio(&self.rat), sign, fmt_ratio(&self.rad.abs()))
            }
        }
    }
}

/// Quaternion `w + x·i + y·j + z·k` with exact components.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ExactQuaternion {
    pub w: ExactScalar,
    pub x: ExactScalar,
    pub y: ExactScalar,
    pub z: ExactScalar,
}

impl ExactQuaternion {
    pub fn new(w: ExactScalar, x: ExactScalar, y: ExactScalar, z: ExactScalar) -> Self {
        ExactQuaternion { w, x, y, z }
    }

    /// Rational quaternion from `(numerator, denominator)` pairs.
    pub fn from_ratios(c: [(i64, i64); 4]) -> Self {
        let [w, x, y, z] = c.map(|(n, d)| ExactScalar::rational(n, d));
        ExactQuaternion::new(w, x, y, z)
    }

    pub fn from_integers(c: [i64; 4]) -> Self {
        ExactQuaternion::from_ratios(c.map(|n| (n, 1)))
    }

    pub fn one() -> Self {
        ExactQuaternion::from_integers([1, 0, 0, 0])
    }
    pub fn i() -> Self {
        ExactQuaternion::from_integers([0, 1, 0, 0])
    }
    pub fn j() -> Self {
        ExactQuaternion::from_integers([0, 0, 1, 0])
    }
    pub fn k() -> Self {
        ExactQuaternion::from_integers([0, 0, 0, 1])
    }

    pub fn components(&self) -> [&ExactScalar; 4] {
        [&self.w, &self.x, &self.y, &self.z]
    }

    /// Hamilton product `self · o`.
    pub fn mul(&self, o: &ExactQuaternion) -> ExactQuaternion {
        let (a, b) = (self, o);
        let w = &(&(&a.w * &b.w) - &(&a.x * &b.x)) - &(&(&a.y * &b.y) + &(&a.z * &b.z));
        let x = &(&(&a.w * &b.x) + &(&a.x * &b.w)) + &(&(&a.y * &b.z) - &(&a.z * &b.y));
        let y = &(&(&a.w * &b.y) - &(&a.x * &b.z)) + &(&(&a.y * &b.w) + &(&a.z * &b.x));
        let z = &(&(&a.w * &b.z) + &(&a.x * &b.y)) + &(&(&a.z * &b.w) - &(&a.y * &b.x));
        ExactQuaternion::new(w, x, y, z)
    }

    pub fn conj(&self) -> ExactQuaternion {
        ExactQuaternion::new(self.w.clone(), -&self.x, -&self.y, -&self.z)
    }

    pub fn neg(&self) -> ExactQuaternion {
        ExactQuaternion::new(-&self.w, -&self.x, -&self.y, -&self.z)
    }

    pub fn norm2(&self) -> ExactScalar {
        self.components()
            .iter()
            .fold(ExactScalar::zero(), |acc, c| &acc + &(*c * *c))
    }

    pub fn is_unit(&self) -> bool {
        self.norm2().is_one()
    }

    pub fn scale(&self, s: &ExactScalar) -> ExactQuaternion {
        ExactQuaternion::new(&self.w * s, &self.x * s, &self.y * s, &self.z * s)
    }

    /// `self^e` for a small non-negative exponent.
    pub fn pow(&self, e: u32) -> ExactQuaternion {
        (0..e).fold(ExactQuaternion::one(), |acc, _| acc.mul(self))
    }

    /// Lossy conversion, for exports and float metrics only.
    pub fn to_float(&self) -> [f64; 4] {
        self.components().map(ExactScalar::to_f64)
    }

    /// Components as exact integers, if they all are.
    pub fn to_integers(&self) -> Option<[i64; 4]> {
        Some([
            self.w.to_integer()?,
            self.x.to_integer()?,
            self.y.to_integer()?,
            self.z.to_integer()?,
        ])
    }
}

impl fmt::Display for ExactQuaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.w, self.x, self.y, self.z)
    }
}

/// The five fixed group elements the supernode tree is labelled with.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    /// `exp(2π·u/3) = (−1/2, 1/2, 1/2, 1/2)`
    pub r120: ExactQuaternion,
    /// `exp(2π·u/6) = (1/2, 1/2, 1/2, 1/2)`
    pub r60: ExactQuaternion,
    /// `exp(2π·i/4) = i`
    pub qi: ExactQuaternion,
    /// `exp(2π·j/4) = j`
    pub qj: ExactQuaternion,
    /// `exp(2π·i/8) = (√2/2, √2/2, 0, 0)`
    pub e8th: ExactQuaternion,
}

impl GeneratorSet {
    pub fn new() -> Self {
        GeneratorSet {
            r120: ExactQuaternion::from_ratios([(-1, 2), (1, 2), (1, 2), (1, 2)]),
            r60: ExactQuaternion::from_ratios([(1, 2), (1, 2), (1, 2), (1, 2)]),
            qi: ExactQuaternion::i(),
            qj: ExactQuaternion::j(),
            e8th: ExactQuaternion::new(
                ExactScalar::surd(1, 2),
                ExactScalar::surd(1, 2),
                ExactScalar::zero(),
                ExactScalar::zero(),
            ),
        }
    }

    pub fn all(&self) -> [&ExactQuaternion; 5] {
        [&self.r120, &self.r60, &self.qi, &self.qj, &self.e8th]
    }
}

impl Default for GeneratorSet {
    fn default() -> Self {
        GeneratorSet::new()
    }
}

/// Symbolic name for a rotation axis, when it is one of the special ones.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisTag {
    /// Rotation by 0 or a half turn about nothing in particular (`±1`).
    Undefined,
    U,
    MinusU,
    I,
    MinusI,
    J,
    MinusJ,
    K,
    MinusK,
    General,
}

impl AxisTag {
    pub fn as_str(self) -> &'static str {
        match self {
            AxisTag::Undefined => "-",
            AxisTag::U => "u",
            AxisTag::MinusU => "-u",
            AxisTag::I => "i",
            AxisTag::MinusI => "-i",
            AxisTag::J => "j",
            AxisTag::MinusJ => "-j",
            AxisTag::K => "k",
            AxisTag::MinusK => "-k",
            AxisTag::General => "general",
        }
    }
}

/// `q = exp(2π·omega·axis)` with `omega` a fraction of a full turn.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisAngle {
    pub omega: Ratio<i64>,
    /// Unit axis; all zeros when `tag` is `Undefined`.
    pub axis: [f64; 3],
    pub tag: AxisTag,
}

impl AxisAngle {
    /// Rebuild the quaternion in floating point.
    pub fn recompose(&self) -> [f64; 4] {
        let theta = 2.0 * std::f64::consts::PI * (*self.omega.numer() as f64) / (*self.omega.denom() as f64);
        let (s, c) = theta.sin_cos();
        [c, s * self.axis[0], s * self.axis[1], s * self.axis[2]]
    }
}

/// Turn fractions in `[0, 1/2]` whose cosine lies in `Q(√2)`.
fn angle_table() -> [(Ratio<i64>, ExactScalar); 7] {
    [
        (Ratio::new(0, 1), ExactScalar::integer(1)),
        (Ratio::new(1, 8), ExactScalar::surd(1, 2)),
        (Ratio::new(1, 6), ExactScalar::rational(1, 2)),
        (Ratio::new(1, 4), ExactScalar::zero()),
        (Ratio::new(1, 3), ExactScalar::rational(-1, 2)),
        (Ratio::new(3, 8), ExactScalar::surd(-1, 2)),
        (Ratio::new(1, 2), ExactScalar::integer(-1)),
    ]
}

fn axis_tag(q: &ExactQuaternion) -> AxisTag {
    let v = [&q.x, &q.y, &q.z];
    let nonzero: Vec<usize> = (0..3).filter(|&i| !v[i].is_zero()).collect();
    match nonzero.as_slice() {
        [] => AxisTag::Undefined,
        [i] => {
            let neg = v[*i].signum() < 0;
            match (i, neg) {
                (0, false) => AxisTag::I,
                (0, true) => AxisTag::MinusI,
                (1, false) => AxisTag::J,
                (1, true) => AxisTag::MinusJ,
                (_, false) => AxisTag::K,
                (_, true) => AxisTag::MinusK,
            }
        }
        [_, _, _] if q.x == q.y && q.y == q.z => {
            if q.x.signum() > 0 {
                AxisTag::U
            } else {
                AxisTag::MinusU
            }
        }
        _ => AxisTag::General,
    }
}

/// Decompose a unit quaternion as `exp(2π·omega·axis)` with `omega ∈ [0, 1/2]`.
///
/// Only angles whose cosine lies in the scalar ring are representable; that
/// covers every holonomy the supernode produces.
pub fn axis_angle(q: &ExactQuaternion) -> Result<AxisAngle, QuatError> {
    if !q.is_unit() {
        return Err(QuatError::NotUnit(q.to_string()));
    }
    let omega = angle_table()
        .into_iter()
        .find(|(_, cos)| *cos == q.w)
        .map(|(omega, _)| omega)
        .ok_or_else(|| QuatError::UnrepresentableAngle(q.w.to_string()))?;
    let tag = axis_tag(q);
    let axis = if tag == AxisTag::Undefined {
        [0.0; 3]
    } else {
        let [_, x, y, z] = q.to_float();
        let len = (x * x + y * y + z * z).sqrt();
        [x / len, y / len, z / len]
    };
    Ok(AxisAngle { omega, axis, tag })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(c: [(i64, i64); 4]) -> ExactQuaternion {
        ExactQuaternion::from_ratios(c)
    }

    #[test]
    fn basis_products() {
        let (i, j, k) = (ExactQuaternion::i(), ExactQuaternion::j(), ExactQuaternion::k());
        assert_eq!(i.mul(&j), k);
        assert_eq!(j.mul(&i), k.neg());
        assert_eq!(i.mul(&i), ExactQuaternion::one().neg());
    }

    #[test]
    fn r120_has_order_three() {
        let g = GeneratorSet::new();
        assert_eq!(g.r120.pow(3), ExactQuaternion::one());
        assert_ne!(g.r120.pow(2), ExactQuaternion::one());
    }

    #[test]
    fn eighth_turn_squares_to_i() {
        // ((√2/2)(1+i))² = (1/2)(1+i)² = i
        let g = GeneratorSet::new();
        assert_eq!(g.e8th.mul(&g.e8th), ExactQuaternion::i());
    }

    #[test]
    fn conj_norm_examples() {
        let g = GeneratorSet::new();
        assert_eq!(ExactQuaternion::i().conj(), ExactQuaternion::i().neg());
        assert_eq!(g.e8th.norm2(), ExactScalar::integer(1));
        assert_eq!(ExactQuaternion::from_integers([1, 1, 1, 1]).norm2(), ExactScalar::integer(4));
    }

    #[test]
    fn generators_are_unit_with_exact_components() {
        let g = GeneratorSet::new();
        for gen in g.all() {
            assert!(gen.is_unit(), "{gen}");
        }
        assert_eq!(g.r120, q([(-1, 2), (1, 2), (1, 2), (1, 2)]));
        assert_eq!(g.r60, q([(1, 2), (1, 2), (1, 2), (1, 2)]));
        assert_eq!(g.e8th.to_string(), "(1/2·√2, 1/2·√2, 0, 0)");
        assert_eq!(g.r60.mul(&g.r60), g.r120);
    }

    #[test]
    fn axis_angle_examples() {
        let one = axis_angle(&ExactQuaternion::one()).unwrap();
        assert_eq!(one.omega, Ratio::new(0, 1));
        assert_eq!(one.tag, AxisTag::Undefined);

        let j = axis_angle(&ExactQuaternion::j()).unwrap();
        assert_eq!(j.omega, Ratio::new(1, 4));
        assert_eq!(j.tag, AxisTag::J);

        let r60 = axis_angle(&GeneratorSet::new().r60).unwrap();
        assert_eq!(r60.omega, Ratio::new(1, 6));
        assert_eq!(r60.tag, AxisTag::U);

        let minus = axis_angle(&ExactQuaternion::one().neg()).unwrap();
        assert_eq!(minus.omega, Ratio::new(1, 2));
        assert_eq!(minus.tag, AxisTag::Undefined);
    }

    #[test]
    fn axis_angle_recomposes() {
        let g = GeneratorSet::new();
        let samples = [g.r120.clone(), g.r60.clone(), g.e8th.clone(), g.r120.mul(&g.e8th), g.qj.mul(&g.r60)];
        for s in samples {
            let aa = axis_angle(&s).unwrap();
            let back = aa.recompose();
            let f = s.to_float();
            for c in 0..4 {
                assert!((back[c] - f[c]).abs() < 1e-12, "{s}: {back:?} vs {f:?}");
            }
        }
    }

    #[test]
    fn axis_angle_rejects_non_unit() {
        let two = ExactQuaternion::from_integers([2, 0, 0, 0]);
        assert!(matches!(axis_angle(&two), Err(QuatError::NotUnit(_))));
    }

    #[test]
    fn signum_is_exact() {
        assert_eq!(ExactScalar::new(ratio(3, 2), ratio(-1, 1)).signum(), 1); // 1.5 - 1.414
        assert_eq!(ExactScalar::new(ratio(7, 5), ratio(-1, 1)).signum(), -1); // 1.4 - 1.414
        assert_eq!(ExactScalar::zero().signum(), 0);
    }

    fn scalar() -> impl Strategy<Value = ExactScalar> {
        (-50i64..50, 1i64..12, -50i64..50, 1i64..12)
            .prop_map(|(a, b, c, d)| ExactScalar::new(ratio(a, b), ratio(c, d)))
    }

    fn quaternion() -> impl Strategy<Value = ExactQuaternion> {
        (scalar(), scalar(), scalar(), scalar()).prop_map(|(w, x, y, z)| ExactQuaternion::new(w, x, y, z))
    }

    proptest! {
        #[test]
        fn scalar_ring_laws(a in scalar(), b in scalar(), c in scalar()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
        }

        #[test]
        fn norm_is_multiplicative(a in quaternion(), b in quaternion()) {
            prop_assert_eq!(a.mul(&b).norm2(), &a.norm2() * &b.norm2());
        }

        #[test]
        fn product_is_associative(a in quaternion(), b in quaternion(), c in quaternion()) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn conj_gives_norm(a in quaternion()) {
            let n = a.norm2();
            prop_assert_eq!(a.mul(&a.conj()), ExactQuaternion::new(n, ExactScalar::zero(), ExactScalar::zero(), ExactScalar::zero()));
        }
    }
}
