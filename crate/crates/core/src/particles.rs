//! Electric and colour charge of 8-coordinate roots in the twisted e8 basis
//! `{ωL/4, W/4, B/4, ωR/4, k, y, m, c}`, and the blue-up-quark fixture.

use std::fmt;
use std::sync::OnceLock;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{NetworkError, ParticleError};
use crate::network::{FoamEvent, SpinNetwork};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Root8(pub [i64; 8]);

impl std::ops::Neg for Root8 {
    type Output = Root8;
    fn neg(self) -> Root8 {
        Root8(self.0.map(|x| -x))
    }
}

impl fmt::Display for Root8 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Electric charge, in lowest terms.
///
/// With `s = (o2 + o3)/2`: even `s` gives `(o2 + o3 + o5)/4 − (o6 + o7 + o8)/12`,
/// odd `s` gives `−(o3 + o4 + o5)/4 − (o6 + o7 + o8)/12`.
pub fn electric_charge(o: Root8) -> Result<Ratio<i64>, ParticleError> {
    let o = o.0;
    if (o[1] + o[2]).rem_euclid(2) != 0 {
        return Err(ParticleError::OddParity(o));
    }
    let s = (o[1] + o[2]) / 2;
    let gluonic = Ratio::new(o[5] + o[6] + o[7], 12);
    let higgsonic = if s.rem_euclid(2) == 0 { Ratio::new(o[1] + o[2] + o[4], 4) } else { Ratio::new(-(o[2] + o[3] + o[4]), 4) };
    Ok(higgsonic - gluonic)
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Color {
    #[serde(rename = "r")]
    Red,
    #[serde(rename = "g")]
    Green,
    #[serde(rename = "b")]
    Blue,
    #[serde(rename = "anti-r")]
    AntiRed,
    #[serde(rename = "anti-g")]
    AntiGreen,
    #[serde(rename = "anti-b")]
    AntiBlue,
}

impl Color {
    pub fn symbol(self) -> &'static str {
        match self {
            Color::Red => "r",
            Color::Green => "g",
            Color::Blue => "b",
            Color::AntiRed => "anti-r",
            Color::AntiGreen => "anti-g",
            Color::AntiBlue => "anti-b",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Color::Red => "red",
            Color::Green => "green",
            Color::Blue => "blue",
            Color::AntiRed => "anti-red",
            Color::AntiGreen => "anti-green",
            Color::AntiBlue => "anti-blue",
        }
    }

    pub fn anti(self) -> Color {
        match self {
            Color::Red => Color::AntiRed,
            Color::Green => Color::AntiGreen,
            Color::Blue => Color::AntiBlue,
            Color::AntiRed => Color::Red,
            Color::AntiGreen => Color::Green,
            Color::AntiBlue => Color::Blue,
        }
    }

    pub fn is_anti(self) -> bool {
        matches!(self, Color::AntiRed | Color::AntiGreen | Color::AntiBlue)
    }
}

/// `−y = b, −m = g, −c = r`: a negative entry carries the colour, a positive one
/// its anti-colour. Sorted.
pub fn color_charge(o: Root8) -> Vec<Color> {
    let mut out = Vec::new();
    for (x, c) in [(o.0[5], Color::Blue), (o.0[6], Color::Green), (o.0[7], Color::Red)] {
        match x.signum() {
            -1 => out.push(c),
            1 => out.push(c.anti()),
            _ => {}
        }
    }
    out.sort();
    out
}

pub fn format_colors(colors: &[Color]) -> String {
    if colors.is_empty() {
        "none".into()
    } else {
        colors.iter().map(|c| c.symbol()).collect::<Vec<_>>().join(",")
    }
}

fn signed(q: Ratio<i64>) -> String {
    if *q.numer() > 0 {
        format!("+{q}")
    } else {
        q.to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParticleRecord {
    pub root: Root8,
    pub charge: Ratio<i64>,
    pub colors: Vec<Color>,
    pub label: String,
    /// Set when the fixture's printed value disagrees with the formula.
    pub note: Option<String>,
    pub from_fixture: bool,
}

impl ParticleRecord {
    /// `"Up, blue, +2/3"`; anti-colours are implied by the label and omitted.
    pub fn summary(&self) -> String {
        let mut parts = vec![self.label.clone()];
        parts.extend(self.colors.iter().filter(|c| !c.is_anti()).map(|c| c.name().to_string()));
        parts.push(signed(self.charge));
        parts.join(", ")
    }
}

pub fn classify(o: Root8) -> Result<ParticleRecord, ParticleError> {
    let charge = electric_charge(o)?;
    let colors = color_charge(o);
    let row = fixture()?.roots.iter().find(|r| r.root == o);
    Ok(match row {
        Some(r) => ParticleRecord { root: o, charge, colors, label: r.label.clone(), note: r.note.clone(), from_fixture: true },
        None => ParticleRecord {
            root: o,
            label: format!("charge={}, colors={}", charge, format_colors(&colors)),
            charge,
            colors,
            note: None,
            from_fixture: false,
        },
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FixtureRow {
    pub root: Root8,
    pub label: String,
    pub expected_charge: String,
    pub expected_colors: Vec<Color>,
    #[serde(default)]
    pub note: Option<String>,
}

/// Leaf-pair inversions encoding one particle state on a single supernode.
/// Each entry names the plain leaf `K` of a sibling pair.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BitswapPattern {
    pub note: String,
    pub central: Vec<u32>,
    pub higgsonic: Vec<u32>,
    pub gluonic: Vec<u32>,
}

impl BitswapPattern {
    pub fn leaves(&self) -> Vec<u32> {
        self.central.iter().chain(&self.higgsonic).chain(&self.gluonic).copied().collect()
    }

    pub fn len(&self) -> usize {
        self.central.len() + self.higgsonic.len() + self.gluonic.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Invert every listed pair on `supernode`.
    pub fn apply(&self, net: &mut SpinNetwork, supernode: u32) -> Result<Vec<FoamEvent>, NetworkError> {
        let mut events = Vec::new();
        for k in self.leaves() {
            events.extend(net.invert_bit(supernode, k)?);
        }
        Ok(events)
    }

    /// Undo [`apply`](Self::apply): the same inversions in reverse order.
    pub fn unapply(&self, net: &mut SpinNetwork, supernode: u32) -> Result<Vec<FoamEvent>, NetworkError> {
        let mut events = Vec::new();
        for k in self.leaves().into_iter().rev() {
            events.extend(net.invert_bit(supernode, k)?);
        }
        Ok(events)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Fixture {
    pub schema_version: u32,
    pub name: String,
    pub basis: Vec<String>,
    pub roots: Vec<FixtureRow>,
    pub bitswap_pattern: BitswapPattern,
}

const FIXTURE_JSON: &str = include_str!("../data/blue_up_quark.json");

pub fn parse_fixture(text: &str) -> Result<Fixture, ParticleError> {
    serde_json::from_str(text).map_err(|e| ParticleError::Fixture(e.to_string()))
}

pub fn fixture() -> Result<&'static Fixture, ParticleError> {
    static F: OnceLock<Result<Fixture, ParticleError>> = OnceLock::new();
    F.get_or_init(|| parse_fixture(FIXTURE_JSON)).as_ref().map_err(Clone::clone)
}

pub fn fixture_bitswap_pattern() -> Result<&'static BitswapPattern, ParticleError> {
    Ok(&fixture()?.bitswap_pattern)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(v: [i64; 8]) -> Root8 {
        Root8(v)
    }

    #[test]
    fn charge_examples() {
        assert_eq!(electric_charge(r([-2, 0, -2, 0, 0, -2, 0, 0])).unwrap(), Ratio::new(2, 3));
        assert_eq!(electric_charge(r([-2, 0, -2, 0, 0, 0, 0, 2])).unwrap(), Ratio::new(1, 3));
        assert_eq!(electric_charge(r([0; 8])).unwrap(), Ratio::from_integer(0));
        assert_eq!(electric_charge(r([-2, 0, -2, 0, -2, 0, 0, 0])).unwrap(), Ratio::from_integer(1));
        assert_eq!(electric_charge(r([0, 1, 0, 0, 0, 0, 0, 0])), Err(ParticleError::OddParity([0, 1, 0, 0, 0, 0, 0, 0])));
    }

    #[test]
    fn color_examples() {
        assert_eq!(color_charge(r([-2, 0, -2, 0, 0, -2, 0, 0])), vec![Color::Blue]);
        assert!(color_charge(r([0; 8])).is_empty());
        assert_eq!(color_charge(r([-2, 0, -2, 0, 0, 0, 0, 2])), vec![Color::AntiRed]);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(r([-2, 0, -2, 0, 0, -2, 0, 0])).unwrap().summary(), "Up, blue, +2/3");
        assert_eq!(classify(r([-2, 0, -2, 0, 0, 0, 2, 0])).unwrap().summary(), "Anti Down, +1/3");
        let p = classify(r([-2, 0, -2, 0, -2, 0, 0, 0])).unwrap();
        assert_eq!(p.charge, Ratio::from_integer(1));
        assert!(p.note.as_deref().unwrap().contains("1/3"));
        let other = classify(r([2, 0, 0, 0, 0, 0, 0, 0])).unwrap();
        assert!(!other.from_fixture);
        assert_eq!(other.label, "charge=0, colors=none");
    }

    #[test]
    fn fixture_rows_decode_to_their_expectations() {
        let f = fixture().unwrap();
        assert_eq!(f.roots.len(), 7);
        for row in &f.roots {
            assert_eq!(electric_charge(row.root).unwrap().to_string(), row.expected_charge, "{}", row.root);
            assert_eq!(color_charge(row.root), row.expected_colors);
            assert!(row.root.0.iter().all(|x| [-2, 0, 2].contains(x)));
        }
    }

    #[test]
    fn pattern_has_21_distinct_plain_leaves() {
        let p = fixture_bitswap_pattern().unwrap();
        assert_eq!((p.central.len(), p.higgsonic.len(), p.gluonic.len()), (3, 9, 9));
        let mut l = p.leaves();
        l.sort();
        l.dedup();
        assert_eq!(l.len(), 21);
        assert!(l.iter().all(|k| k % 2 == 1 && *k <= 48));
    }

    #[test]
    fn conjugation_on_the_fixture_family() {
        for row in &fixture().unwrap().roots {
            let q = electric_charge(row.root).unwrap();
            assert_eq!(electric_charge(-row.root).unwrap(), -q);
            let anti: Vec<Color> = {
                let mut v: Vec<Color> = color_charge(row.root).into_iter().map(Color::anti).collect();
                v.sort();
                v
            };
            assert_eq!(color_charge(-row.root), anti);
        }
    }

    proptest! {
        #[test]
        fn charge_denominator_divides_12(v in prop::array::uniform8(-4i64..=4)) {
            let mut v = v;
            if (v[1] + v[2]) % 2 != 0 { v[1] += 1; }
            let q = electric_charge(Root8(v)).unwrap();
            prop_assert_eq!(12 % q.denom(), 0);
        }

        #[test]
        fn color_of_negation_is_anti(v in prop::array::uniform8(-2i64..=2)) {
            let mut anti: Vec<Color> = color_charge(Root8(v)).into_iter().map(Color::anti).collect();
            anti.sort();
            prop_assert_eq!(color_charge(-Root8(v)), anti);
        }
    }
}
