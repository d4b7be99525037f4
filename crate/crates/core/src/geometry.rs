//! The two 24-cell vertex shells of the F4 neighbourhood and their cell structure.
//!
//! Coordinates are the integer "twice-unit" quaternion coordinates: the first
//! shell sits at squared length 4, the dual shell at squared length 8.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::GeometryError;
use crate::quat::ExactQuaternion;

/// An integer 4-vector, basis order `{1, i, j, k}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize, Deserialize)]
pub struct Vec4(pub [i64; 4]);

impl Vec4 {
    pub const ZERO: Vec4 = Vec4([0; 4]);

    pub fn new(c0: i64, c1: i64, c2: i64, c3: i64) -> Self {
        Vec4([c0, c1, c2, c3])
    }

    pub fn dot(&self, o: &Vec4) -> i64 {
        (0..4).map(|i| self.0[i] * o.0[i]).sum()
    }

    pub fn norm2(&self) -> i64 {
        self.dot(self)
    }

    pub fn dist2(&self, o: &Vec4) -> i64 {
        (*self - *o).norm2()
    }

    pub fn scale(&self, s: i64) -> Vec4 {
        Vec4(self.0.map(|c| c * s))
    }

    pub fn to_quaternion(&self) -> ExactQuaternion {
        ExactQuaternion::from_integers(self.0)
    }
}

impl Add for Vec4 {
    type Output = Vec4;
    fn add(self, o: Vec4) -> Vec4 {
        Vec4(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for Vec4 {
    type Output = Vec4;
    fn sub(self, o: Vec4) -> Vec4 {
        Vec4(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Neg for Vec4 {
    type Output = Vec4;
    fn neg(self) -> Vec4 {
        Vec4(self.0.map(|c| -c))
    }
}

impl fmt::Display for Vec4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a},{b},{c},{d})")
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum ShellKind {
    /// 24 nearest neighbours in D4, squared length 4.
    First,
    /// 24 dual-cell directions, squared length 8.
    Second,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Shell {
    pub kind: ShellKind,
    /// Sorted, no duplicates.
    pub vectors: Vec<Vec4>,
}

impl Shell {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn contains(&self, v: &Vec4) -> bool {
        self.vectors.binary_search(v).is_ok()
    }

    pub fn as_set(&self) -> BTreeSet<Vec4> {
        self.vectors.iter().copied().collect()
    }
}

/// Signed axis vectors of length 2 and the sixteen `(±1, ±1, ±1, ±1)`.
pub fn first_shell() -> Shell {
    let mut vectors = Vec::with_capacity(24);
    for axis in 0..4 {
        for s in [2, -2] {
            let mut c = [0; 4];
            c[axis] = s;
            vectors.push(Vec4(c));
        }
    }
    for signs in 0..16u32 {
        vectors.push(Vec4(std::array::from_fn(|i| if signs >> i & 1 == 1 { -1 } else { 1 })));
    }
    vectors.sort();
    Shell { kind: ShellKind::First, vectors }
}

/// All permutations of `(±2, ±2, 0, 0)`.
pub fn second_shell() -> Shell {
    let mut vectors = Vec::with_capacity(24);
    for a in 0..4 {
        for b in a + 1..4 {
            for (sa, sb) in [(2, 2), (2, -2), (-2, 2), (-2, -2)] {
                let mut c = [0; 4];
                c[a] = sa;
                c[b] = sb;
                vectors.push(Vec4(c));
            }
        }
    }
    vectors.sort();
    Shell { kind: ShellKind::Second, vectors }
}

/// Right multiplication by `1 + i`, the map taking the first shell to the second.
pub fn times_one_plus_i(v: &Vec4) -> Vec4 {
    let p = v.to_quaternion().mul(&ExactQuaternion::from_integers([1, 1, 0, 0]));
    Vec4(p.to_integers().expect("integer quaternion product"))
}

/// `{v·(1+i) : v ∈ first shell}` equals the second shell.
pub fn verify_duality() -> bool {
    let image: BTreeSet<Vec4> = first_shell().vectors.iter().map(times_one_plus_i).collect();
    image == second_shell().as_set()
}

/// All four coordinates even, or all four odd.
pub fn in_d4(v: &Vec4) -> bool {
    let p = v.0[0].rem_euclid(2);
    v.0.iter().all(|c| c.rem_euclid(2) == p)
}

/// The 24 octahedral cells of the first-shell 24-cell, one per dual direction:
/// the cell facing `d` is the set of first-shell vertices maximising `⟨v, d⟩`.
pub fn cells_of_24cell() -> Vec<Vec<Vec4>> {
    let first = first_shell();
    second_shell()
        .vectors
        .iter()
        .map(|d| {
            let best = first.vectors.iter().map(|v| v.dot(d)).max().unwrap_or(0);
            first.vectors.iter().copied().filter(|v| v.dot(d) == best).collect()
        })
        .collect()
}

/// Tetrahedra in a 24-cell when every octahedral cell is split along one axis
/// (4 each) or around its centre (8 each).
pub fn tetrahedra_counts() -> (usize, usize) {
    let cells = cells_of_24cell().len();
    (cells * 4, cells * 8)
}

/// True when six points form a regular octahedron: each point has exactly four
/// others at the edge distance and one antipode at twice that squared distance.
pub fn is_octahedron(points: &[Vec4]) -> bool {
    if points.len() != 6 {
        return false;
    }
    let edge = points[1..].iter().map(|p| p.dist2(&points[0])).min().unwrap_or(0);
    edge > 0
        && points.iter().all(|p| {
            let mut near = 0;
            let mut far = 0;
            for q in points {
                match p.dist2(q) {
                    0 => {}
                    d if d == edge => near += 1,
                    d if d == 2 * edge => far += 1,
                    _ => return false,
                }
            }
            near == 4 && far == 1
        })
}

/// Vertices shared by the space-filling 24-cells around two linked D4 nodes.
///
/// The space-filling cell around a node `a` has its vertices at `a + s/2` for
/// `s` in the dual shell. Results are returned in doubled coordinates
/// (`2a + s`) so every vertex is an integer point.
pub fn shared_octahedron(a: Vec4, b: Vec4) -> Result<Vec<Vec4>, GeometryError> {
    if !first_shell().contains(&(b - a)) {
        return Err(GeometryError::NotAdjacent(a.0, b.0));
    }
    let second = second_shell();
    let around = |c: Vec4| -> BTreeSet<Vec4> { second.vectors.iter().map(|s| c.scale(2) + *s).collect() };
    Ok(around(a).intersection(&around(b)).copied().collect())
}
