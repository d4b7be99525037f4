use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum QuatError {
    #[error("quaternion {0} is not a unit quaternion")]
    NotUnit(String),
    #[error("rotation angle with cosine {0} is not representable in Q(√2)")]
    UnrepresentableAngle(String),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("lattice points {0:?} and {1:?} are not linked by a first-shell vector")]
    NotAdjacent([i64; 4], [i64; 4]),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum LeafError {
    #[error("leaf index {0} is outside 1..=48")]
    OutOfRange(u32),
    #[error("leaf {0} does not exist in the {1} supernode variant")]
    NotInVariant(u32, &'static str),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum HolonomyError {
    #[error(transparent)]
    Leaf(#[from] LeafError),
    /// A scaled holonomy failed to land on integer coordinates. This means the
    /// generator conventions are inconsistent and nothing downstream is valid.
    #[error("leaf {leaf}: scaled holonomy {value} has non-integer components")]
    NonIntegralDirection { leaf: u32, value: String },
    #[error("leaf directions do not biject onto the two 24-cell shells")]
    BijectionFailed,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("torus parameter n = {0} must be at least 1")]
    Empty(u32),
    #[error("torus parameter n = {0} creates parallel super-links; n >= 3 or multigraph mode is required")]
    TooSmall(u32),
    #[error("toy lattice side m = {0} must be at least 3")]
    ToyTooSmall(usize),
    #[error("coordinate {0:?} is not a valid supernode site")]
    BadCoord([u32; 4]),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum NetworkError {
    #[error(transparent)]
    Holonomy(#[from] HolonomyError),
    #[error(transparent)]
    Leaf(#[from] LeafError),
    #[error("assembly failed: {0}")]
    Assembly(String),
    #[error("node {0} does not exist")]
    NoSuchNode(u32),
    #[error("supernode {0} does not exist")]
    NoSuchSupernode(u32),
    #[error("illegal move on edge ({p}, {q}): {reason}")]
    IllegalMove { p: u32, q: u32, reason: String },
    #[error("bit inversion at supernode {supernode}, leaf {leaf} rejected: {reason}")]
    InversionRejected { supernode: u32, leaf: u32, reason: String },
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ParticleError {
    #[error("root {0:?} has odd o2 + o3; the charge parity branch is undefined")]
    OddParity([i64; 8]),
    #[error("fixture parse error: {0}")]
    Fixture(String),
}
