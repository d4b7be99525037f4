//! Trivalent spin networks on the F4 lattice.
//!
//! A 4-torus of supernodes, each a 144-node trivalent tree whose 48 leaves
//! point at the lattice neighbours through exact quaternion holonomies. Bits
//! are 3-cycle memberships; Pachner 2-2 moves rewire edges inside supernodes
//! and move bit content around while the lattice stays fixed.

pub mod error;
pub mod geometry;
pub mod graph;
pub mod holonomy;
pub mod lattice;
pub mod network;
pub mod observables;
pub mod particles;
pub mod quat;
pub mod supernode;

pub use error::{GeometryError, HolonomyError, LatticeError, LeafError, NetworkError, ParticleError, QuatError};
pub use geometry::{Shell, ShellKind, Vec4};
pub use graph::Graph;
pub use holonomy::{direction_bijection_check, leaf_direction, opposite_leaf, regenerate_table, zeta, LeafHolonomy, TableRow};
pub use lattice::{build_lattice, build_toy_2d, Lattice, LatticeOptions, SupernodeCoord, SupernodeId, TorusShape, ToyLattice2D};
pub use network::{assemble, FoamEvent, LeafState, Move, Pairing, Slot, SpinNetwork};
pub use observables::{
    bfs_distance, emergent_frame, geodesic_deflection, sphere_growth, supernode_frame, DeflectionReport, DistanceField,
    FrameGram, SphereGrowth,
};
pub use particles::{classify, color_charge, electric_charge, fixture_bitswap_pattern, Color, ParticleRecord, Root8};
pub use quat::{ExactQuaternion, ExactScalar, GeneratorSet};
pub use supernode::{build_supernode, leaf_code, LeafCode, NodeKind, SupernodeGraph, Variant};
