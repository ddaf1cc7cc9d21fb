//! Finite CAT(0) cube complexes as median graphs, the duality with pocsets
//! and wallspaces, hyperplane transforms, and bending of hyperplanes along
//! switch systems.

pub mod bending;
pub mod complex;
pub mod corpus;
pub mod duality;
pub mod error;
pub mod hyperplane;
pub mod pocset;
pub mod transforms;

pub use complex::{
    validate_complex, validate_complex_with, BridgeDecomposition, Cube, CubeComplex, HalfInt, MedianCheck,
    ValidateOptions, Vertex, VertexSet,
};
pub use duality::{
    all_ultrafilters, complexes_isomorphic, dual_complex, roundtrip_check, ultrafilter_from_transverse_family,
    wallspace_dual, Dual, Isomorphism, Ultrafilter, WallDual, Wallspace,
};
pub use error::{Error, Result};
pub use hyperplane::{Halfspace, Hyperplane, Side};
pub use pocset::{pocset_of, Pocset};
