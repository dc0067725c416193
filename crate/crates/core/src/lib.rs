//! Exact symbolic intersection theory for surfaces and rank-2 projective
//! bundles over them, plus the construction pipeline that turns splitting
//! data into anticanonical-degree reports for positive-characteristic
//! Fano threefolds.
//!
//! Everything is computed over exact rationals; there is no floating
//! point anywhere in the engine. All values are immutable after
//! construction and every operation is a pure function, so the whole
//! API is safe to drive from multiple threads.

pub mod bundles;
pub mod chow;
pub mod construction;
pub mod curves;
pub mod error;
pub mod expr;
pub mod lattice;
pub mod rat;
pub mod sampling;

pub use chow::{
    anticanonical_cube, canonical_class, closed_degree_formula, integrate, multiply, power,
    BundleData, ChowClass, ConventionMode, HPoly, SurfaceClass,
};
pub use error::{EngineError, Result};
pub use lattice::{gram_signature, DivisorClass, SurfaceModel};
pub use rat::Rat;
