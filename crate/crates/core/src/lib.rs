//! Exact-rational calculus for patterns of aperiodic order.
//!
//! The crate models tilings, Delone sets, Dirac combs, functions and plans as
//! abstract patterns with a uniform cutting-off/support/action contract, and
//! builds the constructive pipelines on top: punctured Voronoi tilings with
//! mutual-local-derivability witnesses, decomposition into components and
//! plans, building-block synthesis of MLD Delone sets, and pattern-equivariant
//! functions. All geometry is exact: coordinates are arbitrary-precision
//! rationals and every verdict is decided without floating point.

pub mod error;
pub mod num;

pub mod geometry;
pub mod lattice;
pub mod polygon;
pub mod rep;

pub mod decompose;
pub mod derivability;
pub mod instances;
pub mod pattern;
pub mod synthesis;
pub mod voronoi;

pub use error::{Error, Result};
pub use num::{Q, Value};

pub use geometry::{
    Ball, GroupBall, GroupSpec, Isometry, Mat, Point, PointGroupElement, Window,
};
pub use pattern::{
    supremum, zero_of, AbstractPattern, BoundedComponentsCertificate, PatternFamily, PatternKind,
    Payload, SpaceSpec,
};
