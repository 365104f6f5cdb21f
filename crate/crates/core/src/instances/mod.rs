//! Concrete pattern kinds and their payloads.

pub mod comb;
pub mod map;
pub mod patch;
pub mod plan;
pub mod point_set;
pub mod subset;

pub use comb::{DiracCombPayload, WeightedPoint};
pub use map::{AtomSpec, MapPayload, Placement, Profile, Representation};
pub use patch::{checkerboard, PatchPayload, PatchRep, Shape, Tile};
pub use plan::{IsoSet, PlanPayload};
pub use point_set::PointSetPayload;
pub use subset::{Interval, SubsetPayload};
