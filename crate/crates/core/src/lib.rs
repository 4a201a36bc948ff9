//! Two-robot wireless evacuation from ℓp unit disks.
//!
//! The crate computes the geometry of the ℓp unit circle `C_p` (perimeter,
//! arc length and its inverse), the evacuation-time profile and worst case
//! of the two-robot search algorithm deployed at angle `φ ∈ {0, π/4}`, the
//! minimum-chord function `𝓛_p`, and numerical certificates for the
//! monotonicity facts the optimality argument relies on.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(a <= b)` also rejects NaN

pub mod chord_arc;
pub mod error;
pub mod evacuation;
pub mod geometry;
pub mod lower_bound;
pub mod numerics;
pub mod table;

pub use chord_arc::{ChordArcSample, Direction, MonotonicityReport};
pub use error::{Error, Result};
pub use evacuation::{AlgoParams, Branch, CriticalParams, EvacOutcome, WirelessSearch};
pub use geometry::{ArcSpec, CirclePoint, LpCircle, PExponent, Point2};
pub use lower_bound::OptimalityReport;
pub use numerics::Tolerance;
pub use table::CurveTable;

/// Version of this crate.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
