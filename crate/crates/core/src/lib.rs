//! Random cyclic polygons: geometry, closed-form laws and Monte Carlo checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod claims;
pub mod montecarlo;
pub mod polygon;
pub mod special;

pub use analytic::{densities, density_by_name, AnalyticDensity, Density1d, MomentEntry, MOMENTS};
pub use claims::{list_claims, run_all, run_claim, Claim, ClaimError, ClaimKind, ClaimResult, RunOptions};
pub use polygon::{measure, sample_central_angles, CentralAngles, GapVector, PolygonMeasurements, RngStream};
