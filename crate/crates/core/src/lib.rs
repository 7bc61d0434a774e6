//! Directional spreading prediction and measurement for a two-species
//! competition-diffusion system.
//!
//! The system couples a species `u` (diffusivity `d`, growth rate `r`,
//! competition pressure `a` from `v`) with a species `v` (unit diffusivity and
//! growth, pressure `b` from `u`) under strong competition (`a > 1`, `b > 1`).
//! Starting from two disjoint occupied regions, each species expands at a
//! direction-dependent speed set by the geometry of its initial support, and
//! the two expansions carve the plane into an eventual territory for each.
//!
//! The crate has three layers:
//!
//! * **Prediction** ([`geometry`]): direction sets of an initial support,
//!   directional speed profiles, the refined profile that accounts for the
//!   competition interface, and the resulting spreading sets, together with
//!   checkable geometric hypotheses ([`conditions`]).
//! * **Dynamics** ([`fronts`], [`simulator`]): a 1-D estimator for the
//!   two-species interface speed `c_uv`, and a deterministic 2-D explicit
//!   finite-difference simulator with snapshot output.
//! * **Verification** ([`measurement`], [`oracle`]): front-position
//!   measurement on snapshots, comparison reports against predictions, and
//!   brute-force sampling oracles used by the test suite.
//!
//! Scenario files (TOML) tie the layers together; see [`scenario`].

pub mod conditions;
pub mod error;
pub mod fronts;
pub mod geometry;
pub mod measurement;
pub mod oracle;
pub mod params;
pub mod scenario;
pub mod simulator;
pub mod vec2;

pub use conditions::{Condition, ConditionReport, Verdict, Witness};
pub use error::Error;
pub use geometry::arcs::DirectionSet;
pub use geometry::profile::{RefinedProfile, SpeedProfile};
pub use geometry::sets::{SetId, SpreadingSets};
pub use geometry::support::SupportSpec;
pub use params::Params;
pub use scenario::Scenario;
pub use vec2::Vec2;
