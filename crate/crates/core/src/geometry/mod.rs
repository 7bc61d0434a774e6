//! Directional geometry on the plane: shape algebra for initial supports,
//! direction sets on the unit circle, speed profiles, and the spreading sets
//! assembled from them.

pub mod arcs;
pub mod profile;
pub mod sets;
pub mod support;
