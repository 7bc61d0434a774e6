//! Symbolic shape algebra for initial supports.
//!
//! A [`SupportSpec`] describes a planar region exactly; membership, distance,
//! and the two direction sets are computed per variant in closed form. Shapes
//! may be unbounded (half-planes, cones, strips); the simulator clips them to
//! its grid.

use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::error::Issue;
use crate::geometry::arcs::{half_circle_against, normalize_angle, DirectionSet};
use crate::vec2::Vec2;

/// Angular half-width of the hole left in the bounded-direction set around an
/// idealized chain's axis. The axis direction belongs to neither direction
/// set; a zero-width hole would be erased by arc normalization, so the hole
/// carries this small positive width. It is far above the arc-merge slack
/// (1e-12) and far below any profile tolerance.
pub const CHAIN_GAP_HALF_WIDTH: f64 = 1e-6;

/// Maximum nesting depth for unions and translates.
pub const MAX_NESTING_DEPTH: u32 = 32;

/// Unit-vector fields must have norm within this of 1.
pub const UNIT_NORM_TOL: f64 = 1e-6;

/// A planar region built from primitive shapes.
///
/// Serialized with a `kind` tag; see the scenario file format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SupportSpec {
    /// Closed disk.
    Ball { center: Vec2, radius: f64 },
    /// Closed half-plane `{x : x·normal ≤ offset}`; `normal` is a unit vector.
    HalfPlane { normal: Vec2, offset: f64 },
    /// Open angular sector with apex `vertex`, spanning counterclockwise from
    /// `angle_lo` to `angle_hi` (radians, width in (0, 2π)).
    Cone {
        vertex: Vec2,
        angle_lo: f64,
        angle_hi: f64,
    },
    /// Closed strip `{x : |x·normal| ≤ half_width}` through the origin;
    /// `normal` is a unit vector.
    Strip { normal: Vec2, half_width: f64 },
    /// Union of disks centered at `ratio^n · direction` for `n < count`;
    /// `direction` is a unit vector. With `idealized_infinite` the direction
    /// sets are those of the infinite chain, for which the axis direction is
    /// neither bounded nor unbounded; membership and distance always use the
    /// finite geometry.
    BallChain {
        direction: Vec2,
        radius: f64,
        ratio: f64,
        count: u32,
        #[serde(default)]
        idealized_infinite: bool,
    },
    /// Union of members.
    Union { members: Vec<SupportSpec> },
    /// `inner` translated by `shift`. The shift serializes before the inner
    /// table, as TOML requires.
    Translate { shift: Vec2, inner: Box<SupportSpec> },
    /// The empty region; produced by interior shrinks that exhaust a shape.
    Empty,
}

fn check_finite(v: f64, path: &str, issues: &mut Vec<Issue>) {
    if !v.is_finite() {
        issues.push(Issue {
            path: path.to_string(),
            message: "must be finite".to_string(),
        });
    }
}

fn check_unit(v: Vec2, path: &str, issues: &mut Vec<Issue>) {
    if !v.is_finite() {
        issues.push(Issue {
            path: path.to_string(),
            message: "must be finite".to_string(),
        });
    } else if (v.norm() - 1.0).abs() > UNIT_NORM_TOL {
        issues.push(Issue {
            path: path.to_string(),
            message: format!("must be a unit vector (norm {:.6})", v.norm()),
        });
    }
}

fn check_positive(v: f64, path: &str, issues: &mut Vec<Issue>) {
    if !(v.is_finite() && v > 0.0) {
        issues.push(Issue {
            path: path.to_string(),
            message: format!("must be positive and finite (got {v})"),
        });
    }
}

impl SupportSpec {
    /// Collects every validation failure under the given field path.
    pub fn validate(&self, path: &str, issues: &mut Vec<Issue>) {
        self.validate_depth(path, issues, 0);
    }

    fn validate_depth(&self, path: &str, issues: &mut Vec<Issue>, depth: u32) {
        if depth > MAX_NESTING_DEPTH {
            issues.push(Issue {
                path: path.to_string(),
                message: format!("nesting deeper than {MAX_NESTING_DEPTH}"),
            });
            return;
        }
        match self {
            SupportSpec::Ball { center, radius } => {
                if !center.is_finite() {
                    issues.push(Issue {
                        path: format!("{path}.center"),
                        message: "must be finite".to_string(),
                    });
                }
                check_positive(*radius, &format!("{path}.radius"), issues);
            }
            SupportSpec::HalfPlane { normal, offset } => {
                check_unit(*normal, &format!("{path}.normal"), issues);
                check_finite(*offset, &format!("{path}.offset"), issues);
            }
            SupportSpec::Cone {
                vertex,
                angle_lo,
                angle_hi,
            } => {
                if !vertex.is_finite() {
                    issues.push(Issue {
                        path: format!("{path}.vertex"),
                        message: "must be finite".to_string(),
                    });
                }
                check_finite(*angle_lo, &format!("{path}.angle_lo"), issues);
                check_finite(*angle_hi, &format!("{path}.angle_hi"), issues);
                let width = angle_hi - angle_lo;
                if !(width > 0.0 && width < TAU) {
                    issues.push(Issue {
                        path: format!("{path}.angle_hi"),
                        message: format!("sector width must lie in (0, 2π) (got {width})"),
                    });
                }
            }
            SupportSpec::Strip { normal, half_width } => {
                check_unit(*normal, &format!("{path}.normal"), issues);
                check_positive(*half_width, &format!("{path}.half_width"), issues);
            }
            SupportSpec::BallChain {
                direction,
                radius,
                ratio,
                count,
                ..
            } => {
                check_unit(*direction, &format!("{path}.direction"), issues);
                check_positive(*radius, &format!("{path}.radius"), issues);
                if !(ratio.is_finite() && *ratio > 1.0) {
                    issues.push(Issue {
                        path: format!("{path}.ratio"),
                        message: format!("must exceed 1 (got {ratio})"),
                    });
                }
                if *count == 0 {
                    issues.push(Issue {
                        path: format!("{path}.count"),
                        message: "must be at least 1".to_string(),
                    });
                } else if ratio.is_finite()
                    && !ratio.powi(*count as i32 - 1).is_finite()
                {
                    issues.push(Issue {
                        path: format!("{path}.count"),
                        message: "farthest center overflows f64".to_string(),
                    });
                }
            }
            SupportSpec::Union { members } => {
                if members.is_empty() {
                    issues.push(Issue {
                        path: format!("{path}.members"),
                        message: "must not be empty".to_string(),
                    });
                }
                for (k, m) in members.iter().enumerate() {
                    m.validate_depth(&format!("{path}.members[{k}]"), issues, depth + 1);
                }
            }
            SupportSpec::Translate { inner, shift } => {
                if !shift.is_finite() {
                    issues.push(Issue {
                        path: format!("{path}.shift"),
                        message: "must be finite".to_string(),
                    });
                }
                inner.validate_depth(&format!("{path}.inner"), issues, depth + 1);
            }
            SupportSpec::Empty => {}
        }
    }

    pub fn is_empty_marker(&self) -> bool {
        matches!(self, SupportSpec::Empty)
    }

    /// True when the region contains no points at all, through unions and
    /// translations.
    pub fn effectively_empty(&self) -> bool {
        match self {
            SupportSpec::Empty => true,
            SupportSpec::Union { members } => members.iter().all(|m| m.effectively_empty()),
            SupportSpec::Translate { inner, .. } => inner.effectively_empty(),
            _ => false,
        }
    }

    /// Exact membership; disks, half-planes, strips and chains are closed,
    /// cones are open sectors.
    pub fn contains(&self, p: Vec2) -> bool {
        match self {
            SupportSpec::Ball { center, radius } => p.dist(*center) <= *radius,
            SupportSpec::HalfPlane { normal, offset } => {
                let n = normal.normalized().unwrap_or(Vec2::new(1.0, 0.0));
                p.dot(n) <= *offset
            }
            SupportSpec::Cone {
                vertex,
                angle_lo,
                angle_hi,
            } => {
                let q = p - *vertex;
                if q.norm() == 0.0 {
                    return false;
                }
                let phi = normalize_angle(q.angle() - angle_lo);
                phi > 0.0 && phi < angle_hi - angle_lo
            }
            SupportSpec::Strip { normal, half_width } => {
                let n = normal.normalized().unwrap_or(Vec2::new(1.0, 0.0));
                p.dot(n).abs() <= *half_width
            }
            SupportSpec::BallChain {
                direction,
                radius,
                ratio,
                count,
                ..
            } => {
                let d = direction.normalized().unwrap_or(Vec2::new(1.0, 0.0));
                (0..*count).any(|n| p.dist(d * ratio.powi(n as i32)) <= *radius)
            }
            SupportSpec::Union { members } => members.iter().any(|m| m.contains(p)),
            SupportSpec::Translate { inner, shift } => inner.contains(p - *shift),
            SupportSpec::Empty => false,
        }
    }

    /// Euclidean distance from `p` to the region (0 for members); +∞ for the
    /// empty marker.
    pub fn distance(&self, p: Vec2) -> f64 {
        match self {
            SupportSpec::Ball { center, radius } => (p.dist(*center) - radius).max(0.0),
            SupportSpec::HalfPlane { normal, offset } => {
                let n = normal.normalized().unwrap_or(Vec2::new(1.0, 0.0));
                (p.dot(n) - offset).max(0.0)
            }
            SupportSpec::Cone {
                vertex,
                angle_lo,
                angle_hi,
            } => {
                let q = p - *vertex;
                if q.norm() == 0.0 {
                    return 0.0;
                }
                let phi = normalize_angle(q.angle() - angle_lo);
                if phi <= angle_hi - angle_lo {
                    return 0.0;
                }
                // Outside the closed sector: nearest point lies on one of the
                // two boundary rays (the vertex is the t = 0 clamp).
                let mut best = f64::INFINITY;
                for alpha in [*angle_lo, *angle_hi] {
                    let dir = Vec2::from_angle(alpha);
                    let t = q.dot(dir).max(0.0);
                    best = best.min(q.dist(dir * t));
                }
                best
            }
            SupportSpec::Strip { normal, half_width } => {
                let n = normal.normalized().unwrap_or(Vec2::new(1.0, 0.0));
                (p.dot(n).abs() - half_width).max(0.0)
            }
            SupportSpec::BallChain {
                direction,
                radius,
                ratio,
                count,
                ..
            } => {
                let d = direction.normalized().unwrap_or(Vec2::new(1.0, 0.0));
                (0..*count)
                    .map(|n| (p.dist(d * ratio.powi(n as i32)) - radius).max(0.0))
                    .fold(f64::INFINITY, f64::min)
            }
            SupportSpec::Union { members } => members
                .iter()
                .map(|m| m.distance(p))
                .fold(f64::INFINITY, f64::min),
            SupportSpec::Translate { inner, shift } => inner.distance(p - *shift),
            SupportSpec::Empty => f64::INFINITY,
        }
    }

    /// Directions along which the region stays within sublinear distance of
    /// the ray. Translation-invariant; empty for compact shapes.
    pub fn unbounded_directions(&self) -> DirectionSet {
        match self {
            SupportSpec::Ball { .. } | SupportSpec::BallChain { .. } | SupportSpec::Empty => {
                DirectionSet::empty()
            }
            SupportSpec::HalfPlane { normal, .. } => half_circle_against(normal.angle()),
            SupportSpec::Cone {
                angle_lo, angle_hi, ..
            } => DirectionSet::from_spans(&[(*angle_lo, *angle_hi)]),
            SupportSpec::Strip { normal, .. } => {
                let t = normal.angle() + PI / 2.0;
                DirectionSet::singleton(t).union(&DirectionSet::singleton(t + PI))
            }
            SupportSpec::Union { members } => members
                .iter()
                .fold(DirectionSet::empty(), |acc, m| {
                    acc.union(&m.unbounded_directions())
                }),
            SupportSpec::Translate { inner, .. } => inner.unbounded_directions(),
        }
    }

    /// Axis angles of idealized chains anywhere in the tree. These directions
    /// belong to neither direction set.
    fn neither_angles(&self, out: &mut Vec<f64>) {
        match self {
            SupportSpec::BallChain {
                direction,
                idealized_infinite: true,
                ..
            } => out.push(direction.angle()),
            SupportSpec::Union { members } => {
                for m in members {
                    m.neither_angles(out);
                }
            }
            SupportSpec::Translate { inner, .. } => inner.neither_angles(out),
            _ => {}
        }
    }

    /// Directions along which the region stays linearly far from the ray.
    ///
    /// The complement of [`unbounded_directions`](Self::unbounded_directions)
    /// for every shape except idealized chains, whose axis direction is
    /// carved out as a small hole (see [`CHAIN_GAP_HALF_WIDTH`]).
    pub fn bounded_directions(&self) -> DirectionSet {
        if self.effectively_empty() {
            return DirectionSet::empty();
        }
        let mut excluded = self.unbounded_directions();
        let mut neither = Vec::new();
        self.neither_angles(&mut neither);
        if !neither.is_empty() {
            let holes: Vec<(f64, f64)> = neither
                .iter()
                .map(|&t| (t - CHAIN_GAP_HALF_WIDTH, t + CHAIN_GAP_HALF_WIDTH))
                .collect();
            excluded = excluded.union(&DirectionSet::from_spans(&holes));
        }
        excluded.complement()
    }

    /// The set of points of the region at distance at least `rho` from its
    /// boundary, as a spec, or the empty marker when the shrink exhausts it.
    ///
    /// Cone and union results are conservative inner approximations (the cone
    /// translates along its bisector; union members shrink independently).
    /// Their direction sets equal those of the true interior, which is what
    /// the cover condition consumes.
    pub fn positive_distance_interior(&self, rho: f64) -> SupportSpec {
        match self {
            SupportSpec::Ball { center, radius } => {
                if radius - rho > 0.0 {
                    SupportSpec::Ball {
                        center: *center,
                        radius: radius - rho,
                    }
                } else {
                    SupportSpec::Empty
                }
            }
            SupportSpec::HalfPlane { normal, offset } => SupportSpec::HalfPlane {
                normal: *normal,
                offset: offset - rho,
            },
            SupportSpec::Cone {
                vertex,
                angle_lo,
                angle_hi,
            } => {
                // A translate of the cone by z along its bisector keeps every
                // point at distance ≥ |z|·sin(width/2) from both boundary
                // rays, so |z| = rho/sin(width/2) suffices for any width.
                let width = angle_hi - angle_lo;
                let bisector = Vec2::from_angle(0.5 * (angle_lo + angle_hi));
                let shift = rho / (0.5 * width).sin();
                SupportSpec::Cone {
                    vertex: *vertex + bisector * shift,
                    angle_lo: *angle_lo,
                    angle_hi: *angle_hi,
                }
            }
            SupportSpec::Strip { normal, half_width } => {
                if half_width - rho > 0.0 {
                    SupportSpec::Strip {
                        normal: *normal,
                        half_width: half_width - rho,
                    }
                } else {
                    SupportSpec::Empty
                }
            }
            SupportSpec::BallChain {
                direction,
                radius,
                ratio,
                count,
                idealized_infinite,
            } => {
                if radius - rho > 0.0 {
                    SupportSpec::BallChain {
                        direction: *direction,
                        radius: radius - rho,
                        ratio: *ratio,
                        count: *count,
                        idealized_infinite: *idealized_infinite,
                    }
                } else {
                    SupportSpec::Empty
                }
            }
            SupportSpec::Union { members } => {
                let kept: Vec<SupportSpec> = members
                    .iter()
                    .map(|m| m.positive_distance_interior(rho))
                    .filter(|m| !m.is_empty_marker())
                    .collect();
                if kept.is_empty() {
                    SupportSpec::Empty
                } else {
                    SupportSpec::Union { members: kept }
                }
            }
            SupportSpec::Translate { inner, shift } => {
                let shrunk = inner.positive_distance_interior(rho);
                if shrunk.is_empty_marker() {
                    SupportSpec::Empty
                } else {
                    SupportSpec::Translate {
                        inner: Box::new(shrunk),
                        shift: *shift,
                    }
                }
            }
            SupportSpec::Empty => SupportSpec::Empty,
        }
    }

    /// Radius of a disk around the origin containing the region, or `None`
    /// for unbounded shapes.
    pub fn bounding_radius(&self) -> Option<f64> {
        match self {
            SupportSpec::Ball { center, radius } => Some(center.norm() + radius),
            SupportSpec::HalfPlane { .. }
            | SupportSpec::Cone { .. }
            | SupportSpec::Strip { .. } => None,
            SupportSpec::BallChain {
                ratio,
                count,
                radius,
                ..
            } => Some(ratio.powi(*count as i32 - 1) + radius),
            SupportSpec::Union { members } => members
                .iter()
                .map(SupportSpec::bounding_radius)
                .try_fold(0.0f64, |acc, r| r.map(|r| acc.max(r))),
            SupportSpec::Translate { inner, shift } => {
                inner.bounding_radius().map(|r| r + shift.norm())
            }
            SupportSpec::Empty => Some(0.0),
        }
    }
}
