//! Front measurement on snapshots and comparison against the predicted
//! spreading sets.

use crate::error::Error;
use crate::fronts::linear_fit;
use crate::geometry::arcs::angular_gap;
use crate::geometry::sets::SpreadingSets;
use crate::simulator::grid::{Field, Grid};
use crate::vec2::Vec2;
use std::f64::consts::TAU;
use std::fmt::Write as _;

/// Angular slack around a dominance boundary inside which a measured
/// direction is flagged as unreliable (2 degrees).
pub const CRITICAL_BOUNDARY_GAP: f64 = 2.0 * std::f64::consts::PI / 180.0;

/// Step fraction of the grid spacing used when marching along a ray.
const RAY_STEP_FRACTION: f64 = 0.5;

/// What a ray sees of a level set.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum RayLevel {
    /// Outermost downward crossing at this radius.
    Crossing(f64),
    /// Still at or above the level where the ray leaves the grid.
    Clipped,
    /// Never reaches the level.
    Absent,
}

/// Scans outward along `angle` and reports the outermost radius where the
/// field falls through `level`, bisection-refined on the bilinear surface.
pub fn ray_level(grid: &Grid, field: &Field, angle: f64, level: f64) -> RayLevel {
    let e = Vec2::from_angle(angle);
    let step = RAY_STEP_FRACTION * grid.h();
    let mut radii = Vec::new();
    let mut r = 0.0;
    loop {
        match field.sample(grid, e * r) {
            Some(value) => radii.push((r, value)),
            None => break,
        }
        r += step;
    }
    let Some(&(_, last_value)) = radii.last() else {
        return RayLevel::Absent;
    };
    if last_value >= level {
        return RayLevel::Clipped;
    }
    // Outermost sample at or above the level, scanning inward.
    let Some(k) = (0..radii.len()).rev().find(|&k| radii[k].1 >= level) else {
        return RayLevel::Absent;
    };
    let (mut lo, mut hi) = (radii[k].0, radii[k + 1].0);
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        let value = field.sample(grid, e * mid).unwrap_or(0.0);
        if value >= level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    RayLevel::Crossing(0.5 * (lo + hi))
}

/// Crossing radius, if there is one.
pub fn level_radius(grid: &Grid, field: &Field, angle: f64, level: f64) -> Option<f64> {
    match ray_level(grid, field, angle, level) {
        RayLevel::Crossing(r) => Some(r),
        _ => None,
    }
}

/// Speed of a tracked front along one direction.
#[derive(Copy, Clone, Debug)]
pub struct SpeedMeasurement {
    pub angle: f64,
    pub speed: f64,
    pub r2: f64,
    pub samples: usize,
}

/// Least-squares speed from `(time, radius)` points; needs at least four.
pub fn directional_speed(angle: f64, points: &[(f64, f64)]) -> Option<SpeedMeasurement> {
    if points.len() < 4 {
        return None;
    }
    let (slope, _, r2) = linear_fit(points)?;
    Some(SpeedMeasurement {
        angle,
        speed: slope,
        r2,
        samples: points.len(),
    })
}

/// Streaming front tracker: feed it snapshots in time order, then compare
/// the fitted speeds against a prediction.
pub struct FrontTracker {
    angles: Vec<f64>,
    level: f64,
    grid: Option<Grid>,
    points_u: Vec<Vec<(f64, f64)>>,
    points_v: Vec<Vec<(f64, f64)>>,
    last_u_state: Vec<RayLevel>,
    last_time: Option<f64>,
}

impl FrontTracker {
    pub fn new(directions: usize, level: f64) -> FrontTracker {
        let angles: Vec<f64> = (0..directions)
            .map(|k| TAU * k as f64 / directions as f64)
            .collect();
        let n = angles.len();
        FrontTracker {
            angles,
            level,
            grid: None,
            points_u: vec![Vec::new(); n],
            points_v: vec![Vec::new(); n],
            last_u_state: vec![RayLevel::Absent; n],
            last_time: None,
        }
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// Extracts front radii from one snapshot.
    pub fn ingest(&mut self, time: f64, grid: &Grid, u: &Field, v: &Field) -> Result<(), Error> {
        match self.grid {
            None => self.grid = Some(*grid),
            Some(seen) if seen == *grid => {}
            Some(_) => {
                return Err(Error::InsufficientData(
                    "snapshots use different grids".into(),
                ))
            }
        }
        if self.last_time.is_some_and(|t| time < t) {
            return Err(Error::InsufficientData(
                "snapshots must arrive in time order".into(),
            ));
        }
        self.last_time = Some(time);
        for (k, &angle) in self.angles.iter().enumerate() {
            let state = ray_level(grid, u, angle, self.level);
            if let RayLevel::Crossing(r) = state {
                self.points_u[k].push((time, r));
            }
            self.last_u_state[k] = state;
            if let RayLevel::Crossing(r) = ray_level(grid, v, angle, self.level) {
                self.points_v[k].push((time, r));
            }
        }
        Ok(())
    }

    /// Fits speeds over the trailing `window` fraction of time and compares
    /// with the predicted sets.
    pub fn compare(
        &self,
        sets: &SpreadingSets,
        window: f64,
        tol: f64,
        scenario: &str,
    ) -> Result<VerificationReport, Error> {
        let t_last = self
            .last_time
            .ok_or_else(|| Error::InsufficientData("no snapshots ingested".into()))?;
        let t_min = t_last * (1.0 - window.clamp(0.0, 1.0));
        // A full or empty dominance set has no boundary to sit near.
        let dominance = sets.su().dominance();
        let boundary_angles: Vec<f64> = if dominance.is_full() || dominance.is_empty() {
            Vec::new()
        } else {
            dominance.endpoints()
        };

        let mut rows = Vec::with_capacity(self.angles.len());
        for (k, &angle) in self.angles.iter().enumerate() {
            let fit_points = |points: &Vec<(f64, f64)>| -> Vec<(f64, f64)> {
                points.iter().copied().filter(|&(t, _)| t >= t_min).collect()
            };
            let predicted_u = sets.su().value(angle);
            let measured_u = directional_speed(angle, &fit_points(&self.points_u[k]));
            let (predicted_v, measured_v) = match sets.sv_interval(angle) {
                Some(_) => (
                    Some(sets.wv().value(angle)),
                    directional_speed(angle, &fit_points(&self.points_v[k])),
                ),
                None => (None, None),
            };
            let audit = predicted_u.is_infinite().then(|| {
                matches!(self.last_u_state[k], RayLevel::Clipped)
            });
            let rel_err_u = match (predicted_u.is_finite(), &measured_u) {
                (true, Some(m)) if predicted_u != 0.0 => {
                    Some((m.speed - predicted_u).abs() / predicted_u.abs())
                }
                _ => None,
            };
            let rel_err_v = match (&predicted_v, &measured_v) {
                (Some(p), Some(m)) if p.is_finite() && *p != 0.0 => {
                    Some((m.speed - p).abs() / p.abs())
                }
                _ => None,
            };
            let within_tol = match (rel_err_u, rel_err_v) {
                (None, None) => None,
                (a, b) => Some(a.unwrap_or(0.0) <= tol && b.unwrap_or(0.0) <= tol),
            };
            let critical = boundary_angles
                .iter()
                .any(|&b| angular_gap(angle, b) <= CRITICAL_BOUNDARY_GAP);
            rows.push(CompareRow {
                angle,
                predicted_u,
                measured_u,
                predicted_v,
                measured_v,
                rel_err_u,
                rel_err_v,
                within_tol,
                critical,
                audit,
            });
        }
        Ok(VerificationReport {
            scenario: scenario.to_string(),
            level: self.level,
            window,
            tol,
            rows,
        })
    }
}

/// One measured direction.
#[derive(Clone, Debug)]
pub struct CompareRow {
    pub angle: f64,
    pub predicted_u: f64,
    pub measured_u: Option<SpeedMeasurement>,
    /// Present only where the rival is predicted to survive.
    pub predicted_v: Option<f64>,
    pub measured_v: Option<SpeedMeasurement>,
    pub rel_err_u: Option<f64>,
    pub rel_err_v: Option<f64>,
    pub within_tol: Option<bool>,
    /// Within two degrees of a dominance boundary.
    pub critical: bool,
    /// For unbounded predictions: whether the field still owns the ray to
    /// the edge of the grid at the end.
    pub audit: Option<bool>,
}

/// Full comparison of a run against its prediction.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub scenario: String,
    pub level: f64,
    pub window: f64,
    pub tol: f64,
    pub rows: Vec<CompareRow>,
}

fn csv_f64(value: f64) -> String {
    format!("{value}")
}

fn csv_opt<T: std::fmt::Display>(value: &Option<T>) -> String {
    value.as_ref().map(|v| format!("{v}")).unwrap_or_default()
}

impl VerificationReport {
    /// Rows in CSV form; infinities appear as the literal `inf`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "angle,predicted_u,measured_u,r2_u,predicted_v,measured_v,r2_v,rel_err_u,rel_err_v,within_tol,critical,audit_ok\n",
        );
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                csv_f64(row.angle),
                csv_f64(row.predicted_u),
                csv_opt(&row.measured_u.map(|m| m.speed)),
                csv_opt(&row.measured_u.map(|m| m.r2)),
                csv_opt(&row.predicted_v),
                csv_opt(&row.measured_v.map(|m| m.speed)),
                csv_opt(&row.measured_v.map(|m| m.r2)),
                csv_opt(&row.rel_err_u),
                csv_opt(&row.rel_err_v),
                csv_opt(&row.within_tol.map(|b| if b { "yes" } else { "no" })),
                if row.critical { "yes" } else { "no" },
                csv_opt(&row.audit.map(|b| if b { "yes" } else { "no" })),
            );
        }
        out
    }

    pub fn compared(&self) -> usize {
        self.rows.iter().filter(|r| r.within_tol.is_some()).count()
    }

    pub fn within_tol(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.within_tol == Some(true))
            .count()
    }

    pub fn max_rel_err(&self) -> Option<f64> {
        self.rows
            .iter()
            .flat_map(|r| [r.rel_err_u, r.rel_err_v])
            .flatten()
            .fold(None, |acc: Option<f64>, e| Some(acc.map_or(e, |a| a.max(e))))
    }

    /// Human-readable closing block.
    pub fn summary(&self) -> String {
        let audited = self.rows.iter().filter(|r| r.audit.is_some()).count();
        let audit_ok = self.rows.iter().filter(|r| r.audit == Some(true)).count();
        let critical = self.rows.iter().filter(|r| r.critical).count();
        let mut s = String::new();
        let _ = writeln!(s, "scenario {}", self.scenario);
        let _ = writeln!(
            s,
            "directions {} (level {}, fit window {}, tolerance {})",
            self.rows.len(),
            self.level,
            self.window,
            self.tol
        );
        let _ = writeln!(
            s,
            "within tolerance {} of {} compared",
            self.within_tol(),
            self.compared()
        );
        if let Some(err) = self.max_rel_err() {
            let _ = writeln!(s, "max relative error {err:.4}");
        }
        let _ = writeln!(s, "unbounded directions audited {audited}, consistent {audit_ok}");
        let _ = writeln!(s, "directions near dominance boundaries {critical}");
        s
    }
}
