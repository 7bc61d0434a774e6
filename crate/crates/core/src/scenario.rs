//! Scenario files: the TOML description tying parameters, initial regions,
//! grid, run schedule and measurement plan together.

use crate::error::{Error, Issue};
use crate::geometry::support::SupportSpec;
use crate::params::Params;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Minimum padding between the predicted farthest front and the domain edge.
pub const DOMAIN_MARGIN: f64 = 20.0;

/// Symmetric computational domain: `[-extent, extent]^2` at spacing `h`.
#[derive(Copy, Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub extent: f64,
    pub h: f64,
}

/// Time horizon and requested snapshot times.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub horizon: f64,
    pub snapshot_times: Vec<f64>,
}

/// Front-measurement plan: direction count, level-set threshold, the
/// trailing fraction of snapshots used for speed fits, and the relative
/// tolerance for prediction comparisons.
#[derive(Copy, Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MeasurementSpec {
    pub directions: usize,
    pub level: f64,
    pub window: f64,
    pub tol: f64,
}

impl Default for MeasurementSpec {
    fn default() -> Self {
        MeasurementSpec {
            directions: 16,
            level: 0.5,
            window: 0.5,
            tol: 0.15,
        }
    }
}

/// Externally supplied interface speed with its confidence half-width.
#[derive(Copy, Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CuvSpec {
    pub value: f64,
    pub ci_halfwidth: f64,
}

/// One complete experiment description.
///
/// Scalar fields precede the tables so the canonical serialization is valid
/// TOML.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    /// Interior margin the first species' region must provide.
    pub rho: f64,
    /// Interior margin the second species' region must provide.
    pub alpha: f64,
    pub params: Params,
    pub support_u: SupportSpec,
    pub support_v: SupportSpec,
    pub grid: GridSpec,
    pub run: RunSpec,
    #[serde(default)]
    pub measurement: MeasurementSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cuv: Option<CuvSpec>,
}

impl Scenario {
    /// Parses and validates a scenario from TOML text.
    pub fn from_toml(text: &str) -> Result<Self, Error> {
        let scenario: Scenario = toml::from_str(text).map_err(|e| {
            let (line, column) = e
                .span()
                .map(|s| line_column(text, s.start))
                .unwrap_or((0, 0));
            Error::Parse {
                line,
                column,
                message: e.message().to_string(),
            }
        })?;
        scenario.validate()?;
        Ok(scenario)
    }

    /// Reads a scenario file.
    pub fn from_path(path: &std::path::Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        Scenario::from_toml(&text)
    }

    /// Aggregated semantic validation; every issue names the offending field.
    pub fn validate(&self) -> Result<(), Error> {
        let mut issues = Vec::new();
        self.params.validate("params", &mut issues);
        if self.params.a.is_finite() && self.params.a <= 1.0 {
            issues.push(Issue::new(
                "params.a",
                format!(
                    "strong competition requires a > 1, got {}",
                    self.params.a
                ),
            ));
        }
        if self.params.b.is_finite() && self.params.b <= 1.0 {
            issues.push(Issue::new(
                "params.b",
                format!(
                    "strong competition requires b > 1, got {}",
                    self.params.b
                ),
            ));
        }

        self.support_u.validate("support_u", &mut issues);
        self.support_v.validate("support_v", &mut issues);
        if self.support_u.effectively_empty() {
            issues.push(Issue::new("support_u", "initial region must be nonempty"));
        }
        if self.support_v.effectively_empty() {
            issues.push(Issue::new("support_v", "initial region must be nonempty"));
        }

        for (path, value) in [("rho", self.rho), ("alpha", self.alpha)] {
            if !(value.is_finite() && value > 0.0) {
                issues.push(Issue::new(
                    path,
                    format!("interior margin must be positive and finite, got {value}"),
                ));
            }
        }

        if !(self.grid.h.is_finite() && self.grid.h > 0.0) {
            issues.push(Issue::new(
                "grid.h",
                format!("spacing must be positive and finite, got {}", self.grid.h),
            ));
        }
        if !(self.grid.extent.is_finite() && self.grid.extent > 0.0) {
            issues.push(Issue::new(
                "grid.extent",
                format!(
                    "domain half-width must be positive and finite, got {}",
                    self.grid.extent
                ),
            ));
        } else if self.grid.h.is_finite() && self.grid.h > 0.0 && self.grid.extent < 4.0 * self.grid.h
        {
            issues.push(Issue::new(
                "grid.extent",
                "domain must span at least four cells per half-axis",
            ));
        }

        if !(self.run.horizon.is_finite() && self.run.horizon > 0.0) {
            issues.push(Issue::new(
                "run.horizon",
                format!(
                    "time horizon must be positive and finite, got {}",
                    self.run.horizon
                ),
            ));
        } else if self.params_ok_for_sizing() && self.grid.extent.is_finite() {
            let needed =
                self.params.c_u().max(self.params.c_v()) * self.run.horizon + DOMAIN_MARGIN;
            if self.grid.extent < needed {
                issues.push(Issue::new(
                    "grid.extent",
                    format!(
                        "domain half-width {} cannot contain the fastest front over the horizon; need at least {needed:.1}",
                        self.grid.extent
                    ),
                ));
            }
        }

        let mut last = 0.0_f64;
        for (i, &t) in self.run.snapshot_times.iter().enumerate() {
            let path = format!("run.snapshot_times[{i}]");
            if !(t.is_finite() && t >= 0.0) {
                issues.push(Issue::new(&path, format!("must be a nonnegative time, got {t}")));
                continue;
            }
            if self.run.horizon.is_finite() && t > self.run.horizon {
                issues.push(Issue::new(
                    &path,
                    format!("exceeds the run horizon {}", self.run.horizon),
                ));
            }
            if t < last {
                issues.push(Issue::new(&path, "snapshot times must be nondecreasing"));
            }
            last = t;
        }

        if self.measurement.directions == 0 {
            issues.push(Issue::new(
                "measurement.directions",
                "need at least one measurement direction",
            ));
        }
        if !(self.measurement.level > 0.0 && self.measurement.level < 1.0) {
            issues.push(Issue::new(
                "measurement.level",
                format!(
                    "level threshold must lie in (0, 1), got {}",
                    self.measurement.level
                ),
            ));
        }
        if !(self.measurement.window > 0.0 && self.measurement.window <= 1.0) {
            issues.push(Issue::new(
                "measurement.window",
                format!(
                    "fit window must lie in (0, 1], got {}",
                    self.measurement.window
                ),
            ));
        }
        if !(self.measurement.tol.is_finite() && self.measurement.tol > 0.0) {
            issues.push(Issue::new(
                "measurement.tol",
                format!(
                    "comparison tolerance must be positive, got {}",
                    self.measurement.tol
                ),
            ));
        }

        if let Some(cuv) = &self.cuv {
            if !cuv.value.is_finite() {
                issues.push(Issue::new("cuv.value", "interface speed must be finite"));
            } else if self.params_ok_for_sizing() {
                let (lo, hi) = (-self.params.c_v(), self.params.c_u());
                if cuv.value <= lo || cuv.value >= hi {
                    issues.push(Issue::new(
                        "cuv.value",
                        format!(
                            "interface speed must lie strictly between {lo} and {hi}, got {}",
                            cuv.value
                        ),
                    ));
                }
            }
            if !(cuv.ci_halfwidth.is_finite() && cuv.ci_halfwidth >= 0.0) {
                issues.push(Issue::new(
                    "cuv.ci_halfwidth",
                    format!(
                        "confidence half-width must be nonnegative, got {}",
                        cuv.ci_halfwidth
                    ),
                ));
            }
        }

        if issues.is_empty() {
            Ok(())
        } else {
            Err(Error::Invalid(issues))
        }
    }

    fn params_ok_for_sizing(&self) -> bool {
        let p = &self.params;
        p.d.is_finite() && p.d > 0.0 && p.r.is_finite() && p.r > 0.0
    }

    /// Canonical serialized form: field order and formatting fixed by the
    /// struct definitions, comments and layout of the source file dropped.
    pub fn canonical_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    /// Hex digest of the canonical form; embedded in every derived output so
    /// stale caches are detectable.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical_toml().as_bytes());
        let mut out = String::with_capacity(64);
        for byte in digest {
            use std::fmt::Write;
            write!(out, "{byte:02x}").expect("hex digest");
        }
        out
    }
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let clamped = offset.min(text.len());
    let mut line = 1;
    let mut column = 1;
    for ch in text[..clamped].chars() {
        if ch == '\n' {
            line += 1;
            column = 1;
        } else {
            column += 1;
        }
    }
    (line, column)
}
