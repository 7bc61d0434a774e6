//! Closed-arc subsets of the unit circle.
//!
//! Directions are angles in radians; a [`DirectionSet`] is a normalized union
//! of closed arcs, including degenerate single-point arcs (used for supports
//! such as strips whose unbounded directions are isolated). Set complements
//! are taken in the closed-arc algebra, i.e. the complement returned is the
//! closure of the set-theoretic complement. That convention makes
//! `complement` total on this representation; the one place where an open set
//! must be represented faithfully (the idealized ball-chain support) instead
//! carves a small explicit hole, see `support::CHAIN_GAP_HALF_WIDTH`.

use std::f64::consts::{PI, TAU};

/// Angular slack for membership tests. Two directions closer than this are
/// treated as equal.
pub const ANGLE_EPS: f64 = 1e-12;

/// Map an angle to `[0, 2π)`.
pub fn normalize_angle(t: f64) -> f64 {
    let mut r = t % TAU;
    if r < 0.0 {
        r += TAU;
    }
    // The addition above can round exactly to 2π for tiny negative inputs.
    if r >= TAU {
        r = 0.0;
    }
    r
}

/// Shorter angular distance between two directions, in `[0, π]`.
pub fn angular_gap(a: f64, b: f64) -> f64 {
    let d = (normalize_angle(a) - normalize_angle(b)).abs();
    d.min(TAU - d)
}

/// One closed arc, counterclockwise from `lo` to `hi`.
///
/// Invariants: `0 ≤ lo < 2π` and `lo ≤ hi ≤ lo + 2π`. `hi == lo` is a single
/// point; `hi == lo + 2π` only occurs for the full circle.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Arc {
    lo: f64,
    hi: f64,
}

impl Arc {
    pub fn lo(&self) -> f64 {
        self.lo
    }

    /// Upper endpoint as stored; may exceed 2π when the arc wraps.
    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Upper endpoint as a direction in `[0, 2π)`.
    pub fn hi_angle(&self) -> f64 {
        normalize_angle(self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        normalize_angle(0.5 * (self.lo + self.hi))
    }

    pub fn contains(&self, angle: f64) -> bool {
        let t = normalize_angle(angle);
        (self.lo - ANGLE_EPS..=self.hi + ANGLE_EPS).contains(&t)
            || (self.lo - ANGLE_EPS..=self.hi + ANGLE_EPS).contains(&(t + TAU))
    }

    /// Angle of the arc closest to `angle`, with the angular distance to it.
    fn nearest(&self, angle: f64) -> (f64, f64) {
        if self.contains(angle) {
            return (0.0, normalize_angle(angle));
        }
        let t = normalize_angle(angle);
        let d_lo = angular_gap(t, self.lo);
        let d_hi = angular_gap(t, self.hi);
        // Ties resolve to the smaller normalized endpoint for determinism.
        let (lo_n, hi_n) = (normalize_angle(self.lo), self.hi_angle());
        if d_lo < d_hi || (d_lo == d_hi && lo_n <= hi_n) {
            (d_lo, lo_n)
        } else {
            (d_hi, hi_n)
        }
    }
}

/// A normalized union of closed arcs on the circle.
///
/// Arcs are sorted by lower endpoint, pairwise disjoint, and non-touching;
/// only the last arc may wrap through 0.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct DirectionSet {
    arcs: Vec<Arc>,
}

impl DirectionSet {
    pub fn empty() -> Self {
        DirectionSet { arcs: Vec::new() }
    }

    pub fn full() -> Self {
        DirectionSet {
            arcs: vec![Arc { lo: 0.0, hi: TAU }],
        }
    }

    /// A single direction.
    pub fn singleton(angle: f64) -> Self {
        let t = normalize_angle(angle);
        DirectionSet {
            arcs: vec![Arc { lo: t, hi: t }],
        }
    }

    /// Builds a set from counterclockwise `(lo, hi)` spans.
    ///
    /// A span with `hi == lo` is a single point; a span of width 2π or more
    /// is the full circle. Spans may overlap and arrive in any order.
    pub fn from_spans(spans: &[(f64, f64)]) -> Self {
        let mut segments: Vec<(f64, f64)> = Vec::new();
        for &(lo, hi) in spans {
            if !(lo.is_finite() && hi.is_finite()) {
                continue;
            }
            if hi - lo >= TAU {
                return DirectionSet::full();
            }
            let lo_n = normalize_angle(lo);
            let width = if hi == lo {
                0.0
            } else {
                let w = normalize_angle(hi - lo);
                // A nonzero span that normalizes to zero width is a full turn.
                if w == 0.0 {
                    return DirectionSet::full();
                }
                w
            };
            let hi_n = lo_n + width;
            if hi_n <= TAU {
                segments.push((lo_n, hi_n));
            } else {
                segments.push((lo_n, TAU));
                segments.push((0.0, hi_n - TAU));
            }
        }
        Self::from_segments(segments)
    }

    /// Normalizes non-wrapping segments on `[0, 2π]` into the invariant form.
    fn from_segments(mut segments: Vec<(f64, f64)>) -> Self {
        if segments.is_empty() {
            return DirectionSet::empty();
        }
        segments.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(segments.len());
        for (lo, hi) in segments {
            match merged.last_mut() {
                Some(last) if lo <= last.1 + ANGLE_EPS => {
                    last.1 = last.1.max(hi);
                }
                _ => merged.push((lo, hi)),
            }
        }
        // Glue a segment ending at 2π to one starting at 0.
        if merged.len() >= 2 {
            let first = merged[0];
            let last = *merged.last().unwrap();
            if last.1 >= TAU - ANGLE_EPS && first.0 <= ANGLE_EPS {
                if first.1 >= last.0 {
                    return DirectionSet::full();
                }
                merged.pop();
                merged.remove(0);
                merged.push((last.0, first.1 + TAU));
            }
        } else if merged.len() == 1 && merged[0].0 <= ANGLE_EPS && merged[0].1 >= TAU - ANGLE_EPS {
            return DirectionSet::full();
        }
        DirectionSet {
            arcs: merged.into_iter().map(|(lo, hi)| Arc { lo, hi }).collect(),
        }
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.arcs.len() == 1 && self.arcs[0].width() >= TAU - ANGLE_EPS
    }

    /// Total angular measure.
    pub fn measure(&self) -> f64 {
        self.arcs.iter().map(Arc::width).sum()
    }

    pub fn contains(&self, angle: f64) -> bool {
        self.arcs.iter().any(|a| a.contains(angle))
    }

    pub fn union(&self, other: &DirectionSet) -> DirectionSet {
        let spans: Vec<(f64, f64)> = self
            .arcs
            .iter()
            .chain(other.arcs.iter())
            .map(|a| (a.lo, a.hi))
            .collect();
        DirectionSet::from_spans(&spans)
    }

    /// Closure of the set-theoretic complement.
    ///
    /// Gaps between consecutive arcs become closed arcs sharing endpoints
    /// with this set; consequently the complement of a single point is the
    /// full circle.
    pub fn complement(&self) -> DirectionSet {
        if self.is_empty() {
            return DirectionSet::full();
        }
        if self.is_full() {
            return DirectionSet::empty();
        }
        let mut spans = Vec::with_capacity(self.arcs.len());
        for (k, arc) in self.arcs.iter().enumerate() {
            let next_lo = if k + 1 < self.arcs.len() {
                self.arcs[k + 1].lo
            } else {
                self.arcs[0].lo + TAU
            };
            let gap_lo = arc.hi;
            if next_lo > gap_lo + ANGLE_EPS {
                spans.push((normalize_angle(gap_lo), normalize_angle(gap_lo) + (next_lo - gap_lo)));
            }
        }
        DirectionSet::from_spans(&spans)
    }

    /// Smallest angular distance from `angle` to the set, with the nearest
    /// set direction. Ties between arcs resolve to the smaller normalized
    /// direction. `None` when the set is empty.
    pub fn min_gap(&self, angle: f64) -> Option<(f64, f64)> {
        self.arcs
            .iter()
            .map(|a| a.nearest(angle))
            .min_by(|x, y| x.partial_cmp(y).unwrap())
    }

    /// Endpoints of every arc, normalized; single-point arcs contribute once.
    pub fn endpoints(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(2 * self.arcs.len());
        for a in &self.arcs {
            out.push(normalize_angle(a.lo));
            if a.width() > 0.0 {
                out.push(a.hi_angle());
            }
        }
        out
    }

    /// Uniform samples covering every arc, endpoints included; single-point
    /// arcs contribute their point. `per_unit` is the sample density per
    /// radian (at least 2 samples per arc).
    pub fn sample(&self, per_unit: f64) -> Vec<f64> {
        let mut out = Vec::new();
        for a in &self.arcs {
            if a.width() == 0.0 {
                out.push(normalize_angle(a.lo));
                continue;
            }
            let n = ((a.width() * per_unit).ceil() as usize).max(2);
            for k in 0..n {
                let t = a.lo + a.width() * (k as f64) / ((n - 1) as f64);
                out.push(normalize_angle(t));
            }
        }
        out
    }
}

impl std::fmt::Display for DirectionSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_empty() {
            return write!(f, "{{}}");
        }
        if self.is_full() {
            return write!(f, "S1");
        }
        for (k, a) in self.arcs.iter().enumerate() {
            if k > 0 {
                write!(f, " ∪ ")?;
            }
            if a.width() == 0.0 {
                write!(f, "{{{:.6}}}", a.lo)?;
            } else {
                write!(f, "[{:.6}, {:.6}]", a.lo, a.hi)?;
            }
        }
        Ok(())
    }
}

/// Convenience for a half-circle of directions `e` with `e·n ≤ 0` for the
/// unit direction at `normal_angle`.
pub fn half_circle_against(normal_angle: f64) -> DirectionSet {
    let lo = normal_angle + PI / 2.0;
    DirectionSet::from_spans(&[(lo, lo + PI)])
}
