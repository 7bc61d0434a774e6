//! Directional speed profiles on the unit circle.
//!
//! A [`SpeedProfile`] is the closed-form map `e ↦ base/sin(gap)` induced by a
//! direction set (with the conventions at gap 0 and beyond π/2); a
//! [`RefinedProfile`] is the competition-limited speed of the stronger
//! species, computed as a supremum of reachable extents over the directions
//! where it outruns the other.

use std::f64::consts::{FRAC_PI_2, TAU};

use crate::error::Error;
use crate::geometry::arcs::{angular_gap, normalize_angle, DirectionSet};
use crate::vec2::Vec2;

/// Angular resolution of the supremum search in [`RefinedProfile::value`].
pub const SUP_ANGLE_RESOLUTION: f64 = 1e-10;

/// Closed-form directional speed induced by a direction set.
///
/// Value is `+∞` on the set, `base/sin(gap)` within a quarter turn of it,
/// and `base` farther away (or everywhere, for the empty set).
#[derive(Clone, Debug)]
pub struct SpeedProfile {
    dirs: DirectionSet,
    base: f64,
}

impl SpeedProfile {
    pub fn new(dirs: DirectionSet, base: f64) -> Result<Self, Error> {
        if !(base.is_finite() && base > 0.0) {
            return Err(Error::invalid_one(
                "base_speed",
                format!("must be positive and finite (got {base})"),
            ));
        }
        Ok(SpeedProfile { dirs, base })
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    /// Directions where the value is `+∞`.
    pub fn infinite_set(&self) -> &DirectionSet {
        &self.dirs
    }

    pub fn value(&self, e_angle: f64) -> f64 {
        match self.dirs.min_gap(e_angle) {
            None => self.base,
            Some((gap, _)) => {
                if gap == 0.0 || self.dirs.contains(e_angle) {
                    f64::INFINITY
                } else if gap < FRAC_PI_2 {
                    self.base / gap.sin()
                } else {
                    self.base
                }
            }
        }
    }

    /// Equivalent form: `base / dist(e, ℝ⁺·dirs ∪ {0})` with the Euclidean
    /// distance from the unit point to the cone. Exposed for equivalence
    /// testing against [`value`](Self::value).
    pub fn value_via_cone_distance(&self, e_angle: f64) -> f64 {
        let e = Vec2::from_angle(e_angle);
        let proj = project_onto_cone(e_angle, &self.dirs);
        let dist = e.dist(proj);
        if dist == 0.0 {
            f64::INFINITY
        } else {
            self.base / dist
        }
    }

    /// Angles where the closed form changes regime: arc endpoints, their
    /// quarter-turn offsets, and the midpoints of the gaps between arcs
    /// (where the nearest arc switches).
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for t in self.dirs.endpoints() {
            out.push(t);
            out.push(normalize_angle(t + FRAC_PI_2));
            out.push(normalize_angle(t - FRAC_PI_2));
        }
        for gap_arc in self.dirs.complement().arcs() {
            out.push(gap_arc.midpoint());
        }
        out
    }
}

/// Nearest point of the closed cone `ℝ⁺·dirset ∪ {0}` to the unit vector at
/// `e_angle`: the radial projection onto the nearest arc direction within a
/// quarter turn, the origin otherwise. Equidistant arc endpoints resolve to
/// the smaller angle.
pub fn project_onto_cone(e_angle: f64, dirset: &DirectionSet) -> Vec2 {
    match dirset.min_gap(e_angle) {
        None => Vec2::ZERO,
        Some((gap, nearest)) => {
            if gap >= FRAC_PI_2 {
                Vec2::ZERO
            } else {
                let xi = Vec2::from_angle(nearest);
                xi * gap.cos()
            }
        }
    }
}

/// Evenly spaced points on the segment from the unit vector at `e_angle` to
/// its cone projection, excluding any that coincide with the origin.
pub fn projection_path(e_angle: f64, dirset: &DirectionSet, samples: usize) -> Vec<Vec2> {
    let e = Vec2::from_angle(e_angle);
    let p = project_onto_cone(e_angle, dirset);
    let n = samples.max(2);
    (0..n)
        .map(|k| {
            let t = k as f64 / (n - 1) as f64;
            e + (p - e) * t
        })
        .filter(|x| x.norm() > 1e-12)
        .collect()
}

/// Extent reachable along `e` by riding the front of speed `c` in a
/// direction at angle `gap` from `e` and then invading sideways at speed
/// `cuv`: the radial support of the swept region `∪_τ B(τ·cuv, (1−τ)·c·ξ)`.
/// The sine of the gap enters directly so near-aligned directions keep full
/// precision.
fn reach_extent(c: f64, gap: f64, cuv: f64) -> f64 {
    let b = gap.cos();
    let spread = gap.sin().abs();
    if c.is_infinite() {
        // Limit c → ∞ of the finite formula.
        if b > 0.0 {
            return cuv / spread;
        }
        return cuv;
    }
    if b * c <= cuv {
        return cuv;
    }
    if spread == 0.0 {
        return c;
    }
    let root = spread * (c * c - cuv * cuv).sqrt();
    c * cuv / (cuv * b + root)
}

/// Competition-limited directional speed of the faster species.
///
/// Equals the free profile `wu` wherever `wu ≥ wv`; elsewhere it is the
/// supremum of [`reach_extent`] over the dominance directions, floored at
/// the invasion speed `cuv`.
#[derive(Clone, Debug)]
pub struct RefinedProfile {
    wu: SpeedProfile,
    wv: SpeedProfile,
    cuv: f64,
    dominance: DirectionSet,
}

impl RefinedProfile {
    /// Requires `0 < cuv < wu.base()`: the bistable invasion speed is slower
    /// than the free speed of the invader.
    pub fn new(wu: SpeedProfile, wv: SpeedProfile, cuv: f64) -> Result<Self, Error> {
        if !(cuv.is_finite() && cuv > 0.0 && cuv < wu.base()) {
            return Err(Error::invalid_one(
                "cuv",
                format!(
                    "invasion speed must lie in (0, {:.6}) for the refined profile (got {cuv})",
                    wu.base()
                ),
            ));
        }
        let dominance = dominance_arcs(&wu, &wv);
        Ok(RefinedProfile {
            wu,
            wv,
            cuv,
            dominance,
        })
    }

    pub fn free_profile(&self) -> &SpeedProfile {
        &self.wu
    }

    pub fn rival_profile(&self) -> &SpeedProfile {
        &self.wv
    }

    pub fn cuv(&self) -> f64 {
        self.cuv
    }

    /// Closed arcs where `wu ≥ wv`, boundary-refined.
    pub fn dominance(&self) -> &DirectionSet {
        &self.dominance
    }

    pub fn value(&self, e_angle: f64) -> f64 {
        let wu_e = self.wu.value(e_angle);
        if wu_e >= self.wv.value(e_angle) {
            return wu_e;
        }
        let objective = |xi: f64| {
            reach_extent(self.wu.value(xi), angular_gap(xi, e_angle), self.cuv)
        };
        let mut best = self.cuv;
        for arc in self.dominance.arcs() {
            // Evaluate every regime breakpoint of wu inside the arc, the arc
            // ends, and the in-arc angle nearest to e, then polish each
            // smooth span between consecutive candidates.
            let mut knots: Vec<f64> = vec![0.0, arc.width()];
            for t in self.wu.breakpoints() {
                let off = normalize_angle(t - arc.lo());
                if off <= arc.width() {
                    knots.push(off);
                }
            }
            if let Some((gap, nearest)) = self.dominance.min_gap(e_angle) {
                if gap == 0.0 {
                    let off = normalize_angle(nearest - arc.lo());
                    if off <= arc.width() {
                        knots.push(off);
                    }
                }
            }
            knots.sort_by(|a, b| a.partial_cmp(b).unwrap());
            knots.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
            for pair in knots.windows(2) {
                let (lo, hi) = (arc.lo() + pair[0], arc.lo() + pair[1]);
                best = best.max(sup_on_span(&objective, lo, hi));
                if best.is_infinite() {
                    return f64::INFINITY;
                }
            }
            if knots.len() == 1 {
                best = best.max(objective(arc.lo() + knots[0]));
            }
        }
        best
    }
}

/// Supremum of a piecewise-smooth objective on `[lo, hi]`: a dense scan picks
/// the basin, golden-section polishes it to [`SUP_ANGLE_RESOLUTION`].
fn sup_on_span(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    if hi - lo < 1e-15 {
        return f(lo);
    }
    let n = (((hi - lo) * 64.0).ceil() as usize).clamp(8, 512);
    let mut best_k = 0;
    let mut best_v = f64::NEG_INFINITY;
    for k in 0..=n {
        let v = f(lo + (hi - lo) * k as f64 / n as f64);
        if v > best_v {
            best_v = v;
            best_k = k;
        }
    }
    if best_v.is_infinite() {
        return best_v;
    }
    let step = (hi - lo) / n as f64;
    let mut a = lo + step * best_k.saturating_sub(1) as f64;
    let mut b = (lo + step * (best_k + 1) as f64).min(hi);
    // Golden-section ratio.
    let inv_phi = 0.5 * (5.0f64.sqrt() - 1.0);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > SUP_ANGLE_RESOLUTION {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    best_v.max(f1).max(f2)
}

/// Regime of one profile on a breakpoint-free cell.
enum Regime {
    /// Inside the direction set; the value is `+∞`.
    Infinite,
    /// Gap at least a quarter turn; the value is the constant base.
    Plateau,
    /// Gap in `(0, π/2)` and linear with slope `±1`; `gap(ξ) = g_lo + slope·(ξ − lo)`.
    Slope { g_lo: f64, slope: f64 },
    /// A breakpoint slipped inside (degenerate cell); classify pointwise.
    Mixed,
}

fn cell_regime(p: &SpeedProfile, lo: f64, hi: f64) -> Regime {
    let w = hi - lo;
    let gap_at = |t: f64| match p.infinite_set().min_gap(t) {
        None => f64::INFINITY,
        Some((gap, _)) => gap,
    };
    if p.infinite_set().contains(normalize_angle(lo + 0.5 * w)) {
        return Regime::Infinite;
    }
    let x1 = lo + w / 3.0;
    let x2 = lo + 2.0 * w / 3.0;
    let (g1, g2) = (gap_at(x1), gap_at(x2));
    if g1 >= FRAC_PI_2 && g2 >= FRAC_PI_2 {
        Regime::Plateau
    } else if g1 < FRAC_PI_2 && g2 < FRAC_PI_2 {
        let slope = if g2 > g1 { 1.0 } else { -1.0 };
        Regime::Slope {
            g_lo: g1 - slope * (x1 - lo),
            slope,
        }
    } else {
        Regime::Mixed
    }
}

/// Sub-span of `[lo, hi]` where the linear gap is on the `keep_ge` side of
/// the threshold `gamma`.
fn gap_half_line(
    lo: f64,
    hi: f64,
    g_lo: f64,
    slope: f64,
    gamma: f64,
    keep_ge: bool,
) -> Option<(f64, f64)> {
    let xi = lo + (gamma - g_lo) / slope;
    let (a, b) = if (slope > 0.0) == keep_ge {
        (xi, hi)
    } else {
        (lo, xi)
    };
    let (a, b) = (a.max(lo), b.min(hi));
    (b >= a).then_some((a, b))
}

/// Dominance sub-spans of one breakpoint-free cell, solved in closed form:
/// plateau-vs-slope boundaries sit where the gap reaches `asin(ratio)`, and
/// slope-vs-slope differences reduce to a single sinusoid.
fn dominant_cells(wu: &SpeedProfile, wv: &SpeedProfile, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    use std::f64::consts::PI;
    let (bu, bv) = (wu.base(), wv.base());
    let whole = vec![(lo, hi)];
    match (cell_regime(wu, lo, hi), cell_regime(wv, lo, hi)) {
        (Regime::Infinite, _) => whole,
        (_, Regime::Infinite) => Vec::new(),
        (Regime::Mixed, _) | (_, Regime::Mixed) => {
            let mid = normalize_angle(lo + 0.5 * (hi - lo));
            if wu.value(mid) >= wv.value(mid) {
                whole
            } else {
                Vec::new()
            }
        }
        (Regime::Plateau, Regime::Plateau) => {
            if bu >= bv {
                whole
            } else {
                Vec::new()
            }
        }
        (Regime::Plateau, Regime::Slope { g_lo, slope }) => {
            // wu ≥ bv/sin(g_v) exactly where sin(g_v) ≥ bv/bu; on a slope
            // cell the gap stays below π/2, so bv ≥ bu leaves nothing.
            if bv >= bu {
                Vec::new()
            } else {
                gap_half_line(lo, hi, g_lo, slope, (bv / bu).asin(), true)
                    .into_iter()
                    .collect()
            }
        }
        (Regime::Slope { g_lo, slope }, Regime::Plateau) => {
            if bu >= bv {
                whole
            } else {
                gap_half_line(lo, hi, g_lo, slope, (bu / bv).asin(), false)
                    .into_iter()
                    .collect()
            }
        }
        (
            Regime::Slope {
                g_lo: au,
                slope: su,
            },
            Regime::Slope {
                g_lo: av,
                slope: sv,
            },
        ) => {
            // wu ≥ wv ⟺ f(x) = bu·sin(g_v) − bv·sin(g_u) ≥ 0 with x = ξ − lo;
            // both gaps linear in x, so f = R·sin(x + ψ).
            let d0 = bu * av.sin() - bv * au.sin();
            let c0 = bu * sv * av.cos() - bv * su * au.cos();
            let r = (c0 * c0 + d0 * d0).sqrt();
            if r < f64::EPSILON * (bu + bv) {
                // Identical on the cell; ties count as dominance.
                return whole;
            }
            let psi = d0.atan2(c0);
            let w = hi - lo;
            let mut bounds = vec![0.0, w];
            for k in -2..=2 {
                let x = k as f64 * PI - psi;
                if x > 0.0 && x < w {
                    bounds.push(x);
                }
            }
            bounds.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mut out = Vec::new();
            for pair in bounds.windows(2) {
                let mid = 0.5 * (pair[0] + pair[1]);
                if r * (mid + psi).sin() >= 0.0 {
                    out.push((lo + pair[0], lo + pair[1]));
                }
            }
            out
        }
    }
}

/// Closed arcs where `wu ≥ wv`. Boundaries are solved analytically per
/// breakpoint cell, so endpoints are accurate to rounding rather than to the
/// square-root-of-epsilon blur a value comparison would give at tangential
/// crossings.
pub fn dominance_arcs(wu: &SpeedProfile, wv: &SpeedProfile) -> DirectionSet {
    let dominant = |t: f64| {
        let a = wu.value(t);
        let b = wv.value(t);
        if a.is_infinite() && b.is_infinite() {
            true
        } else {
            a >= b
        }
    };
    let mut cuts: Vec<f64> = wu
        .breakpoints()
        .into_iter()
        .chain(wv.breakpoints())
        .map(normalize_angle)
        .collect();
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
    if cuts.len() > 1 && cuts[0] + TAU - cuts[cuts.len() - 1] < 1e-13 {
        cuts.pop();
    }
    if cuts.is_empty() {
        return if dominant(0.0) {
            DirectionSet::full()
        } else {
            DirectionSet::empty()
        };
    }

    let m = cuts.len();
    let mut spans = Vec::new();
    let mut all_whole = true;
    for k in 0..m {
        let lo = cuts[k];
        let hi = if k + 1 == m { cuts[0] + TAU } else { cuts[k + 1] };
        if hi - lo <= 1e-12 {
            continue;
        }
        let cells = dominant_cells(wu, wv, lo, hi);
        all_whole &= cells.len() == 1 && cells[0] == (lo, hi);
        spans.extend(cells);
    }
    if all_whole && !spans.is_empty() {
        return DirectionSet::full();
    }
    let mut set = DirectionSet::from_spans(&spans);
    // Tangential touches can leave an isolated dominant breakpoint.
    for &t in &cuts {
        if dominant(t) && !set.contains(t) {
            set = set.union(&DirectionSet::singleton(t));
        }
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn arc_profile(lo: f64, hi: f64, base: f64) -> SpeedProfile {
        SpeedProfile::new(DirectionSet::from_spans(&[(lo, hi)]), base).unwrap()
    }

    #[test]
    fn profile_regimes() {
        let p = arc_profile(-PI / 4.0, PI / 4.0, 2.0);
        assert_relative_eq!(p.value(PI / 2.0), 2.0 * 2.0f64.sqrt(), epsilon = 1e-12);
        assert!(p.value(0.0).is_infinite());
        assert!(p.value(PI / 4.0).is_infinite());
        assert_eq!(p.value(PI), 2.0);
        assert_eq!(p.value(PI - 0.3), 2.0);

        let empty = SpeedProfile::new(DirectionSet::empty(), 3.0).unwrap();
        for k in 0..16 {
            assert_eq!(empty.value(k as f64 * 0.4), 3.0);
        }
    }

    #[test]
    fn profile_forms_agree() {
        let p = arc_profile(0.3, 1.1, 1.7);
        for k in 0..720 {
            let t = TAU * k as f64 / 720.0;
            let a = p.value(t);
            let b = p.value_via_cone_distance(t);
            if a.is_infinite() {
                assert!(b.is_infinite(), "mismatch at {t}");
            } else {
                assert_relative_eq!(a, b, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn projection_examples() {
        let dirs = DirectionSet::from_spans(&[(-PI / 4.0, PI / 4.0)]);
        let p = project_onto_cone(PI / 2.0, &dirs);
        assert_relative_eq!(p.x, 0.5, epsilon = 1e-12);
        assert_relative_eq!(p.y, 0.5, epsilon = 1e-12);
        let q = project_onto_cone(0.0, &dirs);
        assert_relative_eq!(q.x, 1.0, epsilon = 1e-12);
        assert_relative_eq!(q.y, 0.0, epsilon = 1e-12);
        assert_eq!(project_onto_cone(PI, &dirs), Vec2::ZERO);
        assert_eq!(project_onto_cone(0.7, &DirectionSet::empty()), Vec2::ZERO);
    }

    #[test]
    fn projection_path_excludes_origin() {
        let path = projection_path(PI, &DirectionSet::empty(), 8);
        assert_eq!(path.len(), 7);
        assert!(path.iter().all(|x| x.norm() > 0.0));
    }

    #[test]
    fn refined_equals_free_speed_under_global_dominance() {
        let wu = SpeedProfile::new(DirectionSet::empty(), 4.0).unwrap();
        let wv = SpeedProfile::new(DirectionSet::empty(), 2.0).unwrap();
        let s = RefinedProfile::new(wu, wv, 1.0).unwrap();
        assert!(s.dominance().is_full());
        for k in 0..64 {
            assert_eq!(s.value(TAU * k as f64 / 64.0), 4.0);
        }
    }

    #[test]
    fn refined_falls_back_to_invasion_speed() {
        let wu = SpeedProfile::new(DirectionSet::empty(), 1.0).unwrap();
        let wv = SpeedProfile::new(DirectionSet::empty(), 2.0).unwrap();
        let s = RefinedProfile::new(wu, wv, 0.5).unwrap();
        assert!(s.dominance().is_empty());
        for k in 0..64 {
            assert_eq!(s.value(TAU * k as f64 / 64.0), 0.5);
        }
    }

    #[test]
    fn opposed_half_infinite_supports() {
        // u unbounded downward, v unbounded upward, equal base speeds.
        let wu = SpeedProfile::new(DirectionSet::singleton(1.5 * PI), 2.0).unwrap();
        let wv = SpeedProfile::new(DirectionSet::singleton(0.5 * PI), 2.0).unwrap();
        let cuv = 0.7;
        let s = RefinedProfile::new(wu, wv, cuv).unwrap();
        // Dominance is the lower half circle, endpoints included.
        assert!(s.dominance().contains(0.0));
        assert!(s.dominance().contains(PI));
        assert!(s.dominance().contains(1.5 * PI));
        assert!(!s.dominance().contains(0.5 * PI));
        assert!(!s.dominance().contains(0.4));

        // Straight into the rival's territory only the invasion speed is left.
        assert_relative_eq!(s.value(0.5 * PI), cuv, epsilon = 1e-9);
        // Along the axis of its own support the speed is unbounded.
        assert!(s.value(1.5 * PI).is_infinite());
        // Sideways, the reach of the boundary dominance direction.
        let phi: f64 = 0.3;
        let expect = 2.0 * cuv
            / (cuv * phi.cos() + phi.sin() * (4.0f64 - cuv * cuv).sqrt());
        assert_relative_eq!(s.value(phi), expect, max_relative = 1e-12);
    }

    #[test]
    fn refined_between_invasion_and_free_profiles() {
        let wu = SpeedProfile::new(DirectionSet::from_spans(&[(3.5, 4.5)]), 2.0).unwrap();
        let wv = SpeedProfile::new(DirectionSet::from_spans(&[(0.2, 1.3)]), 2.0).unwrap();
        let cuv = 0.9;
        let wuv = SpeedProfile::new(DirectionSet::from_spans(&[(3.5, 4.5)]), cuv).unwrap();
        let s = RefinedProfile::new(wu.clone(), wv, cuv).unwrap();
        for k in 0..512 {
            let t = TAU * k as f64 / 512.0;
            let su = s.value(t);
            let wu_t = wu.value(t);
            let wuv_t = wuv.value(t);
            if s.dominance().contains(t) {
                assert_eq!(su, wu_t, "on dominance at {t}");
            } else {
                assert!(
                    su >= wuv_t - 1e-9 && su < wu_t,
                    "at {t}: wuv {wuv_t} su {su} wu {wu_t}"
                );
            }
        }
    }

    #[test]
    fn rejects_out_of_range_invasion_speed() {
        let wu = SpeedProfile::new(DirectionSet::empty(), 2.0).unwrap();
        let wv = SpeedProfile::new(DirectionSet::empty(), 2.0).unwrap();
        assert!(RefinedProfile::new(wu.clone(), wv.clone(), 0.0).is_err());
        assert!(RefinedProfile::new(wu, wv, 2.5).is_err());
    }
}
