//! Hypothesis checks for the spreading predictions.
//!
//! Each check returns a [`ConditionReport`] with a three-way verdict.
//! Sampling-based checks (projection paths, star-shape, dominance closure)
//! are approximate by nature; a failing verdict always carries a witness,
//! and borderline classifications surface as `Undecidable` rather than
//! silently passing.

use std::f64::consts::TAU;

use crate::geometry::arcs::{normalize_angle, DirectionSet, ANGLE_EPS};
use crate::geometry::profile::{projection_path, SpeedProfile};
use crate::geometry::support::SupportSpec;
use crate::params::{Params, Species};
use crate::vec2::Vec2;

/// Directions used to cross-check arc arithmetic by sampling.
pub const COVER_CROSS_SAMPLES: usize = 4096;

/// Relative tolerance for classifying two profile values as equal.
pub const EQUALITY_REL_TOL: f64 = 1e-9;

/// Angular slack for region membership along sampled projection paths.
pub const PATH_MEMBERSHIP_SLACK: f64 = 1e-9;

/// Identifies a checked hypothesis.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Condition {
    /// Bounded directions of the support, joined with the unbounded
    /// directions of its positive-distance interior, cover the circle.
    DirectionCover(Species),
    /// The species' profile strictly exceeds the rival's along every sampled
    /// projection path onto its unbounded-direction cone.
    PathDominance(Species),
    /// The cone over the directions where the species strictly outruns the
    /// rival is star-shaped with respect to its unbounded-direction cone.
    StarShaped(Species),
    /// The strict-dominance direction set has the non-strict set as closure:
    /// no fat equality arcs.
    DominanceClosure,
    /// Both exclusion states are stable: a > 1 and b > 1.
    StrongCompetition,
    /// The invasion front moves toward the weaker species: c_uv > 0.
    PositiveInvasionSpeed,
}

impl Condition {
    pub fn id(&self) -> String {
        match self {
            Condition::DirectionCover(s) => format!("direction_cover_{s}"),
            Condition::PathDominance(s) => format!("path_dominance_{s}"),
            Condition::StarShaped(s) => format!("star_shaped_{s}"),
            Condition::DominanceClosure => "dominance_closure".to_string(),
            Condition::StrongCompetition => "strong_competition".to_string(),
            Condition::PositiveInvasionSpeed => "positive_invasion_speed".to_string(),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    Undecidable,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Holds => write!(f, "holds"),
            Verdict::Fails => write!(f, "fails"),
            Verdict::Undecidable => write!(f, "undecidable"),
        }
    }
}

/// Evidence attached to a failing or undecidable verdict.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    Direction(f64),
    Point(Vec2),
    Text(String),
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Witness::Direction(t) => write!(f, "direction {t:.9}"),
            Witness::Point(p) => write!(f, "point {p}"),
            Witness::Text(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConditionReport {
    pub condition: Condition,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub tolerance: f64,
}

impl ConditionReport {
    fn holds(condition: Condition, tolerance: f64) -> Self {
        ConditionReport {
            condition,
            verdict: Verdict::Holds,
            witnesses: Vec::new(),
            tolerance,
        }
    }

    fn fails(condition: Condition, tolerance: f64, witnesses: Vec<Witness>) -> Self {
        debug_assert!(!witnesses.is_empty());
        ConditionReport {
            condition,
            verdict: Verdict::Fails,
            witnesses,
            tolerance,
        }
    }

    pub fn is_holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

impl std::fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: {} (tolerance {:.3e})",
            self.condition.id(),
            self.verdict,
            self.tolerance
        )?;
        for w in &self.witnesses {
            write!(f, "\n  witness: {w}")?;
        }
        Ok(())
    }
}

/// Checks that `bounded_directions(spec) ∪ unbounded_directions(interior)`
/// covers the circle, where `interior` is the positive-distance interior at
/// `rho`. An empty interior fails outright.
pub fn check_direction_cover(species: Species, spec: &SupportSpec, rho: f64) -> ConditionReport {
    let condition = Condition::DirectionCover(species);
    let interior = spec.positive_distance_interior(rho);
    if interior.is_empty_marker() {
        return ConditionReport::fails(
            condition,
            ANGLE_EPS,
            vec![Witness::Text(format!(
                "positive-distance interior is empty at depth {rho}"
            ))],
        );
    }
    let covered = spec
        .bounded_directions()
        .union(&interior.unbounded_directions());
    let uncovered = covered.complement();
    if uncovered.is_empty() {
        // Cross-check the arc arithmetic by direct sampling.
        for k in 0..COVER_CROSS_SAMPLES {
            let t = TAU * k as f64 / COVER_CROSS_SAMPLES as f64;
            if !covered.contains(t) {
                return ConditionReport::fails(condition, ANGLE_EPS, vec![Witness::Direction(t)]);
            }
        }
        return ConditionReport::holds(condition, ANGLE_EPS);
    }
    let witnesses = uncovered
        .arcs()
        .iter()
        .map(|a| Witness::Direction(a.midpoint()))
        .collect();
    ConditionReport::fails(condition, ANGLE_EPS, witnesses)
}

/// Checks `prof_a > prof_b` at every sampled direction of the projection
/// path from `e` onto the cone of `dirset`. Both values infinite counts as a
/// violation (no strict excess).
pub fn check_path_condition(
    species: Species,
    e_angle: f64,
    dirset: &DirectionSet,
    prof_a: &SpeedProfile,
    prof_b: &SpeedProfile,
    samples: usize,
) -> ConditionReport {
    let condition = Condition::PathDominance(species);
    for x in projection_path(e_angle, dirset, samples.max(2)) {
        let t = x.angle();
        let a = prof_a.value(t);
        let b = prof_b.value(t);
        let strict = if a.is_infinite() {
            !b.is_infinite()
        } else {
            a > b
        };
        if !strict {
            return ConditionReport::fails(condition, 0.0, vec![Witness::Direction(t)]);
        }
    }
    ConditionReport::holds(condition, 0.0)
}

/// Aggregates [`check_path_condition`] over `n_e` evenly spaced directions,
/// restricted to those where `prof_a(e) > prof_b(e)` strictly (the condition
/// is vacuous elsewhere).
pub fn check_path_dominance(
    species: Species,
    dirset: &DirectionSet,
    prof_a: &SpeedProfile,
    prof_b: &SpeedProfile,
    n_e: usize,
    path_samples: usize,
) -> ConditionReport {
    let condition = Condition::PathDominance(species);
    let mut witnesses = Vec::new();
    for k in 0..n_e {
        let e = TAU * k as f64 / n_e as f64;
        let a = prof_a.value(e);
        let b = prof_b.value(e);
        let strict = if a.is_infinite() { !b.is_infinite() } else { a > b };
        if !strict {
            continue;
        }
        let r = check_path_condition(species, e, dirset, prof_a, prof_b, path_samples);
        if r.verdict == Verdict::Fails {
            witnesses.extend(r.witnesses);
            if witnesses.len() >= 8 {
                break;
            }
        }
    }
    if witnesses.is_empty() {
        ConditionReport::holds(condition, 0.0)
    } else {
        ConditionReport::fails(condition, 0.0, witnesses)
    }
}

/// Checks that the cone over `region` is star-shaped with respect to the
/// cone over `dirset`: sampled interior directions of `region` have their
/// whole projection path inside the closure of the region cone.
pub fn check_star_shaped(
    species: Species,
    region: &DirectionSet,
    dirset: &DirectionSet,
    angular_samples: usize,
    path_samples: usize,
) -> ConditionReport {
    let condition = Condition::StarShaped(species);
    if region.is_empty() {
        return ConditionReport::holds(condition, PATH_MEMBERSHIP_SLACK);
    }
    let in_region = |angle: f64| match region.min_gap(angle) {
        None => false,
        Some((gap, _)) => gap <= PATH_MEMBERSHIP_SLACK,
    };
    let mut witnesses = Vec::new();
    'outer: for arc in region.arcs() {
        let n = ((arc.width() / TAU * angular_samples as f64).ceil() as usize).max(1);
        for k in 0..n {
            // Midpoint sampling keeps to the interior of the (relatively
            // open) region.
            let e = normalize_angle(arc.lo() + arc.width() * (k as f64 + 0.5) / n as f64);
            for x in projection_path(e, dirset, path_samples.max(2)) {
                if !in_region(x.angle()) {
                    witnesses.push(Witness::Point(x));
                    if witnesses.len() >= 8 {
                        break 'outer;
                    }
                    break;
                }
            }
        }
    }
    if witnesses.is_empty() {
        ConditionReport::holds(condition, PATH_MEMBERSHIP_SLACK)
    } else {
        ConditionReport::fails(condition, PATH_MEMBERSHIP_SLACK, witnesses)
    }
}

/// Checks that every direction where the two profiles are equal is a limit
/// of directions where `prof_u` strictly wins, at the sampling resolution.
/// Exact fat equality arcs fail; equality only within tolerance is reported
/// as undecidable.
pub fn check_strict_dominance_closure(
    prof_u: &SpeedProfile,
    prof_v: &SpeedProfile,
    samples: usize,
    tol: f64,
) -> ConditionReport {
    let condition = Condition::DominanceClosure;
    let n = samples.max(64);
    #[derive(Copy, Clone, PartialEq)]
    enum Class {
        Above,
        EqualExact,
        EqualWithinTol,
        Below,
    }
    let classify = |t: f64| {
        let a = prof_u.value(t);
        let b = prof_v.value(t);
        if a.is_infinite() || b.is_infinite() {
            return if a.is_infinite() && b.is_infinite() {
                Class::EqualExact
            } else if a.is_infinite() {
                Class::Above
            } else {
                Class::Below
            };
        }
        let scale = a.abs().max(b.abs()).max(1.0);
        if a == b {
            Class::EqualExact
        } else if (a - b).abs() <= tol * scale {
            Class::EqualWithinTol
        } else if a > b {
            Class::Above
        } else {
            Class::Below
        }
    };
    let classes: Vec<Class> = (0..n).map(|k| classify(TAU * k as f64 / n as f64)).collect();
    let mut undecided = Vec::new();
    let mut failed = Vec::new();
    for k in 0..n {
        let c = classes[k];
        if c == Class::Above || c == Class::Below {
            continue;
        }
        let prev = classes[(k + n - 1) % n];
        let next = classes[(k + 1) % n];
        if prev == Class::Above || next == Class::Above {
            continue;
        }
        let t = TAU * k as f64 / n as f64;
        if c == Class::EqualExact {
            failed.push(Witness::Direction(t));
        } else {
            undecided.push(Witness::Direction(t));
        }
        if failed.len() + undecided.len() >= 8 {
            break;
        }
    }
    if !failed.is_empty() {
        ConditionReport::fails(condition, tol, failed)
    } else if !undecided.is_empty() {
        ConditionReport {
            condition,
            verdict: Verdict::Undecidable,
            witnesses: undecided,
            tolerance: tol,
        }
    } else {
        ConditionReport::holds(condition, tol)
    }
}

/// Checks a > 1 and b > 1.
pub fn check_strong_competition(params: &Params) -> ConditionReport {
    let condition = Condition::StrongCompetition;
    if params.strong_competition() {
        return ConditionReport::holds(condition, 0.0);
    }
    let mut witnesses = Vec::new();
    if !(params.a > 1.0) {
        witnesses.push(Witness::Text(format!("a = {} is not above 1", params.a)));
    }
    if !(params.b > 1.0) {
        witnesses.push(Witness::Text(format!("b = {} is not above 1", params.b)));
    }
    ConditionReport::fails(condition, 0.0, witnesses)
}

/// Checks that the invasion speed is positive beyond its error bar;
/// undecidable when zero lies inside the band.
pub fn check_positive_invasion_speed(value: f64, ci_halfwidth: f64) -> ConditionReport {
    let condition = Condition::PositiveInvasionSpeed;
    if value - ci_halfwidth > 0.0 {
        ConditionReport::holds(condition, ci_halfwidth)
    } else if value + ci_halfwidth < 0.0 {
        ConditionReport::fails(
            condition,
            ci_halfwidth,
            vec![Witness::Text(format!(
                "invasion speed {value:.6} ± {ci_halfwidth:.6} is negative"
            ))],
        )
    } else {
        ConditionReport {
            condition,
            verdict: Verdict::Undecidable,
            witnesses: vec![Witness::Text(format!(
                "confidence band {value:.6} ± {ci_halfwidth:.6} contains zero"
            ))],
            tolerance: ci_halfwidth,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::support::CHAIN_GAP_HALF_WIDTH;
    use std::f64::consts::PI;

    fn ball(r: f64) -> SupportSpec {
        SupportSpec::Ball {
            center: Vec2::ZERO,
            radius: r,
        }
    }

    #[test]
    fn cover_holds_for_compact_and_cone() {
        assert!(check_direction_cover(Species::U, &ball(3.0), 1.0).is_holds());
        let cone = SupportSpec::Cone {
            vertex: Vec2::ZERO,
            angle_lo: -PI / 4.0,
            angle_hi: PI / 4.0,
        };
        assert!(check_direction_cover(Species::U, &cone, 1.0).is_holds());
    }

    #[test]
    fn cover_fails_for_idealized_chain_with_axis_witness() {
        let chain = SupportSpec::BallChain {
            direction: Vec2::new(1.0, 0.0),
            radius: 1.0,
            ratio: 2.0,
            count: 6,
            idealized_infinite: true,
        };
        let r = check_direction_cover(Species::U, &chain, 0.25);
        assert_eq!(r.verdict, Verdict::Fails);
        match r.witnesses[0] {
            Witness::Direction(t) => {
                let gap = t.min(TAU - t);
                assert!(gap <= CHAIN_GAP_HALF_WIDTH, "witness {t} not on the axis");
            }
            ref other => panic!("expected a direction witness, got {other:?}"),
        }
    }

    #[test]
    fn cover_fails_when_interior_empties() {
        let strip = SupportSpec::Strip {
            normal: Vec2::new(0.0, 1.0),
            half_width: 0.5,
        };
        let r = check_direction_cover(Species::U, &strip, 1.0);
        assert_eq!(r.verdict, Verdict::Fails);
        assert!(matches!(r.witnesses[0], Witness::Text(_)));
    }

    #[test]
    fn path_condition_compact_case() {
        let fast = SpeedProfile::new(DirectionSet::empty(), 4.0).unwrap();
        let slow = SpeedProfile::new(DirectionSet::empty(), 2.0).unwrap();
        let r = check_path_condition(Species::U, 0.7, &DirectionSet::empty(), &fast, &slow, 16);
        assert!(r.is_holds());
        let r = check_path_condition(Species::U, 0.7, &DirectionSet::empty(), &slow, &fast, 16);
        assert_eq!(r.verdict, Verdict::Fails);
        match r.witnesses[0] {
            Witness::Direction(t) => assert!((t - 0.7).abs() < 1e-9),
            ref other => panic!("expected direction witness, got {other:?}"),
        }
    }

    #[test]
    fn path_condition_opposed_supports() {
        let dirs_u = DirectionSet::singleton(1.5 * PI);
        let wu = SpeedProfile::new(dirs_u.clone(), 2.0).unwrap();
        let wv = SpeedProfile::new(DirectionSet::singleton(0.5 * PI), 2.0).unwrap();
        let r = check_path_condition(Species::U, 1.5 * PI - 0.4, &dirs_u, &wu, &wv, 64);
        assert!(r.is_holds());
        let agg = check_path_dominance(Species::U, &dirs_u, &wu, &wv, 256, 32);
        assert!(agg.is_holds());
    }

    #[test]
    fn star_shape_examples() {
        let r = check_star_shaped(
            Species::U,
            &DirectionSet::empty(),
            &DirectionSet::singleton(0.0),
            128,
            32,
        );
        assert!(r.is_holds());

        let r = check_star_shaped(
            Species::U,
            &DirectionSet::full(),
            &DirectionSet::singleton(2.0),
            128,
            32,
        );
        assert!(r.is_holds());

        let sector = DirectionSet::from_spans(&[(PI / 3.0, 2.0 * PI / 3.0)]);
        let r = check_star_shaped(Species::U, &sector, &DirectionSet::singleton(0.0), 128, 32);
        assert_eq!(r.verdict, Verdict::Fails);
        assert!(matches!(r.witnesses[0], Witness::Point(_)));
    }

    #[test]
    fn star_shape_opposed_supports_holds() {
        // Strict dominance region of the downward species: the open lower
        // half circle; its projection paths end on the downward axis.
        let region = DirectionSet::from_spans(&[(PI, TAU)]);
        let r = check_star_shaped(
            Species::U,
            &region,
            &DirectionSet::singleton(1.5 * PI),
            256,
            64,
        );
        assert!(r.is_holds());
    }

    #[test]
    fn dominance_closure_examples() {
        let four = SpeedProfile::new(DirectionSet::empty(), 4.0).unwrap();
        let two = SpeedProfile::new(DirectionSet::empty(), 2.0).unwrap();
        assert!(check_strict_dominance_closure(&four, &two, 4096, EQUALITY_REL_TOL).is_holds());

        let two_b = SpeedProfile::new(DirectionSet::empty(), 2.0).unwrap();
        let r = check_strict_dominance_closure(&two, &two_b, 4096, EQUALITY_REL_TOL);
        assert_eq!(r.verdict, Verdict::Fails);

        // Opposed supports with equal bases: equality only at the two
        // horizontal directions, each flanked by strict dominance.
        let wu = SpeedProfile::new(DirectionSet::singleton(1.5 * PI), 2.0).unwrap();
        let wv = SpeedProfile::new(DirectionSet::singleton(0.5 * PI), 2.0).unwrap();
        assert!(check_strict_dominance_closure(&wu, &wv, 4096, EQUALITY_REL_TOL).is_holds());
    }

    #[test]
    fn near_equal_profiles_are_undecidable() {
        let a = SpeedProfile::new(DirectionSet::empty(), 2.0).unwrap();
        let b = SpeedProfile::new(DirectionSet::empty(), 2.0 + 1e-12).unwrap();
        let r = check_strict_dominance_closure(&a, &b, 1024, EQUALITY_REL_TOL);
        assert_eq!(r.verdict, Verdict::Undecidable);
    }

    #[test]
    fn assumption_gates() {
        let good = Params::new(1.0, 1.0, 2.0, 3.0).unwrap();
        assert!(check_strong_competition(&good).is_holds());
        let weak = Params::new(1.0, 1.0, 0.5, 3.0).unwrap();
        let r = check_strong_competition(&weak);
        assert_eq!(r.verdict, Verdict::Fails);

        assert!(check_positive_invasion_speed(0.3, 0.01).is_holds());
        assert_eq!(
            check_positive_invasion_speed(0.0, 0.01).verdict,
            Verdict::Undecidable
        );
        assert_eq!(
            check_positive_invasion_speed(-0.3, 0.01).verdict,
            Verdict::Fails
        );
    }
}
