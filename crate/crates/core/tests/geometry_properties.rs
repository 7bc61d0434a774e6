//! Randomized structural properties tying the geometric pieces together:
//! the two speed-profile forms agree, profiles and refined speeds are
//! continuous, dominance is exhaustive, and the assembled regions nest.

use approx::assert_relative_eq;
use bifront::geometry::profile::dominance_arcs;
use bifront::oracle::{probe_angles, sample_cases};
use bifront::{RefinedProfile, SpeedProfile, SpreadingSets};

/// Reciprocal speed, continuous through infinite values.
fn slowness(v: f64) -> f64 {
    if v.is_infinite() {
        0.0
    } else {
        1.0 / v
    }
}

#[test]
fn cone_distance_form_agrees_with_gap_form() {
    for case in sample_cases(101, 60) {
        for profile in [
            SpeedProfile::new(case.dirs_u.clone(), case.c_u).unwrap(),
            SpeedProfile::new(case.dirs_v.clone(), case.c_v).unwrap(),
        ] {
            for angle in probe_angles(&case, 101, 32) {
                let gap_form = profile.value(angle);
                let cone_form = profile.value_via_cone_distance(angle);
                if gap_form.is_infinite() || cone_form.is_infinite() {
                    // Within an ulp of an arc endpoint one path may round the
                    // gap to zero while the other keeps a subnormal distance;
                    // both then stand for the same unbounded direction.
                    assert!(
                        gap_form.min(cone_form) > 1e10,
                        "forms disagree at {angle}: {gap_form} vs {cone_form}"
                    );
                } else {
                    // Both forms lose the same cancellation digits near
                    // endpoints, just not identically.
                    assert_relative_eq!(gap_form, cone_form, max_relative = 1e-6);
                }
            }
        }
    }
}

#[test]
fn profiles_are_continuous_across_breakpoints() {
    let eps = 1e-9;
    for case in sample_cases(202, 60) {
        let profile = SpeedProfile::new(case.dirs_u.clone(), case.c_u).unwrap();
        for t in profile.breakpoints() {
            let below = slowness(profile.value(t - eps));
            let above = slowness(profile.value(t + eps));
            assert!(
                (below - above).abs() < 1e-6,
                "slowness jump {} at breakpoint {t}",
                (below - above).abs()
            );
        }
    }
}

#[test]
fn refined_speed_is_continuous_at_dominance_boundaries() {
    let eps = 1e-9;
    for case in sample_cases(303, 30) {
        let wu = SpeedProfile::new(case.dirs_u.clone(), case.c_u).unwrap();
        let wv = SpeedProfile::new(case.dirs_v.clone(), case.c_v).unwrap();
        let refined = RefinedProfile::new(wu, wv, case.cuv).unwrap();
        for t in refined.dominance().endpoints() {
            let below = slowness(refined.value(t - eps));
            let above = slowness(refined.value(t + eps));
            assert!(
                (below - above).abs() < 1e-4,
                "refined slowness jump {} at boundary {t}",
                (below - above).abs()
            );
        }
    }
}

#[test]
fn refined_speed_respects_its_bounds() {
    for case in sample_cases(404, 60) {
        let wu = SpeedProfile::new(case.dirs_u.clone(), case.c_u).unwrap();
        let wv = SpeedProfile::new(case.dirs_v.clone(), case.c_v).unwrap();
        let refined = RefinedProfile::new(wu.clone(), wv.clone(), case.cuv).unwrap();
        for angle in probe_angles(&case, 404, 24) {
            let s = refined.value(angle);
            assert!(
                s >= case.cuv * (1.0 - 1e-12),
                "refined speed {s} below invasion floor {} at {angle}",
                case.cuv
            );
            if refined.dominance().contains(angle) {
                let free = wu.value(angle);
                if free.is_infinite() {
                    assert!(s.is_infinite());
                } else {
                    assert_relative_eq!(s, free, max_relative = 1e-12);
                }
            }
        }
    }
}

#[test]
fn mutual_dominance_covers_the_circle() {
    for case in sample_cases(505, 60) {
        let wu = SpeedProfile::new(case.dirs_u.clone(), case.c_u).unwrap();
        let wv = SpeedProfile::new(case.dirs_v.clone(), case.c_v).unwrap();
        let forward = dominance_arcs(&wu, &wv);
        let backward = dominance_arcs(&wv, &wu);
        for angle in probe_angles(&case, 505, 48) {
            let in_f = forward.contains(angle);
            let in_b = backward.contains(angle);
            assert!(
                in_f || in_b,
                "direction {angle} dominated by neither profile"
            );
            if in_f && in_b {
                let (a, b) = (wu.value(angle), wv.value(angle));
                if !(a.is_infinite() && b.is_infinite()) {
                    // Interior of an overlap means a genuine tie.
                    assert_relative_eq!(a, b, max_relative = 1e-9);
                }
            }
        }
    }
}

#[test]
fn surviving_annulus_nests_between_the_speeds() {
    for case in sample_cases(606, 60) {
        let sets = match SpreadingSets::new(
            case.c_u,
            case.c_v,
            case.cuv,
            case.dirs_u.clone(),
            case.dirs_v.clone(),
        ) {
            Ok(sets) => sets,
            Err(_) => continue,
        };
        for angle in probe_angles(&case, 606, 24) {
            if let Some((lo, hi)) = sets.sv_interval(angle) {
                assert!(lo < hi, "degenerate annulus at {angle}");
                assert!(lo >= case.cuv * (1.0 - 1e-12));
                let wv = sets.wv().value(angle);
                assert_relative_eq!(hi, wv, max_relative = 1e-12);
                let wu = sets.wu().value(angle);
                assert!(wu < wv, "annulus where the first species dominates");
            }
        }
    }
}
