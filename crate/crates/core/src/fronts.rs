//! One-dimensional estimation of the interface speed between the two
//! species, the assumption checks tied to it, and calibration of the
//! smallest initial radius that survives being surrounded.

use crate::conditions::{
    check_positive_invasion_speed, check_strong_competition, ConditionReport,
};
use crate::error::Error;
use crate::geometry::support::SupportSpec;
use crate::params::Params;
use crate::simulator::{SimSetup, Simulation, VInit};
use crate::vec2::Vec2;

/// Level whose crossing defines the front position.
pub const FRONT_LEVEL: f64 = 0.5;

/// Grid and horizon for the 1-D interface run. The estimate runs once at
/// `dx` and once at `dx/2` and extrapolates.
#[derive(Copy, Clone, Debug)]
pub struct CuvNumerics {
    pub dx: f64,
    pub length: f64,
    pub horizon: f64,
}

impl Default for CuvNumerics {
    fn default() -> Self {
        CuvNumerics {
            dx: 0.2,
            length: 240.0,
            horizon: 60.0,
        }
    }
}

/// Extrapolated interface speed with its numerical uncertainty.
#[derive(Copy, Clone, Debug)]
pub struct FrontSpeedEstimate {
    pub value: f64,
    /// Half-width of the numerical confidence band (the two-grid spread).
    pub ci_halfwidth: f64,
    pub coarse: f64,
    pub fine: f64,
    pub numerics: CuvNumerics,
}

fn dt_1d(params: &Params, dx: f64) -> f64 {
    let diffusive = 0.8 * dx * dx / (2.0 * params.d.max(1.0));
    diffusive.min(0.1 / params.r).min(0.1)
}

/// Least-squares slope and intercept of `x` against `t`, with the squared
/// correlation; `None` below two distinct points.
pub(crate) fn linear_fit(samples: &[(f64, f64)]) -> Option<(f64, f64, f64)> {
    let n = samples.len() as f64;
    if samples.len() < 2 {
        return None;
    }
    let (mut st, mut sx) = (0.0, 0.0);
    for &(t, x) in samples {
        st += t;
        sx += x;
    }
    let (tm, xm) = (st / n, sx / n);
    let (mut stt, mut stx, mut sxx) = (0.0, 0.0, 0.0);
    for &(t, x) in samples {
        stt += (t - tm) * (t - tm);
        stx += (t - tm) * (x - xm);
        sxx += (x - xm) * (x - xm);
    }
    if stt == 0.0 {
        return None;
    }
    let slope = stx / stt;
    let r2 = if sxx == 0.0 { 1.0 } else { (stx * stx) / (stt * sxx) };
    Some((slope, xm - slope * tm, r2))
}

/// Runs the 1-D system from opposed occupied half-lines and returns sampled
/// front positions (rightmost downward crossing of the level).
fn front_track(params: &Params, dx: f64, length: f64, horizon: f64) -> Result<Vec<(f64, f64)>, Error> {
    let m = (0.5 * length / dx).ceil() as usize;
    let n = 2 * m + 1;
    let x_of = |i: usize| (i as f64 - m as f64) * dx;

    let mut u = vec![0.0; n];
    let mut v = vec![0.0; n];
    for i in 0..n {
        let x = x_of(i);
        if x < 0.0 {
            u[i] = 1.0;
        } else if x > 0.0 {
            v[i] = 1.0;
        } else {
            u[i] = 0.5;
            v[i] = 0.5;
        }
    }

    let dt = dt_1d(params, dx);
    let total_steps = (horizon / dt).ceil() as u64;
    let sample_every = ((0.25 / dt).round() as u64).max(1);
    let inv_dx2 = 1.0 / (dx * dx);
    let (d, r, a, b) = (params.d, params.r, params.a, params.b);

    let mut u_next = u.clone();
    let mut v_next = v.clone();
    let mut samples = Vec::new();
    for k in 0..=total_steps {
        if k % sample_every == 0 || k == total_steps {
            let time = k as f64 * dt;
            if !(u.iter().sum::<f64>().is_finite() && v.iter().sum::<f64>().is_finite()) {
                let i = u
                    .iter()
                    .chain(v.iter())
                    .position(|x| !x.is_finite())
                    .unwrap_or(0);
                return Err(Error::NonFinite {
                    i: i % n,
                    j: 0,
                    field: if i < n { "u" } else { "v" },
                    time,
                });
            }
            let front = (0..n).rev().find(|&i| u[i] >= FRONT_LEVEL);
            match front {
                None => {
                    return Err(Error::InsufficientData(format!(
                        "front level {FRONT_LEVEL} lost at t = {time}"
                    )))
                }
                Some(i) if i + 4 >= n => {
                    return Err(Error::FrontAtBoundary {
                        time,
                        position: x_of(i),
                    })
                }
                Some(i) => {
                    let drop = u[i] - u[i + 1];
                    let frac = if drop > 0.0 { (u[i] - FRONT_LEVEL) / drop } else { 0.0 };
                    samples.push((time, x_of(i) + frac * dx));
                }
            }
        }
        if k == total_steps {
            break;
        }
        for i in 0..n {
            let l = if i == 0 { 0 } else { i - 1 };
            let rr = if i + 1 == n { i } else { i + 1 };
            let lap_u = (u[l] + u[rr] - 2.0 * u[i]) * inv_dx2;
            let lap_v = (v[l] + v[rr] - 2.0 * v[i]) * inv_dx2;
            u_next[i] = u[i] + dt * (d * lap_u + r * u[i] * (1.0 - u[i] - a * v[i]));
            v_next[i] = v[i] + dt * (lap_v + v[i] * (1.0 - v[i] - b * u[i]));
        }
        std::mem::swap(&mut u, &mut u_next);
        std::mem::swap(&mut v, &mut v_next);
    }
    Ok(samples)
}

/// Front speed at one resolution: least-squares slope over the trailing
/// half of the track.
fn speed_at_resolution(params: &Params, dx: f64, length: f64, horizon: f64) -> Result<f64, Error> {
    let track = front_track(params, dx, length, horizon)?;
    let cut = horizon * 0.5;
    let tail: Vec<(f64, f64)> = track.into_iter().filter(|&(t, _)| t >= cut).collect();
    if tail.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "only {} front samples in the fit window",
            tail.len()
        )));
    }
    let (slope, _, _) = linear_fit(&tail)
        .ok_or_else(|| Error::InsufficientData("degenerate front track".into()))?;
    Ok(slope)
}

/// Estimates the interface speed by running at two resolutions and
/// extrapolating; errors if the resolutions disagree beyond
/// `5% · |value| + 0.01`, or if the result leaves the admissible bracket
/// `(-c_v, c_u)`.
pub fn estimate_cuv(params: &Params, numerics: &CuvNumerics) -> Result<FrontSpeedEstimate, Error> {
    let coarse = speed_at_resolution(params, numerics.dx, numerics.length, numerics.horizon)?;
    let fine = speed_at_resolution(params, numerics.dx / 2.0, numerics.length, numerics.horizon)?;
    let value = fine + (fine - coarse) / 3.0;
    let spread = (fine - coarse).abs();
    let limit = 0.05 * value.abs() + 0.01;
    if spread > limit {
        return Err(Error::NoConvergence {
            coarse,
            fine,
            spread,
            limit,
        });
    }
    if value <= -params.c_v() || value >= params.c_u() {
        return Err(Error::Bracket(format!(
            "interface speed {value:.4} outside ({:.4}, {:.4})",
            -params.c_v(),
            params.c_u()
        )));
    }
    Ok(FrontSpeedEstimate {
        value,
        ci_halfwidth: spread,
        coarse,
        fine,
        numerics: *numerics,
    })
}

/// The hypothesis checks that depend only on parameters and the interface
/// speed.
pub fn check_assumptions(params: &Params, estimate: &FrontSpeedEstimate) -> Vec<ConditionReport> {
    vec![
        check_strong_competition(params),
        check_positive_invasion_speed(estimate.value, estimate.ci_halfwidth),
    ]
}

/// Outcome of the radius calibration.
#[derive(Copy, Clone, Debug)]
pub struct CalibratedRho {
    /// Recommended margin: the smallest surviving radius, inflated by half.
    pub rho: f64,
    pub smallest_success: f64,
    pub largest_failure: f64,
}

/// Whether a disk of radius `rho`, surrounded by the rival everywhere else,
/// still holds its center at the horizon. Lingering intermediate states
/// count as failure.
pub fn survives_surrounded(params: &Params, rho: f64, horizon: f64) -> Result<bool, Error> {
    let support_u = SupportSpec::Ball {
        center: Vec2::ZERO,
        radius: rho,
    };
    let setup = SimSetup {
        params: *params,
        extent: rho + 15.0,
        h: 0.25,
        support_u: &support_u,
        v_init: VInit::ComplementOfU,
        horizon,
        snapshot_times: &[],
    };
    let mut sim = Simulation::new(&setup)?;
    let check_every = sim.steps_until(2.0).max(1);
    let total = sim.steps_until(horizon);
    let mut done = 0;
    while done < total {
        let chunk = check_every.min(total - done);
        sim.advance(chunk)?;
        done += chunk;
        if sim.fields().0.max() < 0.01 {
            return Ok(false);
        }
    }
    let mid = (sim.grid().nx() - 1) / 2;
    Ok(sim.fields().0.get(mid, mid) > 0.9)
}

/// Bisects between a dying and a surviving radius and returns the smallest
/// surviving radius found, inflated by half as a safety margin.
pub fn calibrate_rho(
    params: &Params,
    lo: f64,
    hi: f64,
    horizon: f64,
    rounds: u32,
) -> Result<CalibratedRho, Error> {
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::Bracket(format!(
            "calibration bracket must satisfy 0 < lo < hi, got ({lo}, {hi})"
        )));
    }
    if survives_surrounded(params, lo, horizon)? {
        return Err(Error::Bracket(format!(
            "radius {lo} already survives; lower the bracket"
        )));
    }
    if !survives_surrounded(params, hi, horizon)? {
        return Err(Error::Bracket(format!(
            "radius {hi} does not survive; raise the bracket"
        )));
    }
    let (mut dead, mut alive) = (lo, hi);
    for _ in 0..rounds {
        let mid = 0.5 * (dead + alive);
        if survives_surrounded(params, mid, horizon)? {
            alive = mid;
        } else {
            dead = mid;
        }
    }
    Ok(CalibratedRho {
        rho: 1.5 * alive,
        smallest_success: alive,
        largest_failure: dead,
    })
}
