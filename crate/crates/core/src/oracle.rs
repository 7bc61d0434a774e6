//! Brute-force reference computations for cross-checking the geometric
//! predictions, plus seeded generators for randomized agreement tests.
//!
//! Everything here deliberately avoids the closed forms used by the fast
//! evaluators: speeds come from dense sampling over the direction sets and
//! the refined speed from a grid search over the auxiliary speed and
//! direction, with the reachable extent of each candidate maximized by
//! ternary search over the mixing parameter.

use crate::geometry::arcs::{angular_gap, DirectionSet};
use crate::geometry::profile::SpeedProfile;
use crate::geometry::support::SupportSpec;
use crate::vec2::Vec2;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

/// Stand-in upper bound for an unbounded auxiliary speed.
const C_CAP: f64 = 1e8;

/// Sampling counts for the brute-force searches. Coarser grids than this
/// miss the spikes near direction-set endpoints. `n_c` bounds the ternary
/// search over the mixing parameter inside each candidate evaluation.
#[derive(Copy, Clone, Debug)]
pub struct OracleConfig {
    pub n_dirs: usize,
    pub n_c: usize,
    pub zoom_rounds: usize,
}

impl OracleConfig {
    pub fn new(n_dirs: usize, n_c: usize) -> Self {
        assert!(n_dirs >= 100 && n_c >= 100, "oracle grids must stay dense");
        OracleConfig {
            n_dirs,
            n_c,
            zoom_rounds: 48,
        }
    }
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig::new(256, 128)
    }
}

/// Directional speed by direct sampling: the best cosine against the
/// direction set wins, with the base speed as floor. Half-chords come from
/// the sine of the sampled angular gap, which stays accurate when the gap
/// nearly vanishes.
pub fn brute_force_speed(dirs: &DirectionSet, base: f64, e_angle: f64, n: usize) -> f64 {
    if dirs.contains(e_angle) {
        return f64::INFINITY;
    }
    let mut best = base;
    for xi_angle in dirs.sample(n as f64 / TAU) {
        let gap = angular_gap(xi_angle, e_angle);
        if gap <= std::f64::consts::FRAC_PI_2 {
            best = best.max(base / gap.sin());
        }
    }
    best
}

/// Largest radius along `e` reachable by mixing a straight run at speed `c`
/// toward the candidate direction with a ball expanding at the invasion
/// speed. `gap` is the angle between the run direction and `e`; `rounds`
/// bounds the ternary search over the mixing parameter.
fn teardrop_extent(c: f64, gap: f64, cuv: f64, rounds: usize) -> f64 {
    let b = gap.cos();
    let spread = gap.sin().abs();
    let hi = if spread == 0.0 && b > 0.0 {
        1.0
    } else {
        (cuv / (cuv + c * spread)).min(1.0)
    };
    let g = |s: f64| {
        let disc = ((1.0 - s) * cuv).powi(2) - (s * c * spread).powi(2);
        s * c * b + disc.max(0.0).sqrt()
    };
    let (mut lo, mut hi) = (0.0_f64, hi);
    for _ in 0..rounds {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if g(m1) < g(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    g(0.5 * (lo + hi)).max(cuv)
}

fn admissible(wu: &SpeedProfile, wv: &SpeedProfile, xi_angle: f64) -> bool {
    wu.value(xi_angle) >= wv.value(xi_angle)
}

/// Directions where the two profiles cross, bisected from sign changes of
/// the slowness difference between consecutive breakpoints. Slowness keeps
/// the comparison finite through unbounded directions.
fn crossing_seeds(wu: &SpeedProfile, wv: &SpeedProfile) -> Vec<f64> {
    let f = |x: f64| 1.0 / wv.value(x) - 1.0 / wu.value(x);
    let mut cuts: Vec<f64> = wu
        .breakpoints()
        .into_iter()
        .chain(wv.breakpoints())
        .map(crate::geometry::arcs::normalize_angle)
        .collect();
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let mut out = Vec::new();
    for k in 0..cuts.len() {
        let lo = cuts[k];
        let hi = if k + 1 < cuts.len() {
            cuts[k + 1]
        } else {
            cuts[0] + TAU
        };
        let (f_lo, f_hi) = (f(lo), f(hi));
        if f_lo == 0.0 || f_hi == 0.0 || f_lo.signum() == f_hi.signum() {
            continue;
        }
        let (mut a, mut b) = (lo, hi);
        let mut f_a = f_lo;
        for _ in 0..80 {
            let m = 0.5 * (a + b);
            let f_m = f(m);
            if f_m == 0.0 {
                a = m;
                b = m;
                break;
            }
            if f_m.signum() == f_a.signum() {
                a = m;
                f_a = f_m;
            } else {
                b = m;
            }
        }
        let x = 0.5 * (a + b);
        out.push(x);
        out.push(x - 1e-9);
        out.push(x + 1e-9);
    }
    out
}

/// Angular separation below which two coarse candidates count as one basin.
const BASIN_SEPARATION: f64 = 0.1;
/// Independent zoom starts kept from the coarse stage.
const ZOOM_STARTS: usize = 6;

/// Refined speed along `e_angle` by grid search over dominant directions,
/// then independent local zooms around the leading coarse candidates.
/// Multiple starts guard against near-tied basins whose peaks sit between
/// grid seeds. The auxiliary speed is pinned at its admissible ceiling:
/// raising it always grows the swept region, since the time-matched ball of
/// the faster run shares its center and exceeds its radius.
pub fn brute_force_su(
    wu: &SpeedProfile,
    wv: &SpeedProfile,
    cuv: f64,
    e_angle: f64,
    cfg: &OracleConfig,
) -> f64 {
    if wu.value(e_angle).is_infinite() {
        return f64::INFINITY;
    }
    let score = |xi_angle: f64| {
        let c = wu.value(xi_angle).min(C_CAP);
        teardrop_extent(c, angular_gap(xi_angle, e_angle), cuv, cfg.n_c)
    };

    let mut xi_grid: Vec<f64> = (0..cfg.n_dirs)
        .map(|k| TAU * k as f64 / cfg.n_dirs as f64)
        .collect();
    xi_grid.extend(wu.breakpoints());
    xi_grid.extend(wv.breakpoints());
    xi_grid.extend(crossing_seeds(wu, wv));
    xi_grid.push(e_angle);

    let mut best = cuv;
    let mut seeds: Vec<(f64, f64)> = Vec::new();
    for &xi_angle in &xi_grid {
        if !admissible(wu, wv, xi_angle) {
            continue;
        }
        let val = score(xi_angle);
        best = best.max(val);
        seeds.push((val, xi_angle));
    }

    seeds.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let mut starts: Vec<f64> = Vec::new();
    for &(_, xi_angle) in &seeds {
        if starts.len() >= ZOOM_STARTS {
            break;
        }
        if starts
            .iter()
            .all(|&xa| angular_gap(xa, xi_angle) >= BASIN_SEPARATION)
        {
            starts.push(xi_angle);
        }
    }

    for &start_xi in &starts {
        let mut xi_angle = start_xi;
        let mut w_xi = TAU / cfg.n_dirs as f64;
        let mut local = score(xi_angle);
        for _ in 0..cfg.zoom_rounds {
            for i in -3..=3_i32 {
                let xa = xi_angle + w_xi * i as f64 / 3.0;
                if !admissible(wu, wv, xa) {
                    continue;
                }
                let val = score(xa);
                if val > local {
                    local = val;
                    xi_angle = xa;
                }
            }
            w_xi *= 0.6;
        }
        best = best.max(local);
    }
    best
}

/// Asymptotic growth of the distance to a support along a ray.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum RayGrowth {
    /// Distance grows sublinearly: an unbounded direction.
    Sublinear,
    /// Distance grows linearly: a bounded direction.
    Linear,
    /// Distance keeps dipping and climbing: the direction is in neither set.
    Mixed,
}

/// Classifies a direction by probing the support distance along a dense
/// log-spaced ladder of radii. Independent of the arc algebra. The verdict
/// reads the tail of `dist(t e)/t`: vanishing means sublinear, a large
/// swing between dips and peaks means the ratio has no limit.
pub fn classify_ray(spec: &SupportSpec, e_angle: f64) -> RayGrowth {
    let e = Vec2::from_angle(e_angle);
    let q = 2.0_f64.powf(1.0 / 16.0);
    let ratios: Vec<f64> = (0..=256)
        .map(|k| {
            let t = q.powi(k);
            spec.distance(e * t) / t
        })
        .collect();
    let tail = &ratios[128..];
    let lo = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = tail.iter().cloned().fold(0.0_f64, f64::max);
    if hi < 1e-3 {
        RayGrowth::Sublinear
    } else if lo < hi / 8.0 {
        RayGrowth::Mixed
    } else {
        RayGrowth::Linear
    }
}

/// One randomized prediction case: direction sets plus the three speeds.
#[derive(Clone, Debug)]
pub struct SampledCase {
    pub dirs_u: DirectionSet,
    pub dirs_v: DirectionSet,
    pub c_u: f64,
    pub c_v: f64,
    pub cuv: f64,
}

fn sample_dirs(rng: &mut ChaCha8Rng) -> DirectionSet {
    match rng.gen_range(0..20) {
        0..=2 => DirectionSet::empty(),
        3 => DirectionSet::full(),
        _ => {
            let n = rng.gen_range(1..=3);
            let spans: Vec<(f64, f64)> = (0..n)
                .map(|_| {
                    let lo = rng.gen_range(0.0..TAU);
                    let width = rng.gen_range(0.05..2.0);
                    (lo, lo + width)
                })
                .collect();
            DirectionSet::from_spans(&spans)
        }
    }
}

/// Deterministic case stream for agreement tests.
pub fn sample_cases(seed: u64, count: usize) -> Vec<SampledCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let d = rng.gen_range(0.25..4.0);
            let r = rng.gen_range(0.25..4.0);
            let c_u = 2.0 * (d * r as f64).sqrt();
            SampledCase {
                dirs_u: sample_dirs(&mut rng),
                dirs_v: sample_dirs(&mut rng),
                c_u,
                c_v: 2.0,
                cuv: c_u * rng.gen_range(0.05..0.9),
            }
        })
        .collect()
}

/// Probe angles for one case: uniform coverage plus jittered spikes near the
/// direction-set endpoints.
pub fn probe_angles(case: &SampledCase, seed: u64, uniform: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut out: Vec<f64> = (0..uniform)
        .map(|k| TAU * k as f64 / uniform as f64)
        .collect();
    for set in [&case.dirs_u, &case.dirs_v] {
        for end in set.endpoints() {
            out.push(end + rng.gen_range(-1e-3..1e-3));
        }
    }
    out
}
