//! Transient diagnostic for one sampled disagreement case.

use bifront::geometry::arcs::angular_gap;
use bifront::geometry::profile::dominance_arcs;
use bifront::oracle::{brute_force_su, sample_cases, OracleConfig};
use bifront::{RefinedProfile, SpeedProfile};

fn reach(c: f64, b: f64, cuv: f64) -> f64 {
    if c.is_infinite() {
        if b > 0.0 {
            return cuv / (1.0 - b * b).sqrt();
        }
        return cuv;
    }
    if b * c <= cuv {
        return cuv;
    }
    if b >= 1.0 {
        return c;
    }
    let root = ((1.0 - b * b) * (c * c - cuv * cuv)).sqrt();
    c * cuv / (cuv * b + root)
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let idx: usize = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(45);
    let case = &sample_cases(1, 500)[idx];
    println!("c_u = {}, c_v = {}, cuv = {}", case.c_u, case.c_v, case.cuv);
    println!("dirs_u arcs:");
    for a in case.dirs_u.arcs() {
        println!("  [{}, {}] width {}", a.lo(), a.lo() + a.width(), a.width());
    }
    println!("dirs_v arcs:");
    for a in case.dirs_v.arcs() {
        println!("  [{}, {}] width {}", a.lo(), a.lo() + a.width(), a.width());
    }
    let wu = SpeedProfile::new(case.dirs_u.clone(), case.c_u).unwrap();
    let wv = SpeedProfile::new(case.dirs_v.clone(), case.c_v).unwrap();
    let e: f64 = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(2.84431303781197);
    println!("wu(e) = {}, wv(e) = {}", wu.value(e), wv.value(e));

    let dom = dominance_arcs(&wu, &wv);
    println!("dominance arcs:");
    for a in dom.arcs() {
        println!("  [{}, {}] width {}", a.lo(), a.lo() + a.width(), a.width());
    }

    let refined = RefinedProfile::new(wu.clone(), wv.clone(), case.cuv).unwrap();
    println!("refined value = {}", refined.value(e));
    let brute = brute_force_su(&wu, &wv, case.cuv, e, &OracleConfig::new(128, 100));
    println!("brute value   = {}", brute);

    // Locate the arg-sup of the closed form over the dominance set.
    let mut best = (f64::NEG_INFINITY, f64::NAN);
    for arc in dom.arcs() {
        let n = 200_000;
        for k in 0..=n {
            let xi = arc.lo() + arc.width() * k as f64 / n as f64;
            let v = reach(wu.value(xi), angular_gap(xi, e).cos(), case.cuv);
            if v > best.0 {
                best = (v, xi);
            }
        }
    }
    let (v, xi) = best;
    println!("closed-form sup {} at xi = {}", v, xi);
    println!(
        "  there: wu(xi) = {}, wv(xi) = {}, admissible = {}",
        wu.value(xi),
        wv.value(xi),
        wu.value(xi) >= wv.value(xi)
    );
    println!("  gap(xi, e) = {}, cos = {}", angular_gap(xi, e), angular_gap(xi, e).cos());

    // Replicate the oracle's zoom with tracing to find where it stalls.
    let cuv = case.cuv;
    let teardrop = |c: f64, b: f64| -> f64 {
        let spread = ((1.0 - b) * (1.0 + b)).max(0.0).sqrt();
        let hi = if b >= 1.0 {
            1.0
        } else {
            (cuv / (cuv + c * spread)).min(1.0)
        };
        let g = |s: f64| {
            let disc = ((1.0 - s) * cuv).powi(2) - (s * c * spread).powi(2);
            s * c * b + disc.max(0.0).sqrt()
        };
        let (mut lo, mut hi) = (0.0_f64, hi);
        for _ in 0..90 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if g(m1) < g(m2) {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        g(0.5 * (lo + hi)).max(cuv)
    };
    let score = |xi_a: f64, c: f64| teardrop(c, angular_gap(xi_a, e).cos());
    let adm = |t: f64| wu.value(t) >= wv.value(t);
    let cap = 1e8_f64;

    let n_dirs = 128usize;
    let n_c = 100usize;
    let mut xi_grid: Vec<f64> = (0..n_dirs)
        .map(|k| std::f64::consts::TAU * k as f64 / n_dirs as f64)
        .collect();
    xi_grid.extend(wu.breakpoints());
    xi_grid.extend(wv.breakpoints());
    xi_grid.push(e);
    let mut best = cuv;
    let mut best_at: Option<(f64, f64)> = None;
    for &xa in &xi_grid {
        if !adm(xa) {
            continue;
        }
        let hi_c = wu.value(xa).min(cap);
        for k in 0..=n_c {
            let c = cuv + (hi_c - cuv) * k as f64 / n_c as f64;
            let val = score(xa, c);
            if val > best {
                best = val;
                best_at = Some((xa, c));
            }
        }
    }
    let (mut xi_c, mut c_c) = best_at.unwrap();
    println!("coarse best {} at xi = {}, c = {}", best, xi_c, c_c);
    let mut w_xi = std::f64::consts::TAU / n_dirs as f64;
    let mut w_c = (wu.value(xi_c).min(cap) - cuv) / n_c as f64;
    for round in 0..48 {
        for i in -3..=3_i32 {
            let xa = xi_c + w_xi * i as f64 / 3.0;
            if !adm(xa) {
                continue;
            }
            let hi_c = wu.value(xa).min(cap);
            for j in -3..=3_i32 {
                let cc = (c_c + w_c * j as f64 / 3.0).clamp(cuv, hi_c);
                let val = score(xa, cc);
                if val > best {
                    best = val;
                    xi_c = xa;
                    c_c = cc;
                }
            }
        }
        if round % 6 == 0 || round == 47 {
            println!(
                "round {round:2}: best = {best:.12}, xi = {xi_c:.9} (to end {:+.2e}), c = {c_c:.6}, w_xi = {:.2e}",
                xi_c - xi,
                w_xi
            );
        }
        w_xi *= 0.6;
        w_c *= 0.6;
    }
}
