//! Subcommand implementations sharing one output-directory layout.
//!
//! Every file written here carries the scenario hash; a directory may only
//! hold outputs of one scenario, and stale files from another are refused.

use crate::{CommonArgs, Failure};
use bifront::conditions::{
    check_direction_cover, check_path_dominance, check_star_shaped,
    check_strict_dominance_closure, check_strong_competition, check_positive_invasion_speed,
    Condition, ConditionReport, EQUALITY_REL_TOL,
};
use bifront::fronts::{estimate_cuv, CuvNumerics};
use bifront::measurement::FrontTracker;
use bifront::params::Species;
use bifront::simulator::snapshot::{read_snapshot, write_snapshot, SnapshotHeader};
use bifront::simulator::{run, SimSetup};
use bifront::{Error, Scenario, SpeedProfile, SpreadingSets};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Rows in the profile and boundary tables (half-degree resolution).
const PROFILE_ROWS: usize = 720;
/// Sample counts for the condition checks.
const CHECK_ANGULAR_SAMPLES: usize = 1024;
const CHECK_PATH_SAMPLES: usize = 64;
const CLOSURE_SAMPLES: usize = 4096;

fn val<T>(r: Result<T, Error>) -> Result<T, Failure> {
    r.map_err(Failure::Validation)
}

fn num<T>(r: Result<T, Error>) -> Result<T, Failure> {
    r.map_err(Failure::Numerical)
}

/// CSV number: finite values round-trip, infinities print as `inf`.
fn csv_num(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x}")
    }
}

struct Outputs {
    scenario: Scenario,
    hash: String,
    dir: PathBuf,
}

fn load_scenario(args: &CommonArgs) -> Result<Scenario, Failure> {
    let scenario = val(Scenario::from_path(&args.scenario))?;
    val(scenario.validate())?;
    Ok(scenario)
}

fn out_dir(args: &CommonArgs) -> PathBuf {
    args.out.clone().unwrap_or_else(|| {
        std::env::var_os("BIFRONT_OUT")
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("out"))
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Error> {
    fs::write(path, bytes).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

impl Outputs {
    /// Creates the directory, refuses artifacts of a different scenario,
    /// and pins the canonical scenario text.
    fn prepare(args: &CommonArgs) -> Result<Outputs, Failure> {
        let scenario = load_scenario(args)?;
        let hash = scenario.hash();
        let dir = out_dir(args);
        num(fs::create_dir_all(&dir)
            .map_err(|e| Error::io(format!("creating {}", dir.display()), e)))?;
        let out = Outputs {
            scenario,
            hash,
            dir,
        };
        num(out.guard_scenario_file())?;
        num(out.cuv_cache())?;
        num(out.run_meta())?;
        num(write_file(
            &out.path("scenario.toml"),
            out.scenario.canonical_toml().as_bytes(),
        ))?;
        Ok(out)
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    fn guard_scenario_file(&self) -> Result<(), Error> {
        let path = self.path("scenario.toml");
        let Ok(existing) = fs::read(&path) else {
            return Ok(());
        };
        let found = format!("{:x}", Sha256::digest(&existing));
        if found != self.hash {
            return Err(Error::CacheMismatch {
                path: path.display().to_string(),
                found,
                expected: self.hash.clone(),
            });
        }
        Ok(())
    }

    /// Cached planar invasion speed, if this directory holds a matching one.
    fn cuv_cache(&self) -> Result<Option<CuvCache>, Error> {
        let path = self.path("cuv.toml");
        let Ok(text) = fs::read_to_string(&path) else {
            return Ok(None);
        };
        let mismatch = |found: String| Error::CacheMismatch {
            path: path.display().to_string(),
            found,
            expected: self.hash.clone(),
        };
        let cache: CuvCache =
            toml::from_str(&text).map_err(|_| mismatch("(unreadable)".to_string()))?;
        if cache.scenario != self.hash {
            return Err(mismatch(cache.scenario));
        }
        Ok(Some(cache))
    }

    /// Snapshot run metadata, if this directory holds a matching set.
    fn run_meta(&self) -> Result<Option<RunMeta>, Error> {
        let path = self.path("run.toml");
        let Ok(text) = fs::read_to_string(&path) else {
            return Ok(None);
        };
        let mismatch = |found: String| Error::CacheMismatch {
            path: path.display().to_string(),
            found,
            expected: self.hash.clone(),
        };
        let meta: RunMeta =
            toml::from_str(&text).map_err(|_| mismatch("(unreadable)".to_string()))?;
        if meta.scenario != self.hash {
            return Err(mismatch(meta.scenario));
        }
        Ok(Some(meta))
    }
}

#[derive(Serialize, Deserialize)]
struct CuvCache {
    scenario: String,
    value: f64,
    ci_halfwidth: f64,
    coarse: f64,
    fine: f64,
    dx: f64,
    length: f64,
    horizon: f64,
}

#[derive(Serialize, Deserialize)]
struct RunMeta {
    scenario: String,
    dt: f64,
    steps: u64,
    initial_clipped: bool,
    snapshots: Vec<SnapEntry>,
}

#[derive(Serialize, Deserialize)]
struct SnapEntry {
    index: usize,
    time: f64,
    file: String,
}

/// Measures c_uv on the 1D problem and stores it beside the scenario.
fn measure_cuv(out: &Outputs) -> Result<CuvCache, Error> {
    let numerics = CuvNumerics::default();
    let estimate = estimate_cuv(&out.scenario.params, &numerics)?;
    let cache = CuvCache {
        scenario: out.hash.clone(),
        value: estimate.value,
        ci_halfwidth: estimate.ci_halfwidth,
        coarse: estimate.coarse,
        fine: estimate.fine,
        dx: numerics.dx,
        length: numerics.length,
        horizon: numerics.horizon,
    };
    let text = toml::to_string(&cache).expect("scalar struct serializes");
    write_file(&out.path("cuv.toml"), text.as_bytes())?;
    Ok(cache)
}

/// Two-grid extrapolation can agree by luck; the scheme itself is not
/// trusted below this band.
const CUV_CI_FLOOR: f64 = 0.01;

/// c_uv for prediction: scenario override, then cache, then measurement.
/// Measured values carry at least the scheme's trust band.
fn resolve_cuv(out: &Outputs) -> Result<(f64, f64), Error> {
    if let Some(spec) = &out.scenario.cuv {
        return Ok((spec.value, spec.ci_halfwidth));
    }
    let cache = match out.cuv_cache()? {
        Some(cache) => cache,
        None => measure_cuv(out)?,
    };
    Ok((cache.value, cache.ci_halfwidth.max(CUV_CI_FLOOR)))
}

struct Prediction {
    wu: SpeedProfile,
    wv: SpeedProfile,
    /// Absent when no refined prediction is available.
    sets: Option<SpreadingSets>,
    /// The invasion profile w_uv exists only for a positive invasion speed.
    wuv_defined: bool,
    reports: Vec<ConditionReport>,
    banner: Option<String>,
}

fn is_informational(c: &Condition) -> bool {
    matches!(c, Condition::PathDominance(_))
}

/// Runs every condition check and builds the predicted sets.
fn predict_sets(out: &Outputs, cuv: f64, cuv_ci: f64) -> Result<Prediction, Error> {
    let sc = &out.scenario;
    let params = &sc.params;
    let dirs_u = sc.support_u.unbounded_directions();
    let dirs_v = sc.support_v.unbounded_directions();
    let wu = SpeedProfile::new(dirs_u.clone(), params.c_u())?;
    let wv = SpeedProfile::new(dirs_v.clone(), params.c_v())?;

    // The star-shape hypothesis looks at each species' dominance region
    // relative to its unbounded cone; the two regions are complementary.
    let dominance_u = bifront::geometry::profile::dominance_arcs(&wu, &wv);
    let dominance_v = dominance_u.complement();

    let wuv_defined = cuv > 0.0 && cuv < params.c_u();
    // With dominance everywhere the refined speed is w_u in every direction
    // and never consults the invasion speed, so a placeholder keeps the
    // construction total; w_uv itself stays undefined.
    let effective_cuv = if wuv_defined {
        Some(cuv)
    } else if dominance_u.is_full() {
        Some(0.5 * params.c_u())
    } else {
        None
    };
    let sets = effective_cuv
        .map(|c| SpreadingSets::new(params.c_u(), params.c_v(), c, dirs_u.clone(), dirs_v.clone()))
        .transpose()?;

    let mut reports = vec![
        check_strong_competition(params),
        check_positive_invasion_speed(cuv, cuv_ci),
        check_direction_cover(Species::U, &sc.support_u, sc.rho),
        check_direction_cover(Species::V, &sc.support_v, sc.alpha),
        check_star_shaped(
            Species::U,
            &dominance_u,
            &dirs_u,
            CHECK_ANGULAR_SAMPLES,
            CHECK_PATH_SAMPLES,
        ),
        check_star_shaped(
            Species::V,
            &dominance_v,
            &dirs_v,
            CHECK_ANGULAR_SAMPLES,
            CHECK_PATH_SAMPLES,
        ),
        check_strict_dominance_closure(&wu, &wv, CLOSURE_SAMPLES, EQUALITY_REL_TOL),
        check_path_dominance(
            Species::U,
            &dirs_u,
            &wu,
            &wv,
            CHECK_ANGULAR_SAMPLES,
            CHECK_PATH_SAMPLES,
        ),
        check_path_dominance(
            Species::V,
            &dirs_v,
            &wv,
            &wu,
            CHECK_ANGULAR_SAMPLES,
            CHECK_PATH_SAMPLES,
        ),
    ];
    // Path dominance selects the theorem branch; it is not a hypothesis.
    reports.sort_by_key(|r| is_informational(&r.condition));

    let violated: Vec<String> = reports
        .iter()
        .filter(|r| !is_informational(&r.condition) && !r.is_holds())
        .map(|r| r.condition.id())
        .collect();
    let banner = (!violated.is_empty()).then(|| {
        format!(
            "warning: hypotheses violated or undecidable: {}; predictions are formal only",
            violated.join(", ")
        )
    });
    Ok(Prediction {
        wu,
        wv,
        sets,
        wuv_defined,
        reports,
        banner,
    })
}

/// Writes profiles.csv, boundaries.csv, and conditions.txt.
fn write_prediction(out: &Outputs, p: &Prediction) -> Result<(), Error> {
    let angles: Vec<f64> = (0..PROFILE_ROWS)
        .map(|k| TAU * k as f64 / PROFILE_ROWS as f64)
        .collect();

    let mut profiles = format!("# scenario {}\nangle,w_u,w_v,w_uv,s_u\n", out.hash);
    for &angle in &angles {
        let su = match &p.sets {
            Some(sets) => sets.su().value(angle),
            None => f64::NAN,
        };
        let wuv = match &p.sets {
            Some(sets) if p.wuv_defined => sets.wuv().value(angle),
            _ => f64::NAN,
        };
        let _ = writeln!(
            profiles,
            "{},{},{},{},{}",
            csv_num(angle),
            csv_num(p.wu.value(angle)),
            csv_num(p.wv.value(angle)),
            csv_num(wuv),
            csv_num(su),
        );
    }
    write_file(&out.path("profiles.csv"), profiles.as_bytes())?;

    let mut boundaries = format!("# scenario {}\nset,angle,x,y\n", out.hash);
    let mut emit = |set: &str, angle: f64, radius: f64| {
        if radius.is_finite() {
            let _ = writeln!(
                boundaries,
                "{set},{},{},{}",
                csv_num(angle),
                csv_num(radius * angle.cos()),
                csv_num(radius * angle.sin()),
            );
        }
    };
    for &angle in &angles {
        emit("w_u", angle, p.wu.value(angle));
        emit("w_v", angle, p.wv.value(angle));
        if let Some(sets) = &p.sets {
            if p.wuv_defined {
                emit("w_uv", angle, sets.wuv().value(angle));
            }
            emit("s_u", angle, sets.su().value(angle));
            if let Some((inner, outer)) = sets.sv_interval(angle) {
                emit("s_v_inner", angle, inner);
                emit("s_v_outer", angle, outer);
            }
        }
    }
    write_file(&out.path("boundaries.csv"), boundaries.as_bytes())?;

    let mut conditions = format!("# scenario {}\n", out.hash);
    if let Some(banner) = &p.banner {
        let _ = writeln!(conditions, "{banner}");
    }
    for report in &p.reports {
        let _ = writeln!(conditions, "{report}");
        if is_informational(&report.condition) {
            let _ = writeln!(conditions, "  informational: selects the theorem branch");
        }
    }
    write_file(&out.path("conditions.txt"), conditions.as_bytes())
}

fn finish_with_banner(p: &Prediction) -> u8 {
    match &p.banner {
        Some(banner) => {
            eprintln!("{banner}");
            4
        }
        None => 0,
    }
}

pub fn predict(args: &CommonArgs) -> Result<u8, Failure> {
    let out = Outputs::prepare(args)?;
    let (cuv, cuv_ci) = num(resolve_cuv(&out))?;
    let prediction = num(predict_sets(&out, cuv, cuv_ci))?;
    num(write_prediction(&out, &prediction))?;
    Ok(finish_with_banner(&prediction))
}

pub fn front_speed(args: &CommonArgs) -> Result<u8, Failure> {
    let out = Outputs::prepare(args)?;
    let cache = match num(out.cuv_cache())? {
        Some(cache) => cache,
        None => num(measure_cuv(&out))?,
    };
    let p = &out.scenario.params;
    println!(
        "{},{},{},{},{},{},{},{}",
        csv_num(p.d),
        csv_num(p.r),
        csv_num(p.a),
        csv_num(p.b),
        csv_num(cache.value),
        csv_num(cache.ci_halfwidth),
        csv_num(cache.dx),
        csv_num(cache.horizon),
    );
    Ok(0)
}

fn snapshot_name(index: usize) -> String {
    format!("snap-{index:03}.bin")
}

/// Runs the PDE and writes the snapshot series plus run.toml.
fn run_simulation(out: &Outputs) -> Result<RunMeta, Error> {
    let setup = SimSetup::from_scenario(&out.scenario);
    let started = Instant::now();
    let mut entries = Vec::new();
    let stats = run(&setup, |info, grid, u, v| {
        let file = snapshot_name(info.index);
        let header = SnapshotHeader::for_grid(grid, info.time, Some(out.hash.clone()));
        write_snapshot(&out.path(&file), &header, u, v)?;
        entries.push(SnapEntry {
            index: info.index,
            time: info.time,
            file,
        });
        Ok(())
    })?;
    if stats.initial_clipped {
        eprintln!("warning: initial supports were clipped to the grid");
    }
    eprintln!(
        "simulated {} steps at dt={} in {:.1}s",
        stats.steps,
        stats.dt,
        started.elapsed().as_secs_f64()
    );
    let meta = RunMeta {
        scenario: out.hash.clone(),
        dt: stats.dt,
        steps: stats.steps,
        initial_clipped: stats.initial_clipped,
        snapshots: entries,
    };
    let text = toml::to_string(&meta).expect("run metadata serializes");
    write_file(&out.path("run.toml"), text.as_bytes())?;
    Ok(meta)
}

pub fn simulate(args: &CommonArgs) -> Result<u8, Failure> {
    let out = Outputs::prepare(args)?;
    num(run_simulation(&out))?;
    Ok(0)
}

pub fn verify(args: &CommonArgs) -> Result<u8, Failure> {
    let out = Outputs::prepare(args)?;
    let (cuv, cuv_ci) = num(resolve_cuv(&out))?;
    let prediction = num(predict_sets(&out, cuv, cuv_ci))?;
    num(write_prediction(&out, &prediction))?;

    let Some(sets) = &prediction.sets else {
        // Nothing to compare against: the refined sets need c_uv > 0.
        let summary = format!(
            "scenario {}\nno comparison: invasion speed {cuv} is not usably positive\n",
            out.hash
        );
        num(write_file(&out.path("summary.txt"), summary.as_bytes()))?;
        print!("{summary}");
        return Ok(finish_with_banner(&prediction));
    };

    let meta = match num(out.run_meta())? {
        Some(meta) => meta,
        None => num(run_simulation(&out))?,
    };

    let m = &out.scenario.measurement;
    let mut tracker = FrontTracker::new(m.directions, m.level);
    for entry in &meta.snapshots {
        let path = out.path(&entry.file);
        let (header, u, v) = num(read_snapshot(&path))?;
        if header.scenario.as_deref() != Some(out.hash.as_str()) {
            return Err(Failure::Numerical(Error::CacheMismatch {
                path: path.display().to_string(),
                found: header.scenario.unwrap_or_else(|| "(none)".to_string()),
                expected: out.hash.clone(),
            }));
        }
        let grid = header.grid().ok_or_else(|| {
            Failure::Numerical(Error::MalformedSnapshot {
                path: path.display().to_string(),
                message: "snapshot grid is not a centered square".to_string(),
            })
        })?;
        num(tracker.ingest(header.time, &grid, &u, &v))?;
    }
    let report = num(tracker.compare(sets, m.window, m.tol, &out.hash))?;
    let csv = format!("# scenario {}\n{}", out.hash, report.to_csv());
    num(write_file(&out.path("report.csv"), csv.as_bytes()))?;
    let summary = report.summary();
    num(write_file(&out.path("summary.txt"), summary.as_bytes()))?;
    print!("{summary}");
    Ok(finish_with_banner(&prediction))
}

pub fn export(args: &CommonArgs) -> Result<u8, Failure> {
    let out = Outputs::prepare(args)?;
    println!("{}", out.hash);
    Ok(0)
}
