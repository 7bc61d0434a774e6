//! Deterministic explicit finite-difference simulator for the two-species
//! system on a symmetric square grid with reflecting boundaries.

pub mod grid;
pub mod raster;
pub mod snapshot;
pub mod step;

use crate::error::Error;
use crate::geometry::support::SupportSpec;
use crate::params::Params;
use crate::scenario::Scenario;
use grid::{Field, Grid};

/// Time step honoring the diffusive stability bound with headroom, capped by
/// the reaction scale.
pub fn stability_dt(params: &Params, h: f64) -> f64 {
    let diffusive = 0.8 * h * h / (4.0 * params.d.max(1.0));
    diffusive.min(0.1 / params.r).min(0.1)
}

/// Initial state of the second species.
#[derive(Copy, Clone, Debug)]
pub enum VInit<'a> {
    /// Rasterized from its own support shape.
    Spec(&'a SupportSpec),
    /// Everywhere the first species is not: `v = 1 - u` cell-wise.
    ComplementOfU,
}

/// A fully specified run.
#[derive(Clone, Debug)]
pub struct SimSetup<'a> {
    pub params: Params,
    pub extent: f64,
    pub h: f64,
    pub support_u: &'a SupportSpec,
    pub v_init: VInit<'a>,
    pub horizon: f64,
    pub snapshot_times: &'a [f64],
}

impl<'a> SimSetup<'a> {
    pub fn from_scenario(scenario: &'a Scenario) -> SimSetup<'a> {
        SimSetup {
            params: scenario.params,
            extent: scenario.grid.extent,
            h: scenario.grid.h,
            support_u: &scenario.support_u,
            v_init: VInit::Spec(&scenario.support_v),
            horizon: scenario.run.horizon,
            snapshot_times: &scenario.run.snapshot_times,
        }
    }
}

/// Live simulation state, steppable in place.
pub struct Simulation {
    params: Params,
    grid: Grid,
    h: f64,
    dt: f64,
    steps_taken: u64,
    u: Field,
    v: Field,
    u_next: Field,
    v_next: Field,
    initial_clipped: bool,
}

impl Simulation {
    /// Rasterizes the initial regions and prepares stepping. Refuses
    /// overlapping initial regions.
    pub fn new(setup: &SimSetup) -> Result<Simulation, Error> {
        let grid = Grid::centered(setup.extent, setup.h);
        let dt = stability_dt(&setup.params, setup.h);

        let u_raster = raster::rasterize(setup.support_u, &grid);
        let u = u_raster.field;
        let mut initial_clipped = u_raster.clipped;
        let v = match setup.v_init {
            VInit::Spec(spec) => {
                let v_raster = raster::rasterize(spec, &grid);
                initial_clipped |= v_raster.clipped;
                if let Some((i, j)) = raster::first_overlap(&u, &v_raster.field) {
                    return Err(Error::SupportsOverlap { i, j });
                }
                v_raster.field
            }
            VInit::ComplementOfU => {
                let mut v = Field::zeros(&grid);
                for (dst, &src) in v.as_mut_slice().iter_mut().zip(u.as_slice()) {
                    *dst = 1.0 - src;
                }
                v
            }
        };

        let u_next = u.clone();
        let v_next = v.clone();
        Ok(Simulation {
            params: setup.params,
            grid,
            h: setup.h,
            dt,
            steps_taken: 0,
            u,
            v,
            u_next,
            v_next,
            initial_clipped,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn time(&self) -> f64 {
        self.steps_taken as f64 * self.dt
    }

    pub fn steps_taken(&self) -> u64 {
        self.steps_taken
    }

    pub fn initial_clipped(&self) -> bool {
        self.initial_clipped
    }

    pub fn fields(&self) -> (&Field, &Field) {
        (&self.u, &self.v)
    }

    /// Advances `n` steps, failing on the first nonfinite value.
    pub fn advance(&mut self, n: u64) -> Result<(), Error> {
        for _ in 0..n {
            let ok = step::step(
                &self.params,
                self.dt,
                self.h,
                self.grid.nx(),
                self.u.as_slice(),
                self.v.as_slice(),
                self.u_next.as_mut_slice(),
                self.v_next.as_mut_slice(),
            );
            self.steps_taken += 1;
            if !ok {
                let (i, j, field) = step::first_nonfinite(
                    self.grid.nx(),
                    self.u_next.as_slice(),
                    self.v_next.as_slice(),
                )
                .expect("nonfinite value located");
                return Err(Error::NonFinite {
                    i,
                    j,
                    field,
                    time: self.time(),
                });
            }
            std::mem::swap(&mut self.u, &mut self.u_next);
            std::mem::swap(&mut self.v, &mut self.v_next);
        }
        Ok(())
    }

    /// Number of steps from the current time to reach `t` (nearest step).
    pub fn steps_until(&self, t: f64) -> u64 {
        let target = (t / self.dt).round().max(0.0) as u64;
        target.saturating_sub(self.steps_taken)
    }
}

/// Identity of one emitted snapshot: the requested time and the step it was
/// rounded to.
#[derive(Clone, Debug)]
pub struct SnapshotInfo {
    pub index: usize,
    pub requested_time: f64,
    pub time: f64,
    pub step: u64,
}

/// Counters of a finished run.
#[derive(Clone, Debug)]
pub struct RunStats {
    pub steps: u64,
    pub dt: f64,
    pub initial_clipped: bool,
}

/// Runs the system over the setup's horizon, handing each scheduled
/// snapshot to `on_snapshot` as it is reached. Snapshots are scheduled on
/// the nearest step boundary.
pub fn run<F>(setup: &SimSetup, mut on_snapshot: F) -> Result<RunStats, Error>
where
    F: FnMut(&SnapshotInfo, &Grid, &Field, &Field) -> Result<(), Error>,
{
    let mut sim = Simulation::new(setup)?;
    let n_steps = (setup.horizon / sim.dt()).ceil().max(0.0) as u64;

    // One schedule entry per requested time, nondecreasing in steps.
    let mut schedule: Vec<(u64, usize, f64)> = setup
        .snapshot_times
        .iter()
        .enumerate()
        .map(|(index, &t)| {
            let step = ((t / sim.dt()).round().max(0.0) as u64).min(n_steps);
            (step, index, t)
        })
        .collect();
    schedule.sort_by_key(|&(step, index, _)| (step, index));

    for (step, index, requested) in schedule {
        sim.advance(step.saturating_sub(sim.steps_taken()))?;
        let info = SnapshotInfo {
            index,
            requested_time: requested,
            time: sim.time(),
            step,
        };
        let (u, v) = sim.fields();
        on_snapshot(&info, sim.grid(), u, v)?;
    }
    sim.advance(n_steps.saturating_sub(sim.steps_taken()))?;

    Ok(RunStats {
        steps: n_steps,
        dt: sim.dt(),
        initial_clipped: sim.initial_clipped(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vec2::Vec2;

    fn ball(x: f64, y: f64, radius: f64) -> SupportSpec {
        SupportSpec::Ball {
            center: Vec2::new(x, y),
            radius,
        }
    }

    #[test]
    fn stability_dt_matches_reference_values() {
        let p = |d: f64, r: f64| Params::new(d, r, 2.0, 2.0).unwrap();
        assert_eq!(stability_dt(&p(1.0, 1.0), 0.25), 0.0125);
        assert_eq!(stability_dt(&p(4.0, 1.0), 0.25), 0.003125);
        assert_eq!(stability_dt(&p(1.0, 1.0), 10.0), 0.1);
    }

    #[test]
    fn overlapping_supports_are_refused() {
        let u = ball(0.0, 0.0, 2.0);
        let v = ball(1.0, 0.0, 2.0);
        let setup = SimSetup {
            params: Params::new(1.0, 1.0, 2.0, 2.0).unwrap(),
            extent: 8.0,
            h: 0.5,
            support_u: &u,
            v_init: VInit::Spec(&v),
            horizon: 1.0,
            snapshot_times: &[],
        };
        match run(&setup, |_, _, _, _| Ok(())) {
            Err(Error::SupportsOverlap { .. }) => {}
            other => panic!("expected overlap refusal, got {other:?}"),
        }
    }

    #[test]
    fn snapshots_arrive_on_schedule_and_stay_bounded() {
        let u = ball(-4.0, 0.0, 1.5);
        let v = ball(4.0, 0.0, 1.5);
        let times = [0.0, 0.5, 1.0];
        let setup = SimSetup {
            params: Params::new(1.0, 1.0, 2.0, 2.0).unwrap(),
            extent: 10.0,
            h: 0.5,
            support_u: &u,
            v_init: VInit::Spec(&v),
            horizon: 1.0,
            snapshot_times: &times,
        };
        let mut seen = Vec::new();
        let stats = run(&setup, |info, _, u, v| {
            assert!(u.min() >= 0.0 && u.max() <= 1.0);
            assert!(v.min() >= 0.0 && v.max() <= 1.0);
            seen.push((info.index, info.time));
            Ok(())
        })
        .unwrap();
        assert_eq!(seen.len(), 3);
        assert_eq!(seen[0], (0, 0.0));
        for (k, &(index, time)) in seen.iter().enumerate() {
            assert_eq!(index, k);
            assert!((time - times[k]).abs() <= stats.dt / 2.0 + 1e-12);
        }
        assert!(!stats.initial_clipped);
    }

    #[test]
    fn complement_initialization_tiles_the_domain() {
        let u = ball(0.0, 0.0, 2.0);
        let setup = SimSetup {
            params: Params::new(1.0, 1.0, 2.0, 2.0).unwrap(),
            extent: 6.0,
            h: 0.5,
            support_u: &u,
            v_init: VInit::ComplementOfU,
            horizon: 0.0,
            snapshot_times: &[0.0],
        };
        run(&setup, |_, _, u, v| {
            for (a, b) in u.as_slice().iter().zip(v.as_slice()) {
                assert_eq!(a + b, 1.0);
            }
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn manual_stepping_matches_run() {
        let u = ball(-3.0, 0.0, 1.0);
        let v = ball(3.0, 0.0, 1.0);
        let setup = SimSetup {
            params: Params::new(2.0, 1.5, 2.0, 3.0).unwrap(),
            extent: 8.0,
            h: 0.5,
            support_u: &u,
            v_init: VInit::Spec(&v),
            horizon: 0.5,
            snapshot_times: &[0.5],
        };
        let mut sim = Simulation::new(&setup).unwrap();
        sim.advance(sim.steps_until(0.5)).unwrap();
        let manual = sim.fields().0.clone();
        let mut from_run = None;
        run(&setup, |_, _, u, _| {
            from_run = Some(u.clone());
            Ok(())
        })
        .unwrap();
        assert_eq!(manual, from_run.unwrap());
    }
}
