//! Run-level invariants of the explicit stepper: physical bounds, symmetry
//! preservation, thread-count independence, and reduction of planar data to
//! the one-dimensional dynamics.

use bifront::simulator::{SimSetup, Simulation, VInit};
use bifront::{Params, SupportSpec, Vec2};

fn ball(x: f64, y: f64, radius: f64) -> SupportSpec {
    SupportSpec::Ball {
        center: Vec2::new(x, y),
        radius,
    }
}

fn two_ball_setup<'a>(u: &'a SupportSpec, v: &'a SupportSpec) -> SimSetup<'a> {
    SimSetup {
        params: Params::new(1.0, 1.0, 2.0, 2.0).unwrap(),
        extent: 32.0,
        h: 0.25,
        support_u: u,
        v_init: VInit::Spec(v),
        horizon: 10.0,
        snapshot_times: &[],
    }
}

#[test]
fn fields_stay_within_physical_bounds() {
    let u = ball(-8.0, 0.0, 3.0);
    let v = ball(8.0, 0.0, 3.0);
    let setup = two_ball_setup(&u, &v);
    let mut sim = Simulation::new(&setup).unwrap();
    let total = sim.steps_until(setup.horizon);
    let mut done = 0;
    while done < total {
        let chunk = 100.min(total - done);
        sim.advance(chunk).unwrap();
        done += chunk;
        let (u, v) = sim.fields();
        for f in [u, v] {
            assert!(f.min() >= -1e-15, "negative concentration {}", f.min());
            assert!(f.max() <= 1.0 + 1e-12, "overshoot {}", f.max());
        }
    }
}

#[test]
fn mirror_symmetric_data_stays_mirror_symmetric() {
    let u = ball(0.0, 0.0, 3.0);
    let v = SupportSpec::Union {
        members: vec![ball(-10.0, 0.0, 2.5), ball(10.0, 0.0, 2.5)],
    };
    let setup = two_ball_setup(&u, &v);
    let mut sim = Simulation::new(&setup).unwrap();
    sim.advance(400).unwrap();
    let nx = sim.grid().nx();
    let (u, v) = sim.fields();
    for f in [u, v] {
        for iy in 0..nx {
            for ix in 0..nx {
                let drift = (f.get(ix, iy) - f.get(nx - 1 - ix, iy)).abs();
                assert!(drift <= 1e-12, "mirror drift {drift} at ({ix}, {iy})");
            }
        }
    }
}

#[test]
fn thread_count_does_not_change_bytes() {
    let run = |threads: usize| -> (Vec<u64>, Vec<u64>) {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| {
            let u = ball(-8.0, 0.0, 3.0);
            let v = ball(8.0, 0.0, 3.0);
            let setup = two_ball_setup(&u, &v);
            let mut sim = Simulation::new(&setup).unwrap();
            sim.advance(300).unwrap();
            let (u, v) = sim.fields();
            (
                u.as_slice().iter().map(|x| x.to_bits()).collect(),
                v.as_slice().iter().map(|x| x.to_bits()).collect(),
            )
        })
    };
    let single = run(1);
    let multi = run(3);
    assert_eq!(single, multi, "results depend on the thread count");
}

#[test]
fn planar_data_stays_planar() {
    let u = SupportSpec::HalfPlane {
        normal: Vec2::new(1.0, 0.0),
        offset: -5.0,
    };
    let v = SupportSpec::HalfPlane {
        normal: Vec2::new(-1.0, 0.0),
        offset: -5.0,
    };
    let setup = two_ball_setup(&u, &v);
    let mut sim = Simulation::new(&setup).unwrap();
    sim.advance(400).unwrap();
    let nx = sim.grid().nx();
    let (u, v) = sim.fields();
    for f in [u, v] {
        for iy in 1..nx {
            for ix in 0..nx {
                assert_eq!(
                    f.get(ix, iy).to_bits(),
                    f.get(ix, 0).to_bits(),
                    "row {iy} deviates at column {ix}"
                );
            }
        }
    }
}
