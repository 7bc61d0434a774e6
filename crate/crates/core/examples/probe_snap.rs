//! Transient diagnostic: field extrema across a run's snapshots.

use bifront::simulator::snapshot::read_snapshot;

fn main() {
    for path in std::env::args().skip(1) {
        let (header, u, v) = read_snapshot(path.as_ref()).unwrap();
        let mut v_max = f64::NEG_INFINITY;
        let mut at = (0usize, 0usize);
        for j in 0..header.ny {
            for i in 0..header.nx {
                let val = v.get(i, j);
                if val > v_max {
                    v_max = val;
                    at = (i, j);
                }
            }
        }
        let x = header.origin.x + at.0 as f64 * header.h;
        let y = header.origin.y + at.1 as f64 * header.h;
        println!(
            "t = {:6.2}  u_max = {:.6}  v_max = {:.6e} at ({:.1}, {:.1})",
            header.time,
            u.max(),
            v_max,
            x,
            y
        );
    }
}
