//! The explicit update kernel.

use crate::params::Params;
use rayon::prelude::*;

/// One forward-Euler step of the coupled system with 5-point Laplacians and
/// reflecting boundaries, row-parallel. Every output cell is a fixed
/// expression of input cells, so results are identical for any thread count.
/// Returns false when any written value is nonfinite.
#[allow(clippy::too_many_arguments)]
pub fn step(
    params: &Params,
    dt: f64,
    h: f64,
    nx: usize,
    u: &[f64],
    v: &[f64],
    u_out: &mut [f64],
    v_out: &mut [f64],
) -> bool {
    debug_assert_eq!(u.len(), nx * nx);
    debug_assert_eq!(v.len(), nx * nx);
    let inv_h2 = 1.0 / (h * h);
    let (d, r, a, b) = (params.d, params.r, params.a, params.b);

    u_out
        .par_chunks_mut(nx)
        .zip(v_out.par_chunks_mut(nx))
        .enumerate()
        .map(|(iy, (u_row, v_row))| {
            let base = iy * nx;
            let below = if iy == 0 { base } else { base - nx };
            let above = if iy + 1 == nx { base } else { base + nx };
            let (uc, ub, ua) = (&u[base..base + nx], &u[below..below + nx], &u[above..above + nx]);
            let (vc, vb, va) = (&v[base..base + nx], &v[below..below + nx], &v[above..above + nx]);

            // The neighbor sums pair the x and y axes so that mirror images
            // see the same additions up to commutativity; symmetric data
            // stays symmetric to the last bit.
            let mut cell = |ix: usize, left: usize, right: usize| {
                let lap_u =
                    ((uc[left] + uc[right]) + (ub[ix] + ua[ix]) - 4.0 * uc[ix]) * inv_h2;
                let lap_v =
                    ((vc[left] + vc[right]) + (vb[ix] + va[ix]) - 4.0 * vc[ix]) * inv_h2;
                let gu = r * uc[ix] * (1.0 - uc[ix] - a * vc[ix]);
                let gv = vc[ix] * (1.0 - vc[ix] - b * uc[ix]);
                u_row[ix] = uc[ix] + dt * (d * lap_u + gu);
                v_row[ix] = vc[ix] + dt * (lap_v + gv);
            };

            cell(0, 0, 1.min(nx - 1));
            for ix in 1..nx - 1 {
                cell(ix, ix - 1, ix + 1);
            }
            if nx > 1 {
                cell(nx - 1, nx - 2, nx - 1);
            }

            let sum_u: f64 = u_row.iter().sum();
            let sum_v: f64 = v_row.iter().sum();
            sum_u.is_finite() && sum_v.is_finite()
        })
        .reduce(|| true, |x, y| x && y)
}

/// Row-major index of the first nonfinite value, with its field name.
pub fn first_nonfinite(nx: usize, u: &[f64], v: &[f64]) -> Option<(usize, usize, &'static str)> {
    for (name, data) in [("u", u), ("v", v)] {
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Some((pos % nx, pos / nx, name));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> Params {
        Params::new(1.0, 1.0, 2.0, 2.0).unwrap()
    }

    #[test]
    fn equilibria_are_exact_fixed_points() {
        let nx = 9;
        for (u0, v0) in [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)] {
            let u = vec![u0; nx * nx];
            let v = vec![v0; nx * nx];
            let mut u_out = vec![f64::NAN; nx * nx];
            let mut v_out = vec![f64::NAN; nx * nx];
            assert!(step(&params(), 0.01, 0.5, nx, &u, &v, &mut u_out, &mut v_out));
            assert_eq!(u_out, u);
            assert_eq!(v_out, v);
        }
    }

    #[test]
    fn reports_nonfinite_growth() {
        let nx = 5;
        let mut u = vec![0.0; nx * nx];
        u[12] = f64::MAX;
        let v = vec![0.0; nx * nx];
        let mut u_out = vec![0.0; nx * nx];
        let mut v_out = vec![0.0; nx * nx];
        let ok = step(&params(), 0.01, 0.5, nx, &u, &v, &mut u_out, &mut v_out);
        assert!(!ok);
        // The overflow spreads to the seeded cell's neighbors through the
        // Laplacian; the row-major scan meets the one in the row below first.
        let (ix, iy, field) = first_nonfinite(nx, &u_out, &v_out).unwrap();
        assert_eq!(field, "u");
        assert_eq!((ix, iy), (2, 1));
        assert!(!u_out[iy * nx + ix].is_finite());
    }

    #[test]
    fn mirror_symmetry_is_preserved() {
        let nx = 21;
        let mid = nx / 2;
        let mut u = vec![0.0; nx * nx];
        let mut v = vec![0.0; nx * nx];
        for iy in 0..nx {
            for ix in 0..nx {
                let (x, y) = (ix as f64 - mid as f64, iy as f64 - mid as f64);
                u[iy * nx + ix] = (-(x * x + y * y) / 8.0).exp();
                v[iy * nx + ix] = if x.abs() > 5.0 { 0.7 } else { 0.0 };
            }
        }
        let mut u_out = vec![0.0; nx * nx];
        let mut v_out = vec![0.0; nx * nx];
        step(&params(), 0.0125, 0.25, nx, &u, &v, &mut u_out, &mut v_out);
        for iy in 0..nx {
            for ix in 0..nx {
                let (jx, jy) = (nx - 1 - ix, nx - 1 - iy);
                assert_eq!(u_out[iy * nx + ix], u_out[jy * nx + jx]);
                assert_eq!(v_out[iy * nx + ix], v_out[jy * nx + jx]);
            }
        }
    }
}
