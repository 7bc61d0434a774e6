//! Transient diagnostic: interface speed for parameters given on argv.

use bifront::fronts::{estimate_cuv, CuvNumerics};
use bifront::Params;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let get = |i: usize, d: f64| args.get(i).map(|s| s.parse().unwrap()).unwrap_or(d);
    let params = Params::new(get(1, 1.0), get(2, 1.0), get(3, 2.0), get(4, 2.0)).unwrap();
    let est = estimate_cuv(&params, &CuvNumerics::default()).unwrap();
    println!(
        "cuv = {} +- {} (coarse {}, fine {})",
        est.value, est.ci_halfwidth, est.coarse, est.fine
    );
}
