//! Empirical initial threshold for a preset.
//!
//!     cargo run --example estimate_theta0 [preset] [codes] [errors]

use csmdpc::{tuning, ParameterSet};

fn main() {
    let mut args = std::env::args().skip(1);
    let p = ParameterSet::preset(&args.next().unwrap_or_else(|| "cs1-80".into())).unwrap();
    let codes = args.next().map_or(20, |a| a.parse().unwrap());
    let errors = args.next().map_or(50, |a| a.parse().unwrap());
    let est = tuning::estimate_theta0(&p, codes, errors, 1);
    println!("{p}");
    println!(
        "{} samples: mean {:.2}, stddev {:.2}, range {}..={}, rounded {} = {:.3} d_v",
        est.samples,
        est.mean,
        est.stddev,
        est.min,
        est.max,
        est.rounded(),
        est.mean / p.d_v as f64
    );
}
