//! Decoding failure rate over full round trips, written as CSV.
//!
//!     cargo run --example dfr_simulation [preset] [trials] > trials.csv

use csmdpc::tuning::{self, SimulationOptions};
use csmdpc::ParameterSet;

fn main() {
    let mut args = std::env::args().skip(1);
    let p = ParameterSet::preset(&args.next().unwrap_or_else(|| "cs2-80".into())).unwrap();
    let trials = args.next().map_or(500, |a| a.parse().unwrap());
    let opts = SimulationOptions {
        key_refresh: 50,
        ..SimulationOptions::default()
    };
    let report = tuning::measure_dfr(&p, trials, 99, &opts);
    report.write_csv(std::io::stdout()).unwrap();
    eprint!("{}", report.summary());
    eprintln!("iterations histogram: {:?}", report.iteration_histogram);
}
