//! Failure rate and speed as a function of the threshold margin.

use csmdpc::tuning::{self, SimulationOptions};
use csmdpc::ParameterSet;

fn main() {
    let p = ParameterSet::preset("cs1-80").unwrap();
    let deltas: Vec<usize> = (0..=12).collect();
    let table = tuning::tune_delta(&p, &deltas, 100, 3, &SimulationOptions::default());
    println!("delta  failures   DFR    iterations  time(us)");
    for row in &table.rows {
        println!(
            "{:>5} {:>9} {:>7.3} {:>11.2} {:>9.0}",
            row.delta, row.failures, row.dfr, row.mean_iterations, row.mean_micros
        );
    }
    if let Some(best) = table.fastest_below(0.01) {
        println!("fastest with DFR <= 0.01: delta {}", best.delta);
    }
}
