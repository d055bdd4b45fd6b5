//! Inverting a sparse circulant block with the paired-buffer Euclidean
//! algorithm, and checking the degree invariants along the way.

use csmdpc::ring::{invert_checked, RingError, SparseSupport};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (r, w) in [(4801usize, 45usize), (9863, 71), (32771, 137)] {
        loop {
            let coords = rand::seq::index::sample(&mut rng, r, w)
                .into_iter()
                .map(|c| c as u32)
                .collect();
            let h = SparseSupport::new(r, coords).unwrap();
            match invert_checked(&h.to_dense()) {
                Ok((inv, stats)) => {
                    assert!(inv.mul_sparse(&h).unwrap().is_one());
                    println!(
                        "r={r:>5} w={w:>3}: inverse weight {:>5}, {} steps, {} swaps, max deg f+c {}, max deg g+b {}, {} working bits",
                        inv.weight(),
                        stats.steps,
                        stats.swaps,
                        stats.max_fc,
                        stats.max_gb,
                        stats.working_bits
                    );
                    break;
                }
                Err(RingError::NotInvertible) => println!("r={r:>5}: sample not invertible, retrying"),
                Err(e) => panic!("{e}"),
            }
        }
    }
}
