//! Watching the bit-flipping decoder through an observer: every pass,
//! every restart with a smaller margin.

use csmdpc::cwe::{self, ErrorVector};
use csmdpc::decoder::{self, ColumnOrientation, DecodeObserver, DecoderConfig};
use csmdpc::{kem, DenseRingElement, ParameterSet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Printer {
    passes: usize,
}

impl DecodeObserver for Printer {
    fn attempt_started(&mut self, delta: usize) {
        println!("  attempt with delta {delta}");
        self.passes = 0;
    }

    fn pass_finished(&mut self, s: &DenseRingElement, e: &ErrorVector) {
        self.passes += 1;
        if self.passes > 5 {
            return;
        }
        println!(
            "    pass: syndrome weight {:>4}, error list {:>3}",
            s.weight(),
            e.weight()
        );
    }

    fn syndrome_reverted(&mut self, s: &DenseRingElement) {
        println!("  reverted, syndrome weight {}", s.weight());
    }
}

fn main() {
    let p = ParameterSet::preset("cs1-80").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (_, sk) = kem::keygen(&p, &mut rng).unwrap();
    let cfg = DecoderConfig::for_params(&p);
    let orientation = ColumnOrientation::from(p.family);
    for t in [p.t, p.t + 30] {
        println!("{t} errors:");
        let e0 = cwe::sample_error(p.n(), t, &mut rng).unwrap();
        let mut s = decoder::syndrome(sk.blocks(), e0.coords().iter().map(|&j| j as usize), orientation);
        let mut e = ErrorVector::with_capacity(p.n(), cfg.hdd_margin);
        let (ok, stats) = decoder::decode_in_place(
            sk.blocks(),
            &mut s,
            &mut e,
            p.t,
            &cfg,
            orientation,
            &mut Printer { passes: 0 },
        )
        .unwrap();
        println!("  success {ok}, {stats:?}");
    }
}
