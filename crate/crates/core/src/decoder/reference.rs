use super::{
    check_inputs, row_index, syndrome, ColumnOrientation, DecodeError, DecodeOutcome, DecodeStats, DecodeStatus,
};
use crate::cwe::ErrorVector;
use crate::ring::bits;
use crate::ring::{DenseRingElement, SparseSupport};

/// Gallager's hard-decision decoder: count unsatisfied checks for every
/// variable, flip all variables that reach the maximum count, recompute the
/// syndrome, repeat. Uses `O(n)` memory.
pub fn reference_bitflip(
    blocks: &[SparseSupport],
    s: &DenseRingElement,
    t: usize,
    iter_bound: usize,
    orientation: ColumnOrientation,
) -> Result<DecodeOutcome, DecodeError> {
    let r = s.r();
    check_inputs(blocks, r)?;
    let n = blocks.len() * r;
    let mut flipped = vec![false; n];
    let mut counts = vec![0usize; n];
    let mut current = s.clone();
    let mut stats = DecodeStats {
        attempts: 1,
        ..DecodeStats::default()
    };

    while !current.is_zero() && stats.iterations < iter_bound {
        for (b, block) in blocks.iter().enumerate() {
            for jj in 0..r {
                counts[b * r + jj] = block
                    .coords()
                    .iter()
                    .filter(|&&l| bits::get_bit(current.words(), row_index(jj, l as usize, r, orientation)))
                    .count();
            }
        }
        let max = counts.iter().copied().max().unwrap_or(0);
        if max == 0 {
            break;
        }
        for (f, &c) in flipped.iter_mut().zip(&counts) {
            if c == max {
                *f = !*f;
            }
        }
        let mut recomputed = syndrome(blocks, (0..n).filter(|&j| flipped[j]), orientation);
        recomputed.add_assign(s).expect("same block size");
        current = recomputed;
        stats.iterations += 1;
        stats.peak_weight = stats.peak_weight.max(flipped.iter().filter(|&&f| f).count());
    }

    let coords: Vec<u32> = (0..n).filter(|&j| flipped[j]).map(|j| j as u32).collect();
    let ok = current.is_zero() && coords.len() <= t;
    Ok(DecodeOutcome {
        status: if ok {
            DecodeStatus::Success
        } else {
            DecodeStatus::Failure
        },
        e: ok.then(|| ErrorVector::from_coords(n, coords).expect("distinct and in range")),
        stats,
    })
}
