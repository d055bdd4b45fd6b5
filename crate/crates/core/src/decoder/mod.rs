//! Hard-decision bit-flipping decoders for `H = [cir(h_0) | ... | cir(h_{n0-1})]`.
//!
//! [`decode_in_place`] is the constant-memory decoder: unsatisfied-check
//! counts are computed on the fly for one variable at a time, a variable is
//! flipped (and the syndrome updated) as soon as its count reaches the
//! running threshold, and the error list has a fixed capacity of
//! `floor(3t/2)` coordinates. Failed attempts lower the margin `delta` and
//! restart after rewinding the syndrome in place. Apart from the caller's
//! syndrome and error list, its working state is a fixed set of scalars.
//!
//! [`reference_bitflip`] is the textbook two-pass decoder with a full
//! counter array; it serves as a test oracle.

mod reference;

pub use reference::reference_bitflip;

use thiserror::Error;

use crate::cwe::ErrorVector;
use crate::params::{CodeFamily, ParameterSet};
use crate::ring::bits::{self, reduce_once};
use crate::ring::{DenseRingElement, SparseSupport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("no parity-check blocks")]
    NoBlocks,
    #[error("block {block} has size {got}, syndrome has {want}")]
    BlockSize { block: usize, got: usize, want: usize },
    #[error("block {block} has weight {got}, block 0 has {want}")]
    UnequalWeights { block: usize, got: usize, want: usize },
    #[error("error list holds {got} coordinates, decoder needs {want}")]
    CapacityTooSmall { got: usize, want: usize },
    #[error("invalid decoder configuration: {0}")]
    Config(String),
}

/// Row indices of column `j` within a circulant block are `(j + L[z]) mod r`
/// in the palindromic orientation, or `(j - L[z]) mod r` for the generic
/// circulant layout. The two agree on palindromic supports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnOrientation {
    Palindromic,
    General,
}

impl From<CodeFamily> for ColumnOrientation {
    fn from(f: CodeFamily) -> Self {
        match f {
            CodeFamily::Cyclosymmetric => ColumnOrientation::Palindromic,
            CodeFamily::QuasiCyclic => ColumnOrientation::General,
        }
    }
}

#[inline(always)]
fn row_index(jj: usize, l: usize, r: usize, orientation: ColumnOrientation) -> usize {
    match orientation {
        ColumnOrientation::Palindromic => reduce_once(jj + l, r),
        ColumnOrientation::General => reduce_once(jj + r - l, r),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecoderConfig {
    pub theta0: usize,
    pub delta: usize,
    pub iter_bound: usize,
    pub hdd_margin: usize,
}

impl DecoderConfig {
    /// Checks `delta < theta0 <= d_v`, `iter_bound >= 1` and
    /// `hdd_margin >= t`.
    pub fn new(
        theta0: usize,
        delta: usize,
        iter_bound: usize,
        hdd_margin: usize,
        d_v: usize,
        t: usize,
    ) -> Result<Self, DecodeError> {
        if !(delta < theta0 && theta0 <= d_v) {
            return Err(DecodeError::Config(format!(
                "need delta < theta0 <= d_v, got {delta}, {theta0}, {d_v}"
            )));
        }
        if iter_bound == 0 {
            return Err(DecodeError::Config("iter_bound must be at least 1".into()));
        }
        if hdd_margin < t {
            return Err(DecodeError::Config(format!("hdd_margin {hdd_margin} below t = {t}")));
        }
        Ok(Self {
            theta0,
            delta,
            iter_bound,
            hdd_margin,
        })
    }

    /// Parameter-set thresholds, `iter_bound = t` and `hdd_margin = floor(3t/2)`.
    pub fn for_params(p: &ParameterSet) -> Self {
        Self {
            theta0: p.theta0,
            delta: p.delta,
            iter_bound: p.t.max(1),
            hdd_margin: p.hdd_margin(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DecodeStats {
    /// Passes over all variables, summed over attempts.
    pub iterations: usize,
    pub attempts: usize,
    /// Attempts abandoned with a lowered margin.
    pub restarts: usize,
    pub final_delta: usize,
    /// Largest provisional error weight reached.
    pub peak_weight: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeStatus {
    Success,
    Failure,
}

#[derive(Debug, Clone)]
pub struct DecodeOutcome {
    pub status: DecodeStatus,
    /// The recovered error pattern, on success.
    pub e: Option<ErrorVector>,
    pub stats: DecodeStats,
}

impl DecodeOutcome {
    pub fn is_success(&self) -> bool {
        self.status == DecodeStatus::Success
    }
}

/// Hooks called by [`decode_in_place`]. The unit type ignores everything.
pub trait DecodeObserver {
    fn attempt_started(&mut self, _delta: usize) {}
    /// After every full pass over the variables, or after an early break.
    fn pass_finished(&mut self, _s: &DenseRingElement, _e: &ErrorVector) {}
    /// After a failed attempt has rewound the syndrome.
    fn syndrome_reverted(&mut self, _s: &DenseRingElement) {}
}

impl DecodeObserver for () {}

fn check_inputs(blocks: &[SparseSupport], r: usize) -> Result<usize, DecodeError> {
    let first = blocks.first().ok_or(DecodeError::NoBlocks)?;
    for (b, block) in blocks.iter().enumerate() {
        if block.r() != r {
            return Err(DecodeError::BlockSize {
                block: b,
                got: block.r(),
                want: r,
            });
        }
        if block.weight() != first.weight() {
            return Err(DecodeError::UnequalWeights {
                block: b,
                got: block.weight(),
                want: first.weight(),
            });
        }
    }
    Ok(first.weight())
}

/// Flips the syndrome bits of column `jj` of a block; returns the change in
/// syndrome weight.
#[inline]
fn flip_column(words: &mut [u64], support: &[u32], jj: usize, r: usize, orientation: ColumnOrientation) -> isize {
    let mut dw = 0isize;
    for &l in support {
        let i = row_index(jj, l as usize, r, orientation);
        dw += if bits::get_bit(words, i) { -1 } else { 1 };
        bits::flip_bit(words, i);
    }
    dw
}

/// Runs the constant-memory decoder on `s`, which is modified in place.
///
/// On return `e` holds the recovered pattern when the first tuple element
/// is `true`. On failure `s` and `e` hold the state of the last attempt.
/// No heap allocation happens here: `e` must already have room for
/// `cfg.hdd_margin` coordinates.
pub fn decode_in_place<O: DecodeObserver>(
    blocks: &[SparseSupport],
    s: &mut DenseRingElement,
    e: &mut ErrorVector,
    t: usize,
    cfg: &DecoderConfig,
    orientation: ColumnOrientation,
    observer: &mut O,
) -> Result<(bool, DecodeStats), DecodeError> {
    let r = s.r();
    check_inputs(blocks, r)?;
    if e.capacity() < cfg.hdd_margin {
        return Err(DecodeError::CapacityTooSmall {
            got: e.capacity(),
            want: cfg.hdd_margin,
        });
    }
    e.set_len_n(blocks.len() * r);

    let mut stats = DecodeStats::default();
    let mut delta = cfg.delta;
    let mut s_weight = s.weight();

    loop {
        stats.attempts += 1;
        observer.attempt_started(delta);
        e.clear();
        let mut iter = 0usize;
        let mut theta = cfg.theta0;
        loop {
            let mut newmax = 0usize;
            // a variable with no unsatisfied check is never flipped
            let threshold = theta.saturating_sub(delta).max(1);
            let words = s.words_mut();
            'pass: for (b, block) in blocks.iter().enumerate() {
                let support = block.coords();
                for jj in 0..r {
                    let mut unsat = 0usize;
                    for &l in support {
                        unsat += bits::get_bit(words, row_index(jj, l as usize, r, orientation)) as usize;
                    }
                    newmax = newmax.max(unsat);
                    if unsat >= threshold {
                        let j = b * r + jj;
                        if let Some(q) = e.position(j) {
                            e.swap_remove(q);
                        } else if e.weight() < cfg.hdd_margin {
                            e.push(j).expect("capacity checked above");
                            stats.peak_weight = stats.peak_weight.max(e.weight());
                        } else {
                            // too many spurious errors
                            break 'pass;
                        }
                        s_weight = s_weight.wrapping_add_signed(flip_column(words, support, jj, r, orientation));
                    }
                }
            }
            theta = newmax;
            iter += 1;
            stats.iterations += 1;
            observer.pass_finished(s, e);
            if s_weight == 0 || iter == cfg.iter_bound {
                break;
            }
        }

        if (s_weight != 0 || e.weight() > t) && delta > 0 {
            delta -= 1;
            let words = s.words_mut();
            for &j in e.coords() {
                let j = j as usize;
                let b = j / r;
                s_weight =
                    s_weight.wrapping_add_signed(flip_column(words, blocks[b].coords(), j - b * r, r, orientation));
            }
            stats.restarts += 1;
            observer.syndrome_reverted(s);
            continue;
        }
        break;
    }
    stats.final_delta = delta;
    debug_assert_eq!(s_weight, s.weight());
    Ok((s_weight == 0 && e.weight() <= t, stats))
}

/// Decodes a copy of `s` with a freshly allocated error list.
pub fn decode(
    blocks: &[SparseSupport],
    s: &DenseRingElement,
    t: usize,
    cfg: &DecoderConfig,
    orientation: ColumnOrientation,
) -> Result<DecodeOutcome, DecodeError> {
    let mut work = s.clone();
    let mut e = ErrorVector::with_capacity(blocks.len() * s.r(), cfg.hdd_margin.max(t));
    let (ok, stats) = decode_in_place(blocks, &mut work, &mut e, t, cfg, orientation, &mut ())?;
    Ok(DecodeOutcome {
        status: if ok {
            DecodeStatus::Success
        } else {
            DecodeStatus::Failure
        },
        e: ok.then_some(e),
        stats,
    })
}

/// Syndrome `H e^T` of a sparse word under the private blocks, accumulated
/// column by column.
pub fn syndrome<I: IntoIterator<Item = usize>>(
    blocks: &[SparseSupport],
    coords: I,
    orientation: ColumnOrientation,
) -> DenseRingElement {
    let r = blocks[0].r();
    let mut s = DenseRingElement::zero(r);
    let words = s.words_mut();
    for j in coords {
        let b = j / r;
        flip_column(words, blocks[b].coords(), j - b * r, r, orientation);
    }
    s
}

/// Largest number of unsatisfied checks over all variables for syndrome `s`.
pub fn max_unsatisfied(blocks: &[SparseSupport], s: &DenseRingElement, orientation: ColumnOrientation) -> usize {
    let r = s.r();
    let mut counts = vec![0u16; r];
    let mut best = 0;
    for block in blocks {
        counts.iter_mut().for_each(|c| *c = 0);
        // row i is checked by column jj exactly when i = jj +- l
        for i in s.iter_ones() {
            for &l in block.coords() {
                let jj = match orientation {
                    ColumnOrientation::Palindromic => reduce_once(i + r - l as usize, r),
                    ColumnOrientation::General => reduce_once(i + l as usize, r),
                };
                counts[jj] += 1;
            }
        }
        best = best.max(counts.iter().copied().max().unwrap_or(0) as usize);
    }
    best
}

#[cfg(test)]
mod tests;
