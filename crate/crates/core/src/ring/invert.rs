//! Inversion modulo `x^r - 1` by the extended Euclidean algorithm in
//! `2r + 4` bits of working storage.
//!
//! The algorithm tracks `f = b*h + u*m` and `g = c*h + v*m` with
//! `m = x^r - 1`; `u` and `v` are never materialized. Throughout the run
//! `deg(f) + deg(c) <= r` and `deg(g) + deg(b) <= r`, so each pair fits in a
//! single `(r + 2)`-bit buffer: the first polynomial grows upward from bit 0,
//! the second is stored reversed from bit `r + 1` downward (coefficient `i` at
//! bit `r + 1 - i`). Swapping `(f, c)` with `(g, b)` is then a buffer swap.

use super::bits::{self, words_for};
use super::{DenseRingElement, RingError};

/// Counters collected by [`invert_checked`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct InvertStats {
    /// Division steps (`f += x^j g`) performed.
    pub steps: usize,
    pub swaps: usize,
    /// Largest `deg(f) + deg(c)` observed, zero polynomials counting as -1.
    pub max_fc: isize,
    /// Largest `deg(g) + deg(b)` observed.
    pub max_gb: isize,
    /// Bits held by the two paired buffers.
    pub working_bits: usize,
}

/// Computes `h^{-1} mod x^r - 1`.
pub fn invert(h: &DenseRingElement) -> Result<DenseRingElement, RingError> {
    xgcd(h, false).map(|(g, _)| g)
}

/// Like [`invert`], but verifies both degree invariants before every
/// division step and reports [`RingError::InvariantViolation`] on the first
/// breach.
pub fn invert_checked(h: &DenseRingElement) -> Result<(DenseRingElement, InvertStats), RingError> {
    xgcd(h, true)
}

fn deg_of(d: Option<usize>) -> isize {
    d.map_or(-1, |d| d as isize)
}

fn xgcd(h: &DenseRingElement, checked: bool) -> Result<(DenseRingElement, InvertStats), RingError> {
    let r = h.r();
    let top = r + 1;
    let nw = words_for(r + 2);

    // (f, c) and (g, b), each sharing one buffer.
    let mut fc = vec![0u64; nw];
    let mut gb = vec![0u64; nw];
    fc[..h.words().len()].copy_from_slice(h.words());
    bits::flip_bit(&mut gb, 0);
    bits::flip_bit(&mut gb, r);
    bits::flip_bit(&mut gb, top);

    let mut deg_f = deg_of(h.degree());
    let mut deg_c: isize = -1;
    let mut deg_g = r as isize;
    let mut deg_b: isize = 0;

    let mut stats = InvertStats {
        max_fc: -1,
        max_gb: -1,
        working_bits: 2 * (r + 2),
        ..InvertStats::default()
    };

    loop {
        let fc_sum = if deg_f < 0 || deg_c < 0 { -1 } else { deg_f + deg_c };
        let gb_sum = if deg_g < 0 || deg_b < 0 { -1 } else { deg_g + deg_b };
        stats.max_fc = stats.max_fc.max(fc_sum);
        stats.max_gb = stats.max_gb.max(gb_sum);
        let within = fc_sum <= r as isize && gb_sum <= r as isize;
        if checked && !within {
            return Err(RingError::InvariantViolation {
                step: stats.steps,
                fc: fc_sum,
                gb: gb_sum,
                r,
            });
        }
        debug_assert!(within);

        if deg_f < 0 {
            // f = 0 leaves g = gcd(h, m) = c*h + v*m.
            if deg_g == 0 {
                return Ok((read_reversed(&fc, deg_c, r), stats));
            }
            return Err(RingError::NotInvertible);
        }
        if deg_f == 0 {
            return Ok((read_reversed(&gb, deg_b, r), stats));
        }
        if deg_f < deg_g {
            std::mem::swap(&mut fc, &mut gb);
            std::mem::swap(&mut deg_f, &mut deg_g);
            std::mem::swap(&mut deg_c, &mut deg_b);
            stats.swaps += 1;
        }

        let j = deg_f - deg_g;
        // f += x^j * g
        bits::xor_shifted_range(&mut fc, &gb, 0, deg_g as usize, j);
        // b += x^j * c, both stored reversed
        if deg_c >= 0 {
            bits::xor_shifted_range(&mut gb, &fc, top - deg_c as usize, top, -j);
        }
        stats.steps += 1;

        deg_f = deg_of(bits::highest_set_at_or_below(&fc, deg_f as usize - 1));
        deg_b = bits::lowest_set_at_or_above(&gb, deg_g as usize + 1, top + 1).map_or(-1, |pos| (top - pos) as isize);
    }
}

/// Reads a reversed polynomial of degree `deg <= r` out of a paired buffer
/// and reduces it modulo `x^r - 1`.
fn read_reversed(buf: &[u64], deg: isize, r: usize) -> DenseRingElement {
    let mut out = DenseRingElement::zero(r);
    for i in 0..=deg.max(-1) {
        let i = i as usize;
        if bits::get_bit(buf, r + 1 - i) {
            out.flip(if i == r { 0 } else { i });
        }
    }
    out
}
