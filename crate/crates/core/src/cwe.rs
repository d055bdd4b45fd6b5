//! Constant-weight encoding: the bijection between integers in
//! `[0, C(n, t))` and weight-`t` words of length `n`, in colexicographic
//! order. Rank of the support `a_1 < ... < a_t` is `sum C(a_i, i)`.
//!
//! A byte-string layer sits on top: a message is placed, behind a 2-byte
//! little-endian length prefix, in a fixed-size block of
//! [`message_capacity`] bytes that is read as a big-endian integer.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::{seq::index::sample, Rng};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CweError {
    #[error("plaintext integer is not below C(n, t)")]
    OutOfRange,
    #[error("word has weight {got}, expected {want}")]
    WrongWeight { got: usize, want: usize },
    #[error("error weight {t} exceeds length {n}")]
    WeightExceedsLength { t: usize, n: usize },
    #[error("coordinate {coord} out of range for length {n}")]
    CoordinateOutOfRange { coord: usize, n: usize },
    #[error("duplicate coordinate {0}")]
    DuplicateCoordinate(usize),
    #[error("error vector is full ({0} slots)")]
    Full(usize),
    #[error("message of {len} bytes exceeds the {max}-byte limit")]
    MessageTooLong { len: usize, max: usize },
    #[error("decoded block carries an invalid length prefix")]
    BadLengthPrefix,
}

/// Spurious-error capacity of the decoder's error list, `floor(3t/2)`.
pub fn hdd_margin(t: usize) -> usize {
    3 * t / 2
}

/// A sparse word of length `n` as an unsorted list of distinct coordinates,
/// with room for a fixed number of them.
///
/// The backing storage is allocated once, so pushes within capacity never
/// reallocate.
#[derive(Debug, Clone)]
pub struct ErrorVector {
    n: usize,
    capacity: usize,
    coords: Vec<u32>,
}

impl ErrorVector {
    pub fn with_capacity(n: usize, capacity: usize) -> Self {
        Self {
            n,
            capacity,
            coords: Vec::with_capacity(capacity),
        }
    }

    /// Builds a vector with capacity `max(coords.len(), floor(3t/2))` where
    /// `t = coords.len()`.
    pub fn from_coords(n: usize, coords: Vec<u32>) -> Result<Self, CweError> {
        let capacity = coords.len().max(hdd_margin(coords.len()));
        let mut e = Self::with_capacity(n, capacity);
        for c in coords {
            if c as usize >= n {
                return Err(CweError::CoordinateOutOfRange { coord: c as usize, n });
            }
            if e.contains(c as usize) {
                return Err(CweError::DuplicateCoordinate(c as usize));
            }
            e.coords.push(c);
        }
        Ok(e)
    }

    pub fn len_n(&self) -> usize {
        self.n
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Current weight.
    pub fn weight(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn sorted_coords(&self) -> Vec<u32> {
        let mut c = self.coords.clone();
        c.sort_unstable();
        c
    }

    pub fn position(&self, coord: usize) -> Option<usize> {
        self.coords.iter().position(|&c| c as usize == coord)
    }

    pub fn contains(&self, coord: usize) -> bool {
        self.position(coord).is_some()
    }

    pub fn is_full(&self) -> bool {
        self.coords.len() >= self.capacity
    }

    pub fn clear(&mut self) {
        self.coords.clear();
    }

    /// Appends a coordinate not already present.
    pub fn push(&mut self, coord: usize) -> Result<(), CweError> {
        if self.is_full() {
            return Err(CweError::Full(self.capacity));
        }
        debug_assert!(coord < self.n && !self.contains(coord));
        self.coords.push(coord as u32);
        Ok(())
    }

    /// Removes the entry at `slot` by moving the last entry into it.
    pub fn swap_remove(&mut self, slot: usize) -> u32 {
        self.coords.swap_remove(slot)
    }

    pub(crate) fn set_len_n(&mut self, n: usize) {
        self.n = n;
    }
}

/// Equal as sets of coordinates over the same length.
impl PartialEq for ErrorVector {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.sorted_coords() == other.sorted_coords()
    }
}

impl Eq for ErrorVector {}

/// Exact binomial coefficient; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Maps `m < C(n, t)` to its weight-`t` word in colexicographic order.
pub fn unrank(m: &BigUint, n: usize, t: usize) -> Result<ErrorVector, CweError> {
    if t > n {
        return Err(CweError::WeightExceedsLength { t, n });
    }
    if *m >= binomial(n, t) {
        return Err(CweError::OutOfRange);
    }
    let mut out = ErrorVector::with_capacity(n, t.max(hdd_margin(t)));
    let mut m = m.clone();
    let mut k = t;
    if k == 0 {
        return Ok(out);
    }
    // binom tracks C(c, k) as c walks down from n - 1.
    let mut c = n - 1;
    let mut binom = binomial(c, k);
    loop {
        if m >= binom {
            m -= &binom;
            out.coords.push(c as u32);
            // C(c-1, k-1) = C(c, k) * k / c
            if k == 1 {
                break;
            }
            binom = binom * k / c;
            k -= 1;
        } else {
            // C(c-1, k) = C(c, k) * (c - k) / c
            binom = binom * (c - k) / c;
        }
        c -= 1;
    }
    out.coords.reverse();
    Ok(out)
}

/// Inverse of [`unrank`].
pub fn rank(e: &ErrorVector, t: usize) -> Result<BigUint, CweError> {
    if e.weight() != t {
        return Err(CweError::WrongWeight {
            got: e.weight(),
            want: t,
        });
    }
    Ok(rank_sorted(&e.sorted_coords()))
}

fn rank_sorted(coords: &[u32]) -> BigUint {
    coords
        .iter()
        .enumerate()
        .map(|(i, &a)| binomial(a as usize, i + 1))
        .sum()
}

/// Uniformly random weight-`t` word of length `n`.
pub fn sample_error<R: Rng + ?Sized>(n: usize, t: usize, rng: &mut R) -> Result<ErrorVector, CweError> {
    if t > n {
        return Err(CweError::WeightExceedsLength { t, n });
    }
    let mut e = ErrorVector::with_capacity(n, t.max(hdd_margin(t)));
    e.coords.extend(sample(rng, n, t).into_iter().map(|c| c as u32));
    Ok(e)
}

/// Base-2 logarithm of a big integer, to double precision.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return x.to_u64().map_or(f64::NEG_INFINITY, |v| (v as f64).log2());
    }
    let top = (x >> (bits - 64)).to_u64().expect("64 bits");
    (top as f64).log2() + (bits - 64) as f64
}

/// Size in bytes of the message block carried by one plaintext integer,
/// `floor((lg C(n, t) - 1) / 8)`.
pub fn message_capacity(n: usize, t: usize) -> usize {
    let lg = log2_big(&binomial(n, t));
    if lg < 1.0 {
        0
    } else {
        ((lg - 1.0) / 8.0).floor() as usize
    }
}

/// Longest message [`encode_message`] accepts: the block minus its length
/// prefix.
pub fn max_message_len(n: usize, t: usize) -> usize {
    message_capacity(n, t).saturating_sub(2)
}

/// Packs a message into a plaintext integer below `C(n, t)`.
pub fn encode_message(msg: &[u8], n: usize, t: usize) -> Result<BigUint, CweError> {
    let cap = message_capacity(n, t);
    let max = cap.saturating_sub(2);
    if msg.len() > max || cap < 2 {
        return Err(CweError::MessageTooLong { len: msg.len(), max });
    }
    let mut block = vec![0u8; cap];
    block[..2].copy_from_slice(&(msg.len() as u16).to_le_bytes());
    block[2..2 + msg.len()].copy_from_slice(msg);
    Ok(BigUint::from_bytes_be(&block))
}

/// Inverse of [`encode_message`].
pub fn decode_message(m: &BigUint, n: usize, t: usize) -> Result<Vec<u8>, CweError> {
    let cap = message_capacity(n, t);
    let raw = m.to_bytes_be();
    if raw.len() > cap || cap < 2 {
        return Err(CweError::BadLengthPrefix);
    }
    let mut block = vec![0u8; cap - raw.len()];
    block.extend_from_slice(&raw);
    let len = u16::from_le_bytes([block[0], block[1]]) as usize;
    if len > cap - 2 || block[2 + len..].iter().any(|&b| b != 0) {
        return Err(CweError::BadLengthPrefix);
    }
    Ok(block[2..2 + len].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(10, 0), BigUint::one());
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(3, 4), BigUint::zero());
        let big = binomial(9602, 84);
        assert_eq!(big, binomial(9601, 83) + binomial(9601, 84));
        assert_eq!(big, binomial(9602, 9602 - 84));
    }

    #[test]
    fn pascal_recurrence() {
        for n in 1..=200 {
            for k in 1..=n {
                assert_eq!(
                    binomial(n, k),
                    binomial(n - 1, k - 1) + binomial(n - 1, k),
                    "n={n} k={k}"
                );
            }
        }
    }

    /// All k-subsets of 0..n sorted colexicographically.
    fn colex_subsets(n: usize, k: usize) -> Vec<Vec<u32>> {
        let mut subsets: Vec<Vec<u32>> = (0u32..1 << n)
            .filter(|m| m.count_ones() as usize == k)
            .map(|m| (0..n as u32).filter(|j| m >> j & 1 == 1).collect())
            .collect();
        subsets.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
        subsets
    }

    #[test]
    fn unrank_enumerates_colex_order() {
        let all = colex_subsets(5, 2);
        assert_eq!(all.len(), 10);
        for (m, want) in all.iter().enumerate() {
            let e = unrank(&BigUint::from(m), 5, 2).unwrap();
            assert_eq!(&e.sorted_coords(), want);
            assert_eq!(rank(&e, 2).unwrap(), BigUint::from(m));
        }
    }

    #[test]
    fn extreme_ranks() {
        let (n, t) = (20, 6);
        let first = unrank(&BigUint::zero(), n, t).unwrap();
        assert_eq!(first.sorted_coords(), (0..6).collect::<Vec<u32>>());
        let last = unrank(&(binomial(n, t) - 1u32), n, t).unwrap();
        assert_eq!(last.sorted_coords(), (14..20).collect::<Vec<u32>>());
        assert_eq!(unrank(&binomial(n, t), n, t), Err(CweError::OutOfRange));
        assert_eq!(rank(&first, t).unwrap(), BigUint::zero());
        assert!(matches!(
            rank(&first, 5),
            Err(CweError::WrongWeight { got: 6, want: 5 })
        ));
    }

    #[test]
    fn unrank_is_monotone() {
        let all = colex_subsets(9, 4);
        let mut prev: Option<Vec<u32>> = None;
        for m in 0..all.len() {
            let cur = unrank(&BigUint::from(m), 9, 4).unwrap().sorted_coords();
            if let Some(p) = prev {
                assert!(p.iter().rev().lt(cur.iter().rev()));
            }
            prev = Some(cur);
        }
    }

    #[test]
    fn sample_error_edges() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(sample_error(10, 0, &mut rng).unwrap().weight(), 0);
        assert_eq!(
            sample_error(10, 10, &mut rng).unwrap().sorted_coords(),
            (0..10).collect::<Vec<u32>>()
        );
        assert!(sample_error(3, 4, &mut rng).is_err());
    }

    #[test]
    fn sample_error_is_uniform_per_coordinate() {
        let (n, t, draws) = (100usize, 10usize, 10_000usize);
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut hits = vec![0usize; n];
        for _ in 0..draws {
            for &c in sample_error(n, t, &mut rng).unwrap().coords() {
                hits[c as usize] += 1;
            }
        }
        let p = t as f64 / n as f64;
        let mean = draws as f64 * p;
        let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
        for (c, &h) in hits.iter().enumerate() {
            assert!((h as f64 - mean).abs() <= 5.0 * sigma, "coordinate {c}: {h} hits");
        }
    }

    #[test]
    fn error_vector_capacity() {
        let mut e = ErrorVector::with_capacity(10, 2);
        e.push(3).unwrap();
        e.push(7).unwrap();
        assert_eq!(e.push(1), Err(CweError::Full(2)));
        assert_eq!(e.swap_remove(0), 3);
        assert_eq!(e.coords(), &[7]);
        assert!(ErrorVector::from_coords(5, vec![1, 1]).is_err());
        assert!(ErrorVector::from_coords(5, vec![5]).is_err());
        assert_eq!(hdd_margin(84), 126);
        assert_eq!(hdd_margin(2), 3);
        assert_eq!(hdd_margin(264), 396);
    }

    #[test]
    fn message_layer() {
        let (n, t) = (9602, 84);
        let cap = message_capacity(n, t);
        let lg = log2_big(&binomial(n, t));
        assert_eq!(cap, ((lg - 1.0) / 8.0).floor() as usize);
        for msg in [
            &b""[..],
            b"hi",
            &vec![0u8; max_message_len(n, t)],
            &vec![0xffu8; max_message_len(n, t)],
        ] {
            let m = encode_message(msg, n, t).unwrap();
            assert!(m < binomial(n, t));
            assert_eq!(decode_message(&m, n, t).unwrap(), msg);
        }
        let too_long = vec![1u8; max_message_len(n, t) + 1];
        assert!(matches!(
            encode_message(&too_long, n, t),
            Err(CweError::MessageTooLong { .. })
        ));
    }

    proptest::proptest! {
        #[test]
        fn rank_unrank_inverse(seed in 0u64..1000, n in 1usize..300, frac in 0.0f64..1.0) {
            let t = ((n as f64) * frac) as usize;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let e = sample_error(n, t, &mut rng).unwrap();
            let m = rank(&e, t).unwrap();
            proptest::prop_assert!(m < binomial(n, t));
            proptest::prop_assert_eq!(unrank(&m, n, t).unwrap(), e);
        }
    }
}
