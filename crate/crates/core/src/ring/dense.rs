use std::fmt;

use super::bits::{self, words_for, WORD_BITS};
use super::{check_same_r, RingError, SparseSupport};

/// An element of `F2[x]/(x^r - 1)`; coefficient `j` is bit `j`, which is also
/// entry `h_j` of the first row of the circulant matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DenseRingElement {
    r: usize,
    words: Vec<u64>,
}

impl DenseRingElement {
    pub fn zero(r: usize) -> Self {
        assert!(r > 0, "block size must be positive");
        Self {
            r,
            words: vec![0; words_for(r)],
        }
    }

    pub fn one(r: usize) -> Self {
        let mut e = Self::zero(r);
        e.words[0] = 1;
        e
    }

    /// The monomial `x^k`, with `k` reduced modulo `r`.
    pub fn monomial(r: usize, k: usize) -> Self {
        let mut e = Self::zero(r);
        e.flip(k % r);
        e
    }

    /// Builds an element from coordinates; repeated coordinates cancel.
    pub fn from_coords<I: IntoIterator<Item = usize>>(r: usize, coords: I) -> Result<Self, RingError> {
        let mut e = Self::zero(r);
        for c in coords {
            if c >= r {
                return Err(RingError::CoordinateOutOfRange { coord: c, r });
            }
            e.flip(c);
        }
        Ok(e)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    #[inline]
    pub fn get(&self, j: usize) -> bool {
        bits::get_bit(&self.words, j)
    }

    #[inline]
    pub fn flip(&mut self, j: usize) {
        debug_assert!(j < self.r);
        bits::flip_bit(&mut self.words, j);
    }

    pub fn set(&mut self, j: usize, value: bool) {
        if self.get(j) != value {
            self.flip(j);
        }
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_one(&self) -> bool {
        self.words[0] == 1 && self.words[1..].iter().all(|&w| w == 0)
    }

    /// Coordinates of the nonzero coefficients, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.iter_ones().collect()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * WORD_BITS + b)
                }
            })
        })
    }

    /// Degree as a polynomial; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        bits::highest_set_at_or_below(&self.words, self.r - 1)
    }

    pub fn add(&self, other: &Self) -> Result<Self, RingError> {
        let mut out = self.clone();
        out.add_assign(other)?;
        Ok(out)
    }

    pub fn add_assign(&mut self, other: &Self) -> Result<(), RingError> {
        check_same_r(self.r, other.r)?;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(())
    }

    /// Multiplication by `x^k`: coefficient `j` of the result is coefficient
    /// `(j - k) mod r` of `self`.
    pub fn rotate(&self, k: usize) -> Self {
        let mut out = Self::zero(self.r);
        out.xor_rotated(self, k % self.r);
        out
    }

    /// `self ^= other * x^k` for `k < r`.
    pub(crate) fn xor_rotated(&mut self, other: &Self, k: usize) {
        debug_assert_eq!(self.r, other.r);
        debug_assert!(k < self.r);
        let r = self.r;
        bits::xor_shifted_range(&mut self.words, &other.words, 0, r - 1 - k, k as isize);
        if k > 0 {
            bits::xor_shifted_range(&mut self.words, &other.words, r - k, r - 1, -((r - k) as isize));
        }
    }

    /// The element whose circulant matrix is the transpose of this one's:
    /// `x^j -> x^{-j}`.
    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.r);
        for j in self.iter_ones() {
            out.flip(if j == 0 { 0 } else { self.r - j });
        }
        out
    }

    /// Product with a sparse operand, as the XOR of one rotation of `self`
    /// per support coordinate of `b`.
    pub fn mul_sparse(&self, b: &SparseSupport) -> Result<Self, RingError> {
        check_same_r(self.r, b.r())?;
        let mut out = Self::zero(self.r);
        for &k in b.coords() {
            out.xor_rotated(self, k as usize);
        }
        Ok(out)
    }

    /// General product. The lighter operand drives the rotations.
    pub fn mul(&self, other: &Self) -> Result<Self, RingError> {
        check_same_r(self.r, other.r)?;
        let (dense, sparse) = if self.weight() <= other.weight() {
            (other, self)
        } else {
            (self, other)
        };
        let mut out = Self::zero(self.r);
        for k in sparse.iter_ones() {
            out.xor_rotated(dense, k);
        }
        Ok(out)
    }

    pub fn to_sparse(&self) -> SparseSupport {
        SparseSupport::from_sorted_unchecked(self.r, self.iter_ones().map(|j| j as u32).collect())
    }

    /// `ceil(r / 8)` bytes, bit `j` at byte `j / 8`, bit `j % 8`.
    pub fn to_bytes(&self) -> Vec<u8> {
        bits::words_to_bytes(&self.words, self.r)
    }

    /// Parses [`to_bytes`](Self::to_bytes) output. Returns `None` on a wrong
    /// length or a nonzero pad bit.
    pub fn from_bytes(r: usize, bytes: &[u8]) -> Option<Self> {
        if r == 0 || bytes.len() != r.div_ceil(8) {
            return None;
        }
        bits::bytes_to_words(bytes, r).map(|words| Self { r, words })
    }
}

impl fmt::Debug for DenseRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.weight();
        if w <= 16 {
            write!(f, "DenseRingElement(r={}, {:?})", self.r, self.support())
        } else {
            write!(f, "DenseRingElement(r={}, weight={})", self.r, w)
        }
    }
}
