//! Binary circulant matrices, handled through their first rows as elements
//! of `F2[x]/(x^r - 1)`.
//!
//! Two representations coexist. [`DenseRingElement`] is an `r`-bit vector
//! (public key blocks, syndromes, cryptograms); [`SparseSupport`] is the
//! sorted list of nonzero coordinates (private key blocks). Every product the
//! cryptosystem needs has at least one sparse operand, so multiplication is a
//! XOR of a handful of rotations rather than a general convolution.

pub(crate) mod bits;
mod dense;
mod invert;
mod sparse;

pub use dense::DenseRingElement;
pub use invert::{invert, invert_checked, InvertStats};
pub use sparse::{mul_sparse_sparse, SparseSupport};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("block size mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("element is not invertible modulo x^r - 1")]
    NotInvertible,
    #[error("coordinate {coord} out of range for block size {r}")]
    CoordinateOutOfRange { coord: usize, r: usize },
    #[error("duplicate coordinate {0} in sparse support")]
    DuplicateCoordinate(usize),
    #[error("block size must be positive")]
    EmptyRing,
    #[error("paired-storage invariant violated at step {step}: deg(f)+deg(c)={fc}, deg(g)+deg(b)={gb}, r={r}")]
    InvariantViolation {
        step: usize,
        fc: isize,
        gb: isize,
        r: usize,
    },
}

pub(crate) fn check_same_r(left: usize, right: usize) -> Result<(), RingError> {
    if left == right {
        Ok(())
    } else {
        Err(RingError::LengthMismatch { left, right })
    }
}
