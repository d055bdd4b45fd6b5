use super::bits::reduce_once;
use super::{check_same_r, DenseRingElement, RingError};

/// First row of a sparse circulant block as a strictly increasing list of
/// nonzero coordinates in `[0, r)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparseSupport {
    r: usize,
    support: Vec<u32>,
}

impl SparseSupport {
    /// Accepts coordinates in any order; rejects duplicates and coordinates
    /// outside `[0, r)`.
    pub fn new(r: usize, mut coords: Vec<u32>) -> Result<Self, RingError> {
        if r == 0 {
            return Err(RingError::EmptyRing);
        }
        coords.sort_unstable();
        for w in coords.windows(2) {
            if w[0] == w[1] {
                return Err(RingError::DuplicateCoordinate(w[0] as usize));
            }
        }
        if let Some(&last) = coords.last() {
            if last as usize >= r {
                return Err(RingError::CoordinateOutOfRange {
                    coord: last as usize,
                    r,
                });
            }
        }
        Ok(Self { r, support: coords })
    }

    pub(crate) fn from_sorted_unchecked(r: usize, support: Vec<u32>) -> Self {
        debug_assert!(support.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(support.last().is_none_or(|&c| (c as usize) < r));
        Self { r, support }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn weight(&self) -> usize {
        self.support.len()
    }

    pub fn coords(&self) -> &[u32] {
        &self.support
    }

    pub fn contains(&self, coord: usize) -> bool {
        self.support.binary_search(&(coord as u32)).is_ok()
    }

    pub fn to_dense(&self) -> DenseRingElement {
        let mut e = DenseRingElement::zero(self.r);
        for &c in &self.support {
            e.flip(c as usize);
        }
        e
    }

    /// Support of the transposed circulant: `j -> (r - j) mod r`.
    pub fn transpose(&self) -> Self {
        let mut coords: Vec<u32> = self
            .support
            .iter()
            .map(|&c| if c == 0 { 0 } else { (self.r - c as usize) as u32 })
            .collect();
        coords.sort_unstable();
        Self {
            r: self.r,
            support: coords,
        }
    }
}

/// Convolution of two sparse operands, as a dense element.
pub fn mul_sparse_sparse(a: &SparseSupport, b: &SparseSupport) -> Result<DenseRingElement, RingError> {
    check_same_r(a.r, b.r)?;
    let r = a.r;
    let mut out = DenseRingElement::zero(r);
    for &x in &a.support {
        for &y in &b.support {
            out.flip(reduce_once(x as usize + y as usize, r));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{seq::index::sample, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sp(r: usize, c: &[u32]) -> SparseSupport {
        SparseSupport::new(r, c.to_vec()).unwrap()
    }

    #[test]
    fn validation() {
        assert_eq!(SparseSupport::new(5, vec![3, 1]).unwrap().coords(), &[1, 3]);
        assert_eq!(
            SparseSupport::new(5, vec![1, 1]),
            Err(RingError::DuplicateCoordinate(1))
        );
        assert_eq!(
            SparseSupport::new(5, vec![5]),
            Err(RingError::CoordinateOutOfRange { coord: 5, r: 5 })
        );
    }

    #[test]
    fn sparse_products() {
        assert!(mul_sparse_sparse(&sp(13, &[0]), &sp(13, &[0])).unwrap().is_one());
        assert!(mul_sparse_sparse(&sp(13, &[1]), &sp(13, &[12])).unwrap().is_one());
        assert!(mul_sparse_sparse(&sp(13, &[1]), &sp(14, &[12])).is_err());
    }

    #[test]
    fn sparse_sparse_matches_dense_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let a = SparseSupport::new(31, sample(&mut rng, 31, 5).into_iter().map(|c| c as u32).collect()).unwrap();
            let b = SparseSupport::new(31, sample(&mut rng, 31, 7).into_iter().map(|c| c as u32).collect()).unwrap();
            let want = a.to_dense().mul_sparse(&b).unwrap();
            assert_eq!(mul_sparse_sparse(&a, &b).unwrap(), want);
        }
    }

    #[test]
    fn transpose_support() {
        assert_eq!(sp(10, &[0, 1, 7]).transpose().coords(), &[0, 3, 9]);
    }
}
