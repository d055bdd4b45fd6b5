//! Cyclosymmetric (circulant and symmetric) ring elements.
//!
//! With one layer the first row `c` satisfies `c_j = c_{r-j}`, so only
//! `c_0..=c_{r/2}` are free. With two coprime layers `r = p1 * p2`, a
//! coordinate `m` is identified with `(m mod p1, m mod p2)` and the element
//! must be invariant under negating either component independently; this is
//! the fixed subring of the automorphisms `x -> x^s` with `s = (-1, 1)` and
//! `s = (1, -1)` in CRT coordinates. Each orbit `{(+-k, +-l)}` has 1, 2 or 4
//! members and one canonical representative with `k <= p1/2`, `l <= p2/2`.
//!
//! Compressed blocks list one bit per representative, in the order
//! `j = 0..=p/2` for one layer and lexicographic `(k, l)` for two layers.

use rand::Rng;
use thiserror::Error;

use crate::ring::bits::{self, words_for};
use crate::ring::{DenseRingElement, SparseSupport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CyclosymError {
    #[error("layer shape must have one or two layers, got {0}")]
    LayerCount(usize),
    #[error("layer order {0} is below 3")]
    LayerTooSmall(usize),
    #[error("layer orders {0} and {1} are not coprime")]
    NotCoprime(usize, usize),
    #[error("element is not cyclosymmetric for this shape")]
    NotCyclosymmetric,
    #[error("block size {got} does not match shape size {want}")]
    SizeMismatch { got: usize, want: usize },
    #[error("weight {w} cannot be assembled from whole orbits of this shape")]
    UnreachableWeight { w: usize },
}

/// Layer orders `(p_1, ..., p_L)`, `L` in `{1, 2}`, with `r = p_1 * ... * p_L`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LayerShape {
    layers: Vec<usize>,
    r: usize,
    // CRT idempotents for two layers: m = k*e1 + l*e2 mod r.
    crt: (usize, usize),
}

impl LayerShape {
    pub fn single(p: usize) -> Result<Self, CyclosymError> {
        Self::new(vec![p])
    }

    pub fn double(p1: usize, p2: usize) -> Result<Self, CyclosymError> {
        Self::new(vec![p1, p2])
    }

    pub fn new(layers: Vec<usize>) -> Result<Self, CyclosymError> {
        if layers.is_empty() || layers.len() > 2 {
            return Err(CyclosymError::LayerCount(layers.len()));
        }
        if let Some(&p) = layers.iter().find(|&&p| p < 3) {
            return Err(CyclosymError::LayerTooSmall(p));
        }
        let r = layers.iter().product();
        let crt = if let [p1, p2] = layers[..] {
            let inv2 = mod_inverse(p2 % p1, p1).ok_or(CyclosymError::NotCoprime(p1, p2))?;
            let inv1 = mod_inverse(p1 % p2, p2).ok_or(CyclosymError::NotCoprime(p1, p2))?;
            (p2 * inv2 % r, p1 * inv1 % r)
        } else {
            (0, 0)
        };
        Ok(Self { layers, r, crt })
    }

    pub fn layers(&self) -> &[usize] {
        &self.layers
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Number of independent bits, `prod(floor(p_i / 2) + 1)`.
    pub fn compressed_len(&self) -> usize {
        self.layers.iter().map(|p| p / 2 + 1).product()
    }

    fn crt(&self, k: usize, l: usize) -> usize {
        let (e1, e2) = self.crt;
        ((k as u128 * e1 as u128 + l as u128 * e2 as u128) % self.r as u128) as usize
    }

    /// Coordinate of the `index`-th canonical orbit representative.
    pub fn representative(&self, index: usize) -> usize {
        debug_assert!(index < self.compressed_len());
        match self.layers[..] {
            [_] => index,
            [_, p2] => {
                let width = p2 / 2 + 1;
                self.crt(index / width, index % width)
            }
            _ => unreachable!(),
        }
    }

    /// Orbit of coordinate `m` under the layer negations.
    pub fn orbit(&self, m: usize) -> Orbit {
        debug_assert!(m < self.r);
        let mut orbit = Orbit::default();
        match self.layers[..] {
            [_] => {
                orbit.insert(m);
                orbit.insert(neg(m, self.r));
            }
            [p1, p2] => {
                let (k, l) = (m % p1, m % p2);
                for kk in [k, neg(k, p1)] {
                    for ll in [l, neg(l, p2)] {
                        orbit.insert(self.crt(kk, ll));
                    }
                }
            }
            _ => unreachable!(),
        }
        orbit
    }
}

fn neg(x: usize, modulus: usize) -> usize {
    if x == 0 {
        0
    } else {
        modulus - x
    }
}

fn mod_inverse(a: usize, m: usize) -> Option<usize> {
    let (mut old_r, mut r) = (a as i64, m as i64);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i64) as usize)
}

/// A set of at most four coordinates, sorted ascending.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Orbit {
    coords: [usize; 4],
    len: usize,
}

impl Orbit {
    fn insert(&mut self, c: usize) {
        let pos = self.coords[..self.len].partition_point(|&x| x < c);
        if pos < self.len && self.coords[pos] == c {
            return;
        }
        self.coords.copy_within(pos..self.len, pos + 1);
        self.coords[pos] = c;
        self.len += 1;
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.coords[..self.len]
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.as_slice().iter().copied()
    }
}

/// True iff the support of `a` is a union of orbits of `shape`.
pub fn is_cyclosymmetric(a: &DenseRingElement, shape: &LayerShape) -> bool {
    a.r() == shape.r() && a.iter_ones().all(|m| shape.orbit(m).iter().all(|x| a.get(x)))
}

pub fn is_cyclosymmetric_sparse(a: &SparseSupport, shape: &LayerShape) -> bool {
    a.r() == shape.r()
        && a.coords()
            .iter()
            .all(|&m| shape.orbit(m as usize).iter().all(|x| a.contains(x)))
}

/// One bit per canonical orbit representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressedBlock {
    shape: LayerShape,
    words: Vec<u64>,
}

impl CompressedBlock {
    pub fn zero(shape: &LayerShape) -> Self {
        Self {
            shape: shape.clone(),
            words: vec![0; words_for(shape.compressed_len())],
        }
    }

    pub fn shape(&self) -> &LayerShape {
        &self.shape
    }

    /// Length in bits.
    pub fn len(&self) -> usize {
        self.shape.compressed_len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> bool {
        bits::get_bit(&self.words, i)
    }

    pub fn set(&mut self, i: usize, value: bool) {
        if self.get(i) != value {
            bits::flip_bit(&mut self.words, i);
        }
    }

    /// `ceil(len / 8)` bytes in canonical order, pad bits zero.
    pub fn to_bytes(&self) -> Vec<u8> {
        bits::words_to_bytes(&self.words, self.len())
    }

    /// Returns `None` on a wrong length or nonzero pad bits.
    pub fn from_bytes(shape: &LayerShape, bytes: &[u8]) -> Option<Self> {
        let len = shape.compressed_len();
        if bytes.len() != len.div_ceil(8) {
            return None;
        }
        bits::bytes_to_words(bytes, len).map(|words| Self {
            shape: shape.clone(),
            words,
        })
    }
}

pub fn compress(a: &DenseRingElement, shape: &LayerShape) -> Result<CompressedBlock, CyclosymError> {
    if a.r() != shape.r() {
        return Err(CyclosymError::SizeMismatch {
            got: a.r(),
            want: shape.r(),
        });
    }
    if !is_cyclosymmetric(a, shape) {
        return Err(CyclosymError::NotCyclosymmetric);
    }
    let mut out = CompressedBlock::zero(shape);
    for i in 0..shape.compressed_len() {
        if a.get(shape.representative(i)) {
            out.set(i, true);
        }
    }
    Ok(out)
}

pub fn expand(c: &CompressedBlock) -> DenseRingElement {
    let shape = &c.shape;
    let mut out = DenseRingElement::zero(shape.r());
    for i in 0..shape.compressed_len() {
        if c.get(i) {
            for m in shape.orbit(shape.representative(i)).iter() {
                out.set(m, true);
            }
        }
    }
    out
}

/// Samples an orbit-closed support of weight exactly `w` in one block.
pub fn sample_sparse_cyclosymmetric<R: Rng + ?Sized>(
    shape: &LayerShape,
    w: usize,
    rng: &mut R,
) -> Result<SparseSupport, CyclosymError> {
    let coords = sample_orbit_union(shape, 1, w, rng)?;
    Ok(
        SparseSupport::new(shape.r(), coords.into_iter().map(|c| c as u32).collect())
            .expect("orbits are disjoint and in range"),
    )
}

/// Samples a weight-`w` word over `blocks` consecutive blocks of size `r`
/// whose restriction to every block is orbit-closed. Coordinates are global
/// (`block * r + m`) and ascending.
pub fn sample_cyclosymmetric_word<R: Rng + ?Sized>(
    shape: &LayerShape,
    blocks: usize,
    w: usize,
    rng: &mut R,
) -> Result<Vec<usize>, CyclosymError> {
    sample_orbit_union(shape, blocks, w, rng)
}

fn orbit_size_counts(shape: &LayerShape) -> [usize; 5] {
    let mut counts = [0usize; 5];
    for i in 0..shape.compressed_len() {
        counts[shape.orbit(shape.representative(i)).len()] += 1;
    }
    counts
}

fn reachable(counts: &[usize; 5], w: usize) -> bool {
    (0..=counts[4].min(w / 4)).any(|c4| {
        let rem = w - 4 * c4;
        // largest count of singletons with the parity of rem
        let mut ones = counts[1].min(rem);
        if (rem - ones) % 2 == 1 {
            if ones == 0 {
                return false;
            }
            ones -= 1;
        }
        (rem - ones) / 2 <= counts[2]
    })
}

// Rejection sampling: add uniformly chosen whole orbits while they fit and
// start over when no remaining orbit can fit.
fn sample_orbit_union<R: Rng + ?Sized>(
    shape: &LayerShape,
    blocks: usize,
    w: usize,
    rng: &mut R,
) -> Result<Vec<usize>, CyclosymError> {
    let reps = shape.compressed_len();
    let per_block = orbit_size_counts(shape);
    let total: [usize; 5] = std::array::from_fn(|s| per_block[s] * blocks);
    if !reachable(&total, w) {
        return Err(CyclosymError::UnreachableWeight { w });
    }
    let sizes: Vec<u8> = (0..reps)
        .map(|i| shape.orbit(shape.representative(i)).len() as u8)
        .collect();
    let mut chosen = vec![false; reps * blocks];
    'restart: loop {
        chosen.iter_mut().for_each(|c| *c = false);
        let mut avail = total;
        let mut remaining = w;
        while remaining > 0 {
            if !(1..=remaining.min(4)).any(|s| avail[s] > 0) {
                continue 'restart;
            }
            let pick = rng.random_range(0..reps * blocks);
            if chosen[pick] {
                continue;
            }
            let size = sizes[pick % reps] as usize;
            if size > remaining {
                continue;
            }
            chosen[pick] = true;
            avail[size] -= 1;
            remaining -= size;
        }
        let r = shape.r();
        let mut coords: Vec<usize> = chosen
            .iter()
            .enumerate()
            .filter(|(_, &c)| c)
            .flat_map(|(idx, _)| {
                let block = idx / reps;
                shape
                    .orbit(shape.representative(idx % reps))
                    .iter()
                    .map(move |m| block * r + m)
                    .collect::<Vec<_>>()
            })
            .collect();
        coords.sort_unstable();
        return Ok(coords);
    }
}
