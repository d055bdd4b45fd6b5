//! Niederreiter encryption over CS-MDPC (or plain QC-MDPC) codes.
//!
//! The private key is the sparse parity-check matrix
//! `H = [cir(h_0) | ... | cir(h_{n0-1})]`. The public key is its systematic
//! form `[cir(K_0) | ... | cir(K_{n0-2}) | I]` with `K_i = h_{n0-1}^{-1} h_i`.
//! A plaintext is a weight-`t` error pattern `e`; the cryptogram is its
//! public syndrome. Decryption multiplies the cryptogram by the sparse
//! `h_{n0-1}` to obtain the private syndrome, decodes it and checks the
//! result by re-encryption.
//!
//! The scheme is the bare trapdoor: it has no integrity protection and is
//! malleable. Wrap it in a CCA transform before any real use.

pub mod format;

use num_bigint::BigUint;
use rand::Rng;
use thiserror::Error;

use crate::cwe::{self, CweError, ErrorVector};
use crate::cyclosym::{self, is_cyclosymmetric, sample_sparse_cyclosymmetric, CyclosymError};
use crate::decoder::{self, ColumnOrientation, DecodeError, DecodeStats, DecoderConfig};
use crate::params::{CodeFamily, ParamError, ParameterSet};
use crate::ring::{invert, DenseRingElement, RingError, SparseSupport};

pub use format::FormatError;

/// Resamples of the last private block before key generation gives up.
pub const KEYGEN_RETRIES: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KemError {
    #[error("no invertible block found after {0} attempts")]
    KeygenFailure(usize),
    #[error("decoding failed")]
    DecodingFailure,
    #[error("decoded error weight {got} differs from t = {want}")]
    WeightMismatch { got: usize, want: usize },
    #[error("re-encryption of the decoded error does not match the cryptogram")]
    VerificationFailure,
    #[error("error vector has length {got}, expected {want}")]
    LengthMismatch { got: usize, want: usize },
    #[error("keys and cryptogram use different parameter sets")]
    ParameterMismatch,
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error(transparent)]
    Shape(#[from] CyclosymError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Encoding(#[from] CweError),
    #[error(transparent)]
    Decoder(#[from] DecodeError),
}

/// Dense public blocks `K_0..K_{n0-2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicKey {
    params: ParameterSet,
    blocks: Vec<DenseRingElement>,
}

impl PublicKey {
    pub fn params(&self) -> &ParameterSet {
        &self.params
    }

    pub fn blocks(&self) -> &[DenseRingElement] {
        &self.blocks
    }
}

/// Sparse private blocks `h_0..h_{n0-1}` together with the public key they
/// determine (needed for re-encryption checks).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrivateKey {
    params: ParameterSet,
    blocks: Vec<SparseSupport>,
    public: PublicKey,
}

impl PrivateKey {
    /// Rebuilds a private key from its blocks, deriving the public key.
    pub fn from_blocks(params: ParameterSet, blocks: Vec<SparseSupport>) -> Result<Self, KemError> {
        params.validate()?;
        if blocks.len() != params.n0 {
            return Err(KemError::ParameterMismatch);
        }
        for b in &blocks {
            if b.r() != params.r() || b.weight() != params.d_v {
                return Err(KemError::ParameterMismatch);
            }
            if params.family == CodeFamily::Cyclosymmetric && !cyclosym::is_cyclosymmetric_sparse(b, &params.shape) {
                return Err(KemError::Shape(CyclosymError::NotCyclosymmetric));
            }
        }
        let last_inv = invert(&blocks[params.n0 - 1].to_dense())?;
        let public = derive_public(&params, &blocks, &last_inv)?;
        Ok(Self { params, blocks, public })
    }

    pub fn params(&self) -> &ParameterSet {
        &self.params
    }

    pub fn blocks(&self) -> &[SparseSupport] {
        &self.blocks
    }

    pub fn public_key(&self) -> &PublicKey {
        &self.public
    }
}

/// A public syndrome of `r` bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cryptogram {
    params: ParameterSet,
    syndrome: DenseRingElement,
}

impl Cryptogram {
    pub fn new(params: ParameterSet, syndrome: DenseRingElement) -> Result<Self, KemError> {
        if syndrome.r() != params.r() {
            return Err(KemError::ParameterMismatch);
        }
        Ok(Self { params, syndrome })
    }

    pub fn params(&self) -> &ParameterSet {
        &self.params
    }

    pub fn syndrome(&self) -> &DenseRingElement {
        &self.syndrome
    }
}

fn derive_public(
    params: &ParameterSet,
    blocks: &[SparseSupport],
    last_inv: &DenseRingElement,
) -> Result<PublicKey, KemError> {
    let public_blocks = blocks[..params.n0 - 1]
        .iter()
        .map(|h| last_inv.mul_sparse(h))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PublicKey {
        params: params.clone(),
        blocks: public_blocks,
    })
}

fn sample_block<R: Rng + ?Sized>(params: &ParameterSet, rng: &mut R) -> Result<SparseSupport, KemError> {
    match params.family {
        CodeFamily::Cyclosymmetric => Ok(sample_sparse_cyclosymmetric(&params.shape, params.d_v, rng)?),
        CodeFamily::QuasiCyclic => {
            let coords = rand::seq::index::sample(rng, params.r(), params.d_v)
                .into_iter()
                .map(|c| c as u32)
                .collect();
            Ok(SparseSupport::new(params.r(), coords)?)
        }
    }
}

/// Samples the private blocks (resampling the last one until it is
/// invertible) and derives the systematic public key.
pub fn keygen<R: Rng + ?Sized>(params: &ParameterSet, rng: &mut R) -> Result<(PublicKey, PrivateKey), KemError> {
    params.validate()?;
    let mut blocks = (0..params.n0 - 1)
        .map(|_| sample_block(params, rng))
        .collect::<Result<Vec<_>, _>>()?;
    for _ in 0..KEYGEN_RETRIES {
        let last = sample_block(params, rng)?;
        match invert(&last.to_dense()) {
            Ok(last_inv) => {
                blocks.push(last);
                let public = derive_public(params, &blocks, &last_inv)?;
                let sk = PrivateKey {
                    params: params.clone(),
                    blocks,
                    public: public.clone(),
                };
                return Ok((public, sk));
            }
            Err(RingError::NotInvertible) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(KemError::KeygenFailure(KEYGEN_RETRIES))
}

/// `e * H_pub^T` for any word of length `n`, without a weight check.
pub fn public_syndrome(pk: &PublicKey, e: &ErrorVector) -> Result<DenseRingElement, KemError> {
    let p = &pk.params;
    let r = p.r();
    if e.len_n() != p.n() {
        return Err(KemError::LengthMismatch {
            got: e.len_n(),
            want: p.n(),
        });
    }
    // column jj of cir(K) is K^T rotated by jj
    let columns: Vec<DenseRingElement> = match p.family {
        CodeFamily::Cyclosymmetric => pk.blocks.clone(),
        CodeFamily::QuasiCyclic => pk.blocks.iter().map(DenseRingElement::transpose).collect(),
    };
    let mut c = DenseRingElement::zero(r);
    for &j in e.coords() {
        let j = j as usize;
        let (b, jj) = (j / r, j % r);
        if b < p.n0 - 1 {
            c.xor_rotated(&columns[b], jj);
        } else {
            c.flip(jj);
        }
    }
    Ok(c)
}

/// Encrypts a weight-`t` error pattern.
pub fn encrypt(pk: &PublicKey, e: &ErrorVector) -> Result<Cryptogram, KemError> {
    if e.weight() != pk.params.t {
        return Err(CweError::WrongWeight {
            got: e.weight(),
            want: pk.params.t,
        }
        .into());
    }
    let syndrome = public_syndrome(pk, e)?;
    Ok(Cryptogram {
        params: pk.params.clone(),
        syndrome,
    })
}

/// Private syndrome `H e^T = cir(h_{n0-1}) c^T`.
pub fn private_syndrome(sk: &PrivateKey, c: &Cryptogram) -> Result<DenseRingElement, KemError> {
    let last = &sk.blocks[sk.params.n0 - 1];
    // the matrix-vector product uses the transposed circulant; CS blocks are
    // their own transpose
    let s = match sk.params.family {
        CodeFamily::Cyclosymmetric => c.syndrome.mul_sparse(last)?,
        CodeFamily::QuasiCyclic => c.syndrome.mul_sparse(&last.transpose())?,
    };
    Ok(s)
}

/// Decodes a cryptogram and verifies the result by re-encryption.
pub fn decrypt(sk: &PrivateKey, c: &Cryptogram) -> Result<ErrorVector, KemError> {
    decrypt_with_stats(sk, c).0
}

/// [`decrypt`] plus the decoder statistics (zeroed when decoding did not
/// run).
pub fn decrypt_with_stats(sk: &PrivateKey, c: &Cryptogram) -> (Result<ErrorVector, KemError>, DecodeStats) {
    if !c.params.same_code(&sk.params) {
        return (Err(KemError::ParameterMismatch), DecodeStats::default());
    }
    let p = &sk.params;
    let mut s = match private_syndrome(sk, c) {
        Ok(s) => s,
        Err(e) => return (Err(e), DecodeStats::default()),
    };
    let cfg = DecoderConfig::for_params(p);
    let mut e = ErrorVector::with_capacity(p.n(), cfg.hdd_margin.max(p.t));
    let orientation = ColumnOrientation::from(p.family);
    let (ok, stats) = match decoder::decode_in_place(&sk.blocks, &mut s, &mut e, p.t, &cfg, orientation, &mut ()) {
        Ok(r) => r,
        Err(err) => return (Err(err.into()), DecodeStats::default()),
    };
    if !ok {
        return (Err(KemError::DecodingFailure), stats);
    }
    if e.weight() != p.t {
        return (
            Err(KemError::WeightMismatch {
                got: e.weight(),
                want: p.t,
            }),
            stats,
        );
    }
    match public_syndrome(&sk.public, &e) {
        Ok(check) if check == c.syndrome => (Ok(e), stats),
        Ok(_) => (Err(KemError::VerificationFailure), stats),
        Err(err) => (Err(err), stats),
    }
}

/// Encodes a plaintext integer below `C(n, t)` and encrypts it.
pub fn encrypt_integer(pk: &PublicKey, m: &BigUint) -> Result<Cryptogram, KemError> {
    let e = cwe::unrank(m, pk.params.n(), pk.params.t)?;
    encrypt(pk, &e)
}

pub fn decrypt_integer(sk: &PrivateKey, c: &Cryptogram) -> Result<BigUint, KemError> {
    let e = decrypt(sk, c)?;
    Ok(cwe::rank(&e, sk.params.t)?)
}

/// Encrypts a byte message of at most [`cwe::max_message_len`] bytes.
pub fn encrypt_message(pk: &PublicKey, msg: &[u8]) -> Result<Cryptogram, KemError> {
    let m = cwe::encode_message(msg, pk.params.n(), pk.params.t)?;
    encrypt_integer(pk, &m)
}

pub fn decrypt_message(sk: &PrivateKey, c: &Cryptogram) -> Result<Vec<u8>, KemError> {
    let m = decrypt_integer(sk, c)?;
    Ok(cwe::decode_message(&m, sk.params.n(), sk.params.t)?)
}

/// Samples an error pattern for `params`: uniform over weight-`t` words, or
/// with every block orbit-closed when `cyclosymmetric` is set. The second
/// form is an experimental option with no security analysis behind it.
pub fn sample_error_pattern<R: Rng + ?Sized>(
    params: &ParameterSet,
    cyclosymmetric: bool,
    rng: &mut R,
) -> Result<ErrorVector, KemError> {
    if cyclosymmetric {
        let coords = cyclosym::sample_cyclosymmetric_word(&params.shape, params.n0, params.t, rng)?;
        let mut e = ErrorVector::with_capacity(params.n(), params.hdd_margin().max(params.t));
        for c in coords {
            e.push(c)?;
        }
        Ok(e)
    } else {
        Ok(cwe::sample_error(params.n(), params.t, rng)?)
    }
}

/// True when every public block is orbit-closed for the parameter shape.
pub fn public_key_is_cyclosymmetric(pk: &PublicKey) -> bool {
    pk.blocks.iter().all(|k| is_cyclosymmetric(k, &pk.params.shape))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclosym::LayerShape;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tiny(family: CodeFamily) -> ParameterSet {
        ParameterSet::custom(family, 2, LayerShape::single(101).unwrap(), 9, 4, 8, 1).unwrap()
    }

    #[test]
    fn public_blocks_satisfy_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for family in [CodeFamily::Cyclosymmetric, CodeFamily::QuasiCyclic] {
            let (pk, sk) = keygen(&tiny(family), &mut rng).unwrap();
            let last = sk.blocks().last().unwrap();
            for (k, h) in pk.blocks().iter().zip(sk.blocks()) {
                assert_eq!(k.mul_sparse(last).unwrap(), h.to_dense());
            }
            if family == CodeFamily::Cyclosymmetric {
                assert!(public_key_is_cyclosymmetric(&pk));
            }
        }
    }

    #[test]
    fn identity_block_columns() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = tiny(CodeFamily::QuasiCyclic);
        let (pk, sk) = keygen(&p, &mut rng).unwrap();
        for i in [0usize, 50, 100] {
            let e = ErrorVector::from_coords(p.n(), vec![(p.r() + i) as u32]).unwrap();
            let c = public_syndrome(&pk, &e).unwrap();
            assert_eq!(c, DenseRingElement::monomial(p.r(), i));
            let ct = Cryptogram::new(p.clone(), c).unwrap();
            // a single identity-block error yields a rotation of h_{n0-1}'s column
            let s = private_syndrome(&sk, &ct).unwrap();
            let want = decoder::syndrome(sk.blocks(), [p.r() + i], ColumnOrientation::General);
            assert_eq!(s, want);
        }
        let zero = ErrorVector::with_capacity(p.n(), 6);
        assert!(public_syndrome(&pk, &zero).unwrap().is_zero());
    }

    #[test]
    fn round_trips_and_error_paths() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for family in [CodeFamily::Cyclosymmetric, CodeFamily::QuasiCyclic] {
            let p = tiny(family);
            let (pk, sk) = keygen(&p, &mut rng).unwrap();
            let mut ok = 0;
            for _ in 0..100 {
                let e = cwe::sample_error(p.n(), p.t, &mut rng).unwrap();
                let c = encrypt(&pk, &e).unwrap();
                if let Ok(d) = decrypt(&sk, &c) {
                    assert_eq!(d, e);
                    ok += 1;
                }
            }
            assert!(ok >= 90, "{family:?}: {ok}/100");

            let zero = Cryptogram::new(p.clone(), DenseRingElement::zero(p.r())).unwrap();
            assert_eq!(decrypt(&sk, &zero), Err(KemError::WeightMismatch { got: 0, want: 4 }));

            let short = ErrorVector::from_coords(p.n(), vec![1, 2]).unwrap();
            assert!(matches!(
                encrypt(&pk, &short),
                Err(KemError::Encoding(CweError::WrongWeight { .. }))
            ));
        }
    }

    #[test]
    fn messages_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = ParameterSet::preset("cs1-80").unwrap();
        let (pk, sk) = keygen(&p, &mut rng).unwrap();
        let c = encrypt_message(&pk, b"attack at dawn").unwrap();
        assert_eq!(decrypt_message(&sk, &c).unwrap(), b"attack at dawn");
    }

    #[test]
    fn keygen_gives_up_on_hopeless_params() {
        // every weight-2 block has h(1) = 0, so none is invertible
        let p = ParameterSet::custom(CodeFamily::QuasiCyclic, 2, LayerShape::single(31).unwrap(), 2, 2, 2, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert_eq!(keygen(&p, &mut rng), Err(KemError::KeygenFailure(KEYGEN_RETRIES)));
    }

    #[test]
    fn cyclosymmetric_error_patterns() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let p = tiny(CodeFamily::Cyclosymmetric);
        let e = sample_error_pattern(&p, true, &mut rng).unwrap();
        assert_eq!(e.weight(), p.t);
        for b in 0..2 {
            let block = DenseRingElement::from_coords(
                p.r(),
                e.coords()
                    .iter()
                    .map(|&j| j as usize)
                    .filter(|j| j / p.r() == b)
                    .map(|j| j % p.r()),
            )
            .unwrap();
            assert!(is_cyclosymmetric(&block, &p.shape));
        }
    }
}
