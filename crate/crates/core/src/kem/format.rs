//! Byte formats for keys and cryptograms.
//!
//! ```text
//! magic   8 bytes  "CSMDPC\x00\x01" (the last two bytes are the version)
//! kind    1 byte   0x01 public key, 0x02 private key, 0x03 cryptogram
//! n0      u32
//! L       u32      layer count; 0 marks a plain quasi-cyclic code
//! p_i     u32 * L  layer orders (when L = 0, a single u32 holds r)
//! d_v, t, theta0, delta   u16 each
//! payload
//!   public key:  n0-1 blocks, each ceil(bits/8) bytes; bits is
//!                prod(floor(p_i/2)+1) for compressed blocks, r otherwise
//!   private key: n0 blocks of d_v ascending u32 coordinates
//!   cryptogram:  ceil(r/8) bytes
//! ```
//!
//! Integers are little-endian; bit `j` of a block sits in byte `j / 8` at
//! bit `j % 8`, and pad bits must be zero.

use thiserror::Error;

use super::{Cryptogram, KemError, PrivateKey, PublicKey};
use crate::cyclosym::{self, CompressedBlock, LayerShape};
use crate::params::{CodeFamily, ParameterSet};
use crate::ring::{DenseRingElement, SparseSupport};

pub const MAGIC: &[u8; 6] = b"CSMDPC";
pub const VERSION: u16 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum FileKind {
    PublicKey = 1,
    PrivateKey = 2,
    Cryptogram = 3,
}

impl FileKind {
    fn from_byte(b: u8) -> Option<Self> {
        match b {
            1 => Some(Self::PublicKey),
            2 => Some(Self::PrivateKey),
            3 => Some(Self::Cryptogram),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("bad magic bytes")]
    BadMagic,
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u16),
    #[error("unknown object kind {0:#04x}")]
    UnknownKind(u8),
    #[error("expected {expected:?}, found {found:?}")]
    WrongKind { expected: FileKind, found: FileKind },
    #[error("input truncated")]
    Truncated,
    #[error("{0} trailing bytes after payload")]
    TrailingBytes(usize),
    #[error("nonzero pad bits")]
    NonzeroPadding,
    #[error("coordinate {coord} out of range for block size {r}")]
    CoordinateOutOfRange { coord: usize, r: usize },
    #[error("private key coordinates not strictly increasing")]
    UnsortedCoordinates,
    #[error("invalid parameter block: {0}")]
    InvalidParameters(String),
    #[error("invalid key: {0}")]
    InvalidKey(KemError),
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], FormatError> {
        let end = self.pos.checked_add(n).ok_or(FormatError::Truncated)?;
        let out = self.bytes.get(self.pos..end).ok_or(FormatError::Truncated)?;
        self.pos = end;
        Ok(out)
    }

    fn u16(&mut self) -> Result<u16, FormatError> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32, FormatError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    /// Checks that exactly `n` bytes remain, before anything is allocated
    /// from header values.
    fn expect_remaining(&self, n: usize) -> Result<(), FormatError> {
        let left = self.bytes.len() - self.pos;
        match left.cmp(&n) {
            std::cmp::Ordering::Less => Err(FormatError::Truncated),
            std::cmp::Ordering::Greater => Err(FormatError::TrailingBytes(left - n)),
            std::cmp::Ordering::Equal => Ok(()),
        }
    }

    fn finish(self) -> Result<(), FormatError> {
        match self.bytes.len() - self.pos {
            0 => Ok(()),
            n => Err(FormatError::TrailingBytes(n)),
        }
    }
}

fn write_header(out: &mut Vec<u8>, kind: FileKind, p: &ParameterSet) {
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_be_bytes());
    out.push(kind as u8);
    out.extend_from_slice(&(p.n0 as u32).to_le_bytes());
    match p.family {
        CodeFamily::Cyclosymmetric => {
            out.extend_from_slice(&(p.shape.depth() as u32).to_le_bytes());
            for &layer in p.shape.layers() {
                out.extend_from_slice(&(layer as u32).to_le_bytes());
            }
        }
        CodeFamily::QuasiCyclic => {
            out.extend_from_slice(&0u32.to_le_bytes());
            out.extend_from_slice(&(p.r() as u32).to_le_bytes());
        }
    }
    for v in [p.d_v, p.t, p.theta0, p.delta] {
        out.extend_from_slice(&(v as u16).to_le_bytes());
    }
}

/// Object kind of an encoded file, after checking magic and version.
pub fn peek_kind(bytes: &[u8]) -> Result<FileKind, FormatError> {
    let mut rd = Reader { bytes, pos: 0 };
    read_preamble(&mut rd)
}

fn read_preamble(rd: &mut Reader<'_>) -> Result<FileKind, FormatError> {
    let magic = rd.take(6).map_err(|_| FormatError::BadMagic)?;
    if magic != MAGIC {
        return Err(FormatError::BadMagic);
    }
    let version = u16::from_be_bytes(rd.take(2)?.try_into().unwrap());
    if version != VERSION {
        return Err(FormatError::UnsupportedVersion(version));
    }
    let kind = rd.take(1)?[0];
    FileKind::from_byte(kind).ok_or(FormatError::UnknownKind(kind))
}

fn read_header(rd: &mut Reader<'_>, expected: FileKind) -> Result<ParameterSet, FormatError> {
    let found = read_preamble(rd)?;
    if found != expected {
        return Err(FormatError::WrongKind { expected, found });
    }
    let n0 = rd.u32()? as usize;
    let depth = rd.u32()? as usize;
    if depth > 2 {
        return Err(FormatError::InvalidParameters(format!("{depth} layers")));
    }
    let (family, layers) = if depth == 0 {
        (CodeFamily::QuasiCyclic, vec![rd.u32()? as usize])
    } else {
        let layers = (0..depth)
            .map(|_| rd.u32().map(|v| v as usize))
            .collect::<Result<Vec<_>, _>>()?;
        (CodeFamily::Cyclosymmetric, layers)
    };
    let d_v = rd.u16()? as usize;
    let t = rd.u16()? as usize;
    let theta0 = rd.u16()? as usize;
    let delta = rd.u16()? as usize;
    let invalid = |e: String| FormatError::InvalidParameters(e);
    let shape = LayerShape::new(layers).map_err(|e| invalid(e.to_string()))?;
    let custom = ParameterSet::custom(family, n0, shape, d_v, t, theta0, delta).map_err(|e| invalid(e.to_string()))?;
    Ok(ParameterSet::presets()
        .into_iter()
        .map(|p| {
            if family == CodeFamily::QuasiCyclic {
                p.to_quasi_cyclic()
            } else {
                p
            }
        })
        .find(|p| p.same_code(&custom))
        .unwrap_or(custom))
}

pub fn serialize_pk(pk: &PublicKey) -> Vec<u8> {
    let p = pk.params();
    let mut out = Vec::new();
    write_header(&mut out, FileKind::PublicKey, p);
    for block in pk.blocks() {
        match p.family {
            CodeFamily::Cyclosymmetric => {
                let c = cyclosym::compress(block, &p.shape).expect("public blocks of CS keys are cyclosymmetric");
                out.extend_from_slice(&c.to_bytes());
            }
            CodeFamily::QuasiCyclic => out.extend_from_slice(&block.to_bytes()),
        }
    }
    out
}

pub fn deserialize_pk(bytes: &[u8]) -> Result<PublicKey, FormatError> {
    let mut rd = Reader { bytes, pos: 0 };
    let params = read_header(&mut rd, FileKind::PublicKey)?;
    let block_len = match params.family {
        CodeFamily::Cyclosymmetric => params.shape.compressed_len().div_ceil(8),
        CodeFamily::QuasiCyclic => params.r().div_ceil(8),
    };
    rd.expect_remaining((params.n0 - 1) * block_len)?;
    let mut blocks = Vec::with_capacity(params.n0 - 1);
    for _ in 0..params.n0 - 1 {
        let block = match params.family {
            CodeFamily::Cyclosymmetric => {
                let raw = rd.take(params.shape.compressed_len().div_ceil(8))?;
                let c = CompressedBlock::from_bytes(&params.shape, raw).ok_or(FormatError::NonzeroPadding)?;
                cyclosym::expand(&c)
            }
            CodeFamily::QuasiCyclic => {
                let raw = rd.take(params.r().div_ceil(8))?;
                DenseRingElement::from_bytes(params.r(), raw).ok_or(FormatError::NonzeroPadding)?
            }
        };
        blocks.push(block);
    }
    rd.finish()?;
    Ok(PublicKey { params, blocks })
}

pub fn serialize_sk(sk: &PrivateKey) -> Vec<u8> {
    let mut out = Vec::new();
    write_header(&mut out, FileKind::PrivateKey, sk.params());
    for block in sk.blocks() {
        for &c in block.coords() {
            out.extend_from_slice(&c.to_le_bytes());
        }
    }
    out
}

pub fn deserialize_sk(bytes: &[u8]) -> Result<PrivateKey, FormatError> {
    let mut rd = Reader { bytes, pos: 0 };
    let params = read_header(&mut rd, FileKind::PrivateKey)?;
    let r = params.r();
    rd.expect_remaining(params.n0 * params.d_v * 4)?;
    let mut blocks = Vec::with_capacity(params.n0);
    for _ in 0..params.n0 {
        let mut coords = Vec::with_capacity(params.d_v);
        for _ in 0..params.d_v {
            let c = rd.u32()?;
            if c as usize >= r {
                return Err(FormatError::CoordinateOutOfRange { coord: c as usize, r });
            }
            if coords.last().is_some_and(|&prev| prev >= c) {
                return Err(FormatError::UnsortedCoordinates);
            }
            coords.push(c);
        }
        blocks.push(SparseSupport::new(r, coords).expect("checked above"));
    }
    rd.finish()?;
    PrivateKey::from_blocks(params, blocks).map_err(FormatError::InvalidKey)
}

pub fn serialize_ct(ct: &Cryptogram) -> Vec<u8> {
    let mut out = Vec::new();
    write_header(&mut out, FileKind::Cryptogram, ct.params());
    out.extend_from_slice(&ct.syndrome().to_bytes());
    out
}

pub fn deserialize_ct(bytes: &[u8]) -> Result<Cryptogram, FormatError> {
    let mut rd = Reader { bytes, pos: 0 };
    let params = read_header(&mut rd, FileKind::Cryptogram)?;
    rd.expect_remaining(params.r().div_ceil(8))?;
    let raw = rd.take(params.r().div_ceil(8))?;
    let syndrome = DenseRingElement::from_bytes(params.r(), raw).ok_or(FormatError::NonzeroPadding)?;
    rd.finish()?;
    Ok(Cryptogram { params, syndrome })
}

/// Header size for a parameter set, in bytes.
pub fn header_len(p: &ParameterSet) -> usize {
    let layer_words = match p.family {
        CodeFamily::Cyclosymmetric => p.shape.depth(),
        CodeFamily::QuasiCyclic => 1,
    };
    8 + 1 + 4 + 4 + 4 * layer_words + 8
}
