//! Cyclosymmetric MDPC codes and the Niederreiter cryptosystem built on them.
//!
//! The crate is organized bottom-up:
//!
//! - [`ring`]: binary circulant blocks as elements of `F2[x]/(x^r - 1)`,
//!   sparse-operand products and a `2r + 4`-bit extended Euclidean inverse.
//! - [`cyclosym`]: palindromic (one- and two-layer) ring elements, their
//!   compressed form, and exact-weight sampling.
//! - [`cwe`]: constant-weight encoding of plaintext integers.
//! - [`params`]: parameter sets, including the built-in presets.
//! - [`kem`]: key generation, encryption, decryption and the file formats.
//! - [`decoder`]: the constant-memory bit-flipping decoder and a textbook
//!   reference decoder.
//! - [`tuning`]: threshold estimation, margin tuning and failure-rate
//!   measurement.
//! - [`cli`]: the `csmdpc` command-line front end.
//!
//! # Security warning
//!
//! This is the raw trapdoor scheme. There is no CCA transform, no
//! constant-time hardening, and custom parameter sets carry no security
//! claim. Do not use it to protect real data.

pub mod cli;
pub mod cwe;
pub mod cyclosym;
pub mod decoder;
pub mod kem;
pub mod params;
pub mod ring;
pub mod tuning;

pub use cwe::ErrorVector;
pub use cyclosym::{CompressedBlock, LayerShape};
pub use decoder::{DecodeOutcome, DecoderConfig};
pub use kem::{Cryptogram, KemError, PrivateKey, PublicKey};
pub use params::{CodeFamily, ParameterSet};
pub use ring::{DenseRingElement, SparseSupport};
