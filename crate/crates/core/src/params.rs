//! Code parameters and the built-in presets (all with `n0 = 2`).

use std::fmt;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::cwe;
use crate::cyclosym::{CyclosymError, LayerShape};

/// Largest supported block size `r`.
pub const MAX_BLOCK_SIZE: usize = 1 << 17;
/// Largest supported number of blocks `n0`.
pub const MAX_BLOCKS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("unknown parameter set {0:?}")]
    UnknownPreset(String),
    #[error(transparent)]
    Shape(#[from] CyclosymError),
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error("cannot read parameter file: {0}")]
    File(String),
}

/// Whether private blocks are cyclosymmetric (compressed public keys) or
/// plain quasi-cyclic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CodeFamily {
    Cyclosymmetric,
    QuasiCyclic,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParameterSet {
    /// Preset identifier; `None` for custom sets.
    pub id: Option<&'static str>,
    pub family: CodeFamily,
    pub n0: usize,
    pub shape: LayerShape,
    /// Column weight of each private block.
    pub d_v: usize,
    /// Error weight.
    pub t: usize,
    /// Initial flipping threshold.
    pub theta0: usize,
    /// Threshold margin.
    pub delta: usize,
    /// Claimed security level in bits; `None` means no claim.
    pub security_bits: Option<u32>,
}

struct PresetRow {
    id: &'static str,
    layers: &'static [usize],
    d_v: usize,
    t: usize,
    theta0: usize,
    delta: usize,
    sec: u32,
}

const PRESETS: &[PresetRow] = &[
    PresetRow {
        id: "cs1-80",
        layers: &[4801],
        d_v: 45,
        t: 84,
        theta0: 37,
        delta: 9,
        sec: 80,
    },
    PresetRow {
        id: "cs1-112",
        layers: &[7839],
        d_v: 65,
        t: 117,
        theta0: 48,
        delta: 4,
        sec: 112,
    },
    PresetRow {
        id: "cs1-128",
        layers: &[9863],
        d_v: 71,
        t: 134,
        theta0: 55,
        delta: 5,
        sec: 128,
    },
    PresetRow {
        id: "cs1-192",
        layers: &[20487],
        d_v: 105,
        t: 198,
        theta0: 75,
        delta: 8,
        sec: 192,
    },
    PresetRow {
        id: "cs1-256",
        layers: &[32771],
        d_v: 137,
        t: 264,
        theta0: 105,
        delta: 10,
        sec: 256,
    },
    PresetRow {
        id: "cs2-80",
        layers: &[61, 79],
        d_v: 45,
        t: 84,
        theta0: 37,
        delta: 9,
        sec: 80,
    },
    PresetRow {
        id: "cs2-112",
        layers: &[47, 167],
        d_v: 65,
        t: 117,
        theta0: 48,
        delta: 4,
        sec: 112,
    },
    PresetRow {
        id: "cs2-128",
        layers: &[71, 139],
        d_v: 71,
        t: 134,
        theta0: 55,
        delta: 5,
        sec: 128,
    },
    PresetRow {
        id: "cs2-192",
        layers: &[103, 199],
        d_v: 105,
        t: 198,
        theta0: 75,
        delta: 8,
        sec: 192,
    },
    PresetRow {
        id: "cs2-256",
        layers: &[73, 449],
        d_v: 137,
        t: 264,
        theta0: 105,
        delta: 10,
        sec: 256,
    },
];

impl ParameterSet {
    /// All built-in presets: five single-layer sets followed by five
    /// two-layer sets, in increasing security order.
    pub fn presets() -> Vec<ParameterSet> {
        PRESETS.iter().map(Self::from_row).collect()
    }

    pub fn preset(id: &str) -> Result<ParameterSet, ParamError> {
        PRESETS
            .iter()
            .find(|p| p.id == id)
            .map(Self::from_row)
            .ok_or_else(|| ParamError::UnknownPreset(id.to_string()))
    }

    fn from_row(row: &PresetRow) -> ParameterSet {
        ParameterSet {
            id: Some(row.id),
            family: CodeFamily::Cyclosymmetric,
            n0: 2,
            shape: LayerShape::new(row.layers.to_vec()).expect("preset shapes are valid"),
            d_v: row.d_v,
            t: row.t,
            theta0: row.theta0,
            delta: row.delta,
            security_bits: Some(row.sec),
        }
    }

    /// A custom parameter set. It carries no security claim.
    pub fn custom(
        family: CodeFamily,
        n0: usize,
        shape: LayerShape,
        d_v: usize,
        t: usize,
        theta0: usize,
        delta: usize,
    ) -> Result<ParameterSet, ParamError> {
        let p = ParameterSet {
            id: None,
            family,
            n0,
            shape,
            d_v,
            t,
            theta0,
            delta,
            security_bits: None,
        };
        p.validate()?;
        Ok(match family {
            CodeFamily::QuasiCyclic => p.to_quasi_cyclic(),
            CodeFamily::Cyclosymmetric => p,
        })
    }

    /// Loads a custom set from a TOML file with keys `n0`, `layers`, `d_v`,
    /// `t`, `theta0`, `delta` and optionally `family = "qc"`.
    pub fn from_toml_file(path: &Path) -> Result<ParameterSet, ParamError> {
        let text = std::fs::read_to_string(path).map_err(|e| ParamError::File(e.to_string()))?;
        Self::from_toml_str(&text)
    }

    pub fn from_toml_str(text: &str) -> Result<ParameterSet, ParamError> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            #[serde(default = "two")]
            n0: usize,
            layers: Vec<usize>,
            d_v: usize,
            t: usize,
            theta0: usize,
            delta: usize,
            #[serde(default)]
            family: Option<String>,
        }
        fn two() -> usize {
            2
        }
        let raw: Raw = toml::from_str(text).map_err(|e| ParamError::File(e.to_string()))?;
        let family = match raw.family.as_deref() {
            None | Some("cs") => CodeFamily::Cyclosymmetric,
            Some("qc") => CodeFamily::QuasiCyclic,
            Some(other) => return Err(ParamError::Invalid(format!("unknown family {other:?}"))),
        };
        let shape = LayerShape::new(raw.layers)?;
        let custom = Self::custom(family, raw.n0, shape, raw.d_v, raw.t, raw.theta0, raw.delta)?;
        // a file that reproduces a preset is that preset
        Ok(Self::presets()
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

    /// Resolves a preset id, falling back to a TOML file path.
    pub fn resolve(spec: &str) -> Result<ParameterSet, ParamError> {
        match Self::preset(spec) {
            Ok(p) => Ok(p),
            Err(_) if Path::new(spec).is_file() => Self::from_toml_file(Path::new(spec)),
            Err(e) => Err(e),
        }
    }

    /// Same code parameters, plain quasi-cyclic family. The layer structure
    /// collapses to a single block of size `r`.
    pub fn to_quasi_cyclic(&self) -> ParameterSet {
        let mut p = self.clone();
        p.family = CodeFamily::QuasiCyclic;
        p.shape = LayerShape::single(self.r()).expect("r >= 3");
        p
    }

    /// Equal code and decoder parameters, ignoring id and security label.
    pub fn same_code(&self, other: &ParameterSet) -> bool {
        self.family == other.family
            && self.n0 == other.n0
            && self.shape == other.shape
            && (self.d_v, self.t, self.theta0, self.delta) == (other.d_v, other.t, other.theta0, other.delta)
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        let bad = |msg: String| Err(ParamError::Invalid(msg));
        if self.n0 < 2 {
            return bad(format!("n0 = {} must be at least 2", self.n0));
        }
        if self.n0 > MAX_BLOCKS || self.r() > MAX_BLOCK_SIZE {
            return bad(format!(
                "n0 = {} and r = {} must not exceed {MAX_BLOCKS} and {MAX_BLOCK_SIZE}",
                self.n0,
                self.r()
            ));
        }
        if self.d_v == 0 || self.d_v > self.r() {
            return bad(format!("d_v = {} must be in 1..={}", self.d_v, self.r()));
        }
        if self.t > self.n() {
            return bad(format!("t = {} exceeds n = {}", self.t, self.n()));
        }
        if !(self.delta < self.theta0 && self.theta0 <= self.d_v) {
            return bad(format!(
                "need delta < theta0 <= d_v, got delta={} theta0={} d_v={}",
                self.delta, self.theta0, self.d_v
            ));
        }
        if self.d_v > u16::MAX as usize || self.t > u16::MAX as usize {
            return bad("d_v and t must fit in 16 bits".into());
        }
        Ok(())
    }

    pub fn r(&self) -> usize {
        self.shape.r()
    }

    /// Code length `n0 * r`.
    pub fn n(&self) -> usize {
        self.n0 * self.r()
    }

    /// Code dimension `(n0 - 1) * r`.
    pub fn k(&self) -> usize {
        (self.n0 - 1) * self.r()
    }

    pub fn is_custom(&self) -> bool {
        self.id.is_none()
    }

    pub fn label(&self) -> String {
        match (self.id, self.family) {
            (Some(id), CodeFamily::Cyclosymmetric) => id.to_string(),
            (Some(id), CodeFamily::QuasiCyclic) => format!("{id}-qc"),
            (None, _) => {
                let layers: Vec<String> = self.shape.layers().iter().map(|p| p.to_string()).collect();
                let fam = match self.family {
                    CodeFamily::Cyclosymmetric => "cs",
                    CodeFamily::QuasiCyclic => "qc",
                };
                format!("custom-{fam}-{}-dv{}-t{}", layers.join("x"), self.d_v, self.t)
            }
        }
    }

    /// Payload bits of a public key: `(n0 - 1) * prod(floor(p_i/2) + 1)` in
    /// cyclosymmetric mode, `(n0 - 1) * r` otherwise.
    pub fn public_key_bits(&self) -> usize {
        let per_block = match self.family {
            CodeFamily::Cyclosymmetric => self.shape.compressed_len(),
            CodeFamily::QuasiCyclic => self.r(),
        };
        (self.n0 - 1) * per_block
    }

    pub fn ciphertext_bits(&self) -> usize {
        self.r()
    }

    pub fn hdd_margin(&self) -> usize {
        cwe::hdd_margin(self.t)
    }

    /// Bytes of message block per plaintext, see [`cwe::message_capacity`].
    pub fn message_capacity(&self) -> usize {
        cwe::message_capacity(self.n(), self.t)
    }
}

impl fmt::Display for ParameterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let layers: Vec<String> = self.shape.layers().iter().map(|p| p.to_string()).collect();
        write!(
            f,
            "{} (r={}, n0={}, d_v={}, t={}, theta0={}, delta={}, ",
            self.label(),
            layers.join("x"),
            self.n0,
            self.d_v,
            self.t,
            self.theta0,
            self.delta
        )?;
        match self.security_bits {
            Some(s) => write!(f, "2^{s})"),
            None => write!(f, "no security claim)"),
        }
    }
}
