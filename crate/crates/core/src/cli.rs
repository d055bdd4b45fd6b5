//! The `csmdpc` command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 cryptographic failure
//! (decoding or verification), 3 I/O or parse error.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::cwe::{self, CweError};
use crate::kem::{self, format, FormatError, KemError};
use crate::params::{ParamError, ParameterSet};
use crate::tuning::{self, SimulationOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CRYPTO: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "csmdpc", version, about = "Cyclosymmetric MDPC Niederreiter encryption")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a key pair.
    Keygen {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        seed: Option<u64>,
        /// Public key output path.
        #[arg(long)]
        pk: Option<PathBuf>,
        /// Private key output path.
        #[arg(long)]
        sk: Option<PathBuf>,
        /// Write `<out>.pk` and `<out>.sk` when --pk/--sk are not given.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encrypt a message (or a fresh random error with --random-error).
    Encrypt {
        #[arg(long)]
        pk: PathBuf,
        /// Message file; standard input when absent.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Cryptogram output path.
        #[arg(long)]
        out: PathBuf,
        /// Encrypt a uniformly random weight-t error and print its
        /// coordinates on standard output.
        #[arg(long)]
        random_error: bool,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Decrypt a cryptogram.
    Decrypt {
        #[arg(long)]
        sk: PathBuf,
        #[arg(long)]
        ct: PathBuf,
        /// Output path; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the error coordinates, one per line, instead of a message.
        #[arg(long)]
        raw: bool,
    },
    /// Estimate the initial threshold from sampled codes and errors.
    EstimateTheta {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        codes: usize,
        #[arg(long, default_value_t = 100)]
        errors: usize,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Measure the failure rate for each margin in 0..=delta.
    TuneDelta {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        jobs: Option<usize>,
        /// Report the fastest margin whose failure rate is at most this.
        #[arg(long, default_value_t = 0.01)]
        max_dfr: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run keygen/encrypt/decrypt trials and report the failure rate.
    Simulate {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long)]
        jobs: Option<usize>,
        /// Trials per key pair.
        #[arg(long, default_value_t = 100)]
        key_refresh: usize,
        /// Omit timings so that reports are reproducible byte for byte.
        #[arg(long)]
        no_timing: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the built-in parameter sets.
    Params,
}

#[derive(Debug, Args)]
struct ParamArgs {
    /// Preset id or TOML parameter file.
    #[arg(long = "params", default_value = "cs1-80")]
    spec: String,
    /// Plain quasi-cyclic keys instead of cyclosymmetric ones.
    #[arg(long)]
    qc: bool,
    #[arg(long)]
    theta0: Option<usize>,
    #[arg(long)]
    delta: Option<usize>,
}

impl ParamArgs {
    fn resolve(&self) -> Result<ParameterSet, Failure> {
        let mut p = ParameterSet::resolve(&self.spec)?;
        if self.qc {
            p = p.to_quasi_cyclic();
        }
        if let Some(theta0) = self.theta0 {
            p.theta0 = theta0;
        }
        if let Some(delta) = self.delta {
            p.delta = delta;
        }
        if self.theta0.is_some() || self.delta.is_some() {
            p.validate().map_err(|e| Failure::usage(e.to_string()))?;
        }
        Ok(p)
    }
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn io(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_IO,
            message: message.into(),
        }
    }
}

impl From<ParamError> for Failure {
    fn from(e: ParamError) -> Self {
        let code = match e {
            ParamError::File(_) => EXIT_IO,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<KemError> for Failure {
    fn from(e: KemError) -> Self {
        let code = match e {
            KemError::KeygenFailure(_)
            | KemError::DecodingFailure
            | KemError::WeightMismatch { .. }
            | KemError::VerificationFailure
            | KemError::Encoding(CweError::BadLengthPrefix) => EXIT_CRYPTO,
            KemError::Encoding(CweError::MessageTooLong { .. }) => EXIT_USAGE,
            _ => EXIT_IO,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Self::io(e.to_string())
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

/// Writes through a temporary file in the target directory, so a failed
/// run never leaves a partial file behind.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let fail = |e: &dyn std::fmt::Display| Failure::io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| fail(&e))?;
    tmp.write_all(bytes).map_err(|e| fail(&e))?;
    tmp.persist(path).map_err(|e| fail(&e.error))?;
    Ok(())
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match path {
        Some(p) => write_atomic(p, bytes),
        None => io::stdout()
            .write_all(bytes)
            .map_err(|e| Failure::io(format!("stdout: {e}"))),
    }
}

fn rng_from(seed: Option<u64>) -> ChaCha20Rng {
    match seed {
        Some(s) => ChaCha20Rng::seed_from_u64(s),
        None => ChaCha20Rng::from_rng(&mut rand::rng()),
    }
}

fn with_ext(base: &Path, ext: &str) -> PathBuf {
    let mut s = base.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn csv_bytes(write: impl FnOnce(&mut Vec<u8>) -> csv::Result<()>) -> Result<Vec<u8>, Failure> {
    let mut buf = Vec::new();
    write(&mut buf).map_err(|e| Failure::io(e.to_string()))?;
    Ok(buf)
}

fn execute(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Keygen {
            params,
            seed,
            pk,
            sk,
            out,
        } => {
            let (pk_path, sk_path) = match (pk, sk, out) {
                (Some(pk), Some(sk), _) => (pk, sk),
                (None, None, Some(out)) => (with_ext(&out, "pk"), with_ext(&out, "sk")),
                _ => return Err(Failure::usage("keygen needs --pk and --sk, or --out")),
            };
            let p = params.resolve()?;
            let (public, private) = kem::keygen(&p, &mut rng_from(seed))?;
            write_atomic(&pk_path, &format::serialize_pk(&public))?;
            write_atomic(&sk_path, &format::serialize_sk(&private))?;
            eprintln!("{p}");
        }
        Command::Encrypt {
            pk,
            input,
            out,
            random_error,
            seed,
        } => {
            let public = format::deserialize_pk(&read_file(&pk)?)?;
            if random_error {
                if input.is_some() {
                    return Err(Failure::usage("--in conflicts with --random-error"));
                }
                let e = kem::sample_error_pattern(public.params(), false, &mut rng_from(seed))?;
                let ct = kem::encrypt(&public, &e)?;
                write_atomic(&out, &format::serialize_ct(&ct))?;
                write_output(None, coords_text(&e).as_bytes())?;
            } else {
                let msg = match input {
                    Some(path) => read_file(&path)?,
                    None => {
                        let mut buf = Vec::new();
                        io::stdin()
                            .read_to_end(&mut buf)
                            .map_err(|e| Failure::io(format!("stdin: {e}")))?;
                        buf
                    }
                };
                let ct = kem::encrypt_message(&public, &msg)?;
                write_atomic(&out, &format::serialize_ct(&ct))?;
            }
        }
        Command::Decrypt { sk, ct, out, raw } => {
            let private = format::deserialize_sk(&read_file(&sk)?)?;
            let cryptogram = format::deserialize_ct(&read_file(&ct)?)?;
            let bytes = if raw {
                coords_text(&kem::decrypt(&private, &cryptogram)?).into_bytes()
            } else {
                kem::decrypt_message(&private, &cryptogram)?
            };
            write_output(out.as_deref(), &bytes)?;
        }
        Command::EstimateTheta {
            params,
            seed,
            codes,
            errors,
            jobs,
            out,
        } => {
            if codes == 0 || errors == 0 {
                return Err(Failure::usage("--codes and --errors must be positive"));
            }
            let p = params.resolve()?;
            let est = in_pool(jobs, || tuning::estimate_theta0(&p, codes, errors, seed))?;
            let bytes = csv_bytes(|buf| {
                let mut w = csv::Writer::from_writer(buf);
                w.write_record([
                    "params_id",
                    "seed",
                    "samples",
                    "mean",
                    "stddev",
                    "rounded",
                    "min",
                    "max",
                ])?;
                w.write_record([
                    p.label(),
                    seed.to_string(),
                    est.samples.to_string(),
                    format!("{:.4}", est.mean),
                    format!("{:.4}", est.stddev),
                    est.rounded().to_string(),
                    est.min.to_string(),
                    est.max.to_string(),
                ])?;
                w.flush()?;
                Ok(())
            })?;
            write_output(out.as_deref(), &bytes)?;
            eprintln!(
                "{p}\ntheta0 estimate: mean {:.2} stddev {:.2} -> {} ({:.3} d_v)",
                est.mean,
                est.stddev,
                est.rounded(),
                est.mean / p.d_v as f64
            );
        }
        Command::TuneDelta {
            params,
            seed,
            trials,
            jobs,
            max_dfr,
            out,
        } => {
            if trials == 0 {
                return Err(Failure::usage("--trials must be positive"));
            }
            let max_delta = params.delta;
            let p = params.resolve()?;
            let candidates: Vec<usize> = (0..=max_delta.unwrap_or(p.theta0 - 1)).collect();
            let opts = SimulationOptions {
                jobs,
                ..SimulationOptions::default()
            };
            let table = tuning::tune_delta(&p, &candidates, trials, seed, &opts);
            write_output(out.as_deref(), &csv_bytes(|buf| table.write_csv(buf))?)?;
            match table.fastest_below(max_dfr) {
                Some(row) => eprintln!(
                    "fastest delta with DFR <= {max_dfr}: {} ({:.0} us, DFR {:.4})",
                    row.delta, row.mean_micros, row.dfr
                ),
                None => eprintln!("no delta reaches DFR <= {max_dfr}"),
            }
        }
        Command::Simulate {
            params,
            seed,
            trials,
            jobs,
            key_refresh,
            no_timing,
            out,
        } => {
            if trials == 0 || key_refresh == 0 {
                return Err(Failure::usage("--trials and --key-refresh must be positive"));
            }
            let p = params.resolve()?;
            let opts = SimulationOptions {
                key_refresh,
                jobs,
                timing: !no_timing,
                cyclosymmetric_errors: false,
            };
            let report = tuning::measure_dfr(&p, trials, seed, &opts);
            write_output(out.as_deref(), &csv_bytes(|buf| report.write_csv(buf))?)?;
            eprint!("{}", report.summary());
        }
        Command::Params => {
            let mut text = format!(
                "{:<10} {:>6} {:>10} {:>3} {:>4} {:>4} {:>6} {:>5} {:>8} {:>8} {:>9}\n",
                "id", "bits", "layers", "dv", "t", "th0", "delta", "n", "pk_bits", "ct_bits", "msg_bytes"
            );
            for p in ParameterSet::presets() {
                let layers: Vec<String> = p.shape.layers().iter().map(|l| l.to_string()).collect();
                text.push_str(&format!(
                    "{:<10} {:>6} {:>10} {:>3} {:>4} {:>4} {:>6} {:>5} {:>8} {:>8} {:>9}\n",
                    p.label(),
                    p.security_bits.unwrap_or(0),
                    layers.join("x"),
                    p.d_v,
                    p.t,
                    p.theta0,
                    p.delta,
                    p.n(),
                    p.public_key_bits(),
                    p.ciphertext_bits(),
                    p.message_capacity()
                ));
            }
            write_output(None, text.as_bytes())?;
        }
    }
    Ok(())
}

fn in_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    match jobs {
        Some(n) => Ok(rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Failure::usage(e.to_string()))?
            .install(f)),
        None => Ok(f()),
    }
}

fn coords_text(e: &cwe::ErrorVector) -> String {
    e.sorted_coords().iter().map(|c| format!("{c}\n")).collect()
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
