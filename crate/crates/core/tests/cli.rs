use std::path::Path;
use std::process::{Command, Output};

fn csmdpc(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_csmdpc"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn keygen(dir: &Path, params: &str) {
    let out = csmdpc(dir, &["keygen", "--params", params, "--seed", "7", "--out", "key"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn params_listing() {
    let dir = tempfile::tempdir().unwrap();
    let out = csmdpc(dir.path(), &["params"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text.lines().find(|l| l.starts_with("cs1-80 ")).unwrap();
    let cols: Vec<&str> = row.split_whitespace().collect();
    assert_eq!(&cols[8..], &["2401", "4801", "86"]);
    assert_eq!(text.lines().count(), 11);
}

#[test]
fn wrong_key_kind() {
    let dir = tempfile::tempdir().unwrap();
    keygen(dir.path(), "cs2-80");
    std::fs::write(dir.path().join("msg"), b"hi").unwrap();
    let out = csmdpc(dir.path(), &["encrypt", "--pk", "key.pk", "--in", "msg", "--out", "ct"]);
    assert!(out.status.success());
    let out = csmdpc(
        dir.path(),
        &["decrypt", "--sk", "key.pk", "--ct", "ct", "--out", "plain"],
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(!dir.path().join("plain").exists());
    let out = csmdpc(
        dir.path(),
        &["encrypt", "--pk", "key.sk", "--in", "msg", "--out", "ct2"],
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(!dir.path().join("ct2").exists());
}

#[test]
fn random_error_and_raw_decrypt() {
    let dir = tempfile::tempdir().unwrap();
    keygen(dir.path(), "cs1-80");
    let enc = csmdpc(
        dir.path(),
        &[
            "encrypt",
            "--pk",
            "key.pk",
            "--random-error",
            "--seed",
            "3",
            "--out",
            "ct",
        ],
    );
    assert!(enc.status.success());
    let dec = csmdpc(dir.path(), &["decrypt", "--sk", "key.sk", "--ct", "ct", "--raw"]);
    assert!(dec.status.success());
    assert_eq!(enc.stdout, dec.stdout);
    assert_eq!(String::from_utf8(dec.stdout).unwrap().lines().count(), 84);
}

#[test]
fn quasi_cyclic_mode() {
    let dir = tempfile::tempdir().unwrap();
    let out = csmdpc(
        dir.path(),
        &["keygen", "--params", "cs1-80", "--qc", "--seed", "1", "--out", "qc"],
    );
    assert!(out.status.success());
    std::fs::write(dir.path().join("msg"), b"plain quasi-cyclic").unwrap();
    assert!(
        csmdpc(dir.path(), &["encrypt", "--pk", "qc.pk", "--in", "msg", "--out", "ct"])
            .status
            .success()
    );
    let out = csmdpc(dir.path(), &["decrypt", "--sk", "qc.sk", "--ct", "ct"]);
    assert!(out.status.success());
    assert_eq!(out.stdout, b"plain quasi-cyclic");
    // a QC public key stores full blocks
    let pk = std::fs::metadata(dir.path().join("qc.pk")).unwrap().len();
    assert!(pk > 600);
}

#[test]
fn failures_leave_no_output() {
    let dir = tempfile::tempdir().unwrap();
    keygen(dir.path(), "cs1-80");
    std::fs::write(dir.path().join("big"), vec![1u8; 200]).unwrap();
    let out = csmdpc(dir.path(), &["encrypt", "--pk", "key.pk", "--in", "big", "--out", "ct"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!dir.path().join("ct").exists());

    // a random syndrome is almost surely undecodable
    std::fs::write(dir.path().join("msg"), b"x").unwrap();
    assert!(
        csmdpc(dir.path(), &["encrypt", "--pk", "key.pk", "--in", "msg", "--out", "ct"])
            .status
            .success()
    );
    let mut ct = std::fs::read(dir.path().join("ct")).unwrap();
    let len = ct.len();
    for (i, b) in ct[len - 300..len - 1].iter_mut().enumerate() {
        *b ^= (i * 37 + 11) as u8;
    }
    std::fs::write(dir.path().join("bad"), &ct).unwrap();
    let out = csmdpc(
        dir.path(),
        &["decrypt", "--sk", "key.sk", "--ct", "bad", "--out", "plain"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("plain").exists());
}

#[test]
fn reports() {
    let dir = tempfile::tempdir().unwrap();
    let toml = "n0 = 2\nlayers = [101]\nd_v = 9\nt = 4\ntheta0 = 8\ndelta = 1\n";
    std::fs::write(dir.path().join("tiny.toml"), toml).unwrap();
    let out = csmdpc(
        dir.path(),
        &[
            "simulate",
            "--params",
            "tiny.toml",
            "--trials",
            "20",
            "--no-timing",
            "--out",
            "sim.csv",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("sim.csv")).unwrap();
    assert!(csv.starts_with("params_id,seed,trial,outcome,iterations,restarts,peak_weight,micros"));
    assert_eq!(csv.lines().count(), 21);

    let out = csmdpc(
        dir.path(),
        &[
            "estimate-theta",
            "--params",
            "tiny.toml",
            "--codes",
            "5",
            "--errors",
            "5",
        ],
    );
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .starts_with("params_id,seed,samples,mean"));

    let out = csmdpc(
        dir.path(),
        &["tune-delta", "--params", "tiny.toml", "--trials", "5", "--delta", "3"],
    );
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 5);

    let out = csmdpc(dir.path(), &["simulate", "--params", "tiny.toml", "--theta0", "20"]);
    assert_eq!(out.status.code(), Some(1));
}
