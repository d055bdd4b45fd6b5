use super::*;
use crate::cwe::sample_error;
use crate::cyclosym::{sample_sparse_cyclosymmetric, LayerShape};
use rand::{seq::index::sample, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cs_blocks(r: usize, d_v: usize, seed: u64) -> Vec<SparseSupport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = LayerShape::single(r).unwrap();
    (0..2)
        .map(|_| sample_sparse_cyclosymmetric(&shape, d_v, &mut rng).unwrap())
        .collect()
}

fn qc_blocks(r: usize, d_v: usize, seed: u64) -> Vec<SparseSupport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..2)
        .map(|_| SparseSupport::new(r, sample(&mut rng, r, d_v).into_iter().map(|c| c as u32).collect()).unwrap())
        .collect()
}

fn small_cfg(t: usize) -> DecoderConfig {
    DecoderConfig::new(7, 1, 10, crate::cwe::hdd_margin(t), 9, t).unwrap()
}

#[test]
fn zero_syndrome() {
    let blocks = cs_blocks(101, 9, 1);
    let out = decode(
        &blocks,
        &DenseRingElement::zero(101),
        4,
        &small_cfg(4),
        ColumnOrientation::Palindromic,
    )
    .unwrap();
    assert!(out.is_success());
    assert_eq!(out.e.unwrap().weight(), 0);
    assert_eq!(out.stats.iterations, 1);
    assert_eq!(out.stats.attempts, 1);
}

#[test]
fn every_single_error_is_corrected() {
    for (orientation, blocks) in [
        (ColumnOrientation::Palindromic, cs_blocks(101, 9, 2)),
        (ColumnOrientation::General, qc_blocks(101, 9, 3)),
    ] {
        for j in 0..202 {
            let s = syndrome(&blocks, [j], orientation);
            assert_eq!(s.weight(), 9);
            let out = decode(&blocks, &s, 4, &small_cfg(4), orientation).unwrap();
            assert!(out.is_success(), "j={j}");
            assert_eq!(out.e.unwrap().coords(), &[j as u32]);
        }
    }
}

#[test]
fn orientations_agree_on_palindromic_blocks() {
    let blocks = cs_blocks(101, 9, 4);
    for j in [0usize, 5, 100, 150] {
        assert_eq!(
            syndrome(&blocks, [j], ColumnOrientation::Palindromic),
            syndrome(&blocks, [j], ColumnOrientation::General)
        );
    }
}

#[test]
fn general_orientation_matches_circulant_columns() {
    // column jj of cir(h) has row i set iff h[(jj - i) mod r] = 1
    let blocks = qc_blocks(31, 5, 9);
    for jj in 0..31 {
        let s = syndrome(&blocks[..1], [jj], ColumnOrientation::General);
        for i in 0..31 {
            assert_eq!(s.get(i), blocks[0].contains((jj + 31 - i) % 31));
        }
    }
}

#[test]
fn rejects_bad_inputs() {
    let blocks = cs_blocks(101, 9, 5);
    let cfg = small_cfg(4);
    let s = DenseRingElement::zero(103);
    assert!(matches!(
        decode(&blocks, &s, 4, &cfg, ColumnOrientation::Palindromic),
        Err(DecodeError::BlockSize { .. })
    ));
    let mut e = ErrorVector::with_capacity(202, 2);
    let mut s = DenseRingElement::zero(101);
    assert!(matches!(
        decode_in_place(
            &blocks,
            &mut s,
            &mut e,
            4,
            &cfg,
            ColumnOrientation::Palindromic,
            &mut ()
        ),
        Err(DecodeError::CapacityTooSmall { .. })
    ));
    assert!(DecoderConfig::new(7, 7, 10, 6, 9, 4).is_err());
    assert!(DecoderConfig::new(10, 1, 10, 6, 9, 4).is_err());
    assert!(DecoderConfig::new(7, 1, 0, 6, 9, 4).is_err());
    assert!(DecoderConfig::new(7, 1, 10, 3, 9, 4).is_err());
}

/// Checks `original = s + H e` after every pass and exact rewinds.
struct Invariants<'a> {
    blocks: &'a [SparseSupport],
    original: DenseRingElement,
    orientation: ColumnOrientation,
    margin: usize,
    deltas: Vec<usize>,
    passes: usize,
    reverts: usize,
}

impl DecodeObserver for Invariants<'_> {
    fn attempt_started(&mut self, delta: usize) {
        self.deltas.push(delta);
    }

    fn pass_finished(&mut self, s: &DenseRingElement, e: &ErrorVector) {
        assert!(e.weight() <= self.margin);
        let mut rebuilt = syndrome(self.blocks, e.coords().iter().map(|&j| j as usize), self.orientation);
        rebuilt.add_assign(s).unwrap();
        assert_eq!(rebuilt, self.original);
        self.passes += 1;
    }

    fn syndrome_reverted(&mut self, s: &DenseRingElement) {
        assert_eq!(s, &self.original);
        self.reverts += 1;
    }
}

#[test]
fn invariants_hold_on_forced_failures() {
    // far more errors than t: attempts overflow the error list and restart
    let blocks = cs_blocks(101, 9, 6);
    let t = 4;
    let cfg = DecoderConfig::new(7, 3, 6, crate::cwe::hdd_margin(t), 9, t).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(60);
    let mut saw_break = false;
    for _ in 0..50 {
        let e0 = sample_error(202, 30, &mut rng).unwrap();
        let original = syndrome(
            &blocks,
            e0.coords().iter().map(|&j| j as usize),
            ColumnOrientation::Palindromic,
        );
        let mut obs = Invariants {
            blocks: &blocks,
            original: original.clone(),
            orientation: ColumnOrientation::Palindromic,
            margin: cfg.hdd_margin,
            deltas: vec![],
            passes: 0,
            reverts: 0,
        };
        let mut s = original.clone();
        let mut e = ErrorVector::with_capacity(202, cfg.hdd_margin);
        let (ok, stats) = decode_in_place(
            &blocks,
            &mut s,
            &mut e,
            t,
            &cfg,
            ColumnOrientation::Palindromic,
            &mut obs,
        )
        .unwrap();
        assert!(!ok);
        assert_eq!(stats.attempts, cfg.delta + 1);
        assert_eq!(obs.deltas, vec![3, 2, 1, 0]);
        assert_eq!(obs.reverts, cfg.delta);
        assert_eq!(obs.passes, stats.iterations);
        assert!(stats.peak_weight <= cfg.hdd_margin);
        saw_break |= stats.peak_weight == cfg.hdd_margin;
    }
    assert!(saw_break, "capacity break never exercised");
}

#[test]
fn successes_satisfy_syndrome() {
    let blocks = qc_blocks(211, 11, 7);
    let t = 5;
    let cfg = DecoderConfig::new(9, 2, 10, crate::cwe::hdd_margin(t), 11, t).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(70);
    let mut successes = 0;
    for _ in 0..200 {
        let e0 = sample_error(422, t, &mut rng).unwrap();
        let s = syndrome(
            &blocks,
            e0.coords().iter().map(|&j| j as usize),
            ColumnOrientation::General,
        );
        let out = decode(&blocks, &s, t, &cfg, ColumnOrientation::General).unwrap();
        if let Some(e) = out.e {
            assert_eq!(
                syndrome(
                    &blocks,
                    e.coords().iter().map(|&j| j as usize),
                    ColumnOrientation::General
                ),
                s
            );
            assert!(e.weight() <= t);
            successes += 1;
        }
    }
    assert!(successes > 150, "{successes}/200");
}

#[test]
fn reference_decoder_basics() {
    let blocks = cs_blocks(101, 9, 8);
    let out = reference_bitflip(
        &blocks,
        &DenseRingElement::zero(101),
        4,
        10,
        ColumnOrientation::Palindromic,
    )
    .unwrap();
    assert!(out.is_success());
    assert_eq!(out.e.unwrap().weight(), 0);
    for j in [0usize, 77, 101, 201] {
        let s = syndrome(&blocks, [j], ColumnOrientation::Palindromic);
        let out = reference_bitflip(&blocks, &s, 4, 10, ColumnOrientation::Palindromic).unwrap();
        assert_eq!(out.e.unwrap().coords(), &[j as u32]);
    }
}

#[test]
fn max_unsatisfied_matches_direct_count() {
    let blocks = qc_blocks(101, 9, 10);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for orientation in [ColumnOrientation::Palindromic, ColumnOrientation::General] {
        for _ in 0..20 {
            let e0 = sample_error(202, 6, &mut rng).unwrap();
            let s = syndrome(&blocks, e0.coords().iter().map(|&j| j as usize), orientation);
            let direct = (0..202)
                .map(|j| {
                    let col = syndrome(&blocks, [j], orientation);
                    col.iter_ones().filter(|&i| s.get(i)).count()
                })
                .max()
                .unwrap();
            assert_eq!(max_unsatisfied(&blocks, &s, orientation), direct);
        }
    }
}
