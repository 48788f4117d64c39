//! Straight-line reimplementations of the Wyner-Ziv and Gelfand-Pinsker
//! trial loops, built on the dense exhaustive oracle, compared to the
//! library pipelines statistically (disjoint seed streams).

mod common;

use ldgm_ldpc::codec::CosetCodec;
use ldgm_ldpc::ensembles::{CompoundCode, DegreeParams};
use ldgm_ldpc::protocols::{
    run_gp_batch, run_wz_batch, wz_decode, wz_encode, ChannelSpec, DecoderKind,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

fn bernoulli_bits(n: usize, p: f64, rng: &mut ChaCha12Rng) -> Vec<u8> {
    (0..n).map(|_| u8::from(rng.gen_bool(p))).collect()
}

fn fair_bits(n: usize, rng: &mut ChaCha12Rng) -> Vec<u8> {
    (0..n).map(|_| u8::from(rng.gen::<bool>())).collect()
}

fn xor_bits(a: &[u8], b: &[u8]) -> Vec<u8> {
    a.iter().zip(b).map(|(x, y)| x ^ y).collect()
}

/// One Wyner-Ziv trial written flat: quantize by scanning the H1-zero
/// book, transmit the H2 syndrome, decode by scanning the doubly
/// constrained book around the side information, fall back to y on a
/// distance tie between distinct codewords.
fn wz_trial_flat(code: &CompoundCode, delta: f64, rng: &mut ChaCha12Rng) -> f64 {
    let n = code.n();
    let g = common::to_dense(code.generator());
    let h1 = common::to_dense(code.h1());
    let h2 = common::to_dense(code.h2());
    let zeros1 = vec![0u8; code.k1()];

    let s = fair_bits(n, rng);
    let y = xor_bits(&s, &bernoulli_bits(n, delta, rng));

    // encode: first minimizer in this scan's own order
    let mut best: Option<(usize, Vec<u8>)> = None;
    for word in 0u32..(1u32 << code.m()) {
        let z: Vec<u8> = (0..code.m()).map(|j| ((word >> j) & 1) as u8).collect();
        if common::dense_right_mul(&h1, &z) != zeros1 {
            continue;
        }
        let cw = common::dense_left_mul(&z, &g);
        let dist = common::dense_distance(&s, &cw);
        if best.as_ref().is_none_or(|(b, _)| dist < *b) {
            best = Some((dist, z));
        }
    }
    let (_, z_enc) = best.expect("H1-zero book is nonempty");
    let syndrome = common::dense_right_mul(&h2, &z_enc);

    // decode: exhaustive ML over the doubly constrained book
    let (_, winners) = common::brute_force_quantize(code, &y, &zeros1, Some(&syndrome));
    let s_hat = if winners.len() == 1 {
        winners[0].clone()
    } else {
        y.clone()
    };
    common::dense_distance(&s, &s_hat) as f64 / n as f64
}

/// One Gelfand-Pinsker trial written flat; returns (recovered, feasible).
fn gp_trial_flat(code: &CompoundCode, p: f64, rng: &mut ChaCha12Rng) -> (bool, bool) {
    let n = code.n();
    let g = common::to_dense(code.generator());
    let h1 = common::to_dense(code.h1());
    let h2 = common::to_dense(code.h2());
    let zeros1 = vec![0u8; code.k1()];

    let s_host = fair_bits(n, rng);
    let msg = fair_bits(code.k2(), rng);
    let v = bernoulli_bits(n, p, rng);

    // encode: quantize the host in the message-pinned book
    let mut best: Option<(usize, Vec<u8>)> = None;
    for word in 0u32..(1u32 << code.m()) {
        let z: Vec<u8> = (0..code.m()).map(|j| ((word >> j) & 1) as u8).collect();
        if common::dense_right_mul(&h1, &z) != zeros1 || common::dense_right_mul(&h2, &z) != msg {
            continue;
        }
        let cw = common::dense_left_mul(&z, &g);
        let dist = common::dense_distance(&s_host, &cw);
        if best.as_ref().is_none_or(|(b, _)| dist < *b) {
            best = Some((dist, z));
        }
    }
    let Some((_, z_enc)) = best else {
        return (false, false); // infeasible message syndrome
    };
    let s_q = common::dense_left_mul(&z_enc, &g);
    let u = xor_bits(&s_host, &s_q);
    let y = xor_bits(&xor_bits(&u, &s_host), &v); // = s_q XOR v

    // decode over the H1-zero book; message = H2 syndrome of the winner
    let mut best_dec: Option<(usize, Vec<u8>, bool)> = None;
    for word in 0u32..(1u32 << code.m()) {
        let z: Vec<u8> = (0..code.m()).map(|j| ((word >> j) & 1) as u8).collect();
        if common::dense_right_mul(&h1, &z) != zeros1 {
            continue;
        }
        let cw = common::dense_left_mul(&z, &g);
        let dist = common::dense_distance(&y, &cw);
        match &mut best_dec {
            None => best_dec = Some((dist, z, false)),
            Some((b, bz, tied)) => {
                if dist < *b {
                    best_dec = Some((dist, z, false));
                } else if dist == *b {
                    let bcw = common::dense_left_mul(bz, &g);
                    if bcw != cw {
                        *tied = true;
                    }
                }
            }
        }
    }
    let (_, z_dec, _) = best_dec.expect("H1-zero book is nonempty");
    let msg_hat = common::dense_right_mul(&h2, &z_dec);
    (
        msg_hat == msg,
        u.iter().filter(|&&b| b == 1).count() <= (0.25 * n as f64) as usize,
    )
}

#[test]
fn wz_mean_distortion_matches_flat_oracle() {
    let degrees = DegreeParams::new(4, 3, 4).unwrap();
    let code = CompoundCode::build(16, 16, 8, 4, degrees, 2001, 16).unwrap();
    let codec = CosetCodec::new(&code);
    let spec = ChannelSpec::new(0.05, 0.11, 0.2).unwrap();
    let trials = 200;

    let records = run_wz_batch(&codec, &spec, DecoderKind::Ml, 10_000, trials).unwrap();
    let mean_impl: f64 = records.iter().map(|r| r.distortion).sum::<f64>() / trials as f64;

    let mut rng = ChaCha12Rng::seed_from_u64(77_777); // disjoint stream
    let mut sum = 0.0;
    for _ in 0..trials {
        sum += wz_trial_flat(&code, spec.delta, &mut rng);
    }
    let mean_oracle = sum / trials as f64;

    // per-bit binomial error model on both estimates
    let bits = (trials * code.n()) as f64;
    let pooled = 0.5 * (mean_impl + mean_oracle);
    let se = (pooled * (1.0 - pooled) * 2.0 / bits).sqrt();
    assert!(
        (mean_impl - mean_oracle).abs() <= 3.0 * se,
        "wz mean {mean_impl} vs oracle {mean_oracle} (3se = {})",
        3.0 * se
    );
}

#[test]
fn gp_recovery_fraction_matches_flat_oracle() {
    let degrees = DegreeParams::new(4, 3, 6).unwrap();
    let code = CompoundCode::build(24, 12, 3, 3, degrees, 91, 16).unwrap();
    assert_eq!(code.effective_rank_h(), 6, "need a full-rank parity stack");
    let codec = CosetCodec::new(&code);
    let spec = ChannelSpec::new(0.05, 0.11, 0.25).unwrap();
    let trials = 200;

    let records = run_gp_batch(&codec, &spec, DecoderKind::Ml, 40_000, trials).unwrap();
    let frac_impl = records
        .iter()
        .filter(|r| r.msg_recovered == Some(true))
        .count() as f64
        / trials as f64;

    let mut rng = ChaCha12Rng::seed_from_u64(88_888);
    let mut recovered = 0;
    for _ in 0..trials {
        if gp_trial_flat(&code, spec.p, &mut rng).0 {
            recovered += 1;
        }
    }
    let frac_oracle = recovered as f64 / trials as f64;

    let pooled = 0.5 * (frac_impl + frac_oracle);
    let se = (pooled * (1.0 - pooled) * 2.0 / trials as f64).sqrt();
    assert!(
        (frac_impl - frac_oracle).abs() <= 3.0 * se.max(1e-9),
        "gp recovery {frac_impl} vs oracle {frac_oracle} (3se = {})",
        3.0 * se
    );
}

#[test]
fn wz_decoder_agrees_with_brute_scan_when_decoded() {
    let degrees = DegreeParams::new(3, 3, 4).unwrap();
    let code = CompoundCode::build(16, 16, 8, 4, degrees, 71, 16).unwrap();
    let codec = CosetCodec::new(&code);
    let mut rng = ChaCha12Rng::seed_from_u64(5);
    for _ in 0..50 {
        let s = ldgm_ldpc::gf2::BinaryVector::random(code.n(), &mut rng);
        let y = ldgm_ldpc::gf2::BinaryVector::random(code.n(), &mut rng);
        let enc = wz_encode(&codec, &s).unwrap();
        let dec = wz_decode(&codec, &enc.syndrome, &y, 0.15, DecoderKind::Ml).unwrap();
        let zeros1 = vec![0u8; code.k1()];
        let syndrome = common::to_bits(&enc.syndrome);
        let (brute_min, winners) =
            common::brute_force_quantize(&code, &common::to_bits(&y), &zeros1, Some(&syndrome));
        if dec.outcome.status == ldgm_ldpc::codec::DecodeStatus::Decoded {
            assert_eq!(dec.outcome.distance, Some(brute_min));
            assert_eq!(winners.len(), 1);
            assert_eq!(common::to_bits(&dec.s_hat), winners[0]);
        } else {
            assert!(winners.len() >= 2);
        }
    }
}
