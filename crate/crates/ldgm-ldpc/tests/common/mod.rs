//! Independent dense-arithmetic oracles for the exhaustive-search tests.
//!
//! Everything here recomputes GF(2) products and codebook scans from
//! scratch on dense `Vec<u8>` data, sharing no code path with the
//! bit-packed implementations under test.

// each integration test crate compiles this module and uses its own
// subset of the helpers
#![allow(dead_code)]

use ldgm_ldpc::ensembles::CompoundCode;
use ldgm_ldpc::gf2::{BinaryVector, SparseBinaryMatrix};

pub fn to_dense(m: &SparseBinaryMatrix) -> Vec<Vec<u8>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| u8::from(m.get(i, j))).collect())
        .collect()
}

pub fn to_bits(v: &BinaryVector) -> Vec<u8> {
    (0..v.len()).map(|i| u8::from(v.get(i))).collect()
}

/// Row-vector times matrix, positionwise mod 2.
pub fn dense_left_mul(z: &[u8], m: &[Vec<u8>]) -> Vec<u8> {
    let cols = if m.is_empty() { 0 } else { m[0].len() };
    (0..cols)
        .map(|j| {
            z.iter()
                .zip(m.iter())
                .fold(0u8, |acc, (&zi, row)| acc ^ (zi & row[j]))
        })
        .collect()
}

/// Matrix times column vector, positionwise mod 2.
pub fn dense_right_mul(m: &[Vec<u8>], x: &[u8]) -> Vec<u8> {
    m.iter()
        .map(|row| row.iter().zip(x).fold(0u8, |acc, (&r, &xi)| acc ^ (r & xi)))
        .collect()
}

pub fn dense_distance(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// All constrained pairs `(z, z G)` found by scanning every one of the
/// 2^m middle-layer words and filtering on the syndrome constraints.
pub fn brute_force_codebook(
    code: &CompoundCode,
    t1: &[u8],
    t2: Option<&[u8]>,
) -> Vec<(Vec<u8>, Vec<u8>)> {
    let m = code.m();
    assert!(m <= 20, "oracle scan is exponential in m");
    let g = to_dense(code.generator());
    let h1 = to_dense(code.h1());
    let h2 = to_dense(code.h2());
    let mut out = Vec::new();
    for word in 0u32..(1u32 << m) {
        let z: Vec<u8> = (0..m).map(|j| ((word >> j) & 1) as u8).collect();
        if dense_right_mul(&h1, &z) != t1 {
            continue;
        }
        if let Some(t2) = t2 {
            if dense_right_mul(&h2, &z) != t2 {
                continue;
            }
        }
        let cw = dense_left_mul(&z, &g);
        out.push((z, cw));
    }
    out
}

/// Exhaustive minimum of `|s - z G|` over the constrained book; returns
/// (minimum distortion, all minimizing codewords deduplicated).
pub fn brute_force_quantize(
    code: &CompoundCode,
    s: &[u8],
    t1: &[u8],
    t2: Option<&[u8]>,
) -> (usize, Vec<Vec<u8>>) {
    let book = brute_force_codebook(code, t1, t2);
    assert!(!book.is_empty(), "constraint system must be consistent");
    let best = book
        .iter()
        .map(|(_, cw)| dense_distance(s, cw))
        .min()
        .unwrap();
    let mut winners: Vec<Vec<u8>> = Vec::new();
    for (_, cw) in &book {
        if dense_distance(s, cw) == best && !winners.contains(cw) {
            winners.push(cw.clone());
        }
    }
    (best, winners)
}

/// Number of distinct codewords within `threshold` of `y`, plus the
/// nearest distinct-codeword census at the minimum distance.
pub struct BruteDecode {
    pub min_distance: usize,
    pub min_codewords: Vec<Vec<u8>>,
    pub within_threshold: usize,
}

pub fn brute_force_decode(
    code: &CompoundCode,
    y: &[u8],
    t1: &[u8],
    t2: Option<&[u8]>,
    threshold: usize,
) -> BruteDecode {
    let (min_distance, min_codewords) = brute_force_quantize(code, y, t1, t2);
    let book = brute_force_codebook(code, t1, t2);
    let mut seen: Vec<Vec<u8>> = Vec::new();
    for (_, cw) in &book {
        if dense_distance(y, cw) <= threshold && !seen.contains(cw) {
            seen.push(cw.clone());
        }
    }
    BruteDecode {
        min_distance,
        min_codewords,
        within_threshold: seen.len(),
    }
}
