//! Exact maximum-likelihood quantization and decoding over the coset
//! codebooks of a compound code, by exhaustive scan of the constrained
//! solution space.
//!
//! The operative codebook is always `{ z G : H1 z = t1 (, H2 z = t2) }`;
//! the scan walks the `2^(m - rank)` solutions of the active constraint
//! system in lexicographic order, updating the candidate codeword
//! incrementally, so ties are broken by "first in enumeration order"
//! everywhere. Ambiguity is surfaced, never silently resolved.

use thiserror::Error;

use crate::analysis;
use crate::ensembles::CompoundCode;
use crate::gf2::{BinaryVector, Gf2Error, SolutionSet};

/// Candidate-count cap: searches larger than `2^DEFAULT_CAP_LOG2` are
/// refused unless the cap is raised explicitly.
pub const DEFAULT_CAP_LOG2: u32 = 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error(transparent)]
    Constraint(#[from] Gf2Error),
    #[error("search space of 2^{free_bits} candidates exceeds cap 2^{cap_log2}")]
    SearchSpaceTooLarge { free_bits: usize, cap_log2: u32 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Syndrome constraints selecting a coset codebook: `t1` is the required
/// H1-syndrome; `t2`, when present, the required H2-syndrome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetConstraint {
    pub t1: BinaryVector,
    pub t2: Option<BinaryVector>,
}

impl CosetConstraint {
    pub fn new(t1: BinaryVector, t2: Option<BinaryVector>) -> Self {
        Self { t1, t2 }
    }

    /// `H1 z = 0` with H2 unconstrained.
    pub fn h1_zero(k1: usize) -> Self {
        Self {
            t1: BinaryVector::zeros(k1),
            t2: None,
        }
    }

    /// `H1 z = 0, H2 z = t2`.
    pub fn h1_zero_with_t2(k1: usize, t2: BinaryVector) -> Self {
        Self {
            t1: BinaryVector::zeros(k1),
            t2: Some(t2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeStatus {
    /// A unique admissible codeword was found.
    Decoded,
    /// No codeword within the threshold (threshold rule only).
    NoCodeword,
    /// Two or more admissible codewords; `z_hat` holds the
    /// enumeration-first one.
    Ambiguous,
}

impl DecodeStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            DecodeStatus::Decoded => "decoded",
            DecodeStatus::NoCodeword => "no_codeword",
            DecodeStatus::Ambiguous => "ambiguous",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub status: DecodeStatus,
    pub z_hat: Option<BinaryVector>,
    pub distance: Option<usize>,
}

/// Exhaustive coset search over a shared immutable code.
#[derive(Debug, Clone, Copy)]
pub struct CosetCodec<'a> {
    code: &'a CompoundCode,
    cap_log2: u32,
}

impl<'a> CosetCodec<'a> {
    pub fn new(code: &'a CompoundCode) -> Self {
        Self {
            code,
            cap_log2: DEFAULT_CAP_LOG2,
        }
    }

    pub fn with_cap_log2(mut self, cap_log2: u32) -> Self {
        self.cap_log2 = cap_log2;
        self
    }

    pub fn code(&self) -> &'a CompoundCode {
        self.code
    }

    /// Solves the active constraint system and enforces the search cap.
    fn solution_set(&self, c: &CosetConstraint) -> Result<SolutionSet, CodecError> {
        if c.t1.len() != self.code.k1() {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.code.k1(),
                got: c.t1.len(),
            }
            .into());
        }
        let sols = match &c.t2 {
            Some(t2) => {
                if t2.len() != self.code.k2() {
                    return Err(Gf2Error::DimensionMismatch {
                        expected: self.code.k2(),
                        got: t2.len(),
                    }
                    .into());
                }
                let stacked = self.code.stacked_h();
                stacked.solve_affine(&c.t1.concat(t2))?
            }
            None => self.code.h1().solve_affine(&c.t1)?,
        };
        // the u64 scan counter bounds any cap a caller could raise to
        if sols.num_free() > self.cap_log2.min(62) as usize {
            return Err(CodecError::SearchSpaceTooLarge {
                free_bits: sols.num_free(),
                cap_log2: self.cap_log2,
            });
        }
        Ok(sols)
    }

    /// Walks the coset in lexicographic order, passing every candidate's
    /// index, Hamming distance to `target`, and difference pattern
    /// `(z G) XOR target` to the visitor. Equal difference patterns mean
    /// equal codewords, which matters because a codeword can have several
    /// middle-layer representations (with even degrees, `z` and its
    /// complement always share one). The candidate codeword is maintained
    /// incrementally (amortized O(1) basis XORs per step).
    fn scan(
        &self,
        target: &BinaryVector,
        sols: &SolutionSet,
        mut visit: impl FnMut(u64, usize, &BinaryVector),
    ) -> Result<(), CodecError> {
        if target.len() != self.code.n() {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.code.n(),
                got: target.len(),
            }
            .into());
        }
        let nf = sols.num_free();
        let mut diff = self.code.encode_top(sols.particular()).xor(target)?;
        let cw_basis: Vec<BinaryVector> = sols
            .basis()
            .iter()
            .map(|b| self.code.encode_top(b))
            .collect();
        let total = 1u64 << nf;
        let mut idx = 0u64;
        loop {
            visit(idx, diff.weight(), &diff);
            idx += 1;
            if idx == total {
                return Ok(());
            }
            let changed = idx ^ (idx - 1);
            for (j, basis_cw) in cw_basis.iter().enumerate() {
                if (changed >> (nf - 1 - j)) & 1 == 1 {
                    diff.xor_assign(basis_cw);
                }
            }
        }
    }

    /// Finds the constrained `z` minimizing `||s - z G||_1` exactly; ties
    /// go to the first minimizer in enumeration order. Returns the
    /// minimizer and the achieved distortion.
    pub fn quantize(
        &self,
        s: &BinaryVector,
        c: &CosetConstraint,
    ) -> Result<(BinaryVector, usize), CodecError> {
        let sols = self.solution_set(c)?;
        let mut best_dist = usize::MAX;
        let mut best_idx = 0u64;
        self.scan(s, &sols, |idx, dist, _| {
            if dist < best_dist {
                best_dist = dist;
                best_idx = idx;
            }
        })?;
        Ok((sols.solution_at(best_idx), best_dist))
    }

    /// Minimum-distance decoding over the constrained codebook. The
    /// outcome is `Ambiguous` when the minimum is attained by two or more
    /// distinct codewords; `z_hat` then holds the enumeration-first
    /// minimizer. Multiple representations of one codeword do not count
    /// as ambiguity.
    pub fn ml_decode(
        &self,
        y: &BinaryVector,
        c: &CosetConstraint,
    ) -> Result<DecodeOutcome, CodecError> {
        let sols = self.solution_set(c)?;
        let mut best_dist = usize::MAX;
        let mut best_idx = 0u64;
        let mut best_diff: Option<BinaryVector> = None;
        let mut distinct_tie = false;
        self.scan(y, &sols, |idx, dist, diff| {
            if dist < best_dist {
                best_dist = dist;
                best_idx = idx;
                best_diff = Some(diff.clone());
                distinct_tie = false;
            } else if dist == best_dist && best_diff.as_ref() != Some(diff) {
                distinct_tie = true;
            }
        })?;
        let status = if distinct_tie {
            DecodeStatus::Ambiguous
        } else {
            DecodeStatus::Decoded
        };
        Ok(DecodeOutcome {
            status,
            z_hat: Some(sols.solution_at(best_idx)),
            distance: Some(best_dist),
        })
    }

    /// The threshold decoding rule: accept iff exactly one distinct
    /// constrained codeword lies within `d(n) = floor((flip_prob +
    /// n^(-1/3)) n)` of `y`. Zero hits is `NoCodeword`; two or more
    /// distinct codewords within the threshold is `Ambiguous` with the
    /// enumeration-first hit reported.
    pub fn threshold_decode(
        &self,
        y: &BinaryVector,
        flip_prob: f64,
        c: &CosetConstraint,
    ) -> Result<DecodeOutcome, CodecError> {
        let d = analysis::decoding_threshold(self.code.n(), flip_prob)
            .map_err(|e| CodecError::InvalidParameter(e.to_string()))?;
        let sols = self.solution_set(c)?;
        let mut first: Option<(u64, usize, BinaryVector)> = None;
        let mut distinct_within = false;
        self.scan(y, &sols, |idx, dist, diff| {
            if dist <= d {
                match &first {
                    None => first = Some((idx, dist, diff.clone())),
                    Some((_, _, first_diff)) => {
                        if diff != first_diff {
                            distinct_within = true;
                        }
                    }
                }
            }
        })?;
        Ok(match first {
            None => DecodeOutcome {
                status: DecodeStatus::NoCodeword,
                z_hat: None,
                distance: None,
            },
            Some((idx, dist, _)) => DecodeOutcome {
                status: if distinct_within {
                    DecodeStatus::Ambiguous
                } else {
                    DecodeStatus::Decoded
                },
                z_hat: Some(sols.solution_at(idx)),
                distance: Some(dist),
            },
        })
    }

    /// Streams every constrained pair `(z, z G)` exactly once, in
    /// enumeration order.
    pub fn codebook(&self, c: &CosetConstraint) -> Result<CodebookIter, CodecError> {
        let sols = self.solution_set(c)?;
        let cw_basis: Vec<BinaryVector> = sols
            .basis()
            .iter()
            .map(|b| self.code.encode_top(b))
            .collect();
        let current_cw = self.code.encode_top(sols.particular());
        let total = 1u64 << sols.num_free();
        Ok(CodebookIter {
            current_z: sols.particular().clone(),
            sols,
            cw_basis,
            current_cw,
            next_idx: 0,
            total,
        })
    }
}

/// Lexicographic stream of `(z, z G)` pairs over a coset codebook.
pub struct CodebookIter {
    sols: SolutionSet,
    cw_basis: Vec<BinaryVector>,
    current_z: BinaryVector,
    current_cw: BinaryVector,
    next_idx: u64,
    total: u64,
}

impl CodebookIter {
    fn advance(&mut self, idx: u64) {
        let nf = self.sols.num_free();
        let changed = idx ^ (idx + 1);
        for j in 0..nf {
            if (changed >> (nf - 1 - j)) & 1 == 1 {
                self.current_z.xor_assign(&self.sols.basis()[j]);
                self.current_cw.xor_assign(&self.cw_basis[j]);
            }
        }
    }
}

impl Iterator for CodebookIter {
    type Item = (BinaryVector, BinaryVector);

    fn next(&mut self) -> Option<Self::Item> {
        if self.next_idx == self.total {
            return None;
        }
        let out = (self.current_z.clone(), self.current_cw.clone());
        let idx = self.next_idx;
        self.next_idx += 1;
        if self.next_idx < self.total {
            self.advance(idx);
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.next_idx) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for CodebookIter {}
