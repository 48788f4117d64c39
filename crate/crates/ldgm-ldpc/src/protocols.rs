//! End-to-end Wyner-Ziv and Gelfand-Pinsker pipelines over a compound
//! code, with per-trial records suitable for CSV emission.
//!
//! Wyner-Ziv: the encoder quantizes the source inside the H1-zero book
//! and transmits the H2 syndrome of the quantized word; the decoder
//! searches the doubly constrained book (H1 zero, H2 equal to the
//! received syndrome) around the side information.
//!
//! Gelfand-Pinsker: the encoder quantizes the host inside the book with
//! H1 zero and H2 pinned to the message, transmitting the quantization
//! error; the decoder searches the H1-zero book (the message syndrome is
//! unknown to it) and re-forms the message as the H2 syndrome of its
//! estimate.
//!
//! Trials are pure functions of (code, spec, seed). A batch over trials
//! `0..trials` derives `trial_seed = base_seed + trial_index` (wrapping),
//! so batches are reproducible and embarrassingly parallel.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::analysis::bernoulli_convolve;
use crate::codec::{CodecError, CosetCodec, CosetConstraint, DecodeOutcome, DecodeStatus};
use crate::gf2::{hamming_distance, BinaryVector};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error("invalid channel parameter: {0}")]
    InvalidParameter(String),
}

/// Channel and budget parameters of the side-information problems.
///
/// `p` is the channel flip probability, `delta` the side-information
/// noise (defaulting to `p`, which is how the rate expressions use it),
/// `d` the design distortion target, and `w` the embedding weight budget.
/// All live in `[0, 1/2)`; zero is allowed so noiseless sanity runs are
/// expressible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    pub p: f64,
    pub delta: f64,
    pub d: f64,
    pub w: f64,
}

impl ChannelSpec {
    pub fn new(p: f64, d: f64, w: f64) -> Result<Self, ProtocolError> {
        Self::with_delta(p, p, d, w)
    }

    pub fn with_delta(p: f64, delta: f64, d: f64, w: f64) -> Result<Self, ProtocolError> {
        for (name, value) in [("p", p), ("delta", delta), ("d", d), ("w", w)] {
            if !(0.0..0.5).contains(&value) {
                return Err(ProtocolError::InvalidParameter(format!(
                    "{name} = {value} outside [0, 1/2)"
                )));
            }
        }
        Ok(Self { p, delta, d, w })
    }

    /// Effective noise seen by the Wyner-Ziv channel decoder: `d * p`
    /// (Bernoulli convolution of quantization noise and channel noise).
    pub fn effective_flip(&self) -> f64 {
        bernoulli_convolve(self.d, self.p).expect("parameters validated")
    }
}

/// Which decoder the pipelines run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DecoderKind {
    /// Exact minimum-distance decoding.
    #[default]
    Ml,
    /// The threshold rule at the effective flip probability.
    Threshold,
}

impl DecoderKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            DecoderKind::Ml => "ml",
            DecoderKind::Threshold => "threshold",
        }
    }
}

/// Outcome of the Wyner-Ziv encoder: the transmitted syndrome and the
/// quantized middle-layer word.
#[derive(Debug, Clone, PartialEq)]
pub struct WzEncoding {
    pub syndrome: BinaryVector,
    pub z_hat: BinaryVector,
    pub distortion: usize,
}

/// Quantizes `s` in the H1-zero book and forms the H2 syndrome of the
/// quantized word; transmitting it costs rate k2/n.
pub fn wz_encode(codec: &CosetCodec, s: &BinaryVector) -> Result<WzEncoding, ProtocolError> {
    let code = codec.code();
    let constraint = CosetConstraint::h1_zero(code.k1());
    let (z_hat, distortion) = codec.quantize(s, &constraint)?;
    let syndrome = code.h2().right_mul(&z_hat).map_err(CodecError::from)?;
    Ok(WzEncoding {
        syndrome,
        z_hat,
        distortion,
    })
}

/// Outcome of the Wyner-Ziv decoder: the reconstruction and the raw
/// decode outcome. On decode failure (no codeword / ambiguity) the
/// reconstruction falls back to the side information `y`, and the
/// outcome keeps the failure visible.
#[derive(Debug, Clone, PartialEq)]
pub struct WzDecoding {
    pub s_hat: BinaryVector,
    pub outcome: DecodeOutcome,
}

/// Recovers the quantized word from the syndrome and side information
/// `y`, over the constraint `{H1 z = 0, H2 z = syndrome}`. The
/// reconstruction is `z_hat G`. `effective_flip` parameterizes the
/// threshold rule only; ML ignores it.
pub fn wz_decode(
    codec: &CosetCodec,
    syndrome: &BinaryVector,
    y: &BinaryVector,
    effective_flip: f64,
    decoder: DecoderKind,
) -> Result<WzDecoding, ProtocolError> {
    let code = codec.code();
    let constraint = CosetConstraint::h1_zero_with_t2(code.k1(), syndrome.clone());
    let outcome = match decoder {
        DecoderKind::Ml => codec.ml_decode(y, &constraint)?,
        DecoderKind::Threshold => codec.threshold_decode(y, effective_flip, &constraint)?,
    };
    let s_hat = match (&outcome.status, &outcome.z_hat) {
        (DecodeStatus::Decoded, Some(z)) => code.encode_top(z),
        _ => y.clone(),
    };
    Ok(WzDecoding { s_hat, outcome })
}

/// One per-trial record, mirroring one CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub k1: usize,
    pub k2: usize,
    pub p: f64,
    pub delta: f64,
    pub d: f64,
    pub w: f64,
    /// End-to-end distortion fraction in [0, 1].
    pub distortion: f64,
    /// Rate spent on the syndrome / message, k2/n.
    pub rate: f64,
    pub status: DecodeStatus,
    /// Gelfand-Pinsker only.
    pub msg_recovered: Option<bool>,
    /// Gelfand-Pinsker only.
    pub constraint_met: Option<bool>,
}

impl TrialRecord {
    pub const CSV_HEADER: &'static str =
        "seed,n,m,k1,k2,p,delta,D,w,distortion,rate,status,msg_recovered,constraint_met";

    pub fn to_csv_row(&self) -> String {
        let opt = |b: &Option<bool>| match b {
            Some(v) => v.to_string(),
            None => String::new(),
        };
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.seed,
            self.n,
            self.m,
            self.k1,
            self.k2,
            self.p,
            self.delta,
            self.d,
            self.w,
            self.distortion,
            self.rate,
            self.status.as_str(),
            opt(&self.msg_recovered),
            opt(&self.constraint_met),
        )
    }
}

/// One full Wyner-Ziv trial: draw `s ~ Ber(1/2)^n` and side information
/// `y = s XOR w` with `w ~ Ber(delta)^n` (in that order from a ChaCha12
/// stream seeded with `seed`), encode, decode, and record the end-to-end
/// distortion `|s XOR s_hat| / n`.
pub fn wz_trial(
    codec: &CosetCodec,
    spec: &ChannelSpec,
    decoder: DecoderKind,
    seed: u64,
) -> Result<TrialRecord, ProtocolError> {
    let code = codec.code();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let s = BinaryVector::random(code.n(), &mut rng);
    let noise = BinaryVector::random_bernoulli(code.n(), spec.delta, &mut rng);
    let y = s.xor(&noise).expect("equal lengths");

    let enc = wz_encode(codec, &s)?;
    let dec = wz_decode(codec, &enc.syndrome, &y, spec.effective_flip(), decoder)?;
    let distortion =
        hamming_distance(&s, &dec.s_hat).map_err(CodecError::from)? as f64 / code.n() as f64;
    Ok(TrialRecord {
        seed,
        n: code.n(),
        m: code.m(),
        k1: code.k1(),
        k2: code.k2(),
        p: spec.p,
        delta: spec.delta,
        d: spec.d,
        w: spec.w,
        distortion,
        rate: code.k2() as f64 / code.n() as f64,
        status: dec.outcome.status,
        msg_recovered: None,
        constraint_met: None,
    })
}

/// Outcome of the Gelfand-Pinsker encoder.
#[derive(Debug, Clone, PartialEq)]
pub struct GpEncoding {
    /// Channel input `u = s_host XOR s_quantized`.
    pub channel_input: BinaryVector,
    pub z_hat: BinaryVector,
    /// Whether `|u| <= floor(w n)`.
    pub constraint_met: bool,
}

/// Embeds `msg` by quantizing the host in the book
/// `{H1 z = 0, H2 z = msg}`; the channel input is the quantization error,
/// which meets the weight budget whenever the quantizer does its job.
pub fn gp_encode(
    codec: &CosetCodec,
    s_host: &BinaryVector,
    msg: &BinaryVector,
    spec: &ChannelSpec,
) -> Result<GpEncoding, ProtocolError> {
    let code = codec.code();
    let constraint = CosetConstraint::h1_zero_with_t2(code.k1(), msg.clone());
    let (z_hat, distortion) = codec.quantize(s_host, &constraint)?;
    let s_quantized = code.encode_top(&z_hat);
    let channel_input = s_host.xor(&s_quantized).map_err(CodecError::from)?;
    debug_assert_eq!(channel_input.weight(), distortion);
    let budget = (spec.w * code.n() as f64).floor() as usize;
    Ok(GpEncoding {
        constraint_met: channel_input.weight() <= budget,
        channel_input,
        z_hat,
    })
}

/// Outcome of the Gelfand-Pinsker decoder: the recovered message is the
/// H2 syndrome of the decoded middle-layer word (absent when the
/// threshold rule fails).
#[derive(Debug, Clone, PartialEq)]
pub struct GpDecoding {
    pub msg_hat: Option<BinaryVector>,
    pub outcome: DecodeOutcome,
}

/// Decodes over the H1-zero book (H2 is unconstrained: the message is
/// what the decoder is looking for) and re-forms the message syndrome.
pub fn gp_decode(
    codec: &CosetCodec,
    y: &BinaryVector,
    flip_prob: f64,
    decoder: DecoderKind,
) -> Result<GpDecoding, ProtocolError> {
    let code = codec.code();
    let constraint = CosetConstraint::h1_zero(code.k1());
    let outcome = match decoder {
        DecoderKind::Ml => codec.ml_decode(y, &constraint)?,
        DecoderKind::Threshold => codec.threshold_decode(y, flip_prob, &constraint)?,
    };
    let msg_hat = match &outcome.z_hat {
        Some(z) => Some(code.h2().right_mul(z).map_err(CodecError::from)?),
        None => None,
    };
    Ok(GpDecoding { msg_hat, outcome })
}

/// One full Gelfand-Pinsker trial: draw host `s ~ Ber(1/2)^n`, message
/// `msg ~ Ber(1/2)^k2`, channel noise `v ~ Ber(p)^n` (in that order),
/// transmit `y = u XOR s XOR v`, decode, and record whether the message
/// came back and whether the weight budget held.
pub fn gp_trial(
    codec: &CosetCodec,
    spec: &ChannelSpec,
    decoder: DecoderKind,
    seed: u64,
) -> Result<TrialRecord, ProtocolError> {
    let code = codec.code();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let s_host = BinaryVector::random(code.n(), &mut rng);
    let msg = BinaryVector::random(code.k2(), &mut rng);
    let noise = BinaryVector::random_bernoulli(code.n(), spec.p, &mut rng);

    let enc = gp_encode(codec, &s_host, &msg, spec)?;
    // y = u XOR s XOR v; the host cancels, leaving the quantized word
    // plus channel noise
    let y = enc
        .channel_input
        .xor(&s_host)
        .and_then(|t| t.xor(&noise))
        .map_err(CodecError::from)?;
    let dec = gp_decode(codec, &y, spec.p, decoder)?;

    let distortion = enc.channel_input.weight() as f64 / code.n() as f64;
    Ok(TrialRecord {
        seed,
        n: code.n(),
        m: code.m(),
        k1: code.k1(),
        k2: code.k2(),
        p: spec.p,
        delta: spec.delta,
        d: spec.d,
        w: spec.w,
        distortion,
        rate: code.k2() as f64 / code.n() as f64,
        status: dec.outcome.status,
        msg_recovered: Some(dec.msg_hat.as_ref() == Some(&msg)),
        constraint_met: Some(enc.constraint_met),
    })
}

/// Monte Carlo batch of Wyner-Ziv trials with derived per-trial seeds;
/// trials run in parallel and results are ordered by trial index, so the
/// output is independent of the parallelism level.
pub fn run_wz_batch(
    codec: &CosetCodec,
    spec: &ChannelSpec,
    decoder: DecoderKind,
    base_seed: u64,
    trials: usize,
) -> Result<Vec<TrialRecord>, ProtocolError> {
    (0..trials)
        .into_par_iter()
        .map(|i| wz_trial(codec, spec, decoder, base_seed.wrapping_add(i as u64)))
        .collect()
}

/// Monte Carlo batch of Gelfand-Pinsker trials; same seeding and ordering
/// contract as [`run_wz_batch`].
pub fn run_gp_batch(
    codec: &CosetCodec,
    spec: &ChannelSpec,
    decoder: DecoderKind,
    base_seed: u64,
    trials: usize,
) -> Result<Vec<TrialRecord>, ProtocolError> {
    (0..trials)
        .into_par_iter()
        .map(|i| gp_trial(codec, spec, decoder, base_seed.wrapping_add(i as u64)))
        .collect()
}

/// Batch summary statistics, recomputable from the emitted rows.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchSummary {
    pub trials: usize,
    pub mean_distortion: f64,
    pub decoded_fraction: f64,
    pub recovered_fraction: Option<f64>,
    pub constraint_fraction: Option<f64>,
    /// Half-width of a 95% normal-approximation binomial interval on the
    /// decoded fraction.
    pub decoded_ci95: f64,
    /// Same interval on the recovered fraction (GP only).
    pub recovered_ci95: Option<f64>,
}

impl BatchSummary {
    pub fn from_records(records: &[TrialRecord]) -> BatchSummary {
        let t = records.len();
        let tf = t as f64;
        let mean_distortion = records.iter().map(|r| r.distortion).sum::<f64>() / tf;
        let decoded = records
            .iter()
            .filter(|r| r.status == DecodeStatus::Decoded)
            .count() as f64
            / tf;
        let frac_of = |f: fn(&TrialRecord) -> Option<bool>| {
            let known: Vec<bool> = records.iter().filter_map(f).collect();
            if known.is_empty() {
                None
            } else {
                Some(known.iter().filter(|&&b| b).count() as f64 / known.len() as f64)
            }
        };
        let recovered_fraction = frac_of(|r| r.msg_recovered);
        let constraint_fraction = frac_of(|r| r.constraint_met);
        let ci = |p: f64| 1.96 * (p * (1.0 - p) / tf).sqrt();
        BatchSummary {
            trials: t,
            mean_distortion,
            decoded_fraction: decoded,
            recovered_fraction,
            constraint_fraction,
            decoded_ci95: ci(decoded),
            recovered_ci95: recovered_fraction.map(ci),
        }
    }

    /// Two trailing CSV rows aligned with the record columns: one of
    /// means, one of 95% interval half-widths.
    pub fn to_csv_rows(&self, template: &TrialRecord) -> String {
        let opt = |v: &Option<f64>| match v {
            Some(x) => x.to_string(),
            None => String::new(),
        };
        let means = format!(
            "summary,{},{},{},{},{},{},{},{},{},{},{},{},{}",
            template.n,
            template.m,
            template.k1,
            template.k2,
            template.p,
            template.delta,
            template.d,
            template.w,
            self.mean_distortion,
            template.rate,
            self.decoded_fraction,
            opt(&self.recovered_fraction),
            opt(&self.constraint_fraction),
        );
        let cis = format!(
            "summary_ci95,,,,,,,,,,,{},{},",
            self.decoded_ci95,
            opt(&self.recovered_ci95),
        );
        format!("{means}\n{cis}\n")
    }
}

/// Renders a full batch as CSV: header, one row per trial in index order,
/// then the two summary rows.
pub fn batch_to_csv(records: &[TrialRecord]) -> String {
    let mut out = String::new();
    out.push_str(TrialRecord::CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.to_csv_row());
        out.push('\n');
    }
    if let Some(first) = records.first() {
        out.push_str(&BatchSummary::from_records(records).to_csv_rows(first));
    }
    out
}
