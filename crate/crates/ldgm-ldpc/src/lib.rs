//! Compound LDGM/LDPC codes for source and channel coding with side
//! information.
//!
//! The construction is a three-layer factor graph: an (n, m) LDGM top
//! code with generator `G`, whose middle-layer word is constrained by two
//! banks of regular-LDPC parity checks `H1` (k1 rows) and `H2` (k2 rows).
//! Constraining with one bank or both yields the nested codebooks needed
//! for binning: quantize in the coarse book, transmit a syndrome, decode
//! in the fine book.
//!
//! Modules:
//!
//! - [`gf2`]: bit-packed vectors, sparse binary matrices, rank, and
//!   streaming solution sets of affine systems.
//! - [`ensembles`]: samplers for the LDGM and regular-LDPC ensembles and
//!   the assembled [`ensembles::CompoundCode`], with rates and a
//!   plain-text interchange format.
//! - [`codec`]: exact (exhaustive) quantization, minimum-distance
//!   decoding, and the fixed-threshold decoding rule over coset
//!   codebooks.
//! - [`protocols`]: end-to-end Wyner-Ziv and Gelfand-Pinsker pipelines
//!   with reproducible Monte Carlo batches.
//! - [`analysis`]: entropy/KL algebra, finite-m and asymptotic weight
//!   enumerators, the minimum-distance threshold, the channel
//!   error-exponent condition, and the rate-region envelope curves.

pub mod analysis;
pub mod codec;
pub mod ensembles;
pub mod gf2;
pub mod protocols;

pub use codec::{CosetCodec, CosetConstraint, DecodeOutcome, DecodeStatus};
pub use ensembles::{CompoundCode, DegreeParams, Rates};
pub use gf2::{BinaryVector, SparseBinaryMatrix};
pub use protocols::{ChannelSpec, DecoderKind, TrialRecord};
