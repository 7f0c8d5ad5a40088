//! Generalized-bicycle quantum CSS codes over GF(2)[x]/(x^l - 1): construction,
//! dimension-preserving family extensions, exact distance, BP+OSD decoding and
//! Monte Carlo logical error rate estimation.
//!
//! Work that splits into independent pieces (trials, distance enumeration,
//! generator-pair search) runs on rayon when the `parallel` feature is on and
//! [`Execution::Parallel`] is selected; results never depend on the mode.

pub mod bits;
pub mod code;
pub mod decoder;
pub mod distance;
pub mod error;
pub mod extension;
pub mod matrix;
pub mod par;
pub mod poly;
pub mod report;
pub mod scalable;
pub mod search;
pub mod sim;

pub use bits::BitVec;
pub use code::{
    build_gb, build_gb_str, dimension_gcd, dimension_rank, logical_basis, logical_basis_of, weight_profile, CodeDoc, CssCode,
    LogicalBasis, WeightProfile,
};
pub use decoder::{decode, CssDecoder, DecodeOutcome, DecoderConfig, OsdMode};
pub use distance::{css_distance, min_distance, DistanceOptions, DistanceResult, Sector};
pub use error::{Error, Result};
pub use extension::{extend_family, ExtensionPlan};
pub use matrix::BitMatrix;
pub use par::Execution;
pub use poly::{Poly, RingPoly};
pub use sim::{estimate_ler, LerPoint, NoiseModel, SimOptions, SimReport, StopRule};
