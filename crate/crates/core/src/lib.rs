#![no_std]
#![warn(missing_debug_implementations)]

//! Alignment of Chinese user accounts across two social networks from
//! account names alone.
//!
//! The crate is `no_std` and only needs `alloc`. Everything that touches the
//! filesystem, JSON records or the command line lives in the `mcua` crate.
//!
//! The pieces, bottom to top:
//!
//! - [`text`]: per-codepoint character classes, En/Cn name typing and the
//!   normalizations (lowercasing, splitter stripping, special / non-special
//!   letter extraction) the features are built from.
//! - [`metrics`]: Levenshtein similarity, longest common substring and
//!   subsequence proportions, character cosine and Jaccard.
//! - [`translit`]: romanization in four systems with polyphone resolution,
//!   family-name detection and traditional to simplified conversion.
//! - [`features`]: the fixed EE (18), CE (82) and CC (58) feature layouts.
//! - [`models`]: linear models, CART, random forest and Gaussian naive Bayes
//!   written from scratch, plus feature importance.
//! - [`fusion`]: the multi-view framework. One view per name pair, one
//!   model per matching type, and a classifier over the fused outputs.
//! - [`eval`]: negative sampling, folds, metrics, baselines and sweeps.
//! - [`synth`]: a synthetic naming-behaviour generator.

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod eval;
pub mod features;
pub mod fusion;
pub mod metrics;
pub mod models;
pub mod synth;
pub mod text;
pub mod translit;

pub use crate::error::{Error, Result};
pub use crate::features::{FeatureExtractor, FeatureSchema, FeatureVector};
pub use crate::fusion::{AlignmentPrediction, McuaConfig, McuaModel};
pub use crate::text::{Account, CharClass, MatchingType, NameString, NameType};
pub use crate::translit::{RomanizationSystem, Transliterator};
