//! Language-robustness benchmarking for vision-language instruction corpora.
//!
//! The crate generates meaning-preserving rephrasings of a corpus in five
//! styles (syntax, voice, modifier, accent, tone), checks how well each
//! variant preserves the original, profiles syntactic diversity, scores
//! external model predictions per variant, and normalizes variant sentences
//! back toward a model's training style with an LLM pre-alignment step.

pub mod corpus;
pub mod diversity;
mod exec;
pub mod metrics;
pub mod prealign;
pub mod probe;
pub mod providers;
pub mod quality;
pub mod variantgen;

pub use corpus::{DatasetSplit, Record, VariantStyle};
pub use exec::{bounded_map, init_global_pool, Execution};
