//! Batch personnel selection.
//!
//! Candidate profiles are encoded into a decision matrix and ranked with
//! TOPSIS; the ranking is checked against expert reference values with six
//! agreement metrics. A class-weighted text scorer (or any external model
//! writing score files) produces suitability probabilities that are evaluated
//! with confusion matrices, ROC/AUC and Youden-optimal thresholds.
//!
//! | module | contents |
//! |---|---|
//! | [`profile`] | profile model, file ingestion, ordinal encoding, Pearson correlation |
//! | [`preprocess`] | label mapping, synonym augmentation, class balancing, split, class weights |
//! | [`topsis`] | staged TOPSIS ranking |
//! | [`validation`] | RMSE, MAE, MAPE, Manhattan, cosine, normalized RMSE |
//! | [`eval`] | score files, confusion matrix, reports, ROC, AUC, thresholds, model comparison |
//! | [`baseline`] | token-count logistic regression scorer |
//! | [`adapter`] | file contracts with the external transformer fine-tuning adapter |
//! | [`pipeline`] | the batch commands behind the `persel` binary |

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adapter;
pub mod baseline;
pub mod config;
pub mod error;
pub mod eval;
pub mod pipeline;
pub mod preprocess;
pub mod profile;
pub mod rng;
pub mod synthetic;
pub mod text;
pub mod topsis;
pub mod validation;

pub use error::{Error, Result};
