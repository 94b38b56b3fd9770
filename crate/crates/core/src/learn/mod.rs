//! Classification, cross-validation and low-dimensional projection.
//!
//! Class labels are indices into an ordered class list throughout; ties
//! between classes always resolve to the lower index.

mod cv;
mod lda;
mod linear;
mod metrics;
mod pca;

pub use cv::{cross_validate, fold_model, stratified_kfold, ClassifierReport, CvConfig, FoldAssignment, FoldPrediction};
pub use lda::{lda_in_sample_balanced_accuracy, lda_single_feature, nearest_mean_predict};
pub use linear::{class_balance_weights, fit_weighted_linear, weighted_logistic_loss, LinearConfig, LinearModel};
pub use metrics::{balanced_accuracy, confusion_matrix};
pub use pca::{pca, PcaProjection};
