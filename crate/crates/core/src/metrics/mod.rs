//! Scores computed from matching results.

pub mod agreement;
pub mod area;
pub mod counting;
pub mod detection;
pub mod errors;
pub mod eval;

pub use agreement::{
    agreement_analysis, agreement_components, AgreementCategory, AgreementComponent, AgreementRow,
    AgreementTable,
};
pub use area::{individual_iou, individual_iou_scores, patch_iou, trees_mask};
pub use counting::{counting_nmae, NmaeAccumulator};
pub use detection::{alpha, balanced_f1, prf1, BalancedWeights, Prf1};
pub use errors::{balanced_ca_error, balanced_loc_error, BalancedError, ErrorKind, SideSum};
pub use eval::{evaluate_patches, EvalReport, EvalSettings, Evaluation, GammaReport, INDIVIDUAL_IOU_GAMMA};
