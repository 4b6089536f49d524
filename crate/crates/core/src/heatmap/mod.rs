//! Gaussian target heatmaps: encoding tree lists, decoding heatmaps (alone,
//! with a size map, or as binary masks) back into trees, and averaging
//! augmented predictions.
//!
//! Internally everything is in pixels; meters appear only when trees are
//! built. Rasters use image orientation: row 0 is the top row and patch `y`
//! grows downward.

mod bank;
mod decode;
mod encode;
mod ensemble;
pub mod format;
mod grid;
mod instances;
mod peaks;

pub use bank::{build_filter_bank, default_filter_bank, FilterBank, DEFAULT_BANK_SIZE, DEFAULT_SIGMA_MAX, DEFAULT_SIGMA_MIN};
pub use decode::{best_filter, decode_centernet, decode_heatmap, DecodeParams, Decoded};
pub use encode::{encode, TRUNCATION_SIGMAS};
pub use ensemble::{merge_heatmaps, Transform};
pub use grid::{pixel_grid, Heatmap, SigmaOfCd, SizeMap};
pub use instances::{distance_transform, separate_instances, Instances, DEFAULT_W_MAJ, DEFAULT_W_MAX};
pub use peaks::{nms_peaks, zncc, Peak};
