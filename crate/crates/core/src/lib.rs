//! Evaluation and simulation toolkit for individual tree detection from
//! aerial imagery.
//!
//! * [`geometry`]: trees, crown shapes, rasterization and IoU.
//! * [`matching`]: label–prediction assignment under one-to-one,
//!   many-to-one and one-to-many schemes.
//! * [`metrics`]: detection scores, balanced F1, localization and crown
//!   area errors, counting error, IoU and label agreement.
//! * [`noise`]: perturbed predictions, label split/merge noise and the
//!   crown-area posterior.
//! * [`heatmap`]: Gaussian heatmap encoding and decoding, mask instance
//!   separation and ensemble merging.
//! * [`io`] and [`cli`]: tree tables, configs, reports and the
//!   `canopy-metrics` command.
//!
//! ```
//! use canopy_metrics::geometry::{cd_to_ca, Point, TreeRecord};
//! use canopy_metrics::matching::{match_trees, CostParams, Scheme};
//!
//! let tree = |x: f64, cd: f64| TreeRecord::new("p", Point::new(x, 0.0), cd_to_ca(cd).unwrap()).unwrap();
//! let labels = [tree(0.0, 4.0), tree(10.0, 4.0)];
//! let preds = [tree(0.5, 4.2)];
//! let params = CostParams::with_gamma(1.0).unwrap();
//! let m = match_trees(&labels, &preds, &params, Scheme::OneToOne, 1);
//! assert_eq!((m.tp, m.fp, m.fn_), (1, 0, 1));
//! ```

pub mod cli;
pub mod error;
pub mod geometry;
pub mod heatmap;
pub mod io;
pub mod matching;
pub mod metrics;
pub mod noise;

pub use error::{Error, Result};
