//! Noise models and simulations: perturbed predictions, label/prediction
//! splitting and merging, and the crown-area posterior.

pub mod graph;
pub mod perturb;
pub mod pmf;
pub mod posterior;
mod rng;
pub mod synthetic;

pub use graph::{
    noise_sweep, precision_recall_vs_real, simulate_label_graph, GraphScheme, LabelGraph, LabelNode,
    NoiseSweepRow, PrecisionRecall, Star,
};
pub use perturb::{perturb_predictions, run_matching_sweep, SweepRow, CA_FLOOR, DEFAULT_JITTER};
pub use pmf::{
    poisson_pmf, two_truncated_poisson, LabelNoiseModel, PredictionNoiseModel, Quantity, QuantitySampler,
    SUPPORT_MAX,
};
pub use posterior::{
    entropy, likelihood, posterior_ca, posterior_entropy, prior_from_diameters, CaGrid, Likelihood,
    LikelihoodParams, Posterior, PosteriorModel, SplitBranch,
};
pub use rng::stream_rng;
pub use synthetic::{scatter_disjoint, synthetic_forest, CrownSizes};
