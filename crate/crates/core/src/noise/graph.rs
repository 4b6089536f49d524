//! Real tree → label → prediction graphs drawn from the noise models, and
//! precision/recall against the real trees.

use std::ops::Range;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::noise::pmf::{full_support, LabelNoiseModel, PredictionNoiseModel, Quantity, QuantitySampler};
use crate::noise::rng::stream_rng;

/// One label and the real trees it stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelNode {
    pub quantity: Quantity,
    /// Indices of the real trees covered; a split label covers one tree
    /// shared with its siblings.
    pub real: Range<usize>,
}

/// A connected label–prediction component: either one label with one or
/// more predictions, or several consecutive labels sharing one prediction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Star {
    pub labels: Range<usize>,
    pub predictions: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabelGraph {
    pub n_real: usize,
    pub labels: Vec<LabelNode>,
    pub stars: Vec<Star>,
}

impl LabelGraph {
    pub fn n_predictions(&self) -> usize {
        self.stars.iter().map(|s| s.predictions).sum()
    }

    /// Real trees accounted for by the labels; equals `n_real` by
    /// construction.
    pub fn represented_real(&self) -> f64 {
        self.labels.iter().map(|l| l.quantity.value()).sum()
    }
}

/// Draws label nodes until `n_real` real trees are covered, then one
/// prediction count per label node in order. A merge quantity is clamped to
/// the real trees left; a shared prediction is clamped to the labels left.
pub fn simulate_label_graph<R: Rng + ?Sized>(
    n_real: usize,
    label_model: &LabelNoiseModel,
    pred_model: &PredictionNoiseModel,
    rng: &mut R,
) -> Result<LabelGraph> {
    if n_real == 0 {
        return Err(Error::invalid("the real-tree budget must be positive"));
    }
    let label_sampler = QuantitySampler::new(label_model.support())?;
    let mut labels = Vec::new();
    let mut next = 0;
    while next < n_real {
        match label_sampler.sample(rng) {
            Quantity::Whole(k) => {
                let k = (k as usize).min(n_real - next);
                labels.push(LabelNode {
                    quantity: Quantity::Whole(k as u32),
                    real: next..next + k,
                });
                next += k;
            }
            q @ Quantity::Fraction(k) => {
                for _ in 0..k {
                    labels.push(LabelNode {
                        quantity: q,
                        real: next..next + 1,
                    });
                }
                next += 1;
            }
        }
    }

    let pred_samplers: Vec<QuantitySampler> = full_support()
        .map(|q| QuantitySampler::new(pred_model.support(q)?))
        .collect::<Result<_>>()?;
    let mut stars = Vec::new();
    let mut i = 0;
    while i < labels.len() {
        match pred_samplers[support_index(labels[i].quantity)].sample(rng) {
            Quantity::Whole(k) => {
                let end = (i + k as usize).min(labels.len());
                stars.push(Star {
                    labels: i..end,
                    predictions: 1,
                });
                i = end;
            }
            Quantity::Fraction(k) => {
                stars.push(Star {
                    labels: i..i + 1,
                    predictions: k as usize,
                });
                i += 1;
            }
        }
    }
    Ok(LabelGraph {
        n_real,
        labels,
        stars,
    })
}

// position of `q` in `full_support()`
fn support_index(q: Quantity) -> usize {
    match q {
        Quantity::Whole(k) => k as usize - 1,
        Quantity::Fraction(k) => crate::noise::pmf::SUPPORT_MAX as usize + k as usize - 2,
    }
}

/// Positive-counting rule on label–prediction components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphScheme {
    /// At most one label and one prediction per component.
    OneToOne,
    /// At most one label, any number of predictions.
    ManyToOne,
    /// At most one prediction, any number of labels.
    OneToMany,
    /// Every node of a component.
    ManyToMany,
}

impl GraphScheme {
    pub const ALL: [GraphScheme; 4] = [
        GraphScheme::OneToOne,
        GraphScheme::ManyToOne,
        GraphScheme::OneToMany,
        GraphScheme::ManyToMany,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GraphScheme::OneToOne => "one_to_one",
            GraphScheme::ManyToOne => "many_to_one",
            GraphScheme::OneToMany => "one_to_many",
            GraphScheme::ManyToMany => "many_to_many",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrecisionRecall {
    pub precision: f64,
    pub recall: f64,
}

/// Precision over predictions and recall over real trees. Recall sums the
/// real-tree quantity of every positive label.
pub fn precision_recall_vs_real(graph: &LabelGraph, scheme: GraphScheme) -> PrecisionRecall {
    let mut positive_preds = 0usize;
    let mut recalled = 0.0;
    for star in &graph.stars {
        let labels = &graph.labels[star.labels.clone()];
        let all_labels = || labels.iter().map(|l| l.quantity.value()).sum::<f64>();
        let (l, p) = match scheme {
            GraphScheme::ManyToMany => (all_labels(), star.predictions),
            GraphScheme::OneToOne => (labels[0].quantity.value(), 1),
            GraphScheme::ManyToOne => (labels[0].quantity.value(), star.predictions),
            GraphScheme::OneToMany => (all_labels(), 1),
        };
        recalled += l;
        positive_preds += p;
    }
    let total = graph.n_predictions();
    PrecisionRecall {
        precision: if total == 0 { 0.0 } else { positive_preds as f64 / total as f64 },
        recall: recalled / graph.n_real as f64,
    }
}

/// One scheme's scores at one sweep point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoiseSweepRow {
    pub p1_label: f64,
    pub bias: f64,
    pub p1_pred: f64,
    pub scheme: GraphScheme,
    pub precision: f64,
    pub recall: f64,
}

/// Simulates one graph per label model, each on its own random stream
/// derived from `seed` and the model's position, and scores every scheme.
pub fn noise_sweep(
    n_real: usize,
    label_models: &[LabelNoiseModel],
    pred_model: &PredictionNoiseModel,
    seed: u64,
) -> Result<Vec<NoiseSweepRow>> {
    let per_point: Vec<Vec<NoiseSweepRow>> = label_models
        .par_iter()
        .enumerate()
        .map(|(i, lm)| {
            let mut rng = stream_rng(seed, i as u64);
            let graph = simulate_label_graph(n_real, lm, pred_model, &mut rng)?;
            Ok(GraphScheme::ALL
                .iter()
                .map(|&scheme| {
                    let pr = precision_recall_vs_real(&graph, scheme);
                    NoiseSweepRow {
                        p1_label: lm.p1_label,
                        bias: lm.bias,
                        p1_pred: pred_model.p1_pred,
                        scheme,
                        precision: pr.precision,
                        recall: pr.recall,
                    }
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(per_point.into_iter().flatten().collect())
}
