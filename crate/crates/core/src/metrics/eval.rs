//! Full evaluation of a set of patches.
//!
//! Matching runs per patch. Counts, error sums and pixel counts are
//! accumulated across patches and ratios are taken at the end, so the
//! result only depends on the multiset of patches and the order in which
//! they are folded.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{AxisBox, RasterSpec, TreeRecord};
use crate::matching::{choose_k, match_trees, CostParams, Scheme, DEFAULT_K_MAX};
use crate::metrics::area::{individual_iou_scores, trees_mask};
use crate::metrics::counting::NmaeAccumulator;
use crate::metrics::detection::{balanced_f1, prf1, BalancedWeights, Prf1};
use crate::metrics::errors::{BalancedError, ErrorKind, SideSum};

/// Distance factor used for individual IoU, with one-to-one matching.
pub const INDIVIDUAL_IOU_GAMMA: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct EvalSettings {
    pub gammas: Vec<f64>,
    pub lambda_size: f64,
    pub k_max: usize,
    /// Raster resolution for patch IoU, m/px; `None` skips patch IoU.
    pub patch_resolution: Option<f64>,
    pub individual_iou: bool,
}

impl Default for EvalSettings {
    fn default() -> Self {
        EvalSettings {
            gammas: vec![0.5, 1.0, 2.0],
            lambda_size: CostParams::DEFAULT_LAMBDA_SIZE,
            k_max: DEFAULT_K_MAX,
            patch_resolution: None,
            individual_iou: true,
        }
    }
}

impl EvalSettings {
    pub fn validate(&self) -> Result<()> {
        if self.gammas.is_empty() {
            return Err(Error::invalid("at least one gamma is required"));
        }
        for &g in &self.gammas {
            CostParams::new(self.lambda_size, g)?;
        }
        if self.k_max == 0 {
            return Err(Error::invalid("k_max must be at least 1"));
        }
        if let Some(r) = self.patch_resolution {
            crate::error::ensure_positive("patch resolution", r)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl Counts {
    fn merge(&mut self, o: &Counts) {
        self.tp += o.tp;
        self.fp += o.fp;
        self.fn_ += o.fn_;
    }
}

#[derive(Debug, Clone, PartialEq)]
struct GammaSums {
    gamma: f64,
    // indexed like Scheme::ALL
    counts: [Counts; 3],
    loc: BalancedError,
    ca: BalancedError,
}

/// Mergeable evaluation state.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    settings: EvalSettings,
    per_gamma: Vec<GammaSums>,
    nmae: NmaeAccumulator,
    labels: usize,
    predictions: usize,
    patches: usize,
    iou: SideSum,
    patch_inter: usize,
    patch_union: usize,
}

impl Evaluation {
    pub fn new(settings: EvalSettings) -> Result<Self> {
        settings.validate()?;
        let per_gamma = settings
            .gammas
            .iter()
            .map(|&gamma| GammaSums {
                gamma,
                counts: [Counts::default(); 3],
                loc: BalancedError::new(ErrorKind::Location),
                ca: BalancedError::new(ErrorKind::CrownArea),
            })
            .collect();
        Ok(Evaluation {
            settings,
            per_gamma,
            nmae: NmaeAccumulator::default(),
            labels: 0,
            predictions: 0,
            patches: 0,
            iou: SideSum::default(),
            patch_inter: 0,
            patch_union: 0,
        })
    }

    pub fn settings(&self) -> &EvalSettings {
        &self.settings
    }

    /// Adds one patch of labels and predictions.
    pub fn add_patch(&mut self, labels: &[TreeRecord], preds: &[TreeRecord]) -> Result<()> {
        let (n, m) = (labels.len(), preds.len());
        let k = choose_k(n, m, self.settings.k_max);
        for g in &mut self.per_gamma {
            let params = CostParams::new(self.settings.lambda_size, g.gamma)?;
            let [oo, mo, om] = Scheme::ALL.map(|s| match_trees(labels, preds, &params, s, k));
            for (slot, r) in g.counts.iter_mut().zip([&oo, &mo, &om]) {
                slot.merge(&Counts {
                    tp: r.tp,
                    fp: r.fp,
                    fn_: r.fn_,
                });
            }
            g.loc.add_patch(labels, preds, &mo, &om);
            g.ca.add_patch(labels, preds, &mo, &om);
        }
        if self.settings.individual_iou {
            let params = CostParams::new(self.settings.lambda_size, INDIVIDUAL_IOU_GAMMA)?;
            let oo = match_trees(labels, preds, &params, Scheme::OneToOne, 1);
            for s in individual_iou_scores(labels, preds, &oo)? {
                self.iou.sum += s;
                self.iou.count += 1;
            }
        }
        if let Some(res) = self.settings.patch_resolution {
            let bounds = labels
                .iter()
                .chain(preds)
                .map(|t| t.shape().bounds())
                .reduce(|a, b| a.union(&b));
            if let Some(bounds) = bounds {
                let spec = patch_spec(&bounds, res)?;
                let lm = trees_mask(labels, &spec)?;
                let pm = trees_mask(preds, &spec)?;
                self.patch_inter += lm.intersection_count(&pm);
                self.patch_union += lm.union_count(&pm);
            }
        }
        self.nmae.add_patch(n, m);
        self.labels += n;
        self.predictions += m;
        self.patches += 1;
        Ok(())
    }

    /// Folds `other` into `self`; both must use the same settings.
    pub fn merge(&mut self, other: &Evaluation) -> Result<()> {
        if self.settings != other.settings {
            return Err(Error::Invariant("merging evaluations with different settings".into()));
        }
        for (g, o) in self.per_gamma.iter_mut().zip(&other.per_gamma) {
            for (c, oc) in g.counts.iter_mut().zip(&o.counts) {
                c.merge(oc);
            }
            g.loc.merge(&o.loc);
            g.ca.merge(&o.ca);
        }
        self.nmae.merge(&other.nmae);
        self.labels += other.labels;
        self.predictions += other.predictions;
        self.patches += other.patches;
        self.iou.sum += other.iou.sum;
        self.iou.count += other.iou.count;
        self.patch_inter += other.patch_inter;
        self.patch_union += other.patch_union;
        Ok(())
    }

    pub fn report(&self) -> EvalReport {
        let weights = BalancedWeights::new(self.labels, self.predictions);
        let per_gamma = self
            .per_gamma
            .iter()
            .map(|g| {
                let score = |c: &Counts| SchemeScore {
                    counts: *c,
                    scores: prf1(c.tp, c.fp, c.fn_),
                };
                let [oo, mo, om] = [score(&g.counts[0]), score(&g.counts[1]), score(&g.counts[2])];
                GammaReport {
                    gamma: g.gamma,
                    bf1: balanced_f1(mo.scores.f1, om.scores.f1, self.labels, self.predictions),
                    e_loc_m: weights.and_then(|w| g.loc.value(w.alpha)),
                    e_ca_m2: weights.and_then(|w| g.ca.value(w.alpha)),
                    schemes: SchemeReports {
                        one_to_one: oo,
                        many_to_one: mo,
                        one_to_many: om,
                    },
                }
            })
            .collect();
        EvalReport {
            per_gamma,
            counting_nmae_pct: self.nmae.value(),
            counts: CountSummary {
                labels: self.labels,
                predictions: self.predictions,
                patches: self.patches,
                nmae_skipped_patches: self.nmae.skipped,
            },
            epsilon: weights.map(|w| w.epsilon),
            alpha: weights.map(|w| w.alpha),
            individual_iou: self.iou.mean(),
            patch_iou: match (self.settings.patch_resolution, self.patch_union) {
                (None, _) => None,
                (Some(_), 0) => Some(1.0),
                (Some(_), u) => Some(self.patch_inter as f64 / u as f64),
            },
        }
    }
}

fn patch_spec(bounds: &AxisBox, resolution: f64) -> Result<RasterSpec> {
    RasterSpec::covering(bounds, resolution, 1)
}

/// Evaluates `(labels, predictions)` patches in parallel on the current
/// rayon pool and folds them in input order.
pub fn evaluate_patches(
    patches: &[(&[TreeRecord], &[TreeRecord])],
    settings: &EvalSettings,
) -> Result<EvalReport> {
    let parts: Vec<Evaluation> = patches
        .par_iter()
        .map(|(labels, preds)| {
            let mut e = Evaluation::new(settings.clone())?;
            e.add_patch(labels, preds)?;
            Ok(e)
        })
        .collect::<Result<_>>()?;
    let mut total = Evaluation::new(settings.clone())?;
    for p in &parts {
        total.merge(p)?;
    }
    Ok(total.report())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchemeScore {
    #[serde(flatten)]
    pub counts: Counts,
    #[serde(flatten)]
    pub scores: Prf1,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchemeReports {
    pub one_to_one: SchemeScore,
    pub many_to_one: SchemeScore,
    pub one_to_many: SchemeScore,
}

impl SchemeReports {
    pub fn get(&self, scheme: Scheme) -> &SchemeScore {
        match scheme {
            Scheme::OneToOne => &self.one_to_one,
            Scheme::ManyToOne => &self.many_to_one,
            Scheme::OneToMany => &self.one_to_many,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaReport {
    pub gamma: f64,
    pub schemes: SchemeReports,
    pub bf1: Option<f64>,
    pub e_loc_m: Option<f64>,
    pub e_ca_m2: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountSummary {
    pub labels: usize,
    pub predictions: usize,
    pub patches: usize,
    pub nmae_skipped_patches: usize,
}

/// Aggregated metrics; missing values serialize as `null`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub per_gamma: Vec<GammaReport>,
    pub counting_nmae_pct: Option<f64>,
    pub counts: CountSummary,
    pub epsilon: Option<f64>,
    pub alpha: Option<f64>,
    pub individual_iou: Option<f64>,
    pub patch_iou: Option<f64>,
}
