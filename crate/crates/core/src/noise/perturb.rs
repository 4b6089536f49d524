//! Synthetic under- and over-prediction of a labeled forest.
//!
//! A fraction `s` of the labels is resampled as predictions whose crown
//! areas are scaled by `2 − s` and whose centers are jittered. `s < 1`
//! mimics a model that predicts fewer, larger trees; `s > 1` one that
//! predicts more, smaller trees.

use rand::seq::index;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Point, TreeRecord};
use crate::matching::{choose_k, match_trees, CostParams, Scheme};
use crate::metrics::{balanced_f1, prf1, Prf1};
use crate::noise::rng::stream_rng;

/// Smallest crown area a perturbed prediction may get, m².
pub const CA_FLOOR: f64 = 0.01;

/// Default center jitter, as a fraction of the label crown diameter.
pub const DEFAULT_JITTER: f64 = 0.5;

/// Perturbed predictions for `labels` of one patch. `jitter` is the
/// standard deviation of the center shift in crown diameters.
pub fn perturb_predictions<R: Rng + ?Sized>(
    labels: &[TreeRecord],
    s: f64,
    jitter: f64,
    rng: &mut R,
) -> Result<Vec<TreeRecord>> {
    if !(s.is_finite() && s > 0.0 && s <= 2.0) {
        return Err(Error::invalid(format!("sampling fraction must be in (0, 2], got {s}")));
    }
    if !(jitter.is_finite() && jitter >= 0.0) {
        return Err(Error::invalid(format!("jitter must be finite and >= 0, got {jitter}")));
    }
    let n = labels.len();
    let count = (s * n as f64).round() as usize;
    let picks: Vec<usize> = if n == 0 {
        Vec::new()
    } else if s <= 1.0 {
        let mut v = index::sample(rng, n, count.min(n)).into_vec();
        v.sort_unstable();
        v
    } else {
        (0..count).map(|_| rng.random_range(0..n)).collect()
    };
    let unit = Normal::new(0.0, 1.0).expect("unit normal");
    picks
        .into_iter()
        .map(|i| {
            let l = &labels[i];
            let sd = jitter * l.crown_diameter();
            let c = l.center();
            let center = Point::new(c.x + sd * unit.sample(rng), c.y + sd * unit.sample(rng));
            let ca = ((2.0 - s) * l.crown_area()).max(CA_FLOOR);
            TreeRecord::new(l.patch_id(), center, ca)
        })
        .collect()
}

/// Scores of every matching scheme at one sampling fraction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub s: f64,
    pub n_labels: usize,
    pub n_preds: usize,
    pub one_to_one: Prf1,
    pub many_to_one: Prf1,
    pub one_to_many: Prf1,
    pub bf1: Option<f64>,
}

/// Perturbs every patch at every `s` and matches the predictions back to
/// the labels. Counts are pooled over patches. Each (s, patch) pair draws
/// from its own stream of `seed`.
pub fn run_matching_sweep(
    patches: &[Vec<TreeRecord>],
    s_grid: &[f64],
    params: &CostParams,
    k_max: usize,
    jitter: f64,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    if patches.iter().all(Vec::is_empty) {
        return Err(Error::invalid("matching sweep needs at least one label"));
    }
    let jobs: Vec<(usize, usize)> = (0..s_grid.len())
        .flat_map(|si| (0..patches.len()).map(move |pi| (si, pi)))
        .collect();
    let counts: Vec<[(usize, usize, usize); 3]> = jobs
        .par_iter()
        .map(|&(si, pi)| {
            let stream = ((si as u64) << 32) | pi as u64;
            let mut rng = stream_rng(seed, stream);
            let labels = &patches[pi];
            let preds = perturb_predictions(labels, s_grid[si], jitter, &mut rng)?;
            let k = choose_k(labels.len(), preds.len(), k_max);
            Ok(Scheme::ALL.map(|scheme| {
                let r = match_trees(labels, &preds, params, scheme, k);
                (r.tp, r.fp, r.fn_)
            }))
        })
        .collect::<Result<_>>()?;

    let n_labels: usize = patches.iter().map(Vec::len).sum();
    let mut rows = Vec::with_capacity(s_grid.len());
    for (si, &s) in s_grid.iter().enumerate() {
        let mut pooled = [(0usize, 0usize, 0usize); 3];
        for per_scheme in &counts[si * patches.len()..(si + 1) * patches.len()] {
            for (acc, c) in pooled.iter_mut().zip(per_scheme) {
                acc.0 += c.0;
                acc.1 += c.1;
                acc.2 += c.2;
            }
        }
        let [oo, mo, om] = pooled.map(|(tp, fp, fn_)| prf1(tp, fp, fn_));
        // every prediction is either a TP or an FP under one-to-many
        let n_preds = pooled[2].0 + pooled[2].1;
        rows.push(SweepRow {
            s,
            n_labels,
            n_preds,
            one_to_one: oo,
            many_to_one: mo,
            one_to_many: om,
            bf1: balanced_f1(mo.f1, om.f1, n_labels, n_preds),
        });
    }
    Ok(rows)
}
