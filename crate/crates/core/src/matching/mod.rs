//! Label/prediction association.
//!
//! Costs combine center distance and crown-area difference under a hard
//! distance threshold. Three schemes are built on one Hungarian solver:
//! one-to-one directly, many-to-one by repeating label rows `K` times and
//! one-to-many by repeating prediction columns `K` times. Copies beyond the
//! first carry a surplus tier so distinct trees are covered before any tree
//! receives a second partner.

mod cost;
mod hungarian;

use std::fmt;
use std::str::FromStr;

pub use cost::{pairwise_cost, CostMatrix, CostParams, ThresholdSide};
pub use hungarian::{hungarian, Assignment};

use crate::error::Error;
use crate::geometry::TreeRecord;

/// Default cap on tiling multiplicity.
pub const DEFAULT_K_MAX: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    OneToOne,
    ManyToOne,
    OneToMany,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::OneToOne, Scheme::ManyToOne, Scheme::OneToMany];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::OneToOne => "one_to_one",
            Scheme::ManyToOne => "many_to_one",
            Scheme::OneToMany => "one_to_many",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "one_to_one" | "1-1" => Ok(Scheme::OneToOne),
            "many_to_one" | "n-1" => Ok(Scheme::ManyToOne),
            "one_to_many" | "1-n" => Ok(Scheme::OneToMany),
            other => Err(Error::invalid(format!("unknown matching scheme {other:?}"))),
        }
    }
}

/// Aggregated outcome of one matching scheme on one patch.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    pub scheme: Scheme,
    pub k: usize,
    /// Matched `(label, prediction)` pairs of the aggregated matrix, sorted.
    pub pairs: Vec<(usize, usize)>,
    /// Predictions matched to each label.
    pub label_matches: Vec<Vec<usize>>,
    /// Labels matched to each prediction.
    pub pred_matches: Vec<Vec<usize>>,
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
}

impl MatchResult {
    pub fn n_labels(&self) -> usize {
        self.label_matches.len()
    }

    pub fn n_preds(&self) -> usize {
        self.pred_matches.len()
    }

    pub fn is_matched(&self, label: usize, pred: usize) -> bool {
        self.label_matches[label].contains(&pred)
    }

    /// Dense aggregated matching matrix, labels along rows.
    pub fn matrix(&self) -> Vec<Vec<bool>> {
        let mut a = vec![vec![false; self.n_preds()]; self.n_labels()];
        for &(i, j) in &self.pairs {
            a[i][j] = true;
        }
        a
    }
}

/// Tiling multiplicity `ceil(max(M/N, N/M))`, clamped to `[1, k_max]`.
pub fn choose_k(n_labels: usize, n_preds: usize, k_max: usize) -> usize {
    if n_labels == 0 || n_preds == 0 {
        return 1;
    }
    let (hi, lo) = if n_labels > n_preds {
        (n_labels, n_preds)
    } else {
        (n_preds, n_labels)
    };
    hi.div_ceil(lo).clamp(1, k_max.max(1))
}

/// Matches `labels` with `preds` from the same patch under `scheme`.
///
/// `k` is the tiling multiplicity for the many-to-one and one-to-many
/// schemes and is ignored for one-to-one. Counting follows the scheme:
/// label-side TP for one-to-one and many-to-one (FP = unmatched
/// predictions), prediction-side TP for one-to-many (FN = unmatched labels).
pub fn match_trees(
    labels: &[TreeRecord],
    preds: &[TreeRecord],
    params: &CostParams,
    scheme: Scheme,
    k: usize,
) -> MatchResult {
    let (n, m) = (labels.len(), preds.len());
    let k = if scheme == Scheme::OneToOne { 1 } else { k.max(1) };
    let side = match scheme {
        Scheme::OneToMany => ThresholdSide::Prediction,
        _ => ThresholdSide::Label,
    };
    let base = CostMatrix::build(labels, preds, params, side);

    let mut pairs: Vec<(usize, usize)> = match scheme {
        Scheme::OneToOne => hungarian(&base).pairs().collect(),
        Scheme::ManyToOne => {
            let tiled = base.tile_rows(k);
            let tiers: Vec<u32> = (0..n * k).map(|r| (r >= n) as u32).collect();
            hungarian::solve_tiered(&tiled, &tiers, &[])
                .pairs()
                .map(|(r, c)| (r % n, c))
                .collect()
        }
        Scheme::OneToMany => {
            let tiled = base.tile_cols(k);
            let tiers: Vec<u32> = (0..m * k).map(|c| (c >= m) as u32).collect();
            hungarian::solve_tiered(&tiled, &[], &tiers)
                .pairs()
                .map(|(r, c)| (r, c % m))
                .collect()
        }
    };
    pairs.sort_unstable();
    pairs.dedup();

    let mut label_matches = vec![Vec::new(); n];
    let mut pred_matches = vec![Vec::new(); m];
    for &(i, j) in &pairs {
        label_matches[i].push(j);
        pred_matches[j].push(i);
    }
    let matched_labels = label_matches.iter().filter(|v| !v.is_empty()).count();
    let matched_preds = pred_matches.iter().filter(|v| !v.is_empty()).count();
    let (tp, fp, fn_) = match scheme {
        Scheme::OneToOne | Scheme::ManyToOne => (matched_labels, m - matched_preds, n - matched_labels),
        Scheme::OneToMany => (matched_preds, m - matched_preds, n - matched_labels),
    };
    MatchResult {
        scheme,
        k,
        pairs,
        label_matches,
        pred_matches,
        tp,
        fp,
        fn_,
    }
}
