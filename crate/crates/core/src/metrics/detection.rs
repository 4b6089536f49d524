use serde::Serialize;

/// Precision, recall and F1 from detection counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prf1 {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Standard detection ratios; each is 0 when its denominator is 0.
pub fn prf1(tp: usize, fp: usize, fn_: usize) -> Prf1 {
    let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    Prf1 {
        precision: ratio(tp, tp + fp),
        recall: ratio(tp, tp + fn_),
        f1: ratio(2 * tp, 2 * tp + fp + fn_),
    }
}

/// Mixing weights of the balanced F1 score.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalancedWeights {
    /// Normalized counting error `(M − N) / N`.
    pub epsilon: f64,
    /// Weight of the many-to-one score, `1 / (1 + e^{2ε})`.
    pub alpha: f64,
}

impl BalancedWeights {
    /// `None` when there are no labels.
    pub fn new(n_labels: usize, m_preds: usize) -> Option<Self> {
        if n_labels == 0 {
            return None;
        }
        let epsilon = (m_preds as f64 - n_labels as f64) / n_labels as f64;
        Some(BalancedWeights {
            epsilon,
            alpha: alpha(epsilon),
        })
    }
}

/// Sigmoid weight: over-prediction (ε > 0) shifts weight to one-to-many.
pub fn alpha(epsilon: f64) -> f64 {
    1.0 / (1.0 + (2.0 * epsilon).exp())
}

/// `α·F1_MO + (1 − α)·F1_OM`; `None` without labels.
pub fn balanced_f1(f1_mo: f64, f1_om: f64, n_labels: usize, m_preds: usize) -> Option<f64> {
    let w = BalancedWeights::new(n_labels, m_preds)?;
    Some(w.alpha * f1_mo + (1.0 - w.alpha) * f1_om)
}
