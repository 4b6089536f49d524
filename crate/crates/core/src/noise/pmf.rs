//! Quantity distributions of the label and prediction noise models.
//!
//! A label node holds a quantity of real trees: `1`, an integer `k ≥ 2`
//! (several real trees merged into one label) or a fraction `1/k` (one real
//! tree split into `k` labels). Both non-trivial branches reuse the Poisson
//! pmf truncated to `k ≥ 2`.

use std::fmt;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use crate::error::{Error, Result};

/// Largest multiplicity kept in the truncated supports.
pub const SUPPORT_MAX: u32 = 50;

/// Real-tree quantity of a node: `Whole(k)` is `k`, `Fraction(k)` is `1/k`.
/// `Whole(1)` is the unit quantity and `Fraction(1)` is never produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantity {
    Whole(u32),
    Fraction(u32),
}

impl Quantity {
    pub const ONE: Quantity = Quantity::Whole(1);

    pub fn value(self) -> f64 {
        match self {
            Quantity::Whole(k) => k as f64,
            Quantity::Fraction(k) => 1.0 / k as f64,
        }
    }

    /// The multiplicity `k` of either branch.
    pub fn multiplicity(self) -> u32 {
        match self {
            Quantity::Whole(k) | Quantity::Fraction(k) => k,
        }
    }

    fn checked(self) -> Result<Quantity> {
        let k = self.multiplicity();
        if k == 0 || k > SUPPORT_MAX || self == Quantity::Fraction(1) {
            return Err(Error::OutOfSupport(format!("{self} is outside 1/{SUPPORT_MAX}..{SUPPORT_MAX}")));
        }
        Ok(self)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Whole(k) => write!(f, "{k}"),
            Quantity::Fraction(k) => write!(f, "1/{k}"),
        }
    }
}

/// Poisson pmf `λ^k e^{-λ} / k!`.
pub fn poisson_pmf(k: u32, rate: f64) -> f64 {
    let ln_fact: f64 = (2..=k).map(|i| (i as f64).ln()).sum();
    (k as f64 * rate.ln() - rate - ln_fact).exp()
}

/// Poisson pmf renormalized over `k ≥ 2`.
pub fn two_truncated_poisson(k: u32, rate: f64) -> f64 {
    if k < 2 {
        return 0.0;
    }
    poisson_pmf(k, rate) / (1.0 - poisson_pmf(0, rate) - poisson_pmf(1, rate))
}

fn check_probability(what: &'static str, p: f64, allow_zero: bool) -> Result<()> {
    let ok = p.is_finite() && p <= 1.0 && if allow_zero { p >= 0.0 } else { p > 0.0 };
    if !ok {
        return Err(Error::invalid(format!("{what} must be in {}0, 1], got {p}", if allow_zero { "[" } else { "(" })));
    }
    Ok(())
}

fn check_rate(rate: f64) -> Result<()> {
    crate::error::ensure_positive("poisson rate", rate).map(|_| ())
}

/// Distribution of the quantity of real trees carried by one label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabelNoiseModel {
    pub p1_label: f64,
    pub poisson_rate: f64,
    /// Shifts the non-unit mass toward splitting (`> 0`) or merging (`< 0`).
    pub bias: f64,
}

impl LabelNoiseModel {
    pub const DEFAULT_RATE: f64 = 0.25;

    pub fn new(p1_label: f64, poisson_rate: f64, bias: f64) -> Result<Self> {
        check_probability("p1_label", p1_label, false)?;
        check_rate(poisson_rate)?;
        if !(bias > -1.0 && bias < 1.0) {
            return Err(Error::invalid(format!("bias must be in (-1, 1), got {bias}")));
        }
        Ok(LabelNoiseModel {
            p1_label,
            poisson_rate,
            bias,
        })
    }

    /// Mass of the merge branch (`q ≥ 2`).
    pub fn merge_weight(&self) -> f64 {
        (1.0 - self.p1_label) * (1.0 - self.bias) / 2.0
    }

    /// Mass of the split branch (`q ≤ 1/2`).
    pub fn split_weight(&self) -> f64 {
        (1.0 - self.p1_label) * (1.0 + self.bias) / 2.0
    }

    pub fn pmf(&self, q: Quantity) -> Result<f64> {
        Ok(match q.checked()? {
            Quantity::Whole(1) => self.p1_label,
            Quantity::Whole(k) => self.merge_weight() * two_truncated_poisson(k, self.poisson_rate),
            Quantity::Fraction(k) => self.split_weight() * two_truncated_poisson(k, self.poisson_rate),
        })
    }

    /// Every supported quantity with its probability.
    pub fn support(&self) -> Vec<(Quantity, f64)> {
        full_support()
            .map(|q| (q, self.pmf(q).expect("support values are valid")))
            .collect()
    }
}

/// Distribution of the prediction count attached to a label node of
/// quantity `q`: `Whole(k)` means one prediction shared by `k` label nodes,
/// `Fraction(k)` means `k` predictions on this label node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictionNoiseModel {
    pub p1_pred: f64,
    pub poisson_rate: f64,
}

impl PredictionNoiseModel {
    pub fn new(p1_pred: f64, poisson_rate: f64) -> Result<Self> {
        check_probability("p1_pred", p1_pred, false)?;
        check_rate(poisson_rate)?;
        Ok(PredictionNoiseModel {
            p1_pred,
            poisson_rate,
        })
    }

    pub fn pmf(&self, q: Quantity, n: Quantity) -> Result<f64> {
        let qv = q.checked()?.value();
        let rest = 1.0 - self.p1_pred;
        Ok(match n.checked()? {
            Quantity::Whole(1) => self.p1_pred,
            Quantity::Whole(k) => qv * rest / (1.0 + qv) * two_truncated_poisson(k, self.poisson_rate),
            Quantity::Fraction(k) => rest / (1.0 + qv) * two_truncated_poisson(k, self.poisson_rate),
        })
    }

    pub fn support(&self, q: Quantity) -> Result<Vec<(Quantity, f64)>> {
        full_support().map(|n| Ok((n, self.pmf(q, n)?))).collect()
    }
}

/// `1, 2..=50, 1/2..=1/50` in that order.
pub fn full_support() -> impl Iterator<Item = Quantity> {
    std::iter::once(Quantity::ONE)
        .chain((2..=SUPPORT_MAX).map(Quantity::Whole))
        .chain((2..=SUPPORT_MAX).map(Quantity::Fraction))
}

/// Sampler over a finite weighted support.
#[derive(Debug, Clone)]
pub struct QuantitySampler {
    values: Vec<Quantity>,
    index: WeightedIndex<f64>,
}

impl QuantitySampler {
    pub fn new(support: Vec<(Quantity, f64)>) -> Result<Self> {
        let (values, weights): (Vec<_>, Vec<_>) = support.into_iter().unzip();
        let index = WeightedIndex::new(&weights)
            .map_err(|e| Error::invalid(format!("invalid quantity weights: {e}")))?;
        Ok(QuantitySampler { values, index })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Quantity {
        self.values[self.index.sample(rng)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn poisson_values() {
        assert_relative_eq!(poisson_pmf(0, 0.25), (-0.25f64).exp(), epsilon = 1e-15);
        assert_relative_eq!(poisson_pmf(2, 0.25), 0.03125 * (-0.25f64).exp(), epsilon = 1e-15);
        let total: f64 = (2..=SUPPORT_MAX).map(|k| two_truncated_poisson(k, 0.25)).sum();
        assert_relative_eq!(total, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn label_pmf_normalizes_on_a_grid() {
        for p1 in [0.2, 0.4, 0.8] {
            for rate in [0.25, 1.0, 3.0] {
                let m = LabelNoiseModel::new(p1, rate, 0.0).unwrap();
                let total: f64 = m.support().iter().map(|s| s.1).sum();
                assert!((total - 1.0).abs() < 1e-6, "{p1} {rate}: {total}");
            }
        }
    }

    #[test]
    fn label_pmf_branches() {
        let m = LabelNoiseModel::new(0.4, 0.25, 0.0).unwrap();
        assert_eq!(m.pmf(Quantity::ONE).unwrap(), 0.4);
        assert_eq!(m.pmf(Quantity::Whole(2)).unwrap(), m.pmf(Quantity::Fraction(2)).unwrap());
        assert!(m.pmf(Quantity::Whole(51)).is_err());
        assert!(m.pmf(Quantity::Fraction(1)).is_err());
        let biased = LabelNoiseModel::new(0.4, 0.25, 0.6).unwrap();
        assert!(biased.pmf(Quantity::Fraction(2)).unwrap() > biased.pmf(Quantity::Whole(2)).unwrap());
        assert!(LabelNoiseModel::new(0.0, 0.25, 0.0).is_err());
        assert!(LabelNoiseModel::new(0.5, 0.25, 1.0).is_err());
    }

    #[test]
    fn prediction_pmf_normalizes_for_every_quantity() {
        let m = PredictionNoiseModel::new(0.6, 0.25).unwrap();
        for q in full_support() {
            let total: f64 = m.support(q).unwrap().iter().map(|s| s.1).sum();
            assert!((total - 1.0).abs() < 1e-9, "{q}: {total}");
            assert_eq!(m.pmf(q, Quantity::ONE).unwrap(), 0.6);
        }
        // mass on shared predictions grows with the label quantity
        let shared = |q| -> f64 {
            m.support(q).unwrap().iter().filter(|s| matches!(s.0, Quantity::Whole(k) if k >= 2)).map(|s| s.1).sum()
        };
        assert!(shared(Quantity::Fraction(3)) < shared(Quantity::ONE));
        assert!(shared(Quantity::ONE) < shared(Quantity::Whole(4)));
    }
}
