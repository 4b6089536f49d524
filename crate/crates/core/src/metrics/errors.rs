//! Balanced localization and crown-area errors.
//!
//! Each matched label is compared with the aggregate of its many-to-one
//! partners, and each matched prediction with the aggregate of its
//! one-to-many partners. Positions aggregate by mean, crown areas by sum.
//! The two sides are averaged over their matched nodes and blended with α.
//! Unmatched trees do not contribute; they are already penalized by bF1.

use crate::geometry::{Point, TreeRecord};
use crate::matching::MatchResult;

/// Running sum and count of one side's residuals.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SideSum {
    pub sum: f64,
    pub count: usize,
}

impl SideSum {
    fn push(&mut self, v: f64) {
        self.sum += v;
        self.count += 1;
    }

    pub fn mean(&self) -> Option<f64> {
        (self.count > 0).then(|| self.sum / self.count as f64)
    }
}

/// Which residual is accumulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Distance between a center and the mean of its partners' centers, m.
    Location,
    /// Absolute difference between a crown area and its partners' summed areas, m².
    CrownArea,
}

/// Per-side residual sums, mergeable across patches before α is applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalancedError {
    pub kind: ErrorKind,
    pub many_to_one: SideSum,
    pub one_to_many: SideSum,
}

impl BalancedError {
    pub fn new(kind: ErrorKind) -> Self {
        BalancedError {
            kind,
            many_to_one: SideSum::default(),
            one_to_many: SideSum::default(),
        }
    }

    /// Adds one patch, given its many-to-one and one-to-many results.
    pub fn add_patch(
        &mut self,
        labels: &[TreeRecord],
        preds: &[TreeRecord],
        mo: &MatchResult,
        om: &MatchResult,
    ) {
        for (i, partners) in mo.label_matches.iter().enumerate() {
            if !partners.is_empty() {
                self.many_to_one
                    .push(residual(self.kind, &labels[i], partners.iter().map(|&j| &preds[j])));
            }
        }
        for (j, partners) in om.pred_matches.iter().enumerate() {
            if !partners.is_empty() {
                self.one_to_many
                    .push(residual(self.kind, &preds[j], partners.iter().map(|&i| &labels[i])));
            }
        }
    }

    pub fn merge(&mut self, other: &BalancedError) {
        self.many_to_one.sum += other.many_to_one.sum;
        self.many_to_one.count += other.many_to_one.count;
        self.one_to_many.sum += other.one_to_many.sum;
        self.one_to_many.count += other.one_to_many.count;
    }

    /// `α·mean_MO + (1 − α)·mean_OM`. A side without matches contributes
    /// zero; `None` when neither side has any.
    pub fn value(&self, alpha: f64) -> Option<f64> {
        let (mo, om) = (self.many_to_one.mean(), self.one_to_many.mean());
        if mo.is_none() && om.is_none() {
            return None;
        }
        Some(alpha * mo.unwrap_or(0.0) + (1.0 - alpha) * om.unwrap_or(0.0))
    }
}

fn residual<'a>(kind: ErrorKind, tree: &TreeRecord, partners: impl Iterator<Item = &'a TreeRecord>) -> f64 {
    match kind {
        ErrorKind::Location => {
            let (mut sx, mut sy, mut n) = (0.0, 0.0, 0usize);
            for p in partners {
                sx += p.center().x;
                sy += p.center().y;
                n += 1;
            }
            let mean = Point::new(sx / n as f64, sy / n as f64);
            tree.center().distance(mean)
        }
        ErrorKind::CrownArea => {
            let total: f64 = partners.map(TreeRecord::crown_area).sum();
            (tree.crown_area() - total).abs()
        }
    }
}

/// Balanced localization error of a single patch, in meters.
pub fn balanced_loc_error(
    labels: &[TreeRecord],
    preds: &[TreeRecord],
    mo: &MatchResult,
    om: &MatchResult,
    alpha: f64,
) -> Option<f64> {
    let mut e = BalancedError::new(ErrorKind::Location);
    e.add_patch(labels, preds, mo, om);
    e.value(alpha)
}

/// Balanced crown-area error of a single patch, in m².
pub fn balanced_ca_error(
    labels: &[TreeRecord],
    preds: &[TreeRecord],
    mo: &MatchResult,
    om: &MatchResult,
    alpha: f64,
) -> Option<f64> {
    let mut e = BalancedError::new(ErrorKind::CrownArea);
    e.add_patch(labels, preds, mo, om);
    e.value(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::Scheme;
    use approx::assert_relative_eq;

    fn tree(x: f64, y: f64, ca: f64) -> TreeRecord {
        TreeRecord::new("p", Point::new(x, y), ca).unwrap()
    }

    // hand-built aggregated matches
    fn result(scheme: Scheme, n: usize, m: usize, pairs: &[(usize, usize)]) -> MatchResult {
        let mut label_matches = vec![Vec::new(); n];
        let mut pred_matches = vec![Vec::new(); m];
        for &(i, j) in pairs {
            label_matches[i].push(j);
            pred_matches[j].push(i);
        }
        MatchResult {
            scheme,
            k: 1,
            pairs: pairs.to_vec(),
            label_matches,
            pred_matches,
            tp: 0,
            fp: 0,
            fn_: 0,
        }
    }

    #[test]
    fn perfect_predictions_have_no_error() {
        let labels = vec![tree(0.0, 0.0, 10.0), tree(5.0, 5.0, 20.0)];
        let r = result(Scheme::ManyToOne, 2, 2, &[(0, 0), (1, 1)]);
        let o = result(Scheme::OneToMany, 2, 2, &[(0, 0), (1, 1)]);
        assert_eq!(balanced_loc_error(&labels, &labels, &r, &o, 0.5), Some(0.0));
        assert_eq!(balanced_ca_error(&labels, &labels, &r, &o, 0.5), Some(0.0));
    }

    #[test]
    fn averaged_partner_centers() {
        let labels = vec![tree(0.0, 0.0, 10.0)];
        let preds = vec![tree(1.0, 0.0, 5.0), tree(-1.0, 0.0, 5.0)];
        let mo = result(Scheme::ManyToOne, 1, 2, &[(0, 0), (0, 1)]);
        let om = result(Scheme::OneToMany, 1, 2, &[]);
        assert_eq!(balanced_loc_error(&labels, &preds, &mo, &om, 0.5), Some(0.0));
        // summed areas match exactly
        assert_eq!(balanced_ca_error(&labels, &preds, &mo, &om, 0.5), Some(0.0));
    }

    #[test]
    fn single_pair_distance_and_area() {
        let labels = vec![tree(0.0, 0.0, 100.0)];
        let preds = vec![tree(3.0, 4.0, 70.0)];
        let mo = result(Scheme::ManyToOne, 1, 1, &[(0, 0)]);
        let om = result(Scheme::OneToMany, 1, 1, &[(0, 0)]);
        assert_relative_eq!(balanced_loc_error(&labels, &preds, &mo, &om, 0.5).unwrap(), 5.0);
        assert_relative_eq!(balanced_ca_error(&labels, &preds, &mo, &om, 0.5).unwrap(), 30.0);
        let only_mo = result(Scheme::OneToMany, 1, 1, &[]);
        assert_relative_eq!(balanced_ca_error(&labels, &preds, &mo, &only_mo, 0.25).unwrap(), 7.5);
    }

    #[test]
    fn no_matches_is_missing() {
        let labels = vec![tree(0.0, 0.0, 100.0)];
        let preds = vec![tree(300.0, 4.0, 70.0)];
        let mo = result(Scheme::ManyToOne, 1, 1, &[]);
        let om = result(Scheme::OneToMany, 1, 1, &[]);
        assert_eq!(balanced_loc_error(&labels, &preds, &mo, &om, 0.5), None);
    }
}
