//! Agreement between two annotations of the same patches.
//!
//! Set A plays the label role and set B the prediction role. Edges are the
//! union of many-to-one and one-to-many matches; each connected component
//! is classified by how many trees of each set it holds.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::geometry::TreeRecord;
use crate::matching::{match_trees, CostParams, Scheme};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AgreementCategory {
    /// A tree without any counterpart.
    Unmatched,
    /// One A tree and one B tree.
    Identity,
    /// One A tree, several B trees.
    Split,
    /// Several A trees, one B tree.
    Merge,
    /// Several trees on both sides.
    NToM,
}

impl AgreementCategory {
    pub fn as_str(self) -> &'static str {
        match self {
            AgreementCategory::Unmatched => "unmatched",
            AgreementCategory::Identity => "identity",
            AgreementCategory::Split => "split",
            AgreementCategory::Merge => "merge",
            AgreementCategory::NToM => "n_to_m",
        }
    }
}

impl fmt::Display for AgreementCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Tree indices of one connected component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgreementComponent {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

impl AgreementComponent {
    /// Category and degree. The degree is 0 for unmatched trees, 1 for
    /// identity, the multiplicity for splits and merges, and the larger side
    /// for N-to-M components.
    pub fn classify(&self) -> (AgreementCategory, usize) {
        match (self.a.len(), self.b.len()) {
            (0, _) | (_, 0) => (AgreementCategory::Unmatched, 0),
            (1, 1) => (AgreementCategory::Identity, 1),
            (1, k) => (AgreementCategory::Split, k),
            (k, 1) => (AgreementCategory::Merge, k),
            (a, b) => (AgreementCategory::NToM, a.max(b)),
        }
    }
}

/// Connected components of one patch, ordered by their first A tree and
/// then by their first B tree for B-only components.
pub fn agreement_components(
    a: &[TreeRecord],
    b: &[TreeRecord],
    params: &CostParams,
    k_max: usize,
) -> Vec<AgreementComponent> {
    let (na, nb) = (a.len(), b.len());
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); na + nb];
    for scheme in [Scheme::ManyToOne, Scheme::OneToMany] {
        for (i, j) in match_trees(a, b, params, scheme, k_max).pairs {
            adj[i].push(na + j);
            adj[na + j].push(i);
        }
    }
    let mut seen = vec![false; na + nb];
    let mut comps = Vec::new();
    for start in 0..na + nb {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut comp = AgreementComponent { a: Vec::new(), b: Vec::new() };
        while let Some(v) = stack.pop() {
            if v < na {
                comp.a.push(v);
            } else {
                comp.b.push(v - na);
            }
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        comp.a.sort_unstable();
        comp.b.sort_unstable();
        comps.push(comp);
    }
    comps
}

/// One line of the degree table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgreementRow {
    pub category: AgreementCategory,
    pub degree: usize,
    pub count: usize,
    pub percent: f64,
}

/// Component counts per category and degree, accumulated over patches.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AgreementTable {
    counts: BTreeMap<(AgreementCategory, usize), usize>,
}

impl AgreementTable {
    pub fn add_patch(&mut self, a: &[TreeRecord], b: &[TreeRecord], params: &CostParams, k_max: usize) {
        for comp in agreement_components(a, b, params, k_max) {
            *self.counts.entry(comp.classify()).or_default() += 1;
        }
    }

    pub fn merge(&mut self, other: &AgreementTable) {
        for (key, n) in &other.counts {
            *self.counts.entry(*key).or_default() += n;
        }
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn count(&self, category: AgreementCategory, degree: usize) -> usize {
        self.counts.get(&(category, degree)).copied().unwrap_or(0)
    }

    /// Rows ordered by category then degree, with percentages of all
    /// components.
    pub fn rows(&self) -> Vec<AgreementRow> {
        let total = self.total();
        self.counts
            .iter()
            .map(|(&(category, degree), &count)| AgreementRow {
                category,
                degree,
                count,
                percent: 100.0 * count as f64 / total as f64,
            })
            .collect()
    }
}

/// Degree table of a single patch.
pub fn agreement_analysis(
    a: &[TreeRecord],
    b: &[TreeRecord],
    params: &CostParams,
    k_max: usize,
) -> AgreementTable {
    let mut table = AgreementTable::default();
    table.add_patch(a, b, params, k_max);
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{cd_to_ca, Point};
    use crate::matching::DEFAULT_K_MAX;

    fn tree(x: f64, y: f64, cd: f64) -> TreeRecord {
        TreeRecord::new("p", Point::new(x, y), cd_to_ca(cd).unwrap()).unwrap()
    }

    fn forest() -> Vec<TreeRecord> {
        (0..6).map(|i| tree(20.0 * i as f64, 0.0, 5.0 + i as f64)).collect()
    }

    fn params() -> CostParams {
        CostParams::with_gamma(1.0).unwrap()
    }

    #[test]
    fn identical_sets_are_all_identity() {
        let a = forest();
        let t = agreement_analysis(&a, &a, &params(), DEFAULT_K_MAX);
        let rows = t.rows();
        assert_eq!(rows.len(), 1);
        assert_eq!((rows[0].category, rows[0].degree, rows[0].count), (AgreementCategory::Identity, 1, 6));
        assert_eq!(rows[0].percent, 100.0);
    }

    #[test]
    fn removed_tree_leaves_one_unmatched() {
        let a = forest();
        let b = a[..5].to_vec();
        let t = agreement_analysis(&a, &b, &params(), DEFAULT_K_MAX);
        assert_eq!(t.count(AgreementCategory::Unmatched, 0), 1);
        assert_eq!(t.count(AgreementCategory::Identity, 1), 5);
        let sum: f64 = t.rows().iter().map(|r| r.percent).sum();
        assert!((sum - 100.0).abs() < 1e-9);
    }

    #[test]
    fn one_big_tree_split_in_two() {
        let a = vec![tree(0.0, 0.0, 10.0)];
        let b = vec![tree(-2.0, 0.0, 4.0), tree(2.0, 0.0, 4.0)];
        let t = agreement_analysis(&a, &b, &params(), DEFAULT_K_MAX);
        assert_eq!(t.total(), 1);
        assert_eq!(t.count(AgreementCategory::Split, 2), 1);
        // and the mirror image is a merge
        let t = agreement_analysis(&b, &a, &params(), DEFAULT_K_MAX);
        assert_eq!(t.count(AgreementCategory::Merge, 2), 1);
    }

    #[test]
    fn disjoint_sets_are_all_unmatched() {
        let a = forest();
        let b: Vec<_> = a.iter().map(|t| tree(t.center().x, 500.0, 5.0)).collect();
        let t = agreement_analysis(&a, &b, &params(), DEFAULT_K_MAX);
        assert_eq!(t.count(AgreementCategory::Unmatched, 0), 12);
        assert_eq!(t.rows().len(), 1);
    }
}
