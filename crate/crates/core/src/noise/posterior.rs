//! Posterior of the real crown area given a labeled crown area.
//!
//! A real crown of area `s_r` is labeled as missing, as itself, as a merge
//! of `k` equal crowns (`k·s_r`) or as one of `k` split parts (`s_r/k`).
//! Each likelihood row is renormalized over the outcomes that land on the
//! label grid, then Bayes' rule with a prior over real areas gives one
//! posterior column per labeled area.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::cd_to_ca;
use crate::noise::pmf::{poisson_pmf, SUPPORT_MAX};

/// Strictly increasing grid of positive crown areas, m².
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaGrid(Vec<f64>);

impl CaGrid {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("crown-area grid is empty"));
        }
        if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::invalid("crown-area grid values must be finite and positive"));
        }
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("crown-area grid must be strictly increasing"));
        }
        Ok(CaGrid(values))
    }

    /// `n` points from `min` to `max` in equal ratios.
    pub fn log_spaced(min: f64, max: f64, n: usize) -> Result<Self> {
        Self::spaced(min, max, n, |a, b, t| (a.ln() + t * (b.ln() - a.ln())).exp())
    }

    /// `n` points from `min` to `max` in equal steps.
    pub fn linear(min: f64, max: f64, n: usize) -> Result<Self> {
        Self::spaced(min, max, n, |a, b, t| a + t * (b - a))
    }

    fn spaced(min: f64, max: f64, n: usize, at: impl Fn(f64, f64, f64) -> f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("a spaced grid needs at least two points"));
        }
        CaGrid::new((0..n).map(|i| at(min, max, i as f64 / (n - 1) as f64)).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Nearest grid index when `x` lies within half the local spacing of it.
    pub fn snap(&self, x: f64) -> Option<usize> {
        let g = &self.0;
        if g.len() == 1 {
            return ((x - g[0]).abs() <= 1e-9 * g[0]).then_some(0);
        }
        let n = g.len();
        let lo_edge = g[0] - 0.5 * (g[1] - g[0]);
        let hi_edge = g[n - 1] + 0.5 * (g[n - 1] - g[n - 2]);
        if !(x >= lo_edge && x <= hi_edge) {
            return None;
        }
        let i = g.partition_point(|&v| v < x);
        Some(match i {
            0 => 0,
            i if i == n => n - 1,
            i => {
                if x - g[i - 1] <= g[i] - x {
                    i - 1
                } else {
                    i
                }
            }
        })
    }
}

/// How the split branch of the likelihood is normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitBranch {
    /// `w · f_p(k) / (1 − f_p(1))`, the same form as the merge branch.
    #[default]
    Symmetric,
    /// `w · (1 − f_p(1)) / f_p(k)`, kept for comparison.
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LikelihoodParams {
    pub p_zero: f64,
    pub p_identity: f64,
    pub merge_weight: f64,
    pub split_weight: f64,
    pub poisson_rate: f64,
    pub split_branch: SplitBranch,
}

impl Default for LikelihoodParams {
    fn default() -> Self {
        LikelihoodParams {
            p_zero: 0.35,
            p_identity: 0.44,
            merge_weight: 0.07,
            split_weight: 0.06,
            poisson_rate: 0.25,
            split_branch: SplitBranch::Symmetric,
        }
    }
}

impl LikelihoodParams {
    fn validate(&self) -> Result<()> {
        for (what, w) in [
            ("p_zero", self.p_zero),
            ("p_identity", self.p_identity),
            ("merge_weight", self.merge_weight),
            ("split_weight", self.split_weight),
        ] {
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::invalid(format!("{what} must be finite and >= 0, got {w}")));
            }
        }
        crate::error::ensure_positive("poisson rate", self.poisson_rate)?;
        Ok(())
    }

    fn merge_term(&self, k: u32) -> f64 {
        let f1 = poisson_pmf(1, self.poisson_rate);
        self.merge_weight * poisson_pmf(k, self.poisson_rate) / (1.0 - f1)
    }

    fn split_term(&self, k: u32) -> f64 {
        let f1 = poisson_pmf(1, self.poisson_rate);
        let fk = poisson_pmf(k, self.poisson_rate);
        match self.split_branch {
            SplitBranch::Symmetric => self.split_weight * fk / (1.0 - f1),
            SplitBranch::Literal => self.split_weight * (1.0 - f1) / fk,
        }
    }
}

/// `p(CA_l | CA_r)` restricted to the label grid, rows over real areas.
#[derive(Debug, Clone, PartialEq)]
pub struct Likelihood {
    /// Probability that the real tree is not labeled at all.
    pub missed: Vec<f64>,
    /// `rows[r][l]`: probability of label area `l` given real area `r`.
    pub rows: Vec<Vec<f64>>,
}

pub fn likelihood(params: &LikelihoodParams, real: &CaGrid, label: &CaGrid) -> Result<Likelihood> {
    params.validate()?;
    let mut missed = Vec::with_capacity(real.len());
    let mut rows = Vec::with_capacity(real.len());
    for &s in real.values() {
        let mut row = vec![0.0; label.len()];
        let mut add = |target: f64, w: f64| {
            if let Some(j) = label.snap(target) {
                row[j] += w;
            }
        };
        add(s, params.p_identity);
        for k in 2..=SUPPORT_MAX {
            add(k as f64 * s, params.merge_term(k));
            add(s / k as f64, params.split_term(k));
        }
        let total = params.p_zero + row.iter().sum::<f64>();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::Degenerate(format!("likelihood row for CA {s} has no mass")));
        }
        row.iter_mut().for_each(|v| *v /= total);
        missed.push(params.p_zero / total);
        rows.push(row);
    }
    Ok(Likelihood { missed, rows })
}

/// Prior over real crown areas and the likelihood parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorModel {
    pub real_grid: CaGrid,
    pub prior: Vec<f64>,
    pub params: LikelihoodParams,
}

impl PosteriorModel {
    pub fn new(real_grid: CaGrid, prior: Vec<f64>, params: LikelihoodParams) -> Result<Self> {
        if prior.len() != real_grid.len() {
            return Err(Error::invalid(format!(
                "prior has {} bins, grid has {}",
                prior.len(),
                real_grid.len()
            )));
        }
        if prior.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::invalid("prior probabilities must be finite and >= 0"));
        }
        let total: f64 = prior.iter().sum();
        if total <= 0.0 {
            return Err(Error::invalid("prior has no mass"));
        }
        let prior = prior.into_iter().map(|p| p / total).collect();
        Ok(PosteriorModel {
            real_grid,
            prior,
            params,
        })
    }

    /// Uniform prior over `real_grid`.
    pub fn flat(real_grid: CaGrid, params: LikelihoodParams) -> Result<Self> {
        let n = real_grid.len();
        PosteriorModel::new(real_grid, vec![1.0; n], params)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Posterior {
    pub real_grid: CaGrid,
    pub label_grid: CaGrid,
    /// `columns[l][r]`: `p(CA_r = r | CA_l = l)`; each column sums to 1.
    pub columns: Vec<Vec<f64>>,
}

/// Bayes posterior for every labeled area of `label_grid`.
pub fn posterior_ca(model: &PosteriorModel, label_grid: &CaGrid) -> Result<Posterior> {
    let lik = likelihood(&model.params, &model.real_grid, label_grid)?;
    let columns = (0..label_grid.len())
        .map(|l| {
            let mut col: Vec<f64> = lik.rows.iter().zip(&model.prior).map(|(row, p)| row[l] * p).collect();
            let total: f64 = col.iter().sum();
            if total <= 0.0 {
                return Err(Error::Degenerate(format!(
                    "labeled CA {} is unreachable from the real grid",
                    label_grid.values()[l]
                )));
            }
            col.iter_mut().for_each(|v| *v /= total);
            Ok(col)
        })
        .collect::<Result<_>>()?;
    Ok(Posterior {
        real_grid: model.real_grid.clone(),
        label_grid: label_grid.clone(),
        columns,
    })
}

/// Shannon entropy in nats.
pub fn entropy(p: &[f64]) -> f64 {
    -p.iter().filter(|&&v| v > 0.0).map(|&v| v * v.ln()).sum::<f64>()
}

/// Entropy of each posterior column.
pub fn posterior_entropy(posterior: &Posterior) -> Vec<f64> {
    posterior.columns.iter().map(|c| entropy(c)).collect()
}

/// Histogram of crown areas from measured crown diameters: each diameter is
/// converted to an area and counted at its snapped grid point. Returns the
/// normalized prior and the number of diameters that fell off the grid.
pub fn prior_from_diameters(diameters: &[f64], grid: &CaGrid) -> Result<(Vec<f64>, usize)> {
    let mut counts = vec![0.0; grid.len()];
    let mut dropped = 0;
    for &cd in diameters {
        match grid.snap(cd_to_ca(cd)?) {
            Some(i) => counts[i] += 1.0,
            None => dropped += 1,
        }
    }
    let total: f64 = counts.iter().sum();
    if total == 0.0 {
        return Err(Error::invalid("no crown diameter falls on the grid"));
    }
    counts.iter_mut().for_each(|c| *c /= total);
    Ok((counts, dropped))
}
