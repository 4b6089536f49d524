use crate::error::{Error, Result};
use crate::geometry::TreeRecord;

/// Weights of the label/prediction matching cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostParams {
    /// Weight of the crown-area term.
    pub lambda_size: f64,
    /// Distance threshold as a multiple of the crown diameter.
    pub gamma: f64,
}

impl CostParams {
    pub const DEFAULT_LAMBDA_SIZE: f64 = 0.1;

    pub fn new(lambda_size: f64, gamma: f64) -> Result<Self> {
        if !(lambda_size.is_finite() && lambda_size >= 0.0) {
            return Err(Error::invalid(format!(
                "lambda_size must be finite and >= 0, got {lambda_size}"
            )));
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::NonPositive {
                what: "gamma",
                value: gamma,
            });
        }
        Ok(CostParams { lambda_size, gamma })
    }

    pub fn with_gamma(gamma: f64) -> Result<Self> {
        CostParams::new(Self::DEFAULT_LAMBDA_SIZE, gamma)
    }
}

/// Whose crown diameter scales the distance threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdSide {
    Label,
    Prediction,
}

/// Matching cost of a label/prediction pair: center distance plus the
/// weighted absolute crown-area difference, or `None` when the distance is
/// not strictly below `gamma` times the chosen crown diameter.
pub fn pairwise_cost(
    label: &TreeRecord,
    pred: &TreeRecord,
    params: &CostParams,
    threshold_on: ThresholdSide,
) -> Option<f64> {
    let d = label.center().distance(pred.center());
    let cd = match threshold_on {
        ThresholdSide::Label => label.crown_diameter(),
        ThresholdSide::Prediction => pred.crown_diameter(),
    };
    if d < params.gamma * cd {
        Some(d + params.lambda_size * (label.crown_area() - pred.crown_area()).abs())
    } else {
        None
    }
}

/// Dense `rows × cols` cost grid; `None` marks an infeasible pair.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Option<f64>>,
}

impl CostMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Option<f64>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::invalid(format!(
                "cost matrix {rows}x{cols} needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(bad) = data.iter().flatten().find(|c| !(c.is_finite() && **c >= 0.0)) {
            return Err(Error::invalid(format!(
                "feasible costs must be finite and non-negative, got {bad}"
            )));
        }
        Ok(CostMatrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Option<f64>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        CostMatrix::new(rows, cols, data)
    }

    /// Label × prediction matrix of [`pairwise_cost`].
    pub fn build(
        labels: &[TreeRecord],
        preds: &[TreeRecord],
        params: &CostParams,
        threshold_on: ThresholdSide,
    ) -> Self {
        let mut data = Vec::with_capacity(labels.len() * preds.len());
        for l in labels {
            for p in preds {
                data.push(pairwise_cost(l, p, params, threshold_on));
            }
        }
        CostMatrix {
            rows: labels.len(),
            cols: preds.len(),
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> Option<f64> {
        self.data[row * self.cols + col]
    }

    /// Matrix with rows repeated `k` times: row `c·rows + i` is a copy of `i`.
    pub fn tile_rows(&self, k: usize) -> CostMatrix {
        let mut data = Vec::with_capacity(self.data.len() * k);
        for _ in 0..k {
            data.extend_from_slice(&self.data);
        }
        CostMatrix {
            rows: self.rows * k,
            cols: self.cols,
            data,
        }
    }

    /// Matrix with columns repeated `k` times: column `c·cols + j` is a copy of `j`.
    pub fn tile_cols(&self, k: usize) -> CostMatrix {
        let mut data = Vec::with_capacity(self.data.len() * k);
        for r in 0..self.rows {
            let row = &self.data[r * self.cols..(r + 1) * self.cols];
            for _ in 0..k {
                data.extend_from_slice(row);
            }
        }
        CostMatrix {
            rows: self.rows,
            cols: self.cols * k,
            data,
        }
    }

    pub fn scaled(&self, factor: f64) -> CostMatrix {
        CostMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|c| c.map(|v| v * factor)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{cd_to_ca, Point};
    use approx::assert_relative_eq;

    fn tree(x: f64, y: f64, ca: f64) -> TreeRecord {
        TreeRecord::new("p", Point::new(x, y), ca).unwrap()
    }

    #[test]
    fn identical_pair_costs_nothing() {
        let t = tree(1.0, 2.0, 30.0);
        let params = CostParams::with_gamma(1.0).unwrap();
        assert_eq!(pairwise_cost(&t, &t, &params, ThresholdSide::Label), Some(0.0));
    }

    #[test]
    fn hand_evaluated_cost() {
        let label = tree(0.0, 0.0, cd_to_ca(10.0).unwrap());
        let pred = tree(3.0, 4.0, 50.0);
        let params = CostParams::new(0.1, 1.0).unwrap();
        let c = pairwise_cost(&label, &pred, &params, ThresholdSide::Label).unwrap();
        assert_relative_eq!(c, 7.85398, epsilon = 1e-5);
    }

    #[test]
    fn threshold_is_strict() {
        // label CD = 2, prediction exactly 2 m away at gamma = 1
        let label = tree(0.0, 0.0, std::f64::consts::PI);
        let pred = tree(2.0, 0.0, std::f64::consts::PI);
        let params = CostParams::with_gamma(1.0).unwrap();
        assert_eq!(pairwise_cost(&label, &pred, &params, ThresholdSide::Label), None);
        let looser = CostParams::with_gamma(1.0001).unwrap();
        assert!(pairwise_cost(&label, &pred, &looser, ThresholdSide::Label).is_some());
    }

    #[test]
    fn threshold_side_switches_diameter() {
        let small_label = tree(0.0, 0.0, cd_to_ca(1.0).unwrap());
        let big_pred = tree(3.0, 0.0, cd_to_ca(8.0).unwrap());
        let params = CostParams::with_gamma(1.0).unwrap();
        assert!(pairwise_cost(&small_label, &big_pred, &params, ThresholdSide::Label).is_none());
        assert!(
            pairwise_cost(&small_label, &big_pred, &params, ThresholdSide::Prediction).is_some()
        );
    }

    #[test]
    fn params_validation() {
        assert!(CostParams::new(-0.1, 1.0).is_err());
        assert!(CostParams::new(0.1, 0.0).is_err());
        assert!(CostMatrix::new(1, 2, vec![Some(1.0)]).is_err());
        assert!(CostMatrix::new(1, 1, vec![Some(-1.0)]).is_err());
    }

    #[test]
    fn tiling_layout() {
        let m = CostMatrix::new(2, 2, vec![Some(1.0), None, Some(3.0), Some(4.0)]).unwrap();
        let r = m.tile_rows(2);
        assert_eq!((r.rows(), r.cols()), (4, 2));
        assert_eq!(r.get(2, 0), Some(1.0));
        assert_eq!(r.get(3, 1), Some(4.0));
        let c = m.tile_cols(3);
        assert_eq!((c.rows(), c.cols()), (2, 6));
        assert_eq!(c.get(0, 2), Some(1.0));
        assert_eq!(c.get(0, 5), None);
        assert_eq!(c.get(1, 4), Some(3.0));
    }
}
