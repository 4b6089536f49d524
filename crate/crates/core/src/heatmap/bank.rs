use crate::error::{Error, Result};

pub const DEFAULT_BANK_SIZE: usize = 48;
pub const DEFAULT_SIGMA_MIN: f64 = 0.3;
pub const DEFAULT_SIGMA_MAX: f64 = 25.0;

/// Log-spaced Gaussian templates, each rendered on a square `window` with
/// value 1 at the central pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterBank {
    sigmas: Vec<f64>,
    window: usize,
    kernels: Vec<Vec<f64>>,
}

impl FilterBank {
    pub fn sigmas(&self) -> &[f64] {
        &self.sigmas
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn len(&self) -> usize {
        self.sigmas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigmas.is_empty()
    }

    /// Row-major `window × window` kernel.
    pub fn kernel(&self, i: usize) -> &[f64] {
        &self.kernels[i]
    }

    /// Constant ratio between consecutive σ.
    pub fn step_ratio(&self) -> f64 {
        self.sigmas[1] / self.sigmas[0]
    }
}

/// Exponent of an isotropic Gaussian with peak 1, for a squared pixel
/// offset `d2`.
pub(crate) fn gaussian(d2: f64, sigma: f64) -> f64 {
    (-d2 / (2.0 * sigma * sigma)).exp()
}

pub fn build_filter_bank(n: usize, sigma_min: f64, sigma_max: f64, window: usize) -> Result<FilterBank> {
    if n < 2 {
        return Err(Error::invalid(format!("filter bank needs at least 2 filters, got {n}")));
    }
    if !(sigma_min > 0.0 && sigma_max > sigma_min && sigma_max.is_finite()) {
        return Err(Error::invalid(format!(
            "filter bank range must satisfy 0 < sigma_min < sigma_max, got [{sigma_min}, {sigma_max}]"
        )));
    }
    check_window("filter window", window)?;
    let ratio = sigma_max / sigma_min;
    let sigmas: Vec<f64> = (0..n)
        .map(|i| match i {
            0 => sigma_min,
            _ if i == n - 1 => sigma_max,
            _ => sigma_min * ratio.powf(i as f64 / (n - 1) as f64),
        })
        .collect();
    let half = (window / 2) as f64;
    let kernels = sigmas
        .iter()
        .map(|&s| {
            (0..window * window)
                .map(|k| {
                    let dx = (k % window) as f64 - half;
                    let dy = (k / window) as f64 - half;
                    gaussian(dx * dx + dy * dy, s)
                })
                .collect()
        })
        .collect();
    Ok(FilterBank {
        sigmas,
        window,
        kernels,
    })
}

/// Bank with 48 filters spanning σ ∈ [0.3, 25] px.
pub fn default_filter_bank(window: usize) -> Result<FilterBank> {
    build_filter_bank(DEFAULT_BANK_SIZE, DEFAULT_SIGMA_MIN, DEFAULT_SIGMA_MAX, window)
}

pub(crate) fn check_window(what: &str, w: usize) -> Result<()> {
    if w < 3 || w.is_multiple_of(2) {
        return Err(Error::invalid(format!("{what} must be odd and >= 3, got {w}")));
    }
    Ok(())
}
