use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{cd_to_ca, TreeRecord};
use crate::heatmap::bank::{check_window, FilterBank};
use crate::heatmap::grid::{Heatmap, SigmaOfCd, SizeMap};
use crate::heatmap::peaks::{nms_peaks, zncc, Peak};

/// Peak-finding and size-estimation settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecodeParams {
    pub nms_window: usize,
    pub peak_threshold: f64,
    pub patch_window: usize,
}

impl DecodeParams {
    /// Gaussian heatmap decoding: 11 px NMS, threshold 0.6, 25 px patches.
    pub fn heatmap() -> Self {
        DecodeParams {
            nms_window: 11,
            peak_threshold: 0.6,
            patch_window: 25,
        }
    }

    /// Center heatmap plus size map: same windows, threshold 0.5.
    pub fn centernet() -> Self {
        DecodeParams {
            peak_threshold: 0.5,
            ..DecodeParams::heatmap()
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_window("nms window", self.nms_window)?;
        check_window("patch window", self.patch_window)?;
        if !(self.peak_threshold > 0.0 && self.peak_threshold < 1.0) {
            return Err(Error::invalid(format!(
                "peak threshold must be in (0, 1), got {}",
                self.peak_threshold
            )));
        }
        Ok(())
    }
}

impl Default for DecodeParams {
    fn default() -> Self {
        DecodeParams::heatmap()
    }
}

/// Decoded trees and the peaks that could not be turned into one.
#[derive(Debug, Clone, PartialEq)]
pub struct Decoded {
    pub trees: Vec<TreeRecord>,
    pub peaks: Vec<Peak>,
    /// Peaks whose size could not be determined: a flat patch for heatmap
    /// decoding, a non-positive size for size-map decoding.
    pub dropped: usize,
}

/// Index of the best-correlated filter for a peak, or `None` when the
/// heatmap patch is flat. Near the border, patch and kernels are cropped to
/// the same valid region.
pub fn best_filter(hm: &Heatmap, bank: &FilterBank, col: usize, row: usize) -> Option<usize> {
    let w = bank.window();
    let half = w / 2;
    let c0 = col.saturating_sub(half);
    let r0 = row.saturating_sub(half);
    let c1 = (col + half).min(hm.width() - 1);
    let r1 = (row + half).min(hm.height() - 1);
    let patch: Vec<f64> = (r0..=r1)
        .flat_map(|r| (c0..=c1).map(move |c| (c, r)))
        .map(|(c, r)| hm.get(c, r) as f64)
        .collect();
    // kernel coordinates of (c0, r0)
    let (kc0, kr0) = (c0 + half - col, r0 + half - row);
    let mut best: Option<(usize, f64)> = None;
    for i in 0..bank.len() {
        let k = bank.kernel(i);
        let cropped: Vec<f64> = (0..=r1 - r0)
            .flat_map(|dr| (0..=c1 - c0).map(move |dc| (dc, dr)))
            .map(|(dc, dr)| k[(kr0 + dr) * w + kc0 + dc])
            .collect();
        if let Some(score) = zncc(&patch, &cropped) {
            if best.is_none_or(|(_, b)| score > b) {
                best = Some((i, score));
            }
        }
    }
    best.map(|(i, _)| i)
}

/// Trees from a Gaussian heatmap: NMS peaks, sized by the filter with the
/// highest ZNCC against the surrounding patch.
pub fn decode_heatmap(
    hm: &Heatmap,
    bank: &FilterBank,
    params: &DecodeParams,
    mapping: &SigmaOfCd,
    patch_id: &str,
) -> Result<Decoded> {
    params.validate()?;
    if bank.window() != params.patch_window {
        return Err(Error::invalid(format!(
            "filter bank window {} differs from patch window {}",
            bank.window(),
            params.patch_window
        )));
    }
    let spec = hm.spec();
    let peaks = nms_peaks(hm, params.nms_window, params.peak_threshold);
    let mut trees = Vec::with_capacity(peaks.len());
    let mut dropped = 0;
    for p in &peaks {
        let Some(i) = best_filter(hm, bank, p.col, p.row) else {
            dropped += 1;
            continue;
        };
        let cd_m = mapping.cd_px(bank.sigmas()[i]) * spec.resolution;
        trees.push(TreeRecord::new(patch_id, spec.pixel_center(p.col, p.row), cd_to_ca(cd_m)?)?.with_score(p.value)?);
    }
    Ok(Decoded { trees, peaks, dropped })
}

/// Trees from a center heatmap and a crown-diameter map.
pub fn decode_centernet(hm: &Heatmap, sizes: &SizeMap, params: &DecodeParams, patch_id: &str) -> Result<Decoded> {
    params.validate()?;
    let spec = hm.spec();
    if !spec.same_grid(sizes.spec()) {
        return Err(Error::invalid("heatmap and size map must share a raster"));
    }
    let peaks = nms_peaks(hm, params.nms_window, params.peak_threshold);
    let mut trees = Vec::with_capacity(peaks.len());
    let mut dropped = 0;
    for p in &peaks {
        let Some(cd_px) = sizes.cd_px(p.col, p.row) else {
            dropped += 1;
            continue;
        };
        let ca = cd_to_ca(cd_px * spec.resolution)?;
        trees.push(TreeRecord::new(patch_id, spec.pixel_center(p.col, p.row), ca)?.with_score(p.value)?);
    }
    Ok(Decoded { trees, peaks, dropped })
}
