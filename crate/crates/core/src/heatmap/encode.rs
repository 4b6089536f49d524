use crate::error::{Error, Result};
use crate::geometry::{RasterSpec, TreeRecord};
use crate::heatmap::bank::gaussian;
use crate::heatmap::grid::{Heatmap, SigmaOfCd};

/// Gaussians are truncated beyond this many standard deviations.
pub const TRUNCATION_SIGMAS: f64 = 4.0;

/// Target heatmap for `trees`: one unit-peak Gaussian per tree centered on
/// the pixel containing its center, overlaps combined by maximum. With
/// `clip_to_polygons`, a tree contributes only inside its polygon (pixel
/// centers), when it has one.
pub fn encode(trees: &[TreeRecord], spec: &RasterSpec, mapping: &SigmaOfCd, clip_to_polygons: bool) -> Result<Heatmap> {
    let mut hm = Heatmap::zeros(*spec);
    let (w, h) = (spec.width as i64, spec.height as i64);
    for tree in trees {
        let (c0, r0) = spec.pixel_of(tree.center()).ok_or_else(|| {
            Error::invalid(format!(
                "tree center ({}, {}) lies outside the {}x{} raster",
                tree.center().x,
                tree.center().y,
                spec.width,
                spec.height
            ))
        })?;
        let sigma = mapping.sigma_px(tree.crown_diameter() / spec.resolution);
        let reach = (TRUNCATION_SIGMAS * sigma).ceil() as i64;
        let cutoff = (TRUNCATION_SIGMAS * sigma).powi(2);
        let clip = tree.polygon().filter(|_| clip_to_polygons);
        let (c0, r0) = (c0 as i64, r0 as i64);
        for r in (r0 - reach).max(0)..=(r0 + reach).min(h - 1) {
            for c in (c0 - reach).max(0)..=(c0 + reach).min(w - 1) {
                let d2 = ((c - c0).pow(2) + (r - r0).pow(2)) as f64;
                if d2 > cutoff {
                    continue;
                }
                if let Some(poly) = clip {
                    if !poly.contains(spec.pixel_center(c as usize, r as usize)) {
                        continue;
                    }
                }
                let v = gaussian(d2, sigma) as f32;
                let i = spec.index(c as usize, r as usize);
                let cell = &mut hm.data_mut()[i];
                *cell = cell.max(v);
            }
        }
    }
    Ok(hm)
}
