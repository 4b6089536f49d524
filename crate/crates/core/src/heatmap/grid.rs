use crate::error::{Error, Result};
use crate::geometry::{Mask, Point, RasterSpec};

/// Single-channel raster in `[0, 1]`. Row 0 is the top row; patch `y`
/// grows downward, so pixel `(col, row)` is centered at
/// `origin + ((col + ½)·res, (row + ½)·res)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Heatmap {
    spec: RasterSpec,
    data: Vec<f32>,
}

impl Heatmap {
    pub fn zeros(spec: RasterSpec) -> Self {
        Heatmap {
            spec,
            data: vec![0.0; spec.len()],
        }
    }

    /// Values are clamped into `[0, 1]`; non-finite values are rejected.
    pub fn from_data(spec: RasterSpec, mut data: Vec<f32>) -> Result<Self> {
        check_len(&spec, data.len())?;
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("heatmap values must be finite"));
        }
        data.iter_mut().for_each(|v| *v = v.clamp(0.0, 1.0));
        Ok(Heatmap { spec, data })
    }

    pub fn spec(&self) -> &RasterSpec {
        &self.spec
    }

    pub fn width(&self) -> usize {
        self.spec.width
    }

    pub fn height(&self) -> usize {
        self.spec.height
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn get(&self, col: usize, row: usize) -> f32 {
        self.data[self.spec.index(col, row)]
    }

    pub(crate) fn data_mut(&mut self) -> &mut [f32] {
        &mut self.data
    }

    /// Adds `c` to every value, clamping into `[0, 1]`.
    pub fn shifted(&self, c: f32) -> Heatmap {
        Heatmap {
            spec: self.spec,
            data: self.data.iter().map(|v| (v + c).clamp(0.0, 1.0)).collect(),
        }
    }

    /// Pixels above `threshold` as a mask.
    pub fn to_mask(&self, threshold: f32) -> Mask {
        Mask::from_data(self.spec, self.data.iter().map(|&v| v > threshold).collect())
            .expect("same length")
    }

    pub fn from_mask(mask: &Mask) -> Heatmap {
        Heatmap {
            spec: *mask.spec(),
            data: mask.data().iter().map(|&b| if b { 1.0 } else { 0.0 }).collect(),
        }
    }
}

/// Crown diameters in pixels; negative entries are invalid.
#[derive(Debug, Clone, PartialEq)]
pub struct SizeMap {
    spec: RasterSpec,
    data: Vec<f32>,
}

impl SizeMap {
    pub fn new(spec: RasterSpec, data: Vec<f32>) -> Result<Self> {
        check_len(&spec, data.len())?;
        Ok(SizeMap { spec, data })
    }

    pub fn spec(&self) -> &RasterSpec {
        &self.spec
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    /// Crown diameter at a pixel, `None` when the entry is not a positive
    /// finite number.
    pub fn cd_px(&self, col: usize, row: usize) -> Option<f64> {
        let v = self.data[self.spec.index(col, row)];
        (v.is_finite() && v > 0.0).then_some(v as f64)
    }
}

fn check_len(spec: &RasterSpec, len: usize) -> Result<()> {
    if len != spec.len() {
        return Err(Error::invalid(format!(
            "raster {}x{} needs {} values, got {len}",
            spec.width,
            spec.height,
            spec.len()
        )));
    }
    Ok(())
}

/// Raster anchored at the patch origin.
pub fn pixel_grid(width: usize, height: usize, resolution: f64) -> Result<RasterSpec> {
    RasterSpec::new(width, height, resolution, Point::default())
}

/// Mapping between crown diameter and Gaussian standard deviation, both in
/// pixels: `σ = CD / cd_per_sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaOfCd {
    pub cd_per_sigma: f64,
}

impl Default for SigmaOfCd {
    fn default() -> Self {
        SigmaOfCd { cd_per_sigma: 4.0 }
    }
}

impl SigmaOfCd {
    pub fn new(cd_per_sigma: f64) -> Result<Self> {
        crate::error::ensure_positive("cd_per_sigma", cd_per_sigma)?;
        Ok(SigmaOfCd { cd_per_sigma })
    }

    pub fn sigma_px(&self, cd_px: f64) -> f64 {
        cd_px / self.cd_per_sigma
    }

    pub fn cd_px(&self, sigma_px: f64) -> f64 {
        sigma_px * self.cd_per_sigma
    }
}
