use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::RasterSpec;
use crate::heatmap::grid::Heatmap;

/// A test-time augmentation applied to the input raster before inference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    /// Mirror left-right.
    FlipH,
    /// Mirror top-bottom.
    FlipV,
    /// Counter-clockwise rotation by `k` quarter turns, as displayed with
    /// row 0 on top.
    Rot90(u8),
    /// Resize by a factor, rounding the pixel dimensions; the resolution is
    /// divided by the same factor.
    Rescale(f64),
}

impl Transform {
    /// Forward application.
    pub fn apply(&self, hm: &Heatmap) -> Result<Heatmap> {
        match *self {
            Transform::FlipH => Ok(remap(hm, hm.width(), hm.height(), hm.spec().resolution, |c, r, w, _| (w - 1 - c, r))),
            Transform::FlipV => Ok(remap(hm, hm.width(), hm.height(), hm.spec().resolution, |c, r, _, h| (c, h - 1 - r))),
            Transform::Rot90(k) => Ok(rotate(hm, k % 4)),
            Transform::Rescale(f) => {
                crate::error::ensure_positive("rescale factor", f)?;
                let w = (hm.width() as f64 * f).round().max(1.0) as usize;
                let h = (hm.height() as f64 * f).round().max(1.0) as usize;
                resample(hm, w, h, hm.spec().resolution / f)
            }
        }
    }

    /// Maps `hm`, produced under this transform, back to the input frame of
    /// size `target`.
    fn invert(&self, hm: &Heatmap, target: (usize, usize, f64)) -> Result<Heatmap> {
        match *self {
            Transform::FlipH | Transform::FlipV => self.apply(hm),
            Transform::Rot90(k) => Ok(rotate(hm, (4 - k % 4) % 4)),
            Transform::Rescale(_) => resample(hm, target.0, target.1, target.2),
        }
    }

    // frame (width, height, resolution) after applying the transform
    fn forward_frame(&self, frame: (usize, usize, f64)) -> (usize, usize, f64) {
        let (w, h, res) = frame;
        match *self {
            Transform::FlipH | Transform::FlipV => frame,
            Transform::Rot90(k) if k % 2 == 1 => (h, w, res),
            Transform::Rot90(_) => frame,
            Transform::Rescale(f) => (
                (w as f64 * f).round().max(1.0) as usize,
                (h as f64 * f).round().max(1.0) as usize,
                res / f,
            ),
        }
    }
}

// output pixel (c, r) takes input pixel src(c, r, in_w, in_h)
fn remap(hm: &Heatmap, w: usize, h: usize, res: f64, src: impl Fn(usize, usize, usize, usize) -> (usize, usize)) -> Heatmap {
    let (iw, ih) = (hm.width(), hm.height());
    let spec = RasterSpec::new(w, h, res, hm.spec().origin).expect("dimensions derive from a valid raster");
    let mut out = Heatmap::zeros(spec);
    for r in 0..h {
        for c in 0..w {
            let (sc, sr) = src(c, r, iw, ih);
            out.data_mut()[r * w + c] = hm.get(sc, sr);
        }
    }
    out
}

fn rotate(hm: &Heatmap, k: u8) -> Heatmap {
    let res = hm.spec().resolution;
    let (w, h) = (hm.width(), hm.height());
    match k {
        0 => hm.clone(),
        // the top-right input corner lands top-left
        1 => remap(hm, h, w, res, |c, r, iw, _| (iw - 1 - r, c)),
        2 => remap(hm, w, h, res, |c, r, iw, ih| (iw - 1 - c, ih - 1 - r)),
        _ => remap(hm, h, w, res, |c, r, _, ih| (r, ih - 1 - c)),
    }
}

/// Bilinear resampling with pixel centers aligned at half-pixel offsets.
fn resample(hm: &Heatmap, w: usize, h: usize, res: f64) -> Result<Heatmap> {
    let spec = RasterSpec::new(w, h, res, hm.spec().origin)?;
    let (iw, ih) = (hm.width(), hm.height());
    let sx = iw as f64 / w as f64;
    let sy = ih as f64 / h as f64;
    let axis = |dst: usize, scale: f64, n: usize| -> (usize, usize, f64) {
        let x = ((dst as f64 + 0.5) * scale - 0.5).clamp(0.0, (n - 1) as f64);
        let x0 = x.floor() as usize;
        let x1 = (x0 + 1).min(n - 1);
        (x0, x1, x - x0 as f64)
    };
    let mut data = Vec::with_capacity(spec.len());
    for r in 0..h {
        let (r0, r1, fy) = axis(r, sy, ih);
        for c in 0..w {
            let (c0, c1, fx) = axis(c, sx, iw);
            let top = hm.get(c0, r0) as f64 * (1.0 - fx) + hm.get(c1, r0) as f64 * fx;
            let bottom = hm.get(c0, r1) as f64 * (1.0 - fx) + hm.get(c1, r1) as f64 * fx;
            data.push((top * (1.0 - fy) + bottom * fy) as f32);
        }
    }
    Heatmap::from_data(spec, data)
}

/// Averages predictions made under different augmentations. Each input
/// lists the transforms applied, in order, to the common input raster of
/// size `frame` (width, height, resolution); they are undone in reverse
/// order before the per-pixel mean.
pub fn merge_heatmaps(inputs: &[(Heatmap, Vec<Transform>)], frame: &RasterSpec) -> Result<Heatmap> {
    if inputs.is_empty() {
        return Err(Error::invalid("nothing to merge"));
    }
    let base = (frame.width, frame.height, frame.resolution);
    let mut sum = vec![0.0f64; frame.len()];
    for (i, (hm, transforms)) in inputs.iter().enumerate() {
        let mut frames = vec![base];
        for t in transforms {
            frames.push(t.forward_frame(*frames.last().expect("non-empty")));
        }
        let produced = frames.last().expect("non-empty");
        if (hm.width(), hm.height()) != (produced.0, produced.1) {
            return Err(Error::invalid(format!(
                "input {i} is {}x{}, but its transforms produce {}x{}",
                hm.width(),
                hm.height(),
                produced.0,
                produced.1
            )));
        }
        let mut cur = hm.clone();
        for (t, before) in transforms.iter().zip(&frames).rev() {
            cur = t.invert(&cur, *before)?;
        }
        for (acc, &v) in sum.iter_mut().zip(cur.data()) {
            *acc += v as f64;
        }
    }
    let n = inputs.len() as f64;
    Heatmap::from_data(*frame, sum.into_iter().map(|s| (s / n) as f32).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heatmap::grid::pixel_grid;

    fn ramp(w: usize, h: usize) -> Heatmap {
        let spec = pixel_grid(w, h, 0.5).unwrap();
        let data = (0..w * h).map(|i| i as f32 / (w * h) as f32).collect();
        Heatmap::from_data(spec, data).unwrap()
    }

    #[test]
    fn identical_copies() {
        let a = ramp(6, 4);
        let m = merge_heatmaps(&[(a.clone(), vec![]), (a.clone(), vec![])], a.spec()).unwrap();
        assert_eq!(m, a);
    }

    #[test]
    fn declared_flips_and_rotations_invert_exactly() {
        let a = ramp(6, 4);
        for t in [Transform::FlipH, Transform::FlipV, Transform::Rot90(1), Transform::Rot90(2), Transform::Rot90(3)] {
            let seen = t.apply(&a).unwrap();
            let m = merge_heatmaps(&[(a.clone(), vec![]), (seen, vec![t])], a.spec()).unwrap();
            assert_eq!(m, a, "{t:?}");
        }
        let chain = vec![Transform::Rot90(1), Transform::FlipH];
        let mut seen = a.clone();
        for t in &chain {
            seen = t.apply(&seen).unwrap();
        }
        assert_eq!(merge_heatmaps(&[(seen, chain)], a.spec()).unwrap(), a);
    }

    #[test]
    fn rotation_corner_convention() {
        let a = ramp(3, 2);
        let r = Transform::Rot90(1).apply(&a).unwrap();
        assert_eq!((r.width(), r.height()), (2, 3));
        assert_eq!(r.get(0, 0), a.get(2, 0));
        assert_eq!(r.get(0, 2), a.get(0, 0));
    }

    #[test]
    fn mean_of_constants() {
        let spec = pixel_grid(5, 5, 1.0).unwrap();
        let lo = Heatmap::from_data(spec, vec![0.4; 25]).unwrap();
        let hi = Heatmap::from_data(spec, vec![0.8; 25]).unwrap();
        let m = merge_heatmaps(&[(lo, vec![]), (hi, vec![])], &spec).unwrap();
        assert!(m.data().iter().all(|&v| (v - 0.6).abs() < 1e-6));
    }

    #[test]
    fn rescale_round_trip_of_constant() {
        let spec = pixel_grid(8, 8, 1.0).unwrap();
        let c = Heatmap::from_data(spec, vec![0.3; 64]).unwrap();
        let up = Transform::Rescale(2.0).apply(&c).unwrap();
        assert_eq!((up.width(), up.height()), (16, 16));
        assert_eq!(up.spec().resolution, 0.5);
        let m = merge_heatmaps(&[(up, vec![Transform::Rescale(2.0)])], &spec).unwrap();
        assert!(m.data().iter().all(|&v| (v - 0.3).abs() < 1e-6));
    }

    #[test]
    fn mismatched_sizes_are_rejected() {
        let a = ramp(6, 4);
        assert!(merge_heatmaps(&[(a.clone(), vec![Transform::Rot90(1)])], a.spec()).is_err());
    }
}
