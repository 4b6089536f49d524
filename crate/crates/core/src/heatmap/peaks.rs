use serde::Serialize;

use crate::heatmap::grid::Heatmap;

/// A detected local maximum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    pub col: usize,
    pub row: usize,
    pub value: f64,
}

/// Pixels above `threshold` that are the maximum of their `window × window`
/// neighborhood. Ties are ordered row-major, so among equal values only the
/// earliest pixel in a window survives; a plateau wider than the window
/// still yields a single peak, its earliest pixel.
pub(crate) fn window_maxima(values: &[f64], width: usize, height: usize, window: usize, threshold: f64) -> Vec<Peak> {
    let half = window / 2;
    let mut survivors = Vec::new();
    for row in 0..height {
        for col in 0..width {
            let i = row * width + col;
            let v = values[i];
            if v <= threshold {
                continue;
            }
            let (r0, r1) = (row.saturating_sub(half), (row + half).min(height - 1));
            let (c0, c1) = (col.saturating_sub(half), (col + half).min(width - 1));
            let beaten = (r0..=r1).any(|r| {
                (c0..=c1).any(|c| {
                    let j = r * width + c;
                    let u = values[j];
                    u > v || (u == v && j < i)
                })
            });
            if !beaten {
                survivors.push(Peak { col, row, value: v });
            }
        }
    }
    dedupe_plateaus(values, width, height, survivors)
}

// survivors are in row-major order; keep the first on each 8-connected
// plateau of equal value
fn dedupe_plateaus(values: &[f64], width: usize, height: usize, survivors: Vec<Peak>) -> Vec<Peak> {
    let mut seen = vec![false; values.len()];
    let mut kept = Vec::with_capacity(survivors.len());
    let mut stack = Vec::new();
    for p in survivors {
        let start = p.row * width + p.col;
        if seen[start] {
            continue;
        }
        kept.push(p);
        seen[start] = true;
        stack.push(start);
        while let Some(i) = stack.pop() {
            let (c, r) = ((i % width) as i64, (i / width) as i64);
            for dr in -1..=1 {
                for dc in -1..=1 {
                    let (nc, nr) = (c + dc, r + dr);
                    if nc < 0 || nr < 0 || nc >= width as i64 || nr >= height as i64 {
                        continue;
                    }
                    let j = nr as usize * width + nc as usize;
                    if !seen[j] && values[j] == p.value {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
    }
    kept
}

/// Local maxima of `hm` above `threshold` in a `window`-pixel neighborhood.
/// The threshold is compared at the heatmap's `f32` precision.
pub fn nms_peaks(hm: &Heatmap, window: usize, threshold: f64) -> Vec<Peak> {
    let values: Vec<f64> = hm.data().iter().map(|&v| v as f64).collect();
    window_maxima(&values, hm.width(), hm.height(), window, threshold as f32 as f64)
}

/// Zero-normalized cross-correlation of two equally sized patches, `None`
/// when either has zero variance.
pub fn zncc(a: &[f64], b: &[f64]) -> Option<f64> {
    assert_eq!(a.len(), b.len(), "zncc needs patches of equal size");
    if a.is_empty() {
        return None;
    }
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (&x, &y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa <= 0.0 || sbb <= 0.0 {
        return None;
    }
    Some((sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heatmap::grid::pixel_grid;
    use approx::assert_relative_eq;

    fn map_with(points: &[(usize, usize, f32)]) -> Heatmap {
        let spec = pixel_grid(40, 40, 1.0).unwrap();
        let mut data = vec![0.0; spec.len()];
        for &(c, r, v) in points {
            data[spec.index(c, r)] = v;
        }
        Heatmap::from_data(spec, data).unwrap()
    }

    #[test]
    fn window_geometry() {
        assert!(nms_peaks(&map_with(&[]), 11, 0.6).is_empty());
        let near = nms_peaks(&map_with(&[(10, 10, 1.0), (15, 10, 1.0)]), 11, 0.6);
        assert_eq!(near.len(), 1);
        assert_eq!((near[0].col, near[0].row), (10, 10));
        let far = nms_peaks(&map_with(&[(10, 10, 1.0), (22, 10, 1.0)]), 11, 0.6);
        assert_eq!(far.len(), 2);
    }

    #[test]
    fn wide_plateau_yields_one_peak() {
        let pts: Vec<(usize, usize, f32)> = (2..38).map(|c| (c, 20, 0.9)).collect();
        let peaks = nms_peaks(&map_with(&pts), 5, 0.6);
        assert_eq!(peaks.len(), 1);
        assert_eq!((peaks[0].col, peaks[0].row), (2, 20));
    }

    #[test]
    fn threshold_is_strict() {
        assert!(nms_peaks(&map_with(&[(5, 5, 0.6)]), 11, 0.6).is_empty());
    }

    #[test]
    fn zncc_basics() {
        let a = [0.1, 0.5, 0.3, 0.9, 0.0];
        let neg: Vec<f64> = a.iter().map(|v| -v).collect();
        let affine: Vec<f64> = a.iter().map(|v| 3.0 * v + 2.0).collect();
        assert_relative_eq!(zncc(&a, &a).unwrap(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(zncc(&a, &neg).unwrap(), -1.0, epsilon = 1e-12);
        assert_relative_eq!(zncc(&a, &affine).unwrap(), 1.0, epsilon = 1e-12);
        assert_eq!(zncc(&a, &[0.2; 5]), None);
    }
}
