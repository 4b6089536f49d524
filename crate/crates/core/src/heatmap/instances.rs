use crate::error::Result;
use crate::geometry::{Mask, Point, RasterSpec, TreeRecord};
use crate::heatmap::bank::check_window;
use crate::heatmap::peaks::window_maxima;

pub const DEFAULT_W_MAX: usize = 15;
pub const DEFAULT_W_MAJ: usize = 23;

/// Instance map (`0` is background, instances are numbered from 1) and one
/// tree per instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Instances {
    pub spec: RasterSpec,
    pub labels: Vec<u32>,
    pub trees: Vec<TreeRecord>,
}

impl Instances {
    pub fn pixel_count(&self, instance: u32) -> usize {
        self.labels.iter().filter(|&&l| l == instance).count()
    }
}

// squared distance transform of a sampled function along one line
fn edt_1d(f: &[f64], out: &mut [f64], v: &mut [usize], z: &mut [f64]) {
    let n = f.len();
    let mut k = 0;
    v[0] = 0;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in 1..n {
        let qf = q as f64;
        let s = loop {
            let pf = v[k] as f64;
            let s = ((f[q] + qf * qf) - (f[v[k]] + pf * pf)) / (2.0 * qf - 2.0 * pf);
            // z[0] is -inf, so k never underflows
            if s <= z[k] {
                k -= 1;
            } else {
                break s;
            }
        };
        k += 1;
        v[k] = q;
        z[k] = s;
        z[k + 1] = f64::INFINITY;
    }
    k = 0;
    for (q, o) in out.iter_mut().enumerate() {
        let qf = q as f64;
        while z[k + 1] < qf {
            k += 1;
        }
        let d = qf - v[k] as f64;
        *o = d * d + f[v[k]];
    }
}

/// Exact Euclidean distance, in pixels, from every positive pixel to the
/// nearest background pixel. Pixels outside the raster count as background.
pub fn distance_transform(mask: &Mask) -> Vec<f64> {
    let spec = mask.spec();
    let (w, h) = (spec.width + 2, spec.height + 2);
    // exceeds any squared in-grid distance yet keeps q² terms exact
    let far = ((w + h) * (w + h)) as f64;
    let mut grid = vec![0.0; w * h];
    for r in 0..spec.height {
        for c in 0..spec.width {
            if mask.get(c, r) {
                grid[(r + 1) * w + c + 1] = far;
            }
        }
    }
    let n = w.max(h);
    let (mut f, mut out, mut v, mut z) = (vec![0.0; n], vec![0.0; n], vec![0usize; n], vec![0.0; n + 1]);
    for c in 0..w {
        for r in 0..h {
            f[r] = grid[r * w + c];
        }
        edt_1d(&f[..h], &mut out[..h], &mut v, &mut z);
        for r in 0..h {
            grid[r * w + c] = out[r];
        }
    }
    for r in 0..h {
        f[..w].copy_from_slice(&grid[r * w..(r + 1) * w]);
        edt_1d(&f[..w], &mut out[..w], &mut v, &mut z);
        grid[r * w..(r + 1) * w].copy_from_slice(&out[..w]);
    }
    let mut dist = Vec::with_capacity(spec.len());
    for r in 0..spec.height {
        for c in 0..spec.width {
            dist.push(grid[(r + 1) * w + c + 1].sqrt());
        }
    }
    dist
}

/// Splits a binary crown mask into tree instances: candidate centers at
/// local maxima of the distance transform (window `w_max`), every positive
/// pixel assigned to its nearest candidate, then a `w_maj` majority filter
/// that only relabels positive pixels.
pub fn separate_instances(mask: &Mask, w_max: usize, w_maj: usize, patch_id: &str) -> Result<Instances> {
    check_window("w_max", w_max)?;
    check_window("w_maj", w_maj)?;
    let spec = *mask.spec();
    let (w, h) = (spec.width, spec.height);
    let dist = distance_transform(mask);
    let candidates = window_maxima(&dist, w, h, w_max, 0.0);

    let mut labels = vec![0u32; spec.len()];
    for r in 0..h {
        for c in 0..w {
            if !mask.get(c, r) {
                continue;
            }
            let nearest = candidates
                .iter()
                .enumerate()
                .min_by_key(|(_, p)| {
                    let (dc, dr) = (p.col as i64 - c as i64, p.row as i64 - r as i64);
                    dc * dc + dr * dr
                })
                .map(|(i, _)| i as u32 + 1)
                .expect("a positive pixel implies a candidate");
            labels[r * w + c] = nearest;
        }
    }

    let labels = majority_filter(&labels, w, h, w_maj, candidates.len());

    // renumber surviving instances in candidate order
    let n = candidates.len();
    let (mut count, mut sx, mut sy) = (vec![0usize; n + 1], vec![0.0; n + 1], vec![0.0; n + 1]);
    for r in 0..h {
        for c in 0..w {
            let l = labels[r * w + c] as usize;
            if l > 0 {
                let p = spec.pixel_center(c, r);
                count[l] += 1;
                sx[l] += p.x;
                sy[l] += p.y;
            }
        }
    }
    let mut remap = vec![0u32; n + 1];
    let mut trees = Vec::new();
    let area_px = spec.resolution * spec.resolution;
    for l in 1..=n {
        if count[l] == 0 {
            continue;
        }
        remap[l] = trees.len() as u32 + 1;
        let k = count[l] as f64;
        trees.push(TreeRecord::new(patch_id, Point::new(sx[l] / k, sy[l] / k), k * area_px)?);
    }
    let labels = labels.into_iter().map(|l| remap[l as usize]).collect();
    Ok(Instances { spec, labels, trees })
}

// Most frequent instance among positive pixels of each window; a tie keeps
// the current label when it is among the leaders, else the smallest.
fn majority_filter(labels: &[u32], w: usize, h: usize, window: usize, n: usize) -> Vec<u32> {
    let half = window / 2;
    let mut counts = vec![0u32; n + 1];
    let mut touched = Vec::new();
    let mut out = labels.to_vec();
    for r in 0..h {
        for c in 0..w {
            let own = labels[r * w + c];
            if own == 0 {
                continue;
            }
            for rr in r.saturating_sub(half)..=(r + half).min(h - 1) {
                for cc in c.saturating_sub(half)..=(c + half).min(w - 1) {
                    let l = labels[rr * w + cc];
                    if l > 0 {
                        if counts[l as usize] == 0 {
                            touched.push(l);
                        }
                        counts[l as usize] += 1;
                    }
                }
            }
            let top = touched.iter().map(|&l| counts[l as usize]).max().unwrap_or(0);
            out[r * w + c] = if counts[own as usize] == top {
                own
            } else {
                touched
                    .iter()
                    .copied()
                    .filter(|&l| counts[l as usize] == top)
                    .min()
                    .expect("own pixel is counted")
            };
            for l in touched.drain(..) {
                counts[l as usize] = 0;
            }
        }
    }
    out
}
