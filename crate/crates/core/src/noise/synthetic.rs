//! Synthetic forests for simulations.

use rand::Rng;
use rand_distr::{Distribution, LogNormal};

use crate::error::{Error, Result};
use crate::geometry::{cd_to_ca, Point, TreeRecord};

/// Crown-diameter distribution of synthetic trees: log-normal, truncated to
/// `[min_cd, max_cd]` by rejection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrownSizes {
    /// Median crown diameter, m.
    pub median_cd: f64,
    /// Standard deviation of `ln CD`.
    pub log_sd: f64,
    pub min_cd: f64,
    pub max_cd: f64,
}

impl Default for CrownSizes {
    fn default() -> Self {
        CrownSizes {
            median_cd: 6.0,
            log_sd: 0.5,
            min_cd: 2.0,
            max_cd: 20.0,
        }
    }
}

impl CrownSizes {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        if !(self.min_cd > 0.0 && self.min_cd <= self.max_cd) {
            return Err(Error::invalid("crown diameter range must satisfy 0 < min <= max"));
        }
        let dist = LogNormal::new(self.median_cd.ln(), self.log_sd)
            .map_err(|e| Error::invalid(format!("crown size distribution: {e}")))?;
        loop {
            let cd = dist.sample(rng);
            if (self.min_cd..=self.max_cd).contains(&cd) {
                return Ok(cd);
            }
        }
    }
}

/// Places disks of the given diameters uniformly at random in
/// `[0, width] × [0, height]`, fully inside, such that any two centers are
/// at least `min_distance(cd_a, cd_b)` apart. Larger crowns go first; each
/// tree gets `max_tries` attempts.
pub fn scatter_disjoint<R: Rng + ?Sized>(
    rng: &mut R,
    diameters: &[f64],
    width: f64,
    height: f64,
    min_distance: impl Fn(f64, f64) -> f64,
    max_tries: usize,
) -> Result<Vec<Point>> {
    let mut order: Vec<usize> = (0..diameters.len()).collect();
    order.sort_by(|&a, &b| diameters[b].total_cmp(&diameters[a]).then(a.cmp(&b)));
    let mut placed: Vec<Option<Point>> = vec![None; diameters.len()];
    let mut done: Vec<usize> = Vec::with_capacity(diameters.len());
    for &i in &order {
        let r = diameters[i] / 2.0;
        if 2.0 * r > width || 2.0 * r > height {
            return Err(Error::invalid(format!("crown of {} m does not fit the patch", diameters[i])));
        }
        let mut found = None;
        for _ in 0..max_tries {
            let p = Point::new(rng.random_range(r..=width - r), rng.random_range(r..=height - r));
            let clear = done.iter().all(|&j| {
                let q = placed[j].expect("placed trees have a center");
                p.distance(q) >= min_distance(diameters[i], diameters[j])
            });
            if clear {
                found = Some(p);
                break;
            }
        }
        let p = found.ok_or_else(|| {
            Error::Degenerate(format!("could not place tree {i} after {max_tries} attempts"))
        })?;
        placed[i] = Some(p);
        done.push(i);
    }
    Ok(placed.into_iter().map(|p| p.expect("all placed")).collect())
}

/// `n_trees` labels split evenly over `n_patches` square patches with
/// non-overlapping crowns at roughly 20% canopy cover. Patch ids are
/// `patch_000`, `patch_001`, ….
pub fn synthetic_forest<R: Rng + ?Sized>(
    rng: &mut R,
    n_trees: usize,
    n_patches: usize,
    sizes: &CrownSizes,
) -> Result<Vec<Vec<TreeRecord>>> {
    if n_patches == 0 {
        return Err(Error::invalid("at least one patch is required"));
    }
    (0..n_patches)
        .map(|p| {
            let n = n_trees / n_patches + usize::from(p < n_trees % n_patches);
            let cds: Vec<f64> = (0..n).map(|_| sizes.sample(rng)).collect::<Result<_>>()?;
            let cover: f64 = cds.iter().map(|&cd| cd_to_ca(cd).expect("positive diameter")).sum();
            let side = (cover / 0.2).sqrt().max(sizes.max_cd);
            let centers = scatter_disjoint(rng, &cds, side, side, |a, b| 0.5 * (a + b), 10_000)?;
            let id = format!("patch_{p:03}");
            cds.iter()
                .zip(centers)
                .map(|(&cd, c)| TreeRecord::new(id.as_str(), c, cd_to_ca(cd)?))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::rng::stream_rng;

    #[test]
    fn forest_is_disjoint_and_bounded() {
        let mut rng = stream_rng(11, 0);
        let sizes = CrownSizes::default();
        let patches = synthetic_forest(&mut rng, 105, 4, &sizes).unwrap();
        assert_eq!(patches.iter().map(Vec::len).collect::<Vec<_>>(), vec![27, 26, 26, 26]);
        for trees in &patches {
            for (i, a) in trees.iter().enumerate() {
                let cd = a.crown_diameter();
                assert!((2.0..=20.0).contains(&cd));
                for b in &trees[i + 1..] {
                    let gap = a.center().distance(b.center());
                    assert!(gap >= 0.5 * (cd + b.crown_diameter()) - 1e-9);
                }
            }
        }
    }

    #[test]
    fn impossible_packing_is_reported() {
        let mut rng = stream_rng(1, 0);
        let cds = vec![4.0; 10];
        assert!(scatter_disjoint(&mut rng, &cds, 8.0, 8.0, |a, b| 0.5 * (a + b), 50).is_err());
    }
}
