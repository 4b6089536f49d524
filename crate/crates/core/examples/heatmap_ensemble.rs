//! Test-time augmentation: heatmaps predicted on flipped and rotated inputs
//! are mapped back and averaged.
//!
//! `cargo run --release --example heatmap_ensemble`

use canopy_metrics::geometry::{cd_to_ca, Point, TreeRecord};
use canopy_metrics::heatmap::{encode, merge_heatmaps, nms_peaks, pixel_grid, SigmaOfCd, Transform};

fn main() -> canopy_metrics::Result<()> {
    let trees = [
        TreeRecord::new("demo", Point::new(6.0, 5.0), cd_to_ca(4.0)?)?,
        TreeRecord::new("demo", Point::new(14.0, 11.0), cd_to_ca(6.0)?)?,
    ];
    let spec = pixel_grid(120, 90, 0.2)?;
    let base = encode(&trees, &spec, &SigmaOfCd::default(), false)?;
    // stand-ins for model outputs on augmented inputs
    let augmentations = [vec![], vec![Transform::FlipH], vec![Transform::Rot90(1)], vec![Transform::FlipV, Transform::Rot90(2)]];
    let inputs: Vec<_> = augmentations
        .iter()
        .map(|ts| {
            let hm = ts.iter().try_fold(base.clone(), |h, t| t.apply(&h))?;
            Ok((hm, ts.clone()))
        })
        .collect::<canopy_metrics::Result<_>>()?;
    let merged = merge_heatmaps(&inputs, &spec)?;
    let max_diff = merged.data().iter().zip(base.data()).map(|(a, b)| (a - b).abs()).fold(0.0f32, f32::max);
    println!("{} inputs merged, largest deviation from the unaugmented map {max_diff}", inputs.len());
    for p in nms_peaks(&merged, 11, 0.6) {
        println!("peak at pixel ({}, {}) value {:.3}", p.col, p.row, p.value);
    }
    Ok(())
}
