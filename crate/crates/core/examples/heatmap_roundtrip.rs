//! Encodes trees as Gaussian bumps and decodes them back with peak finding
//! and the filter bank.
//!
//! `cargo run --release --example heatmap_roundtrip`

use canopy_metrics::geometry::{cd_to_ca, Point, TreeRecord};
use canopy_metrics::heatmap::{decode_heatmap, default_filter_bank, encode, pixel_grid, DecodeParams, SigmaOfCd};

fn main() -> canopy_metrics::Result<()> {
    let trees: Vec<TreeRecord> = [(8.0, 9.0, 4.0), (30.0, 12.0, 11.0), (15.0, 38.0, 7.5), (42.0, 40.0, 2.0)]
        .iter()
        .map(|&(x, y, cd)| TreeRecord::new("demo", Point::new(x, y), cd_to_ca(cd)?))
        .collect::<Result<_, _>>()?;
    let spec = pixel_grid(256, 256, 0.2)?;
    let mapping = SigmaOfCd::default();
    let hm = encode(&trees, &spec, &mapping, false)?;
    let params = DecodeParams::heatmap();
    let bank = default_filter_bank(params.patch_window)?;
    let decoded = decode_heatmap(&hm, &bank, &params, &mapping, "demo")?;
    println!("bank of {} filters, step ratio {:.4}", bank.len(), bank.step_ratio());
    for t in &trees {
        let d = decoded
            .trees
            .iter()
            .min_by(|a, b| a.center().distance(t.center()).total_cmp(&b.center().distance(t.center())))
            .expect("every tree is detected");
        println!(
            "CD {:5.2} m -> {:5.2} m, center offset {:.3} m, score {:.2}",
            t.crown_diameter(),
            d.crown_diameter(),
            t.center().distance(d.center()),
            d.score().unwrap_or(0.0)
        );
    }
    Ok(())
}
