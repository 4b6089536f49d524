//! How much IoU a circular crown model can reach on polygon crowns, with a
//! free radius, with radii from the filter bank and with a box-derived one.
//!
//! `cargo run --example iou_upper_bounds`

use canopy_metrics::geometry::{disk_iou, disk_iou_upper_bound, Disk, Point, Polygon, UpperBoundMode};
use canopy_metrics::heatmap::{default_filter_bank, DecodeParams};

fn main() -> canopy_metrics::Result<()> {
    let a = Disk::new(Point::new(0.0, 0.0), 1.0)?;
    let b = Disk::new(Point::new(1.0, 0.0), 1.0)?;
    println!("unit disks one radius apart: IoU {:.6}", disk_iou(&a, &b));

    let res = 0.2;
    let bank = default_filter_bank(DecodeParams::heatmap().patch_window)?;
    let bank_mode = UpperBoundMode::Bank { sigmas_m: bank.sigmas().iter().map(|s| s * res).collect() };
    let crowns = [
        ("square 4 m", Polygon::new(vec![Point::new(0.0, 0.0), Point::new(4.0, 0.0), Point::new(4.0, 4.0), Point::new(0.0, 4.0)])?),
        ("ellipse 2:1", Polygon::new((0..48).map(|i| {
            let t = i as f64 / 48.0 * std::f64::consts::TAU;
            Point::new(4.0 * t.cos(), 2.0 * t.sin())
        }).collect())?),
        ("L shape", Polygon::new(vec![
            Point::new(0.0, 0.0), Point::new(6.0, 0.0), Point::new(6.0, 2.0),
            Point::new(2.0, 2.0), Point::new(2.0, 6.0), Point::new(0.0, 6.0),
        ])?),
    ];
    println!("\ncrown        continuous   bank   box-derived");
    for (name, poly) in &crowns {
        let [c, k, x] = [&UpperBoundMode::Continuous, &bank_mode, &UpperBoundMode::BoxDerived]
            .map(|m| disk_iou_upper_bound(poly, m).map(|u| u.iou));
        println!("{name:12} {:10.4} {:6.4} {:12.4}", c?, k?, x?);
    }
    Ok(())
}
