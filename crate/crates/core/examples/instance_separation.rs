//! Splits a binary crown mask into individual trees: two disks joined by a
//! thin neck come out as two instances.
//!
//! `cargo run --example instance_separation`

use canopy_metrics::geometry::{Disk, Mask, Point, RasterSpec, Shape};
use canopy_metrics::heatmap::{separate_instances, DEFAULT_W_MAJ, DEFAULT_W_MAX};

fn main() -> canopy_metrics::Result<()> {
    let mut mask = Mask::empty(RasterSpec::new(100, 80, 1.0, Point::default())?);
    for x in [30.0, 70.0] {
        mask.paint(&Shape::Disk(Disk::new(Point::new(x, 40.0), 20.0)?));
    }
    for col in 40..=60 {
        mask.set(col, 39, true);
        mask.set(col, 40, true);
    }
    let inst = separate_instances(&mask, DEFAULT_W_MAX, DEFAULT_W_MAJ, "demo")?;
    println!("{} foreground pixels, {} instances", mask.count(), inst.trees.len());
    for (i, t) in inst.trees.iter().enumerate() {
        let c = t.center();
        println!("instance {}: centroid ({:.1}, {:.1}), {} px", i + 1, c.x, c.y, inst.pixel_count(i as u32 + 1));
    }
    Ok(())
}
