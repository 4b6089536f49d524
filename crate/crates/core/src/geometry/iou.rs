use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{rasterize, AxisBox, Disk, Point, Polygon, RasterSpec, Shape};

/// Area of the intersection of two disks.
pub fn lens_area(a: &Disk, b: &Disk) -> f64 {
    let (r1, r2) = (a.radius(), b.radius());
    let d = a.center().distance(b.center());
    if d >= r1 + r2 {
        return 0.0;
    }
    if d <= (r1 - r2).abs() {
        let r = r1.min(r2);
        return PI * r * r;
    }
    let c1 = ((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1)).clamp(-1.0, 1.0);
    let c2 = ((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2)).clamp(-1.0, 1.0);
    let k = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
    r1 * r1 * c1.acos() + r2 * r2 * c2.acos() - 0.5 * k.max(0.0).sqrt()
}

pub fn disk_iou(a: &Disk, b: &Disk) -> f64 {
    let inter = lens_area(a, b);
    inter / (a.area() + b.area() - inter)
}

/// Raster suited to comparing `a` and `b`: resolution CD/200 of the larger
/// shape clamped to [0.001, 0.1] m/px, covering both bounding boxes.
pub fn default_iou_spec(a: &Shape, b: &Shape) -> Result<RasterSpec> {
    let cd = a.equivalent_diameter().max(b.equivalent_diameter());
    let resolution = (cd / 200.0).clamp(0.001, 0.1);
    RasterSpec::covering(&a.bounds().union(&b.bounds()), resolution, 1)
}

/// Intersection over union of two shapes. Disk pairs use the closed-form
/// lens area; everything else is rasterized on `spec`.
pub fn shape_iou(a: &Shape, b: &Shape, spec: &RasterSpec) -> Result<f64> {
    if let (Shape::Disk(da), Shape::Disk(db)) = (a, b) {
        return Ok(disk_iou(da, db));
    }
    rasterized_iou(a, b, spec)
}

/// Pixel-count IoU regardless of shape kinds.
pub fn rasterized_iou(a: &Shape, b: &Shape, spec: &RasterSpec) -> Result<f64> {
    let ma = rasterize(a, spec);
    let mb = rasterize(b, spec);
    let union = ma.union_count(&mb);
    if union == 0 {
        return Err(Error::Degenerate(
            "both shapes are empty on the raster".into(),
        ));
    }
    Ok(ma.intersection_count(&mb) as f64 / union as f64)
}

/// Feasible radii for the best-disk search.
#[derive(Debug, Clone, PartialEq)]
pub enum UpperBoundMode {
    /// Any radius in (0, 4·CD].
    Continuous,
    /// Radii restricted to 2σ for each σ (meters) of a filter bank.
    Bank { sigmas_m: Vec<f64> },
    /// Radius fixed to (w + h) / 4 of the polygon bounding box.
    BoxDerived,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperBound {
    pub iou: f64,
    pub radius: f64,
}

/// Area of the intersection of a disk and a simple polygon, computed edge by
/// edge as the signed overlap of the disk with each triangle fanned from the
/// disk center.
pub fn disk_polygon_intersection_area(disk: &Disk, poly: &Polygon) -> f64 {
    let c = disk.center();
    let r = disk.radius();
    let mut total = 0.0;
    for (a, b) in poly.edges() {
        let a = Point::new(a.x - c.x, a.y - c.y);
        let b = Point::new(b.x - c.x, b.y - c.y);
        total += fan_piece(a, b, r);
    }
    total.abs()
}

// signed area of disk(0, r) ∩ triangle(0, a, b)
fn fan_piece(a: Point, b: Point, r: f64) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let qa = dx * dx + dy * dy;
    let qb = 2.0 * (a.x * dx + a.y * dy);
    let qc = a.x * a.x + a.y * a.y - r * r;
    let mut ts = [0.0, 1.0, 1.0, 1.0];
    let mut n = 1;
    let disc = qb * qb - 4.0 * qa * qc;
    if qa > 0.0 && disc > 0.0 {
        let s = disc.sqrt();
        for t in [(-qb - s) / (2.0 * qa), (-qb + s) / (2.0 * qa)] {
            if t > 0.0 && t < 1.0 {
                ts[n] = t;
                n += 1;
            }
        }
    }
    ts[n] = 1.0;
    let at = |t: f64| Point::new(a.x + t * dx, a.y + t * dy);
    let mut area = 0.0;
    for w in ts[..=n].windows(2) {
        let (p, q) = (at(w[0]), at(w[1]));
        let cross = p.x * q.y - p.y * q.x;
        let mid = at(0.5 * (w[0] + w[1]));
        if mid.x * mid.x + mid.y * mid.y < r * r {
            area += 0.5 * cross;
        } else {
            area += 0.5 * r * r * cross.atan2(p.x * q.x + p.y * q.y);
        }
    }
    area
}

/// Best IoU reachable by a disk centered on the polygon centroid, i.e. the
/// ceiling that a circular crown model puts on individual IoU. Overlaps are
/// evaluated in closed form, so no raster is involved.
pub fn disk_iou_upper_bound(poly: &Polygon, mode: &UpperBoundMode) -> Result<UpperBound> {
    let center = poly.centroid();
    let poly_area = poly.area();
    if !(poly_area.is_finite() && poly_area > 0.0) {
        return Err(Error::Degenerate("polygon has no area".into()));
    }
    let iou_at = |radius: f64| -> Result<f64> {
        let disk = Disk::new(center, radius)?;
        let inter = disk_polygon_intersection_area(&disk, poly);
        Ok(inter / (disk.area() + poly_area - inter))
    };
    match mode {
        UpperBoundMode::Continuous => {
            let max_radius = 4.0 * 2.0 * (poly_area / PI).sqrt();
            golden_max(max_radius, iou_at)
        }
        UpperBoundMode::Bank { sigmas_m } => {
            let mut best: Option<UpperBound> = None;
            for &sigma in sigmas_m {
                let radius = 2.0 * sigma;
                if !(radius.is_finite() && radius > 0.0) {
                    return Err(Error::NonPositive {
                        what: "bank sigma",
                        value: sigma,
                    });
                }
                let iou = iou_at(radius)?;
                if best.is_none_or(|b| iou > b.iou) {
                    best = Some(UpperBound { iou, radius });
                }
            }
            best.ok_or_else(|| Error::invalid("filter bank has no sigmas"))
        }
        UpperBoundMode::BoxDerived => {
            let b = poly.bounds();
            let radius = 0.25 * (b.width() + b.height());
            Ok(UpperBound {
                iou: iou_at(radius)?,
                radius,
            })
        }
    }
}

/// Radius resolution of the continuous search, in meters.
pub const UPPER_BOUND_RADIUS_TOL: f64 = 1e-3;

// coarse scan over (0, max_radius] to bracket the peak, then golden-section
fn golden_max(max_radius: f64, f: impl Fn(f64) -> Result<f64>) -> Result<UpperBound> {
    const SCAN: usize = 64;
    let step = max_radius / SCAN as f64;
    let mut best_i = 1;
    let mut best_v = f64::NEG_INFINITY;
    for i in 1..=SCAN {
        let v = f(i as f64 * step)?;
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    let mut lo = (best_i as f64 - 1.0) * step;
    let mut hi = ((best_i + 1) as f64 * step).min(max_radius);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1.max(f64::MIN_POSITIVE))?, f(x2)?);
    while hi - lo > 0.1 * UPPER_BOUND_RADIUS_TOL {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1.max(f64::MIN_POSITIVE))?;
        }
    }
    let radius = 0.5 * (lo + hi);
    let iou = f(radius)?;
    // never report less than the best scanned point
    if iou >= best_v {
        Ok(UpperBound { iou, radius })
    } else {
        Ok(UpperBound {
            iou: best_v,
            radius: best_i as f64 * step,
        })
    }
}

/// Greedy suppression in descending score order: a box is dropped when its
/// IoU with an already kept box exceeds `iou_threshold`. Returns indices of
/// the kept boxes, highest score first.
pub fn box_nms(boxes: &[(AxisBox, f64)], iou_threshold: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..boxes.len()).collect();
    order.sort_by(|&a, &b| boxes[b].1.total_cmp(&boxes[a].1).then(a.cmp(&b)));
    let mut kept: Vec<usize> = Vec::new();
    for i in order {
        if kept
            .iter()
            .all(|&k| boxes[k].0.iou(&boxes[i].0) <= iou_threshold)
        {
            kept.push(i);
        }
    }
    kept
}
