use std::f64::consts::PI;

use crate::error::{ensure_positive, Error, Result};

/// A position in local patch meters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn distance_sq(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Crown diameter of the disk whose area is `ca`.
pub fn ca_to_cd(ca: f64) -> Result<f64> {
    let ca = ensure_positive("crown area", ca)?;
    Ok(2.0 * (ca / PI).sqrt())
}

/// Area of a disk of diameter `cd`.
pub fn cd_to_ca(cd: f64) -> Result<f64> {
    let cd = ensure_positive("crown diameter", cd)?;
    Ok(PI * (0.5 * cd) * (0.5 * cd))
}

/// Axis-aligned bounding rectangle, used for raster coverage and NMS.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisBox {
    min: Point,
    max: Point,
}

impl AxisBox {
    pub fn new(min: Point, max: Point) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) {
            return Err(Error::invalid("box corners must be finite"));
        }
        if max.x <= min.x || max.y <= min.y {
            return Err(Error::Degenerate(format!(
                "box max ({}, {}) must exceed min ({}, {}) on both axes",
                max.x, max.y, min.x, min.y
            )));
        }
        Ok(AxisBox { min, max })
    }

    pub fn min(&self) -> Point {
        self.min
    }

    pub fn max(&self) -> Point {
        self.max
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn center(&self) -> Point {
        Point::new(0.5 * (self.min.x + self.max.x), 0.5 * (self.min.y + self.max.y))
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn intersection_area(&self, other: &AxisBox) -> f64 {
        let w = self.max.x.min(other.max.x) - self.min.x.max(other.min.x);
        let h = self.max.y.min(other.max.y) - self.min.y.max(other.min.y);
        if w <= 0.0 || h <= 0.0 {
            0.0
        } else {
            w * h
        }
    }

    pub fn iou(&self, other: &AxisBox) -> f64 {
        let inter = self.intersection_area(other);
        let union = self.area() + other.area() - inter;
        if union > 0.0 {
            inter / union
        } else {
            0.0
        }
    }

    /// Smallest box containing both `self` and `other`.
    pub fn union(&self, other: &AxisBox) -> AxisBox {
        AxisBox {
            min: Point::new(self.min.x.min(other.min.x), self.min.y.min(other.min.y)),
            max: Point::new(self.max.x.max(other.max.x), self.max.y.max(other.max.y)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk {
    center: Point,
    radius: f64,
}

impl Disk {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !center.is_finite() {
            return Err(Error::invalid("disk center must be finite"));
        }
        ensure_positive("disk radius", radius)?;
        Ok(Disk { center, radius })
    }

    /// Disk with the same area as a crown of area `ca`.
    pub fn with_area(center: Point, ca: f64) -> Result<Self> {
        Disk::new(center, 0.5 * ca_to_cd(ca)?)
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }

    pub fn bounds(&self) -> AxisBox {
        let r = self.radius;
        AxisBox {
            min: Point::new(self.center.x - r, self.center.y - r),
            max: Point::new(self.center.x + r, self.center.y + r),
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        self.center.distance_sq(p) <= self.radius * self.radius
    }
}

/// Simple polygon with counter-clockwise orientation and no repeated
/// closing vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    /// Builds a polygon from a vertex ring. A trailing vertex equal to the
    /// first one is dropped; clockwise rings are reversed.
    pub fn new(mut vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() > 1 && vertices.first() == vertices.last() {
            vertices.pop();
        }
        if vertices.len() < 3 {
            return Err(Error::Degenerate(format!(
                "polygon needs at least 3 distinct vertices, got {}",
                vertices.len()
            )));
        }
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(Error::invalid("polygon vertices must be finite"));
        }
        let signed = signed_area(&vertices);
        if signed == 0.0 || !signed.is_finite() {
            return Err(Error::Degenerate("polygon has zero area".into()));
        }
        if signed < 0.0 {
            vertices.reverse();
        }
        let poly = Polygon { vertices };
        if poly.self_intersects() {
            return Err(Error::Degenerate("polygon ring self-intersects".into()));
        }
        Ok(poly)
    }

    /// Regular `n`-gon inscribed in the circle of the given radius.
    pub fn regular(center: Point, radius: f64, n: usize) -> Result<Self> {
        let vertices = (0..n)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / n as f64;
                Point::new(center.x + radius * t.cos(), center.y + radius * t.sin())
            })
            .collect();
        Polygon::new(vertices)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    /// Area-weighted centroid. It may fall outside non-convex rings.
    pub fn centroid(&self) -> Point {
        let a = self.area();
        let (mut cx, mut cy) = (0.0, 0.0);
        for (p, q) in self.edges() {
            let cross = p.x * q.y - q.x * p.y;
            cx += (p.x + q.x) * cross;
            cy += (p.y + q.y) * cross;
        }
        Point::new(cx / (6.0 * a), cy / (6.0 * a))
    }

    pub fn bounds(&self) -> AxisBox {
        let mut min = self.vertices[0];
        let mut max = self.vertices[0];
        for p in &self.vertices[1..] {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        AxisBox { min, max }
    }

    /// Even-odd point containment with the half-open crossing rule used by
    /// the scanline rasterizer.
    pub fn contains(&self, p: Point) -> bool {
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a.y <= p.y) != (b.y <= p.y) {
                let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    fn self_intersects(&self) -> bool {
        let n = self.vertices.len();
        let edges: Vec<_> = self.edges().collect();
        for i in 0..n {
            for j in (i + 1)..n {
                // adjacent edges share a vertex
                if j == i + 1 || (i == 0 && j == n - 1) {
                    continue;
                }
                if segments_intersect(edges[i].0, edges[i].1, edges[j].0, edges[j].1) {
                    return true;
                }
            }
        }
        false
    }
}

fn signed_area(vertices: &[Point]) -> f64 {
    let n = vertices.len();
    let mut twice = 0.0;
    for i in 0..n {
        let p = vertices[i];
        let q = vertices[(i + 1) % n];
        twice += p.x * q.y - q.x * p.y;
    }
    0.5 * twice
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

fn segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}

/// Any shape a tree can be rendered as.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Disk(Disk),
    Box(AxisBox),
    Polygon(Polygon),
}

impl Shape {
    pub fn area(&self) -> f64 {
        match self {
            Shape::Disk(d) => d.area(),
            Shape::Box(b) => b.area(),
            Shape::Polygon(p) => p.area(),
        }
    }

    pub fn bounds(&self) -> AxisBox {
        match self {
            Shape::Disk(d) => d.bounds(),
            Shape::Box(b) => *b,
            Shape::Polygon(p) => p.bounds(),
        }
    }

    /// Diameter of the disk with the same area.
    pub fn equivalent_diameter(&self) -> f64 {
        2.0 * (self.area() / PI).sqrt()
    }

    pub fn contains(&self, p: Point) -> bool {
        match self {
            Shape::Disk(d) => d.contains(p),
            Shape::Box(b) => b.contains(p),
            Shape::Polygon(poly) => poly.contains(p),
        }
    }
}

impl From<Disk> for Shape {
    fn from(d: Disk) -> Self {
        Shape::Disk(d)
    }
}

impl From<AxisBox> for Shape {
    fn from(b: AxisBox) -> Self {
        Shape::Box(b)
    }
}

impl From<Polygon> for Shape {
    fn from(p: Polygon) -> Self {
        Shape::Polygon(p)
    }
}

/// One labeled or predicted tree.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeRecord {
    patch_id: String,
    center: Point,
    crown_area: f64,
    score: Option<f64>,
    polygon: Option<Polygon>,
}

impl TreeRecord {
    pub fn new(patch_id: impl Into<String>, center: Point, crown_area: f64) -> Result<Self> {
        if !center.is_finite() {
            return Err(Error::invalid("tree center must be finite"));
        }
        ensure_positive("crown area", crown_area)?;
        Ok(TreeRecord {
            patch_id: patch_id.into(),
            center,
            crown_area,
            score: None,
            polygon: None,
        })
    }

    /// Tree whose crown area comes from `polygon`; the center defaults to the
    /// polygon centroid.
    pub fn from_polygon(
        patch_id: impl Into<String>,
        polygon: Polygon,
        center: Option<Point>,
    ) -> Result<Self> {
        let center = center.unwrap_or_else(|| polygon.centroid());
        let mut tree = TreeRecord::new(patch_id, center, polygon.area())?;
        tree.polygon = Some(polygon);
        Ok(tree)
    }

    pub fn with_score(mut self, score: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&score) {
            return Err(Error::invalid(format!("score {score} outside [0, 1]")));
        }
        self.score = Some(score);
        Ok(self)
    }

    pub fn patch_id(&self) -> &str {
        &self.patch_id
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn crown_area(&self) -> f64 {
        self.crown_area
    }

    pub fn crown_diameter(&self) -> f64 {
        2.0 * (self.crown_area / PI).sqrt()
    }

    pub fn score(&self) -> Option<f64> {
        self.score
    }

    pub fn polygon(&self) -> Option<&Polygon> {
        self.polygon.as_ref()
    }

    /// The polygon when present, otherwise the disk of equal crown area.
    pub fn shape(&self) -> Shape {
        match &self.polygon {
            Some(p) => Shape::Polygon(p.clone()),
            None => Shape::Disk(Disk {
                center: self.center,
                radius: 0.5 * self.crown_diameter(),
            }),
        }
    }

    pub fn disk(&self) -> Disk {
        Disk {
            center: self.center,
            radius: 0.5 * self.crown_diameter(),
        }
    }
}
