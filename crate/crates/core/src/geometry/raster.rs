use crate::error::{ensure_positive, Error, Result};
use crate::geometry::{AxisBox, Point, Shape};

/// Pixel grid in patch meters. Pixel `(col, row)` covers
/// `origin + [col, col+1) * resolution` horizontally and the same for rows
/// along `y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RasterSpec {
    pub width: usize,
    pub height: usize,
    pub resolution: f64,
    pub origin: Point,
}

impl RasterSpec {
    pub fn new(width: usize, height: usize, resolution: f64, origin: Point) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid(format!(
                "raster must be at least 1x1, got {width}x{height}"
            )));
        }
        ensure_positive("raster resolution", resolution)?;
        if !origin.is_finite() {
            return Err(Error::invalid("raster origin must be finite"));
        }
        Ok(RasterSpec {
            width,
            height,
            resolution,
            origin,
        })
    }

    /// Grid at `resolution` whose pixels cover `bounds` plus `margin` pixels
    /// on every side.
    pub fn covering(bounds: &AxisBox, resolution: f64, margin: usize) -> Result<Self> {
        ensure_positive("raster resolution", resolution)?;
        let m = margin as f64 * resolution;
        let origin = Point::new(bounds.min().x - m, bounds.min().y - m);
        let width = ((bounds.width() + 2.0 * m) / resolution).ceil().max(1.0) as usize;
        let height = ((bounds.height() + 2.0 * m) / resolution).ceil().max(1.0) as usize;
        RasterSpec::new(width, height, resolution, origin)
    }

    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, col: usize, row: usize) -> usize {
        row * self.width + col
    }

    pub fn pixel_center(&self, col: usize, row: usize) -> Point {
        Point::new(
            self.origin.x + (col as f64 + 0.5) * self.resolution,
            self.origin.y + (row as f64 + 0.5) * self.resolution,
        )
    }

    /// Pixel containing `p`, i.e. the pixel whose center is nearest.
    pub fn pixel_of(&self, p: Point) -> Option<(usize, usize)> {
        let c = ((p.x - self.origin.x) / self.resolution).floor();
        let r = ((p.y - self.origin.y) / self.resolution).floor();
        if c < 0.0 || r < 0.0 || c >= self.width as f64 || r >= self.height as f64 {
            None
        } else {
            Some((c as usize, r as usize))
        }
    }

    pub fn same_grid(&self, other: &RasterSpec) -> bool {
        self.width == other.width
            && self.height == other.height
            && (self.resolution - other.resolution).abs() <= 1e-12 * self.resolution
            && self.origin.distance(other.origin) <= 1e-9 * self.resolution
    }
}

/// Binary raster.
#[derive(Debug, Clone, PartialEq)]
pub struct Mask {
    spec: RasterSpec,
    data: Vec<bool>,
}

impl Mask {
    pub fn empty(spec: RasterSpec) -> Self {
        Mask {
            spec,
            data: vec![false; spec.len()],
        }
    }

    pub fn from_data(spec: RasterSpec, data: Vec<bool>) -> Result<Self> {
        if data.len() != spec.len() {
            return Err(Error::invalid(format!(
                "mask has {} cells, raster needs {}",
                data.len(),
                spec.len()
            )));
        }
        Ok(Mask { spec, data })
    }

    pub fn spec(&self) -> &RasterSpec {
        &self.spec
    }

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    pub fn get(&self, col: usize, row: usize) -> bool {
        self.data[self.spec.index(col, row)]
    }

    pub fn set(&mut self, col: usize, row: usize, value: bool) {
        let i = self.spec.index(col, row);
        self.data[i] = value;
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&v| v).count()
    }

    /// Adds every pixel of `shape` to the mask.
    pub fn paint(&mut self, shape: &Shape) {
        let width = self.spec.width;
        let data = &mut self.data;
        for_each_span(shape, &self.spec, |row, c0, c1| {
            data[row * width + c0..=row * width + c1].fill(true);
        });
    }

    pub fn intersection_count(&self, other: &Mask) -> usize {
        self.data
            .iter()
            .zip(&other.data)
            .filter(|(a, b)| **a && **b)
            .count()
    }

    pub fn union_count(&self, other: &Mask) -> usize {
        self.data
            .iter()
            .zip(&other.data)
            .filter(|(a, b)| **a || **b)
            .count()
    }
}

/// Rasterizes `shape` onto `spec`: a pixel is inside when its center is.
pub fn rasterize(shape: &Shape, spec: &RasterSpec) -> Mask {
    let mut mask = Mask::empty(*spec);
    mask.paint(shape);
    mask
}

/// Calls `f(row, first_col, last_col)` for every horizontal run of pixels
/// whose centers lie inside `shape`.
pub(crate) fn for_each_span(shape: &Shape, spec: &RasterSpec, mut f: impl FnMut(usize, usize, usize)) {
    let res = spec.resolution;
    let ox = spec.origin.x;
    // inclusive pixel range whose centers fall in [x0, x1]
    let cols = |x0: f64, x1: f64| -> Option<(usize, usize)> {
        let first = ((x0 - ox) / res - 0.5).ceil().max(0.0);
        let last = ((x1 - ox) / res - 0.5).floor().min(spec.width as f64 - 1.0);
        if first > last {
            None
        } else {
            Some((first as usize, last as usize))
        }
    };
    for row in 0..spec.height {
        let y = spec.origin.y + (row as f64 + 0.5) * res;
        match shape {
            Shape::Disk(d) => {
                let dy = y - d.center().y;
                let r2 = d.radius() * d.radius() - dy * dy;
                if r2 < 0.0 {
                    continue;
                }
                let hw = r2.sqrt();
                if let Some((c0, c1)) = cols(d.center().x - hw, d.center().x + hw) {
                    f(row, c0, c1);
                }
            }
            Shape::Box(b) => {
                if y < b.min().y || y > b.max().y {
                    continue;
                }
                if let Some((c0, c1)) = cols(b.min().x, b.max().x) {
                    f(row, c0, c1);
                }
            }
            Shape::Polygon(p) => {
                let mut xs: Vec<f64> = p
                    .edges()
                    .filter(|(a, b)| (a.y <= y) != (b.y <= y))
                    .map(|(a, b)| a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y))
                    .collect();
                xs.sort_by(f64::total_cmp);
                for pair in xs.chunks_exact(2) {
                    // strict on the right edge, matching Polygon::contains
                    let (x0, x1) = (pair[0], pair[1]);
                    if let Some((c0, mut c1)) = cols(x0, x1) {
                        if spec.pixel_center(c1, row).x >= x1 {
                            if c1 == c0 {
                                continue;
                            }
                            c1 -= 1;
                        }
                        f(row, c0, c1);
                    }
                }
            }
        }
    }
}
