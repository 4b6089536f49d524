//! Raster container: an ASCII header line `TAG width height resolution`
//! followed by `width × height` little-endian `f32` values, row-major, top
//! row first. `HMAP` holds heatmaps and binary masks, `SMAP` size maps with
//! invalid entries stored as negative values.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{Mask, RasterSpec};
use crate::heatmap::grid::{pixel_grid, Heatmap, SizeMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RasterKind {
    Heatmap,
    SizeMap,
}

impl RasterKind {
    fn tag(self) -> &'static str {
        match self {
            RasterKind::Heatmap => "HMAP",
            RasterKind::SizeMap => "SMAP",
        }
    }
}

/// Raw contents of a raster file.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterFile {
    pub kind: RasterKind,
    pub spec: RasterSpec,
    pub values: Vec<f32>,
}

pub fn write_raster<W: Write>(mut w: W, kind: RasterKind, spec: &RasterSpec, values: &[f32]) -> Result<()> {
    if values.len() != spec.len() {
        return Err(Error::invalid("value count does not match the raster size"));
    }
    writeln!(w, "{} {} {} {}", kind.tag(), spec.width, spec.height, spec.resolution)?;
    let mut bytes = Vec::with_capacity(4 * values.len());
    for v in values {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&bytes)?;
    Ok(())
}

pub fn read_raster<R: Read>(r: R) -> Result<RasterFile> {
    let mut r = BufReader::new(r);
    let mut header = String::new();
    r.read_line(&mut header)?;
    let bad = |msg: &str| Error::invalid(format!("raster header {:?}: {msg}", header.trim_end()));
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [tag, w, h, res] = fields[..] else {
        return Err(bad("expected `TAG width height resolution`"));
    };
    let kind = match tag {
        "HMAP" => RasterKind::Heatmap,
        "SMAP" => RasterKind::SizeMap,
        _ => return Err(bad("unknown tag")),
    };
    let w: usize = w.parse().map_err(|_| bad("bad width"))?;
    let h: usize = h.parse().map_err(|_| bad("bad height"))?;
    let res: f64 = res.parse().map_err(|_| bad("bad resolution"))?;
    let spec = pixel_grid(w, h, res)?;
    let mut bytes = Vec::with_capacity(4 * spec.len());
    r.read_to_end(&mut bytes)?;
    if bytes.len() != 4 * spec.len() {
        return Err(Error::invalid(format!(
            "raster payload has {} bytes, expected {}",
            bytes.len(),
            4 * spec.len()
        )));
    }
    let values = bytes
        .chunks_exact(4)
        .map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]]))
        .collect();
    Ok(RasterFile { kind, spec, values })
}

impl RasterFile {
    pub fn open(path: &Path) -> Result<Self> {
        read_raster(std::fs::File::open(path)?)
    }

    fn expect(self, kind: RasterKind) -> Result<Self> {
        if self.kind != kind {
            return Err(Error::invalid(format!("expected a {} raster", kind.tag())));
        }
        Ok(self)
    }

    pub fn into_heatmap(self) -> Result<Heatmap> {
        let f = self.expect(RasterKind::Heatmap)?;
        Heatmap::from_data(f.spec, f.values)
    }

    pub fn into_size_map(self) -> Result<SizeMap> {
        let f = self.expect(RasterKind::SizeMap)?;
        SizeMap::new(f.spec, f.values)
    }

    /// Mask from an `HMAP` whose values are all 0 or 1.
    pub fn into_mask(self) -> Result<Mask> {
        let f = self.expect(RasterKind::Heatmap)?;
        if f.values.iter().any(|&v| v != 0.0 && v != 1.0) {
            return Err(Error::invalid("mask values must be 0 or 1"));
        }
        Mask::from_data(f.spec, f.values.iter().map(|&v| v == 1.0).collect())
    }
}

pub fn save_heatmap(path: &Path, hm: &Heatmap) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_raster(&mut f, RasterKind::Heatmap, hm.spec(), hm.data())?;
    f.flush()?;
    Ok(())
}

pub fn save_size_map(path: &Path, sm: &SizeMap) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_raster(&mut f, RasterKind::SizeMap, sm.spec(), sm.data())?;
    f.flush()?;
    Ok(())
}
