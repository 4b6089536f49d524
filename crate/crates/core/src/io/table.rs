use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use log::warn;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::io::report::num;
use crate::geometry::{format_wkt_polygon, parse_wkt_polygon, Point, TreeRecord};

pub const TREE_TABLE_HEADER: [&str; 6] = ["patch_id", "x", "y", "crown_area", "score", "polygon"];

/// Relative tolerance between a stated crown area and its polygon's area
/// before a warning is logged.
pub const POLYGON_AREA_TOLERANCE: f64 = 0.01;

/// Trees grouped by patch id, in lexicographic patch order.
pub type Patches = BTreeMap<String, Vec<TreeRecord>>;

#[derive(Debug, Deserialize)]
struct Row {
    patch_id: String,
    x: Option<f64>,
    y: Option<f64>,
    crown_area: Option<f64>,
    score: Option<f64>,
    polygon: Option<String>,
}

fn record(row: Row) -> Result<TreeRecord> {
    let center = match (row.x, row.y) {
        (Some(x), Some(y)) => Some(Point::new(x, y)),
        (None, None) => None,
        _ => return Err(Error::invalid("x and y must both be given or both be empty")),
    };
    let polygon = row.polygon.as_deref().map(str::trim).filter(|s| !s.is_empty());
    let tree = match polygon {
        Some(wkt) => {
            let poly = parse_wkt_polygon(wkt)?;
            let area = poly.area();
            if let Some(stated) = row.crown_area {
                if (stated - area).abs() > POLYGON_AREA_TOLERANCE * area {
                    warn!(
                        "patch {}: stated crown area {stated} differs from polygon area {area} by more than 1%; using the polygon",
                        row.patch_id
                    );
                }
            }
            TreeRecord::from_polygon(row.patch_id, poly, center)?
        }
        None => {
            let center = center.ok_or_else(|| Error::invalid("x and y are required without a polygon"))?;
            let ca = row
                .crown_area
                .ok_or_else(|| Error::invalid("crown_area is required without a polygon"))?;
            TreeRecord::new(row.patch_id, center, ca)?
        }
    };
    match row.score {
        Some(s) => tree.with_score(s),
        None => Ok(tree),
    }
}

/// Reads a tree table. `source` only labels error messages.
pub fn read_trees<R: Read>(reader: R, source: &Path) -> Result<Patches> {
    let mut csv = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let parse_err = |line: u64, message: String| Error::Parse {
        path: PathBuf::from(source),
        line,
        message,
    };
    let header = csv.headers()?.clone();
    if header.iter().ne(TREE_TABLE_HEADER) {
        return Err(parse_err(
            1,
            format!("expected header {}, got {}", TREE_TABLE_HEADER.join(","), header.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    let mut patches = Patches::new();
    for rec in csv.records() {
        let rec = rec.map_err(|e| parse_err(e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        let row: Row = rec.deserialize(Some(&header)).map_err(|e| parse_err(line, e.to_string()))?;
        let patch = row.patch_id.clone();
        if patch.is_empty() {
            return Err(parse_err(line, "empty patch_id".into()));
        }
        let tree = record(row).map_err(|e| parse_err(line, e.to_string()))?;
        patches.entry(patch).or_default().push(tree);
    }
    Ok(patches)
}

pub fn load_trees(path: &Path) -> Result<Patches> {
    let file = std::fs::File::open(path).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
    read_trees(file, path)
}

/// Writes trees in the given order. Numbers use the shortest decimal form
/// that parses back to the same `f64`.
pub fn write_trees<'a, W: Write>(writer: W, trees: impl IntoIterator<Item = &'a TreeRecord>) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(TREE_TABLE_HEADER)?;
    for t in trees {
        let c = t.center();
        csv.write_record([
            t.patch_id().to_string(),
            num(c.x),
            num(c.y),
            num(t.crown_area()),
            t.score().map(num).unwrap_or_default(),
            t.polygon().map(format_wkt_polygon).unwrap_or_default(),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

pub fn save_trees<'a>(path: &Path, trees: impl IntoIterator<Item = &'a TreeRecord>) -> Result<()> {
    let mut buf = Vec::new();
    write_trees(&mut buf, trees)?;
    std::fs::write(path, buf)?;
    Ok(())
}

/// Crown diameters (m) from a one-column CSV; a non-numeric first line is
/// taken as a header.
pub fn read_diameters<R: Read>(reader: R, source: &Path) -> Result<Vec<f64>> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut out = Vec::new();
    for (i, rec) in csv.records().enumerate() {
        let rec = rec?;
        let line = rec.position().map_or(i as u64 + 1, |p| p.line());
        let field = rec.get(0).unwrap_or("");
        match field.parse::<f64>() {
            Ok(v) if v.is_finite() && v > 0.0 => out.push(v),
            Ok(v) => {
                return Err(Error::Parse {
                    path: source.into(),
                    line,
                    message: format!("crown diameter must be positive, got {v}"),
                })
            }
            Err(_) if i == 0 => {}
            Err(_) => {
                return Err(Error::Parse {
                    path: source.into(),
                    line,
                    message: format!("not a number: {field:?}"),
                })
            }
        }
    }
    Ok(out)
}

pub fn load_diameters(path: &Path) -> Result<Vec<f64>> {
    read_diameters(std::fs::File::open(path)?, path)
}
