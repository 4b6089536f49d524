//! `POLYGON((x1 y1, x2 y2, ...))` text form used in tree tables.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::geometry::{Point, Polygon};

pub fn parse_wkt_polygon(text: &str) -> Result<Polygon> {
    let s = text.trim();
    let body = s
        .strip_prefix("POLYGON")
        .or_else(|| s.strip_prefix("polygon"))
        .ok_or_else(|| Error::invalid(format!("expected POLYGON((...)), got {s:?}")))?
        .trim_start();
    let inner = body
        .strip_prefix("((")
        .and_then(|b| b.strip_suffix("))"))
        .ok_or_else(|| Error::invalid("POLYGON ring must be wrapped in double parentheses"))?;
    if inner.contains('(') || inner.contains(')') {
        return Err(Error::invalid("polygons with holes or multiple rings are not supported"));
    }
    let mut vertices = Vec::new();
    for pair in inner.split(',') {
        let mut coords = pair.split_whitespace();
        let (Some(x), Some(y), None) = (coords.next(), coords.next(), coords.next()) else {
            return Err(Error::invalid(format!("bad polygon vertex {:?}", pair.trim())));
        };
        let x: f64 = x
            .parse()
            .map_err(|_| Error::invalid(format!("bad coordinate {x:?}")))?;
        let y: f64 = y
            .parse()
            .map_err(|_| Error::invalid(format!("bad coordinate {y:?}")))?;
        vertices.push(Point::new(x, y));
    }
    Polygon::new(vertices)
}

/// Closed-ring WKT; coordinates use the shortest round-tripping decimal form.
pub fn format_wkt_polygon(poly: &Polygon) -> String {
    let mut out = String::from("POLYGON((");
    let v = poly.vertices();
    for (i, p) in v.iter().chain(std::iter::once(&v[0])).enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{} {}", p.x, p.y);
    }
    out.push_str("))");
    out
}
