use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::io::config::EvalConfig;
use crate::matching::Scheme;
use crate::metrics::EvalReport;

/// The evaluation report as written to disk.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub config: EvalConfig,
    #[serde(flatten)]
    pub report: EvalReport,
}

impl ReportDocument {
    /// Pretty JSON with a trailing newline; non-finite numbers become `null`.
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// One row per (gamma, scheme); patch-level metrics repeat on every row.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record([
            "gamma",
            "scheme",
            "tp",
            "fp",
            "fn",
            "precision",
            "recall",
            "f1",
            "bf1",
            "e_loc_m",
            "e_ca_m2",
            "counting_nmae_pct",
            "individual_iou",
            "patch_iou",
            "labels",
            "predictions",
        ])?;
        let r = &self.report;
        for g in &r.per_gamma {
            for scheme in Scheme::ALL {
                let s = g.schemes.get(scheme);
                csv.write_record([
                    num(g.gamma),
                    scheme.as_str().to_string(),
                    s.counts.tp.to_string(),
                    s.counts.fp.to_string(),
                    s.counts.fn_.to_string(),
                    num(s.scores.precision),
                    num(s.scores.recall),
                    num(s.scores.f1),
                    opt(g.bf1),
                    opt(g.e_loc_m),
                    opt(g.e_ca_m2),
                    opt(r.counting_nmae_pct),
                    opt(r.individual_iou),
                    opt(r.patch_iou),
                    r.counts.labels.to_string(),
                    r.counts.predictions.to_string(),
                ])?;
            }
        }
        csv.flush()?;
        Ok(())
    }
}

/// Shortest decimal that parses back to `v`, in exponent form for very
/// small or large magnitudes.
pub fn num(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && a.is_finite() && !(1e-5..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

/// Empty for missing values.
pub fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}
