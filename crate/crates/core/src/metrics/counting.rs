/// Normalized absolute counting error `100·|M − N| / N`, in percent.
/// `None` for a patch without labels.
pub fn counting_nmae(n_labels: usize, m_preds: usize) -> Option<f64> {
    if n_labels == 0 {
        return None;
    }
    Some(100.0 * n_labels.abs_diff(m_preds) as f64 / n_labels as f64)
}

/// Per-patch mean of [`counting_nmae`]; label-free patches are skipped and
/// tallied.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NmaeAccumulator {
    pub sum_pct: f64,
    pub patches: usize,
    pub skipped: usize,
}

impl NmaeAccumulator {
    pub fn add_patch(&mut self, n_labels: usize, m_preds: usize) {
        match counting_nmae(n_labels, m_preds) {
            Some(v) => {
                self.sum_pct += v;
                self.patches += 1;
            }
            None => self.skipped += 1,
        }
    }

    pub fn merge(&mut self, other: &NmaeAccumulator) {
        self.sum_pct += other.sum_pct;
        self.patches += other.patches;
        self.skipped += other.skipped;
    }

    pub fn value(&self) -> Option<f64> {
        (self.patches > 0).then(|| self.sum_pct / self.patches as f64)
    }
}
