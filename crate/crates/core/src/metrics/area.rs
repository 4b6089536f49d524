use crate::error::{Error, Result};
use crate::geometry::{default_iou_spec, shape_iou, Mask, RasterSpec, TreeRecord};
use crate::matching::{MatchResult, Scheme};

/// Binary IoU of two masks on the same grid; 1 when both are empty.
pub fn patch_iou(pred: &Mask, label: &Mask) -> Result<f64> {
    if !pred.spec().same_grid(label.spec()) {
        return Err(Error::invalid("patch IoU needs masks on the same grid"));
    }
    let union = pred.union_count(label);
    if union == 0 {
        return Ok(1.0);
    }
    Ok(pred.intersection_count(label) as f64 / union as f64)
}

/// Union of the trees' native shapes (polygon, else equal-area disk).
pub fn trees_mask(trees: &[TreeRecord], spec: &RasterSpec) -> Result<Mask> {
    let mut mask = Mask::empty(*spec);
    for t in trees {
        mask.paint(&t.shape());
    }
    Ok(mask)
}

/// IoU of every matched pair of a one-to-one result, in pair order. Each
/// side is rendered as its native shape; disk pairs are evaluated in closed
/// form and other pairs on the default raster for the pair.
pub fn individual_iou_scores(
    labels: &[TreeRecord],
    preds: &[TreeRecord],
    one_to_one: &MatchResult,
) -> Result<Vec<f64>> {
    if one_to_one.scheme != Scheme::OneToOne {
        return Err(Error::invalid("individual IoU needs a one-to-one matching"));
    }
    one_to_one
        .pairs
        .iter()
        .map(|&(i, j)| {
            let (a, b) = (labels[i].shape(), preds[j].shape());
            shape_iou(&a, &b, &default_iou_spec(&a, &b)?)
        })
        .collect()
}

/// Mean of [`individual_iou_scores`]; `None` without matches.
pub fn individual_iou(
    labels: &[TreeRecord],
    preds: &[TreeRecord],
    one_to_one: &MatchResult,
) -> Result<Option<f64>> {
    let scores = individual_iou_scores(labels, preds, one_to_one)?;
    Ok((!scores.is_empty()).then(|| scores.iter().sum::<f64>() / scores.len() as f64))
}
