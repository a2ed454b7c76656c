//! Greedy IoU matching of detections to ground truth, and the precision /
//! recall / F1 reports built from it.
//!
//! Matching follows the ILSVRC detection protocol: detections at or above the
//! confidence threshold are visited from most to least confident, each claims
//! the still-unmatched ground-truth box it overlaps most, and the claim counts
//! as a true positive only when that overlap reaches the IoU threshold.
//! Claimed boxes are retired.

mod report;

use serde::{Deserialize, Serialize};

use crate::annotate::{size_category, Annotation, BBox, SizeCategory};
use crate::error::{Error, Result};

pub use self::report::{
    f1_grid, report, write_grid_csv, write_report_csv, Counts, EvalReport, F1Grid, GridCell, Stratum, StratumKind,
    DEFAULT_CONF_SET, DEFAULT_IOU_SET,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Detection {
    pub scene_id: String,
    pub bbox: BBox,
    pub confidence: f64,
}

impl Detection {
    pub fn new(scene_id: impl Into<String>, bbox: BBox, confidence: f64) -> Result<Self> {
        let d = Detection { scene_id: scene_id.into(), bbox, confidence };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.confidence) {
            return Err(Error::InvalidDetection(format!(
                "confidence {} outside [0, 1] in scene {}",
                self.confidence, self.scene_id
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruePositive {
    pub detection: usize,
    pub gt: usize,
    pub iou: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FalsePositive {
    pub detection: usize,
    /// Category of the detection's own box area.
    pub size_category: SizeCategory,
}

/// Per-scene matching result. Indices refer to the input slices.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MatchOutcome {
    pub true_positives: Vec<TruePositive>,
    pub false_positives: Vec<FalsePositive>,
    pub false_negatives: Vec<usize>,
}

impl MatchOutcome {
    pub fn counts(&self) -> Counts {
        Counts { tp: self.true_positives.len(), fp: self.false_positives.len(), fn_: self.false_negatives.len() }
    }
}

pub fn iou(a: &BBox, b: &BBox) -> f64 {
    let inter = a.intersection_area(b);
    if inter == 0.0 {
        return 0.0;
    }
    let union = a.area() + b.area() - inter;
    (inter / union).clamp(0.0, 1.0)
}

pub(crate) fn check_threshold(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::InvalidThreshold(t))
    }
}

/// Matches one scene's detections against its ground truth.
///
/// Detections below `conf_thresh` are ignored. Survivors are ordered by
/// confidence, highest first, ties by input index. Each takes the unmatched
/// box of largest IoU (ties to the lower index); a pair with IoU at or above
/// `iou_thresh` is a true positive, anything else a false positive. A pair
/// with zero overlap never matches, even at `iou_thresh == 0`.
pub fn match_detections(
    gt: &[Annotation],
    dets: &[Detection],
    iou_thresh: f64,
    conf_thresh: f64,
) -> Result<MatchOutcome> {
    check_threshold(iou_thresh)?;
    check_threshold(conf_thresh)?;
    let scene = gt.first().map(|a| a.scene_id.as_str()).or_else(|| dets.first().map(|d| d.scene_id.as_str()));
    if let Some(scene) = scene {
        let stray = gt
            .iter()
            .map(|a| a.scene_id.as_str())
            .chain(dets.iter().map(|d| d.scene_id.as_str()))
            .find(|&s| s != scene);
        if let Some(found) = stray {
            return Err(Error::SceneMismatch { expected: scene.to_owned(), found: found.to_owned() });
        }
    }
    for d in dets {
        d.validate()?;
    }

    let mut order: Vec<usize> = (0..dets.len()).filter(|&i| dets[i].confidence >= conf_thresh).collect();
    order.sort_by(|&a, &b| dets[b].confidence.total_cmp(&dets[a].confidence).then(a.cmp(&b)));

    let mut matched = vec![false; gt.len()];
    let mut outcome = MatchOutcome::default();
    for di in order {
        let det = &dets[di];
        let mut best: Option<(usize, f64)> = None;
        for (gi, g) in gt.iter().enumerate() {
            if matched[gi] {
                continue;
            }
            let overlap = iou(&det.bbox, &g.bbox);
            if best.is_none_or(|(_, b)| overlap > b) {
                best = Some((gi, overlap));
            }
        }
        match best {
            Some((gi, overlap)) if overlap > 0.0 && overlap >= iou_thresh => {
                matched[gi] = true;
                outcome.true_positives.push(TruePositive { detection: di, gt: gi, iou: overlap });
            }
            _ => outcome
                .false_positives
                .push(FalsePositive { detection: di, size_category: size_category(det.bbox.area())? }),
        }
    }
    outcome.false_negatives = (0..gt.len()).filter(|&gi| !matched[gi]).collect();
    Ok(outcome)
}
