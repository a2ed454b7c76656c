use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_threshold, match_detections, Detection};
use crate::annotate::{DensityCategory, SceneRecord, SizeCategory};
use crate::error::{Error, Result};

/// IoU thresholds of the default threshold grid.
pub const DEFAULT_IOU_SET: [f64; 4] = [0.2, 0.3, 0.4, 0.5];
/// Confidence thresholds of the default threshold grid.
pub const DEFAULT_CONF_SET: [f64; 3] = [0.2, 0.5, 0.75];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl Counts {
    /// 0 when nothing was detected.
    pub fn precision(&self) -> f64 {
        ratio(self.tp, self.tp + self.fp)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.tp, self.tp + self.fn_)
    }

    pub fn f1(&self) -> f64 {
        let (p, r) = (self.precision(), self.recall());
        if p + r > 0.0 {
            2.0 * p * r / (p + r)
        } else {
            0.0
        }
    }

    fn add(&mut self, other: Counts) {
        self.tp += other.tp;
        self.fp += other.fp;
        self.fn_ += other.fn_;
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Pooled counts and the metrics derived from them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stratum {
    #[serde(flatten)]
    pub counts: Counts,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl From<Counts> for Stratum {
    fn from(counts: Counts) -> Self {
        Stratum { counts, precision: counts.precision(), recall: counts.recall(), f1: counts.f1() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StratumKind {
    Overall,
    Size,
    Density,
}

impl StratumKind {
    fn as_str(self) -> &'static str {
        match self {
            StratumKind::Overall => "overall",
            StratumKind::Size => "size",
            StratumKind::Density => "density",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub iou: f64,
    pub conf: f64,
    pub stratum_kind: StratumKind,
    /// `"all"` for the overall stratum, otherwise the category name.
    pub stratum: String,
    #[serde(flatten)]
    pub metrics: Stratum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct F1Grid {
    pub iou_set: Vec<f64>,
    pub conf_set: Vec<f64>,
    pub cells: Vec<GridCell>,
}

impl F1Grid {
    /// F1 at one threshold pair, overall (`None`) or for one size category.
    pub fn f1(&self, iou: f64, conf: f64, size: Option<SizeCategory>) -> Option<f64> {
        let name = size.map_or("all", SizeCategory::as_str);
        self.cells.iter().find(|c| c.iou == iou && c.conf == conf && c.stratum == name).map(|c| c.metrics.f1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub iou_thresh: f64,
    pub conf_thresh: f64,
    pub scenes: usize,
    pub overall: Stratum,
    pub by_size: BTreeMap<SizeCategory, Stratum>,
    pub by_density: BTreeMap<DensityCategory, Stratum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<F1Grid>,
}

impl EvalReport {
    pub fn with_grid(mut self, grid: F1Grid) -> Self {
        self.grid = Some(grid);
        self
    }

    fn rows(&self) -> Vec<GridCell> {
        let cell = |kind, name: &str, metrics: &Stratum| GridCell {
            iou: self.iou_thresh,
            conf: self.conf_thresh,
            stratum_kind: kind,
            stratum: name.to_owned(),
            metrics: *metrics,
        };
        let mut rows = vec![cell(StratumKind::Overall, "all", &self.overall)];
        rows.extend(self.by_size.iter().map(|(k, v)| cell(StratumKind::Size, k.as_str(), v)));
        rows.extend(self.by_density.iter().map(|(k, v)| cell(StratumKind::Density, k.as_str(), v)));
        rows
    }
}

#[derive(Default)]
struct SceneTally {
    overall: Counts,
    /// Indexed by `SizeCategory as usize`.
    by_size: [Counts; 6],
    density: Option<DensityCategory>,
}

fn tally_scene(scene: &SceneRecord, dets: &[Detection], iou_thresh: f64, conf_thresh: f64) -> Result<SceneTally> {
    if let Some(d) = dets.iter().find(|d| d.scene_id != scene.scene_id) {
        return Err(Error::SceneMismatch { expected: scene.scene_id.clone(), found: d.scene_id.clone() });
    }
    // Annotations read from files may carry no scene id; the record's id is authoritative.
    let mut gt = scene.gt.clone();
    for a in &mut gt {
        a.scene_id.clone_from(&scene.scene_id);
    }
    let outcome = match_detections(&gt, dets, iou_thresh, conf_thresh)?;
    let mut tally =
        SceneTally { overall: outcome.counts(), density: Some(scene.density_category), ..Default::default() };
    for tp in &outcome.true_positives {
        tally.by_size[gt[tp.gt].size_category as usize].tp += 1;
    }
    for fp in &outcome.false_positives {
        tally.by_size[fp.size_category as usize].fp += 1;
    }
    for &gi in &outcome.false_negatives {
        tally.by_size[gt[gi].size_category as usize].fn_ += 1;
    }
    Ok(tally)
}

fn sorted_unique(scenes: &[(SceneRecord, Vec<Detection>)]) -> Result<Vec<&(SceneRecord, Vec<Detection>)>> {
    let mut sorted: Vec<_> = scenes.iter().collect();
    sorted.sort_by(|a, b| a.0.scene_id.cmp(&b.0.scene_id));
    if let Some(w) = sorted.windows(2).find(|w| w[0].0.scene_id == w[1].0.scene_id) {
        return Err(Error::DuplicateScene(w[0].0.scene_id.clone()));
    }
    Ok(sorted)
}

/// Micro-averaged report over all scenes.
///
/// Size strata count TPs and FNs under the ground-truth box's category and
/// FPs under the detection's own category; FPs below the minimum size count
/// toward the overall numbers only. Density strata receive each scene's full
/// counts. Scenes are matched in parallel and folded in scene-id order.
pub fn report(scenes: &[(SceneRecord, Vec<Detection>)], iou_thresh: f64, conf_thresh: f64) -> Result<EvalReport> {
    check_threshold(iou_thresh)?;
    check_threshold(conf_thresh)?;
    let sorted = sorted_unique(scenes)?;
    let tallies: Vec<SceneTally> = sorted
        .par_iter()
        .map(|(scene, dets)| tally_scene(scene, dets, iou_thresh, conf_thresh))
        .collect::<Result<_>>()?;

    let mut overall = Counts::default();
    let mut by_size: BTreeMap<SizeCategory, Counts> =
        SizeCategory::SCORED.iter().map(|&c| (c, Counts::default())).collect();
    let mut by_density: BTreeMap<DensityCategory, Counts> =
        DensityCategory::ALL.iter().map(|&c| (c, Counts::default())).collect();
    for t in &tallies {
        overall.add(t.overall);
        for cat in SizeCategory::SCORED {
            by_size.get_mut(&cat).unwrap().add(t.by_size[cat as usize]);
        }
        if let Some(d) = t.density {
            by_density.get_mut(&d).unwrap().add(t.overall);
        }
    }
    Ok(EvalReport {
        iou_thresh,
        conf_thresh,
        scenes: tallies.len(),
        overall: overall.into(),
        by_size: by_size.into_iter().map(|(k, v)| (k, v.into())).collect(),
        by_density: by_density.into_iter().map(|(k, v)| (k, v.into())).collect(),
        grid: None,
    })
}

/// Overall and per-size metrics for every (IoU, confidence) pair, each from a fresh matching run.
pub fn f1_grid(scenes: &[(SceneRecord, Vec<Detection>)], iou_set: &[f64], conf_set: &[f64]) -> Result<F1Grid> {
    if iou_set.is_empty() || conf_set.is_empty() {
        return Err(Error::EmptyInput("threshold grid needs at least one IoU and one confidence value".into()));
    }
    let mut cells = Vec::with_capacity(iou_set.len() * conf_set.len() * 6);
    for &iou in iou_set {
        for &conf in conf_set {
            let r = report(scenes, iou, conf)?;
            cells.extend(r.rows().into_iter().filter(|c| c.stratum_kind != StratumKind::Density));
        }
    }
    Ok(F1Grid { iou_set: iou_set.to_vec(), conf_set: conf_set.to_vec(), cells })
}

const CSV_HEADER: [&str; 10] =
    ["stratum_kind", "stratum", "iou", "conf", "tp", "fp", "fn", "precision", "recall", "f1"];

/// Four-decimal rounding, printed in shortest form with at least one decimal (`1.0`, `0.6667`).
fn fmt_metric(v: f64) -> String {
    format!("{:?}", (v * 1e4).round() / 1e4)
}

fn write_cells<'a>(w: impl Write, cells: impl IntoIterator<Item = &'a GridCell>) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let csv_err = |e: csv::Error| Error::parse("csv output", e);
    out.write_record(CSV_HEADER).map_err(csv_err)?;
    for c in cells {
        let m = &c.metrics;
        out.write_record([
            c.stratum_kind.as_str().to_owned(),
            c.stratum.clone(),
            fmt_metric(c.iou),
            fmt_metric(c.conf),
            m.counts.tp.to_string(),
            m.counts.fp.to_string(),
            m.counts.fn_.to_string(),
            fmt_metric(m.precision),
            fmt_metric(m.recall),
            fmt_metric(m.f1),
        ])
        .map_err(csv_err)?;
    }
    out.flush().map_err(|e| Error::io("csv output", e))
}

/// One row per stratum (overall, five sizes, three densities) of each report.
pub fn write_report_csv(w: impl Write, reports: &[EvalReport]) -> Result<()> {
    let rows: Vec<GridCell> = reports.iter().flat_map(EvalReport::rows).collect();
    write_cells(w, &rows)
}

/// Overall rows first, then size category x IoU x confidence.
pub fn write_grid_csv(w: impl Write, grid: &F1Grid) -> Result<()> {
    let overall = grid.cells.iter().filter(|c| c.stratum_kind == StratumKind::Overall);
    let mut sizes: Vec<&GridCell> = grid.cells.iter().filter(|c| c.stratum_kind == StratumKind::Size).collect();
    // Stable sort keeps the IoU-major, confidence-minor order inside each category.
    let rank = |name: &str| SizeCategory::SCORED.iter().position(|c| c.as_str() == name);
    sizes.sort_by_key(|c| rank(&c.stratum));
    write_cells(w, overall.chain(sizes))
}
