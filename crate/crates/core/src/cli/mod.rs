//! The `spectra-eval` command-line front end.
//!
//! Every subcommand writes deterministic payload files: rerunning with the
//! same inputs and flags reproduces them byte for byte. Exit codes are 0 on
//! success, 2 for usage or input errors and 3 for internal invariant
//! violations. Verbosity follows the `SPECTRA_EVAL_LOG` environment variable.

mod plot;

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{debug, info, warn};
use serde::{Deserialize, Serialize};

use crate::annotate::{
    filter_and_pad, footprint_to_bbox, make_splits, parse_feature_collection, Annotation, BBox, DensityCategory,
    PadMode, SceneRecord, SizeCategory, SplitMode, DEFAULT_MIN_AREA_M2, DEFAULT_PAD_M,
};
use crate::matcheval::{f1_grid, report, write_grid_csv, write_report_csv, Detection, EvalReport, F1Grid};
use crate::netexpand::{expand, read_tensor, write_tensor, ExpansionSpec, ScaleMode, Strategy};
use crate::raster::{read_tiff_info, BandInfo};
use crate::stats::{analyze, read_fold_csv, VarianceMode};
use crate::synth::{generate, SynthSpec};
use crate::{jsonl, Error};

pub use self::plot::{plot_series, render_svg, PlotSeries};

pub const LOG_ENV: &str = "SPECTRA_EVAL_LOG";

#[derive(Debug, Parser)]
#[command(
    name = "spectra-eval",
    version,
    about = "Prepare, score, and compare building detections on multi-band imagery"
)]
pub struct Cli {
    /// Worker threads for scene-parallel steps (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Footprint GeoJSON -> padded annotation boxes, bin histograms, optional splits.
    Prepare(PrepareArgs),
    /// Score detections against ground truth.
    Evaluate(EvaluateArgs),
    /// Fold summaries and pairwise t-tests from a fold CSV.
    Stats(StatsArgs),
    /// Expand RGB first-layer weights to more input bands.
    Expand(ExpandArgs),
    /// Generate synthetic ground truth and detections.
    Synth(SynthArgs),
    /// Bar chart data from a prepare-stats or evaluation report.
    Plot(PlotArgs),
}

#[derive(Debug, Args)]
pub struct PrepareArgs {
    /// Directory of `<scene>.geojson` files.
    pub geojson_dir: PathBuf,
    /// Directory of `<scene>.tif` rasters that fix scene extents.
    #[arg(long)]
    pub raster_dir: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MIN_AREA_M2)]
    pub min_area: f64,
    #[arg(long, default_value_t = DEFAULT_PAD_M)]
    pub pad: f64,
    #[arg(long, value_enum, default_value_t = PadModeArg::PerSide)]
    pub pad_mode: PadModeArg,
    #[arg(long, conflicts_with = "holdout")]
    pub kfold: Option<usize>,
    /// Test fraction of a single holdout split.
    #[arg(long)]
    pub holdout: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PadModeArg {
    PerSide,
    Total,
}

impl From<PadModeArg> for PadMode {
    fn from(m: PadModeArg) -> Self {
        match m {
            PadModeArg::PerSide => PadMode::PerSide,
            PadModeArg::Total => PadMode::Total,
        }
    }
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Scene records, one JSON object per line.
    pub gt: PathBuf,
    /// Detections, one JSON object per line.
    pub det: PathBuf,
    #[arg(long, default_values_t = [0.5])]
    pub iou: Vec<f64>,
    #[arg(long, default_values_t = [0.5])]
    pub conf: Vec<f64>,
    /// Also emit the size x IoU x confidence F1 grid.
    #[arg(long)]
    pub grid: bool,
    /// Restrict output to one format; both JSON and CSV by default.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// `condition,metric,fold,value` rows.
    pub folds: PathBuf,
    #[arg(long, value_enum, default_value_t = TestArg::Pooled)]
    pub test: TestArg,
    /// Output file; stdout when absent.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TestArg {
    Pooled,
    Welch,
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    pub weights: PathBuf,
    /// JSON array of `{"name", "wavelength_nm"}` target bands.
    pub bands: PathBuf,
    #[arg(long, value_enum, default_value_t = StrategyArg::Nearest)]
    pub strategy: StrategyArg,
    /// Required by the random strategy.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = ScaleArg::None)]
    pub scale: ScaleArg,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StrategyArg {
    Random,
    Cyclic,
    Nearest,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ScaleArg {
    None,
    Multiplicity,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    pub spec: PathBuf,
    /// Overrides the `seed` field of the spec file.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// `prepare_stats.json` or `report.json`.
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Svg)]
    pub format: Format,
    #[arg(long, short)]
    pub out: PathBuf,
}

/// A failed run and its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }

    fn internal(message: impl Into<String>) -> Self {
        CliError { code: 3, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::input(e.to_string())
    }
}

type CliResult<T = ()> = Result<T, CliError>;

/// Parses `args` and runs the chosen subcommand, reporting errors on stderr.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::new().filter_or(LOG_ENV, "warn")).try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = std::panic::catch_unwind(|| execute(&cli)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .map(String::as_str)
            .or_else(|| p.downcast_ref::<&str>().copied())
            .unwrap_or("panic");
        Err(CliError::internal(format!("internal error: {msg}")))
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> CliResult {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.jobs {
        if n == 0 {
            return Err(CliError::input("--jobs must be at least 1"));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::internal(e.to_string()))?;
    pool.install(|| match &cli.command {
        Command::Prepare(a) => cmd_prepare(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Stats(a) => cmd_stats(a),
        Command::Expand(a) => cmd_expand(a),
        Command::Synth(a) => cmd_synth(a),
        Command::Plot(a) => cmd_plot(a),
    })
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn create_dir(path: &Path) -> CliResult {
    fs::create_dir_all(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn write_bytes(path: &Path, bytes: &[u8]) -> CliResult {
    fs::write(path, bytes).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> CliResult<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value).map_err(|e| CliError::internal(e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}

fn check_unit(name: &str, v: f64) -> CliResult {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(CliError::input(format!("--{name} {v} must lie in [0, 1]")))
    }
}

/// Summary written by `prepare` next to the annotations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrepareStats {
    pub scenes: usize,
    /// Scenes skipped because no extent could be determined.
    pub skipped_scenes: Vec<String>,
    pub total_boxes: usize,
    pub degenerate: usize,
    pub below_min_area: usize,
    pub outside_extent: usize,
    pub discarded: usize,
    pub kept: usize,
    pub min_area_m2: f64,
    pub pad_m: f64,
    pub size_histogram: BTreeMap<SizeCategory, usize>,
    pub density_histogram: BTreeMap<DensityCategory, usize>,
}

fn raster_for(dir: &Path, stem: &str) -> Option<PathBuf> {
    ["tif", "tiff", "TIF", "TIFF"].iter().map(|ext| dir.join(format!("{stem}.{ext}"))).find(|p| p.is_file())
}

struct SceneInput {
    id: String,
    extent: Option<BBox>,
    boxes: Vec<BBox>,
    degenerate: usize,
}

fn read_scene(path: &Path, raster_dir: Option<&Path>) -> CliResult<SceneInput> {
    let id = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_owned();
    let mut extent = None;
    let mut gsd = None;
    if let Some(raster) = raster_dir.and_then(|d| raster_for(d, &id)) {
        let bytes = fs::read(&raster).map_err(|e| CliError::input(format!("{}: {e}", raster.display())))?;
        let info = read_tiff_info(&bytes).map_err(|e| CliError::input(format!("{}: {e}", raster.display())))?;
        let (sx, sy) = info.pixel_scale.unwrap_or((1.0, 1.0));
        gsd = Some((sx, sy));
        extent = Some(BBox::new(0.0, 0.0, info.width as f64 * sx, info.height as f64 * sy)?);
    }
    let fc = parse_feature_collection(&read_text(path)?, gsd)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    if extent.is_none() {
        if let Some([x0, y0, x1, y1]) = fc.extent {
            extent = Some(BBox::new(x0, y0, x1, y1)?);
        }
    }
    let mut boxes = Vec::with_capacity(fc.polygons.len());
    let mut degenerate = 0;
    for (i, poly) in fc.polygons.iter().enumerate() {
        match footprint_to_bbox(poly) {
            Ok(b) => boxes.push(b),
            Err(e) => {
                debug!("{id} feature {i}: {e}");
                degenerate += 1;
            }
        }
    }
    Ok(SceneInput { id, extent, boxes, degenerate })
}

/// Union of the boxes grown by `margin`.
fn bounds(boxes: &[BBox], margin: f64) -> Option<BBox> {
    let first = boxes.first()?;
    let (mut x0, mut y0, mut x1, mut y1) = (first.x_min(), first.y_min(), first.x_max(), first.y_max());
    for b in boxes {
        x0 = x0.min(b.x_min());
        y0 = y0.min(b.y_min());
        x1 = x1.max(b.x_max());
        y1 = y1.max(b.y_max());
    }
    BBox::new(x0 - margin, y0 - margin, x1 + margin, y1 + margin).ok()
}

pub fn cmd_prepare(a: &PrepareArgs) -> CliResult {
    if !(a.min_area.is_finite() && a.min_area >= 0.0) {
        return Err(CliError::input(format!("--min-area {} must be non-negative", a.min_area)));
    }
    if !(a.pad.is_finite() && a.pad >= 0.0) {
        return Err(CliError::input(format!("--pad {} must be non-negative", a.pad)));
    }
    let split = match (a.kfold, a.holdout) {
        (Some(k), None) => Some(SplitMode::KFold { k }),
        (None, Some(ratio)) => Some(SplitMode::Holdout { ratio }),
        _ => None,
    };
    let seed = match (split, a.seed) {
        (Some(_), None) => return Err(CliError::input("--kfold and --holdout require --seed")),
        (_, s) => s,
    };

    let entries =
        fs::read_dir(&a.geojson_dir).map_err(|e| CliError::input(format!("{}: {e}", a.geojson_dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x.eq_ignore_ascii_case("geojson")))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(CliError::input(format!("no scenes found in {}", a.geojson_dir.display())));
    }

    let pad_mode = PadMode::from(a.pad_mode);
    let margin = match pad_mode {
        PadMode::PerSide => a.pad,
        PadMode::Total => a.pad / 2.0,
    };
    let mut records = Vec::with_capacity(paths.len());
    let mut stats = PrepareStats {
        scenes: 0,
        skipped_scenes: Vec::new(),
        total_boxes: 0,
        degenerate: 0,
        below_min_area: 0,
        outside_extent: 0,
        discarded: 0,
        kept: 0,
        min_area_m2: a.min_area,
        pad_m: a.pad,
        size_histogram: SizeCategory::SCORED.iter().map(|&c| (c, 0)).collect(),
        density_histogram: DensityCategory::ALL.iter().map(|&c| (c, 0)).collect(),
    };
    for path in &paths {
        let scene = read_scene(path, a.raster_dir.as_deref())?;
        stats.total_boxes += scene.boxes.len() + scene.degenerate;
        stats.degenerate += scene.degenerate;
        let Some(extent) = scene.extent.or_else(|| bounds(&scene.boxes, margin)) else {
            warn!("{}: no raster, declared extent, or footprints; scene skipped", scene.id);
            stats.skipped_scenes.push(scene.id);
            continue;
        };
        let raw: Vec<Annotation> = scene.boxes.iter().map(|&b| Annotation::new(&*scene.id, b)).collect();
        let below = raw.iter().filter(|x| x.area_m2 < a.min_area).count();
        let kept = filter_and_pad(&raw, a.min_area, a.pad, pad_mode, &extent);
        stats.below_min_area += below;
        stats.outside_extent += raw.len() - below - kept.len();
        let record = SceneRecord::new(scene.id, extent, kept);
        for ann in &record.gt {
            if let Some(n) = stats.size_histogram.get_mut(&ann.size_category) {
                *n += 1;
            }
        }
        *stats.density_histogram.entry(record.density_category).or_default() += 1;
        stats.kept += record.gt.len();
        records.push(record);
    }
    stats.scenes = records.len();
    stats.discarded = stats.total_boxes - stats.kept;
    if stats.discarded != stats.degenerate + stats.below_min_area + stats.outside_extent {
        return Err(CliError::internal("box accounting does not balance"));
    }
    if records.is_empty() {
        return Err(CliError::input(format!("no scenes found in {}", a.geojson_dir.display())));
    }

    create_dir(&a.out)?;
    jsonl::write(a.out.join("annotations.jsonl"), &records)?;
    write_bytes(&a.out.join("prepare_stats.json"), &to_json(&stats)?)?;
    if let (Some(mode), Some(seed)) = (split, seed) {
        let plan = make_splits(&records.iter().map(|r| r.scene_id.as_str()).collect::<Vec<_>>(), mode, seed)?;
        write_bytes(&a.out.join("splits.json"), &to_json(&plan)?)?;
    }

    println!(
        "scenes {} | boxes {} | kept {} | discarded {} (below {} m2: {}, degenerate: {}, outside extent: {})",
        stats.scenes,
        stats.total_boxes,
        stats.kept,
        stats.discarded,
        a.min_area,
        stats.below_min_area,
        stats.degenerate,
        stats.outside_extent
    );
    let hist: Vec<String> = stats.size_histogram.iter().map(|(k, v)| format!("{}={v}", k.as_str())).collect();
    println!("sizes {}", hist.join(" "));
    Ok(())
}

/// `report.json` as written by `evaluate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluateOutput {
    pub reports: Vec<EvalReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<F1Grid>,
}

/// Pairs every scene with its detections; unknown detection scenes are an input error.
pub fn join_scenes(records: Vec<SceneRecord>, dets: Vec<Detection>) -> CliResult<Vec<(SceneRecord, Vec<Detection>)>> {
    let mut by_scene: BTreeMap<String, Vec<Detection>> = BTreeMap::new();
    for d in dets {
        d.validate()?;
        by_scene.entry(d.scene_id.clone()).or_default().push(d);
    }
    let mut scenes = Vec::with_capacity(records.len());
    for r in records {
        let r = r.normalize()?;
        let d = by_scene.remove(&r.scene_id).unwrap_or_default();
        scenes.push((r, d));
    }
    if !by_scene.is_empty() {
        let missing: Vec<&str> = by_scene.keys().map(String::as_str).collect();
        return Err(CliError::input(format!(
            "detections reference scenes absent from ground truth: {}",
            missing.join(", ")
        )));
    }
    Ok(scenes)
}

pub fn cmd_evaluate(a: &EvaluateArgs) -> CliResult {
    for &v in &a.iou {
        check_unit("iou", v)?;
    }
    for &v in &a.conf {
        check_unit("conf", v)?;
    }
    if a.format == Some(Format::Svg) {
        return Err(CliError::input("evaluate writes json or csv; use `plot` for svg"));
    }
    let records: Vec<SceneRecord> = jsonl::read(&a.gt)?;
    let dets: Vec<Detection> = jsonl::read(&a.det)?;
    let gt_ids: BTreeSet<&str> = records.iter().map(|r| r.scene_id.as_str()).collect();
    if gt_ids.len() != records.len() {
        return Err(CliError::input("ground truth repeats a scene id"));
    }
    let total_gt: usize = records.iter().map(|r| r.gt.len()).sum();
    let scenes = join_scenes(records, dets)?;

    let mut reports = Vec::new();
    for &iou in &a.iou {
        for &conf in &a.conf {
            let r = report(&scenes, iou, conf)?;
            if r.overall.counts.tp + r.overall.counts.fn_ != total_gt {
                return Err(CliError::internal(format!(
                    "TP + FN != {total_gt} ground-truth boxes at iou {iou}, conf {conf}"
                )));
            }
            info!("iou {iou} conf {conf}: f1 {:.4}", r.overall.f1);
            reports.push(r);
        }
    }
    let grid = if a.grid {
        Some(f1_grid(&scenes, &crate::matcheval::DEFAULT_IOU_SET, &crate::matcheval::DEFAULT_CONF_SET)?)
    } else {
        None
    };

    create_dir(&a.out)?;
    if a.format != Some(Format::Csv) {
        let out = EvaluateOutput { reports: reports.clone(), grid: grid.clone() };
        write_bytes(&a.out.join("report.json"), &to_json(&out)?)?;
    }
    if a.format != Some(Format::Json) {
        let mut buf = Vec::new();
        write_report_csv(&mut buf, &reports)?;
        write_bytes(&a.out.join("report.csv"), &buf)?;
        if let Some(g) = &grid {
            let mut buf = Vec::new();
            write_grid_csv(&mut buf, g)?;
            write_bytes(&a.out.join("grid.csv"), &buf)?;
        }
    }
    for r in &reports {
        let c = r.overall.counts;
        println!(
            "iou {} conf {} | tp {} fp {} fn {} | precision {:.4} recall {:.4} f1 {:.4}",
            r.iou_thresh, r.conf_thresh, c.tp, c.fp, c.fn_, r.overall.precision, r.overall.recall, r.overall.f1
        );
    }
    Ok(())
}

pub fn cmd_stats(a: &StatsArgs) -> CliResult {
    let file = fs::File::open(&a.folds).map_err(|e| CliError::input(format!("{}: {e}", a.folds.display())))?;
    let scores = read_fold_csv(file)?;
    let mode = match a.test {
        TestArg::Pooled => VarianceMode::Pooled,
        TestArg::Welch => VarianceMode::Welch,
    };
    let body = to_json(&analyze(&scores, mode)?)?;
    match &a.out {
        Some(p) => write_bytes(p, &body),
        None => std::io::stdout().write_all(&body).map_err(|e| CliError::internal(e.to_string())),
    }
}

pub fn cmd_expand(a: &ExpandArgs) -> CliResult {
    let strategy = match a.strategy {
        StrategyArg::Random => Strategy::Random,
        StrategyArg::Cyclic => Strategy::ReplicateCyclic,
        StrategyArg::Nearest => Strategy::ReplicateNearestWavelength,
    };
    let seed = match (strategy, a.seed) {
        (Strategy::Random, None) => return Err(CliError::input("--strategy random requires --seed")),
        (_, s) => s.unwrap_or(0),
    };
    let target_bands: Vec<BandInfo> = serde_json::from_str(&read_text(&a.bands)?)
        .map_err(|e| CliError::input(format!("{}: {e}", a.bands.display())))?;
    let w = read_tensor(&a.weights)?;
    let spec = ExpansionSpec {
        strategy,
        target_bands,
        seed,
        scale_mode: match a.scale {
            ScaleArg::None => ScaleMode::None,
            ScaleArg::Multiplicity => ScaleMode::DivideByMultiplicity,
        },
    };
    let out = expand(&w, &spec)?;
    write_tensor(&out, &a.out)?;
    let s = out.shape();
    println!("{}x{}x{}x{} -> {}", s[0], s[1], s[2], s[3], a.out.display());
    Ok(())
}

pub fn cmd_synth(a: &SynthArgs) -> CliResult {
    let mut spec: SynthSpec = serde_json::from_str(&read_text(&a.spec)?)
        .map_err(|e| CliError::input(format!("{}: {e}", a.spec.display())))?;
    if let Some(seed) = a.seed {
        spec.seed = seed;
    }
    let scenes = generate(&spec)?;
    let records: Vec<&SceneRecord> = scenes.iter().map(|(r, _)| r).collect();
    let dets: Vec<&Detection> = scenes.iter().flat_map(|(_, d)| d).collect();
    create_dir(&a.out)?;
    jsonl::write(a.out.join("gt.jsonl"), &records)?;
    jsonl::write(a.out.join("det.jsonl"), &dets)?;
    println!(
        "scenes {} | gt boxes {} | detections {}",
        records.len(),
        records.iter().map(|r| r.gt.len()).sum::<usize>(),
        dets.len()
    );
    Ok(())
}

pub fn cmd_plot(a: &PlotArgs) -> CliResult {
    let value: serde_json::Value = serde_json::from_str(&read_text(&a.input)?)
        .map_err(|e| CliError::input(format!("{}: {e}", a.input.display())))?;
    let series = plot_series(&value).map_err(|m| CliError::input(format!("{}: {m}", a.input.display())))?;
    let body = match a.format {
        Format::Svg => render_svg(&series).into_bytes(),
        Format::Csv => plot::render_csv(&series).into_bytes(),
        Format::Json => to_json(&series)?,
    };
    write_bytes(&a.out, &body)
}
