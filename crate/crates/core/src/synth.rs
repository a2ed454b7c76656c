//! Seeded synthetic scenes and mock detections with known expected metrics.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::annotate::{size_category, Annotation, BBox, DensityCategory, SceneRecord, SizeCategory, DENSITY_BIN_EDGES};
use crate::error::{Error, Result};
use crate::matcheval::Detection;

/// Side of the default square scene, in meters (about one 45,000 m² tile).
pub const DEFAULT_EXTENT_M: f64 = 210.0;
/// Upper area bound used when sampling VeryLarge buildings, in m².
pub const VERY_LARGE_MAX_AREA_M2: f64 = 600.0;
/// Largest building count drawn for a High density target.
pub const HIGH_DENSITY_MAX: usize = 120;
pub const DEFAULT_PLACEMENT_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DensityTarget {
    Category(DensityCategory),
    Count(usize),
}

/// How mock detections are derived from ground truth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DetectorModel {
    /// One exact copy of every box.
    Perfect,
    /// Every box edge displaced by Gaussian noise of `sigma` meters.
    Jitter { sigma: f64 },
    /// Each box independently missed with probability `rate`.
    Dropout { rate: f64 },
    /// Exact copies plus, per box, a spurious detection in free space with probability `rate`.
    Spurious { rate: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub seed: u64,
    pub n_scenes: usize,
    pub density_target: DensityTarget,
    /// Relative weights of VerySmall, Small, Medium, Large, VeryLarge.
    pub size_mix: [f64; 5],
    pub detector_model: DetectorModel,
    /// Confidences are drawn uniformly from `[lo, hi]`.
    #[serde(default = "default_confidence")]
    pub confidence_range: (f64, f64),
    #[serde(default = "default_extent")]
    pub extent_m: f64,
    #[serde(default = "default_attempts")]
    pub max_attempts: usize,
}

fn default_confidence() -> (f64, f64) {
    (1.0, 1.0)
}

fn default_extent() -> f64 {
    DEFAULT_EXTENT_M
}

fn default_attempts() -> usize {
    DEFAULT_PLACEMENT_ATTEMPTS
}

impl SynthSpec {
    pub fn new(seed: u64, n_scenes: usize, density_target: DensityTarget, detector_model: DetectorModel) -> Self {
        SynthSpec {
            seed,
            n_scenes,
            density_target,
            size_mix: [1.0; 5],
            detector_model,
            confidence_range: default_confidence(),
            extent_m: DEFAULT_EXTENT_M,
            max_attempts: DEFAULT_PLACEMENT_ATTEMPTS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSynthSpec(m));
        if self.size_mix.iter().any(|w| !w.is_finite() || *w < 0.0) || self.size_mix.iter().sum::<f64>() <= 0.0 {
            return bad(format!("size mix {:?} must be non-negative with a positive sum", self.size_mix));
        }
        let rate_ok = |r: f64| (0.0..=1.0).contains(&r);
        match self.detector_model {
            DetectorModel::Jitter { sigma } if !(sigma.is_finite() && sigma >= 0.0) => {
                return bad(format!("jitter sigma {sigma} must be non-negative"))
            }
            DetectorModel::Dropout { rate } | DetectorModel::Spurious { rate } if !rate_ok(rate) => {
                return bad(format!("rate {rate} outside [0, 1]"))
            }
            _ => {}
        }
        let (lo, hi) = self.confidence_range;
        if !(rate_ok(lo) && rate_ok(hi) && lo <= hi) {
            return bad(format!("confidence range ({lo}, {hi}) must satisfy 0 <= lo <= hi <= 1"));
        }
        if !(self.extent_m.is_finite() && self.extent_m > 0.0) {
            return bad(format!("extent {} must be positive", self.extent_m));
        }
        Ok(())
    }
}

/// Seed of scene `index`: the `SynthSpec` seed XOR a multiplicative hash of the index.
pub fn scene_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Generates `n_scenes` scenes in parallel; the result is independent of thread count.
pub fn generate(spec: &SynthSpec) -> Result<Vec<(SceneRecord, Vec<Detection>)>> {
    spec.validate()?;
    (0..spec.n_scenes).into_par_iter().map(|i| generate_scene(spec, i)).collect()
}

fn generate_scene(spec: &SynthSpec, index: usize) -> Result<(SceneRecord, Vec<Detection>)> {
    let scene_id = format!("synth_{index:05}");
    let mut rng = ChaCha8Rng::seed_from_u64(scene_seed(spec.seed, index));
    let extent = BBox::new(0.0, 0.0, spec.extent_m, spec.extent_m)?;

    let count = match spec.density_target {
        DensityTarget::Count(n) => n,
        DensityTarget::Category(DensityCategory::Low) => rng.random_range(0..DENSITY_BIN_EDGES[0]),
        DensityTarget::Category(DensityCategory::Moderate) => {
            rng.random_range(DENSITY_BIN_EDGES[0]..DENSITY_BIN_EDGES[1])
        }
        DensityTarget::Category(DensityCategory::High) => rng.random_range(DENSITY_BIN_EDGES[1]..=HIGH_DENSITY_MAX),
    };

    let mut boxes: Vec<BBox> = Vec::with_capacity(count);
    while boxes.len() < count {
        let category = pick_category(&spec.size_mix, &mut rng);
        let placed = place_disjoint(&mut rng, &extent, &boxes, spec.max_attempts, |rng| sample_dims(category, rng));
        match placed {
            Some(b) => boxes.push(b),
            None => return Err(Error::PlacementExhausted { scene: scene_id, placed: boxes.len(), requested: count }),
        }
    }

    let confidence = |rng: &mut ChaCha8Rng| {
        let (lo, hi) = spec.confidence_range;
        if lo == hi {
            lo
        } else {
            rng.random_range(lo..=hi)
        }
    };
    let mut dets = Vec::with_capacity(count);
    let mut spurious = 0;
    for b in &boxes {
        match spec.detector_model {
            DetectorModel::Perfect => dets.push((*b, confidence(&mut rng))),
            DetectorModel::Jitter { sigma } => dets.push((jitter(b, sigma, &extent, &mut rng), confidence(&mut rng))),
            DetectorModel::Dropout { rate } => {
                if rng.random::<f64>() >= rate {
                    dets.push((*b, confidence(&mut rng)));
                }
            }
            DetectorModel::Spurious { rate } => {
                dets.push((*b, confidence(&mut rng)));
                if rng.random::<f64>() < rate {
                    spurious += 1;
                }
            }
        }
    }
    for _ in 0..spurious {
        let category = pick_category(&spec.size_mix, &mut rng);
        match place_disjoint(&mut rng, &extent, &boxes, spec.max_attempts, |rng| sample_dims(category, rng)) {
            Some(b) => dets.push((b, confidence(&mut rng))),
            None => return Err(Error::PlacementExhausted { scene: scene_id, placed: boxes.len(), requested: count }),
        }
    }

    let gt = boxes.into_iter().map(|b| Annotation::new(scene_id.as_str(), b)).collect();
    let dets =
        dets.into_iter().map(|(bbox, confidence)| Detection { scene_id: scene_id.clone(), bbox, confidence }).collect();
    Ok((SceneRecord::new(scene_id, extent, gt), dets))
}

fn pick_category(mix: &[f64; 5], rng: &mut ChaCha8Rng) -> SizeCategory {
    let total: f64 = mix.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (cat, w) in SizeCategory::SCORED.iter().zip(mix) {
        if u < *w {
            return *cat;
        }
        u -= w;
    }
    // Rounding can leave u just above the last weight; take the last non-zero bin.
    let last = mix.iter().rposition(|w| *w > 0.0).unwrap_or(4);
    SizeCategory::SCORED[last]
}

/// Width and height with area inside the category's bin and aspect ratio in [0.5, 2].
fn sample_dims(category: SizeCategory, rng: &mut ChaCha8Rng) -> (f64, f64) {
    let (lo, hi) = category.area_range();
    let hi = hi.min(VERY_LARGE_MAX_AREA_M2);
    loop {
        let area = rng.random_range(lo..hi);
        let aspect = rng.random_range(0.5..=2.0);
        let w = (area * aspect).sqrt();
        let h = area / w;
        if size_category(w * h).ok() == Some(category) {
            return (w, h);
        }
    }
}

fn place_disjoint(
    rng: &mut ChaCha8Rng,
    extent: &BBox,
    existing: &[BBox],
    attempts: usize,
    mut dims: impl FnMut(&mut ChaCha8Rng) -> (f64, f64),
) -> Option<BBox> {
    for _ in 0..attempts {
        let (w, h) = dims(rng);
        if w >= extent.width() || h >= extent.height() {
            continue;
        }
        let x0 = extent.x_min() + rng.random::<f64>() * (extent.width() - w);
        let y0 = extent.y_min() + rng.random::<f64>() * (extent.height() - h);
        let Ok(candidate) = BBox::new(x0, y0, x0 + w, y0 + h) else { continue };
        if existing.iter().all(|e| e.intersection_area(&candidate) == 0.0) {
            return Some(candidate);
        }
    }
    None
}

/// Independent Gaussian displacement of each edge, clamped to the extent and to a 0.1 m minimum side.
fn jitter(b: &BBox, sigma: f64, extent: &BBox, rng: &mut ChaCha8Rng) -> BBox {
    const MIN_SIDE: f64 = 0.1;
    let mut d = [0.0; 4];
    if sigma > 0.0 {
        let normal = Normal::new(0.0, sigma).expect("sigma validated");
        for v in &mut d {
            *v = normal.sample(rng);
        }
    }
    let clamp_axis = |lo: f64, hi: f64, min: f64, max: f64| {
        let lo = lo.clamp(min, max - MIN_SIDE);
        let hi = hi.clamp(lo + MIN_SIDE, max);
        (lo, hi)
    };
    let (x0, x1) = clamp_axis(b.x_min() + d[0], b.x_max() + d[2], extent.x_min(), extent.x_max());
    let (y0, y1) = clamp_axis(b.y_min() + d[1], b.y_max() + d[3], extent.y_min(), extent.y_max());
    BBox::new(x0, y0, x1, y1).expect("clamped box is valid")
}
