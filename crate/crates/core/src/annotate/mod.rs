//! Footprint annotations: boxes, size and density bins, splits, and classifier patches.

mod geojson;
mod patches;
mod splits;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use self::geojson::{parse_feature_collection, CrsMode, FootprintCollection};
pub use self::patches::{extract_patches, extract_patches_with, Patch, PatchLabel, DEFAULT_MAX_ATTEMPTS};
pub use self::splits::{make_splits, SplitMode, SplitPlan};

/// Minimum footprint area kept by the preparation pipeline, in m².
pub const DEFAULT_MIN_AREA_M2: f64 = 25.0;
/// Context padding added around every box, in meters.
pub const DEFAULT_PAD_M: f64 = 6.0;
/// Lower edges of the VerySmall..VeryLarge size bins, in m².
pub const SIZE_BIN_EDGES_M2: [f64; 5] = [25.0, 75.0, 118.0, 168.0, 250.0];
/// Lower edges of the Moderate and High density bins, in buildings per scene.
pub const DENSITY_BIN_EDGES: [usize; 2] = [40, 90];

/// Axis-aligned box in scene-local meters (origin top-left, y down).
///
/// Serialized as `[x_min, y_min, x_max, y_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct BBox {
    x_min: f64,
    y_min: f64,
    x_max: f64,
    y_max: f64,
}

impl BBox {
    pub fn new(x_min: f64, y_min: f64, x_max: f64, y_max: f64) -> Result<Self> {
        let finite = [x_min, y_min, x_max, y_max].iter().all(|v| v.is_finite());
        if !finite || x_min >= x_max || y_min >= y_max {
            return Err(Error::InvalidBBox { x_min, y_min, x_max, y_max });
        }
        Ok(BBox { x_min, y_min, x_max, y_max })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn y_min(&self) -> f64 {
        self.y_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn y_max(&self) -> f64 {
        self.y_max
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn intersection_area(&self, other: &BBox) -> f64 {
        let w = self.x_max.min(other.x_max) - self.x_min.max(other.x_min);
        let h = self.y_max.min(other.y_max) - self.y_min.max(other.y_min);
        if w > 0.0 && h > 0.0 {
            w * h
        } else {
            0.0
        }
    }

    /// Intersection with `other`, or `None` when the overlap has no area.
    pub fn clip_to(&self, other: &BBox) -> Option<BBox> {
        BBox::new(
            self.x_min.max(other.x_min),
            self.y_min.max(other.y_min),
            self.x_max.min(other.x_max),
            self.y_max.min(other.y_max),
        )
        .ok()
    }

    pub fn contains(&self, other: &BBox) -> bool {
        self.x_min <= other.x_min && self.y_min <= other.y_min && self.x_max >= other.x_max && self.y_max >= other.y_max
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.x_min, self.y_min, self.x_max, self.y_max]
    }
}

impl TryFrom<[f64; 4]> for BBox {
    type Error = Error;

    fn try_from(v: [f64; 4]) -> Result<Self> {
        BBox::new(v[0], v[1], v[2], v[3])
    }
}

impl From<BBox> for [f64; 4] {
    fn from(b: BBox) -> Self {
        b.to_array()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SizeCategory {
    BelowMinimum,
    VerySmall,
    Small,
    Medium,
    Large,
    VeryLarge,
}

impl SizeCategory {
    /// The five categories that take part in per-size scoring.
    pub const SCORED: [SizeCategory; 5] = [
        SizeCategory::VerySmall,
        SizeCategory::Small,
        SizeCategory::Medium,
        SizeCategory::Large,
        SizeCategory::VeryLarge,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SizeCategory::BelowMinimum => "below_minimum",
            SizeCategory::VerySmall => "very_small",
            SizeCategory::Small => "small",
            SizeCategory::Medium => "medium",
            SizeCategory::Large => "large",
            SizeCategory::VeryLarge => "very_large",
        }
    }

    /// Half-open `[low, high)` area range in m²; `high` is infinite for VeryLarge.
    pub fn area_range(self) -> (f64, f64) {
        let e = SIZE_BIN_EDGES_M2;
        match self {
            SizeCategory::BelowMinimum => (0.0, e[0]),
            SizeCategory::VerySmall => (e[0], e[1]),
            SizeCategory::Small => (e[1], e[2]),
            SizeCategory::Medium => (e[2], e[3]),
            SizeCategory::Large => (e[3], e[4]),
            SizeCategory::VeryLarge => (e[4], f64::INFINITY),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityCategory {
    Low,
    Moderate,
    High,
}

impl DensityCategory {
    pub const ALL: [DensityCategory; 3] = [DensityCategory::Low, DensityCategory::Moderate, DensityCategory::High];

    pub fn as_str(self) -> &'static str {
        match self {
            DensityCategory::Low => "low",
            DensityCategory::Moderate => "moderate",
            DensityCategory::High => "high",
        }
    }
}

/// Bins a footprint area. Bins are half-open and lower-inclusive.
pub fn size_category(area_m2: f64) -> Result<SizeCategory> {
    if area_m2.is_nan() || area_m2 < 0.0 {
        return Err(Error::InvalidArea(area_m2));
    }
    let e = SIZE_BIN_EDGES_M2;
    Ok(if area_m2 < e[0] {
        SizeCategory::BelowMinimum
    } else if area_m2 < e[1] {
        SizeCategory::VerySmall
    } else if area_m2 < e[2] {
        SizeCategory::Small
    } else if area_m2 < e[3] {
        SizeCategory::Medium
    } else if area_m2 < e[4] {
        SizeCategory::Large
    } else {
        SizeCategory::VeryLarge
    })
}

pub fn density_category(count: usize) -> DensityCategory {
    match count {
        c if c < DENSITY_BIN_EDGES[0] => DensityCategory::Low,
        c if c < DENSITY_BIN_EDGES[1] => DensityCategory::Moderate,
        _ => DensityCategory::High,
    }
}

/// A ground-truth building box.
///
/// `area_m2` and `size_category` describe the footprint's own box and are
/// left untouched by padding, so after [`filter_and_pad`] `bbox.area()` may
/// exceed `area_m2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Annotation {
    #[serde(default, skip_serializing)]
    pub scene_id: String,
    pub bbox: BBox,
    pub area_m2: f64,
    pub size_category: SizeCategory,
}

impl Annotation {
    /// An unpadded annotation; area and category come from the box itself.
    pub fn new(scene_id: impl Into<String>, bbox: BBox) -> Self {
        let area_m2 = bbox.area();
        let size_category = size_category(area_m2).expect("box areas are positive");
        Annotation { scene_id: scene_id.into(), bbox, area_m2, size_category }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneRecord {
    pub scene_id: String,
    pub extent: BBox,
    pub gt: Vec<Annotation>,
    pub density_category: DensityCategory,
}

impl SceneRecord {
    /// Builds a record, deriving the density category from the box count.
    pub fn new(scene_id: impl Into<String>, extent: BBox, mut gt: Vec<Annotation>) -> Self {
        let scene_id = scene_id.into();
        for a in &mut gt {
            a.scene_id.clone_from(&scene_id);
        }
        let density_category = density_category(gt.len());
        SceneRecord { scene_id, extent, gt, density_category }
    }

    /// Restores per-annotation scene ids after deserialization and checks the density invariant.
    pub fn normalize(mut self) -> Result<Self> {
        for a in &mut self.gt {
            a.scene_id.clone_from(&self.scene_id);
        }
        let expected = density_category(self.gt.len());
        if expected != self.density_category {
            return Err(Error::parse(
                format!("scene {}", self.scene_id),
                format!("density {:?} does not match {} boxes", self.density_category, self.gt.len()),
            ));
        }
        Ok(self)
    }
}

/// Tight box around a footprint polygon.
pub fn footprint_to_bbox(polygon: &[(f64, f64)]) -> Result<BBox> {
    if polygon.len() < 3 {
        return Err(Error::DegenerateFootprint(format!("{} vertices", polygon.len())));
    }
    if polygon.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::DegenerateFootprint("non-finite coordinate".into()));
    }
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &(x, y) in polygon {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    BBox::new(x0, y0, x1, y1)
        .map_err(|_| Error::DegenerateFootprint(format!("zero-extent box ({x0}, {y0}, {x1}, {y1})")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PadMode {
    /// `pad` meters added on each side.
    #[default]
    PerSide,
    /// `pad` meters added in total along each axis, half per side.
    Total,
}

/// Drops boxes under `min_area`, pads survivors outward, and clips them to `extent`.
///
/// Boxes with no overlap with `extent` are dropped as well. Area and size
/// category keep their pre-padding values.
pub fn filter_and_pad(gt: &[Annotation], min_area: f64, pad: f64, pad_mode: PadMode, extent: &BBox) -> Vec<Annotation> {
    let per_side = match pad_mode {
        PadMode::PerSide => pad,
        PadMode::Total => pad / 2.0,
    };
    gt.iter()
        .filter(|a| a.area_m2 >= min_area)
        .filter_map(|a| {
            let b = a.bbox;
            let padded = BBox {
                x_min: b.x_min - per_side,
                y_min: b.y_min - per_side,
                x_max: b.x_max + per_side,
                y_max: b.y_max + per_side,
            };
            padded.clip_to(extent).map(|bbox| Annotation { bbox, ..a.clone() })
        })
        .collect()
}
