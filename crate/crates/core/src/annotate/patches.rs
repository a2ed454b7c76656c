use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{BBox, SceneRecord};
use crate::error::{Error, Result};
use crate::raster::MultibandImage;

/// Placement attempts allowed per negative patch.
pub const DEFAULT_MAX_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatchLabel {
    Building,
    NotBuilding,
}

#[derive(Debug, Clone)]
pub struct Patch {
    /// Box in scene meters the patch was cut from.
    pub bbox: BBox,
    pub raster: MultibandImage,
    pub label: PatchLabel,
}

pub fn extract_patches(scene: &SceneRecord, img: &MultibandImage, seed: u64) -> Result<Vec<Patch>> {
    extract_patches_with(scene, img, seed, DEFAULT_MAX_ATTEMPTS)
}

/// One positive patch per ground-truth box and the same number of negatives.
///
/// Negatives reuse the width and height of a randomly chosen positive box and
/// are placed uniformly inside the scene extent; a candidate is kept only if
/// it shares no area with any ground-truth box. Pixel windows are the box
/// rounded outward to whole pixels, measured from the extent's top-left corner.
pub fn extract_patches_with(
    scene: &SceneRecord,
    img: &MultibandImage,
    seed: u64,
    max_attempts: usize,
) -> Result<Vec<Patch>> {
    let mut patches = Vec::with_capacity(2 * scene.gt.len());
    for a in &scene.gt {
        patches.push(Patch {
            bbox: a.bbox,
            raster: crop_box(img, &scene.extent, &a.bbox)?,
            label: PatchLabel::Building,
        });
    }
    let needed = scene.gt.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = 0;
    while found < needed {
        let mut placed = None;
        for _ in 0..max_attempts {
            let template = &scene.gt[rng.random_range(0..needed)].bbox;
            let (w, h) = (template.width(), template.height());
            let slack_x = scene.extent.width() - w;
            let slack_y = scene.extent.height() - h;
            if slack_x < 0.0 || slack_y < 0.0 {
                continue;
            }
            let x0 = scene.extent.x_min() + rng.random::<f64>() * slack_x;
            let y0 = scene.extent.y_min() + rng.random::<f64>() * slack_y;
            let Ok(candidate) = BBox::new(x0, y0, x0 + w, y0 + h) else { continue };
            if scene.gt.iter().all(|g| g.bbox.intersection_area(&candidate) == 0.0) {
                placed = Some(candidate);
                break;
            }
        }
        let Some(bbox) = placed else {
            return Err(Error::NegativeSamplingExhausted { found, needed });
        };
        patches.push(Patch { bbox, raster: crop_box(img, &scene.extent, &bbox)?, label: PatchLabel::NotBuilding });
        found += 1;
    }
    Ok(patches)
}

fn crop_box(img: &MultibandImage, extent: &BBox, bbox: &BBox) -> Result<MultibandImage> {
    let (gx, gy) = img.gsd();
    let to_px = |v: f64, origin: f64, gsd: f64, limit: usize| (((v - origin) / gsd).max(0.0) as usize).min(limit);
    let x0 = to_px(bbox.x_min(), extent.x_min(), gx, img.width() - 1);
    let y0 = to_px(bbox.y_min(), extent.y_min(), gy, img.height() - 1);
    let x1 = (((bbox.x_max() - extent.x_min()) / gx).ceil().max(0.0) as usize).clamp(x0 + 1, img.width());
    let y1 = (((bbox.y_max() - extent.y_min()) / gy).ceil().max(0.0) as usize).clamp(y0 + 1, img.height());
    img.crop(x0, y0, x1, y1)
}
