//! GeoJSON footprint ingestion.
//!
//! A scene file is a `FeatureCollection` of `Polygon` (or `MultiPolygon`)
//! features. Two optional top-level members steer interpretation:
//! `"crs_mode"` (`"local_meters"`, the default, or `"pixels"`) and
//! `"extent"` (`[x0, y0, x1, y1]` in the same units as the coordinates).
//! Features with a null geometry are skipped.

use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CrsMode {
    #[default]
    LocalMeters,
    /// Coordinates are pixel units; meters = pixels x ground sample distance.
    Pixels,
}

#[derive(Debug, Deserialize)]
struct RawCollection {
    #[serde(rename = "type")]
    kind: String,
    #[serde(default)]
    features: Vec<RawFeature>,
    #[serde(default)]
    crs_mode: Option<CrsMode>,
    #[serde(default)]
    extent: Option<[f64; 4]>,
}

#[derive(Debug, Deserialize)]
struct RawFeature {
    geometry: Option<RawGeometry>,
}

#[derive(Debug, Deserialize)]
struct RawGeometry {
    #[serde(rename = "type")]
    kind: String,
    #[serde(default)]
    coordinates: Value,
}

/// Footprints of one scene, in meters.
#[derive(Debug, Clone, PartialEq)]
pub struct FootprintCollection {
    pub crs_mode: CrsMode,
    /// Scene extent in meters when the file declares one.
    pub extent: Option<[f64; 4]>,
    /// One vertex list per feature (every ring of every part, flattened).
    pub polygons: Vec<Vec<(f64, f64)>>,
}

/// Parses a scene's footprints. `gsd` is required only for pixel-unit files.
pub fn parse_feature_collection(text: &str, gsd: Option<(f64, f64)>) -> Result<FootprintCollection> {
    let raw: RawCollection = serde_json::from_str(text).map_err(|e| Error::parse("geojson", e))?;
    if raw.kind != "FeatureCollection" {
        return Err(Error::parse("geojson", format!("expected FeatureCollection, found {}", raw.kind)));
    }
    let crs_mode = raw.crs_mode.unwrap_or_default();
    let (sx, sy) = match crs_mode {
        CrsMode::LocalMeters => (1.0, 1.0),
        CrsMode::Pixels => {
            gsd.ok_or_else(|| Error::parse("geojson", "pixel coordinates need a ground sample distance"))?
        }
    };

    let mut polygons = Vec::with_capacity(raw.features.len());
    for (i, feature) in raw.features.into_iter().enumerate() {
        let Some(geometry) = feature.geometry else { continue };
        let depth = match geometry.kind.as_str() {
            "Polygon" => 2,
            "MultiPolygon" => 3,
            other => return Err(Error::parse(format!("feature {i}"), format!("unsupported geometry {other}"))),
        };
        let mut vertices = Vec::new();
        collect_positions(&geometry.coordinates, depth, &mut vertices)
            .map_err(|m| Error::parse(format!("feature {i}"), m))?;
        if vertices.is_empty() {
            continue;
        }
        polygons.push(vertices.into_iter().map(|(x, y)| (x * sx, y * sy)).collect());
    }
    let extent = raw.extent.map(|[x0, y0, x1, y1]| [x0 * sx, y0 * sy, x1 * sx, y1 * sy]);
    Ok(FootprintCollection { crs_mode, extent, polygons })
}

fn collect_positions(v: &Value, depth: usize, out: &mut Vec<(f64, f64)>) -> std::result::Result<(), String> {
    let items = v.as_array().ok_or("coordinates must be arrays")?;
    if depth == 0 {
        let x = items.first().and_then(Value::as_f64).ok_or("position needs numeric x")?;
        let y = items.get(1).and_then(Value::as_f64).ok_or("position needs numeric y")?;
        out.push((x, y));
        return Ok(());
    }
    items.iter().try_for_each(|item| collect_positions(item, depth - 1, out))
}
