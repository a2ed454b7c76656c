//! Footprint GeoJSON to padded, binned annotation boxes and a 5-fold split.

use std::collections::BTreeMap;

use spectra_eval::annotate::{
    filter_and_pad, footprint_to_bbox, make_splits, parse_feature_collection, Annotation, BBox, PadMode, SceneRecord,
    SplitMode, DEFAULT_MIN_AREA_M2, DEFAULT_PAD_M,
};

const GEOJSON: &str = r#"{
  "type": "FeatureCollection",
  "extent": [0, 0, 200, 200],
  "features": [
    {"type": "Feature", "geometry": {"type": "Polygon", "coordinates": [[[10, 10], [14, 10], [14, 14], [10, 14], [10, 10]]]}},
    {"type": "Feature", "geometry": {"type": "Polygon", "coordinates": [[[40, 40], [49, 41], [48, 50], [40, 49], [40, 40]]]}},
    {"type": "Feature", "geometry": {"type": "Polygon", "coordinates": [[[100, 90], [112, 90], [112, 102], [100, 102], [100, 90]]]}},
    {"type": "Feature", "geometry": {"type": "MultiPolygon", "coordinates": [[[[190, 185], [200, 185], [200, 200], [190, 200], [190, 185]]]]}},
    {"type": "Feature", "geometry": null}
  ]
}"#;

fn main() -> spectra_eval::Result<()> {
    let fc = parse_feature_collection(GEOJSON, None)?;
    let [x0, y0, x1, y1] = fc.extent.expect("extent declared");
    let extent = BBox::new(x0, y0, x1, y1)?;

    let raw: Vec<Annotation> = fc
        .polygons
        .iter()
        .map(|p| footprint_to_bbox(p).map(|b| Annotation::new("aoi1_0001", b)))
        .collect::<Result<_, _>>()?;
    let kept = filter_and_pad(&raw, DEFAULT_MIN_AREA_M2, DEFAULT_PAD_M, PadMode::PerSide, &extent);
    println!("{} footprints, {} kept after the {DEFAULT_MIN_AREA_M2} m2 floor", raw.len(), kept.len());
    for a in &kept {
        println!("  {:?} area {:.1} m2 -> {}", a.bbox.to_array(), a.area_m2, a.size_category.as_str());
    }

    let scene = SceneRecord::new("aoi1_0001", extent, kept);
    println!("density: {}", scene.density_category.as_str());

    let mut hist = BTreeMap::new();
    for a in &scene.gt {
        *hist.entry(a.size_category.as_str()).or_insert(0) += 1;
    }
    println!("size histogram: {hist:?}");

    let ids: Vec<String> = (0..23).map(|i| format!("aoi1_{i:04}")).collect();
    let plan = make_splits(&ids, SplitMode::KFold { k: 5 }, 42)?;
    let (train, test) = plan.train_test(0).expect("fold 0");
    println!("fold 0: {} train / {} test scenes", train.len(), test.len());
    Ok(())
}
