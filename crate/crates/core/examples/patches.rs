//! Building / not-building classification patches cut from one scene.

use spectra_eval::annotate::{extract_patches, Annotation, BBox, PatchLabel, SceneRecord};
use spectra_eval::raster::{BandInfo, MultibandImage};

fn main() -> spectra_eval::Result<()> {
    // 200 x 200 pixels at 0.5 m: a 100 m scene.
    let (w, h) = (200, 200);
    let pixels: Vec<u16> = (0..3 * w * h).map(|i| (i % 251) as u16).collect();
    let img = MultibandImage::new(w, h, BandInfo::rgb(), 8, (0.5, 0.5), pixels)?;

    let gt = vec![
        Annotation::new("tile", BBox::new(10.0, 10.0, 22.0, 19.0)?),
        Annotation::new("tile", BBox::new(50.0, 60.0, 58.0, 75.0)?),
        Annotation::new("tile", BBox::new(70.0, 20.0, 90.0, 32.0)?),
    ];
    let scene = SceneRecord::new("tile", BBox::new(0.0, 0.0, 100.0, 100.0)?, gt);

    for p in extract_patches(&scene, &img, 17)? {
        let label = match p.label {
            PatchLabel::Building => "building",
            PatchLabel::NotBuilding => "not building",
        };
        println!(
            "{label:<13} {:?} -> {}x{} px",
            p.bbox.to_array().map(|v| (v * 10.0).round() / 10.0),
            p.raster.width(),
            p.raster.height()
        );
    }
    Ok(())
}
