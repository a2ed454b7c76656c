//! Write an 8-band 13-bit scene, load it back, requantize to 8 bits, upsample
//! x5, and pick a false-color band triple.

use spectra_eval::raster::{
    compose_bands, load_scene, requantize, rescale, write_tiff, BandInfo, Compression, Interpolation, MultibandImage,
    TiffLayout,
};

fn main() -> spectra_eval::Result<()> {
    let (w, h) = (110, 102);
    let pixels: Vec<u16> = (0..8 * w * h).map(|i| ((i * 31) % 8012) as u16).collect();
    let scene = MultibandImage::new(w, h, BandInfo::worldview2(), 13, (2.0, 2.0), pixels)?;

    let dir = tempfile::tempdir().expect("temp dir");
    let path = dir.path().join("scene.tif");
    write_tiff(&scene, &path, TiffLayout::Tiles { tile_width: 64, tile_height: 64 }, Compression::Deflate)?;

    let loaded = load_scene(&path, None)?;
    println!(
        "loaded {}x{} with {} bands, inferred {}-bit, gsd {:?}",
        loaded.width(),
        loaded.height(),
        loaded.band_count(),
        loaded.bit_depth(),
        loaded.gsd()
    );

    let eight = requantize(&loaded, 8)?;
    let up = rescale(&eight, 5, Interpolation::Bilinear)?;
    println!(
        "requantized to {}-bit and rescaled to {}x{} at gsd {:?}",
        up.bit_depth(),
        up.width(),
        up.height(),
        up.gsd()
    );

    let false_color = compose_bands(&up, &[427.0, 608.0, 724.0])?;
    let names: Vec<&str> = false_color.bands().iter().map(|b| b.name.as_str()).collect();
    println!("false color bands: {}", names.join(", "));
    Ok(())
}
