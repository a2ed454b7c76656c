use spectra_eval::raster::{
    load_scene, read_tiff_info, requantize, rescale, write_tiff, BandInfo, Compression, Interpolation, MultibandImage,
    TiffLayout,
};

fn write(
    img: &MultibandImage,
    name: &str,
    layout: TiffLayout,
    compression: Compression,
) -> (tempfile::TempDir, std::path::PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join(name);
    write_tiff(img, &p, layout, compression).unwrap();
    (dir, p)
}

#[test]
fn eight_band_13_bit_scene() {
    let (w, h) = (110, 102);
    let mut px: Vec<u16> = (0..8 * w * h).map(|i| (i * 7919 % 8000) as u16).collect();
    px[12345] = 8012;
    let img = MultibandImage::new(w, h, BandInfo::worldview2(), 16, (2.0, 2.0), px).unwrap();
    let (_d, p) = write(&img, "wv2.tif", TiffLayout::Tiles { tile_width: 32, tile_height: 16 }, Compression::Deflate);

    let loaded = load_scene(&p, None).unwrap();
    assert_eq!((loaded.width(), loaded.height(), loaded.band_count()), (110, 102, 8));
    assert_eq!(loaded.bit_depth(), 13);
    assert_eq!(loaded.gsd(), (2.0, 2.0));
    assert_eq!(loaded.pixels(), img.pixels());
    assert_eq!(loaded.bands()[6].center_wavelength, 883.0);

    let up = rescale(&requantize(&loaded, 8).unwrap(), 5, Interpolation::Bilinear).unwrap();
    assert_eq!((up.width(), up.height(), up.bit_depth()), (550, 510, 8));
    assert_eq!(up.gsd(), (0.4, 0.4));
}

#[test]
fn all_zero_scene_is_8_bit() {
    let img = MultibandImage::new(2, 2, BandInfo::rgb(), 16, (1.0, 1.0), vec![0; 12]).unwrap();
    let (_d, p) = write(&img, "zeros.tif", TiffLayout::Strips { rows_per_strip: 1 }, Compression::None);
    // Stored as 16-bit samples, yet nothing exceeds 8 bits.
    assert_eq!(read_tiff_info(&std::fs::read(&p).unwrap()).unwrap().bits_per_sample, 16);
    assert_eq!(load_scene(&p, None).unwrap().bit_depth(), 8);
}

#[test]
fn rgb_8_bit_scene() {
    let (w, h) = (439, 406);
    let px: Vec<u16> = (0..3 * w * h).map(|i| (i % 256) as u16).collect();
    let img = MultibandImage::new(w, h, BandInfo::rgb(), 8, (0.5, 0.5), px).unwrap();
    let (_d, p) = write(&img, "rgb.tif", TiffLayout::Strips { rows_per_strip: 7 }, Compression::Deflate);
    let loaded = load_scene(&p, None).unwrap();
    assert_eq!(loaded.bit_depth(), 8);
    assert_eq!((loaded.width(), loaded.height()), (439, 406));
    assert_eq!(loaded.pixels(), img.pixels());
}

#[test]
fn sidecar_band_metadata() {
    let bands = vec![
        BandInfo::new("coastal", 427.0),
        BandInfo::new("yellow", 608.0),
        BandInfo::new("red_edge", 724.0),
        BandInfo::new("nir", 833.0),
    ];
    let img = MultibandImage::new(4, 4, bands.clone(), 11, (1.0, 1.0), vec![2000; 64]).unwrap();
    let (_d, p) = write(&img, "four.tif", TiffLayout::Strips { rows_per_strip: 4 }, Compression::None);
    assert!(load_scene(&p, None).is_err());
    std::fs::write(p.with_extension("bands.json"), serde_json::to_string(&bands).unwrap()).unwrap();
    let loaded = load_scene(&p, None).unwrap();
    assert_eq!(loaded.bands(), &bands[..]);
    assert_eq!(loaded.bit_depth(), 11);
}
