//! Multi-band, high-bit-depth raster scenes.
//!
//! Pixels are stored band-planar (every sample of band 0, then band 1, ...),
//! each plane row-major. All operations return new images; an image is never
//! mutated after construction.

mod tiff;

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use self::tiff::{read_tiff, read_tiff_info, write_tiff, Compression, DecodedTiff, TiffInfo, TiffLayout};

/// Bit depths an image may declare.
pub const SUPPORTED_BIT_DEPTHS: [u8; 4] = [8, 11, 13, 16];

/// Maximum distance, in nanometers, at which a requested wavelength matches a band.
pub const WAVELENGTH_TOLERANCE_NM: f64 = 1.0;

/// Center wavelengths of the standard red, green and blue channels, in that order.
pub const RGB_WAVELENGTHS_NM: [f64; 3] = [659.0, 546.0, 478.0];

/// Center wavelengths of the eight WorldView-2 multispectral bands, in file order.
pub const WORLDVIEW2_WAVELENGTHS_NM: [f64; 8] = [427.0, 478.0, 546.0, 608.0, 659.0, 724.0, 883.0, 949.0];

const WORLDVIEW2_NAMES: [&str; 8] = ["coastal", "blue", "green", "yellow", "red", "red_edge", "nir1", "nir2"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandInfo {
    pub name: String,
    #[serde(rename = "wavelength_nm")]
    pub center_wavelength: f64,
}

impl BandInfo {
    pub fn new(name: impl Into<String>, center_wavelength: f64) -> Self {
        BandInfo { name: name.into(), center_wavelength }
    }

    /// Red, green, blue at 659/546/478 nm.
    pub fn rgb() -> Vec<BandInfo> {
        ["red", "green", "blue"].iter().zip(RGB_WAVELENGTHS_NM).map(|(n, w)| BandInfo::new(*n, w)).collect()
    }

    /// The eight WorldView-2 bands, coastal through NIR2.
    pub fn worldview2() -> Vec<BandInfo> {
        WORLDVIEW2_NAMES.iter().zip(WORLDVIEW2_WAVELENGTHS_NM).map(|(n, w)| BandInfo::new(*n, w)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultibandImage {
    width: usize,
    height: usize,
    bands: Vec<BandInfo>,
    bit_depth: u8,
    gsd_x: f64,
    gsd_y: f64,
    pixels: Vec<u16>,
}

impl MultibandImage {
    /// Builds an image, checking every structural and sample-range invariant.
    pub fn new(
        width: usize,
        height: usize,
        bands: Vec<BandInfo>,
        bit_depth: u8,
        gsd: (f64, f64),
        pixels: Vec<u16>,
    ) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!("dimensions {width}x{height} must be positive")));
        }
        if bands.is_empty() {
            return Err(Error::InvalidImage("an image needs at least one band".into()));
        }
        validate_bands(&bands)?;
        if !SUPPORTED_BIT_DEPTHS.contains(&bit_depth) {
            return Err(Error::InvalidImage(format!("unsupported bit depth {bit_depth}")));
        }
        let (gsd_x, gsd_y) = gsd;
        if !(gsd_x.is_finite() && gsd_x > 0.0 && gsd_y.is_finite() && gsd_y > 0.0) {
            return Err(Error::InvalidImage(format!("ground sample distance ({gsd_x}, {gsd_y}) must be positive")));
        }
        let expected = width * height * bands.len();
        if pixels.len() != expected {
            return Err(Error::InvalidImage(format!(
                "pixel buffer holds {} samples, expected {expected}",
                pixels.len()
            )));
        }
        let limit = max_value(bit_depth);
        if let Some(v) = pixels.iter().find(|&&v| u32::from(v) > limit) {
            return Err(Error::InvalidImage(format!("sample {v} does not fit in {bit_depth} bits")));
        }
        Ok(MultibandImage { width, height, bands, bit_depth, gsd_x, gsd_y, pixels })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bands(&self) -> &[BandInfo] {
        &self.bands
    }

    pub fn band_count(&self) -> usize {
        self.bands.len()
    }

    pub fn bit_depth(&self) -> u8 {
        self.bit_depth
    }

    /// Ground sample distance (x, y) in meters per pixel.
    pub fn gsd(&self) -> (f64, f64) {
        (self.gsd_x, self.gsd_y)
    }

    pub fn pixels(&self) -> &[u16] {
        &self.pixels
    }

    /// Samples of one band, row-major.
    pub fn band(&self, index: usize) -> &[u16] {
        let plane = self.width * self.height;
        &self.pixels[index * plane..(index + 1) * plane]
    }

    pub fn get(&self, band: usize, x: usize, y: usize) -> u16 {
        self.band(band)[y * self.width + x]
    }

    pub fn max_sample(&self) -> u16 {
        self.pixels.iter().copied().max().unwrap_or(0)
    }

    /// Index of the band whose center lies within 1 nm of `wavelength`, preferring the closest.
    pub fn band_index_for(&self, wavelength: f64) -> Option<usize> {
        self.bands
            .iter()
            .enumerate()
            .map(|(i, b)| (i, (b.center_wavelength - wavelength).abs()))
            .filter(|&(_, d)| d <= WAVELENGTH_TOLERANCE_NM)
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(i, _)| i)
    }

    /// Crops the pixel window `[x0, x1) x [y0, y1)` across all bands.
    pub fn crop(&self, x0: usize, y0: usize, x1: usize, y1: usize) -> Result<MultibandImage> {
        if x0 >= x1 || y0 >= y1 || x1 > self.width || y1 > self.height {
            return Err(Error::InvalidImage(format!(
                "crop window [{x0},{x1})x[{y0},{y1}) outside {}x{}",
                self.width, self.height
            )));
        }
        let (w, h) = (x1 - x0, y1 - y0);
        let mut pixels = Vec::with_capacity(w * h * self.bands.len());
        for b in 0..self.bands.len() {
            let plane = self.band(b);
            for y in y0..y1 {
                pixels.extend_from_slice(&plane[y * self.width + x0..y * self.width + x1]);
            }
        }
        Ok(MultibandImage { width: w, height: h, pixels, bands: self.bands.clone(), ..*self })
    }
}

fn validate_bands(bands: &[BandInfo]) -> Result<()> {
    for (i, b) in bands.iter().enumerate() {
        if !(b.center_wavelength.is_finite() && b.center_wavelength > 0.0) {
            return Err(Error::InvalidImage(format!(
                "band {:?} has non-positive wavelength {}",
                b.name, b.center_wavelength
            )));
        }
        if bands[..i].iter().any(|o| o.name == b.name) {
            return Err(Error::InvalidImage(format!("duplicate band name {:?}", b.name)));
        }
    }
    Ok(())
}

fn max_value(bits: u8) -> u32 {
    (1u32 << bits) - 1
}

/// Smallest supported depth that holds `max_sample`.
pub fn infer_bit_depth(max_sample: u16) -> u8 {
    SUPPORTED_BIT_DEPTHS.into_iter().find(|&b| u32::from(max_sample) <= max_value(b)).unwrap_or(16)
}

/// Options for [`load_scene_with`].
#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    /// Band metadata in file order. When absent the `<scene>.bands.json`
    /// sidecar is consulted, then the 3-band RGB or 8-band WorldView-2 defaults.
    pub bands: Option<Vec<BandInfo>>,
    /// Declared bit depth; overrides inference from the sample maximum.
    pub bit_depth: Option<u8>,
    /// Ground sample distance; overrides the GeoTIFF pixel-scale tag.
    pub gsd: Option<(f64, f64)>,
}

/// Loads a TIFF scene and attaches band metadata.
pub fn load_scene(path: impl AsRef<Path>, band_metadata: Option<Vec<BandInfo>>) -> Result<MultibandImage> {
    load_scene_with(path, &LoadOptions { bands: band_metadata, ..LoadOptions::default() })
}

pub fn load_scene_with(path: impl AsRef<Path>, opts: &LoadOptions) -> Result<MultibandImage> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let decoded = read_tiff(&bytes)?;
    let samples = decoded.info.samples_per_pixel;

    let bands = match &opts.bands {
        Some(b) => b.clone(),
        None => match read_band_sidecar(path)? {
            Some(b) => b,
            None => default_bands(samples).ok_or_else(|| {
                Error::MissingBandMetadata(format!(
                    "{} has {samples} bands and no {} sidecar",
                    path.display(),
                    sidecar_path(path).display()
                ))
            })?,
        },
    };
    if bands.len() != samples {
        return Err(Error::MissingBandMetadata(format!("{} bands described for a {samples}-band file", bands.len())));
    }

    let bit_depth = match opts.bit_depth {
        Some(b) => b,
        None if decoded.info.bits_per_sample == 8 => 8,
        None => infer_bit_depth(decoded.pixels.iter().copied().max().unwrap_or(0)),
    };
    let gsd = opts.gsd.or(decoded.info.pixel_scale).unwrap_or((1.0, 1.0));
    MultibandImage::new(decoded.info.width, decoded.info.height, bands, bit_depth, gsd, decoded.pixels)
}

/// `scene.tif` -> `scene.bands.json`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("bands.json")
}

fn read_band_sidecar(path: &Path) -> Result<Option<Vec<BandInfo>>> {
    let sidecar = sidecar_path(path);
    match std::fs::read(&sidecar) {
        Ok(bytes) => {
            serde_json::from_slice(&bytes).map(Some).map_err(|e| Error::parse(sidecar.display().to_string(), e))
        }
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(Error::io(sidecar, e)),
    }
}

fn default_bands(samples: usize) -> Option<Vec<BandInfo>> {
    match samples {
        3 => Some(BandInfo::rgb()),
        8 => Some(BandInfo::worldview2()),
        _ => None,
    }
}

/// How samples are mapped onto the target range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Requantization {
    /// `round(v * (2^target - 1) / (2^source - 1))`.
    Linear,
    /// Per-band stretch between the given lower and upper percentiles, clamped.
    PercentileStretch { low: f64, high: f64 },
}

/// Linear requantization to `target_bits`.
pub fn requantize(img: &MultibandImage, target_bits: u8) -> Result<MultibandImage> {
    requantize_with(img, target_bits, Requantization::Linear)
}

pub fn requantize_with(img: &MultibandImage, target_bits: u8, curve: Requantization) -> Result<MultibandImage> {
    if !SUPPORTED_BIT_DEPTHS.contains(&target_bits) {
        return Err(Error::InvalidTarget(format!("bit depth {target_bits} is not one of {SUPPORTED_BIT_DEPTHS:?}")));
    }
    if target_bits > img.bit_depth {
        return Err(Error::InvalidTarget(format!(
            "cannot requantize {}-bit data up to {target_bits} bits",
            img.bit_depth
        )));
    }
    let dst_max = u64::from(max_value(target_bits));
    let pixels = match curve {
        Requantization::Linear => {
            let src_max = u64::from(max_value(img.bit_depth));
            // Integer round-half-up of v * dst_max / src_max.
            img.pixels.iter().map(|&v| ((2 * u64::from(v) * dst_max + src_max) / (2 * src_max)) as u16).collect()
        }
        Requantization::PercentileStretch { low, high } => {
            if !(0.0..=100.0).contains(&low) || !(0.0..=100.0).contains(&high) || low >= high {
                return Err(Error::InvalidTarget(format!(
                    "percentiles ({low}, {high}) must satisfy 0 <= low < high <= 100"
                )));
            }
            let mut out = Vec::with_capacity(img.pixels.len());
            for b in 0..img.band_count() {
                let plane = img.band(b);
                let mut sorted = plane.to_vec();
                sorted.sort_unstable();
                let lo = f64::from(percentile(&sorted, low));
                let hi = f64::from(percentile(&sorted, high));
                out.extend(plane.iter().map(|&v| {
                    let unit = if hi > lo { ((f64::from(v) - lo) / (hi - lo)).clamp(0.0, 1.0) } else { 0.0 };
                    (unit * dst_max as f64).round() as u16
                }));
            }
            out
        }
    };
    Ok(MultibandImage { pixels, bit_depth: target_bits, bands: img.bands.clone(), ..*img })
}

/// Nearest-rank percentile of sorted data.
fn percentile(sorted: &[u16], pct: f64) -> u16 {
    let rank = ((pct / 100.0) * (sorted.len() - 1) as f64).round() as usize;
    sorted[rank.min(sorted.len() - 1)]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Interpolation {
    #[default]
    Bilinear,
    Nearest,
}

/// Upsamples every band by an integer `factor`; ground sample distance shrinks by the same factor.
pub fn rescale(img: &MultibandImage, factor: usize, method: Interpolation) -> Result<MultibandImage> {
    if factor == 0 {
        return Err(Error::InvalidTarget("rescale factor must be at least 1".into()));
    }
    if factor == 1 {
        return Ok(img.clone());
    }
    let (w, h) = (img.width * factor, img.height * factor);
    let limit = max_value(img.bit_depth) as f64;
    let mut pixels = Vec::with_capacity(w * h * img.band_count());
    for b in 0..img.band_count() {
        match method {
            Interpolation::Nearest => {
                let plane = img.band(b);
                for y in 0..h {
                    let row = &plane[(y / factor) * img.width..][..img.width];
                    pixels.extend((0..w).map(|x| row[x / factor]));
                }
            }
            Interpolation::Bilinear => {
                let up = bilinear_plane(img.band(b), img.width, img.height, factor);
                pixels.extend(up.into_iter().map(|v| v.round().clamp(0.0, limit) as u16));
            }
        }
    }
    Ok(MultibandImage {
        width: w,
        height: h,
        pixels,
        bands: img.bands.clone(),
        gsd_x: img.gsd_x / factor as f64,
        gsd_y: img.gsd_y / factor as f64,
        ..*img
    })
}

/// Pixel-center aligned bilinear upsampling with edge clamping, before rounding.
pub(crate) fn bilinear_plane(plane: &[u16], width: usize, height: usize, factor: usize) -> Vec<f64> {
    let xs = axis_weights(width, factor);
    let ys = axis_weights(height, factor);
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for &(y0, y1, fy) in &ys {
        let r0 = &plane[y0 * width..][..width];
        let r1 = &plane[y1 * width..][..width];
        for &(x0, x1, fx) in &xs {
            let top = f64::from(r0[x0]) * (1.0 - fx) + f64::from(r0[x1]) * fx;
            let bottom = f64::from(r1[x0]) * (1.0 - fx) + f64::from(r1[x1]) * fx;
            out.push(top * (1.0 - fy) + bottom * fy);
        }
    }
    out
}

fn axis_weights(len: usize, factor: usize) -> Vec<(usize, usize, f64)> {
    let last = (len - 1) as f64;
    (0..len * factor)
        .map(|i| {
            let src = ((i as f64 + 0.5) / factor as f64 - 0.5).clamp(0.0, last);
            let lo = src.floor() as usize;
            let hi = (lo + 1).min(len - 1);
            (lo, hi, src - lo as f64)
        })
        .collect()
}

/// Selects bands by wavelength (±1 nm), in the requested order.
pub fn compose_bands(img: &MultibandImage, selection: &[f64]) -> Result<MultibandImage> {
    if selection.is_empty() {
        return Err(Error::InvalidTarget("band selection is empty".into()));
    }
    let indices =
        selection.iter().map(|&w| img.band_index_for(w).ok_or(Error::BandNotFound(w))).collect::<Result<Vec<_>>>()?;
    let bands: Vec<BandInfo> = indices.iter().map(|&i| img.bands[i].clone()).collect();
    validate_bands(&bands)?;
    let pixels = indices.iter().flat_map(|&i| img.band(i).iter().copied()).collect();
    Ok(MultibandImage { bands, pixels, ..*img })
}
