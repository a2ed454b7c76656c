//! First-convolution weight expansion from RGB to N spectral bands.
//!
//! A pretrained `[out, 3, kh, kw]` kernel is widened to `[out, N, kh, kw]`.
//! Target channels whose wavelength matches a source channel keep its weights
//! bit for bit; the remaining channels are filled by the chosen strategy.

mod container;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::{BandInfo, RGB_WAVELENGTHS_NM, WAVELENGTH_TOLERANCE_NM};

pub use self::container::{read_tensor, tensor_from_bytes, tensor_to_bytes, write_tensor, HEADER_MAGIC, VERSION};

/// 4-D convolution kernel `[out_channels, in_channels, k_h, k_w]`, row-major f32.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTensor {
    shape: [usize; 4],
    values: Vec<f32>,
    in_channel_wavelengths: Option<Vec<f32>>,
}

impl WeightTensor {
    pub fn new(shape: [usize; 4], values: Vec<f32>, in_channel_wavelengths: Option<Vec<f32>>) -> Result<Self> {
        if shape.contains(&0) {
            return Err(Error::InvalidTensor(format!("shape {shape:?} has a zero dimension")));
        }
        let expected = shape.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d));
        if expected != Some(values.len()) {
            return Err(Error::InvalidTensor(format!("{} values for shape {shape:?}", values.len())));
        }
        if let Some(w) = &in_channel_wavelengths {
            if w.len() != shape[1] {
                return Err(Error::InvalidTensor(format!("{} wavelengths for {} input channels", w.len(), shape[1])));
            }
        }
        Ok(WeightTensor { shape, values, in_channel_wavelengths })
    }

    pub fn shape(&self) -> [usize; 4] {
        self.shape
    }

    pub fn values(&self) -> &[f32] {
        &self.values
    }

    pub fn in_channel_wavelengths(&self) -> Option<&[f32]> {
        self.in_channel_wavelengths.as_deref()
    }

    pub fn out_channels(&self) -> usize {
        self.shape[0]
    }

    pub fn in_channels(&self) -> usize {
        self.shape[1]
    }

    fn kernel_len(&self) -> usize {
        self.shape[2] * self.shape[3]
    }

    /// Kernel `[kh, kw]` slice for one output/input channel pair.
    pub fn kernel(&self, out: usize, input: usize) -> &[f32] {
        let k = self.kernel_len();
        let start = (out * self.shape[1] + input) * k;
        &self.values[start..start + k]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Zero-mean Gaussian weights, std matched to the source filter.
    Random,
    /// Target band `i` copies source channel `i mod 3`.
    ReplicateCyclic,
    /// Copy the source channel nearest in wavelength (ties to the longer wavelength).
    ReplicateNearestWavelength,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ScaleMode {
    #[default]
    None,
    /// Divide each copy of a source channel by the number of copies, so
    /// summing over input channels reproduces the source response.
    DivideByMultiplicity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionSpec {
    pub strategy: Strategy,
    pub target_bands: Vec<BandInfo>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub scale_mode: ScaleMode,
}

/// Where an output input-channel's weights come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelSource {
    /// Exact match of a source wavelength: the source channel, untouched.
    Preserved(usize),
    /// Copy of a source channel.
    Copy(usize),
    /// Fresh random draw.
    Random,
}

/// Source channel nearest in wavelength to `target`; ties go to the longer source wavelength.
pub fn nearest_source_channel(source_wavelengths: &[f64], target: f64) -> usize {
    let mut best = 0;
    for (i, &w) in source_wavelengths.iter().enumerate().skip(1) {
        let d = (w - target).abs();
        let db = (source_wavelengths[best] - target).abs();
        if d < db || (d == db && w > source_wavelengths[best]) {
            best = i;
        }
    }
    best
}

fn source_wavelengths(w: &WeightTensor, strategy: Strategy) -> Result<Vec<f64>> {
    match w.in_channel_wavelengths() {
        Some(ws) => Ok(ws.iter().map(|&v| f64::from(v)).collect()),
        None if strategy == Strategy::ReplicateNearestWavelength => Err(Error::MissingWavelengths(
            "nearest-wavelength expansion needs wavelength-tagged source channels".into(),
        )),
        // Untagged sources are taken to be in R, G, B order.
        None => Ok(RGB_WAVELENGTHS_NM.to_vec()),
    }
}

/// Assigns a weight source to every target band.
pub fn channel_plan(w: &WeightTensor, spec: &ExpansionSpec) -> Result<Vec<ChannelSource>> {
    if w.in_channels() != 3 {
        return Err(Error::InvalidTensor(format!("expansion expects 3 input channels, found {}", w.in_channels())));
    }
    if spec.target_bands.len() < 3 {
        return Err(Error::InvalidTarget(format!("{} target bands; at least 3 required", spec.target_bands.len())));
    }
    let sources = source_wavelengths(w, spec.strategy)?;
    let matches = |target: f64| sources.iter().position(|&s| (s - target).abs() <= WAVELENGTH_TOLERANCE_NM);
    let plan: Vec<ChannelSource> = spec
        .target_bands
        .iter()
        .enumerate()
        .map(|(i, band)| match matches(band.center_wavelength) {
            Some(src) => ChannelSource::Preserved(src),
            None => match spec.strategy {
                Strategy::Random => ChannelSource::Random,
                Strategy::ReplicateCyclic => ChannelSource::Copy(i % 3),
                Strategy::ReplicateNearestWavelength => {
                    ChannelSource::Copy(nearest_source_channel(&sources, band.center_wavelength))
                }
            },
        })
        .collect();
    for (src, wl) in sources.iter().enumerate() {
        let count = plan.iter().filter(|p| **p == ChannelSource::Preserved(src)).count();
        if count != 1 {
            return Err(Error::InvalidTarget(format!(
                "source wavelength {wl} nm must appear exactly once among the target bands (found {count})"
            )));
        }
    }
    Ok(plan)
}

pub fn expand(w: &WeightTensor, spec: &ExpansionSpec) -> Result<WeightTensor> {
    let plan = channel_plan(w, spec)?;
    let [out_ch, _, kh, kw] = w.shape;
    let k = kh * kw;
    let n = plan.len();

    let multiplicity: [usize; 3] = std::array::from_fn(|src| {
        plan.iter().filter(|p| matches!(p, ChannelSource::Preserved(s) | ChannelSource::Copy(s) if *s == src)).count()
    });
    let scale = |src: usize| match spec.scale_mode {
        ScaleMode::None => 1.0f32,
        ScaleMode::DivideByMultiplicity => multiplicity[src] as f32,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut values = Vec::with_capacity(out_ch * n * k);
    for o in 0..out_ch {
        let filter = &w.values[o * 3 * k..(o + 1) * 3 * k];
        let normal = if plan.contains(&ChannelSource::Random) {
            Some(Normal::new(0.0f64, sample_std(filter)).map_err(|e| Error::InvalidTensor(e.to_string()))?)
        } else {
            None
        };
        for source in &plan {
            match *source {
                ChannelSource::Preserved(src) | ChannelSource::Copy(src) => {
                    let kernel = w.kernel(o, src);
                    let div = scale(src);
                    if div == 1.0 {
                        values.extend_from_slice(kernel);
                    } else {
                        values.extend(kernel.iter().map(|v| v / div));
                    }
                }
                ChannelSource::Random => {
                    let normal = normal.as_ref().expect("normal built when plan draws");
                    values.extend((0..k).map(|_| normal.sample(&mut rng) as f32));
                }
            }
        }
    }
    let wavelengths = spec.target_bands.iter().map(|b| b.center_wavelength as f32).collect();
    WeightTensor::new([out_ch, n, kh, kw], values, Some(wavelengths))
}

/// Sample standard deviation (n - 1) of one source filter's weights.
fn sample_std(values: &[f32]) -> f64 {
    let n = values.len() as f64;
    if values.len() < 2 {
        return 0.0;
    }
    let mean = values.iter().map(|&v| f64::from(v)).sum::<f64>() / n;
    (values.iter().map(|&v| (f64::from(v) - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}
