//! Expand a 64x3x7x7 RGB first layer to the eight WorldView-2 bands and save it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectra_eval::netexpand::{
    channel_plan, expand, read_tensor, write_tensor, ExpansionSpec, ScaleMode, Strategy, WeightTensor,
};
use spectra_eval::raster::{BandInfo, RGB_WAVELENGTHS_NM};

fn main() -> spectra_eval::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let values: Vec<f32> = (0..64 * 3 * 7 * 7).map(|_| rng.random_range(-0.1..0.1)).collect();
    let rgb = RGB_WAVELENGTHS_NM.iter().map(|&w| w as f32).collect();
    let conv1 = WeightTensor::new([64, 3, 7, 7], values, Some(rgb))?;

    for strategy in [Strategy::ReplicateNearestWavelength, Strategy::ReplicateCyclic, Strategy::Random] {
        let spec =
            ExpansionSpec { strategy, target_bands: BandInfo::worldview2(), seed: 3, scale_mode: ScaleMode::None };
        println!("{strategy:?}: {:?}", channel_plan(&conv1, &spec)?);
    }

    let spec = ExpansionSpec {
        strategy: Strategy::ReplicateNearestWavelength,
        target_bands: BandInfo::worldview2(),
        seed: 0,
        scale_mode: ScaleMode::DivideByMultiplicity,
    };
    let wv2 = expand(&conv1, &spec)?;
    let dir = tempfile::tempdir().expect("temp dir");
    let path = dir.path().join("conv1_wv2.wtns");
    write_tensor(&wv2, &path)?;
    let back = read_tensor(&path)?;
    println!(
        "wrote {:?} ({} bytes), wavelengths {:?}",
        back.shape(),
        std::fs::metadata(&path).map(|m| m.len()).unwrap_or(0),
        back.in_channel_wavelengths().unwrap_or_default()
    );
    Ok(())
}
