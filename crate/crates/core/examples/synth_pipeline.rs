//! Synthetic scenes through each detector model, scored by size and density.

use spectra_eval::annotate::DensityCategory;
use spectra_eval::matcheval::report;
use spectra_eval::synth::{generate, DensityTarget, DetectorModel, SynthSpec};

fn main() -> spectra_eval::Result<()> {
    let models = [
        DetectorModel::Perfect,
        DetectorModel::Jitter { sigma: 2.0 },
        DetectorModel::Dropout { rate: 0.5 },
        DetectorModel::Spurious { rate: 0.3 },
    ];
    for model in models {
        let mut spec = SynthSpec::new(2024, 30, DensityTarget::Category(DensityCategory::High), model);
        // A uniform mix of up to 120 boxes cannot be packed disjointly into 210 m x 210 m.
        spec.size_mix = [4.0, 3.0, 2.0, 1.0, 0.5];
        let scenes = generate(&spec)?;
        let r = report(&scenes, 0.5, 0.5)?;
        let c = r.overall.counts;
        println!(
            "{model:?}: tp {} fp {} fn {} -> P {:.3} R {:.3} F1 {:.3}",
            c.tp, c.fp, c.fn_, r.overall.precision, r.overall.recall, r.overall.f1
        );
        for (size, s) in &r.by_size {
            println!("    {:<11} F1 {:.3}", size.as_str(), s.f1);
        }
    }
    Ok(())
}
