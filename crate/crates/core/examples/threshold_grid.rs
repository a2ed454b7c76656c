//! F1 for every size category over the default IoU x confidence grid.

use spectra_eval::annotate::{DensityCategory, SizeCategory};
use spectra_eval::matcheval::{f1_grid, DEFAULT_CONF_SET, DEFAULT_IOU_SET};
use spectra_eval::synth::{generate, DensityTarget, DetectorModel, SynthSpec};

fn main() -> spectra_eval::Result<()> {
    let mut spec =
        SynthSpec::new(7, 50, DensityTarget::Category(DensityCategory::Moderate), DetectorModel::Jitter { sigma: 1.5 });
    spec.confidence_range = (0.0, 1.0);
    let scenes = generate(&spec)?;
    let grid = f1_grid(&scenes, &DEFAULT_IOU_SET, &DEFAULT_CONF_SET)?;

    print!("{:<12}", "iou/conf");
    for c in DEFAULT_CONF_SET {
        print!("{c:>8}");
    }
    println!();
    for size in SizeCategory::SCORED {
        println!("{}", size.as_str());
        for iou in DEFAULT_IOU_SET {
            print!("  {iou:<10}");
            for conf in DEFAULT_CONF_SET {
                print!("{:>8.3}", grid.f1(iou, conf, Some(size)).unwrap_or(f64::NAN));
            }
            println!();
        }
    }
    Ok(())
}
