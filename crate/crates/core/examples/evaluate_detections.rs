//! Greedy matching and stratified precision/recall/F1 on a hand-checkable scene.

use spectra_eval::annotate::{Annotation, BBox, SceneRecord};
use spectra_eval::matcheval::{match_detections, report, write_report_csv, Detection};

fn main() -> spectra_eval::Result<()> {
    let gt = vec![
        Annotation::new("s1", BBox::new(0.0, 0.0, 10.0, 10.0)?),
        Annotation::new("s1", BBox::new(20.0, 20.0, 30.0, 30.0)?),
    ];
    let dets = vec![
        Detection::new("s1", BBox::new(0.0, 0.0, 10.0, 10.0)?, 0.9)?,
        Detection::new("s1", BBox::new(21.0, 21.0, 31.0, 31.0)?, 0.8)?,
        Detection::new("s1", BBox::new(50.0, 50.0, 60.0, 60.0)?, 0.7)?,
    ];

    let m = match_detections(&gt, &dets, 0.5, 0.5)?;
    for tp in &m.true_positives {
        println!("detection {} -> gt {} (IoU {:.3})", tp.detection, tp.gt, tp.iou);
    }
    println!("unmatched detections: {:?}", m.false_positives.iter().map(|f| f.detection).collect::<Vec<_>>());

    let scene = SceneRecord::new("s1", BBox::new(0.0, 0.0, 100.0, 100.0)?, gt);
    let r = report(&[(scene, dets)], 0.5, 0.5)?;
    println!("P {:.4} R {:.4} F1 {:.4}\n", r.overall.precision, r.overall.recall, r.overall.f1);
    write_report_csv(std::io::stdout().lock(), &[r])
}
