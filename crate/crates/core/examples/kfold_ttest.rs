//! Five-fold F1 summaries (mean +/- 2 sd) and pairwise unpaired t-tests.

use spectra_eval::stats::{analyze, read_fold_csv, VarianceMode};

const FOLDS: &str = "condition,metric,fold,value
rgb_8bit,f1,0,0.36
rgb_8bit,f1,1,0.35
rgb_8bit,f1,2,0.37
rgb_8bit,f1,3,0.38
rgb_8bit,f1,4,0.36
rgb_13bit,f1,0,0.28
rgb_13bit,f1,1,0.30
rgb_13bit,f1,2,0.27
rgb_13bit,f1,3,0.29
rgb_13bit,f1,4,0.31
";

fn main() -> spectra_eval::Result<()> {
    let scores = read_fold_csv(FOLDS.as_bytes())?;
    for mode in [VarianceMode::Pooled, VarianceMode::Welch] {
        let r = analyze(&scores, mode)?;
        println!("{mode:?}");
        for s in &r.summaries {
            println!("  {:<10} {:.4} +/- {:.4}", s.condition, s.summary.mean, s.summary.errbar);
        }
        for t in &r.tests {
            println!(
                "  {} vs {}: t {:.3}, df {:.2}, p {:.3e}",
                t.a, t.b, t.result.t, t.result.df, t.result.p_two_tailed
            );
        }
    }
    Ok(())
}
