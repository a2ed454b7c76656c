use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SplitMode {
    /// Two folds: training (`ratio` of the scenes, rounded) and the remainder.
    Holdout {
        ratio: f64,
    },
    KFold {
        k: usize,
    },
}

/// Disjoint scene-id folds. Serialized as `{seed, k, folds}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub seed: u64,
    pub k: usize,
    pub folds: Vec<Vec<String>>,
}

impl SplitPlan {
    /// Scenes outside fold `test_fold` (training) and inside it (testing).
    pub fn train_test(&self, test_fold: usize) -> Option<(Vec<&str>, Vec<&str>)> {
        let test = self.folds.get(test_fold)?;
        let train = self
            .folds
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != test_fold)
            .flat_map(|(_, f)| f.iter().map(String::as_str))
            .collect();
        Some((train, test.iter().map(String::as_str).collect()))
    }
}

/// Shuffles scene ids under `seed` and cuts them into folds.
///
/// Input order does not matter: ids are sorted before shuffling, so the plan
/// depends only on the id set and the seed.
pub fn make_splits<S: AsRef<str>>(scene_ids: &[S], mode: SplitMode, seed: u64) -> Result<SplitPlan> {
    if scene_ids.is_empty() {
        return Err(Error::EmptyInput("no scene ids to split".into()));
    }
    let mut ids: Vec<String> = scene_ids.iter().map(|s| s.as_ref().to_owned()).collect();
    ids.sort();
    if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateScene(w[0].clone()));
    }
    let n = ids.len();
    let sizes = match mode {
        SplitMode::Holdout { ratio } => {
            if !(ratio > 0.0 && ratio < 1.0) {
                return Err(Error::InvalidSplit(format!("holdout ratio {ratio} must lie in (0, 1)")));
            }
            if n < 2 {
                return Err(Error::InvalidSplit(format!("holdout needs at least 2 scenes, got {n}")));
            }
            let train = ((n as f64 * ratio).round() as usize).clamp(1, n - 1);
            vec![train, n - train]
        }
        SplitMode::KFold { k } => {
            if k == 0 {
                return Err(Error::InvalidSplit("k must be at least 1".into()));
            }
            if n < k {
                return Err(Error::InvalidSplit(format!("{n} scenes cannot fill {k} folds")));
            }
            (0..k).map(|i| n / k + usize::from(i < n % k)).collect()
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ids.shuffle(&mut rng);
    let mut rest = ids.into_iter();
    let folds = sizes.iter().map(|&s| rest.by_ref().take(s).collect()).collect();
    Ok(SplitPlan { seed, k: sizes.len(), folds })
}
