//! Cross-validation summaries and unpaired two-sample t-tests.

mod dist;

use std::collections::BTreeMap;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use self::dist::{ln_gamma, regularized_incomplete_beta, student_t_cdf, student_t_two_tailed_p};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Precision,
    Recall,
    F1,
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "precision" => Ok(Metric::Precision),
            "recall" => Ok(Metric::Recall),
            "f1" => Ok(Metric::F1),
            other => Err(Error::InvalidScore(format!("unknown metric {other:?}"))),
        }
    }
}

/// One metric of one condition, one value per fold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldScores {
    pub condition: String,
    pub metric: Metric,
    pub values: Vec<f64>,
}

impl FoldScores {
    pub fn new(condition: impl Into<String>, metric: Metric, values: Vec<f64>) -> Result<Self> {
        let f = FoldScores { condition: condition.into(), metric, values };
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<()> {
        if self.values.len() < 2 {
            return Err(Error::InsufficientFolds(self.values.len()));
        }
        if let Some(v) = self.values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidScore(format!("{} {:?} value {v} outside [0, 1]", self.condition, self.metric)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    /// n - 1 denominator.
    pub sample_std: f64,
    /// Two sample standard deviations.
    pub errbar: f64,
}

pub fn summarize(f: &FoldScores) -> Result<Summary> {
    let (mean, var) = mean_var(&f.values)?;
    let sample_std = var.sqrt();
    Ok(Summary { mean, sample_std, errbar: 2.0 * sample_std })
}

fn mean_var(values: &[f64]) -> Result<(f64, f64)> {
    if values.len() < 2 {
        return Err(Error::InsufficientFolds(values.len()));
    }
    if values.iter().all(|&v| v == values[0]) {
        return Ok((values[0], 0.0));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok((mean, var))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum VarianceMode {
    /// Student's test with pooled variance.
    #[default]
    Pooled,
    /// Welch's test with Satterthwaite degrees of freedom.
    Welch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTestResult {
    pub t: f64,
    pub df: f64,
    pub p_two_tailed: f64,
}

pub fn ttest_unpaired(a: &FoldScores, b: &FoldScores, mode: VarianceMode) -> Result<TTestResult> {
    ttest_values(&a.values, &b.values, mode)
}

/// Two-tailed unpaired t-test on raw samples.
pub fn ttest_values(a: &[f64], b: &[f64], mode: VarianceMode) -> Result<TTestResult> {
    let (ma, va) = mean_var(a)?;
    let (mb, vb) = mean_var(b)?;
    let (n1, n2) = (a.len() as f64, b.len() as f64);
    let diff = ma - mb;
    let (se, df) = match mode {
        VarianceMode::Pooled => {
            let df = n1 + n2 - 2.0;
            let pooled = ((n1 - 1.0) * va + (n2 - 1.0) * vb) / df;
            ((pooled * (1.0 / n1 + 1.0 / n2)).sqrt(), df)
        }
        VarianceMode::Welch => {
            let (qa, qb) = (va / n1, vb / n2);
            let df = if qa + qb > 0.0 {
                (qa + qb).powi(2) / (qa * qa / (n1 - 1.0) + qb * qb / (n2 - 1.0))
            } else {
                n1 + n2 - 2.0
            };
            ((qa + qb).sqrt(), df)
        }
    };
    // Exact equality of the means is the only case a zero standard error tolerates.
    if se == 0.0 {
        return if diff == 0.0 {
            Ok(TTestResult { t: 0.0, df, p_two_tailed: 1.0 })
        } else {
            Err(Error::DegenerateVariance)
        };
    }
    let t = diff / se;
    Ok(TTestResult { t, df, p_two_tailed: student_t_two_tailed_p(t, df) })
}

/// Reads `condition,metric,fold,value` rows (header required) into fold-ordered score sets.
pub fn read_fold_csv(reader: impl Read) -> Result<Vec<FoldScores>> {
    #[derive(Deserialize)]
    struct Row {
        condition: String,
        metric: String,
        fold: u32,
        value: f64,
    }
    let mut groups: BTreeMap<(String, Metric), BTreeMap<u32, f64>> = BTreeMap::new();
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    for (i, row) in rdr.deserialize::<Row>().enumerate() {
        let row = row.map_err(|e| Error::parse("fold csv", e))?;
        let metric: Metric = row.metric.parse()?;
        let folds = groups.entry((row.condition.clone(), metric)).or_default();
        if folds.insert(row.fold, row.value).is_some() {
            return Err(Error::parse(
                format!("fold csv row {}", i + 2),
                format!("fold {} repeated for {} {:?}", row.fold, row.condition, metric),
            ));
        }
    }
    if groups.is_empty() {
        return Err(Error::EmptyInput("fold csv has no rows".into()));
    }
    groups
        .into_iter()
        .map(|((condition, metric), folds)| FoldScores::new(condition, metric, folds.into_values().collect()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionSummary {
    pub condition: String,
    pub metric: Metric,
    pub folds: usize,
    #[serde(flatten)]
    pub summary: Summary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseTest {
    pub metric: Metric,
    pub a: String,
    pub b: String,
    #[serde(flatten)]
    pub result: TTestResult,
}

/// Summaries of every score set and t-tests between every pair of conditions sharing a metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub variance_mode: VarianceMode,
    pub summaries: Vec<ConditionSummary>,
    pub tests: Vec<PairwiseTest>,
}

pub fn analyze(scores: &[FoldScores], mode: VarianceMode) -> Result<StatsReport> {
    let mut summaries = Vec::with_capacity(scores.len());
    for s in scores {
        summaries.push(ConditionSummary {
            condition: s.condition.clone(),
            metric: s.metric,
            folds: s.values.len(),
            summary: summarize(s)?,
        });
    }
    let mut tests = Vec::new();
    for (i, a) in scores.iter().enumerate() {
        for b in scores[i + 1..].iter().filter(|b| b.metric == a.metric) {
            tests.push(PairwiseTest {
                metric: a.metric,
                a: a.condition.clone(),
                b: b.condition.clone(),
                result: ttest_unpaired(a, b, mode)?,
            });
        }
    }
    Ok(StatsReport { variance_mode: mode, summaries, tests })
}
