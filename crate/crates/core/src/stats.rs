//! Small statistical helpers for the validation harness: normal-
//! approximation confidence intervals and a chi-square goodness-of-fit
//! test with the standard minimum-expected-count bin merging.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Sample mean with a 95% normal-approximation confidence interval.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MeanCi {
    pub mean: f64,
    pub lo: f64,
    pub hi: f64,
}

pub fn mean_ci95(samples: &[f64]) -> MeanCi {
    assert!(samples.len() >= 2, "need at least two samples");
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    let half = 1.96 * (var / n).sqrt();
    MeanCi {
        mean,
        lo: mean - half,
        hi: mean + half,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub dof: u64,
    pub p_value: f64,
    /// Bin count after merging cells with expected count < 5.
    pub bins_used: usize,
}

/// Chi-square goodness of fit of observed counts against expected counts
/// (same total). Adjacent cells are merged until every cell's expected
/// count is at least 5; a deficient final cell is merged backwards.
pub fn chi_square_gof(observed: &[u64], expected: &[f64]) -> ChiSquareResult {
    assert_eq!(observed.len(), expected.len());
    assert!(!observed.is_empty());
    let mut obs_m: Vec<f64> = Vec::new();
    let mut exp_m: Vec<f64> = Vec::new();
    let mut o_acc = 0.0;
    let mut e_acc = 0.0;
    for (&o, &e) in observed.iter().zip(expected) {
        o_acc += o as f64;
        e_acc += e;
        if e_acc >= 5.0 {
            obs_m.push(o_acc);
            exp_m.push(e_acc);
            o_acc = 0.0;
            e_acc = 0.0;
        }
    }
    if e_acc > 0.0 || o_acc > 0.0 {
        if let (Some(last_o), Some(last_e)) = (obs_m.last_mut(), exp_m.last_mut()) {
            *last_o += o_acc;
            *last_e += e_acc;
        } else {
            obs_m.push(o_acc);
            exp_m.push(e_acc);
        }
    }
    let statistic: f64 = obs_m
        .iter()
        .zip(&exp_m)
        .map(|(o, e)| (o - e) * (o - e) / e)
        .sum();
    let dof = obs_m.len().saturating_sub(1).max(1) as u64;
    let p_value = if obs_m.len() < 2 {
        1.0
    } else {
        let dist = ChiSquared::new(dof as f64).expect("dof >= 1");
        1.0 - dist.cdf(statistic)
    };
    ChiSquareResult {
        statistic,
        dof,
        p_value,
        bins_used: obs_m.len(),
    }
}

/// One validation check's outcome; pass/fail is determined only by the
/// declared tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct StatReport {
    pub metric: String,
    pub sample_size: u64,
    pub estimate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub pass: bool,
}

impl StatReport {
    pub fn from_mean(metric: impl Into<String>, samples: &[f64], pass: bool) -> Self {
        let ci = mean_ci95(samples);
        Self {
            metric: metric.into(),
            sample_size: samples.len() as u64,
            estimate: ci.mean,
            ci_lo: ci.lo,
            ci_hi: ci.hi,
            pass,
        }
    }
}
