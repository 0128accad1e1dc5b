//! Experiment configuration: a TOML file with nested sections. Every
//! section beyond `[instance]` has defaults, so a minimal config only
//! names the problem.

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use paramlab_core::configurator::Metric;
use paramlab_core::ea::InitScheme;
use paramlab_core::problems::{MaskSpec, ProblemInstance, ProblemKind};
use paramlab_core::params::ParameterSpace;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub space: SpaceCfg,
    pub instance: InstanceCfg,
    #[serde(default)]
    pub campaign: CampaignCfg,
    #[serde(default)]
    pub recurrence: RecurrenceCfg,
    #[serde(default)]
    pub blindness: BlindnessCfg,
    #[serde(default)]
    pub validate: ValidateCfg,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceCfg {
    pub d: u32,
    pub phi: u32,
}

impl Default for SpaceCfg {
    fn default() -> Self {
        Self { d: 10, phi: 3 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceCfg {
    pub kind: ProblemKind,
    pub n: usize,
    /// `"zeros"`, `"random(SEED)"`, or explicit hex.
    #[serde(default = "default_mask")]
    pub mask: String,
}

fn default_mask() -> String {
    "zeros".to_string()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignCfg {
    #[serde(default = "default_metric")]
    pub metric: Metric,
    /// Defaults to the problem's standard initialisation: all-zeros for
    /// Ridge, uniform random for LeadingOnes.
    #[serde(default)]
    pub init: Option<InitScheme>,
    /// Cutoff expression: `"C"`, `"C*n"` or `"C*n^2"`.
    #[serde(default = "default_kappa")]
    pub kappa: String,
    #[serde(default = "default_r")]
    pub r: u32,
    #[serde(default = "default_penalty")]
    pub p: f64,
    #[serde(default = "default_t", rename = "T")]
    pub t: u64,
    #[serde(default = "default_n_campaigns")]
    pub n_campaigns: u64,
    #[serde(default = "default_master_seed")]
    pub master_seed: u64,
    /// Also write a per-step trace file.
    #[serde(default)]
    pub trace: bool,
}

fn default_metric() -> Metric {
    Metric::BestFitness
}
fn default_kappa() -> String {
    "1*n^2".to_string()
}
fn default_r() -> u32 {
    1
}
fn default_penalty() -> f64 {
    10.0
}
fn default_t() -> u64 {
    100
}
fn default_n_campaigns() -> u64 {
    50
}
fn default_master_seed() -> u64 {
    1
}

impl Default for CampaignCfg {
    fn default() -> Self {
        Self {
            metric: default_metric(),
            init: None,
            kappa: default_kappa(),
            r: default_r(),
            p: default_penalty(),
            t: default_t(),
            n_campaigns: default_n_campaigns(),
            master_seed: default_master_seed(),
            trace: false,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RecurrenceCfg {
    pub psi: u64,
    /// Periods certified by the landscape pass.
    pub max_periods: u64,
    /// First period of the finishes-first verification range.
    pub start_period: u64,
    pub epsilon: f64,
    /// Sampling stride for the emitted bound curves.
    pub curve_stride: u64,
}

impl Default for RecurrenceCfg {
    fn default() -> Self {
        Self {
            psi: 1_000_000,
            max_periods: 772_076,
            start_period: 772_076,
            epsilon: 1e-11,
            curve_stride: 10_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BlindnessCfg {
    pub n_campaigns: u64,
    pub oracle_walks: u64,
    /// Rejection level the pass verdict is measured against.
    pub alpha: f64,
    /// Epsilon in the Ridge cutoff threshold (1 - epsilon) e n^2.
    pub threshold_epsilon: f64,
}

impl Default for BlindnessCfg {
    fn default() -> Self {
        Self {
            n_campaigns: 2000,
            oracle_walks: 100_000,
            alpha: 0.01,
            threshold_epsilon: 0.01,
        }
    }
}

/// Tolerances and sizes for the simulation-vs-theory checks; defaults
/// match the declared acceptance thresholds.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ValidateCfg {
    /// Problem size for the mean-runtime checks.
    pub n: usize,
    pub runs: u64,
    pub mean_rel_tolerance: f64,
    pub bracket_n: usize,
    pub bracket_seeds: u64,
    pub bracket_psi: u64,
    pub bracket_margin: f64,
    pub bracket_min_fraction: f64,
}

impl Default for ValidateCfg {
    fn default() -> Self {
        Self {
            n: 100,
            runs: 200,
            mean_rel_tolerance: 0.1,
            bracket_n: 1000,
            bracket_seeds: 30,
            bracket_psi: 100,
            bracket_margin: 0.05,
            bracket_min_fraction: 0.99,
        }
    }
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).context("parsing experiment config")
    }

    pub fn space(&self) -> Result<ParameterSpace> {
        ParameterSpace::new(self.space.d, self.space.phi).map_err(Into::into)
    }

    pub fn problem_instance(&self) -> Result<ProblemInstance> {
        let mask_spec: MaskSpec = self
            .instance
            .mask
            .parse()
            .map_err(|e: String| anyhow::anyhow!(e))?;
        let mask = mask_spec
            .build(self.instance.n)
            .context("mask does not fit the instance size")?;
        ProblemInstance::new(self.instance.kind, self.instance.n, mask).map_err(Into::into)
    }

    pub fn init_scheme(&self) -> InitScheme {
        self.campaign.init.unwrap_or(match self.instance.kind {
            ProblemKind::Ridge => InitScheme::AllZeros,
            ProblemKind::LeadingOnes => InitScheme::UniformRandom,
        })
    }

    pub fn kappa(&self) -> Result<u64> {
        parse_kappa(&self.campaign.kappa, self.instance.n)
    }
}

/// Parses a cutoff expression: a constant, `C*n`, or `C*n^2`.
pub fn parse_kappa(expr: &str, n: usize) -> Result<u64> {
    let compact: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    let (coeff_str, power) = if let Some(head) = compact.strip_suffix("*n^2") {
        (head, 2)
    } else if let Some(head) = compact.strip_suffix("*n") {
        (head, 1)
    } else {
        (compact.as_str(), 0)
    };
    let coeff: f64 = coeff_str
        .parse()
        .with_context(|| format!("bad cutoff expression {expr:?}"))?;
    if coeff < 0.0 {
        bail!("cutoff expression {expr:?} is negative");
    }
    Ok((coeff * (n as f64).powi(power)).round() as u64)
}
