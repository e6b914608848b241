use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::algorithms::{Variant, NFC_PER_DIMENSION};
use crate::benchmarks::BenchmarkFunction;
use crate::error::{Error, Result};
use crate::stats::DEFAULT_ALPHA;

fn default_dimensions() -> Vec<usize> {
    vec![10, 30]
}
fn default_trials() -> usize {
    30
}
fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}
fn default_output_dir() -> PathBuf {
    PathBuf::from("results")
}
fn default_shift_seed() -> u64 {
    1
}
fn default_nfc_per_dim() -> u64 {
    NFC_PER_DIMENSION
}

/// A batch of `(variant, function, dimension, trial)` cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub variants: Vec<String>,
    pub functions: Vec<String>,
    #[serde(default = "default_dimensions")]
    pub dimensions: Vec<usize>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// Reference side of the verdict matrix; OEMDE when listed, else the first variant.
    #[serde(default)]
    pub reference: Option<String>,
    /// Worker threads; all available cores when absent.
    #[serde(default)]
    pub workers: Option<usize>,
    /// Seed of the optimum shift shared by every variant.
    #[serde(default = "default_shift_seed")]
    pub shift_seed: u64,
    /// Budget per dimension, `nfc_max = nfc_per_dim * D`.
    #[serde(default = "default_nfc_per_dim")]
    pub nfc_per_dim: u64,
}

impl ExperimentConfig {
    pub fn new(variants: &[&str], functions: &[&str], dimensions: &[usize], trials: usize) -> Self {
        Self {
            variants: variants.iter().map(|s| s.to_string()).collect(),
            functions: functions.iter().map(|s| s.to_string()).collect(),
            dimensions: dimensions.to_vec(),
            trials,
            base_seed: 0,
            alpha: DEFAULT_ALPHA,
            output_dir: default_output_dir(),
            reference: None,
            workers: None,
            shift_seed: default_shift_seed(),
            nfc_per_dim: NFC_PER_DIMENSION,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("experiment config: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn parsed_variants(&self) -> Result<Vec<Variant>> {
        self.variants.iter().map(|v| v.parse()).collect()
    }

    pub fn parsed_functions(&self) -> Result<Vec<BenchmarkFunction>> {
        self.functions.iter().map(|f| f.parse()).collect()
    }

    pub fn reference_variant(&self) -> Result<Variant> {
        let variants = self.parsed_variants()?;
        match &self.reference {
            Some(name) => name.parse(),
            None if variants.contains(&Variant::Oemde) => Ok(Variant::Oemde),
            None => variants
                .first()
                .copied()
                .ok_or_else(|| Error::Config("no variants configured".into())),
        }
    }

    /// Rejects anything that would fail once runs have started.
    pub fn validate(&self) -> Result<()> {
        if self.variants.is_empty() || self.functions.is_empty() || self.dimensions.is_empty() {
            return Err(Error::Config(
                "variants, functions and dimensions must be non-empty".into(),
            ));
        }
        self.parsed_functions()?;
        let reference = self.reference_variant()?;
        let variants = self.parsed_variants()?;
        if !variants.contains(&reference) {
            return Err(Error::Config(format!(
                "reference {reference} is not among the variants"
            )));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.dimensions.contains(&0) {
            return Err(Error::Config("dimensions must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Config(format!(
                "alpha {} outside (0, 1)",
                self.alpha
            )));
        }
        if self.workers == Some(0) {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        for v in &variants {
            for &d in &self.dimensions {
                let mut c = v.config(d);
                c.nfc_max = self.nfc_per_dim * d as u64;
                c.validate()?;
            }
        }
        Ok(())
    }
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a(mut h: u64, bytes: &[u8]) -> u64 {
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

/// splitmix64 finalizer
fn finalize(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stable seed of one experiment cell, independent of scheduling order.
pub fn cell_seed(
    base_seed: u64,
    variant: &str,
    function: &str,
    dimension: usize,
    trial: usize,
) -> u64 {
    let mut h = fnv1a(FNV_OFFSET, &base_seed.to_le_bytes());
    h = fnv1a(h, variant.as_bytes());
    h = fnv1a(h, &[0xff]);
    h = fnv1a(h, function.as_bytes());
    h = fnv1a(h, &[0xff]);
    h = fnv1a(h, &(dimension as u64).to_le_bytes());
    h = fnv1a(h, &(trial as u64).to_le_bytes());
    finalize(h)
}
