//! Resolution of run parameters: flags, then the config file, then
//! defaults.
//!
//! Config grammar: one `key = value` per line; blank lines and lines
//! starting with `#` are ignored; keys are the long flag names with `-`
//! or `_`; unknown keys are an error.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};

use equilib::Tolerances;

use crate::args::{Cli, Command};

const KEYS: &[&str] = &[
    "beta1", "beta2", "gamma", "symmetric", "charges", "grid_lo", "grid_hi", "grid_n", "out", "jobs",
    "x_lo", "x_hi", "samples", "gamma_lo", "gamma_hi", "gamma_step", "beta_max", "beta_n",
    "frostman_tol", "density_tol", "support_cells", "transition_band",
];

#[derive(Debug, Default)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected `key = value`", n + 1))?;
            let key = key.trim().replace('-', "_");
            if !KEYS.contains(&key.as_str()) {
                bail!("line {}: unknown key `{key}`", n + 1);
            }
            entries.insert(key, value.trim().to_string());
        }
        Ok(ConfigFile { entries })
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.entries
            .get(key)
            .map(|v| v.parse::<T>().map_err(|_| anyhow!("config key `{key}`: cannot parse `{v}`")))
            .transpose()
    }
}

/// Fully resolved parameters of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub beta1: Option<f64>,
    pub beta2: Option<f64>,
    pub gamma: Option<f64>,
    pub symmetric: bool,
    pub charges: Option<PathBuf>,
    pub grid_lo: Option<f64>,
    pub grid_hi: Option<f64>,
    pub grid_n: Option<usize>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub x_lo: f64,
    pub x_hi: f64,
    pub samples: usize,
    pub gamma_lo: f64,
    pub gamma_hi: f64,
    pub gamma_step: f64,
    pub beta_max: f64,
    pub beta_n: usize,
    pub frostman_tol: f64,
    pub density_tol: f64,
    pub support_cells: f64,
    pub tol: Tolerances,
}

fn pick<T: FromStr>(flag: Option<T>, cfg: &ConfigFile, key: &str) -> Result<Option<T>> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => cfg.get(key),
    }
}

impl RunConfig {
    pub fn resolve(cli: &Cli) -> Result<Self> {
        let c = &cli.common;
        let cfg = match &c.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let (mut x_lo, mut x_hi, mut samples) = (None, None, None);
        let (mut gamma_lo, mut gamma_hi, mut gamma_step) = (None, None, None);
        let (mut beta_max, mut beta_n) = (None, None);
        let (mut frostman_tol, mut density_tol, mut support_cells) = (None, None, None);
        match &cli.command {
            Command::Density(s) | Command::SignedDensity(s) => (x_lo, x_hi, samples) = (s.x_lo, s.x_hi, s.samples),
            Command::SupportEvolution(s) => (gamma_lo, gamma_hi, gamma_step) = (s.gamma_lo, s.gamma_hi, s.gamma_step),
            Command::PhaseRegion(r) => (beta_max, beta_n) = (r.beta_max, r.beta_n),
            Command::Verify(v) => {
                (frostman_tol, density_tol, support_cells) = (v.frostman_tol, v.density_tol, v.support_cells)
            }
            Command::Phase => {}
        }
        let mut tol = Tolerances::default();
        if let Some(band) = pick(c.transition_band, &cfg, "transition_band")? {
            if !(0.0..0.5).contains(&band) {
                bail!("transition band {band} must lie in [0, 0.5)");
            }
            tol.transition = band;
        }
        let symmetric = c.symmetric || cfg.get::<bool>("symmetric")?.unwrap_or(false);
        Ok(RunConfig {
            beta1: pick(c.beta1, &cfg, "beta1")?,
            beta2: pick(c.beta2, &cfg, "beta2")?,
            gamma: pick(c.gamma, &cfg, "gamma")?,
            symmetric,
            charges: pick(c.charges.clone(), &cfg, "charges")?,
            grid_lo: pick(c.grid_lo, &cfg, "grid_lo")?,
            grid_hi: pick(c.grid_hi, &cfg, "grid_hi")?,
            grid_n: pick(c.grid_n, &cfg, "grid_n")?,
            out: pick(c.out.clone(), &cfg, "out")?,
            jobs: pick(c.jobs, &cfg, "jobs")?,
            x_lo: pick(x_lo, &cfg, "x_lo")?.unwrap_or(-10.0),
            x_hi: pick(x_hi, &cfg, "x_hi")?.unwrap_or(10.0),
            samples: pick(samples, &cfg, "samples")?.unwrap_or(2001),
            gamma_lo: pick(gamma_lo, &cfg, "gamma_lo")?.unwrap_or(0.01),
            gamma_hi: pick(gamma_hi, &cfg, "gamma_hi")?.unwrap_or(0.99),
            gamma_step: pick(gamma_step, &cfg, "gamma_step")?.unwrap_or(0.01),
            beta_max: pick(beta_max, &cfg, "beta_max")?.unwrap_or(5.0),
            beta_n: pick(beta_n, &cfg, "beta_n")?.unwrap_or(50),
            frostman_tol: pick(frostman_tol, &cfg, "frostman_tol")?.unwrap_or(1e-3),
            density_tol: pick(density_tol, &cfg, "density_tol")?.unwrap_or(0.02),
            support_cells: pick(support_cells, &cfg, "support_cells")?.unwrap_or(2.0),
            tol,
        })
    }

    /// Metadata lines describing the resolved inputs.
    pub fn describe(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        let mut push = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                out.push((k.to_string(), v));
            }
        };
        push("beta1", self.beta1.map(|v| v.to_string()));
        push("beta2", self.beta2.map(|v| v.to_string()));
        push("gamma", self.gamma.map(|v| v.to_string()));
        push("symmetric", self.symmetric.then(|| "true".to_string()));
        push("charges", self.charges.as_ref().map(|p| p.display().to_string()));
        let band = self.tol.transition;
        push("transition_band", (band != Tolerances::default().transition).then(|| band.to_string()));
        out
    }
}
