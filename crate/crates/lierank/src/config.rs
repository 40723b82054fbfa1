//! Experiment configuration, loadable from JSON or TOML.

use std::path::Path;

use anyhow::{bail, Context, Result};
use lierank_core::closure::RankMethod;
use lierank_core::models::{xxz_2x2_with, OneBodyTerm};
use lierank_core::optimize::BfgsSettings;
use lierank_core::proxy::ProxyConfig;
use lierank_core::{ClosureOptions, HamiltonianSpec, VqeSettings};
use serde::{Deserialize, Serialize};

use crate::formats::HamiltonianJson;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OneBody {
    /// `offset * I`.
    Offset,
    /// `-field * sum_k Z_k`.
    Field,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    pub j: f64,
    pub delta: f64,
    pub one_body: OneBody,
    pub offset: f64,
    pub field: f64,
    /// Hamiltonian JSON file used instead of the 2x2 XXZ model.
    pub model_json: Option<String>,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self { j: 0.1, delta: -2.0, one_body: OneBody::Offset, offset: 1.0, field: 0.0, model_json: None }
    }
}

impl ModelConfig {
    pub fn build(&self) -> Result<HamiltonianSpec> {
        if let Some(path) = &self.model_json {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
            let json: HamiltonianJson = serde_json::from_str(&text).with_context(|| format!("parsing {path}"))?;
            return json.to_spec().with_context(|| format!("building Hamiltonian from {path}"));
        }
        let one_body = match self.one_body {
            OneBody::Offset => OneBodyTerm::Offset { c: self.offset },
            OneBody::Field => OneBodyTerm::Field { h: self.field },
        };
        Ok(xxz_2x2_with(self.j, self.delta, one_body)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    GramSchmidt,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClosureConfig {
    pub method: Method,
    pub max_iterations: Option<usize>,
}

impl Default for ClosureConfig {
    fn default() -> Self {
        Self { method: Method::Exact, max_iterations: None }
    }
}

impl ClosureConfig {
    pub fn options(&self, rank_bound: Option<usize>) -> ClosureOptions {
        let method = match self.method {
            Method::Exact => RankMethod::Exact,
            Method::GramSchmidt => RankMethod::GramSchmidt,
        };
        ClosureOptions { max_iterations: self.max_iterations, rank_bound, method }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RankConfig {
    /// Sampled partitions per block count.
    pub n_t: usize,
    /// Block counts; empty means `1..=n_terms`.
    pub m_values: Vec<usize>,
    /// Iterations written to the plot-ready evolution file.
    pub export_iterations: usize,
}

impl Default for RankConfig {
    fn default() -> Self {
        Self { n_t: 1000, m_values: Vec::new(), export_iterations: 9 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProxySection {
    pub k: usize,
    pub p_lo: f64,
    pub p_hi: f64,
    pub plateau: f64,
    /// Held-out partitions per block count for the backtest.
    pub n_held_out: usize,
}

impl Default for ProxySection {
    fn default() -> Self {
        Self { k: 3, p_lo: 0.25, p_hi: 0.95, plateau: 0.99, n_held_out: 500 }
    }
}

impl ProxySection {
    pub fn proxy_config(&self, m_lo: usize, m_hi: usize) -> ProxyConfig {
        ProxyConfig { k: self.k, p_lo: self.p_lo, p_hi: self.p_hi, m_lo, m_hi, plateau: self.plateau }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VqeConfig {
    /// Partitions per block count; fewer when fewer exist.
    pub partitions_per_m: usize,
    /// Block counts; empty means `1..=n_terms`.
    pub m_values: Vec<usize>,
    pub p_max: usize,
    pub restarts: usize,
    pub lap_restarts: usize,
    pub init_range: f64,
    pub initial_basis_state: usize,
    pub fd_step: f64,
    pub grad_tol: f64,
    pub value_tol: f64,
    pub max_evaluations: usize,
}

impl Default for VqeConfig {
    fn default() -> Self {
        let b = BfgsSettings::default();
        Self {
            partitions_per_m: 5,
            m_values: Vec::new(),
            p_max: 8,
            restarts: 10,
            lap_restarts: 20,
            init_range: 0.1,
            initial_basis_state: 0,
            fd_step: b.fd_step,
            grad_tol: b.grad_tol,
            value_tol: b.value_tol,
            max_evaluations: b.max_evaluations,
        }
    }
}

impl VqeConfig {
    fn settings(&self, restarts: usize) -> VqeSettings {
        VqeSettings {
            restarts,
            init_range: self.init_range,
            initial_basis_state: self.initial_basis_state,
            bfgs: BfgsSettings {
                fd_step: self.fd_step,
                grad_tol: self.grad_tol,
                value_tol: self.value_tol,
                max_evaluations: self.max_evaluations,
            },
        }
    }

    pub fn vha_settings(&self) -> VqeSettings {
        self.settings(self.restarts)
    }

    pub fn lap_settings(&self) -> VqeSettings {
        self.settings(self.lap_restarts)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    /// Worker threads; 0 uses every available core.
    pub jobs: usize,
    pub out_dir: String,
    pub model: ModelConfig,
    pub closure: ClosureConfig,
    pub rank: RankConfig,
    pub proxy: ProxySection,
    pub vqe: VqeConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 20_210_519,
            jobs: 0,
            out_dir: "out".into(),
            model: ModelConfig::default(),
            closure: ClosureConfig::default(),
            rank: RankConfig::default(),
            proxy: ProxySection::default(),
            vqe: VqeConfig::default(),
        }
    }
}

impl ExperimentConfig {
    /// Reads a `.json` or `.toml` file; missing keys take their defaults.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display())),
            Some("toml") => toml::from_str(&text).with_context(|| format!("parsing {}", path.display())),
            _ => bail!("{}: config must end in .json or .toml", path.display()),
        }
    }

    /// `values` if non-empty, else `1..=n_terms`, checked against `n_terms`.
    pub fn block_counts(values: &[usize], n_terms: usize) -> Result<Vec<usize>> {
        if values.is_empty() {
            return Ok((1..=n_terms).collect());
        }
        if let Some(m) = values.iter().find(|&&m| m == 0 || m > n_terms) {
            bail!("block count {m} outside 1..={n_terms}");
        }
        let mut out = values.to_vec();
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_toml_keeps_defaults() {
        let cfg: ExperimentConfig = toml::from_str("seed = 5\n[rank]\nn_t = 20\n[model]\none_body = \"field\"\nfield = 0.5\n").unwrap();
        assert_eq!(cfg.seed, 5);
        assert_eq!(cfg.rank.n_t, 20);
        assert_eq!(cfg.rank.export_iterations, 9);
        assert_eq!(cfg.vqe, VqeConfig::default());
        assert_eq!(cfg.model.build().unwrap().terms()[12].label, "field");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"sed": 1}"#).is_err());
    }

    #[test]
    fn json_round_trip() {
        let cfg = ExperimentConfig::default();
        let back: ExperimentConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn block_count_ranges() {
        assert_eq!(ExperimentConfig::block_counts(&[], 3).unwrap(), [1, 2, 3]);
        assert_eq!(ExperimentConfig::block_counts(&[3, 1, 3], 3).unwrap(), [1, 3]);
        assert!(ExperimentConfig::block_counts(&[4], 3).is_err());
    }
}
