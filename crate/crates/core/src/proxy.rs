//! Early-iteration predictor of whether a partition reaches the maximum Lie rank.
//!
//! For each block count `m` the model holds
//!
//! ```text
//! f(x) = 1                          x >= a
//!        1 / (1 + alpha e^(beta x))  otherwise
//! ```
//!
//! where `a` is the mean rank after `k` closure passes. `alpha` and `beta` are
//! pinned by `f(x_min) = p_min(m)` and `f(a) = plateau` on the logistic branch,
//! with `x_min` the smallest rank observed at pass `k`. The prediction `L(x)`
//! linearly interpolates `f` over the observed ranks below `a` plus the node
//! `(a, 1)`, and clamps outside them.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;

use crate::closure::ClosureTrace;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ProxyConfig {
    /// Closure pass whose rank is used as the predictor.
    pub k: usize,
    /// `p_min` at `m = m_lo`.
    pub p_lo: f64,
    /// `p_min` at `m = m_hi`.
    pub p_hi: f64,
    pub m_lo: usize,
    pub m_hi: usize,
    /// Logistic value just below `a`.
    pub plateau: f64,
}

impl ProxyConfig {
    /// Defaults for a Hamiltonian with `n_terms` terms.
    pub fn for_terms(n_terms: usize) -> Self {
        Self { k: 3, p_lo: 0.25, p_hi: 0.95, m_lo: 1, m_hi: n_terms, plateau: 0.99 }
    }

    /// Linear schedule between `(m_lo, p_lo)` and `(m_hi, p_hi)`, clamped.
    pub fn p_min(&self, m: usize) -> f64 {
        if self.m_hi <= self.m_lo {
            return self.p_hi;
        }
        let t = (m as f64 - self.m_lo as f64) / (self.m_hi - self.m_lo) as f64;
        self.p_lo + t.clamp(0.0, 1.0) * (self.p_hi - self.p_lo)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProxyEntry {
    pub m: usize,
    /// Mean rank at pass `k`.
    pub a: f64,
    pub alpha: f64,
    pub beta: f64,
    pub p_min: f64,
    pub x_min: f64,
    /// `(x, L(x))`, strictly increasing in `x`, last node `(a, 1)`.
    pub nodes: Vec<(f64, f64)>,
    /// Fewer than two distinct ranks below `a`; `f` falls back to a step at `a`.
    pub degenerate: bool,
    pub samples: usize,
}

impl ProxyEntry {
    /// The piecewise function `f`.
    pub fn f(&self, x: f64) -> f64 {
        if x >= self.a {
            1.0
        } else {
            1.0 / (1.0 + self.alpha * (self.beta * x).exp())
        }
    }

    /// `L(x)`.
    pub fn interpolate(&self, x: f64) -> f64 {
        let nodes = &self.nodes;
        let v = if x <= nodes[0].0 {
            nodes[0].1
        } else if x >= nodes[nodes.len() - 1].0 {
            nodes[nodes.len() - 1].1
        } else {
            let i = nodes.partition_point(|(nx, _)| *nx <= x);
            let ((x0, y0), (x1, y1)) = (nodes[i - 1], nodes[i]);
            y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        };
        v.clamp(0.0, 1.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProxyModel {
    pub k: usize,
    /// Sorted by `m`.
    pub entries: Vec<ProxyEntry>,
}

impl ProxyModel {
    pub fn entry(&self, m: usize) -> Option<&ProxyEntry> {
        self.entries.iter().find(|e| e.m == m)
    }

    /// Degenerate fits, as errors suitable for reporting as warnings.
    pub fn degenerate_fits(&self) -> Vec<Error> {
        self.entries
            .iter()
            .filter(|e| e.degenerate)
            .map(|e| Error::DegenerateFit {
                m: e.m,
                reason: alloc::format!("fewer than two distinct ranks below the mean {:.3}", e.a),
            })
            .collect()
    }
}

/// One partition's observation: block count, rank after `k` passes, and
/// whether its full closure reached the maximum rank.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankObservation {
    pub m: usize,
    pub rank_at_k: usize,
    pub reached_max: bool,
}

impl RankObservation {
    pub fn from_trace(m: usize, trace: &ClosureTrace, k: usize, max_rank: usize) -> Self {
        Self { m, rank_at_k: trace.rank_at(k), reached_max: trace.final_rank() == max_rank }
    }
}

/// Fits the model from full closure traces.
pub fn fit_proxy(traces: &[(usize, ClosureTrace, bool)], config: &ProxyConfig) -> Result<ProxyModel> {
    let obs: Vec<RankObservation> = traces
        .iter()
        .map(|(m, t, reached)| RankObservation { m: *m, rank_at_k: t.rank_at(config.k), reached_max: *reached })
        .collect();
    fit_proxy_observations(&obs, config)
}

pub fn fit_proxy_observations(obs: &[RankObservation], config: &ProxyConfig) -> Result<ProxyModel> {
    if obs.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    if config.k == 0 {
        return Err(Error::OutOfRange { what: "k", value: 0, min: 1, max: usize::MAX });
    }
    if !(0.0 < config.p_lo && config.p_hi < config.plateau && config.plateau < 1.0 && config.p_lo <= config.p_hi) {
        return Err(Error::Numerical(alloc::format!(
            "proxy probabilities must satisfy 0 < p_lo <= p_hi < plateau < 1, got {} {} {}",
            config.p_lo,
            config.p_hi,
            config.plateau
        )));
    }
    let mut ms: Vec<usize> = obs.iter().map(|o| o.m).collect();
    ms.sort_unstable();
    ms.dedup();
    let entries = ms.into_iter().map(|m| fit_entry(m, obs, config)).collect();
    Ok(ProxyModel { k: config.k, entries })
}

fn fit_entry(m: usize, obs: &[RankObservation], config: &ProxyConfig) -> ProxyEntry {
    let mut ranks: Vec<usize> = obs.iter().filter(|o| o.m == m).map(|o| o.rank_at_k).collect();
    ranks.sort_unstable();
    let samples = ranks.len();
    let a = ranks.iter().sum::<usize>() as f64 / samples as f64;
    let x_min = ranks[0] as f64;
    let p_min = config.p_min(m);
    ranks.dedup();
    let below: Vec<f64> = ranks.iter().map(|&r| r as f64).filter(|&r| r < a).collect();

    // 1/(1 + alpha e^(beta x)) = p  <=>  alpha e^(beta x) = 1/p - 1
    let u = 1.0 / p_min - 1.0;
    let w = 1.0 / config.plateau - 1.0;
    let degenerate = below.len() < 2;
    let (alpha, beta) = if degenerate || a <= x_min {
        (u, 0.0)
    } else {
        let beta = (w / u).ln() / (a - x_min);
        (u * (-beta * x_min).exp(), beta)
    };
    let mut entry = ProxyEntry { m, a, alpha, beta, p_min, x_min, nodes: Vec::new(), degenerate, samples };
    let mut nodes: Vec<(f64, f64)> = below.iter().map(|&x| (x, entry.f(x))).collect();
    nodes.push((a, 1.0));
    entry.nodes = nodes;
    entry
}

/// `L(rank_at_k)` from the entry for `m`, or the nearest fitted `m`.
pub fn predict(model: &ProxyModel, m: usize, rank_at_k: usize) -> f64 {
    let entry = model
        .entries
        .iter()
        .min_by_key(|e| e.m.abs_diff(m))
        .expect("fitted models have at least one entry");
    entry.interpolate(rank_at_k as f64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CalibrationBin {
    pub m: usize,
    pub rank_at_k: usize,
    pub count: usize,
    pub predicted: f64,
    pub empirical: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CalibrationReport {
    pub bins: Vec<CalibrationBin>,
    /// Count-weighted mean of `|predicted - empirical|` over bins.
    pub mean_abs_error: f64,
}

/// Compares predictions against observed outcomes, binned by `(m, rank)`.
pub fn calibrate(model: &ProxyModel, held_out: &[RankObservation]) -> CalibrationReport {
    let mut keys: Vec<(usize, usize)> = held_out.iter().map(|o| (o.m, o.rank_at_k)).collect();
    keys.sort_unstable();
    keys.dedup();
    let mut weighted = 0.0;
    let bins: Vec<CalibrationBin> = keys
        .into_iter()
        .map(|(m, r)| {
            let members: Vec<&RankObservation> = held_out.iter().filter(|o| o.m == m && o.rank_at_k == r).collect();
            let count = members.len();
            let empirical = members.iter().filter(|o| o.reached_max).count() as f64 / count as f64;
            let predicted = predict(model, m, r);
            weighted += count as f64 * (predicted - empirical).abs();
            CalibrationBin { m, rank_at_k: r, count, predicted, empirical }
        })
        .collect();
    let total = held_out.len().max(1) as f64;
    CalibrationReport { bins, mean_abs_error: weighted / total }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obs(m: usize, ranks: &[usize]) -> Vec<RankObservation> {
        ranks.iter().map(|&r| RankObservation { m, rank_at_k: r, reached_max: r >= 40 }).collect()
    }

    fn model() -> ProxyModel {
        let mut o = obs(4, &[10, 20, 30, 40, 50, 55, 60, 61]);
        o.extend(obs(13, &[61, 61, 61]));
        fit_proxy_observations(&o, &ProxyConfig::for_terms(13)).unwrap()
    }

    #[test]
    fn plateau_and_floor() {
        let model = model();
        let e = model.entry(4).unwrap();
        assert!((e.a - 40.75).abs() < 1e-12);
        assert!(!e.degenerate);
        assert!((e.p_min - (0.25 + 3.0 / 12.0 * 0.7)).abs() < 1e-12);
        assert!((e.interpolate(e.x_min) - e.p_min).abs() < 1e-12);
        assert!((e.f(e.x_min) - e.p_min).abs() < 1e-12);
        assert_eq!(e.interpolate(e.a), 1.0);
        assert_eq!(predict(&model, 4, 41), 1.0);
        assert_eq!(predict(&model, 4, 61), 1.0);
        // logistic branch meets the plateau value just below a
        let just_below = 1.0 / (1.0 + e.alpha * (e.beta * e.a).exp());
        assert!((just_below - 0.99).abs() < 1e-12);
    }

    #[test]
    fn interpolation_between_nodes() {
        let e = model().entry(4).unwrap().clone();
        let (x0, y0) = e.nodes[0];
        let (x1, y1) = e.nodes[1];
        let mid = 0.5 * (x0 + x1);
        assert!((e.interpolate(mid) - 0.5 * (y0 + y1)).abs() < 1e-12);
    }

    #[test]
    fn monotone_and_bounded() {
        let model = model();
        let mut prev = 0.0;
        for r in 0..70 {
            let p = predict(&model, 4, r);
            assert!((0.0..=1.0).contains(&p));
            assert!(p >= prev);
            prev = p;
        }
    }

    #[test]
    fn constant_ranks_are_degenerate() {
        let model = model();
        let e = model.entry(13).unwrap();
        assert!(e.degenerate);
        assert_eq!(predict(&model, 13, 61), 1.0);
        assert_eq!(model.degenerate_fits().len(), 1);
    }

    #[test]
    fn calibration_report() {
        let model = model();
        let held = obs(4, &[10, 10, 61]);
        let report = calibrate(&model, &held);
        assert_eq!(report.bins.len(), 2);
        let p10 = predict(&model, 4, 10);
        let expected = (2.0 * p10 + 0.0) / 3.0;
        assert!((report.mean_abs_error - expected).abs() < 1e-12);
    }

    #[test]
    fn bad_config_rejected() {
        let o = obs(2, &[1, 2]);
        let mut c = ProxyConfig::for_terms(13);
        c.p_hi = 0.995;
        assert!(fit_proxy_observations(&o, &c).is_err());
        assert!(fit_proxy_observations(&[], &ProxyConfig::for_terms(13)).is_err());
    }
}
