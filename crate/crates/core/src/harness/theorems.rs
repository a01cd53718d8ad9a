//! Monte Carlo checks of the two probabilistic guarantees.

use rand::seq::SliceRandom;
use rand::Rng as _;
use rayon::prelude::*;

use crate::election::{random_order, Election};
use crate::error::{Error, Result};
use crate::offline::{mes, nash_optimum_bruteforce, nash_welfare};
use crate::online::{default_exploration, online_mes, online_nash};
use crate::rng::{derive_seed, hash_str, rng_from_seed};
use crate::samplers::{sample, Culture, SampleSpec};

use super::config::{ExperimentConfig, Source};

/// `(1 − 1/e) / 7`.
pub fn nash_bound() -> f64 {
    (1.0 - (-1f64).exp()) / 7.0
}

/// Normal-approximation band `3·√(q(1−q)/N)` around a frequency `q`.
pub fn three_sigma(q: f64, trials: usize) -> f64 {
    3.0 * (q * (1.0 - q) / trials as f64).sqrt()
}

/// A single-approval profile: `winners` candidates backed by `⌈n/k⌉` voters
/// each, the other voters spread uniformly over the remaining candidates.
/// Every voter values exactly one candidate, at utility 1.
///
/// Errors if the winners need more than `n` voters or if some other
/// candidate would reach `n/k` supporters.
pub fn single_approval_instance(n: usize, m: usize, k: usize, winners: usize, seed: u64) -> Result<Election> {
    if winners == 0 || winners > k {
        return Err(Error::InvalidParameter(format!("winners must lie in 1..={k}")));
    }
    let quota = n.div_ceil(k);
    if winners * quota > n {
        return Err(Error::Infeasible(format!(
            "{winners} winners need {} voters, only {n} available",
            winners * quota
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut ids: Vec<usize> = (0..m).collect();
    ids.shuffle(&mut rng);
    let (top, rest) = ids.split_at(winners);
    let mut favourite = Vec::with_capacity(n);
    for &c in top {
        favourite.extend(std::iter::repeat_n(c, quota));
    }
    while favourite.len() < n {
        favourite.push(rest[rng.random_range(0..rest.len())]);
    }
    for &c in rest {
        if favourite.iter().filter(|&&f| f == c).count() * k >= n {
            return Err(Error::Infeasible(format!("non-winner c{} reached n/k supporters", c + 1)));
        }
    }
    let rows: Vec<Vec<f64>> = favourite
        .iter()
        .map(|&c| {
            let mut r = vec![0.0; m];
            r[c] = 1.0;
            r
        })
        .collect();
    Election::new(&rows, k, Some(1.0))
}

fn is_single_approval(e: &Election) -> bool {
    (0..e.num_voters()).all(|i| e.row(i).iter().filter(|&&u| u > 0.0).count() == 1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WinnerFrequency {
    pub instance: String,
    pub candidate: usize,
    pub frequency: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThmMesReport {
    pub orders: usize,
    pub exploration: usize,
    pub winners: Vec<WinnerFrequency>,
    pub per_winner_threshold: f64,
    /// Hiring at least this many offline-MES winners is the joint event.
    pub joint_target: usize,
    pub joint_frequency: f64,
    pub joint_threshold: f64,
    /// `p ≥ k`: EJR up to `k` candidates is vacuous.
    pub vacuous: bool,
    pub pass: bool,
}

/// Hire frequencies of offline-MES winners under Online MES over seeded
/// random orders.
///
/// Instances come from `cfg.sources` or, when none are given,
/// `cfg.instances` generated single-approval profiles of size
/// `(cfg.n, cfg.m, cfg.k)` with `cfg.winners` winners. The joint event is
/// "at least `min(k − p, |winners|)` winners hired", compared against
/// `(1/e)^(k−p)`.
pub fn verify_thm_mes(cfg: &ExperimentConfig) -> Result<ThmMesReport> {
    cfg.validate()?;
    let mut instances: Vec<(String, Election)> = Vec::new();
    for src in &cfg.sources {
        let e = match src {
            Source::Sample(spec) => sample(spec)?,
            Source::File(path) => crate::io::read_native(&crate::io::read_path(path)?)?.election,
        };
        instances.push((src.id(), e));
    }
    if instances.is_empty() {
        for i in 0..cfg.instances.max(1) {
            let seed = derive_seed(&[cfg.seed, hash_str("single-approval"), i as u64]);
            let e = single_approval_instance(cfg.n, cfg.m, cfg.k, cfg.winners, seed)?;
            instances.push((format!("single-approval:n={},m={},k={},seed={seed}", cfg.n, cfg.m, cfg.k), e));
        }
    }
    let n_orders = cfg.iterations;
    let mut winners = Vec::new();
    let mut joint_hits = 0usize;
    let mut joint_trials = 0usize;
    let mut joint_target = 0;
    let mut exploration = 0;
    for (id, e) in &instances {
        if !is_single_approval(e) {
            return Err(Error::WrongBallotType(format!("{id} is not single-approval")));
        }
        let (m, k) = (e.num_candidates(), e.committee_size());
        let t = cfg.exploration.unwrap_or_else(|| default_exploration(m));
        exploration = t;
        let core = mes(e).1.core();
        let target = k.saturating_sub(cfg.p).min(core.len());
        joint_target = target;
        let hires: Vec<Vec<bool>> = (0..n_orders)
            .into_par_iter()
            .map(|s| {
                let order = random_order(m, derive_seed(&[cfg.seed, hash_str(id), s as u64]))?;
                let w = online_mes(e, &order, t)?;
                Ok(core.iter().map(|&c| w.contains(c)).collect())
            })
            .collect::<Result<_>>()?;
        for (j, &c) in core.iter().enumerate() {
            let hits = hires.iter().filter(|h| h[j]).count();
            winners.push(WinnerFrequency {
                instance: id.clone(),
                candidate: c,
                frequency: hits as f64 / n_orders as f64,
            });
        }
        joint_hits += hires.iter().filter(|h| h.iter().filter(|&&x| x).count() >= target).count();
        joint_trials += n_orders;
    }
    let q = (-1f64).exp();
    let per_winner_threshold = q - three_sigma(q, n_orders);
    let k = cfg.k;
    let vacuous = cfg.p >= k;
    let jq = q.powi(k.saturating_sub(cfg.p) as i32);
    let joint_threshold = if vacuous { 1.0 } else { jq - three_sigma(jq, joint_trials) };
    let joint_frequency = joint_hits as f64 / joint_trials.max(1) as f64;
    let pass = winners.iter().all(|w| w.frequency >= per_winner_threshold)
        && (vacuous || joint_frequency >= joint_threshold);
    Ok(ThmMesReport {
        orders: n_orders,
        exploration,
        winners,
        per_winner_threshold,
        joint_target,
        joint_frequency,
        joint_threshold,
        vacuous,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NashInstanceResult {
    pub instance: String,
    pub optimum: f64,
    /// Mean of `exp(Π(online) − Π(opt))` over the orders.
    pub mean_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThmNashReport {
    pub orders: usize,
    pub instances: Vec<NashInstanceResult>,
    pub mean_ratio: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Expected Online Nash welfare against the brute-force optimum, as a ratio
/// of products `Π_i (1 + s_i)`.
///
/// Instances come from `cfg.sources` or, when none are given,
/// `cfg.instances` IC profiles with `n = 5`, `m = 12`, `k = 3`, `p = 0.5`.
pub fn verify_thm_nash(cfg: &ExperimentConfig) -> Result<ThmNashReport> {
    cfg.validate()?;
    let mut specs: Vec<Source> = cfg.sources.clone();
    if specs.is_empty() {
        specs = (0..cfg.instances.max(1))
            .map(|i| {
                let seed = derive_seed(&[cfg.seed, hash_str("thm-nash"), i as u64]);
                Source::Sample(SampleSpec::new(Culture::Ic { p: 0.5 }, 5, 12, 3, seed))
            })
            .collect();
    }
    let mut results = Vec::new();
    for src in &specs {
        let id = src.id();
        let e = match src {
            Source::Sample(spec) => sample(spec)?,
            Source::File(path) => crate::io::read_native(&crate::io::read_path(path)?)?.election,
        };
        let (_, opt) = nash_optimum_bruteforce(&e)?;
        let m = e.num_candidates();
        let ratios: Vec<f64> = (0..cfg.iterations)
            .into_par_iter()
            .map(|s| {
                let order = random_order(m, derive_seed(&[cfg.seed, hash_str(&id), s as u64]))?;
                let w = online_nash(&e, &order)?;
                Ok((nash_welfare(&e, &w) - opt).exp())
            })
            .collect::<Result<_>>()?;
        results.push(NashInstanceResult {
            instance: id,
            optimum: opt,
            mean_ratio: ratios.iter().sum::<f64>() / ratios.len() as f64,
        });
    }
    let mean_ratio = results.iter().map(|r| r.mean_ratio).sum::<f64>() / results.len() as f64;
    let bound = nash_bound();
    Ok(ThmNashReport {
        orders: cfg.iterations,
        instances: results,
        mean_ratio,
        bound,
        pass: mean_ratio >= bound,
    })
}
