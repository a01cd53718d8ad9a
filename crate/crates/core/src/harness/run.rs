use std::collections::BTreeMap;
use std::time::Instant;

use rand::Rng as _;
use rayon::prelude::*;

use crate::axioms::{check_ejr_plus_approval, check_jr};
use crate::election::{random_order, satisfaction, Committee, Election};
use crate::error::{Error, Result};
use crate::io::{committee_size_for_divisor, is_pabulib, parse_pabulib, read_native, read_path, to_election};
use crate::metrics::{compute_metrics, relative_to_baseline, MetricBundle};
use crate::offline::mes;
use crate::online::{OnlineRule, OnlineRuleConfig};
use crate::rng::{derive_seed, hash_str, rng_from_seed};
use crate::samplers::{proportional_quota, sample, Culture, Quota, SampleSpec};

use super::config::{ExperimentConfig, ExperimentKind, Source};

/// Rule id of the offline baseline rows.
pub const BASELINE: &str = "offline-mes";

/// One election ready to be run, with the label of its committee size.
#[derive(Debug, Clone)]
pub struct Instance {
    pub id: String,
    /// `m/20` style for divisor-derived sizes, the number itself otherwise.
    pub size_label: String,
    pub election: Election,
    pub spec: Option<SampleSpec>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub instance: String,
    pub size_label: String,
    pub k: usize,
    pub rule: String,
    pub iteration: usize,
    pub seed: u64,
    pub committee: Vec<usize>,
    pub metrics: MetricBundle,
    pub jr: bool,
    /// EJR+ violating share, average shortfall and witnessing candidates
    /// (approval instances only).
    pub ejr_plus: Option<(f64, f64, usize)>,
    /// Polarized instances only.
    pub quota: Option<Quota>,
    /// Wall-clock seconds; kept out of the main CSV.
    pub seconds: f64,
}

impl RunRecord {
    fn key(&self) -> (&str, usize, &str, &str, usize) {
        (&self.instance, self.k, &self.size_label, &self.rule, self.iteration)
    }
}

/// A line of the summary table.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub table: String,
    pub rule: String,
    pub size: String,
    pub statistic: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub records: Vec<RunRecord>,
    pub aggregates: Vec<AggregateRow>,
    /// `(source id, reason)` for every source or size that was not run.
    pub skipped: Vec<(String, String)>,
}

/// Loads every instance named by the config, generating the Exp 4 corpus
/// when no sources are given.
pub fn load_instances(cfg: &ExperimentConfig) -> (Vec<Instance>, Vec<(String, String)>) {
    let mut out = Vec::new();
    let mut skipped = Vec::new();
    let mut sources = cfg.sources.clone();
    if sources.is_empty() && cfg.experiment == ExperimentKind::Exp4 {
        sources = polarized_corpus(cfg.instances, cfg.seed).into_iter().map(Source::Sample).collect();
    }
    for src in &sources {
        let id = src.id();
        match src {
            Source::Sample(spec) => match sample(spec) {
                Ok(e) => out.push(Instance {
                    size_label: e.committee_size().to_string(),
                    id,
                    election: e,
                    spec: Some(*spec),
                }),
                Err(err) => skipped.push((id, err.to_string())),
            },
            Source::File(path) if is_pabulib(path) => {
                let parsed = read_path(path).and_then(|t| parse_pabulib(&t));
                let p = match parsed {
                    Ok(p) => p,
                    Err(err) => {
                        skipped.push((id, err.to_string()));
                        continue;
                    }
                };
                for &f in &cfg.divisors {
                    let built = committee_size_for_divisor(p.projects.len(), f)
                        .and_then(|k| to_election(&p, k));
                    match built {
                        Ok(e) => out.push(Instance {
                            id: id.clone(),
                            size_label: format!("m/{f}"),
                            election: e,
                            spec: None,
                        }),
                        Err(err) => skipped.push((format!("{id} (m/{f})"), err.to_string())),
                    }
                }
            }
            Source::File(path) => match read_path(path).and_then(|t| read_native(&t)) {
                Ok(inst) => out.push(Instance {
                    size_label: inst.election.committee_size().to_string(),
                    id,
                    election: inst.election,
                    spec: None,
                }),
                Err(err) => skipped.push((id, err.to_string())),
            },
        }
    }
    (out, skipped)
}

/// Random polarized instances with `n ∈ [20, 200]`, `m ∈ [10, 60]`,
/// `k ∈ [2, m/2]`, `x ∈ [0.1, 0.9]`, `q ∈ [0.1, 1]` (two decimals).
pub fn polarized_corpus(count: usize, seed: u64) -> Vec<SampleSpec> {
    let mut rng = rng_from_seed(derive_seed(&[seed, hash_str("exp4-corpus")]));
    (0..count)
        .map(|i| {
            let n = rng.random_range(20..=200);
            let m = rng.random_range(10..=60);
            let k = rng.random_range(2..=m / 2);
            let x = rng.random_range(10..=90) as f64 / 100.0;
            let q = rng.random_range(10..=100) as f64 / 100.0;
            SampleSpec::new(Culture::Polarized { x, q }, n, m, k, derive_seed(&[seed, i as u64]))
        })
        .collect()
}

fn evaluate(inst: &Instance, rule: &str, iteration: usize, seed: u64, w: &Committee, seconds: f64) -> Result<RunRecord> {
    let e = &inst.election;
    let s = satisfaction(e, w)?;
    let ejr_plus = if e.is_approval() {
        let r = check_ejr_plus_approval(e, w)?;
        Some((r.violating_voter_share, r.shortfall, r.witness_candidates()))
    } else {
        None
    };
    let quota = match inst.spec {
        Some(spec @ SampleSpec { culture: Culture::Polarized { .. }, .. }) => Some(proportional_quota(&spec, w)?),
        _ => None,
    };
    Ok(RunRecord {
        instance: inst.id.clone(),
        size_label: inst.size_label.clone(),
        k: e.committee_size(),
        rule: rule.to_string(),
        iteration,
        seed,
        committee: w.members().to_vec(),
        metrics: compute_metrics(&s),
        jr: check_jr(e, w)?.satisfied,
        ejr_plus,
        quota,
        seconds,
    })
}

/// Seed of the arrival order for one (instance, k, iteration).
pub fn order_seed(base: u64, instance: &str, k: usize, iteration: usize) -> u64 {
    derive_seed(&[base, hash_str(instance), k as u64, iteration as u64])
}

/// Runs the offline baseline once and every online rule `iterations` times.
pub fn run_instance(inst: &Instance, cfg: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    let e = &inst.election;
    let (m, k) = (e.num_candidates(), e.committee_size());
    let mut records = Vec::with_capacity(1 + 4 * cfg.iterations);
    let start = Instant::now();
    let (w, _) = mes(e);
    records.push(evaluate(inst, BASELINE, 0, 0, &w, start.elapsed().as_secs_f64())?);
    for it in 0..cfg.iterations {
        let seed = order_seed(cfg.seed, &inst.id, k, it);
        let order = random_order(m, seed)?;
        for rule in OnlineRule::ALL {
            let mut rc = OnlineRuleConfig::new(rule);
            if let Some(t) = cfg.exploration {
                rc = rc.with_exploration(t.min(m - 1));
            }
            let start = Instant::now();
            let w = rc.run(e, &order)?;
            let secs = start.elapsed().as_secs_f64();
            records.push(evaluate(inst, rule.id(), it, seed, &w, secs)?);
        }
    }
    Ok(records)
}

/// Runs Experiments 1 to 4. Records come back in canonical order
/// (instance, k, size label, rule, iteration) regardless of thread count.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    if matches!(cfg.experiment, ExperimentKind::ThmMes | ExperimentKind::ThmNash) {
        return Err(Error::InvalidParameter(format!(
            "{} is a statistical check; use verify_thm_mes / verify_thm_nash",
            cfg.experiment
        )));
    }
    let (instances, mut skipped) = load_instances(cfg);
    let results: Vec<(String, Result<Vec<RunRecord>>)> = instances
        .par_iter()
        .map(|inst| (inst.id.clone(), run_instance(inst, cfg)))
        .collect();
    let mut records = Vec::new();
    for (id, r) in results {
        match r {
            Ok(rs) => records.extend(rs),
            Err(err) => skipped.push((id, err.to_string())),
        }
    }
    records.sort_by(|a, b| a.key().cmp(&b.key()));
    skipped.sort();
    let aggregates = aggregate(cfg.experiment, &records);
    Ok(ExperimentOutput { records, aggregates, skipped })
}

fn mean(xs: impl IntoIterator<Item = f64>) -> f64 {
    let (s, n) = xs.into_iter().fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        s / n as f64
    }
}

fn push(out: &mut Vec<AggregateRow>, table: &str, rule: &str, size: &str, stat: &str, value: f64) {
    out.push(AggregateRow {
        table: table.into(),
        rule: rule.into(),
        size: size.into(),
        statistic: stat.into(),
        value,
    });
}

/// Summary tables computed from the row-level records alone.
///
/// * `means`: per rule and size, mean of every metric, JR rate, EJR+ share,
///   EJR+ shortfall averaged over violating runs, witnessing candidates.
/// * `ranking` (exp2): per metric, the share of (instance, size) cells in
///   which an online rule is best, in the top two, or worst, using its mean
///   over iterations. Tied rules share a place.
/// * `relative` (exp3): mean of `relative_to_baseline` against offline MES.
/// * `quota` (exp4): underperformance share in percent and mean deficit over
///   underperforming runs.
pub fn aggregate(kind: ExperimentKind, records: &[RunRecord]) -> Vec<AggregateRow> {
    let mut out = Vec::new();
    let mut groups: BTreeMap<(&str, &str), Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((&r.rule, &r.size_label)).or_default().push(r);
    }
    for (&(rule, size), rs) in &groups {
        push(&mut out, "means", rule, size, "runs", rs.len() as f64);
        for (f, name) in MetricBundle::FIELDS.iter().enumerate() {
            push(&mut out, "means", rule, size, name, mean(rs.iter().map(|r| r.metrics.values()[f])));
        }
        push(&mut out, "means", rule, size, "jr_rate", mean(rs.iter().map(|r| r.jr as u8 as f64)));
        let ejr: Vec<(f64, f64, usize)> = rs.iter().filter_map(|r| r.ejr_plus).collect();
        if !ejr.is_empty() {
            push(&mut out, "means", rule, size, "ejr_plus_share", mean(ejr.iter().map(|e| e.0)));
            push(
                &mut out,
                "means",
                rule,
                size,
                "ejr_plus_shortfall",
                mean(ejr.iter().filter(|e| e.0 > 0.0).map(|e| e.1)),
            );
            push(&mut out, "means", rule, size, "ejr_plus_witnesses", mean(ejr.iter().map(|e| e.2 as f64)));
        }
    }
    match kind {
        ExperimentKind::Exp2 => ranking(records, &mut out),
        ExperimentKind::Exp3 => relative(records, &mut out),
        ExperimentKind::Exp4 => quota(&groups, &mut out),
        _ => {}
    }
    out
}

fn ranking(records: &[RunRecord], out: &mut Vec<AggregateRow>) {
    // (instance, size) -> rule -> per-metric sums and count
    let mut cells: BTreeMap<(&str, &str), BTreeMap<&str, ([f64; 5], usize)>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.rule != BASELINE) {
        let e = cells.entry((&r.instance, &r.size_label)).or_default().entry(&r.rule).or_default();
        for (acc, v) in e.0.iter_mut().zip(r.metrics.values()) {
            *acc += v;
        }
        e.1 += 1;
    }
    // Larger is better except for exclusion and Gini.
    let higher_better = [true, false, true, false, true];
    let mut counts: BTreeMap<(&str, usize, &str), usize> = BTreeMap::new();
    for rules in cells.values() {
        for f in 0..5 {
            let sign = if higher_better[f] { 1.0 } else { -1.0 };
            let scores: Vec<(&str, f64)> =
                rules.iter().map(|(&rule, (s, n))| (rule, sign * s[f] / *n as f64)).collect();
            for &(rule, x) in &scores {
                let better = scores.iter().filter(|&&(_, y)| y > x).count();
                let worse = scores.iter().filter(|&&(_, y)| y < x).count();
                if better == 0 {
                    *counts.entry((rule, f, "best")).or_default() += 1;
                }
                if better < 2 {
                    *counts.entry((rule, f, "top2")).or_default() += 1;
                }
                if worse == 0 {
                    *counts.entry((rule, f, "worst")).or_default() += 1;
                }
            }
        }
    }
    let total = cells.len().max(1) as f64;
    for rule in OnlineRule::ALL.map(|r| r.id()) {
        for (f, name) in MetricBundle::FIELDS.iter().enumerate() {
            for place in ["best", "top2", "worst"] {
                let c = counts.get(&(rule, f, place)).copied().unwrap_or(0);
                push(out, "ranking", rule, "all", &format!("{place}:{name}"), c as f64 / total);
            }
        }
    }
}

fn relative(records: &[RunRecord], out: &mut Vec<AggregateRow>) {
    let base: BTreeMap<(&str, &str), &MetricBundle> = records
        .iter()
        .filter(|r| r.rule == BASELINE)
        .map(|r| ((r.instance.as_str(), r.size_label.as_str()), &r.metrics))
        .collect();
    let mut groups: BTreeMap<(&str, &str), Vec<[f64; 5]>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.rule != BASELINE) {
        if let Some(b) = base.get(&(r.instance.as_str(), r.size_label.as_str())) {
            groups
                .entry((&r.rule, &r.size_label))
                .or_default()
                .push(relative_to_baseline(&r.metrics, b).values());
        }
    }
    for (&(rule, size), rows) in &groups {
        for (f, name) in MetricBundle::FIELDS.iter().enumerate() {
            push(out, "relative", rule, size, name, mean(rows.iter().map(|v| v[f])));
        }
    }
}

fn quota(groups: &BTreeMap<(&str, &str), Vec<&RunRecord>>, out: &mut Vec<AggregateRow>) {
    let mut per_rule: BTreeMap<&str, Vec<Quota>> = BTreeMap::new();
    for (&(rule, _), rs) in groups {
        per_rule.entry(rule).or_default().extend(rs.iter().filter_map(|r| r.quota));
    }
    for (rule, qs) in per_rule {
        if qs.is_empty() {
            continue;
        }
        let under: Vec<&Quota> = qs.iter().filter(|q| q.underperforms()).collect();
        push(out, "quota", rule, "all", "runs", qs.len() as f64);
        push(out, "quota", rule, "all", "underperformance_pct", 100.0 * under.len() as f64 / qs.len() as f64);
        push(out, "quota", rule, "all", "mean_deficit", mean(under.iter().map(|q| q.deficit() as f64)));
    }
}
