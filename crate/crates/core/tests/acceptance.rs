//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! All tolerances, sample sizes and time limits are pinned below.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng as _;

use multisecretary::axioms::{
    check_ejr_bruteforce, check_jr, make_counterexample, CounterexampleSpec, EjrVariant,
};
use multisecretary::harness::{
    records_csv, run_experiment, verify_thm_mes, verify_thm_nash, ExperimentConfig, ExperimentKind,
};
use multisecretary::io::{parse_pabulib, read_native, to_election, write_native};
use multisecretary::offline::{bos, mes, nash_welfare, utilitarian_topk};
use multisecretary::rng::{derive_seed, rng_from_seed, Rng};
use multisecretary::samplers::{sample, Culture, SampleSpec};
use multisecretary::{
    greedy_budgeting, online_mes, online_nash, random_order, run_rule, ArrivalOrder, Committee,
    Election, OnlineRule,
};

const C1_TIME: Duration = Duration::from_secs(1);
const C2_TIME: Duration = Duration::from_secs(10);
const C3_INSTANCES: usize = 1000;
const C3_SPEND_TOL: f64 = 1e-9;
const C4_MIN_RUNS: usize = 4000;
const C5_ORDERS: usize = 5000;
const C5_TIME: Duration = Duration::from_secs(120);
const C6_ORDERS: usize = 500;
const C6_INSTANCES: usize = 20;
const C6_BOUND: f64 = 0.0903;
const C6_TIME: Duration = Duration::from_secs(120);
const C7_INSTANCES: usize = 500;
const C7_TRIPLES: usize = 100_000;
const C7_TOL: f64 = 1e-9;
const C8_INSTANCES: usize = 300;
const C8_ORDERS: usize = 10;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn committee(ms: &[usize]) -> Committee {
    Committee::from_members(ms.iter().copied()).unwrap()
}

fn c1_example_triple() -> Outcome {
    let start = Instant::now();
    let e = Election::example_hiring_board();
    let o = ArrivalOrder::identity(6);
    let got = [
        greedy_budgeting(&e, &o).unwrap().members().to_vec(),
        online_mes(&e, &o, 2).unwrap().members().to_vec(),
        online_nash(&e, &o).unwrap().members().to_vec(),
        utilitarian_topk(&e).members().to_vec(),
    ];
    let want = [vec![0, 1], vec![2, 3], vec![2, 5], vec![3, 5]];
    let elapsed = start.elapsed();
    outcome(
        got == want && elapsed < C1_TIME,
        format!("greedy/online-mes/online-nash/topk = {got:?}, expected {want:?}, {elapsed:.2?}"),
    )
}

fn c2_impossibility() -> Outcome {
    let start = Instant::now();
    let specs = [
        CounterexampleSpec::beta_ejr(3, 2.0, 0.1),
        CounterexampleSpec::ejr_gamma(3, 2, 0.01),
        CounterexampleSpec::delta_ejr(2, 1.0, 0.1),
        CounterexampleSpec::strong_jr(),
    ];
    let mut escaped = Vec::new();
    let mut total = 0;
    for spec in specs {
        let c = make_counterexample(spec).unwrap();
        for rule in OnlineRule::ALL {
            total += 1;
            let w = run_rule(rule, &c.election, &c.order).unwrap();
            if c.check(&w).unwrap().satisfied {
                let labels: Vec<&str> = w.members().iter().map(|&i| c.labels[i].as_str()).collect();
                escaped.push(format!("{}/{rule} -> {{{}}}", spec.kind, labels.join(",")));
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        escaped.is_empty() && elapsed < C2_TIME,
        format!(
            "{}/{total} (fixture, rule) pairs violated; not violated: [{}]; {elapsed:.2?}",
            total - escaped.len(),
            escaped.join("; ")
        ),
    )
}

/// A spec for the `i`-th sampled instance, cycling through the cultures.
fn sampled_spec(i: usize, rng: &mut Rng) -> SampleSpec {
    let n = rng.random_range(4..=30);
    let m = rng.random_range(4..=20);
    let k = rng.random_range(2..m);
    let culture = match i % 4 {
        0 => Culture::Ic { p: rng.random_range(0.1..=1.0) },
        1 => Culture::Mallows { phi: rng.random_range(0.05..=1.0), noise: true },
        2 => Culture::NormalizedMallows { norm_phi: rng.random_range(0.0..=1.0), noise: true },
        _ => Culture::Polarized { x: rng.random_range(0.1..=0.9), q: rng.random_range(0.1..=1.0) },
    };
    SampleSpec::new(culture, n, m, k, rng.random())
}

fn sampled_corpus(seed: u64, count: usize) -> Vec<Election> {
    let mut rng = rng_from_seed(seed);
    (0..count).map(|i| sample(&sampled_spec(i, &mut rng)).unwrap()).collect()
}

fn c3_greedy_jr() -> Outcome {
    let corpus = sampled_corpus(3, C3_INSTANCES);
    let (mut jr_ok, mut spend_ok) = (0, 0);
    let mut worst_spend = f64::NEG_INFINITY;
    for (i, e) in corpus.iter().enumerate() {
        let o = random_order(e.num_candidates(), derive_seed(&[3, i as u64])).unwrap();
        let w = greedy_budgeting(e, &o).unwrap();
        jr_ok += check_jr(e, &w).unwrap().satisfied as usize;
        let excess = w.audit.total_paid() - e.committee_size() as f64;
        worst_spend = worst_spend.max(excess);
        spend_ok += (excess <= C3_SPEND_TOL) as usize;
    }
    let n = corpus.len();
    outcome(
        jr_ok == n && spend_ok == n,
        format!("JR {jr_ok}/{n}, spend <= k in {spend_ok}/{n} (max spend - k = {worst_spend:e})"),
    )
}

fn c4_feasibility() -> Outcome {
    let corpus = sampled_corpus(4, C4_MIN_RUNS / 4);
    let mut runs = 0;
    let mut bad = Vec::new();
    for (i, e) in corpus.iter().enumerate() {
        let o = random_order(e.num_candidates(), derive_seed(&[4, i as u64])).unwrap();
        for rule in OnlineRule::ALL {
            runs += 1;
            let w = run_rule(rule, e, &o).unwrap();
            if w.len() != e.committee_size() || w.validate(e).is_err() {
                bad.push(format!("instance {i} {rule}: {} members", w.len()));
            }
        }
    }
    outcome(
        runs >= C4_MIN_RUNS && bad.is_empty(),
        format!("{} of {runs} rule-runs returned exactly k members {bad:?}", runs - bad.len()),
    )
}

fn c5_thm_mes() -> Outcome {
    let start = Instant::now();
    let mut cfg = ExperimentConfig::new(ExperimentKind::ThmMes);
    cfg.n = 60;
    cfg.m = 40;
    cfg.k = 3;
    cfg.p = 2;
    cfg.winners = 3;
    cfg.instances = 1;
    cfg.iterations = C5_ORDERS;
    cfg.seed = 5;
    let r = verify_thm_mes(&cfg).unwrap();
    let elapsed = start.elapsed();
    let freqs: Vec<String> = r.winners.iter().map(|w| format!("c{}={:.4}", w.candidate + 1, w.frequency)).collect();
    let per_winner = r.winners.iter().all(|w| w.frequency >= r.per_winner_threshold);
    outcome(
        per_winner && elapsed < C5_TIME,
        format!(
            "t={}, hire frequencies [{}] vs threshold {:.4}; {elapsed:.2?}",
            r.exploration,
            freqs.join(", "),
            r.per_winner_threshold
        ),
    )
}

fn c6_thm_nash() -> Outcome {
    let start = Instant::now();
    let mut cfg = ExperimentConfig::new(ExperimentKind::ThmNash);
    cfg.instances = C6_INSTANCES;
    cfg.iterations = C6_ORDERS;
    cfg.seed = 6;
    let r = verify_thm_nash(&cfg).unwrap();
    let elapsed = start.elapsed();
    outcome(
        r.mean_ratio >= C6_BOUND && elapsed < C6_TIME,
        format!(
            "mean exp-welfare ratio {:.4} over {} instances x {} orders (bound {C6_BOUND}); {elapsed:.2?}",
            r.mean_ratio,
            r.instances.len(),
            r.orders
        ),
    )
}

fn random_small(rng: &mut Rng) -> Election {
    let n = rng.random_range(1..=8);
    let m = rng.random_range(3..=8);
    let k = rng.random_range(2..=4.min(m - 1));
    let approval = rng.random_bool(0.5);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            (0..m)
                .map(|_| match (approval, rng.random_bool(0.5)) {
                    (_, false) => 0.0,
                    (true, true) => 1.0,
                    (false, true) => rng.random_range(1..=5) as f64,
                })
                .collect()
        })
        .collect();
    Election::new(&rows, k, None).unwrap()
}

fn c7_offline_oracles() -> Outcome {
    let mut rng = rng_from_seed(7);
    let (mut ejr_ok, mut completed_ok, mut affordable, mut same) = (0, 0, 0, 0);
    for _ in 0..C7_INSTANCES {
        let e = random_small(&mut rng);
        let (w, trace) = mes(&e);
        let core = committee(&trace.core());
        ejr_ok += check_ejr_bruteforce(&e, &core, EjrVariant::EXACT).unwrap().satisfied as usize;
        completed_ok += check_ejr_bruteforce(&e, &w, EjrVariant::EXACT).unwrap().satisfied as usize;
        if trace.completion_added.is_empty() {
            affordable += 1;
            same += (bos(&e).0.members() == w.members()) as usize;
        }
    }
    let mut worst = f64::INFINITY;
    for _ in 0..C7_TRIPLES {
        let e = random_small(&mut rng);
        let m = e.num_candidates();
        let x = rng.random_range(0..m);
        let b: Vec<usize> = (0..m).filter(|&c| c != x && rng.random_bool(0.5)).collect();
        let a: Vec<usize> = b.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
        let pi = |s: &[usize]| nash_welfare(&e, &committee(s));
        let with = |s: &[usize]| {
            let mut v = s.to_vec();
            v.push(x);
            v
        };
        let gap = (pi(&with(&a)) - pi(&a)) - (pi(&with(&b)) - pi(&b));
        worst = worst.min(gap);
    }
    outcome(
        ejr_ok == C7_INSTANCES && affordable > 0 && same == affordable && worst >= -C7_TOL,
        format!(
            "core EJR {ejr_ok}/{C7_INSTANCES} (completed {completed_ok}/{C7_INSTANCES}); bos = mes on {same}/{affordable} exactly-affordable; \
min marginal gap over {C7_TRIPLES} triples {worst:e}"
        ),
    )
}

fn quota_stat(out: &multisecretary::harness::ExperimentOutput, rule: &str) -> f64 {
    out.aggregates
        .iter()
        .find(|a| a.table == "quota" && a.rule == rule && a.statistic == "underperformance_pct")
        .map(|a| a.value)
        .unwrap_or(f64::NAN)
}

fn c8_exp4() -> Outcome {
    let mut cfg = ExperimentConfig::new(ExperimentKind::Exp4);
    cfg.instances = C8_INSTANCES;
    cfg.iterations = C8_ORDERS;
    cfg.seed = 8;
    let out = run_experiment(&cfg).unwrap();
    let [g, m, b, n] = ["greedy", "online-mes", "online-bos", "online-nash"].map(|r| quota_stat(&out, r));
    outcome(
        g == 0.0 && n < m && n < b && out.skipped.is_empty(),
        format!("underperformance %: greedy {g:.2}, online-mes {m:.2}, online-bos {b:.2}, online-nash {n:.2}"),
    )
}

fn c9_io() -> Outcome {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/data/pabulib");
    let golden = [
        ("synthetic_small.pb", 40, 12, 134.0),
        ("synthetic_medium.pb", 200, 40, 575.0),
        ("synthetic_wide.pb", 150, 80, 428.0),
    ];
    let mut problems = Vec::new();
    for (file, n, m, ones) in golden {
        let text = std::fs::read_to_string(format!("{dir}/{file}")).unwrap();
        let e = to_election(&parse_pabulib(&text).unwrap(), 2).unwrap();
        let total: f64 = (0..m).map(|c| e.column_sum(c)).sum();
        if (e.num_voters(), e.num_candidates(), total) != (n, m, ones) {
            problems.push(format!("{file}: {}x{} with {total} approvals", e.num_voters(), e.num_candidates()));
        }
    }
    let mut round_trips = 0;
    for (i, e) in sampled_corpus(9, 200).iter().enumerate() {
        let o = random_order(e.num_candidates(), i as u64).unwrap();
        let back = read_native(&write_native(e, Some(&o))).unwrap();
        if back.election == *e && back.order.as_ref() == Some(&o) {
            round_trips += 1;
        }
    }
    let mut cfg = ExperimentConfig::new(ExperimentKind::Exp4);
    cfg.instances = 10;
    cfg.iterations = 3;
    cfg.seed = 9;
    let a = records_csv(&run_experiment(&cfg).unwrap().records).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let b = pool.install(|| records_csv(&run_experiment(&cfg).unwrap().records).unwrap());
    let identical = a == b;
    outcome(
        problems.is_empty() && round_trips == 200 && identical,
        format!("golden files {problems:?}; native round trips {round_trips}/200; rerun CSV identical: {identical}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("hiring-board triple", c1_example_triple),
        ("impossibility fixtures", c2_impossibility),
        ("greedy JR and budget", c3_greedy_jr),
        ("feasibility", c4_feasibility),
        ("thm-mes hire frequency", c5_thm_mes),
        ("thm-nash welfare ratio", c6_thm_nash),
        ("MES/BOS oracle properties", c7_offline_oracles),
        ("exp-4 quota ordering", c8_exp4),
        ("I/O golden and determinism", c9_io),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        failed += !o.pass as usize;
        println!("criterion {} ({name}): {} - {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
