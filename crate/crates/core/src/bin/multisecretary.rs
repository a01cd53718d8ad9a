use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use multisecretary::axioms::{
    check_ejr_bruteforce, check_ejr_plus_approval, check_jr, check_strong_jr, make_counterexample,
    AxiomReport, CounterexampleKind, CounterexampleSpec, EjrVariant,
};
use multisecretary::harness::{
    committee_label, records_csv, run_experiment, verify_thm_mes, verify_thm_nash, write_outputs,
    ExperimentConfig, ExperimentKind,
};
use multisecretary::io::{is_pabulib, parse_pabulib, read_native, to_election, write_native};
use multisecretary::samplers::{sample, Culture, SampleSpec};
use multisecretary::{random_order, ArrivalOrder, Committee, Election, Error, OnlineRule, OnlineRuleConfig};

/// Online committee selection: run rules, check axioms, sample profiles and
/// reproduce experiments.
#[derive(Parser)]
#[command(name = "multisecretary", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an online rule on an instance and print the committee with its audit.
    Run {
        /// greedy, online-mes, online-bos or online-nash.
        #[arg(value_parser = parse_rule)]
        rule: OnlineRule,
        /// Native-format file, or a .pb file together with --k.
        #[arg(long)]
        instance: PathBuf,
        /// `identity`, a numeric seed for a uniform random order, or an
        /// explicit 1-indexed list such as `3,1,2`. Defaults to the order
        /// stored in the file, else identity.
        #[arg(long)]
        order: Option<String>,
        /// Exploration length for Online MES/BOS (default floor(m/e)).
        #[arg(long)]
        t: Option<usize>,
        /// Committee size; required for .pb files, overrides native files.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Check a committee against an axiom. Exits with 1 when violated.
    Check {
        /// jr, strong-jr, ejr-plus or ejr.
        #[arg(value_parser = ["jr", "strong-jr", "ejr-plus", "ejr"])]
        axiom: String,
        #[arg(long)]
        instance: PathBuf,
        /// Comma-separated 1-indexed candidates, e.g. `4,6` or `c4,c6`.
        #[arg(long)]
        committee: String,
        /// Multiplicative relaxation for ejr (default 1).
        #[arg(long, conflicts_with_all = ["gamma", "delta"])]
        beta: Option<f64>,
        /// Additive-candidate relaxation for ejr.
        #[arg(long, conflicts_with = "delta")]
        gamma: Option<usize>,
        /// Group-size relaxation for ejr.
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Sample a synthetic profile and print it in the native format.
    Sample {
        /// ic, mallows, normalized-mallows or polarized.
        #[arg(value_parser = ["ic", "mallows", "normalized-mallows", "polarized"])]
        culture: String,
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// IC approval probability.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// Mallows dispersion (normalized scale for normalized-mallows).
        #[arg(long, default_value_t = 0.5)]
        phi: f64,
        /// Disable the Mallows utility noise.
        #[arg(long)]
        no_noise: bool,
        /// Polarized group-A share.
        #[arg(long, default_value_t = 0.5)]
        x: f64,
        /// Polarized group-B approval rate.
        #[arg(long, default_value_t = 0.5)]
        q: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run an experiment described by a key=value config file.
    Experiment {
        config: PathBuf,
        /// Overrides the config's output path.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Emit one of the impossibility constructions in the native format.
    Counterexample {
        /// beta-ejr, ejr-gamma, delta-ejr or strong-jr.
        #[arg(value_parser = parse_kind)]
        id: CounterexampleKind,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 2.0)]
        beta: f64,
        #[arg(long, default_value_t = 2)]
        gamma: usize,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
    },
}

fn parse_rule(s: &str) -> Result<OnlineRule, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_kind(s: &str) -> Result<CounterexampleKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn load(path: &Path, k: Option<usize>) -> Result<(Election, Option<ArrivalOrder>), Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    if is_pabulib(path) {
        let k = k.ok_or_else(|| Error::InvalidParameter("--k is required for .pb instances".into()))?;
        return Ok((to_election(&parse_pabulib(&text)?, k)?, None));
    }
    let inst = read_native(&text)?;
    let e = match k {
        Some(k) => inst.election.with_committee_size(k)?,
        None => inst.election,
    };
    Ok((e, inst.order))
}

fn parse_order(s: &str, m: usize) -> Result<ArrivalOrder, Error> {
    if s == "identity" {
        return Ok(ArrivalOrder::identity(m));
    }
    if let Ok(seed) = s.parse::<u64>() {
        if !s.contains(',') {
            return random_order(m, seed);
        }
    }
    let perm = s
        .split(',')
        .map(|t| match t.trim().trim_start_matches('c').parse::<usize>() {
            Ok(c) if c >= 1 => Ok(c - 1),
            _ => Err(Error::InvalidOrder(format!("bad entry '{t}'"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    ArrivalOrder::new(perm)
}

fn parse_committee(s: &str) -> Result<Committee, Error> {
    let members = s
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| match t.trim().trim_start_matches('c').parse::<usize>() {
            Ok(c) if c >= 1 => Ok(c - 1),
            _ => Err(Error::InvalidCommittee(format!("bad member '{t}'"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Committee::from_members(members)
}

fn print_report(r: &AxiomReport) {
    println!("axiom: {}", r.axiom);
    println!("satisfied: {}", r.satisfied);
    if r.vacuous {
        println!("vacuous: true");
    }
    println!("violating_voter_share: {}", r.violating_voter_share);
    println!("shortfall: {}", r.shortfall);
    for w in &r.witnesses {
        let voters: Vec<String> = w.group.iter().map(|i| format!("v{}", i + 1)).collect();
        println!(
            "witness: voters {{{}}} candidates {{{}}} alpha {:?} required {} achieved {}",
            voters.join(","),
            committee_label(&w.candidates).replace(' ', ","),
            w.thresholds,
            w.required,
            w.achieved
        );
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Run { rule, instance, order, t, k } => {
            let (e, stored) = load(&instance, k)?;
            let m = e.num_candidates();
            let order = match order {
                Some(s) => parse_order(&s, m)?,
                None => stored.unwrap_or_else(|| ArrivalOrder::identity(m)),
            };
            let mut cfg = OnlineRuleConfig::new(rule);
            if let Some(t) = t {
                cfg = cfg.with_exploration(t);
            }
            let w = cfg.run(&e, &order)?;
            println!("rule: {rule}");
            println!("members: {}", committee_label(w.members()).replace(' ', ","));
            for a in &w.audit.arrivals {
                println!(
                    "arrival {} c{} {} {:?}",
                    a.position,
                    a.candidate + 1,
                    if a.hired { "hired" } else { "rejected" },
                    a.reason
                );
            }
            if !w.audit.payments.is_empty() {
                println!("total_paid: {}", w.audit.total_paid());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { axiom, instance, committee, beta, gamma, delta, k } => {
            let (e, _) = load(&instance, k)?;
            let w = parse_committee(&committee)?;
            let report = match axiom.as_str() {
                "jr" => check_jr(&e, &w)?,
                "strong-jr" => check_strong_jr(&e, &w)?,
                "ejr-plus" => check_ejr_plus_approval(&e, &w)?,
                _ => {
                    let variant = match (gamma, delta) {
                        (Some(g), _) => EjrVariant::Gamma(g),
                        (_, Some(d)) => EjrVariant::Delta(d),
                        _ => EjrVariant::Beta(beta.unwrap_or(1.0)),
                    };
                    check_ejr_bruteforce(&e, &w, variant)?
                }
            };
            print_report(&report);
            Ok(if report.satisfied { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Sample { culture, n, m, k, seed, p, phi, no_noise, x, q, output } => {
            let culture = match culture.as_str() {
                "ic" => Culture::Ic { p },
                "mallows" => Culture::Mallows { phi, noise: !no_noise },
                "normalized-mallows" => Culture::NormalizedMallows { norm_phi: phi, noise: !no_noise },
                _ => Culture::Polarized { x, q },
            };
            let e = sample(&SampleSpec::new(culture, n, m, k, seed))?;
            let text = write_native(&e, None);
            match output {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Experiment { config, output } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| Error::Io(format!("{}: {e}", config.display())))?;
            let base = config.parent().unwrap_or(Path::new("."));
            let mut cfg = ExperimentConfig::parse(&text, base)?;
            if output.is_some() {
                cfg.output = output;
            }
            match cfg.experiment {
                ExperimentKind::ThmMes => {
                    let r = verify_thm_mes(&cfg)?;
                    println!("orders: {} exploration: {}", r.orders, r.exploration);
                    for w in &r.winners {
                        println!("winner {} c{}: {:.4}", w.instance, w.candidate + 1, w.frequency);
                    }
                    println!("per_winner_threshold: {:.4}", r.per_winner_threshold);
                    println!(
                        "joint (>= {} winners): {:.4} threshold {:.4}{}",
                        r.joint_target,
                        r.joint_frequency,
                        r.joint_threshold,
                        if r.vacuous { " (vacuous)" } else { "" }
                    );
                    println!("{}", if r.pass { "PASS" } else { "FAIL" });
                    Ok(if r.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
                }
                ExperimentKind::ThmNash => {
                    let r = verify_thm_nash(&cfg)?;
                    for i in &r.instances {
                        println!("{}: optimum {:.6} mean ratio {:.4}", i.instance, i.optimum, i.mean_ratio);
                    }
                    println!("mean ratio: {:.4} bound {:.4}", r.mean_ratio, r.bound);
                    println!("{}", if r.pass { "PASS" } else { "FAIL" });
                    Ok(if r.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
                }
                _ => {
                    let out = run_experiment(&cfg)?;
                    for (id, reason) in &out.skipped {
                        eprintln!("skipped {id}: {reason}");
                    }
                    match &cfg.output {
                        Some(path) => write_outputs(&out, path)?,
                        None => print!("{}", records_csv(&out.records)?),
                    }
                    Ok(ExitCode::SUCCESS)
                }
            }
        }
        Command::Counterexample { id, k, beta, gamma, delta, epsilon } => {
            let spec = match id {
                CounterexampleKind::BetaEjr => CounterexampleSpec::beta_ejr(k, beta, epsilon),
                CounterexampleKind::EjrGamma => CounterexampleSpec::ejr_gamma(k, gamma, epsilon),
                CounterexampleKind::DeltaEjr => CounterexampleSpec::delta_ejr(k, delta, epsilon),
                CounterexampleKind::StrongJr => CounterexampleSpec::strong_jr(),
            };
            let c = make_counterexample(spec)?;
            println!("# {id}: {}", c.labels.join(" "));
            print!("{}", write_native(&c.election, Some(&c.order)));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
