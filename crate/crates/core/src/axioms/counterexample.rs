//! Instances on which no online rule can satisfy the relaxed axioms.
//!
//! Each construction presents a block of `a`-candidates that an online rule
//! must hire to protect individual voters, followed by a `b`-block that the
//! whole electorate values jointly. Candidates arrive in index order.

use std::fmt;
use std::str::FromStr;

use crate::election::{ArrivalOrder, Committee, Election};
use crate::error::{Error, Result};

use super::{check_ejr_bruteforce, check_strong_jr, AxiomReport, EjrVariant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CounterexampleKind {
    BetaEjr,
    EjrGamma,
    DeltaEjr,
    StrongJr,
}

impl CounterexampleKind {
    pub const ALL: [CounterexampleKind; 4] = [
        CounterexampleKind::BetaEjr,
        CounterexampleKind::EjrGamma,
        CounterexampleKind::DeltaEjr,
        CounterexampleKind::StrongJr,
    ];

    pub fn id(self) -> &'static str {
        match self {
            CounterexampleKind::BetaEjr => "beta-ejr",
            CounterexampleKind::EjrGamma => "ejr-gamma",
            CounterexampleKind::DeltaEjr => "delta-ejr",
            CounterexampleKind::StrongJr => "strong-jr",
        }
    }
}

impl fmt::Display for CounterexampleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for CounterexampleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CounterexampleKind::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown construction '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CounterexampleSpec {
    pub kind: CounterexampleKind,
    pub k: usize,
    /// `β`, `γ` or `δ` depending on `kind`; unused for strong-JR.
    pub param: f64,
    pub epsilon: f64,
}

impl CounterexampleSpec {
    pub fn beta_ejr(k: usize, beta: f64, epsilon: f64) -> Self {
        CounterexampleSpec { kind: CounterexampleKind::BetaEjr, k, param: beta, epsilon }
    }

    pub fn ejr_gamma(k: usize, gamma: usize, epsilon: f64) -> Self {
        CounterexampleSpec { kind: CounterexampleKind::EjrGamma, k, param: gamma as f64, epsilon }
    }

    pub fn delta_ejr(k: usize, delta: f64, epsilon: f64) -> Self {
        CounterexampleSpec { kind: CounterexampleKind::DeltaEjr, k, param: delta, epsilon }
    }

    pub fn strong_jr() -> Self {
        CounterexampleSpec { kind: CounterexampleKind::StrongJr, k: 2, param: 0.0, epsilon: 0.0 }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.kind == CounterexampleKind::StrongJr {
            return if self.k == 2 { Ok(()) } else { bad("strong-jr is defined for k = 2".into()) };
        }
        if self.k < 2 {
            return bad(format!("k must be at least 2, got {}", self.k));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return bad(format!("epsilon must lie in (0, 1), got {}", self.epsilon));
        }
        let p = self.param;
        match self.kind {
            CounterexampleKind::BetaEjr if !(p.is_finite() && p >= 1.0) => {
                bad(format!("beta must be finite and >= 1, got {p}"))
            }
            CounterexampleKind::EjrGamma
                if !(p.fract() == 0.0 && p >= 0.0 && p <= (self.k - 1) as f64) =>
            {
                bad(format!("gamma must be an integer in 0..={}, got {p}", self.k - 1))
            }
            CounterexampleKind::DeltaEjr if !(p > 0.0 && p <= self.k as f64) => {
                bad(format!("delta must lie in (0, {}], got {p}", self.k))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Counterexample {
    pub spec: CounterexampleSpec,
    pub election: Election,
    pub order: ArrivalOrder,
    /// Display name of each candidate, e.g. `a1`, `a2^3`, `b1`.
    pub labels: Vec<String>,
}

impl Counterexample {
    /// Runs the checker that the construction is built to defeat.
    pub fn check(&self, w: &Committee) -> Result<AxiomReport> {
        let e = &self.election;
        match self.spec.kind {
            CounterexampleKind::BetaEjr => check_ejr_bruteforce(e, w, EjrVariant::Beta(self.spec.param)),
            CounterexampleKind::EjrGamma => {
                check_ejr_bruteforce(e, w, EjrVariant::Gamma(self.spec.param as usize))
            }
            CounterexampleKind::DeltaEjr => {
                check_ejr_bruteforce(e, w, EjrVariant::Delta(self.spec.param))
            }
            CounterexampleKind::StrongJr => check_strong_jr(e, w),
        }
    }

    /// The candidates of the `a`-block (for strong-JR, `{a, b}`).
    pub fn a_block(&self) -> Vec<usize> {
        let k = self.spec.k;
        match self.spec.kind {
            CounterexampleKind::EjrGamma => (0..k * k).collect(),
            CounterexampleKind::StrongJr => vec![0, 1],
            _ => (0..k).collect(),
        }
    }
}

pub fn make_counterexample(spec: CounterexampleSpec) -> Result<Counterexample> {
    spec.validate()?;
    let (k, eps, p) = (spec.k, spec.epsilon, spec.param);
    let (rows, cap, labels): (Vec<Vec<f64>>, f64, Vec<String>) = match spec.kind {
        CounterexampleKind::BetaEjr => {
            let rows = (0..k)
                .map(|i| {
                    let mut r = vec![0.0; 2 * k];
                    r[i] = 1.0 - eps;
                    r[k..].fill(p / k as f64);
                    r
                })
                .collect();
            (rows, p, block_labels(k))
        }
        CounterexampleKind::EjrGamma => {
            let b = 2f64.powi(k as i32 + 1) * eps;
            let rows = (0..k)
                .map(|i| {
                    let mut r = vec![0.0; k * k + k];
                    for s in 0..k {
                        r[i * k + s] = 2f64.powi(s as i32) * eps;
                    }
                    r[k * k..].fill(b);
                    r
                })
                .collect();
            let mut labels: Vec<String> = (1..=k)
                .flat_map(|i| (1..=k).map(move |s| format!("a{i}^{s}")))
                .collect();
            labels.extend((1..=k).map(|j| format!("b{j}")));
            (rows, b, labels)
        }
        CounterexampleKind::DeltaEjr => {
            let kf = k as f64;
            let mut r: Vec<f64> = (1..=k).map(|s| 1.0 + s as f64 * eps).collect();
            r.extend(std::iter::repeat_n(1.0 + eps * ((kf + 1.0) / 2.0 + 1.0 / kf), k));
            (vec![r], 1.0 + kf * eps, block_labels(k))
        }
        CounterexampleKind::StrongJr => (
            vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 2.0]],
            2.0,
            vec!["a".into(), "b".into(), "c".into()],
        ),
    };
    let m = labels.len();
    // At k = 2 the delta b-value equals 1+kε up to rounding, so the cap is
    // widened to the largest entry actually produced.
    let max = rows.iter().flatten().copied().fold(0.0, f64::max);
    let election = Election::new(&rows, k, Some(cap.max(max)))?;
    Ok(Counterexample {
        spec,
        election,
        order: ArrivalOrder::identity(m),
        labels,
    })
}

fn block_labels(k: usize) -> Vec<String> {
    (1..=k)
        .map(|i| format!("a{i}"))
        .chain((1..=k).map(|j| format!("b{j}")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_table() {
        let c = make_counterexample(CounterexampleSpec::beta_ejr(2, 3.0, 0.1)).unwrap();
        let e = &c.election;
        assert_eq!(e.row(0), vec![0.9, 0.0, 1.5, 1.5]);
        assert_eq!(e.row(1), vec![0.0, 0.9, 1.5, 1.5]);
        assert_eq!(e.score_cap(), Some(3.0));
        assert_eq!(c.labels, vec!["a1", "a2", "b1", "b2"]);
    }

    #[test]
    fn beta_a_block_violates() {
        let c = make_counterexample(CounterexampleSpec::beta_ejr(3, 2.0, 0.1)).unwrap();
        let w = Committee::from_members([0, 1, 2]).unwrap();
        let r = c.check(&w).unwrap();
        assert!(!r.satisfied);
        let full = r.witnesses.iter().find(|w| w.group == vec![0, 1, 2]).unwrap();
        assert_eq!(full.candidates, vec![3, 4, 5]);
        assert!((full.required - 1.0).abs() < 1e-12);
        assert!(full.achieved <= 0.9 + 1e-12);
    }

    #[test]
    fn gamma_a_block_violates() {
        let c = make_counterexample(CounterexampleSpec::ejr_gamma(3, 2, 0.01)).unwrap();
        assert_eq!(c.election.num_candidates(), 12);
        assert_eq!(c.labels[2], "a1^3");
        assert_eq!(c.election.utility(1, 5), 0.04);
        let w = Committee::from_members([2, 5, 8]).unwrap();
        let r = c.check(&w).unwrap();
        assert!(!r.satisfied);
        let full = r.witnesses.iter().find(|w| w.group.len() == 3).unwrap();
        assert!((full.required - 0.48).abs() < 1e-12);
        assert!((full.achieved - 0.36).abs() < 1e-12);
    }

    #[test]
    fn delta_table() {
        let c = make_counterexample(CounterexampleSpec::delta_ejr(2, 1.0, 0.1)).unwrap();
        let row = c.election.row(0);
        let expect = [1.1, 1.2, 1.2, 1.2];
        for (a, b) in row.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
        let r = c.check(&Committee::from_members([0, 1]).unwrap()).unwrap();
        assert!(!r.satisfied);
    }

    #[test]
    fn strong_jr_ballots() {
        let c = make_counterexample(CounterexampleSpec::strong_jr()).unwrap();
        assert_eq!(c.election.rows(), vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 2.0]]);
        assert!(!c.check(&Committee::from_members([0, 1]).unwrap()).unwrap().satisfied);
    }

    #[test]
    fn invalid_parameters() {
        assert!(make_counterexample(CounterexampleSpec::beta_ejr(3, 0.5, 0.1)).is_err());
        assert!(make_counterexample(CounterexampleSpec::ejr_gamma(3, 3, 0.1)).is_err());
        assert!(make_counterexample(CounterexampleSpec::delta_ejr(2, 3.0, 0.1)).is_err());
        assert!(make_counterexample(CounterexampleSpec::beta_ejr(3, 2.0, 0.0)).is_err());
    }
}
