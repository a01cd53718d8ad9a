//! Proportionality axioms for committees under cardinal ballots.
//!
//! A voter group `S` is `(α, T)`-cohesive when `|S|/n ≥ |T|/k` and every
//! member values every `c ∈ T` at least `α(c)`. The checkers here report,
//! for a given committee, every group that is owed more than it received.

mod counterexample;
mod ejr;
mod ejr_plus;
mod jr;

use std::fmt;

pub use counterexample::{make_counterexample, Counterexample, CounterexampleKind, CounterexampleSpec};
pub use ejr::{check_ejr_bruteforce, check_ejr_bruteforce_capped, EjrVariant, DEFAULT_GROUP_CAP};
pub use ejr_plus::check_ejr_plus_approval;
pub use jr::{check_jr, check_strong_jr};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AxiomId {
    Jr,
    StrongJr,
    EjrPlus,
    Ejr(EjrVariant),
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomId::Jr => f.write_str("jr"),
            AxiomId::StrongJr => f.write_str("strong-jr"),
            AxiomId::EjrPlus => f.write_str("ejr-plus"),
            AxiomId::Ejr(v) => write!(f, "ejr[{v}]"),
        }
    }
}

/// One under-represented group.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub group: Vec<usize>,
    pub candidates: Vec<usize>,
    /// `α(c)` for each entry of `candidates`.
    pub thresholds: Vec<f64>,
    pub required: f64,
    /// Best value any group member reaches.
    pub achieved: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub axiom: AxiomId,
    pub satisfied: bool,
    pub witnesses: Vec<Witness>,
    /// Fraction of voters belonging to at least one witness group.
    pub violating_voter_share: f64,
    pub shortfall: f64,
    /// The axiom imposes nothing for these parameters.
    pub vacuous: bool,
}

impl AxiomReport {
    /// Builds a report whose share is the union of witness groups over `n` and
    /// whose shortfall is the largest `required − achieved`.
    pub(crate) fn from_witnesses(axiom: AxiomId, n: usize, witnesses: Vec<Witness>) -> Self {
        let shortfall = witnesses
            .iter()
            .map(|w| (w.required - w.achieved).max(0.0))
            .fold(0.0, f64::max);
        let share = union_share(n, &witnesses);
        AxiomReport {
            axiom,
            satisfied: witnesses.is_empty(),
            witnesses,
            violating_voter_share: share,
            shortfall,
            vacuous: false,
        }
    }

    /// Number of distinct candidates appearing in witnesses.
    pub fn witness_candidates(&self) -> usize {
        let mut cs: Vec<usize> = self
            .witnesses
            .iter()
            .flat_map(|w| w.candidates.iter().copied())
            .collect();
        cs.sort_unstable();
        cs.dedup();
        cs.len()
    }
}

pub(crate) fn union_share(n: usize, witnesses: &[Witness]) -> f64 {
    let mut hit = vec![false; n];
    for w in witnesses {
        for &i in &w.group {
            hit[i] = true;
        }
    }
    hit.iter().filter(|&&h| h).count() as f64 / n as f64
}
