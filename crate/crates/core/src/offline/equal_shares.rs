//! Method of Equal Shares for cardinal ballots, its bounded-overspending
//! variant, and utilitarian completion.
//!
//! Every voter starts with `k/n` units of budget and every candidate costs 1.
//! A candidate is ρ-affordable when `Σ_i min(b_i, ρ·u_i(c)) ≥ 1`; each MES
//! round elects the candidate with the smallest such ρ and charges every
//! voter `min(b_i, ρ·u_i(c))`. The minimal ρ is found in closed form by
//! walking supporters in increasing `b_i / u_i` order.
//!
//! The engine runs on an arbitrary candidate subset. Indices `>= m` stand for
//! dummy candidates nobody supports; they carry the largest indices, so the
//! utilitarian completion adds them last.

use std::cmp::Ordering;

use crate::election::{Committee, Election, EPS};

/// Relative tolerance under which two payment rates count as tied; ties go
/// to the smaller candidate index.
const RHO_TIE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqualSharesVariant {
    Mes,
    /// Bounded overspending: once nothing is affordable, keep buying the
    /// candidate whose supporters' money buys the best price ratio.
    Bos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MesRound {
    pub candidate: usize,
    /// Payment per unit of utility charged this round.
    pub rho: f64,
    /// Fraction of the unit price collected (1 for MES rounds).
    pub collected: f64,
    pub payments: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MesTrace {
    pub rounds: Vec<MesRound>,
    pub completion_added: Vec<usize>,
}

impl MesTrace {
    /// Members elected by equal-shares rounds (before completion), in round order.
    pub fn core(&self) -> Vec<usize> {
        self.rounds.iter().map(|r| r.candidate).collect()
    }

    pub fn total_paid(&self) -> f64 {
        self.rounds
            .iter()
            .flat_map(|r| r.payments.iter().map(|p| p.1))
            .sum()
    }
}

/// Smallest ρ with `Σ min(b_i, ρ·u_i) ≥ 1` over `(budget, utility)` pairs of
/// supporters (`u_i > 0`), or `None` when their budgets total less than 1.
pub(crate) fn min_rho(mut supporters: Vec<(f64, f64)>) -> Option<f64> {
    let total: f64 = supporters.iter().map(|s| s.0).sum();
    if supporters.is_empty() || total < 1.0 - EPS {
        return None;
    }
    supporters.sort_by(|a, b| (a.0 / a.1).total_cmp(&(b.0 / b.1)));
    // suffix[j] = Σ_{l ≥ j} u_l
    let mut suffix = vec![0.0; supporters.len() + 1];
    for j in (0..supporters.len()).rev() {
        suffix[j] = suffix[j + 1] + supporters[j].1;
    }
    let mut paid = 0.0;
    for (j, &(b, u)) in supporters.iter().enumerate() {
        let rho = (1.0 - paid) / suffix[j];
        if rho <= b / u {
            return Some(rho.max(0.0));
        }
        paid += b;
    }
    // Everyone pays everything; the total is within tolerance of 1.
    supporters.last().map(|&(b, u)| b / u)
}

fn better(rho: f64, best: f64) -> bool {
    rho < best - RHO_TIE * best.abs().max(1.0)
}

/// Runs MES or BOS on the candidate subset `candidates` with committee bound
/// `k`, followed by utilitarian completion. Returns members in election order
/// (rounds first, then completion) together with the trace. The output has
/// exactly `min(k, candidates.len())` members.
pub fn equal_shares_on(
    e: &Election,
    candidates: &[usize],
    k: usize,
    variant: EqualSharesVariant,
) -> (Vec<usize>, MesTrace) {
    let n = e.num_voters();
    let mut budgets = vec![k as f64 / n as f64; n];
    let mut pool: Vec<usize> = candidates.to_vec();
    pool.sort_unstable();
    pool.dedup();
    let mut elected: Vec<usize> = Vec::with_capacity(k);
    let mut trace = MesTrace::default();

    while elected.len() < k {
        let mut best: Option<(usize, f64)> = None;
        for (pos, &c) in pool.iter().enumerate() {
            if c >= e.num_candidates() {
                continue;
            }
            let supporters: Vec<(f64, f64)> = (0..n)
                .filter_map(|i| {
                    let u = e.utility(i, c);
                    (u > 0.0).then_some((budgets[i], u))
                })
                .collect();
            if let Some(rho) = min_rho(supporters) {
                if best.is_none_or(|(_, b)| better(rho, b)) {
                    best = Some((pos, rho));
                }
            }
        }
        let round = match (best, variant) {
            (Some((pos, rho)), _) => {
                let c = pool.remove(pos);
                charge(e, &mut budgets, c, rho, 1.0)
            }
            (None, EqualSharesVariant::Bos) => match overspending_choice(e, &budgets, &pool) {
                Some((pos, rho, collected)) => {
                    let c = pool.remove(pos);
                    charge(e, &mut budgets, c, rho, collected)
                }
                None => break,
            },
            (None, EqualSharesVariant::Mes) => break,
        };
        elected.push(round.candidate);
        trace.rounds.push(round);
    }

    let added = utilitarian_completion(e, &pool, k - elected.len());
    elected.extend_from_slice(&added);
    trace.completion_added = added;
    (elected, trace)
}

fn charge(e: &Election, budgets: &mut [f64], c: usize, rho: f64, collected: f64) -> MesRound {
    let mut payments = Vec::new();
    for (i, b) in budgets.iter_mut().enumerate() {
        let u = e.utility(i, c);
        if u > 0.0 {
            let pay = b.min(rho * u);
            if pay > 0.0 {
                *b = (*b - pay).max(0.0);
                payments.push((i, pay));
            }
        }
    }
    MesRound {
        candidate: c,
        rho,
        collected,
        payments,
    }
}

/// Among unaffordable candidates whose supporters still hold money, the one
/// minimizing `ρ/θ`, where `θ` is the fraction of the price the supporters can
/// cover and `ρ` the smallest rate at which they pay all of it.
fn overspending_choice(e: &Election, budgets: &[f64], pool: &[usize]) -> Option<(usize, f64, f64)> {
    let mut best: Option<(usize, f64, f64, f64)> = None;
    for (pos, &c) in pool.iter().enumerate() {
        if c >= e.num_candidates() {
            continue;
        }
        let mut theta = 0.0;
        let mut rho: f64 = 0.0;
        for (i, &b) in budgets.iter().enumerate() {
            let u = e.utility(i, c);
            if u > 0.0 && b > 0.0 {
                theta += b;
                rho = rho.max(b / u);
            }
        }
        if theta <= EPS {
            continue;
        }
        let score = rho / theta;
        if best.is_none_or(|(_, _, _, s)| better(score, s)) {
            best = Some((pos, rho, theta.min(1.0), score));
        }
    }
    best.map(|(pos, rho, theta, _)| (pos, rho, theta))
}

/// The `count` candidates of `pool` with the largest total utility, ties by
/// smaller index. Dummies (index `>= m`) have total 0.
pub(crate) fn utilitarian_completion(e: &Election, pool: &[usize], count: usize) -> Vec<usize> {
    let total = |c: usize| {
        if c < e.num_candidates() {
            e.column_sum(c)
        } else {
            0.0
        }
    };
    let mut ranked: Vec<(usize, f64)> = pool.iter().map(|&c| (c, total(c))).collect();
    ranked.sort_by(|a, b| match b.1.partial_cmp(&a.1) {
        Some(Ordering::Equal) | None => a.0.cmp(&b.0),
        Some(o) => o,
    });
    ranked.into_iter().take(count).map(|(c, _)| c).collect()
}

/// Method of Equal Shares with utilitarian completion on the whole election.
pub fn mes(e: &Election) -> (Committee, MesTrace) {
    offline(e, EqualSharesVariant::Mes)
}

/// Method of Equal Shares with Bounded Overspending, utilitarian completion.
pub fn bos(e: &Election) -> (Committee, MesTrace) {
    offline(e, EqualSharesVariant::Bos)
}

fn offline(e: &Election, variant: EqualSharesVariant) -> (Committee, MesTrace) {
    let all: Vec<usize> = (0..e.num_candidates()).collect();
    let (members, trace) = equal_shares_on(e, &all, e.committee_size(), variant);
    (
        Committee::from_members(members).expect("equal shares never elects twice"),
        trace,
    )
}
