//! Exhaustive EJR check and its three relaxations.
//!
//! For a group `S`, taking `α(c) = min_{i∈S} u_i(c)` makes `S` cohesive for
//! every `T` of size at most `⌊|S|·k/n⌋` and dominates every other admissible
//! `α`; the most demanding `T` is then the `ℓ` candidates with the largest
//! positive `α`. Enumerating all non-empty groups therefore decides the axiom
//! exactly.

use std::fmt;

use crate::election::{satisfaction, Committee, Election, EPS};
use crate::error::{Error, Result};

use super::{AxiomId, AxiomReport, Witness};

/// Largest electorate the exhaustive check accepts unless raised explicitly.
pub const DEFAULT_GROUP_CAP: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EjrVariant {
    /// Some member must reach `1/β` of the owed utility.
    Beta(f64),
    /// Some member must reach the owed utility after adding their `γ` best
    /// non-elected candidates.
    Gamma(usize),
    /// Only groups `δ` times larger than EJR requires are protected.
    Delta(f64),
}

impl EjrVariant {
    pub const EXACT: EjrVariant = EjrVariant::Beta(1.0);
}

impl fmt::Display for EjrVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EjrVariant::Beta(b) => write!(f, "beta={b}"),
            EjrVariant::Gamma(g) => write!(f, "gamma={g}"),
            EjrVariant::Delta(d) => write!(f, "delta={d}"),
        }
    }
}

pub fn check_ejr_bruteforce(e: &Election, w: &Committee, variant: EjrVariant) -> Result<AxiomReport> {
    check_ejr_bruteforce_capped(e, w, variant, DEFAULT_GROUP_CAP)
}

pub fn check_ejr_bruteforce_capped(
    e: &Election,
    w: &Committee,
    variant: EjrVariant,
    cap: usize,
) -> Result<AxiomReport> {
    let (n, m, k) = (e.num_voters(), e.num_candidates(), e.committee_size());
    match variant {
        EjrVariant::Beta(b) if !(b.is_finite() && b >= 1.0) => {
            return Err(Error::InvalidParameter(format!("beta must be >= 1, got {b}")))
        }
        EjrVariant::Delta(d) if !(d.is_finite() && d > 0.0) => {
            return Err(Error::InvalidParameter(format!("delta must be positive, got {d}")))
        }
        _ => {}
    }
    if n > cap {
        return Err(Error::TooLarge {
            what: format!("{n} voters (2^n groups)"),
            cap: cap as u64,
        });
    }
    let s = satisfaction(e, w)?;
    let axiom = AxiomId::Ejr(variant);
    if let EjrVariant::Gamma(g) = variant {
        if g >= k {
            let mut r = AxiomReport::from_witnesses(axiom, n, Vec::new());
            r.vacuous = true;
            return Ok(r);
        }
    }

    // Value each voter can add with their γ best non-elected candidates.
    let bonus: Vec<f64> = match variant {
        EjrVariant::Gamma(g) => (0..n)
            .map(|i| {
                let mut outside: Vec<f64> = (0..m)
                    .filter(|&c| !w.contains(c))
                    .map(|c| e.utility(i, c))
                    .collect();
                outside.sort_by(|a, b| b.total_cmp(a));
                outside.iter().take(g).sum()
            })
            .collect(),
        _ => vec![0.0; n],
    };

    let mut witnesses = Vec::new();
    let mut alpha = vec![0.0; m];
    for mask in 1u64..(1u64 << n) {
        let size = mask.count_ones() as usize;
        let ell = match variant {
            EjrVariant::Delta(d) => ((size * k) as f64 / (d * n as f64) + EPS).floor() as usize,
            _ => size * k / n,
        };
        if ell == 0 {
            continue;
        }
        let group: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        for (c, a) in alpha.iter_mut().enumerate() {
            *a = group.iter().map(|&i| e.utility(i, c)).fold(f64::INFINITY, f64::min);
        }
        let mut ranked: Vec<usize> = (0..m).filter(|&c| alpha[c] > 0.0).collect();
        if ranked.is_empty() {
            continue;
        }
        ranked.sort_by(|&a, &b| alpha[b].total_cmp(&alpha[a]).then(a.cmp(&b)));
        ranked.truncate(ell);
        let owed: f64 = ranked.iter().map(|&c| alpha[c]).sum();
        let required = match variant {
            EjrVariant::Beta(b) => owed / b,
            _ => owed,
        };
        let achieved = group
            .iter()
            .map(|&i| s.0[i] + bonus[i])
            .fold(f64::NEG_INFINITY, f64::max);
        if achieved < required - EPS {
            let thresholds = ranked.iter().map(|&c| alpha[c]).collect();
            witnesses.push(Witness {
                group,
                candidates: ranked,
                thresholds,
                required,
                achieved,
            });
        }
    }
    Ok(AxiomReport::from_witnesses(axiom, n, witnesses))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_voter_exact_ejr() {
        let e = Election::new(&[vec![5.0, 1.0, 0.0]], 2, None).unwrap();
        let w = Committee::from_members([0, 1]).unwrap();
        assert!(check_ejr_bruteforce(&e, &w, EjrVariant::EXACT).unwrap().satisfied);
        let w = Committee::from_members([1, 2]).unwrap();
        let r = check_ejr_bruteforce(&e, &w, EjrVariant::EXACT).unwrap();
        assert!(!r.satisfied);
        assert_eq!(r.witnesses[0].candidates, vec![0, 1]);
        assert_eq!(r.witnesses[0].required, 6.0);
        assert_eq!(r.shortfall, 5.0);
    }

    #[test]
    fn parameter_validation() {
        let e = Election::example_hiring_board();
        let w = Committee::from_members([0]).unwrap();
        assert!(check_ejr_bruteforce(&e, &w, EjrVariant::Beta(0.5)).is_err());
        assert!(check_ejr_bruteforce(&e, &w, EjrVariant::Delta(0.0)).is_err());
        let r = check_ejr_bruteforce(&e, &w, EjrVariant::Gamma(2)).unwrap();
        assert!(r.satisfied && r.vacuous);
    }

    #[test]
    fn group_cap() {
        let e = Election::new(&vec![vec![1.0, 0.0, 1.0]; 16], 2, None).unwrap();
        let w = Committee::from_members([0, 1]).unwrap();
        assert!(matches!(
            check_ejr_bruteforce(&e, &w, EjrVariant::EXACT),
            Err(Error::TooLarge { cap: 15, .. })
        ));
        assert!(check_ejr_bruteforce_capped(&e, &w, EjrVariant::EXACT, 16).is_ok());
    }

    #[test]
    fn example_top_utility_violates_ejr() {
        let e = Election::example_hiring_board();
        let w = Committee::from_members([3, 5]).unwrap();
        let r = check_ejr_bruteforce(&e, &w, EjrVariant::EXACT).unwrap();
        assert!(!r.satisfied);
        assert_eq!(r.witnesses[0].group, vec![0]);
        assert_eq!(r.witnesses[0].candidates, vec![2]);
        let w = Committee::from_members([2, 3]).unwrap();
        assert!(check_ejr_bruteforce(&e, &w, EjrVariant::EXACT).unwrap().satisfied);
    }
}
