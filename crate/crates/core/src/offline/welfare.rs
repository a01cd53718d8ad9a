//! Welfare objectives: utilitarian top-k and the Nash welfare
//! `Π(W) = Σ_i ln(1 + u_i(W))` with an exact brute-force maximizer.

use crate::election::{satisfaction_of, Committee, Election};
use crate::error::{Error, Result};

use super::equal_shares::utilitarian_completion;

/// Default bound on the number of k-subsets the brute force will enumerate.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// The `k` candidates with the largest column sums, ties by smaller index.
pub fn utilitarian_topk(e: &Election) -> Committee {
    let all: Vec<usize> = (0..e.num_candidates()).collect();
    Committee::from_members(utilitarian_completion(e, &all, e.committee_size()))
        .expect("distinct candidates")
}

/// Nash welfare of a committee (natural log).
pub fn nash_welfare(e: &Election, w: &Committee) -> f64 {
    nash_welfare_of(e, w.members())
}

pub(crate) fn nash_welfare_of(e: &Election, members: &[usize]) -> f64 {
    welfare_from_satisfaction(&satisfaction_of(e, members))
}

pub(crate) fn welfare_from_satisfaction(s: &[f64]) -> f64 {
    s.iter().map(|&x| x.ln_1p()).sum()
}

/// `C(m, k)`, saturating at `u64::MAX`.
pub fn binomial(m: usize, k: usize) -> u64 {
    if k > m {
        return 0;
    }
    let k = k.min(m - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (m - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Exhaustive Nash-welfare maximizer over all size-k subsets in lexicographic
/// order; the first maximizer wins ties.
pub fn nash_optimum_bruteforce(e: &Election) -> Result<(Committee, f64)> {
    nash_optimum_bruteforce_capped(e, DEFAULT_ENUMERATION_CAP)
}

pub fn nash_optimum_bruteforce_capped(e: &Election, cap: u64) -> Result<(Committee, f64)> {
    let (m, k, n) = (e.num_candidates(), e.committee_size(), e.num_voters());
    let count = binomial(m, k);
    if count > cap {
        return Err(Error::TooLarge {
            what: format!("C({m}, {k}) = {count} committees"),
            cap,
        });
    }
    let mut combo: Vec<usize> = (0..k).collect();
    let mut best = (combo.clone(), f64::NEG_INFINITY);
    // sat[d] holds satisfactions of the first d members of `combo`.
    let mut sat = vec![vec![0.0; n]; k + 1];
    let mut valid_depth = 0;
    loop {
        for d in valid_depth..k {
            let (lo, hi) = sat.split_at_mut(d + 1);
            let col = e.column(combo[d]);
            for i in 0..n {
                hi[0][i] = lo[d][i] + col[i];
            }
        }
        let value = welfare_from_satisfaction(&sat[k]);
        if value > best.1 {
            best = (combo.clone(), value);
        }
        // Advance to the next combination.
        let Some(d) = (0..k).rev().find(|&d| combo[d] < m - k + d) else {
            break;
        };
        combo[d] += 1;
        for j in d + 1..k {
            combo[j] = combo[j - 1] + 1;
        }
        valid_depth = d;
    }
    Ok((Committee::from_members(best.0)?, best.1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn topk_examples() {
        let e = Election::example_hiring_board();
        assert_eq!(utilitarian_topk(&e).members(), &[3, 5]);
        let z = Election::new(&[vec![0.0; 5]], 3, None).unwrap();
        assert_eq!(utilitarian_topk(&z).members(), &[0, 1, 2]);
        let s = Election::new(&[vec![5.0, 1.0, 9.0]], 2, None).unwrap();
        assert_eq!(utilitarian_topk(&s).members(), &[0, 2]);
    }

    #[test]
    fn nash_welfare_examples() {
        let e = Election::example_hiring_board();
        assert_eq!(nash_welfare(&e, &Committee::from_members([]).unwrap()), 0.0);
        let w = Committee::from_members([2, 5]).unwrap();
        assert!((nash_welfare(&e, &w) - (3f64.ln() + 4f64.ln())).abs() < 1e-12);
        let w = Committee::from_members([3, 5]).unwrap();
        assert!((nash_welfare(&e, &w) - 7f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(6, 2), 15);
        assert_eq!(binomial(12, 3), 220);
        assert_eq!(binomial(5, 5), 1);
        assert_eq!(binomial(200, 100), u64::MAX);
    }

    #[test]
    fn brute_force_matches_naive_enumeration() {
        // Independent check against a bitmask enumeration of all subsets.
        let rows = vec![
            vec![0.0, 3.0, 1.0, 0.0, 2.0, 0.5],
            vec![1.0, 0.0, 0.0, 4.0, 1.0, 0.0],
            vec![2.0, 2.0, 0.0, 0.0, 0.0, 1.5],
        ];
        let e = Election::new(&rows, 3, None).unwrap();
        let (w, v) = nash_optimum_bruteforce(&e).unwrap();
        let mut best = (u32::MAX, f64::NEG_INFINITY);
        for mask in 0u32..64 {
            if mask.count_ones() != 3 {
                continue;
            }
            let members: Vec<usize> = (0..6).filter(|j| mask >> j & 1 == 1).collect();
            let val: f64 = rows
                .iter()
                .map(|r| members.iter().map(|&j| r[j]).sum::<f64>().ln_1p())
                .sum();
            if val > best.1 + 1e-12 {
                best = (mask, val);
            }
        }
        assert!((v - best.1).abs() < 1e-12);
        assert!((nash_welfare(&e, &w) - v).abs() < 1e-12);
    }

    #[test]
    fn cap_is_enforced() {
        let e = Election::new(&[vec![1.0; 30]], 10, None).unwrap();
        assert!(matches!(
            nash_optimum_bruteforce_capped(&e, 1000),
            Err(Error::TooLarge { cap: 1000, .. })
        ));
    }
}
