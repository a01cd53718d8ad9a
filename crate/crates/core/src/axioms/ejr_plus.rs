use crate::election::{Committee, Election};
use crate::error::{Error, Result};

use super::{union_share, AxiomId, AxiomReport, Witness};

/// EJR+ for approval ballots.
///
/// A non-winner `c` witnesses a violation at level `ℓ` when at least `ℓ·n/k`
/// of its approvers each approve fewer than `ℓ` winners. The shortfall is the
/// mean, over voters in some witness group, of the worst deficit
/// `ℓ − |A_i ∩ W|` among the witnesses containing them.
pub fn check_ejr_plus_approval(e: &Election, w: &Committee) -> Result<AxiomReport> {
    if !e.is_approval() {
        return Err(Error::WrongBallotType(
            "EJR+ is defined for approval (0/1) ballots only".into(),
        ));
    }
    w.validate(e)?;
    let (n, m, k) = (e.num_voters(), e.num_candidates(), e.committee_size());
    let approved_winners: Vec<usize> = (0..n)
        .map(|i| w.members().iter().filter(|&&c| e.utility(i, c) == 1.0).count())
        .collect();

    let mut witnesses = Vec::new();
    let mut deficit = vec![0usize; n];
    for c in (0..m).filter(|&c| !w.contains(c)) {
        let col = e.column(c);
        for ell in 1..=k {
            let group: Vec<usize> = (0..n)
                .filter(|&i| col[i] == 1.0 && approved_winners[i] < ell)
                .collect();
            if group.is_empty() || group.len() * k < ell * n {
                continue;
            }
            for &i in &group {
                deficit[i] = deficit[i].max(ell - approved_winners[i]);
            }
            let achieved = group.iter().map(|&i| approved_winners[i]).max().unwrap_or(0);
            witnesses.push(Witness {
                group,
                candidates: vec![c],
                thresholds: vec![1.0],
                required: ell as f64,
                achieved: achieved as f64,
            });
        }
    }
    let violating: Vec<usize> = deficit.iter().copied().filter(|&d| d > 0).collect();
    let shortfall = if violating.is_empty() {
        0.0
    } else {
        violating.iter().sum::<usize>() as f64 / violating.len() as f64
    };
    Ok(AxiomReport {
        axiom: AxiomId::EjrPlus,
        satisfied: witnesses.is_empty(),
        violating_voter_share: union_share(n, &witnesses),
        witnesses,
        shortfall,
        vacuous: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_voters_one_common_candidate() {
        let e = Election::new(&[vec![0.0, 0.0, 1.0], vec![0.0, 0.0, 1.0]], 2, None).unwrap();
        let r = check_ejr_plus_approval(&e, &Committee::from_members([0, 1]).unwrap()).unwrap();
        assert!(!r.satisfied);
        // Both (c3, 1) and (c3, 2) are witnessed: two voters reach 2·n/k = 2.
        assert_eq!(r.witnesses.len(), 2);
        assert_eq!(r.witnesses[0].candidates, vec![2]);
        assert_eq!(r.witnesses[0].required, 1.0);
        assert_eq!(r.witnesses[1].required, 2.0);
        assert_eq!(r.violating_voter_share, 1.0);
        assert_eq!(r.shortfall, 2.0);
        assert_eq!(r.witness_candidates(), 1);
    }

    #[test]
    fn covering_all_approved_candidates_is_enough() {
        let e = Election::new(&[vec![1.0, 0.0, 0.0, 1.0], vec![0.0, 1.0, 0.0, 0.0]], 3, None)
            .unwrap();
        let r = check_ejr_plus_approval(&e, &Committee::from_members([0, 1, 3]).unwrap()).unwrap();
        assert!(r.satisfied);
        assert_eq!(r.violating_voter_share, 0.0);
        assert_eq!(r.shortfall, 0.0);
    }

    #[test]
    fn rejects_cardinal_ballots() {
        let e = Election::example_hiring_board();
        assert!(matches!(
            check_ejr_plus_approval(&e, &Committee::from_members([0]).unwrap()),
            Err(Error::WrongBallotType(_))
        ));
    }
}
