use crate::election::{satisfaction, Committee, Election, EPS};
use crate::error::Result;

use super::{AxiomId, AxiomReport, Witness};

/// Justified Representation: no candidate may be valued positively by at
/// least `n/k` voters who all get zero satisfaction from `w`.
///
/// Groups with `α(c) = 0` are not considered; read literally they would make
/// the axiom unsatisfiable on all-zero profiles.
pub fn check_jr(e: &Election, w: &Committee) -> Result<AxiomReport> {
    let s = satisfaction(e, w)?;
    let (n, k) = (e.num_voters(), e.committee_size());
    let mut witnesses = Vec::new();
    for c in 0..e.num_candidates() {
        let col = e.column(c);
        let group: Vec<usize> = (0..n).filter(|&i| col[i] > 0.0 && s.0[i] == 0.0).collect();
        if !group.is_empty() && group.len() * k >= n {
            let alpha = group.iter().map(|&i| col[i]).fold(f64::INFINITY, f64::min);
            witnesses.push(Witness {
                group,
                candidates: vec![c],
                thresholds: vec![alpha],
                required: alpha,
                achieved: 0.0,
            });
        }
    }
    Ok(AxiomReport::from_witnesses(AxiomId::Jr, n, witnesses))
}

/// Strong Justified Representation: for every candidate `c` and level `α`,
/// if at least `n/k` voters value `c` at `α` or more, one of them must get
/// satisfaction at least `α`. Only the distinct positive values of each
/// column need to be tried.
pub fn check_strong_jr(e: &Election, w: &Committee) -> Result<AxiomReport> {
    let s = satisfaction(e, w)?;
    let (n, k) = (e.num_voters(), e.committee_size());
    let mut witnesses = Vec::new();
    for c in 0..e.num_candidates() {
        let col = e.column(c);
        // Voters by decreasing utility for c; S_α is a prefix.
        let mut by_value: Vec<usize> = (0..n).filter(|&i| col[i] > 0.0).collect();
        by_value.sort_by(|&a, &b| col[b].total_cmp(&col[a]).then(a.cmp(&b)));
        let mut best = f64::NEG_INFINITY;
        let mut p = 0;
        while p < by_value.len() {
            let alpha = col[by_value[p]];
            while p < by_value.len() && col[by_value[p]] == alpha {
                best = best.max(s.0[by_value[p]]);
                p += 1;
            }
            if p * k >= n && best < alpha - EPS {
                let mut group = by_value[..p].to_vec();
                group.sort_unstable();
                witnesses.push(Witness {
                    group,
                    candidates: vec![c],
                    thresholds: vec![alpha],
                    required: alpha,
                    achieved: best,
                });
            }
        }
    }
    Ok(AxiomReport::from_witnesses(AxiomId::StrongJr, n, witnesses))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn committee(ms: &[usize]) -> Committee {
        Committee::from_members(ms.iter().copied()).unwrap()
    }

    #[test]
    fn jr_on_example() {
        let e = Election::example_hiring_board();
        let r = check_jr(&e, &committee(&[3, 5])).unwrap();
        assert!(!r.satisfied);
        assert_eq!(r.witnesses[0].group, vec![0]);
        assert_eq!(r.witnesses.iter().map(|w| w.candidates[0]).collect::<Vec<_>>(), vec![1, 2]);
        assert!((r.violating_voter_share - 0.5).abs() < 1e-12);
        assert!(check_jr(&e, &committee(&[0, 1])).unwrap().satisfied);
    }

    #[test]
    fn jr_all_zero_is_satisfied() {
        let e = Election::new(&[vec![0.0; 4], vec![0.0; 4]], 2, None).unwrap();
        assert!(check_jr(&e, &committee(&[0, 1])).unwrap().satisfied);
    }

    #[test]
    fn strong_jr_instance() {
        let e = Election::new(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 2.0]], 2, None).unwrap();
        let r = check_strong_jr(&e, &committee(&[0, 1])).unwrap();
        assert!(!r.satisfied);
        assert_eq!(r.witnesses.len(), 1);
        assert_eq!(r.witnesses[0].candidates, vec![2]);
        assert_eq!(r.witnesses[0].required, 2.0);
        assert_eq!(r.witnesses[0].group, vec![1]);
        assert!(check_strong_jr(&e, &committee(&[0, 2])).unwrap().satisfied);
        // JR is weaker: {a, b} gives both voters something.
        assert!(check_jr(&e, &committee(&[0, 1])).unwrap().satisfied);
    }

    #[test]
    fn strong_jr_with_everyones_favourite() {
        let e = Election::new(
            &[vec![3.0, 1.0, 0.0, 2.0], vec![0.0, 2.0, 4.0, 1.0]],
            2,
            None,
        )
        .unwrap();
        assert!(check_strong_jr(&e, &committee(&[0, 2])).unwrap().satisfied);
    }
}
