use crate::election::{
    stream, ArrivalOrder, ArrivalRecord, Audit, Committee, Election, Payment, Reason, EPS,
};
use crate::error::Result;

/// Splits one unit among `budgets` so that each pays the same amount or all
/// of their budget: returns λ with `Σ min(b_i, λ) = 1`.
pub(crate) fn equal_split_level(budgets: &[f64]) -> f64 {
    let mut sorted = budgets.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut paid = 0.0;
    for (j, &b) in sorted.iter().enumerate() {
        let level = (1.0 - paid) / (sorted.len() - j) as f64;
        if level <= b {
            return level;
        }
        paid += b;
    }
    sorted.last().copied().unwrap_or(0.0)
}

/// Online Greedy Budgeting.
///
/// Every voter starts with `k/n`. An arriving candidate is hired when the
/// voters who value it positively hold at least one unit in total; they then
/// pay one unit, each the same amount or everything they have left. When the
/// remaining arrivals exactly fill the open seats, all of them are hired.
pub fn greedy_budgeting(e: &Election, o: &ArrivalOrder) -> Result<Committee> {
    let (n, m, k) = (e.num_voters(), e.num_candidates(), e.committee_size());
    let mut budgets = vec![k as f64 / n as f64; n];
    let mut hired = Vec::with_capacity(k);
    let mut audit = Audit::default();
    let mut safeguard = false;

    for a in stream(e, o)? {
        let (hire, reason) = if safeguard || k - hired.len() >= m - a.position + 1 {
            safeguard = true;
            (true, Reason::Safeguard)
        } else if hired.len() == k {
            (false, Reason::CommitteeFull)
        } else {
            let supporters: Vec<usize> = (0..n).filter(|&i| a.utilities[i] > 0.0).collect();
            let collected: f64 = supporters.iter().map(|&i| budgets[i]).sum();
            if collected >= 1.0 - EPS {
                let held: Vec<f64> = supporters.iter().map(|&i| budgets[i]).collect();
                let level = equal_split_level(&held);
                for &i in &supporters {
                    let amount = budgets[i].min(level);
                    budgets[i] = (budgets[i] - amount).max(0.0);
                    if amount > 0.0 {
                        audit.payments.push(Payment {
                            candidate: a.candidate,
                            voter: i,
                            amount,
                        });
                    }
                }
                (true, Reason::Affordable { collected })
            } else {
                (false, Reason::Unaffordable { collected })
            }
        };
        if hire {
            hired.push(a.candidate);
        }
        audit.arrivals.push(ArrivalRecord {
            position: a.position,
            candidate: a.candidate,
            hired: hire,
            reason,
        });
    }
    Ok(Committee::with_audit(hired, audit))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_split() {
        assert!((equal_split_level(&[1.0, 1.0]) - 0.5).abs() < 1e-15);
        assert!((equal_split_level(&[0.1, 1.0, 1.0]) - 0.45).abs() < 1e-15);
        assert!((equal_split_level(&[0.5, 0.5]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn example_picks_first_two() {
        let e = Election::example_hiring_board();
        let w = greedy_budgeting(&e, &ArrivalOrder::identity(6)).unwrap();
        assert_eq!(w.members(), &[0, 1]);
        assert_eq!(w.audit.arrivals.len(), 6);
        assert!((w.audit.total_paid() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn single_voter_buys_first_arrivals() {
        let e = Election::new(&[vec![0.5, 2.0, 1.0, 3.0]], 2, None).unwrap();
        let o = ArrivalOrder::new(vec![2, 0, 3, 1]).unwrap();
        assert_eq!(greedy_budgeting(&e, &o).unwrap().members(), &[0, 2]);
    }

    #[test]
    fn safeguard_hires_the_tail() {
        let e = Election::new(&[vec![0.0; 5], vec![0.0; 5]], 2, None).unwrap();
        let w = greedy_budgeting(&e, &ArrivalOrder::identity(5)).unwrap();
        assert_eq!(w.members(), &[3, 4]);
        assert_eq!(w.audit.arrivals[3].reason, Reason::Safeguard);
    }
}
