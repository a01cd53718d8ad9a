//! Online Method of Equal Shares and its bounded-overspending twin.
//!
//! The first `t` arrivals are only observed; the offline rule run on them
//! gives the reference committee `C_R` (padded with unsupported dummies when
//! `t < k`). A running sample starts as `C_R`. Each later arrival `c` is
//! judged by running the offline rule, with utilitarian completion, on the
//! `k + 1` candidates `running ∪ {c}`: exactly one of them is left out. If it
//! is `c`, `c` is rejected. Otherwise `c` takes the place of the excluded
//! candidate in the running sample, whether or not it is hired, and it is
//! hired only when the excluded candidate belongs to `C_R`.
//!
//! The published pseudocode updates the running sample only in the hiring
//! branch; the accompanying prose updates it regardless, and that is what is
//! implemented here.

use crate::election::{stream, ArrivalOrder, ArrivalRecord, Audit, Committee, Election, Reason};
use crate::error::Result;
use crate::offline::{equal_shares_on, EqualSharesVariant};

/// Reference and running samples of Online MES/BOS.
#[derive(Debug, Clone, PartialEq)]
pub struct RunningSample {
    pub reference: Vec<usize>,
    pub running: Vec<usize>,
}

impl RunningSample {
    fn in_reference(&self, c: usize) -> bool {
        self.reference.contains(&c)
    }
}

/// `⌊m/e⌋`, the default exploration length.
pub fn default_exploration(m: usize) -> usize {
    (m as f64 / std::f64::consts::E).floor() as usize
}

pub(crate) fn online_equal_shares(
    e: &Election,
    o: &ArrivalOrder,
    exploration: usize,
    variant: EqualSharesVariant,
) -> Result<Committee> {
    let (m, k) = (e.num_candidates(), e.committee_size());
    // The safeguard can only complete the committee if k arrivals remain.
    let t = exploration.min(m - k);
    let mut audit = Audit::default();
    let mut hired: Vec<usize> = Vec::with_capacity(k);

    let mut explored: Vec<usize> = o.as_slice()[..t].to_vec();
    explored.extend((0..k.saturating_sub(t)).map(|d| m + d));
    let (reference, _) = equal_shares_on(e, &explored, k, variant);
    let mut sample = RunningSample {
        running: reference.clone(),
        reference,
    };

    let mut safeguard = false;
    for a in stream(e, o)? {
        let c = a.candidate;
        let (hire, reason) = if a.position <= t {
            (false, Reason::Exploration)
        } else if safeguard || k - hired.len() >= m - a.position + 1 {
            safeguard = true;
            (true, Reason::Safeguard)
        } else if hired.len() == k {
            (false, Reason::CommitteeFull)
        } else {
            let mut pool = sample.running.clone();
            pool.push(c);
            let (kept, _) = equal_shares_on(e, &pool, k, variant);
            let excluded = *pool
                .iter()
                .find(|x| !kept.contains(x))
                .expect("k + 1 candidates, k kept");
            let step = if excluded == c {
                (false, Reason::NotSelected)
            } else {
                let from_reference = sample.in_reference(excluded);
                let slot = sample
                    .running
                    .iter()
                    .position(|&x| x == excluded)
                    .expect("excluded candidate is in the running sample");
                sample.running[slot] = c;
                (
                    from_reference,
                    Reason::Displaced {
                        excluded,
                        from_reference,
                    },
                )
            };
            audit.running_sample.push(sample.running.clone());
            step
        };
        if hire {
            hired.push(c);
        }
        audit.arrivals.push(ArrivalRecord {
            position: a.position,
            candidate: c,
            hired: hire,
            reason,
        });
    }
    Ok(Committee::with_audit(hired, audit))
}

/// Online Method of Equal Shares with exploration length `t` (use
/// [`default_exploration`] for `⌊m/e⌋`).
pub fn online_mes(e: &Election, o: &ArrivalOrder, t: usize) -> Result<Committee> {
    online_equal_shares(e, o, t, EqualSharesVariant::Mes)
}

/// Online MES with Bounded Overspending as the subroutine.
pub fn online_bos(e: &Election, o: &ArrivalOrder, t: usize) -> Result<Committee> {
    online_equal_shares(e, o, t, EqualSharesVariant::Bos)
}
