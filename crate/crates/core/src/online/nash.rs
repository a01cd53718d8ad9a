use crate::election::{stream, ArrivalOrder, ArrivalRecord, Audit, Committee, Election, Reason};
use crate::error::{Error, Result};

/// Absolute slack when comparing a candidate's gain against the threshold.
const GAIN_TIE: f64 = 1e-12;

/// Sizes of `k` contiguous segments covering `m` arrivals, as equal as
/// possible; the first `m mod k` segments are one longer.
pub fn segment_sizes(m: usize, k: usize) -> Vec<usize> {
    let (base, extra) = (m / k, m % k);
    (0..k).map(|s| base + usize::from(s < extra)).collect()
}

/// Online Nash Rule.
///
/// The arrival sequence is cut into `k` segments and one candidate is hired
/// per segment with the classical secretary rule applied to
/// `g(c) = Π(T ∪ {c})`, where `T` holds earlier hires: the first `⌊|S|/e⌋`
/// arrivals of a segment are observed, then the first arrival reaching the
/// best observed gain is hired, or the last arrival of the segment.
pub fn online_nash(e: &Election, o: &ArrivalOrder) -> Result<Committee> {
    let (n, m, k) = (e.num_voters(), e.num_candidates(), e.committee_size());
    if m < k {
        return Err(Error::Infeasible(format!("m = {m} < k = {k}")));
    }
    let sizes = segment_sizes(m, k);
    let mut satisfaction = vec![0.0; n];
    let mut hired = Vec::with_capacity(k);
    let mut audit = Audit::default();
    let mut arrivals = stream(e, o)?;

    for size in sizes {
        let observe = (size as f64 / std::f64::consts::E).floor() as usize;
        let mut threshold = f64::NEG_INFINITY;
        let mut decided = false;
        for idx in 0..size {
            let a = arrivals.next().expect("segments cover the stream");
            let gain: f64 = satisfaction
                .iter()
                .zip(a.utilities)
                .map(|(s, u)| (s + u).ln_1p())
                .sum();
            let (hire, reason) = if decided {
                (false, Reason::CommitteeFull)
            } else if idx < observe {
                threshold = threshold.max(gain);
                (false, Reason::Exploration)
            } else if gain >= threshold - GAIN_TIE {
                (true, Reason::AboveThreshold { gain, threshold })
            } else if idx + 1 == size {
                (true, Reason::SegmentFallback { gain, threshold })
            } else {
                (false, Reason::BelowThreshold { gain, threshold })
            };
            if hire {
                decided = true;
                hired.push(a.candidate);
                for (s, u) in satisfaction.iter_mut().zip(a.utilities) {
                    *s += u;
                }
            }
            audit.arrivals.push(ArrivalRecord {
                position: a.position,
                candidate: a.candidate,
                hired: hire,
                reason,
            });
        }
    }
    Ok(Committee::with_audit(hired, audit))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segments() {
        assert_eq!(segment_sizes(6, 2), vec![3, 3]);
        assert_eq!(segment_sizes(7, 3), vec![3, 2, 2]);
        assert_eq!(segment_sizes(3, 3), vec![1, 1, 1]);
    }

    #[test]
    fn example_hires_c3_and_c6() {
        let e = Election::example_hiring_board();
        let w = online_nash(&e, &ArrivalOrder::identity(6)).unwrap();
        assert_eq!(w.members(), &[2, 5]);
    }

    #[test]
    fn increasing_single_voter() {
        // Segments {1,2,3} and {4,5,6}; one observed per segment; the second
        // arrival of each segment already beats the observed one.
        let e = Election::new(&[vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]], 2, None).unwrap();
        let w = online_nash(&e, &ArrivalOrder::identity(6)).unwrap();
        assert_eq!(w.members(), &[1, 4]);
    }

    #[test]
    fn fallback_hires_segment_tail() {
        let e = Election::new(&[vec![5.0, 1.0, 1.0, 5.0, 1.0, 1.0]], 2, None).unwrap();
        let w = online_nash(&e, &ArrivalOrder::identity(6)).unwrap();
        assert_eq!(w.members(), &[2, 5]);
        assert!(matches!(
            w.audit.arrivals[2].reason,
            Reason::SegmentFallback { .. }
        ));
    }
}
