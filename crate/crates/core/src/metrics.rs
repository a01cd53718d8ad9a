//! Welfare and fairness statistics over satisfaction vectors.

use crate::election::SatisfactionVector;
use crate::offline::welfare_from_satisfaction;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricBundle {
    pub average_satisfaction: f64,
    /// Share of voters with zero satisfaction.
    pub exclusion_ratio: f64,
    /// Mean of the `⌈n/4⌉` smallest satisfactions.
    pub bottom_quartile_mean: f64,
    pub gini: f64,
    /// `Σ_i ln(1 + s_i)`.
    pub nash_welfare: f64,
}

impl MetricBundle {
    pub const FIELDS: [&'static str; 5] = [
        "average_satisfaction",
        "exclusion_ratio",
        "bottom_quartile_mean",
        "gini",
        "nash_welfare",
    ];

    pub fn values(&self) -> [f64; 5] {
        [
            self.average_satisfaction,
            self.exclusion_ratio,
            self.bottom_quartile_mean,
            self.gini,
            self.nash_welfare,
        ]
    }
}

/// # Panics
/// If `s` is empty.
pub fn compute_metrics(s: &SatisfactionVector) -> MetricBundle {
    let v = s.values();
    assert!(!v.is_empty(), "metrics need at least one voter");
    let n = v.len() as f64;
    let mut sorted = v.to_vec();
    sorted.sort_by(f64::total_cmp);
    let total: f64 = sorted.iter().sum();
    let mean = total / n;
    let q = v.len().div_ceil(4);

    // Σ_{i,j} |s_i − s_j| = 2 Σ_i (2i − n + 1) s_(i) over the ascending order.
    let gini = if mean > 0.0 {
        let weighted: f64 = sorted
            .iter()
            .enumerate()
            .map(|(i, x)| (2.0 * i as f64 - n + 1.0) * x)
            .sum();
        (2.0 * weighted / (2.0 * n * n * mean)).max(0.0)
    } else {
        0.0
    };

    MetricBundle {
        average_satisfaction: mean,
        exclusion_ratio: v.iter().filter(|&&x| x == 0.0).count() as f64 / n,
        bottom_quartile_mean: sorted[..q].iter().sum::<f64>() / q as f64,
        gini,
        nash_welfare: welfare_from_satisfaction(v),
    }
}

/// Compares a rule's metrics with a baseline's.
///
/// Average, quartile and Nash welfare become ratios `rule / base` with
/// `0/0 = 1` and `x/0 = +∞` for `x > 0`. Gini and exclusion become
/// differences `rule − base`.
pub fn relative_to_baseline(m: &MetricBundle, base: &MetricBundle) -> MetricBundle {
    MetricBundle {
        average_satisfaction: ratio(m.average_satisfaction, base.average_satisfaction),
        exclusion_ratio: m.exclusion_ratio - base.exclusion_ratio,
        bottom_quartile_mean: ratio(m.bottom_quartile_mean, base.bottom_quartile_mean),
        gini: m.gini - base.gini,
        nash_welfare: ratio(m.nash_welfare, base.nash_welfare),
    }
}

fn ratio(x: f64, base: f64) -> f64 {
    if base == 0.0 {
        if x == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        x / base
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(v: &[f64]) -> SatisfactionVector {
        SatisfactionVector(v.to_vec())
    }

    /// Direct double sum, used as an oracle for the sorted formula.
    fn gini_naive(v: &[f64]) -> f64 {
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        if mean == 0.0 {
            return 0.0;
        }
        let s: f64 = v.iter().flat_map(|a| v.iter().map(move |b| (a - b).abs())).sum();
        s / (2.0 * n * n * mean)
    }

    #[test]
    fn equal_satisfaction() {
        let b = compute_metrics(&sv(&[3.0; 4]));
        assert_eq!(b.gini, 0.0);
        assert_eq!(b.exclusion_ratio, 0.0);
        assert_eq!(b.bottom_quartile_mean, 3.0);
        assert_eq!(b.average_satisfaction, 3.0);
    }

    #[test]
    fn half_excluded() {
        let b = compute_metrics(&sv(&[0.0, 0.0, 1.0, 1.0]));
        assert!((b.gini - 0.5).abs() < 1e-12);
        assert_eq!(b.exclusion_ratio, 0.5);
        assert_eq!(b.bottom_quartile_mean, 0.0);
        assert!((b.nash_welfare - 2.0 * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn quartile_rounds_up() {
        let b = compute_metrics(&sv(&[14.0, 0.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0]));
        assert_eq!(b.bottom_quartile_mean, 1.0);
        let b = compute_metrics(&sv(&[5.0]));
        assert_eq!(b.bottom_quartile_mean, 5.0);
    }

    #[test]
    fn zero_mean_gini() {
        assert_eq!(compute_metrics(&sv(&[0.0, 0.0])).gini, 0.0);
    }

    #[test]
    fn gini_matches_double_sum() {
        let v = [0.5, 7.0, 3.0, 3.0, 0.0, 11.25, 2.0];
        assert!((compute_metrics(&sv(&v)).gini - gini_naive(&v)).abs() < 1e-12);
    }

    #[test]
    fn baseline_conventions() {
        let a = compute_metrics(&sv(&[2.0, 2.0]));
        let b = compute_metrics(&sv(&[4.0, 4.0]));
        let r = relative_to_baseline(&a, &a);
        assert_eq!(r.average_satisfaction, 1.0);
        assert_eq!(r.gini, 0.0);
        assert_eq!(r.exclusion_ratio, 0.0);
        assert_eq!(relative_to_baseline(&a, &b).average_satisfaction, 0.5);
        let z = compute_metrics(&sv(&[0.0, 0.0]));
        let r = relative_to_baseline(&z, &z);
        assert_eq!(r.average_satisfaction, 1.0);
        assert_eq!(r.nash_welfare, 1.0);
        assert_eq!(relative_to_baseline(&a, &z).average_satisfaction, f64::INFINITY);
    }
}
