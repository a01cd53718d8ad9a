//! The election model: voters, candidates, cardinal utilities, arrival
//! orders, committees with their audit trails, and the streaming view that
//! online rules consume.
//!
//! Candidates are 0-indexed here. File formats and the CLI use 1-indexed
//! labels (`c1`, `c2`, ...).

use std::fmt;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Absolute tolerance used when comparing accumulated budgets and welfare
/// values computed along different summation paths.
pub const EPS: f64 = 1e-9;

/// An election `(C, V, k, u)` with additive cardinal utilities.
///
/// Utilities are stored candidate-major so that a candidate's column (what an
/// online rule sees when the candidate arrives) is a contiguous slice.
#[derive(Debug, Clone, PartialEq)]
pub struct Election {
    n: usize,
    m: usize,
    k: usize,
    columns: Vec<f64>,
    score_cap: Option<f64>,
}

impl Election {
    /// Builds an election from voter rows (`rows[i][j] = u_i(j)`).
    pub fn new(rows: &[Vec<f64>], k: usize, score_cap: Option<f64>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidElection("at least one voter is required".into()));
        }
        let m = rows[0].len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != m) {
            return Err(Error::InvalidElection(format!(
                "voter {} has {} utilities, expected {m}",
                i + 1,
                r.len()
            )));
        }
        let mut columns = vec![0.0; n * m];
        for (i, row) in rows.iter().enumerate() {
            for (j, &u) in row.iter().enumerate() {
                columns[j * n + i] = u;
            }
        }
        Self::from_columns(n, m, k, columns, score_cap)
    }

    /// Builds an election from candidate-major storage (`columns[j * n + i] = u_i(j)`).
    pub fn from_columns(
        n: usize,
        m: usize,
        k: usize,
        columns: Vec<f64>,
        score_cap: Option<f64>,
    ) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidElection("n and m must be positive".into()));
        }
        if columns.len() != n * m {
            return Err(Error::InvalidElection(format!(
                "expected {} utilities, got {}",
                n * m,
                columns.len()
            )));
        }
        if k < 2 || k >= m {
            return Err(Error::InvalidElection(format!(
                "committee size must satisfy 2 <= k < m (k={k}, m={m})"
            )));
        }
        if let Some(b) = score_cap {
            if !(b.is_finite() && b > 0.0) {
                return Err(Error::InvalidElection(format!("score cap {b} must be positive")));
            }
        }
        for (idx, &u) in columns.iter().enumerate() {
            let (j, i) = (idx / n, idx % n);
            if !u.is_finite() || u < 0.0 {
                return Err(Error::InvalidElection(format!(
                    "u[{}][{}] = {u} is not a non-negative finite number",
                    i + 1,
                    j + 1
                )));
            }
            if let Some(b) = score_cap {
                if u > b {
                    return Err(Error::InvalidElection(format!(
                        "u[{}][{}] = {u} exceeds the score cap {b}",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Election {
            n,
            m,
            k,
            columns,
            score_cap,
        })
    }

    pub fn num_voters(&self) -> usize {
        self.n
    }

    pub fn num_candidates(&self) -> usize {
        self.m
    }

    pub fn committee_size(&self) -> usize {
        self.k
    }

    pub fn score_cap(&self) -> Option<f64> {
        self.score_cap
    }

    #[inline]
    pub fn utility(&self, voter: usize, candidate: usize) -> f64 {
        self.columns[candidate * self.n + voter]
    }


    pub fn column(&self, candidate: usize) -> &[f64] {
        &self.columns[candidate * self.n..(candidate + 1) * self.n]
    }

    pub fn row(&self, voter: usize) -> Vec<f64> {
        (0..self.m).map(|j| self.utility(voter, j)).collect()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i)).collect()
    }

    pub fn column_sum(&self, candidate: usize) -> f64 {
        self.column(candidate).iter().sum()
    }

    /// True when every utility is 0 or 1.
    pub fn is_approval(&self) -> bool {
        self.columns.iter().all(|&u| u == 0.0 || u == 1.0)
    }

    /// Same profile with a different committee size.
    pub fn with_committee_size(&self, k: usize) -> Result<Self> {
        Self::from_columns(self.n, self.m, k, self.columns.clone(), self.score_cap)
    }

    /// The hiring-board profile: two voters (Theory, Applied), six
    /// candidates, `k = 2`.
    pub fn example_hiring_board() -> Self {
        Self::new(
            &[
                vec![0.0, 1.0, 2.0, 0.0, 0.0, 0.0],
                vec![2.0, 0.0, 0.0, 3.0, 1.0, 3.0],
            ],
            2,
            None,
        )
        .expect("static profile is valid")
    }
}

/// A presentation order: `order[p]` is the candidate arriving at position `p + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArrivalOrder(Vec<usize>);

impl ArrivalOrder {
    pub fn new(permutation: Vec<usize>) -> Result<Self> {
        let m = permutation.len();
        let mut seen = vec![false; m];
        for &c in &permutation {
            if c >= m {
                return Err(Error::InvalidOrder(format!("candidate {c} out of range 0..{m}")));
            }
            if std::mem::replace(&mut seen[c], true) {
                return Err(Error::InvalidOrder(format!("candidate {c} appears twice")));
            }
        }
        Ok(ArrivalOrder(permutation))
    }

    pub fn identity(m: usize) -> Self {
        ArrivalOrder((0..m).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub(crate) fn check_for(&self, e: &Election) -> Result<()> {
        if self.0.len() != e.num_candidates() {
            return Err(Error::InvalidOrder(format!(
                "order has {} entries but the election has {} candidates",
                self.0.len(),
                e.num_candidates()
            )));
        }
        Ok(())
    }
}

/// Uniformly random arrival order: Fisher-Yates over `0..m` driven by the
/// crate's seeded generator.
pub fn random_order(m: usize, seed: u64) -> Result<ArrivalOrder> {
    if m == 0 {
        return Err(Error::EmptyDomain("cannot order zero candidates".into()));
    }
    let mut perm: Vec<usize> = (0..m).collect();
    perm.shuffle(&mut rng_from_seed(seed));
    Ok(ArrivalOrder(perm))
}

/// One step of the candidate stream.
#[derive(Debug, Clone, Copy)]
pub struct Arrival<'a> {
    /// 1-based arrival position.
    pub position: usize,
    pub candidate: usize,
    /// `u_i(candidate)` for every voter, revealed at this position.
    pub utilities: &'a [f64],
}

/// Presents the candidates of `e` in order `o`, revealing one column per step.
pub fn stream<'a>(
    e: &'a Election,
    o: &'a ArrivalOrder,
) -> Result<impl ExactSizeIterator<Item = Arrival<'a>> + 'a> {
    o.check_for(e)?;
    Ok(o.0.iter().enumerate().map(move |(p, &c)| Arrival {
        position: p + 1,
        candidate: c,
        utilities: e.column(c),
    }))
}

/// Why an online rule hired or rejected a candidate.
#[derive(Debug, Clone, PartialEq)]
pub enum Reason {
    /// Supporters held at least one unit of budget (collected = their total).
    Affordable { collected: f64 },
    Unaffordable { collected: f64 },
    /// Remaining arrivals exactly fill the open seats.
    Safeguard,
    CommitteeFull,
    /// Observed during an exploration or observation phase.
    Exploration,
    /// The candidate entered the running sample in place of `excluded`.
    Displaced { excluded: usize, from_reference: bool },
    /// The subroutine dropped the arriving candidate itself.
    NotSelected,
    AboveThreshold { gain: f64, threshold: f64 },
    BelowThreshold { gain: f64, threshold: f64 },
    SegmentFallback { gain: f64, threshold: f64 },
}

impl Reason {
    pub fn tag(&self) -> &'static str {
        match self {
            Reason::Affordable { .. } => "affordable",
            Reason::Unaffordable { .. } => "unaffordable",
            Reason::Safeguard => "safeguard",
            Reason::CommitteeFull => "committee-full",
            Reason::Exploration => "exploration",
            Reason::Displaced { .. } => "displaced",
            Reason::NotSelected => "not-selected",
            Reason::AboveThreshold { .. } => "above-threshold",
            Reason::BelowThreshold { .. } => "below-threshold",
            Reason::SegmentFallback { .. } => "segment-fallback",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArrivalRecord {
    pub position: usize,
    pub candidate: usize,
    pub hired: bool,
    pub reason: Reason,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Payment {
    pub candidate: usize,
    pub voter: usize,
    pub amount: f64,
}

/// Rule-specific trace. Online rules record every arrival position exactly once.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Audit {
    pub arrivals: Vec<ArrivalRecord>,
    pub payments: Vec<Payment>,
    /// Running-sample snapshots (Online MES/BOS), one per selection-phase step.
    pub running_sample: Vec<Vec<usize>>,
}

impl Audit {
    pub fn total_paid(&self) -> f64 {
        self.payments.iter().map(|p| p.amount).sum()
    }
}

/// A selected committee plus the audit trail of the rule that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Committee {
    members: Vec<usize>,
    pub audit: Audit,
}

impl Committee {
    /// Committee without an audit. Members are sorted; duplicates are rejected.
    pub fn from_members(members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidCommittee("duplicate member".into()));
        }
        Ok(Committee {
            members,
            audit: Audit::default(),
        })
    }

    pub(crate) fn with_audit(members: Vec<usize>, audit: Audit) -> Self {
        let mut c = Committee::from_members(members).expect("rules never hire twice");
        c.audit = audit;
        c
    }

    /// Sorted member indices.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, c: usize) -> bool {
        self.members.binary_search(&c).is_ok()
    }

    /// Checks that the committee is feasible for `e`.
    pub fn validate(&self, e: &Election) -> Result<()> {
        if let Some(&c) = self.members.iter().find(|&&c| c >= e.num_candidates()) {
            return Err(Error::InvalidCommittee(format!(
                "member {} is not a candidate (m = {})",
                c + 1,
                e.num_candidates()
            )));
        }
        if self.members.len() > e.committee_size() {
            return Err(Error::InvalidCommittee(format!(
                "{} members exceed k = {}",
                self.members.len(),
                e.committee_size()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Committee {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.members.iter().map(|c| format!("c{}", c + 1)).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}

/// Per-voter satisfaction `u_i(W)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SatisfactionVector(pub Vec<f64>);

impl SatisfactionVector {
    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

/// Additive satisfaction of every voter with committee `w`.
pub fn satisfaction(e: &Election, w: &Committee) -> Result<SatisfactionVector> {
    w.validate(e)?;
    Ok(SatisfactionVector(satisfaction_of(e, w.members())))
}

pub(crate) fn satisfaction_of(e: &Election, members: &[usize]) -> Vec<f64> {
    let mut s = vec![0.0; e.num_voters()];
    for &c in members {
        for (si, &u) in s.iter_mut().zip(e.column(c)) {
            *si += u;
        }
    }
    s
}
