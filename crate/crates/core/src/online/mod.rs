//! Streaming committee rules. Each consumes an election in a given arrival
//! order, decides irrevocably at every position using only the columns
//! revealed so far, and returns exactly `k` members with a full audit.

mod equal_shares;
mod greedy;
mod nash;

use std::fmt;
use std::str::FromStr;

pub use equal_shares::{default_exploration, online_bos, online_mes, RunningSample};
pub use greedy::greedy_budgeting;
pub use nash::{online_nash, segment_sizes};

use crate::election::{ArrivalOrder, Committee, Election};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OnlineRule {
    Greedy,
    OnlineMes,
    OnlineBos,
    OnlineNash,
}

impl OnlineRule {
    pub const ALL: [OnlineRule; 4] = [
        OnlineRule::Greedy,
        OnlineRule::OnlineMes,
        OnlineRule::OnlineBos,
        OnlineRule::OnlineNash,
    ];

    pub fn id(self) -> &'static str {
        match self {
            OnlineRule::Greedy => "greedy",
            OnlineRule::OnlineMes => "online-mes",
            OnlineRule::OnlineBos => "online-bos",
            OnlineRule::OnlineNash => "online-nash",
        }
    }
}

impl fmt::Display for OnlineRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for OnlineRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        OnlineRule::ALL
            .into_iter()
            .find(|r| r.id() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown rule '{s}'")))
    }
}

/// Rule selection plus the exploration length used by Online MES/BOS.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OnlineRuleConfig {
    pub rule: OnlineRule,
    /// `None` means `⌊m/e⌋`.
    pub exploration: Option<usize>,
}

impl OnlineRuleConfig {
    pub fn new(rule: OnlineRule) -> Self {
        OnlineRuleConfig {
            rule,
            exploration: None,
        }
    }

    pub fn with_exploration(mut self, t: usize) -> Self {
        self.exploration = Some(t);
        self
    }

    pub fn run(&self, e: &Election, o: &ArrivalOrder) -> Result<Committee> {
        let t = || {
            let m = e.num_candidates();
            let t = self.exploration.unwrap_or_else(|| default_exploration(m));
            if t >= m {
                Err(Error::InvalidParameter(format!(
                    "exploration length {t} must be below m = {m}"
                )))
            } else {
                Ok(t)
            }
        };
        match self.rule {
            OnlineRule::Greedy => greedy_budgeting(e, o),
            OnlineRule::OnlineMes => online_mes(e, o, t()?),
            OnlineRule::OnlineBos => online_bos(e, o, t()?),
            OnlineRule::OnlineNash => online_nash(e, o),
        }
    }
}

/// Runs `rule` with default settings.
pub fn run_rule(rule: OnlineRule, e: &Election, o: &ArrivalOrder) -> Result<Committee> {
    OnlineRuleConfig::new(rule).run(e, o)
}
