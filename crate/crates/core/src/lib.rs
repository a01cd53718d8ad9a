//! Online committee selection with cardinal ballots.
//!
//! Candidates arrive one at a time and must be hired or rejected on the spot.
//! The crate provides the online rules (Greedy Budgeting, Online MES/BOS,
//! Online Nash), their offline counterparts, proportionality checkers,
//! synthetic profile samplers, file formats and an experiment harness.
//!
//! ```
//! use multisecretary::{greedy_budgeting, ArrivalOrder, Election};
//!
//! let e = Election::example_hiring_board();
//! let w = greedy_budgeting(&e, &ArrivalOrder::identity(6)).unwrap();
//! assert_eq!(w.members(), &[0, 1]);
//! ```

pub mod axioms;
pub mod election;
pub mod error;
pub mod harness;
pub mod io;
pub mod metrics;
pub mod offline;
pub mod online;
pub mod rng;
pub mod samplers;

pub use election::{
    random_order, satisfaction, stream, Arrival, ArrivalOrder, ArrivalRecord, Audit, Committee,
    Election, Payment, Reason, SatisfactionVector, EPS,
};
pub use error::{Error, Result};
pub use offline::{bos, mes, nash_optimum_bruteforce, nash_welfare, utilitarian_topk};
pub use online::{
    greedy_budgeting, online_bos, online_mes, online_nash, run_rule, OnlineRule, OnlineRuleConfig,
};
