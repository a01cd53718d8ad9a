//! Offline committee rules: used as subroutines by the online rules and as
//! baselines in experiments.

mod equal_shares;
mod welfare;

pub use equal_shares::{bos, equal_shares_on, mes, EqualSharesVariant, MesRound, MesTrace};
pub use welfare::{
    binomial, nash_optimum_bruteforce, nash_optimum_bruteforce_capped, nash_welfare,
    utilitarian_topk, DEFAULT_ENUMERATION_CAP,
};

pub(crate) use welfare::welfare_from_satisfaction;
