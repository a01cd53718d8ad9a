//! Reading and writing elections: Pabulib `.pb` files (approval ballots) and
//! a native line format for cardinal profiles.

mod native;
mod pabulib;

pub use native::{read_native, write_native, NativeInstance};
pub use pabulib::{
    committee_size_for_divisor, parse_pabulib, to_election, write_pabulib, PabulibInstance,
};

use std::path::Path;

use crate::error::Result;

pub(crate) fn read_path(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| crate::error::Error::Io(format!("{}: {e}", path.display())))
}

/// Whether `path` names a Pabulib file (by its `.pb` extension).
pub fn is_pabulib(path: &Path) -> bool {
    path.extension().is_some_and(|x| x == "pb")
}
