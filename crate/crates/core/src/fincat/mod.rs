//! Explicitly presented finite categories, functors, natural transformations,
//! brute-force (co)limits and pre/post right-adjoint checks.

mod adjoint;
mod builders;
mod category;
mod functor;
mod limits;
mod natural;
mod sets;

pub use adjoint::*;
pub use builders::*;
pub use category::*;
pub use functor::*;
pub use limits::*;
pub use natural::*;
pub use sets::*;

use crate::error::{Error, Result};

/// Step counter for exhaustive searches.
#[derive(Clone, Debug)]
pub struct Budget {
    what: String,
    limit: u64,
    used: u64,
}

impl Budget {
    pub const DEFAULT: u64 = 1 << 24;

    pub fn new(what: impl Into<String>, limit: u64) -> Self {
        Budget {
            what: what.into(),
            limit,
            used: 0,
        }
    }

    pub fn unlimited() -> Self {
        Budget::new("search", u64::MAX)
    }

    pub fn spend(&mut self) -> Result<()> {
        self.spend_n(1)
    }

    pub fn spend_n(&mut self, n: u64) -> Result<()> {
        self.used = self.used.saturating_add(n);
        if self.used > self.limit {
            Err(Error::BudgetExceeded {
                what: self.what.clone(),
                budget: self.limit,
            })
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new("search", Budget::DEFAULT)
    }
}

#[cfg(test)]
mod tests;
