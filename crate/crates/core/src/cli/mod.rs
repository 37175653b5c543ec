//! Spec files, command dispatch and canonical reports.
mod format;
mod report;
mod run;

pub use format::*;
pub use report::*;
pub use run::*;

#[cfg(test)]
mod tests;
