//! Classical and quantum Bayes-Nash equilibria of a Cournot duopoly in which
//! firm 1 is uncertain about firm 2's unit cost.
//!
//! * [`market`]: parameters, inverse demand, profits, derived constants.
//! * [`classical`]: closed-form classical equilibria.
//! * [`quantum`]: the entangled game, its equilibrium and average profits.
//! * [`thresholds`]: asymmetry thresholds and critical entanglement levels.
//! * [`oracle`]: independent numerical verification.
//! * [`cli`]: the `qcournot` command-line frontend.

// NaN-rejecting guards are written as negated comparisons.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod cli;
mod error;
pub mod market;
pub mod oracle;
pub mod quantum;
pub mod thresholds;

pub use error::{Error, Result};
