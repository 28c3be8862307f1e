//! Round-synchronous execution of node programs under width and step limits.
//!
//! In round `r` every live node reads the words its neighbors sent in round
//! `r - 1`, does metered local work, and emits at most `w` words per incident
//! edge. A node that returns [`Status::Halt`] still has that round's outbox
//! delivered and is never invoked again. The run ends when every node has
//! halted, or when a round passes in which every live node reports
//! [`Status::Idle`] and no word is sent (quiescence).

mod log;
mod meter;
mod program;
mod runner;

pub use log::{EdgeCount, NodeSteps, PhaseSummary, RoundLog, RoundSummary};
pub use meter::{BudgetClass, OpKind, StepBudget, StepMeter};
pub use program::{Inbox, NodeContext, NodeProgram, Outbox, Round, Status};
pub use runner::{run, RunOutcome, SimConfig};

pub(crate) use meter::ceil_log2;
