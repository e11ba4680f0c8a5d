//! Multi-actor simulation harness around the payment protocol: a
//! persistent world file, an explicit join message exchange, scripted and
//! randomized scenarios, and the `nickpay` binary on top.

pub mod actors;
pub mod scenario;
pub mod world;

pub use actors::{JoinDraft, JoinFault, JoinRequestEnvelope, JoinResponseEnvelope};
pub use scenario::{
    demo_script, random_script, run_audit, run_audit_nickname, run_join, run_join_with_fault,
    run_mint, run_open, run_open_nickname, run_scan, run_script, run_setup, run_step,
    run_transfer, AuditFault, Outcome, Step, StepRecord, StepReport, DEFAULT_LEDGER_ID,
};
pub use world::{HarnessError, UserRecord, WorldState, STATE_FORMAT};
