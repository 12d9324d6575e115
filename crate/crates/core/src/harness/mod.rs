//! Scenario files, the simulated world that runs them, and QoS reporting.

pub mod metrics;
pub mod report;
pub mod scenario;
pub mod world;

pub use metrics::{DirectionTotals, Fate, Flags, JitterEstimator, PacketRecord, QosFigures};
pub use report::{render, render_csv, render_table, CallReport, Format, ProtocolAudit, RunReport};
pub use scenario::{CallSpec, Issue, NodeSpec, Scenario, ScenarioError};
pub use world::{run_batch, run_scenario, RunError, RunOptions, Side, World, WorldEvent};
