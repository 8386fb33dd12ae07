//! Scenario runner, benchmark driver and self-check suites behind the CLI.

pub mod bench;
pub mod config;
pub mod scenario;
pub mod verify;

pub use bench::{mmups, run_benchmark, BenchConfig, BenchReport, BenchRow};
pub use config::ConfigMap;
pub use scenario::{run_scenario, InitKind, Scenario, ScenarioReport, StepPhase};
pub use verify::{run_verify, VerifyLine};
