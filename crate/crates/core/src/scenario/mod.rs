//! Scenario files, the experiment drivers and their file outputs.

mod config;
mod output;
mod run;

pub use config::{parse_config, InitialState, ScenarioConfig, SegmentMode};
pub use output::{csv_row, format_matrix_dump, parse_matrix_dump, to_csv, write_atomic, CSV_HEADER};
pub use run::{
    analyze, final_state_path, one_step_report, oracle_check, oracle_check_from, run_scenario, write_run_outputs,
    AnalysisReport, ConvergenceReport, ConvergenceRow, CpWarning, RunSummary,
};
