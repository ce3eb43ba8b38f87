//! Batch campaigns: random-polynomial scans and the verification suite.

mod scan;
mod verify;

pub use scan::{scan_csv, scan_rows, ScanConfig, ScanRow, SCAN_COLUMNS, SCAN_CSV_VERSION};
pub use verify::{
    determinism_config, dichotomy_bases, odd_field_orders, run_check, run_verify, weil_instances, weil_instances_in, xset_instances,
    CheckGroup, SuiteReport, VerifyConfig, CHECKS, VERIFY_SCHEMA_VERSION,
};
