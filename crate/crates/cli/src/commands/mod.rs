pub mod common;
pub mod ingest;
pub mod report_cmd;
pub mod run;
pub mod stats_cmd;
