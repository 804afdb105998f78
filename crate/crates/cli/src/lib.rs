//! Operational surface for the tiling laboratory: graph I/O, experiment
//! configs, the batch runner, and reporting.

pub mod config;
pub mod experiment;
pub mod formats;
pub mod report;

pub use config::{ConfigError, ExperimentConfig, InstanceSource, Sweep, SweepPoint, SWEEP_CAP};
pub use experiment::{
    measure_graph, read_records, run_and_persist, run_experiment, ExperimentError,
    ExperimentRecord, CSV_HEADER,
};
pub use formats::{
    decode_edge_list, decode_graph6, encode_edge_list, encode_graph6, read_graph, write_graph,
    FormatError, GraphFormat,
};
pub use report::{svg_scatter, text_report};
