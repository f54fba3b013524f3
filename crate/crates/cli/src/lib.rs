//! Command-line companion to the core library: config files, CSV and SVG
//! artifacts, network checkpoints, and the orchestration of both simulation
//! studies.

pub mod checkpoint;
pub mod config_file;
pub mod csv_io;
pub mod experiments;
pub mod svg;
