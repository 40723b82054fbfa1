//! File formats, configuration and experiment drivers for `lierank-core`.

pub mod cli;
pub mod config;
pub mod experiments;
pub mod formats;
pub mod output;
