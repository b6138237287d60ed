//! File formats and the command-line driver for `textfst-core`.

pub mod cli;
pub mod formats;
