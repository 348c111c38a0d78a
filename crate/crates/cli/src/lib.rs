//! File formats and report rendering behind the `chaindecomp` command.

pub mod format;
pub mod report;

pub use format::{parse_chain, parse_matrix, serialize_chain, serialize_matrix, ParseError};
