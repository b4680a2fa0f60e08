//! Front ends for `qcluster`: the `qcluster` command and its HTTP API.

pub mod cli;
pub mod server;

pub use cli::{dispatch, Outcome};
