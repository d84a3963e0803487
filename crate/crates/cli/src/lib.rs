//! Library surface of the harness binary, exposed so integration and
//! acceptance tests can drive the runner in-process.

pub mod config;
pub mod output;
pub mod runner;
pub mod selftest;
pub mod shrink;
