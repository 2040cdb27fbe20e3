//! Command-line harness for rowmotion experiments: JSON formats, realm
//! configuration, worked-example fixtures and the NAR periodicity fuzzer.

pub mod commands;
pub mod config;
pub mod fixtures;
pub mod fuzz;
pub mod io;
