//! HTTP service and command line front end for `thermoprop`.

pub mod cli;
pub mod config;
pub mod error;
pub mod http;
pub mod task;
pub mod transport;
