//! Command-line front end for the domkl crate: configuration files,
//! flag handling, and multi-trial experiment drivers.

pub mod config;
pub mod experiment;
