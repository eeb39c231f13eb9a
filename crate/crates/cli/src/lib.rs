//! Command implementations and the HTTP session service behind the
//! `ifttpin` binary.

pub mod commands;
pub mod service;
