//! Command implementations and report types behind the `qchaos` binary.
//!
//! The binary is a thin argument-parsing shell; everything it does is
//! callable from here, which is also how the integration tests drive the
//! command logic in-process.

pub mod commands;
pub mod report;
