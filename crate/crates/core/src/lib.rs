//! Engine for a switch-accessible virtual keyboard that writes Logo.
//!
//! The keyboard is a four-level hierarchy (group, subgroup, row, key)
//! navigated either by pointing or by single-switch scanning. Selected key
//! outputs accumulate in a command buffer that runs on the embedded Logo
//! interpreter. A cost model predicts how many presses a program takes
//! with each input method.

pub mod cli;
pub mod cost;
pub mod engine;
pub mod layout;
pub mod logo;
pub mod scanner;
pub mod server;
