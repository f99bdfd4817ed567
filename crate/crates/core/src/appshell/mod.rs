//! Documents, generators, fuzzing and the command-line front end.

pub mod cli;
pub mod commands;
pub mod document;
pub mod fuzz;
pub mod generate;
pub mod reportdoc;
