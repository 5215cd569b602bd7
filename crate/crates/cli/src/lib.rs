//! Expression language, configuration and command dispatch for `diffnev`.

pub mod commands;
pub mod config;
pub mod expr;
