//! Text and JSON front end for `gwtrace-core`.

pub mod cli;
pub mod parse;
pub mod render;

pub use cli::run;
