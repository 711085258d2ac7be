//! Command-line front end for `sheafmonad`: text formats for polynomials,
//! monads and group elements, JSON reports, and the `sheafmonad` binary.

pub mod commands;
pub mod format;
pub mod table;

pub use commands::{run, Outcome};
