//! Document formats, Graphviz output and the `gsokit` command-line tool for
//! [`gsokit_core`].

pub mod cli;
pub mod document;
pub mod dot;

pub use cli::{run, Outcome};
pub use document::{Document, DocumentError};
