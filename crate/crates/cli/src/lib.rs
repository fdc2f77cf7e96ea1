//! Command-line front end: algebra files, the bundled corpus, reports and
//! Graphviz export.

pub mod args;
pub mod commands;
pub mod corpus;
pub mod document;
pub mod dot;
pub mod report;
