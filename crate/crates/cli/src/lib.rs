//! Command-line front end for the `plankcov` library: scene files,
//! measurement, coverage checks, certificates, oracle comparison and SVG
//! rendering.

pub mod commands;
pub mod oracle;
pub mod render;
pub mod scene;
