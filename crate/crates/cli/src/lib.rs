//! Command-line front end: the diagram language, interpretation files,
//! renderers and the command implementations behind the `dualspider`
//! binary.

pub mod app;
pub mod interp;
pub mod lang;
pub mod render;
