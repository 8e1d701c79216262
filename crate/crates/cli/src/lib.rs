//! Library side of the `lieconj` command line tool: JSON schemas, seeded
//! instance generators, and the dispatcher the binary calls into.

pub mod app;
pub mod gen;
pub mod json;
