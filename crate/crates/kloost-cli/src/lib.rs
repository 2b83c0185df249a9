//! Library side of the command-line front end: the dlog cache, output
//! schemas, and the acceptance-criteria driver shared by the `verify-all`
//! subcommand and the `acceptance` integration test target.

pub mod cache;
pub mod output;
pub mod verify;
