//! Report pipeline behind the `xorgame` binary, exposed as a library
//! so the JSON report schema is importable (and testable) as types.

pub mod report;
