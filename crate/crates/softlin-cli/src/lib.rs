//! Library surface of the scene runner, shared by the `softlin` binary and
//! its integration tests.

pub mod exec;
pub mod report;
pub mod scene;
