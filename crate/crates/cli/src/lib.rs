//! File formats shared between the `ofal` binary and its integration tests.

pub mod files;
