//! File formats, fixture and LMFDB loading, parallel table building, proof certificates
//! and the command-line driver on top of `frey-core`.

pub mod cache;
pub mod certificate;
pub mod cli;
pub mod error;
pub mod lmfdb;
pub mod prove;
pub mod schema;
pub mod tables;

pub use error::{Error, Result};
