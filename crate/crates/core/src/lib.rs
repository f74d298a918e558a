#![no_std]

extern crate alloc;

pub mod arith;
pub mod eliminate;
pub mod error;
pub mod ffield;
pub mod frey;
pub mod heckedata;
pub mod numfield;
pub mod poly;
pub mod qpoly;
pub mod traces;

pub use error::{Error, Result};
pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;
