//! Exact computations in stable module categories of `F_p[x]/x^m`.

pub mod error;
pub mod heller;
pub mod linalg;
pub mod modrep;
pub mod stcat;
pub mod adams;
pub mod cli;
pub mod sample;
pub mod toda;

pub use error::{Error, Result};
