//! Cayley sum graphs over finite fields built from Kloosterman and Birch
//! connection sets: construction, Sidon and subgraph checks, exact spectra
//! from character sums, and comparison with limiting spectral laws.
//!
//! The modules build on each other in order: [`ffield`] → [`sidon`] →
//! [`cayley`] → [`expsum`] → [`spectrum`] → [`dist`], with [`cli`] on top.

pub mod cayley;
pub mod cli;
pub mod dist;
pub mod error;
pub mod expsum;
pub mod ffield;
pub mod sidon;
pub mod spectrum;

pub use error::{Error, Result};
pub use ffield::{make_field, Elem, FiniteField};
pub use sidon::{make_b, make_k, make_kplus, make_kt, GroupPoint, SumSet};
