//! Weighted finite-state machinery for text analysis.
//!
//! The core crate needs only `alloc`; disable the default `std` feature to use
//! it in `no_std` builds. File formats and the command-line driver live in the
//! companion `textfst` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod semiring;
pub mod symbols;
pub mod cart;
pub mod declist;
pub mod ngram;
pub mod pipelines;
pub mod rewrite;
pub mod wfst;

pub use error::{Error, Result};
pub use semiring::{Semiring, Weight};
pub use symbols::{Label, SymbolTable, EPSILON};
pub use wfst::{Arc, Path, StateId, Wfst};
