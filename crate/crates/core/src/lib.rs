//! Gödel temporal logic: linear temporal logic over a Gödel–Dummett base with
//! co-implication.
//!
//! The crate covers parsing and printing formulas, exact evaluation in finite
//! real-valued and bi-relational models, two-sided types and labelled systems,
//! a decision procedure that searches for finite quasimodels, a Hilbert-style
//! proof checker and characteristic formulas.

pub mod birel;
pub mod calculus;
pub mod charform;
pub mod cli;
pub mod decide;
pub mod error;
pub mod flow;
pub mod formula;
pub mod labelled;
pub mod real;
pub mod types;

pub use error::{Error, Result};
pub use formula::{parse, ClosureSet, Formula, ParseError};
