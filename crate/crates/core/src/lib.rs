//! Exact coefficients of products of power series with constant term one.
//!
//! For factors `1 + sum_k a_{n,k} λ^k`, the coefficient `X_k` of the product is
//! a rational polynomial in the generating forms `S[L] = sum_n prod_j a_{n,L_j}`
//! indexed by integer partitions `L`. This crate builds that polynomial
//! ([`formula::xk_formula`]), evaluates it on finite coefficient tables
//! ([`series`]), and checks it against direct truncated multiplication.

pub mod bell;
pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod formula;
pub mod limits;
pub mod rational;
pub mod series;
pub mod verify;

pub use combinatorics::{CycleDecomposition, Partition, Permutation, SetPartition};
pub use error::{Error, Result};
pub use formula::{FormulaPolynomial, TermKey};
pub use limits::Limits;
pub use rational::Rational;
pub use series::SeriesTable;
