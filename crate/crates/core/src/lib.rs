//! Numerical workbench for monotone quantum Fisher metrics and the
//! uncertainty bounds they induce.
//!
//! The crate is organized bottom-up:
//!
//! - [`fop`]: the catalog of normalized symmetric operator monotone
//!   functions, their transform `f~`, pointwise orderings, and axiom checks.
//!   Generic over the scalar type; the rest of the crate works in `f64`.
//! - [`means`]: Kubo-Ando scalar and matrix means, spectral decompositions,
//!   and superoperator application of two-variable functions of the left and
//!   right multiplication operators of a state.
//! - [`states`]: density matrices, observables, tangent vectors, and
//!   deterministic samplers.
//! - [`qfi`]: monotone metric inner products, areas, correlation functionals,
//!   and metric adjusted skew information.
//! - [`inequalities`]: variance bounds built from those ingredients, their
//!   gap decompositions, equality certificates, and counterexample
//!   constructions.
//! - [`dynamics`]: unitary evolution and the dynamical form of the area
//!   bound.
//! - [`purelimit`]: rank-one boundary behavior and radial limits of the
//!   bounds along depolarizing families.
//! - [`report`]: verdicts, gap reports, and deterministic CSV / JSON-lines
//!   serialization.

#![forbid(unsafe_code)]
// guards written as `!(x > 0)` intentionally catch NaN; the positive forms do not
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod fop;
pub mod inequalities;
pub mod linalg;
pub mod means;
pub mod purelimit;
pub mod qfi;
pub mod report;
pub mod scalar;
pub mod states;

pub use error::{Error, Result};

/// Catalog function over `f64`, the scalar type used by the matrix layer.
pub type MonotoneFn = fop::MonotoneFunction<f64>;
/// Evaluation grid over `f64`.
pub type Grid = fop::FunctionGrid<f64>;
/// Dense complex matrix used throughout the matrix layer.
pub type CMatrix = nalgebra::DMatrix<num_complex::Complex64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<num_complex::Complex64>;
