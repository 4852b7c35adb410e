//! Exact classical simulation of the shifted-difference-set quantum algorithm.
//!
//! The crate constructs and certifies abelian difference sets (Paley,
//! Hadamard, Singer), evaluates their character spectra and related Gauss
//! sums, runs the hidden-shift algorithm as an exact statevector computation,
//! and builds and solves dihedral hidden-subgroup instances obtained from
//! injectivized Singer hidden-shift instances.
//!
//! Floating-point code is generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the common double-precision instantiations.

pub mod diffset;
pub mod dihedral;
pub mod error;
pub mod experiment;
pub mod field;
pub mod group;
pub mod hidden_shift;
pub mod io;
pub mod oracle;
pub mod scalar;
pub mod spectrum;
pub mod statevector;

pub use diffset::{BentFunctionSpec, DifferenceSet, Family, Params};
pub use error::{Error, Result};
pub use field::{FieldElement, FiniteField, PrimitiveElement};
pub use group::{AbelianGroup, Character, GroupElement};
pub use oracle::MembershipOracle;
pub use scalar::Real;

pub type Complex64 = num_complex::Complex<f64>;
pub type Complex32 = num_complex::Complex<f32>;

pub type StateVectorF64 = statevector::StateVector<f64>;
pub type StateVectorF32 = statevector::StateVector<f32>;
pub type DiagonalOperatorF64 = statevector::DiagonalOperator<f64>;
pub type DiagonalOperatorF32 = statevector::DiagonalOperator<f32>;
pub type SpectrumReportF64 = spectrum::SpectrumReport<f64>;
pub type SpectrumReportF32 = spectrum::SpectrumReport<f32>;
pub type Algorithm1RunF64 = hidden_shift::Algorithm1Run<f64>;
pub type SolverResultF64 = hidden_shift::SolverResult<f64>;
