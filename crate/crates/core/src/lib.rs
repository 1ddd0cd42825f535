//! Numerical verification of conditional symmetries of determinant-type
//! diffusion equations: second-order jets, the `W^I`/`W^II`/Monge-Ampère
//! operators, finite actions of the 𝔄_N(z) algebras, and exact solutions.

pub mod det;
pub mod error;
pub mod fields;
pub mod jet2;
pub mod operators;
pub mod solutions;
pub mod symmetry;
pub mod verify;

pub use error::{Error, Result};
pub use fields::{
    evaluate, make_random_polynomial, Coords, ModelParams, PlaneField, Point, Polynomial, ProfileFunction,
    RandomPolynomialField, ScalarField,
};
pub use jet2::Jet2;
pub use operators::{GFunction, Residual, ResidualKind};
pub use solutions::{catalog, shift_by_yphi, CatalogEntry, SolutionFamily};
pub use symmetry::{pushforward_field, AlgebraGenerator, GroupElement, TransformFactors};
pub use verify::{fd_crosscheck, run_residual_suite, GridSpec, ResidualReport};
