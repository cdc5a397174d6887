//! Exact computational algebra for Khovanskii-basis certification.
//!
//! The crate computes initial ideals of multigraded ideals with respect to
//! weighting matrices, compares them with toric ideals of monomial maps, and
//! supplies the two families of valuations that feed this pipeline: string
//! valuations on flag varieties and flow valuations from plabic graphs on
//! Grassmannians.

pub mod error;
pub mod groebner;
pub mod ideals;
pub mod lattice;
pub mod orders;
pub mod plabic;
pub mod poly;
pub mod polytope;
pub mod rational;
pub mod string_val;
pub mod toric;

pub use error::{KhlError, Result};
pub use poly::{Exponent, Ideal, MultiDegree, Polynomial, VariableUniverse};
pub use rational::Rational;
