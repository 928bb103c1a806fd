//! Exact intersection theory on symmetric products, Jacobians and projective
//! spaces, with Seiberg-Witten invariant pipelines for elliptic and ruled
//! surfaces built on top.

pub mod cli;
pub mod error;
pub mod expr;
pub mod grr;
pub mod ring;
pub mod space;
pub mod sw;
pub mod verify;

pub use error::{Error, Result};
pub use ring::{binom, GradedElement, Monomial, Rational, Ring};
pub use space::{AmbientSpace, BundleClass};
