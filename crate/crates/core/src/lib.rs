//! Exact computations in stratified (Carnot) Lie algebras.
//!
//! The crate provides, over arbitrary-precision rationals:
//!
//! - canonical subspace arithmetic and quadratic-form signatures ([`linalg`]);
//! - validated graded Lie algebras given by structure constants, with
//!   brackets, centers, ideals, quotients, and products ([`lie`]);
//! - Hall bases and free nilpotent Lie algebras ([`hall`]);
//! - construction and recognition of the Engel-type algebras together with
//!   their polynomial vector-field realization ([`engel`]);
//! - the edge-saturation engine for half-space semigroups, type (⋆)/(◊)
//!   checks, Engel-quotient search, and three-valued semigeneration
//!   decisions with machine-checkable certificates ([`semigen`]);
//! - exact group arithmetic via truncated BCH in step ≤ 4 and a
//!   deterministic semigroup sampler ([`bch`]).
//!
//! All decision paths are exact; no floating point is used anywhere.

pub mod bch;
pub mod engel;
pub mod hall;
pub mod lie;
pub mod linalg;
pub mod poly;
pub mod presentation;
pub mod rat;
pub mod semigen;

pub use lie::{GradedLieAlgebra, HomIdeal, LieError};
pub use linalg::{QForm, Subspace};
pub use presentation::PresentationFile;
pub use rat::Rat;
pub use semigen::{Certificate, Decision, HalfSpace, Verdict};
