//! Exact-arithmetic kernel for fibered toric varieties.
//!
//! The crate is organized around a small set of immutable values:
//!
//! - [`fan::Fan`] — rational polyhedral fans with primitive rays and
//!   simplicial maximal cones;
//! - [`twist::TwistData`] — a base fan, a fiber fan, and piecewise-linear
//!   twisting data, describing a fibered toric variety;
//! - [`cohomology::CohomologyRing`] — graded quotient presentations with
//!   per-degree exact normal forms, intersection numbers and Chern classes;
//! - [`polytope::VPolytope`] / [`polytope::HPolytope`] — exact rational
//!   polytopes carrying volumes, mixed volumes and polynomial integrals;
//! - [`equivariant`] — finite approximations of equivariant cohomology.
//!
//! Every computation is exact: arbitrary-precision integers and rationals
//! throughout, no floating point anywhere. The headline identities
//! (intersection numbers versus mixed volumes, ring presentations versus
//! their fibered factorizations, truncated equivariant quotients versus
//! the cohomology of approximation bundles) are each computed two
//! independent ways and compared for exact equality in the test suite.

pub mod cohomology;
pub mod equivariant;
pub mod error;
pub mod fan;
pub mod json;
pub mod linalg;
pub mod poly;
pub mod polytope;
pub mod twist;

pub use cohomology::{CohomologyRing, Divisor, RingClass, RingPresentation};
pub use error::{Error, Result};
pub use fan::{Cone, Fan, LatticeVector, RationalVector, ValidationReport};
pub use polytope::{HPolytope, VPolytope};
pub use twist::{PlMap, TwistData};
