//! Quantum Tanner codes built as group lifts of a base CSS code over a
//! left-right Cayley complex.
//!
//! The crate covers GF(2) linear algebra, finite groups given by their
//! multiplication tables, the canonical local codes, construction of base
//! and lifted codes, explicit logical operators, exact and randomized
//! distance computation, and a resumable parameter search.

pub mod code;
pub mod distance;
pub mod error;
pub mod gf2;
pub mod io;
pub mod group;
pub mod local;
pub mod logical;
pub mod search;
pub mod verify;

pub use code::{build_base, build_lifted, CodeSpec, CssCode, QubitLayout};
pub use distance::{Distance, DistanceEstimate, EstimatorOptions, Side};
pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVec, Echelon};
pub use group::{FiniteGroup, GroupDescriptor, Permutation, Twist};
pub use local::{Family, IntersectionData, LocalCode};
