//! Group association schemes of the metacyclic groups
//! `D_{n,s} = C_n x|_s C_2` and the Terwilliger algebras at the identity.
//!
//! The dimension of `T(D_{n,s})` is reached three ways: saturating the
//! algebra generated by the adjacency matrices and dual idempotents, counting
//! nonzero intersection numbers (`dim T0`), and counting orbitals of the
//! conjugation action (`dim T~`). The Wedderburn block sizes come from the
//! character table, once as row sums and once from closed forms.

pub mod analysis;
pub mod character;
pub mod error;
pub mod group;
pub mod linalg;
pub mod scheme;
pub mod terwilliger;
pub mod wedderburn;

pub use error::{Error, Result};
pub use group::{GroupElement, GroupParams};
