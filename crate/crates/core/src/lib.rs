//! Clifford algebra Cl(3,3) model of 3D points and their transformations.

#![allow(clippy::needless_range_loop)]

pub mod blade;
pub mod error;
pub mod euclid;
pub mod hodge;
pub mod multivector;
pub mod pipeline;
pub mod projective;
pub mod selftest;
pub mod transform;
pub mod versor;

pub use blade::{blade_geometric_product, BladeMask, Signature};
pub use error::{Error, Result};
pub use euclid::{EuclidVector, NormalizedPoint, Paravector};
pub use multivector::Multivector;
