//! Exact integer-lattice machinery for reproducing the lattice side of the
//! M23 / supersingular K3 construction: invariant lattices of orbit
//! partitions inside the Niemeier lattice with root system `A1^24`, their
//! discriminant forms, root-freeness certificates, and the gluing that lands
//! on the Néron–Severi lattice of the Artin-invariant-1 supersingular K3
//! surface in characteristic 5, 7 or 11.

pub mod casebook;
pub mod enumeration;
pub mod error;
pub mod fqf;
pub mod golay;
pub mod lattice;
pub mod linalg;

pub use error::{Error, Result};
