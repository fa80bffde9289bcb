//! Exact computations in the double shuffle algebra and its action on the
//! equivariant K-theory of moduli of framed sheaves on the plane.

pub mod characters;
pub mod exec;
pub mod harness;
pub mod kaction;
pub mod partitions;
pub mod scalars;
pub mod shuffle;
