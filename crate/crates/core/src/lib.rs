//! Finite Moufang loops given by Cayley tables.
//!
//! The crate covers the cyclic and dihedral constructions that modify a
//! quarter of a multiplication table, loop extensions by factor sets, the
//! power-map calculus of code loops, Chein doubles `M(G, 2)`, a small group
//! catalog with a coset enumerator, and a closure search over isomorphism
//! classes.

pub mod catalog;
pub mod chein;
pub mod code_loops;
pub mod constructions;
pub mod explorer;
pub mod factor_sets;
pub mod loops;
pub mod par;
pub mod sigma;

pub use loops::{ElemSet, LoopError, LoopTable};
