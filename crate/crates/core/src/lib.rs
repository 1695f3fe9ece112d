//! Normalizer chains in the Sylow 2-subgroups `Σ_n` of `Sym(2^n)`.
//!
//! Elements are tree portraits ([`Portrait`]), subgroups are echelonized
//! generating sequences ([`Subgroup`]), and the chain of iterated
//! normalizers starting at the affine group `U_n` is computed structurally
//! by recursion on the depth (see [`chain`]).
#![no_std]

extern crate alloc;

pub mod chain;
pub mod constructions;
pub mod error;
pub mod imprimitivity;
pub mod perm;
pub mod portrait;
pub mod section;
pub mod sequences;
pub mod split;
pub mod subgroup;
pub mod verify;

pub use error::{Error, Result};
pub use perm::{Permutation, Point};
pub use portrait::{Depth, Portrait, MAX_DEPTH};
pub use subgroup::{NodeOrder, Subgroup};
