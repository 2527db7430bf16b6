//! Grothendieck-Witt valued Euler characteristics and the combinatorics of
//! transfer formulas for split reductive groups.
//!
//! The crate is `no_std` and needs only `alloc`. Text parsing, JSON output
//! and the command line live in the companion `gwtrace` crate.

#![no_std]

extern crate alloc;

pub mod arith;
pub mod euler;
pub mod field;
pub mod gw;
pub mod hilbert;
pub mod smp;
pub mod transfer;
pub mod weyl;

pub use field::{FieldError, FieldSpec, FiniteField};
pub use gw::{GwElement, GwError, Invariants, SquareClass};
pub use hilbert::{hilbert_symbol, Place};
pub use weyl::{CartanType, Family, ParabolicSubset, SimpleType, WeylError, WeylGroup};
pub use euler::{euler_char, expand, EulerError, Evaluation, SpaceExpr, TorusStratum};
pub use transfer::{
    averaging_projector_check, maxrank_transfer_formula, torus_transfer_formula, ProjectorReport,
    TransferError, TransferFormula, TransferTerm,
};
pub use smp::{gl_double_cosets, verify_splitting, SmpError, SplittingCertificate, StableTerm};
