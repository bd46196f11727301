//! q-deformed angular momentum `so_q(3)` inside the totally symmetric
//! representations `[λ,0,0]` of `u_q(3)`.
//!
//! The crate is `no_std` and needs only `alloc`. It provides
//!
//! * [`qnum`]: q-numbers, q-factorials, q-double-factorials, q-binomials;
//! * [`qcg`]: q-Clebsch–Gordan coefficients and a coproduct-based rebuild;
//! * [`fockrep`]: the three-mode q-boson Fock space, every operator of the
//!   construction as number-conserving sector blocks, and the identity suite;
//! * [`basis`]: orthonormal `|λ; L M⟩` states by two independent routes;
//! * [`matelem`]: closed-form quadrupole reduced matrix elements, B(E2)
//!   values, small-`tau` expansions, and the Fock-space extraction that
//!   certifies them.
#![no_std]

extern crate alloc;

pub mod basis;
pub mod error;
pub mod fockrep;
pub mod halfint;
pub mod matelem;
pub mod qcg;
pub mod qnum;

pub use error::{Error, Result};
pub use halfint::HalfInt;
pub use qnum::DeformationParam;
