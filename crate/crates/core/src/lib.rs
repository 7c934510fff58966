//! Numerical core for Lagrange trigonometric interpolation of (ψ, β)-integrals.
//!
//! Everything here is `no_std` with `alloc`. IO, CLI and experiment orchestration
//! live in the companion `trigapprox` crate.
#![no_std]

extern crate alloc;

pub mod bestapprox;
pub mod bounds;
pub mod error;
pub mod interp;
pub mod interval;
pub mod lp;
pub mod psi;
pub mod quad;
pub mod summation;
pub mod trig;

pub use error::{Error, Result};
pub use interval::Interval;
pub use psi::{PsiFamily, PsiKind};
pub use summation::{CertifiedSum, SumConfig};
pub use trig::{PeriodicFn, TrigPoly};
