//! Exact verification and interval certification of hyperbolicity for the
//! Jensen polynomials attached to the partition function.
//!
//! The crate is organised bottom-up:
//!
//! - [`exact`]: partition numbers, exact rational polynomials, Jensen and
//!   Hermite polynomials, Sturm root counting.
//! - [`hankel`]: power sums, Hankel determinants and the polynomials
//!   `D_{d,m}` in the coefficients, both symbolic and evaluated exactly.
//! - [`interval`] and [`asymptotics`]: outward-rounded MPFR intervals and the
//!   asymptotic quantities `w(n)`, `F(w)`, `R(j, w)`, `L(w)` built on them.
//! - [`certifier`]: Taylor expansion of `R(j, w)` with rigorous remainders,
//!   substitution into `D_{d,m}`, and the positivity certificates.

pub mod asymptotics;
pub mod certifier;
pub mod error;
pub mod exact;
pub mod hankel;
pub mod interval;

pub use error::{Error, Result};
pub use interval::Interval;
