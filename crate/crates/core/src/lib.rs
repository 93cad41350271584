//! Exact Green-function iteration for ground states of perturbed Schrödinger
//! operators.
//!
//! The unperturbed ground state `Φ = e^{−S}` fixes a trajectory `S`; the
//! perturbed state is written `Ψ = e^{−S−τ}` with energy shift `Δ`. Two
//! concrete trajectories are supported: the harmonic oscillator on the line
//! (`S = ½gx²`) and the Coulomb problem in three dimensions (`S = g²r`).
//! All algebra is exact: coefficients are rationals times integer powers of
//! the coupling `g`, and everything is a power series in the perturbation
//! strength `ε`.

pub mod cli;
pub mod error;
pub mod green1d;
pub mod iterate1d;
pub mod oracle;
pub mod poly1d;
pub mod report;
pub mod scalar;
pub mod stark3d;

pub use error::{Error, Result};
pub use poly1d::Poly1D;
pub use report::{Engine, IterationReport, Step};
pub use scalar::{rat, series_div, Coeff, EpsSeries, ParamScalar, Rational};
