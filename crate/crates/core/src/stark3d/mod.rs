//! Coulomb ground state (`S = g²r`) perturbed by a uniform field `εr cosθ`.
//!
//! Functions are polynomials in `r` and `ξ = cosθ`; azimuthal symmetry is
//! structural. `D̄·1` diverges on its own and is carried as a formal symbol
//! `Ω` until it cancels inside [`apply_g`].

mod angular;
mod engine;
mod green;

pub use angular::{
    angular_moment, apply_talpha, grad_dot, gradient_square, measure_mean, r2_grad_dot,
    r2_talpha_xi, radial_moment, AngularPoly,
};
pub use engine::{
    gradient_square_series, linear_residual_r2, old_step, revised_step, riccati_residual_r2,
    run_stark, stark_perturbation, StarkState,
};
pub use green::{apply_dbar_radial, apply_g, green_residual_r2, lambda, LambdaTable};
