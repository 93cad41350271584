//! Finite-difference ground energy of `−½d²/dx² + V` on `[−L, L]` with
//! Dirichlet walls, by Sturm-sequence bisection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub half_width: f64,
    pub points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            half_width: 12.0,
            points: 4801,
        }
    }
}

impl GridSpec {
    pub fn new(half_width: f64, points: usize) -> Result<Self> {
        let grid = Self { half_width, points };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if self.half_width.is_nan() || self.half_width <= 0.0 {
            return Err(Error::Config(format!(
                "grid half-width must be positive, got {}",
                self.half_width
            )));
        }
        if self.points < 3 || self.points.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "grid needs an odd point count ≥ 3, got {}",
                self.points
            )));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.points - 1) as f64
    }

    /// Same interval, half the spacing.
    pub fn refined(&self) -> Self {
        Self {
            half_width: self.half_width,
            points: 2 * self.points - 1,
        }
    }

    /// The grid for `V = ½g²x² + …` when `self` is given for `g = 1`: the
    /// half-width shrinks by `√g` and the point count grows by `⌈g⌉`, which
    /// keeps the `O(g²h²)` discretization error at the `g = 1` level.
    pub fn for_coupling(&self, g: f64) -> Self {
        let factor = g.ceil().max(1.0) as usize;
        Self {
            half_width: self.half_width / g.sqrt(),
            points: (self.points - 1) * factor + 1,
        }
    }

    fn interior(&self) -> impl Iterator<Item = f64> + '_ {
        let h = self.spacing();
        (1..self.points - 1).map(move |i| -self.half_width + i as f64 * h)
    }
}

/// Number of eigenvalues of the tridiagonal matrix below `lambda`.
fn sturm_count(diag: &[f64], off2: f64, lambda: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for (i, d) in diag.iter().enumerate() {
        q = d - lambda - if i == 0 { 0.0 } else { off2 / q };
        if q == 0.0 {
            q = f64::EPSILON * (d.abs() + lambda.abs()).max(1.0);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Lowest eigenvalue of the discretized Hamiltonian.
pub fn ground_energy_fd<V: Fn(f64) -> f64>(potential: V, grid: &GridSpec) -> Result<f64> {
    grid.validate()?;
    let h = grid.spacing();
    let diag: Vec<f64> = grid
        .interior()
        .map(|x| 1.0 / (h * h) + potential(x))
        .collect();
    if diag.iter().any(|d| !d.is_finite()) {
        return Err(Error::Bisection);
    }
    let off = 0.5 / (h * h);
    // Gershgorin bounds.
    let mut lo = diag.iter().fold(f64::INFINITY, |m, d| m.min(*d)) - 2.0 * off;
    let mut hi = diag.iter().fold(f64::NEG_INFINITY, |m, d| m.max(*d)) + 2.0 * off;
    let off2 = off * off;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        if sturm_count(&diag, off2, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(1.0) {
            return Ok(0.5 * (lo + hi));
        }
    }
    Err(Error::Bisection)
}
