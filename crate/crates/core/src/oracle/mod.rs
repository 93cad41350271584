//! Floating-point cross-checks for the exact engines.

pub mod fd;
pub mod quad;
pub mod suite;

pub use fd::{ground_energy_fd, GridSpec};
pub use quad::{integrate, numeric_dbar_1d, numeric_dbar_radial, QuadratureConfig};
pub use suite::{
    dbar_suite, energy_suite, full_suite, Metric, OracleRow, SuiteConfig, SuiteReport,
};
