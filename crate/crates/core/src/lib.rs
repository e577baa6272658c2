//! Additive noise and the Hopf bifurcation of a scalar delayed feedback loop.
//!
//! The crate integrates `u' = -u + η u_τ + κ u_τ² + ν u_τ³ + sqrt(2D) ξ(t)`
//! with Euler–Maruyama, locates the deterministic Hopf point, estimates the
//! variance of the fast stable-subspace fluctuations, and builds the
//! deterministic corrected equation whose control parameter is shifted by
//! `μ(D) = 3 ν σ²(D)`.
//!
//! ```
//! use hopf_noise::{spectrum::solve_hopf, expansion::expand};
//!
//! let hopf = solve_hopf(12.0).unwrap();
//! assert!((hopf.eta_c + 1.03).abs() < 5e-3);
//! let e = expand(-0.05, 60.0).unwrap();
//! assert!(e.nu > 0.0);
//! ```

pub mod error;
pub mod expansion;
pub mod experiments;
pub mod noise_correction;
pub mod seed;
pub mod spectrum;
pub mod stats;
pub mod trajectory;

pub use error::{Error, Result};
pub use expansion::{expand, ExpansionPoint};
pub use experiments::{
    amplitude, ensemble_average, onset_locator, scan, AmplitudeColumn, AmplitudeWindow,
    EnsembleConfig, EnsembleResult, ExperimentConfig, OperatingPoint, ScanRow, ScanTable,
};
pub use noise_correction::{
    effective_params, estimate_sigma2, project_center, NoiseCorrection, Sigma2Config,
    Sigma2Estimate,
};
pub use seed::Seed;
pub use spectrum::{solve_hopf, HopfPoint};
pub use trajectory::{integrate, HistoryInit, SystemParams, SystemSpec, Trajectory, Variant};
