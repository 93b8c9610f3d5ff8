//! Numerical laboratory for the first-order behaviour of vector spectral
//! measures of `D + eps X`, where `D` is a large real diagonal matrix and `X`
//! is a random Hermitian perturbation with a variance profile.
//!
//! The crate has three layers:
//!
//! * deterministic limit objects — eigenvalue profile `f`, spectral density
//!   `rho`, variance kernel `tau` ([`model`]), the smooth `C^7` test-function
//!   toolkit ([`smoothfn`]) and the first-order functional `Xi_s` evaluated by
//!   adaptive quadrature in several algebraically equivalent forms
//!   ([`theory`], [`quadrature`]);
//! * finite-`n` randomness — reproducible counter-seeded sampling of the
//!   perturbation, assembly of `D + eps X` ([`ensemble`]), dense Hermitian
//!   eigendecomposition and everything built on it: spectral measures,
//!   overlaps, window counts, operator norms ([`spectra`]);
//! * Monte Carlo drivers that compare the two layers and emit CSV/JSON
//!   reports ([`experiments`], [`report`]).
//!
//! All core math is generic over the scalar type through [`scalar::Real`]
//! (`f32` or `f64`); the concrete `f64` aliases below are what the CLI and
//! most call sites use.

use openblas_src as _; // pulls in the link directives for the system OpenBLAS

pub mod ensemble;
pub mod experiments;
pub mod jet;
pub mod model;
pub mod quadrature;
pub mod report;
pub mod scalar;
pub mod smoothfn;
pub mod spectra;
pub mod theory;

pub use scalar::Real;

/// Default `f64` instantiations.
pub type SpectralModel64 = model::SpectralModel<f64>;
pub type DiscretizedModel64 = model::DiscretizedModel<f64>;
pub type SmoothFunction64 = smoothfn::SmoothFunction<f64>;
pub type QuadratureSpec64 = quadrature::QuadratureSpec<f64>;
pub type EigenDecomposition64 = spectra::EigenDecomposition<f64>;
pub type SpectralMeasure64 = spectra::SpectralMeasure<f64>;
pub type PerturbedSystem64 = ensemble::PerturbedSystem<f64>;
pub type ExperimentConfig64 = experiments::ExperimentConfig<f64>;

/// Single-precision instantiations of the deterministic layer.
pub type SpectralModel32 = model::SpectralModel<f32>;
pub type SmoothFunction32 = smoothfn::SmoothFunction<f32>;
pub type QuadratureSpec32 = quadrature::QuadratureSpec<f32>;
