//! Crate-wide error type.

use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by lattice construction, special-function evaluation,
/// group-algebra arithmetic and verification drivers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("period lengths must be positive (real_period = {real_period}, kappa = {kappa})")]
    NonPositivePeriod { real_period: f64, kappa: f64 },

    #[error("argument {arg} = {z} is {distance:.3e} from a lattice point (margin {margin:.1e})")]
    PoleProximity {
        arg: &'static str,
        z: Complex64,
        distance: f64,
        margin: f64,
    },

    #[error("spectral parameter {z} is {distance:.3e} from a lattice point")]
    SpectralParameterOnLattice { z: Complex64, distance: f64 },

    #[error("non-finite complex point {z}")]
    NonFinitePoint { z: Complex64 },

    #[error("site index {index} outside 1..={n_sites}")]
    IndexOutOfRange { index: usize, n_sites: usize },

    #[error("repeated site index {index}")]
    RepeatedIndex { index: usize },

    #[error("site-count mismatch: {left} vs {right}")]
    SiteCountMismatch { left: usize, right: usize },

    #[error("chain needs at least 3 sites, got {n_sites}")]
    TooFewSites { n_sites: usize },

    #[error("rejection sampling exhausted: {attempts} attempts while drawing tuple {tuple_index}")]
    SamplingExhausted { attempts: usize, tuple_index: usize },

    #[error("spin representation of {n_sites} sites exceeds the dimension cap of {cap} sites")]
    DimensionCap { n_sites: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
