//! Cluster-expansion toolkit for a finite-range classical gas in the canonical
//! ensemble.
//!
//! The crate is organized around the pipeline of the expansion:
//!
//! * [`graphs`] — labeled-graph enumeration (connected, 2-connected, trees)
//!   and tree/composition counting,
//! * [`polymer`] — polymer supports, multi-indices, truncated functions and
//!   exact-rational cluster coefficients,
//! * [`potential`] — pair potentials, Mayer functions and box geometry,
//! * [`exact1d`] — exact volumes of 1D interval-constraint regions (the
//!   stderr-free path behind hard-rod weights and oracles),
//! * [`weights`] — polymer activities and irreducible coefficients,
//! * [`expansion`] — convergence checks, the free-energy series and
//!   finite-volume corrections,
//! * [`oracle`] — exact hard-rod partition functions, brute-force integrals
//!   and a Metropolis sampler of the canonical Gibbs measure,
//! * [`correlations`] — the generating-function route to truncated
//!   correlation functions and their decay diagnostics.
//!
//! Every Monte Carlo entry point takes an explicit seed and worker count and
//! produces bit-identical results for identical inputs.

pub mod correlations;
pub mod exact1d;
pub mod expansion;
pub mod gibbs;
pub mod graphs;
pub mod mc;
pub mod measure;
pub mod oracle;
pub mod polymer;
pub mod potential;
pub mod weights;

pub use measure::{Measurement, Method};
pub use potential::{BoundaryCondition, BoxSpec, PairPotential, ThermoState};

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{what} is limited to n <= {cap}, got n = {n}")]
    CapExceeded {
        what: &'static str,
        n: usize,
        cap: usize,
    },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("convergence condition failed: {0}")]
    Convergence(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
