//! Entanglement entropy of translation-invariant quasifree fermion chains.
//!
//! Models are quadratic fermion Hamiltonians with Toeplitz hopping and pairing
//! (see [`ModelSpec`]). Block entropies come from the Majorana correlation
//! matrix of the infinite chain ([`correlations`], [`entropy`]), from finite
//! open or periodic chains ([`finite`]), from Fisher-Hartwig asymptotics
//! ([`asymptotics`]) or, for small chains, exact diagonalization ([`oracle`]).

pub mod asymptotics;
pub mod config;
pub mod correlations;
pub mod entropy;
pub mod error;
pub mod finite;
pub mod fit;
pub mod model;
pub mod oracle;
pub mod phase;
pub mod quadrature;
pub mod sampling;
pub mod transforms;

pub use asymptotics::{AsymptoteResult, JumpData};
pub use correlations::{
    correlation_matrix, gauge_kernel, pi_block, BlockCache, CorrelationBlock, CorrelationMatrix,
    GaugeKernel,
};
pub use entropy::{e_func, entropy_scan, gauge_entropy, majorana_entropy, EntropyCurve, EntropySpectrum};
pub use error::{Error, Result};
pub use finite::{Boundary, FiniteChain, FiniteGroundState, ProfileRow};
pub use model::{ModelSpec, SymbolComponents};
pub use num_complex::Complex64;
pub use phase::{classify, nn_phase_region, NnRegion, PhasePoint};
pub use transforms::MajoranaCoupling;
