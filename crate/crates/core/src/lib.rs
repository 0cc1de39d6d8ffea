//! Multiple-quantum-coherence (MQC) spectra of spin-model ground states.
//!
//! Collective (LMG) and lattice (TFI, ANNNI, RFTI) models, the free-fermion
//! solution of the transverse-field Ising chain, quasi-adiabatic ramps with
//! ideal and pseudo echoes, and the spectral analysis used to locate quantum
//! phase transitions.

pub mod analysis;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod lmg;
pub mod model;
pub mod quench;
pub mod special;
pub mod spectrum;
pub mod state;
pub mod sweeps;
pub mod tfi;
pub mod tolerance;

pub use error::{MqcError, Result};
pub use model::{Boundary, ModelKind, ModelSpec};
pub use spectrum::{FotocCurve, MqcSpectrum, SpectrumKind};
pub use state::{inner_product, overlap_fidelity, BasisKind, SpinBasis, StateVector};
