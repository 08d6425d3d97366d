//! Stationary scattering theory of the detuned one-photon mazer.
//!
//! An excited two-level atom with quantized center-of-mass motion crosses a
//! cavity holding `n` photons. Everything is expressed in the dimensionless
//! numbers `(n, k/κ, δ/g, κL)`:
//!
//! * [`model`] holds the dressed-state geometry and channel wavenumbers,
//! * [`mesa`] evaluates the exact closed-form amplitudes for a square mode,
//! * [`solver`] is an independent coupled-channel solver for any mode profile,
//! * [`regimes`] carries the hot and cold atom asymptotics,
//! * [`sweep`] drives parameter sweeps and writes the CSV tables used by the CLI.

pub mod error;
pub mod mesa;
pub mod model;
pub mod regimes;
pub mod solver;
pub mod sweep;

pub use error::{MazerError, Result};
pub use mesa::{
    emission_probability, mesa_amplitudes, probabilities, resonant_amplitudes, ChannelProbabilities,
    ScatteringAmplitudes,
};
pub use model::{
    channel_wavenumbers, classify_regime, critical_detuning, critical_k_ratio, dressed_frame, step_energies,
    ChannelWavenumbers, DressedFrame, MazerParams, Regime, StepEnergies,
};
pub use regimes::{
    cold_detuning_bounds, cold_emission_approx, cold_emission_fit, peak_report, rabi_emission, ColdApprox,
    ColdValidity, PeakReport,
};
pub use solver::{
    converge, slice_transfer, solve_scattering, stationary_coupling_matrix, ModeProfile, ProfileKind, SliceTransfer,
};
