//! Behavioral simulator and codec for dynamic predictive sampling (DPS)
//! analog-to-digital conversion.
//!
//! A DPS converter extrapolates the next sample from the last two values and
//! only runs a full SAR conversion when the input leaves a window around
//! that prediction. This crate models the converter cycle by cycle and turns
//! uniformly sampled traces into sparse `(timestamp, code)` event streams.
//!
//! The [`analysis`] module rebuilds waveforms from those streams and compares
//! them with Nyquist-rate SAR and level-crossing sampling.

pub mod analysis;
pub mod baselines;
pub mod dps;
pub mod error;
pub mod events;
pub mod fixtures;
pub mod kv;
pub mod metrics;
pub mod quantizer;
pub mod reconstruct;
pub mod signal;

pub use analysis::{CompareReport, RunReport, SweepRow};
pub use baselines::{lc_encode, nyquist_encode, LcConfig, LcEvent};
pub use dps::{encode, DpsConfig, DpsState, Mode, StepOutcome};
pub use error::{Error, Result};
pub use events::{read_events, write_events, EventRecord, EventStream};
pub use metrics::{
    compression_factor, energy_estimate, power_saving_factor, EnergyBreakdown, EnergyModel,
    OpCounts,
};
pub use quantizer::{AdcConfig, Code};
pub use reconstruct::{
    decode_anchors, pwl_reconstruct, reconstruct_stream, rms_error, AnchorPoint,
};
pub use signal::{gen_lpf_square, gen_sine, load_signal_csv, UniformSignal};
