//! The dynamic predictive sampling state machine.
//!
//! Every clock cycle the logic extrapolates the last two values linearly
//! (`2*L1 - L2`), opens a window of `delta_code` codes either side of the
//! prediction, and checks the analog input against the DAC'd window rails.
//! Inside the window nothing is converted and the prediction itself becomes
//! the new last value. Outside it (or when the timestamp counter is about to
//! overflow) the failed sample and the one after it are SAR-converted; the
//! second conversion is emitted together with the cycle count since the
//! previous emission.
//!
//! ```
//! use dpsadc::{dps, AdcConfig, DpsConfig, UniformSignal};
//!
//! let cfg = DpsConfig::new(AdcConfig::chip_default(), 0.010, 10).unwrap();
//! let dc = UniformSignal::new(1000.0, vec![0.9; 1000]).unwrap();
//! let (stream, ops) = dps::encode(&dc, &cfg).unwrap();
//! assert_eq!(stream.events().len(), 2);
//! assert_eq!(ops.sar_conversions, 2);
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::events::{EventRecord, EventStream};
use crate::metrics::OpCounts;
use crate::quantizer::{AdcConfig, Code};
use crate::signal::UniformSignal;

/// Converter, window half-width and timestamp counter width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DpsConfig {
    adc: AdcConfig,
    delta_volts: f64,
    timestamp_bits: u32,
    emit_startup_pair: bool,
}

impl DpsConfig {
    pub const MIN_TIMESTAMP_BITS: u32 = 2;
    pub const MAX_TIMESTAMP_BITS: u32 = 32;

    pub fn new(adc: AdcConfig, delta_volts: f64, timestamp_bits: u32) -> Result<Self> {
        if !(delta_volts.is_finite() && delta_volts > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "delta must be positive, got {delta_volts} V"
            )));
        }
        // A failure episode spans the failed cycle plus the emitting cycle,
        // so the counter must be able to hold at least 2.
        if !(Self::MIN_TIMESTAMP_BITS..=Self::MAX_TIMESTAMP_BITS).contains(&timestamp_bits) {
            return Err(Error::InvalidConfig(format!(
                "timestamp bits must be in {}..={}, got {timestamp_bits}",
                Self::MIN_TIMESTAMP_BITS,
                Self::MAX_TIMESTAMP_BITS
            )));
        }
        Ok(Self {
            adc,
            delta_volts,
            timestamp_bits,
            emit_startup_pair: true,
        })
    }

    pub fn with_startup_pair(mut self, emit: bool) -> Self {
        self.emit_startup_pair = emit;
        self
    }

    pub fn adc(&self) -> &AdcConfig {
        &self.adc
    }

    pub fn delta_volts(&self) -> f64 {
        self.delta_volts
    }

    pub fn timestamp_bits(&self) -> u32 {
        self.timestamp_bits
    }

    pub fn emit_startup_pair(&self) -> bool {
        self.emit_startup_pair
    }

    /// Window half-width in codes: `max(1, round(delta_volts / lsb))`.
    pub fn delta_code(&self) -> u32 {
        let raw = (self.delta_volts / self.adc.lsb()).round();
        (raw.min(u32::MAX as f64) as u32).max(1)
    }

    /// Largest encodable timestamp, `2^timestamp_bits - 1`.
    pub fn max_dt(&self) -> u64 {
        (1u64 << self.timestamp_bits) - 1
    }

    /// Bits per emitted event: one code plus one timestamp.
    pub fn event_bits(&self) -> u32 {
        self.adc.bits() + self.timestamp_bits
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    /// First conversion of a run.
    Acquire0,
    /// Second conversion of the start-up pair or of a failure episode.
    Acquire1,
    Track,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DpsState {
    pub mode: Mode,
    /// Last value; meaningful outside `Acquire0`.
    pub l1: Code,
    /// Second-last value; meaningful in `Track`.
    pub l2: Code,
    /// Cycles since the last emitted event.
    pub counter: u64,
}

impl DpsState {
    pub fn initial() -> Self {
        Self {
            mode: Mode::Acquire0,
            l1: 0,
            l2: 0,
            counter: 0,
        }
    }
}

impl Default for DpsState {
    fn default() -> Self {
        Self::initial()
    }
}

/// What one clock cycle did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepOutcome {
    pub emitted: Option<EventRecord>,
    /// `Some` only on `Track` cycles.
    pub prediction_success: Option<bool>,
    /// The prediction checked on a `Track` cycle. Debug output only; never
    /// part of the event stream.
    pub prediction: Option<Code>,
    pub ops: OpCounts,
}

/// Linear extrapolation `2*l1 - l2`, clamped to the code range. The doubling
/// is a left shift.
pub fn predict(l1: Code, l2: Code, bits: u32) -> Code {
    let raw = ((l1 as i64) << 1) - l2 as i64;
    raw.clamp(0, max_code(bits)) as Code
}

/// Window rails `(ut, lt) = (p + delta, p - delta)`, each clamped to the
/// code range.
pub fn thresholds(p: Code, delta_code: u32, bits: u32) -> (Code, Code) {
    let top = max_code(bits);
    let ut = (p as i64 + delta_code as i64).clamp(0, top) as Code;
    let lt = (p as i64 - delta_code as i64).clamp(0, top) as Code;
    (ut, lt)
}

/// Open-interval window test on the DAC'd rails. Touching a rail fails.
pub fn decide(v: f64, ut: Code, lt: Code, cfg: &AdcConfig) -> bool {
    let top = cfg.max_code();
    let ut_a = cfg.dequantize_unchecked(ut.min(top));
    let lt_a = cfg.dequantize_unchecked(lt.min(top));
    lt_a < v && v < ut_a
}

fn max_code(bits: u32) -> i64 {
    (1i64 << bits) - 1
}

fn conversion_ops(adc: &AdcConfig) -> OpCounts {
    OpCounts {
        sar_conversions: 1,
        sar_bit_comparisons: adc.sar_comparisons(),
        digital_cycles: 1,
        ..OpCounts::default()
    }
}

/// Advances the state machine by one input sample.
pub fn step(state: DpsState, v: f64, cfg: &DpsConfig) -> (DpsState, StepOutcome) {
    let adc = cfg.adc();
    match state.mode {
        Mode::Acquire0 => {
            let code = adc.quantize(v);
            let emitted = cfg.emit_startup_pair.then_some(EventRecord {
                dt_cycles: state.counter,
                code,
            });
            let next = DpsState {
                mode: Mode::Acquire1,
                l1: code,
                l2: state.l2,
                counter: if emitted.is_some() { 0 } else { state.counter },
            };
            let outcome = StepOutcome {
                emitted,
                prediction_success: None,
                prediction: None,
                ops: conversion_ops(adc),
            };
            (next, outcome)
        }
        Mode::Acquire1 => {
            let code = adc.quantize(v);
            let dt_cycles = state.counter + 1;
            let next = DpsState {
                mode: Mode::Track,
                l1: code,
                l2: state.l1,
                counter: 0,
            };
            let outcome = StepOutcome {
                emitted: Some(EventRecord { dt_cycles, code }),
                prediction_success: None,
                prediction: None,
                ops: conversion_ops(adc),
            };
            (next, outcome)
        }
        Mode::Track => {
            let p = predict(state.l1, state.l2, adc.bits());
            let (ut, lt) = thresholds(p, cfg.delta_code(), adc.bits());
            let counter = state.counter + 1;
            // The episode a failure here would start emits at counter + 1.
            let room = counter + 1 < cfg.max_dt();
            let mut ops = OpCounts {
                window_comparisons: 2,
                dac_settings: 2,
                digital_cycles: 1,
                ..OpCounts::default()
            };
            if room && decide(v, ut, lt, adc) {
                let next = DpsState {
                    mode: Mode::Track,
                    l1: p,
                    l2: state.l1,
                    counter,
                };
                let outcome = StepOutcome {
                    emitted: None,
                    prediction_success: Some(true),
                    prediction: Some(p),
                    ops,
                };
                (next, outcome)
            } else {
                let code = adc.quantize(v);
                ops.sar_conversions = 1;
                ops.sar_bit_comparisons = adc.sar_comparisons();
                let next = DpsState {
                    mode: Mode::Acquire1,
                    l1: code,
                    l2: state.l1,
                    counter,
                };
                let outcome = StepOutcome {
                    emitted: None,
                    prediction_success: Some(false),
                    prediction: Some(p),
                    ops,
                };
                (next, outcome)
            }
        }
    }
}

/// Streaming front end over [`step`].
#[derive(Debug, Clone)]
pub struct Encoder {
    cfg: DpsConfig,
    fs_hz: f64,
    state: DpsState,
    events: Vec<EventRecord>,
    ops: OpCounts,
    consumed: u64,
}

impl Encoder {
    pub fn new(cfg: DpsConfig, fs_hz: f64) -> Self {
        Self {
            cfg,
            fs_hz,
            state: DpsState::initial(),
            events: Vec::new(),
            ops: OpCounts::default(),
            consumed: 0,
        }
    }

    pub fn state(&self) -> &DpsState {
        &self.state
    }

    pub fn push(&mut self, v: f64) -> StepOutcome {
        let (next, outcome) = step(self.state, v, &self.cfg);
        self.state = next;
        self.ops += outcome.ops;
        self.consumed += 1;
        if let Some(ev) = outcome.emitted {
            self.events.push(ev);
        }
        outcome
    }

    pub fn finish(self) -> Result<(EventStream, OpCounts)> {
        let stream = EventStream::new(self.cfg, self.fs_hz, self.events, self.consumed)?;
        Ok((stream, self.ops))
    }
}

/// Encodes a whole trace, starting from [`DpsState::initial`].
pub fn encode(signal: &UniformSignal, cfg: &DpsConfig) -> Result<(EventStream, OpCounts)> {
    if signal.is_empty() {
        return Err(Error::EmptySignal);
    }
    let mut enc = Encoder::new(*cfg, signal.fs_hz());
    for &v in signal.samples() {
        enc.push(v);
    }
    enc.finish()
}

/// [`encode`] plus the per-cycle outcomes.
pub fn encode_traced(
    signal: &UniformSignal,
    cfg: &DpsConfig,
) -> Result<(EventStream, OpCounts, Vec<StepOutcome>)> {
    if signal.is_empty() {
        return Err(Error::EmptySignal);
    }
    let mut enc = Encoder::new(*cfg, signal.fs_hz());
    let trace = signal.samples().iter().map(|&v| enc.push(v)).collect();
    let (stream, ops) = enc.finish()?;
    Ok((stream, ops, trace))
}
