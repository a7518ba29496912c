//! Compression factor and the operation-count energy model.
//!
//! Energies here are abstract units. Each converter block (window
//! comparator, SAR bit trial, DAC update, digital logic cycle) gets a weight,
//! and a run's energy is the dot product of its operation counts with those
//! weights.

use std::collections::BTreeMap;
use std::iter::Sum;
use std::ops::{Add, AddAssign};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kv;

/// Per-block activity tallies for one run (or one step).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCounts {
    /// Comparator decisions against the tracking window (or LC levels).
    pub window_comparisons: u64,
    /// Comparator decisions made inside SAR conversions.
    pub sar_bit_comparisons: u64,
    pub dac_settings: u64,
    pub digital_cycles: u64,
    pub sar_conversions: u64,
}

impl OpCounts {
    /// All comparator activations, window and SAR alike.
    pub fn comparator_ops(&self) -> u64 {
        self.window_comparisons + self.sar_bit_comparisons
    }
}

impl Add for OpCounts {
    type Output = OpCounts;

    fn add(mut self, rhs: OpCounts) -> OpCounts {
        self += rhs;
        self
    }
}

impl AddAssign for OpCounts {
    fn add_assign(&mut self, rhs: OpCounts) {
        self.window_comparisons += rhs.window_comparisons;
        self.sar_bit_comparisons += rhs.sar_bit_comparisons;
        self.dac_settings += rhs.dac_settings;
        self.digital_cycles += rhs.digital_cycles;
        self.sar_conversions += rhs.sar_conversions;
    }
}

impl Sum for OpCounts {
    fn sum<I: Iterator<Item = OpCounts>>(iter: I) -> OpCounts {
        iter.fold(OpCounts::default(), Add::add)
    }
}

/// Energy per operation, in arbitrary units.
///
/// The default digital-cycle weight covers the always-on prediction logic,
/// clock tree and counter, which run on every sample whether or not the
/// converter fires.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyModel {
    pub e_window_comparison: f64,
    pub e_sar_bit: f64,
    pub e_dac_setting: f64,
    pub e_digital_cycle: f64,
}

impl Default for EnergyModel {
    fn default() -> Self {
        Self {
            e_window_comparison: 1.0,
            e_sar_bit: 1.0,
            e_dac_setting: 0.5,
            e_digital_cycle: 2.7,
        }
    }
}

impl EnergyModel {
    pub const KEYS: [&'static str; 4] = [
        "e_window_comparison",
        "e_sar_bit",
        "e_dac_setting",
        "e_digital_cycle",
    ];

    pub fn new(
        e_window_comparison: f64,
        e_sar_bit: f64,
        e_dac_setting: f64,
        e_digital_cycle: f64,
    ) -> Result<Self> {
        let model = Self {
            e_window_comparison,
            e_sar_bit,
            e_dac_setting,
            e_digital_cycle,
        };
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<()> {
        for (key, value) in Self::KEYS.iter().zip(self.weights()) {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "{key} must be a non-negative number, got {value}"
                )));
            }
        }
        Ok(())
    }

    fn weights(&self) -> [f64; 4] {
        [
            self.e_window_comparison,
            self.e_sar_bit,
            self.e_dac_setting,
            self.e_digital_cycle,
        ]
    }

    /// Overrides the defaults with any energy keys present in `map`; other
    /// keys are ignored.
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        let mut model = Self::default();
        for (key, slot) in Self::KEYS.iter().zip([
            &mut model.e_window_comparison,
            &mut model.e_sar_bit,
            &mut model.e_dac_setting,
            &mut model.e_digital_cycle,
        ]) {
            if let Some(raw) = map.get(*key) {
                *slot = raw
                    .parse()
                    .map_err(|_| Error::InvalidConfig(format!("{key}: `{raw}` is not a number")))?;
            }
        }
        model.validate()?;
        Ok(model)
    }

    /// Parses `key=value` lines.
    pub fn from_kv_str(text: &str) -> Result<Self> {
        Self::from_map(&kv::parse(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_kv_str(&text)
    }
}

/// Energy split by block. `total` is the sum of the four categories.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub window_comparison: f64,
    pub sar_bit: f64,
    pub dac_setting: f64,
    pub digital_cycle: f64,
    pub total: f64,
}

pub fn energy_estimate(ops: &OpCounts, model: &EnergyModel) -> EnergyBreakdown {
    let window_comparison = ops.window_comparisons as f64 * model.e_window_comparison;
    let sar_bit = ops.sar_bit_comparisons as f64 * model.e_sar_bit;
    let dac_setting = ops.dac_settings as f64 * model.e_dac_setting;
    let digital_cycle = ops.digital_cycles as f64 * model.e_digital_cycle;
    EnergyBreakdown {
        window_comparison,
        sar_bit,
        dac_setting,
        digital_cycle,
        total: window_comparison + sar_bit + dac_setting + digital_cycle,
    }
}

/// Ratio of Nyquist bit volume to event bit volume.
pub fn compression_factor(
    n_nyquist_samples: u64,
    sample_bits: u32,
    n_events: u64,
    event_bits: u32,
) -> Result<f64> {
    if n_events == 0 {
        return Err(Error::ZeroEvents);
    }
    if n_nyquist_samples == 0 || sample_bits == 0 || event_bits == 0 {
        return Err(Error::InvalidArgument(
            "compression factor needs positive sample count and bit widths".into(),
        ));
    }
    Ok((n_nyquist_samples as f64 * sample_bits as f64) / (n_events as f64 * event_bits as f64))
}

/// `1 - e_dps / e_reference`; negative when DPS spends more.
pub fn power_saving_factor(e_dps: f64, e_reference: f64) -> Result<f64> {
    if e_reference.is_nan() || e_reference <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "reference energy must be positive, got {e_reference}"
        )));
    }
    Ok(1.0 - e_dps / e_reference)
}
