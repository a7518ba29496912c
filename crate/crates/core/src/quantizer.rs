//! Ideal behavioral ADC/DAC pair.
//!
//! The converter is mid-tread with rail clamping: a voltage maps to the
//! nearest code center, and anything beyond the rails saturates at code 0 or
//! `2^bits - 1`. The same transfer function backs the DPS encoder, the
//! Nyquist SAR baseline and the level-crossing sampler.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Digital amplitude code.
pub type Code = u32;

/// Resolution and full-scale range of a converter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdcConfig {
    bits: u32,
    v_min: f64,
    v_max: f64,
}

impl AdcConfig {
    pub const MIN_BITS: u32 = 2;
    pub const MAX_BITS: u32 = 24;

    pub fn new(bits: u32, v_min: f64, v_max: f64) -> Result<Self> {
        if !(Self::MIN_BITS..=Self::MAX_BITS).contains(&bits) {
            return Err(Error::InvalidConfig(format!(
                "bits must be in {}..={}, got {bits}",
                Self::MIN_BITS,
                Self::MAX_BITS
            )));
        }
        if !v_min.is_finite() || !v_max.is_finite() || v_max <= v_min {
            return Err(Error::InvalidConfig(format!(
                "voltage range requires finite v_max > v_min, got [{v_min}, {v_max}]"
            )));
        }
        Ok(Self { bits, v_min, v_max })
    }

    /// 10-bit, 0 to 1.8 V: the designed chip.
    pub fn chip_default() -> Self {
        Self {
            bits: 10,
            v_min: 0.0,
            v_max: 1.8,
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn v_min(&self) -> f64 {
        self.v_min
    }

    pub fn v_max(&self) -> f64 {
        self.v_max
    }

    /// Voltage of one code step, `(v_max - v_min) / 2^bits`.
    pub fn lsb(&self) -> f64 {
        (self.v_max - self.v_min) / self.levels() as f64
    }

    /// Number of codes, `2^bits`.
    pub fn levels(&self) -> u64 {
        1u64 << self.bits
    }

    pub fn max_code(&self) -> Code {
        (self.levels() - 1) as Code
    }

    /// Converts a voltage to the nearest code, saturating at the rails.
    ///
    /// Ties round away from zero. NaN maps to code 0.
    pub fn quantize(&self, v: f64) -> Code {
        let x = ((v - self.v_min) / self.lsb()).round();
        if x.is_nan() || x <= 0.0 {
            0
        } else if x >= self.max_code() as f64 {
            self.max_code()
        } else {
            x as Code
        }
    }

    /// Voltage at the center of `code`.
    pub fn dequantize(&self, code: Code) -> Result<f64> {
        if code > self.max_code() {
            return Err(Error::InvalidArgument(format!(
                "code {code} out of range for {}-bit converter",
                self.bits
            )));
        }
        Ok(self.dequantize_unchecked(code))
    }

    /// Same as [`dequantize`](Self::dequantize) for codes the caller has
    /// already range-checked.
    pub(crate) fn dequantize_unchecked(&self, code: Code) -> f64 {
        self.v_min + code as f64 * self.lsb()
    }

    /// Clamps a signed code value into `[0, max_code]`.
    pub fn clamp_code(&self, raw: i64) -> Code {
        raw.clamp(0, self.max_code() as i64) as Code
    }

    /// Comparator decisions one SAR conversion takes: one per bit trial.
    pub fn sar_comparisons(&self) -> u64 {
        self.bits as u64
    }
}

impl Default for AdcConfig {
    fn default() -> Self {
        Self::chip_default()
    }
}
