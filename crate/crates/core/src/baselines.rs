//! Reference samplers: a Nyquist-rate SAR converter and a clocked
//! level-crossing sampler.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::OpCounts;
use crate::quantizer::{AdcConfig, Code};
use crate::signal::UniformSignal;

/// Converts every sample.
pub fn nyquist_encode(signal: &UniformSignal, cfg: &AdcConfig) -> Result<(Vec<Code>, OpCounts)> {
    if signal.is_empty() {
        return Err(Error::EmptySignal);
    }
    let codes: Vec<Code> = signal.samples().iter().map(|&v| cfg.quantize(v)).collect();
    let n = codes.len() as u64;
    let ops = OpCounts {
        sar_conversions: n,
        sar_bit_comparisons: n * cfg.sar_comparisons(),
        ..OpCounts::default()
    };
    Ok((codes, ops))
}

/// Uniform level grid `v_min + k * spacing` inside the converter range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LcConfig {
    adc: AdcConfig,
    level_spacing_volts: f64,
}

impl LcConfig {
    pub fn new(adc: AdcConfig, level_spacing_volts: f64) -> Result<Self> {
        if !(level_spacing_volts.is_finite() && level_spacing_volts >= adc.lsb()) {
            return Err(Error::InvalidConfig(format!(
                "level spacing {level_spacing_volts} V must be at least one LSB ({} V)",
                adc.lsb()
            )));
        }
        Ok(Self {
            adc,
            level_spacing_volts,
        })
    }

    pub fn adc(&self) -> &AdcConfig {
        &self.adc
    }

    pub fn level_spacing_volts(&self) -> f64 {
        self.level_spacing_volts
    }

    /// Highest level index still inside the range.
    pub fn top_level(&self) -> i64 {
        ((self.adc.v_max() - self.adc.v_min()) / self.level_spacing_volts).floor() as i64
    }

    pub fn level(&self, k: i64) -> f64 {
        self.adc.v_min() + k as f64 * self.level_spacing_volts
    }

    /// Index of the highest level at or below `v`, limited to the grid.
    pub fn level_index(&self, v: f64) -> i64 {
        let k = ((v - self.adc.v_min()) / self.level_spacing_volts).floor();
        if k.is_nan() {
            return 0;
        }
        let mut k = (k as i64).clamp(0, self.top_level());
        // Division can land one off next to a level.
        while k < self.top_level() && v >= self.level(k + 1) {
            k += 1;
        }
        while k > 0 && v < self.level(k) {
            k -= 1;
        }
        k
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    pub fn sign(self) -> i64 {
        match self {
            Direction::Up => 1,
            Direction::Down => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LcEvent {
    pub t_index: u64,
    pub direction: Direction,
    /// The level crossed.
    pub level_index: i64,
}

/// Clocked level-crossing sampling. The starting level comes from the first
/// sample; a sample that jumps several levels emits one event per level.
pub fn lc_encode(signal: &UniformSignal, cfg: &LcConfig) -> Result<(Vec<LcEvent>, OpCounts)> {
    let samples = signal.samples();
    let first = *samples.first().ok_or(Error::EmptySignal)?;
    let top = cfg.top_level();
    let mut k = cfg.level_index(first);
    let mut events = Vec::new();
    let mut ops = OpCounts {
        window_comparisons: 2 * samples.len() as u64,
        ..OpCounts::default()
    };
    for (i, &v) in samples.iter().enumerate() {
        let before = events.len();
        while k < top && v >= cfg.level(k + 1) {
            k += 1;
            events.push(LcEvent {
                t_index: i as u64,
                direction: Direction::Up,
                level_index: k,
            });
        }
        while k > 0 && v < cfg.level(k) {
            events.push(LcEvent {
                t_index: i as u64,
                direction: Direction::Down,
                level_index: k,
            });
            k -= 1;
        }
        let burst = (events.len() - before) as u64;
        ops.window_comparisons += burst.saturating_sub(1);
    }
    Ok((events, ops))
}

/// Rebuilds the staircase implied by `events`, starting from the level of
/// `first_sample`.
pub fn lc_staircase(cfg: &LcConfig, first_sample: f64, events: &[LcEvent], len: usize) -> Vec<f64> {
    let mut k = cfg.level_index(first_sample);
    let mut out = Vec::with_capacity(len);
    let mut pending = events.iter().peekable();
    for i in 0..len as u64 {
        while let Some(ev) = pending.next_if(|ev| ev.t_index == i) {
            k = match ev.direction {
                Direction::Up => ev.level_index,
                Direction::Down => ev.level_index - 1,
            };
        }
        out.push(cfg.level(k));
    }
    out
}
