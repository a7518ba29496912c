//! Event streams and their on-disk form.
//!
//! An event file is plain text with LF line endings:
//!
//! ```text
//! #version=1
//! #bits=10
//! #v_min=0
//! #v_max=1.8
//! #fs_hz=1000
//! #delta_volts=0.01
//! #timestamp_bits=10
//! #total_samples=1000
//! dt,code
//! 0,512
//! 1,512
//! ```
//!
//! A stream encoded without the start-up pair additionally carries
//! `#emit_startup_pair=false` after `total_samples`.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dps::DpsConfig;
use crate::error::{Error, Result};
use crate::kv;
use crate::quantizer::{AdcConfig, Code};

pub const FORMAT_VERSION: &str = "1";

/// One emitted conversion: cycles since the previous event, and its code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventRecord {
    pub dt_cycles: u64,
    pub code: Code,
}

/// The codec's compressed form of a trace.
#[derive(Debug, Clone, PartialEq)]
pub struct EventStream {
    config: DpsConfig,
    fs_hz: f64,
    events: Vec<EventRecord>,
    total_samples: u64,
}

impl EventStream {
    pub fn new(
        config: DpsConfig,
        fs_hz: f64,
        events: Vec<EventRecord>,
        total_samples: u64,
    ) -> Result<Self> {
        if !(fs_hz.is_finite() && fs_hz > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "sample rate must be positive, got {fs_hz}"
            )));
        }
        let stream = Self {
            config,
            fs_hz,
            events,
            total_samples,
        };
        stream.validate()?;
        Ok(stream)
    }

    fn validate(&self) -> Result<()> {
        let max_dt = self.config.max_dt();
        let max_code = self.config.adc().max_code();
        let mut elapsed: u64 = 0;
        for (j, ev) in self.events.iter().enumerate() {
            if ev.dt_cycles > max_dt {
                return Err(Error::CorruptStream(format!(
                    "event {j}: dt {} exceeds {max_dt}",
                    ev.dt_cycles
                )));
            }
            if ev.code > max_code {
                return Err(Error::CorruptStream(format!(
                    "event {j}: code {} exceeds {max_code}",
                    ev.code
                )));
            }
            if j > 0 && ev.dt_cycles == 0 {
                return Err(Error::CorruptStream(format!(
                    "event {j}: zero time step after the first event"
                )));
            }
            elapsed += ev.dt_cycles;
            if elapsed >= self.total_samples {
                return Err(Error::CorruptStream(format!(
                    "event {j} at index {elapsed} lies beyond {} samples",
                    self.total_samples
                )));
            }
        }
        Ok(())
    }

    pub fn config(&self) -> &DpsConfig {
        &self.config
    }

    pub fn fs_hz(&self) -> f64 {
        self.fs_hz
    }

    pub fn events(&self) -> &[EventRecord] {
        &self.events
    }

    pub fn total_samples(&self) -> u64 {
        self.total_samples
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Serializes to the event file format.
    pub fn to_file_string(&self) -> String {
        let adc = self.config.adc();
        let mut out = String::with_capacity(160 + self.events.len() * 10);
        let _ = writeln!(out, "#version={FORMAT_VERSION}");
        let _ = writeln!(out, "#bits={}", adc.bits());
        let _ = writeln!(out, "#v_min={}", adc.v_min());
        let _ = writeln!(out, "#v_max={}", adc.v_max());
        let _ = writeln!(out, "#fs_hz={}", self.fs_hz);
        let _ = writeln!(out, "#delta_volts={}", self.config.delta_volts());
        let _ = writeln!(out, "#timestamp_bits={}", self.config.timestamp_bits());
        let _ = writeln!(out, "#total_samples={}", self.total_samples);
        if !self.config.emit_startup_pair() {
            out.push_str("#emit_startup_pair=false\n");
        }
        out.push_str("dt,code\n");
        for ev in &self.events {
            let _ = writeln!(out, "{},{}", ev.dt_cycles, ev.code);
        }
        out
    }

    /// Parses the event file format.
    pub fn from_file_str(text: &str) -> Result<Self> {
        let mut header = Header::default();
        let mut lines = text.split('\n').enumerate().map(|(i, l)| (i + 1, l));
        let mut saw_columns = false;
        for (n, line) in lines.by_ref() {
            let line = line.strip_suffix('\r').unwrap_or(line);
            if let Some(rest) = line.strip_prefix('#') {
                let (key, value) = kv::split_line(rest).ok_or_else(|| Error::EventFormat {
                    line: n,
                    message: format!("malformed header `{line}`"),
                })?;
                header.set(n, key, value)?;
            } else if line.trim() == "dt,code" {
                saw_columns = true;
                break;
            } else {
                return Err(Error::EventFormat {
                    line: n,
                    message: format!("expected header or `dt,code`, got `{line}`"),
                });
            }
        }
        let (config, fs_hz, total_samples) = header.finish()?;
        if !saw_columns {
            return Err(Error::EventFormat {
                line: 0,
                message: "missing `dt,code` column row".into(),
            });
        }

        let max_dt = config.max_dt();
        let max_code = config.adc().max_code();
        let mut events = Vec::new();
        for (n, line) in lines {
            let line = line.strip_suffix('\r').unwrap_or(line);
            if line.trim().is_empty() {
                continue;
            }
            let bad = |message: String| Error::EventFormat { line: n, message };
            let (dt, code) = line
                .split_once(',')
                .ok_or_else(|| bad(format!("expected `dt,code`, got `{line}`")))?;
            let dt_cycles: u64 = dt
                .trim()
                .parse()
                .map_err(|_| bad(format!("dt `{dt}` is not a non-negative integer")))?;
            let code_val: u64 = code
                .trim()
                .parse()
                .map_err(|_| bad(format!("code `{code}` is not a non-negative integer")))?;
            if dt_cycles > max_dt {
                return Err(bad(format!("dt out of range: {dt_cycles} > {max_dt}")));
            }
            if code_val > max_code as u64 {
                return Err(bad(format!("code out of range: {code_val} > {max_code}")));
            }
            events.push(EventRecord {
                dt_cycles,
                code: code_val as Code,
            });
        }
        Self::new(config, fs_hz, events, total_samples)
    }
}

#[derive(Default)]
struct Header {
    version: Option<String>,
    bits: Option<u32>,
    v_min: Option<f64>,
    v_max: Option<f64>,
    fs_hz: Option<f64>,
    delta_volts: Option<f64>,
    timestamp_bits: Option<u32>,
    total_samples: Option<u64>,
    emit_startup_pair: Option<bool>,
}

impl Header {
    fn set(&mut self, line: usize, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T> {
            value.parse().map_err(|_| Error::EventFormat {
                line,
                message: format!("header `{key}` has invalid value `{value}`"),
            })
        }
        match key {
            "version" => self.version = Some(value.to_string()),
            "bits" => self.bits = Some(num(line, key, value)?),
            "v_min" => self.v_min = Some(num(line, key, value)?),
            "v_max" => self.v_max = Some(num(line, key, value)?),
            "fs_hz" => self.fs_hz = Some(num(line, key, value)?),
            "delta_volts" => self.delta_volts = Some(num(line, key, value)?),
            "timestamp_bits" => self.timestamp_bits = Some(num(line, key, value)?),
            "total_samples" => self.total_samples = Some(num(line, key, value)?),
            "emit_startup_pair" => self.emit_startup_pair = Some(num(line, key, value)?),
            _ => {
                return Err(Error::EventFormat {
                    line,
                    message: format!("unknown header `{key}`"),
                })
            }
        }
        Ok(())
    }

    fn finish(self) -> Result<(DpsConfig, f64, u64)> {
        let version = self.version.ok_or(Error::MissingHeader("version"))?;
        if version != FORMAT_VERSION {
            return Err(Error::UnknownVersion(version));
        }
        let adc = AdcConfig::new(
            self.bits.ok_or(Error::MissingHeader("bits"))?,
            self.v_min.ok_or(Error::MissingHeader("v_min"))?,
            self.v_max.ok_or(Error::MissingHeader("v_max"))?,
        )?;
        let fs_hz = self.fs_hz.ok_or(Error::MissingHeader("fs_hz"))?;
        let config = DpsConfig::new(
            adc,
            self.delta_volts
                .ok_or(Error::MissingHeader("delta_volts"))?,
            self.timestamp_bits
                .ok_or(Error::MissingHeader("timestamp_bits"))?,
        )?
        .with_startup_pair(self.emit_startup_pair.unwrap_or(true));
        let total = self
            .total_samples
            .ok_or(Error::MissingHeader("total_samples"))?;
        Ok((config, fs_hz, total))
    }
}

pub fn write_events(path: impl AsRef<Path>, stream: &EventStream) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, stream.to_file_string()).map_err(|e| Error::io(path, e))
}

pub fn read_events(path: impl AsRef<Path>) -> Result<EventStream> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    EventStream::from_file_str(&text)
}
