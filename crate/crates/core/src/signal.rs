//! Uniformly sampled traces: test waveform generators and CSV ingestion.

use std::f64::consts::PI;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};

/// A uniformly sampled analog trace. Sample `i` sits at time `i / fs_hz`.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformSignal {
    fs_hz: f64,
    samples: Vec<f64>,
}

impl UniformSignal {
    pub fn new(fs_hz: f64, samples: Vec<f64>) -> Result<Self> {
        check_rate(fs_hz)?;
        Ok(Self { fs_hz, samples })
    }

    pub fn fs_hz(&self) -> f64 {
        self.fs_hz
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Time of sample `index` in seconds.
    pub fn time_of(&self, index: usize) -> f64 {
        index as f64 / self.fs_hz
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.fs_hz
    }

    /// Writes the trace as a two-column `t,v` CSV with a header row.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::with_capacity(self.samples.len() * 24 + 4);
        out.push_str("t,v\n");
        for (i, v) in self.samples.iter().enumerate() {
            out.push_str(&format!("{},{}\n", self.time_of(i), v));
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_csv_string()).map_err(|e| Error::io(path, e))
    }
}

fn check_rate(fs_hz: f64) -> Result<()> {
    if fs_hz.is_finite() && fs_hz > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "sample rate must be positive, got {fs_hz}"
        )))
    }
}

fn sample_count(fs_hz: f64, duration_s: f64) -> Result<usize> {
    check_rate(fs_hz)?;
    if !(duration_s.is_finite() && duration_s > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "duration must be positive, got {duration_s}"
        )));
    }
    Ok((duration_s * fs_hz).round() as usize)
}

fn check_tone(freq_hz: f64, fs_hz: f64) -> Result<()> {
    if !(freq_hz.is_finite() && freq_hz >= 0.0 && freq_hz < fs_hz / 2.0) {
        return Err(Error::InvalidArgument(format!(
            "frequency {freq_hz} Hz must lie in [0, fs/2) for fs = {fs_hz} Hz"
        )));
    }
    Ok(())
}

/// `offset + (amplitude_vpp / 2) * sin(2*pi*freq_hz*i / fs_hz)`.
pub fn gen_sine(
    freq_hz: f64,
    amplitude_vpp: f64,
    offset: f64,
    fs_hz: f64,
    duration_s: f64,
) -> Result<UniformSignal> {
    let n = sample_count(fs_hz, duration_s)?;
    check_tone(freq_hz, fs_hz)?;
    let half = amplitude_vpp / 2.0;
    let samples = (0..n)
        .map(|i| offset + half * (2.0 * PI * freq_hz * i as f64 / fs_hz).sin())
        .collect();
    UniformSignal::new(fs_hz, samples)
}

/// Square wave (high for the first half period) smoothed by a single-pole
/// IIR low-pass `y[i] = y[i-1] + alpha * (x[i] - y[i-1])`,
/// `alpha = 1 - exp(-2*pi*cutoff_hz / fs_hz)`. The filter state starts at
/// the first square-wave value, so there is no start-up transient.
pub fn gen_lpf_square(
    freq_hz: f64,
    amplitude_vpp: f64,
    offset: f64,
    cutoff_hz: f64,
    fs_hz: f64,
    duration_s: f64,
) -> Result<UniformSignal> {
    let n = sample_count(fs_hz, duration_s)?;
    check_tone(freq_hz, fs_hz)?;
    if !(cutoff_hz.is_finite() && cutoff_hz > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "cutoff must be positive, got {cutoff_hz}"
        )));
    }
    let alpha = lpf_alpha(cutoff_hz, fs_hz);
    let half = amplitude_vpp / 2.0;
    let square = |i: usize| {
        let half_periods = (2.0 * freq_hz * i as f64 / fs_hz).floor() as u64;
        if half_periods % 2 == 0 {
            offset + half
        } else {
            offset - half
        }
    };
    let mut y = square(0);
    let samples = (0..n)
        .map(|i| {
            y += alpha * (square(i) - y);
            y
        })
        .collect();
    UniformSignal::new(fs_hz, samples)
}

/// Smoothing coefficient of the single-pole low-pass used by
/// [`gen_lpf_square`].
pub fn lpf_alpha(cutoff_hz: f64, fs_hz: f64) -> f64 {
    1.0 - (-2.0 * PI * cutoff_hz / fs_hz).exp()
}

/// Linear ramp from `v_start` at index 0 to `v_end` at the last index.
pub fn gen_ramp(v_start: f64, v_end: f64, fs_hz: f64, duration_s: f64) -> Result<UniformSignal> {
    let n = sample_count(fs_hz, duration_s)?;
    let denom = n.saturating_sub(1).max(1) as f64;
    let samples = (0..n)
        .map(|i| v_start + (v_end - v_start) * i as f64 / denom)
        .collect();
    UniformSignal::new(fs_hz, samples)
}

/// Relative tolerance on time steps of a two-column trace.
pub const TIME_STEP_TOLERANCE: f64 = 1e-6;

/// Reads a recorded trace from a CSV file.
///
/// One-column files hold bare voltages and need `fs_hz_override`. Two-column
/// files hold `time_s, volts` under a header row; the sample rate comes from
/// the median time step unless overridden. Row numbers in errors are 1-based
/// file lines.
pub fn load_signal_csv(
    path: impl AsRef<Path>,
    fs_hz_override: Option<f64>,
) -> Result<UniformSignal> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_signal_csv(file, fs_hz_override).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

/// Parses trace CSV text from any reader; see [`load_signal_csv`].
pub fn parse_signal_csv<R: Read>(reader: R, fs_hz_override: Option<f64>) -> Result<UniformSignal> {
    if let Some(fs) = fs_hz_override {
        check_rate(fs)?;
    }
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);

    let mut columns: Option<usize> = None;
    let mut times = Vec::new();
    let mut rows = Vec::new();
    let mut volts = Vec::new();
    let mut first = true;
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let row = e.position().map(|p| p.line()).unwrap_or(0);
            match e.into_kind() {
                csv::ErrorKind::Io(io) => Error::io("<csv>", io),
                other => Error::Csv {
                    row,
                    message: format!("{other:?}"),
                },
            }
        })?;
        let row = record.position().map(|p| p.line()).unwrap_or(0);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let width = record.len();
        if !(1..=2).contains(&width) {
            return Err(Error::Csv {
                row,
                message: format!("expected 1 or 2 columns, found {width}"),
            });
        }
        if first {
            first = false;
            if record.iter().any(|cell| cell.parse::<f64>().is_err()) {
                columns = Some(width);
                continue;
            }
        }
        match columns {
            None => columns = Some(width),
            Some(c) if c != width => {
                return Err(Error::Csv {
                    row,
                    message: format!("expected {c} columns, found {width}"),
                })
            }
            Some(_) => {}
        }
        let parse = |cell: &str| {
            cell.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::Csv {
                    row,
                    message: format!("non-numeric cell `{cell}`"),
                })
        };
        if width == 2 {
            times.push(parse(&record[0])?);
            volts.push(parse(&record[1])?);
            rows.push(row);
        } else {
            volts.push(parse(&record[0])?);
        }
    }

    if volts.is_empty() {
        return Err(Error::EmptySignal);
    }
    let fs_hz = match columns {
        Some(2) => {
            let derived = rate_from_times(&times, &rows)?;
            fs_hz_override.unwrap_or(derived)
        }
        _ => fs_hz_override.ok_or_else(|| {
            Error::InvalidArgument("one-column input requires a sample rate override".into())
        })?,
    };
    UniformSignal::new(fs_hz, volts)
}

fn rate_from_times(times: &[f64], rows: &[u64]) -> Result<f64> {
    if times.len() < 2 {
        return Err(Error::InvalidArgument(
            "two-column input needs at least two rows to derive a sample rate".into(),
        ));
    }
    let steps: Vec<f64> = times.windows(2).map(|w| w[1] - w[0]).collect();
    let mut sorted = steps.clone();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    let median = if sorted.len() % 2 == 0 {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    } else {
        sorted[mid]
    };
    for (k, &step) in steps.iter().enumerate() {
        if median.is_nan()
            || median <= 0.0
            || ((step - median) / median).abs() > TIME_STEP_TOLERANCE
        {
            return Err(Error::NonUniformTime {
                row: rows[k + 1],
                step,
                median,
            });
        }
    }
    Ok(1.0 / median)
}
