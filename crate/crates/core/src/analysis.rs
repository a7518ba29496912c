//! End-to-end evaluations behind the command-line tool: single runs, delta
//! sweeps and side-by-side sampler comparisons.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{lc_encode, nyquist_encode, LcConfig};
use crate::dps::{encode, DpsConfig};
use crate::error::{Error, Result};
use crate::events::EventStream;
use crate::metrics::{
    compression_factor, energy_estimate, power_saving_factor, EnergyBreakdown, EnergyModel,
    OpCounts,
};
use crate::quantizer::AdcConfig;
use crate::reconstruct::{reconstruct_stream, rms_error};
use crate::signal::UniformSignal;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub bits: u32,
    pub v_min: f64,
    pub v_max: f64,
    pub lsb_volts: f64,
    pub fs_hz: f64,
    pub delta_volts: f64,
    pub delta_code: u32,
    pub timestamp_bits: u32,
    pub emit_startup_pair: bool,
}

impl ConfigEcho {
    pub fn new(cfg: &DpsConfig, fs_hz: f64) -> Self {
        let adc = cfg.adc();
        Self {
            bits: adc.bits(),
            v_min: adc.v_min(),
            v_max: adc.v_max(),
            lsb_volts: adc.lsb(),
            fs_hz,
            delta_volts: cfg.delta_volts(),
            delta_code: cfg.delta_code(),
            timestamp_bits: cfg.timestamp_bits(),
            emit_startup_pair: cfg.emit_startup_pair(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCountPair {
    pub dps: OpCounts,
    pub nyquist: OpCounts,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub model: EnergyModel,
    pub dps: EnergyBreakdown,
    pub nyquist: EnergyBreakdown,
}

/// Everything one encode/decode run measures. Key names are part of the
/// tool's output contract.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: ConfigEcho,
    pub n_samples: u64,
    pub n_events: u64,
    /// `None` when the stream holds no events.
    pub compression_factor: Option<f64>,
    pub rms_error_volts: f64,
    pub op_counts: OpCountPair,
    pub energy: EnergyReport,
    /// `None` when the Nyquist reference costs nothing under the model.
    pub power_saving_factor: Option<f64>,
    /// Whether re-encoding the input reproduces the stream being evaluated.
    pub stream_matches_input: bool,
}

/// Scores `stream` against the trace it claims to encode.
///
/// DPS operation counts are not stored in event files, so they come from
/// re-encoding `original` with the stream's configuration.
pub fn evaluate(
    original: &UniformSignal,
    stream: &EventStream,
    model: &EnergyModel,
) -> Result<RunReport> {
    let n = original.len() as u64;
    if n != stream.total_samples() {
        return Err(Error::LengthMismatch {
            original: original.len(),
            other: stream.total_samples() as usize,
        });
    }
    let cfg = stream.config();
    let recon = reconstruct_stream(stream)?;
    let rms = rms_error(original, &recon)?;
    let (reencoded, dps_ops) = encode(original, cfg)?;
    let (_, nyq_ops) = nyquist_encode(original, cfg.adc())?;
    let n_events = stream.len() as u64;
    let cf = match compression_factor(n, cfg.adc().bits(), n_events, cfg.event_bits()) {
        Ok(cf) => Some(cf),
        Err(Error::ZeroEvents) => None,
        Err(e) => return Err(e),
    };
    let dps_energy = energy_estimate(&dps_ops, model);
    let nyq_energy = energy_estimate(&nyq_ops, model);
    Ok(RunReport {
        config: ConfigEcho::new(cfg, stream.fs_hz()),
        n_samples: n,
        n_events,
        compression_factor: cf,
        rms_error_volts: rms,
        op_counts: OpCountPair {
            dps: dps_ops,
            nyquist: nyq_ops,
        },
        energy: EnergyReport {
            model: *model,
            dps: dps_energy,
            nyquist: nyq_energy,
        },
        power_saving_factor: power_saving_factor(dps_energy.total, nyq_energy.total).ok(),
        stream_matches_input: reencoded.events() == stream.events(),
    })
}

/// Encodes `signal` and evaluates the result.
pub fn run(
    signal: &UniformSignal,
    cfg: &DpsConfig,
    model: &EnergyModel,
) -> Result<(EventStream, RunReport)> {
    let (stream, _) = encode(signal, cfg)?;
    let report = evaluate(signal, &stream, model)?;
    Ok((stream, report))
}

/// One point of a delta sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub delta_mv: f64,
    pub cf: f64,
    pub rms_mv: f64,
    pub n_events: u64,
}

pub const SWEEP_CSV_HEADER: &str = "delta_mv,cf,rms_mv,n_events";

impl SweepRow {
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{}",
            self.delta_mv, self.cf, self.rms_mv, self.n_events
        )
    }
}

/// Runs the encoder once per delta. Rows come back in input order;
/// duplicates are kept.
pub fn sweep(
    signal: &UniformSignal,
    adc: &AdcConfig,
    timestamp_bits: u32,
    deltas_mv: &[f64],
) -> Result<Vec<SweepRow>> {
    if deltas_mv.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "a sweep needs at least two deltas, got {}",
            deltas_mv.len()
        )));
    }
    let configs = deltas_mv
        .iter()
        .map(|&mv| DpsConfig::new(*adc, mv * 1e-3, timestamp_bits))
        .collect::<Result<Vec<_>>>()?;
    configs
        .par_iter()
        .zip(deltas_mv.par_iter())
        .map(|(cfg, &delta_mv)| {
            let (stream, _) = encode(signal, cfg)?;
            let recon = reconstruct_stream(&stream)?;
            let n_events = stream.len() as u64;
            Ok(SweepRow {
                delta_mv,
                cf: compression_factor(
                    signal.len() as u64,
                    adc.bits(),
                    n_events,
                    cfg.event_bits(),
                )?,
                rms_mv: rms_error(signal, &recon)? * 1e3,
                n_events,
            })
        })
        .collect()
}

pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv_line());
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompareOps {
    pub dps: OpCounts,
    pub lc: OpCounts,
    pub nyquist: OpCounts,
}

/// Event counts of the three samplers on one input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub delta_volts: f64,
    pub lc_spacing_volts: f64,
    pub dps_events: u64,
    pub lc_events: u64,
    pub nyquist_samples: u64,
    pub op_counts: CompareOps,
}

pub fn compare(signal: &UniformSignal, dps: &DpsConfig, lc: &LcConfig) -> Result<CompareReport> {
    let (stream, dps_ops) = encode(signal, dps)?;
    let (lc_events, lc_ops) = lc_encode(signal, lc)?;
    let (codes, nyq_ops) = nyquist_encode(signal, dps.adc())?;
    Ok(CompareReport {
        delta_volts: dps.delta_volts(),
        lc_spacing_volts: lc.level_spacing_volts(),
        dps_events: stream.len() as u64,
        lc_events: lc_events.len() as u64,
        nyquist_samples: codes.len() as u64,
        op_counts: CompareOps {
            dps: dps_ops,
            lc: lc_ops,
            nyquist: nyq_ops,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::gen_sine;

    fn chip(delta: f64) -> DpsConfig {
        DpsConfig::new(AdcConfig::chip_default(), delta, 10).unwrap()
    }

    #[test]
    fn dc_report() {
        let dc = gen_sine(1.0, 0.0, 0.9, 1000.0, 1.0).unwrap();
        let (_, report) = run(&dc, &chip(0.01), &EnergyModel::default()).unwrap();
        assert_eq!(report.n_events, 2);
        assert_eq!(report.compression_factor, Some(250.0));
        assert!(report.rms_error_volts <= 0.5 * AdcConfig::chip_default().lsb());
        assert!(report.stream_matches_input);
        assert!(report.power_saving_factor.unwrap() > 0.0);
    }

    #[test]
    fn evaluate_rejects_length_mismatch() {
        let dc = gen_sine(1.0, 0.0, 0.9, 1000.0, 1.0).unwrap();
        let (stream, _) = encode(&dc, &chip(0.01)).unwrap();
        let short = gen_sine(1.0, 0.0, 0.9, 1000.0, 0.5).unwrap();
        let err = evaluate(&short, &stream, &EnergyModel::default()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("500") && msg.contains("1000"), "{msg}");
    }

    #[test]
    fn every_sample_emitted_gives_half() {
        // Alternating full-scale swings defeat every prediction.
        let samples: Vec<f64> = (0..1000)
            .map(|i| if (i / 2) % 2 == 0 { 0.1 } else { 1.7 })
            .collect();
        let sig = UniformSignal::new(1000.0, samples).unwrap();
        let cfg = chip(0.01);
        let (stream, _) = encode(&sig, &cfg).unwrap();
        let n_events = stream.len() as u64;
        let cf = compression_factor(1000, 10, n_events, 20).unwrap();
        assert!(cf >= 0.5);
        assert_eq!(compression_factor(1000, 10, 1000, 20).unwrap(), 0.5);
    }

    #[test]
    fn sweep_keeps_order_and_duplicates() {
        let s = gen_sine(10.0, 0.3, 0.9, 1000.0, 1.0).unwrap();
        let adc = AdcConfig::chip_default();
        let rows = sweep(&s, &adc, 10, &[20.0, 5.0, 5.0, 10.0]).unwrap();
        assert_eq!(
            rows.iter().map(|r| r.delta_mv).collect::<Vec<_>>(),
            vec![20.0, 5.0, 5.0, 10.0]
        );
        assert_eq!(rows[1], rows[2]);
        assert!(sweep(&s, &adc, 10, &[]).is_err());
        assert!(sweep(&s, &adc, 10, &[5.0]).is_err());
    }

    #[test]
    fn sweep_csv_layout() {
        let rows = [SweepRow {
            delta_mv: 10.0,
            cf: 6.5,
            rms_mv: 1.25,
            n_events: 77,
        }];
        assert_eq!(
            sweep_to_csv(&rows),
            "delta_mv,cf,rms_mv,n_events\n10,6.5,1.25,77\n"
        );
    }

    #[test]
    fn dc_sweep_is_flat() {
        let dc = gen_sine(1.0, 0.0, 0.9, 1000.0, 1.0).unwrap();
        let rows = sweep(&dc, &AdcConfig::chip_default(), 10, &[2.0, 5.0, 10.0, 20.0]).unwrap();
        assert!(rows.iter().all(|r| r.cf == rows[0].cf && r.n_events == 2));
    }

    #[test]
    fn dc_compare() {
        let dc = gen_sine(1.0, 0.0, 0.9, 1000.0, 1.0).unwrap();
        let adc = AdcConfig::chip_default();
        let r = compare(&dc, &chip(0.01), &LcConfig::new(adc, 0.01).unwrap()).unwrap();
        assert_eq!((r.dps_events, r.lc_events, r.nyquist_samples), (2, 0, 1000));
    }
}
