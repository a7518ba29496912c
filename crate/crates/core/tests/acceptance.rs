//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use dpsadc::analysis::{run, sweep};
use dpsadc::baselines::{lc_encode, nyquist_encode, LcConfig};
use dpsadc::dps::{encode, encode_traced};
use dpsadc::events::{EventRecord, EventStream};
use dpsadc::fixtures;
use dpsadc::metrics::{compression_factor, EnergyModel};
use dpsadc::reconstruct::{decode_anchors, reconstruct_stream, rms_error};
use dpsadc::{AdcConfig, DpsConfig, UniformSignal};
use proptest::prelude::*;
use proptest::test_runner::{Config as PropConfig, TestRunner};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

fn chip() -> AdcConfig {
    AdcConfig::chip_default()
}

fn dps(delta_volts: f64) -> DpsConfig {
    DpsConfig::new(chip(), delta_volts, 10).expect("valid config")
}

fn named_fixtures() -> Vec<(&'static str, UniformSignal)> {
    vec![
        ("dc", fixtures::dc()),
        ("ramp", fixtures::code_ramp(&chip(), 100, 900)),
        ("sine_10hz", fixtures::sine_10hz()),
        ("sine_5hz_1vpp", fixtures::sine_5hz_1vpp()),
        ("lpf_square", fixtures::lpf_square()),
        ("ecg", fixtures::ecg_excerpt()),
    ]
}

/// Checks the library encoder against the plain-loop replay.
fn matches_replay(signal: &UniformSignal, cfg: &DpsConfig) -> Result<(), String> {
    let (stream, ops) = encode(signal, cfg).map_err(|e| e.to_string())?;
    let adc = cfg.adc();
    let replay = common::replay(
        signal.samples(),
        adc.bits(),
        adc.v_min(),
        adc.v_max(),
        cfg.delta_volts(),
        cfg.timestamp_bits(),
    );
    let anchors = decode_anchors(&stream).map_err(|e| e.to_string())?;
    let got: Vec<(u64, u32)> = anchors
        .iter()
        .zip(stream.events())
        .map(|(a, e)| (a.t_index, e.code))
        .collect();
    ensure!(
        got == replay.emitted,
        "events differ from replay: {} vs {}",
        got.len(),
        replay.emitted.len()
    );
    ensure!(
        ops.sar_conversions == replay.conversions,
        "conversions differ from replay"
    );
    Ok(())
}

/// 1. DC invariance.
fn dc_invariance() -> Outcome {
    let start = Instant::now();
    let signal = fixtures::dc();
    let cfg = dps(0.010);
    let (stream, report) =
        run(&signal, &cfg, &EnergyModel::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let half_lsb = 0.5 * chip().lsb();
    matches_replay(&signal, &cfg)?;
    ensure!(stream.len() == 2, "expected 2 events, got {}", stream.len());
    ensure!(
        report.rms_error_volts <= half_lsb,
        "rms {} > {}",
        report.rms_error_volts,
        half_lsb
    );
    ensure!(
        report.compression_factor == Some(250.0),
        "cf {:?}",
        report.compression_factor
    );
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!(
        "events=2 rms={:.4} mV (<= {:.4}) cf=250 in {elapsed:.1?}",
        report.rms_error_volts * 1e3,
        half_lsb * 1e3
    ))
}

/// 2. Exact-ramp invariance.
fn exact_ramp() -> Outcome {
    let adc = chip();
    let signal = fixtures::code_ramp(&adc, 100, 900);
    let cfg = dps(2.0 * adc.lsb());
    ensure!(cfg.delta_code() == 2, "delta_code {}", cfg.delta_code());
    let (stream, _) = encode(&signal, &cfg).map_err(|e| e.to_string())?;
    matches_replay(&signal, &cfg)?;
    ensure!(stream.len() == 2, "expected 2 events, got {}", stream.len());
    Ok(format!("{} samples, 2 events", signal.len()))
}

/// 3. Tracking-window guarantee.
fn tracking_window() -> Outcome {
    let adc = chip();
    let mut checked = 0u64;
    for (name, signal) in [
        ("ecg", fixtures::ecg_excerpt()),
        ("sine_10hz", fixtures::sine_10hz()),
    ] {
        for delta_mv in [2.0, 5.0, 10.0, 15.0, 20.0, 30.0] {
            let cfg = dps(delta_mv * 1e-3);
            let bound = (cfg.delta_code() as f64 + 1.0) * adc.lsb();
            let (_, _, trace) = encode_traced(&signal, &cfg).map_err(|e| e.to_string())?;
            for (i, (out, &v)) in trace.iter().zip(signal.samples()).enumerate() {
                if out.prediction_success == Some(true) {
                    let p = adc.dequantize(out.prediction.expect("track step")).unwrap();
                    ensure!(
                        (v - p).abs() < bound,
                        "{name} delta {delta_mv} mV index {i}: |{v} - {p}| >= {bound}"
                    );
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} successful predictions, 0 violations"))
}

/// 4. ECG compression at the reference scale.
fn ecg_compression() -> Outcome {
    let start = Instant::now();
    let signal = fixtures::ecg_excerpt();
    let cf_at = |delta: f64| -> Result<f64, String> {
        let cfg = dps(delta);
        let (stream, _) = encode(&signal, &cfg).map_err(|e| e.to_string())?;
        reconstruct_stream(&stream).map_err(|e| e.to_string())?;
        compression_factor(
            signal.len() as u64,
            10,
            stream.len() as u64,
            cfg.event_bits(),
        )
        .map_err(|e| e.to_string())
    };
    let cf10 = cf_at(0.010)?;
    let cf20 = cf_at(0.020)?;
    let elapsed = start.elapsed();
    ensure!(
        (4.0..=9.0).contains(&cf10),
        "cf(10 mV) = {cf10} outside [4, 9]"
    );
    ensure!(
        cf20 > cf10,
        "cf(20 mV) = {cf20} not above cf(10 mV) = {cf10}"
    );
    ensure!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    Ok(format!(
        "cf(10 mV)={cf10:.2} cf(20 mV)={cf20:.2} in {elapsed:.1?}"
    ))
}

/// Counts decreasing adjacent pairs and the largest relative drop.
fn violations(values: &[f64]) -> (usize, f64) {
    values.windows(2).fold((0, 0.0), |(n, worst), w| {
        if w[1] < w[0] {
            (n + 1, f64::max(worst, (w[0] - w[1]) / w[0]))
        } else {
            (n, worst)
        }
    })
}

/// 5. Sweep curve shapes.
fn sweep_shapes() -> Outcome {
    let deltas = [2.0, 5.0, 10.0, 15.0, 20.0, 30.0];
    let mut summary = Vec::new();
    let mut failures = Vec::new();
    for (name, signal) in [
        ("sine_10hz", fixtures::sine_10hz()),
        ("ecg", fixtures::ecg_excerpt()),
    ] {
        let rows = sweep(&signal, &chip(), 10, &deltas).map_err(|e| e.to_string())?;
        let cf: Vec<f64> = rows.iter().map(|r| r.cf).collect();
        let rms: Vec<f64> = rows.iter().map(|r| r.rms_mv).collect();
        for (metric, values) in [("cf", &cf), ("rms", &rms)] {
            let (n, worst) = violations(values);
            let ok = n == 0 || (n == 1 && worst <= 0.02);
            let curve: Vec<String> = values.iter().map(|v| format!("{v:.2}")).collect();
            let line = format!(
                "{name} {metric}=[{}] drops={n} worst={:.1}%",
                curve.join(","),
                worst * 100.0
            );
            if ok {
                summary.push(line);
            } else {
                failures.push(line);
            }
        }
    }
    ensure!(failures.is_empty(), "{}", failures.join("; "));
    Ok(summary.join("; "))
}

/// 6. Op-count identity.
fn op_count_identity() -> Outcome {
    let bits = chip().bits() as u64;
    let mut runs = 0;
    for (name, signal) in named_fixtures() {
        for delta_mv in [1.0, 10.0, 20.0] {
            let cfg = dps(delta_mv * 1e-3);
            let (_, ops, trace) = encode_traced(&signal, &cfg).map_err(|e| e.to_string())?;
            let track = trace
                .iter()
                .filter(|o| o.prediction_success.is_some())
                .count() as u64;
            let failures = trace
                .iter()
                .filter(|o| o.prediction_success == Some(false))
                .count() as u64;
            let acquires = trace.len() as u64 - track;
            ensure!(
                ops.comparator_ops() == 2 * track + bits * ops.sar_conversions,
                "{name}: comparator ops {} != 2*{track} + {bits}*{}",
                ops.comparator_ops(),
                ops.sar_conversions
            );
            ensure!(
                ops.sar_conversions == acquires + failures,
                "{name}: conversions {} != {acquires} + {failures}",
                ops.sar_conversions
            );
            let trailing =
                u64::from(trace.last().and_then(|o| o.prediction_success) == Some(false));
            ensure!(
                acquires == 2 + failures - trailing,
                "{name}: acquisition steps {acquires} vs failures {failures}"
            );
            ensure!(
                ops.sar_bit_comparisons == bits * ops.sar_conversions,
                "{name}: sar bits"
            );
            runs += 1;
        }
    }
    Ok(format!("{runs} runs, identities exact"))
}

/// 7. Energy crossover.
fn energy_crossover() -> Outcome {
    let signal = fixtures::ecg_excerpt();
    let model = EnergyModel::default();
    let lsb = chip().lsb();
    let (_, at10) = run(&signal, &dps(0.010), &model).map_err(|e| e.to_string())?;
    let psf10 = at10.power_saving_factor.ok_or("no reference energy")?;
    ensure!(psf10 > 0.0, "psf(10 mV) = {psf10} not positive");
    let mut found = None;
    for frac in [0.25, 0.5, 1.0] {
        let (_, r) = run(&signal, &dps(frac * lsb), &model).map_err(|e| e.to_string())?;
        let psf = r.power_saving_factor.ok_or("no reference energy")?;
        if psf < 0.0 || r.op_counts.dps.comparator_ops() > r.op_counts.nyquist.comparator_ops() {
            found = Some((frac, psf));
            break;
        }
    }
    let (frac, psf) = found.ok_or("no delta <= 1 lsb where DPS costs more than Nyquist SAR")?;
    Ok(format!("psf(10 mV)={psf10:.3}; psf({frac} lsb)={psf:.3}"))
}

/// 8. Baseline comparison on the low-passed square wave.
fn baseline_comparison() -> Outcome {
    let signal = fixtures::lpf_square();
    let adc = chip();
    let cfg = dps(0.010);
    let (stream, _) = encode(&signal, &cfg).map_err(|e| e.to_string())?;
    let (lc_events, _) =
        lc_encode(&signal, &LcConfig::new(adc, 0.010).unwrap()).map_err(|e| e.to_string())?;
    let (codes, _) = nyquist_encode(&signal, &adc).map_err(|e| e.to_string())?;
    let (n_dps, n_lc, n_nyq) = (stream.len(), lc_events.len(), codes.len());
    ensure!(
        n_dps < n_lc && n_lc < n_nyq,
        "expected dps < lc < nyquist, got {n_dps}, {n_lc}, {n_nyq}"
    );

    let tau = fixtures::FS_HZ / (2.0 * std::f64::consts::PI * fixtures::LPF_SQUARE_CUTOFF_HZ);
    let half_period = fixtures::FS_HZ / (2.0 * fixtures::LPF_SQUARE_FREQ_HZ);
    let anchors = decode_anchors(&stream).map_err(|e| e.to_string())?;
    let post: Vec<u64> = anchors.iter().skip(2).map(|a| a.t_index).collect();
    let near_edge = post
        .iter()
        .filter(|&&t| {
            let k = (t as f64 / half_period).round();
            k >= 1.0 && (t as f64 - k * half_period).abs() <= 3.0 * tau
        })
        .count();
    let share = near_edge as f64 / post.len().max(1) as f64;
    ensure!(
        share >= 0.60,
        "only {near_edge}/{} post-startup events near edges",
        post.len()
    );
    Ok(format!(
        "dps={n_dps} lc={n_lc} nyquist={n_nyq}; {near_edge}/{} events within 3 tau of an edge ({:.0}%)",
        post.len(),
        share * 100.0
    ))
}

fn stream_strategy() -> impl Strategy<Value = EventStream> {
    (
        2u32..=24,
        2u32..=32,
        1u32..2000,
        any::<bool>(),
        1.0f64..1e6,
        -5.0f64..5.0,
        0.01f64..10.0,
    )
        .prop_flat_map(|(bits, ts, delta_mv, startup, fs, v_min, span)| {
            let max_code = (1u32 << bits) - 1;
            let max_dt = (1u64 << ts) - 1;
            (
                Just((bits, ts, delta_mv, startup, fs, v_min, span)),
                0..=max_dt,
                prop::collection::vec((1..=max_dt, 0..=max_code), 0..64),
                0u64..10_000,
            )
        })
        .prop_map(
            |((bits, ts, delta_mv, startup, fs, v_min, span), first_dt, rest, slack)| {
                let adc = AdcConfig::new(bits, v_min, v_min + span).unwrap();
                let cfg = DpsConfig::new(adc, delta_mv as f64 * 1e-3, ts)
                    .unwrap()
                    .with_startup_pair(startup);
                let mut events: Vec<EventRecord> = rest
                    .iter()
                    .map(|&(dt_cycles, code)| EventRecord { dt_cycles, code })
                    .collect();
                if let Some(first) = events.first_mut() {
                    first.dt_cycles = first_dt;
                }
                let elapsed: u64 = events.iter().map(|e| e.dt_cycles).sum();
                EventStream::new(cfg, fs, events, elapsed + 1 + slack).unwrap()
            },
        )
}

/// 9. Serialization round-trip.
fn serialization_round_trip() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("events.csv");
    let mut runner = TestRunner::new(PropConfig {
        cases: 1000,
        failure_persistence: None,
        ..PropConfig::default()
    });
    runner
        .run(&stream_strategy(), |s| {
            dpsadc::write_events(&path, &s).unwrap();
            let bytes = std::fs::read(&path).unwrap();
            let back = dpsadc::read_events(&path).unwrap();
            prop_assert_eq!(&back, &s);
            prop_assert_eq!(back.to_file_string().into_bytes(), bytes);
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok("1000 random streams survived write/read bit-exactly".into())
}

/// 10. End-to-end decode.
fn end_to_end_decode() -> Outcome {
    let adc = chip();
    let mut worst_ratio: f64 = 0.0;
    let mut anchors_checked = 0;
    for (name, signal) in named_fixtures() {
        let is_sine = name.starts_with("sine");
        for delta_mv in [2.0, 5.0, 10.0, 15.0, 20.0, 30.0] {
            let cfg = dps(delta_mv * 1e-3);
            let (stream, _) = encode(&signal, &cfg).map_err(|e| e.to_string())?;
            let recon = reconstruct_stream(&stream).map_err(|e| e.to_string())?;
            for (a, ev) in decode_anchors(&stream).unwrap().iter().zip(stream.events()) {
                let expected = adc.dequantize(ev.code).unwrap();
                ensure!(
                    recon.samples()[a.t_index as usize] == expected,
                    "{name}: anchor {} not reproduced",
                    a.t_index
                );
                anchors_checked += 1;
            }
            if is_sine {
                let rms = rms_error(&signal, &recon).map_err(|e| e.to_string())?;
                let bound = cfg.delta_volts() + adc.lsb();
                ensure!(
                    rms <= bound,
                    "{name} delta {delta_mv} mV: rms {rms} > {bound}"
                );
                worst_ratio = worst_ratio.max(rms / bound);
            }
        }
    }
    Ok(format!(
        "{anchors_checked} anchors exact; sine rms at most {:.0}% of delta + lsb",
        worst_ratio * 100.0
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("AC1 dc invariance", dc_invariance),
        ("AC2 exact-ramp invariance", exact_ramp),
        ("AC3 tracking-window guarantee", tracking_window),
        ("AC4 ecg compression", ecg_compression),
        ("AC5 sweep curve shapes", sweep_shapes),
        ("AC6 op-count identity", op_count_identity),
        ("AC7 energy crossover", energy_crossover),
        ("AC8 baseline comparison", baseline_comparison),
        ("AC9 serialization round-trip", serialization_round_trip),
        ("AC10 end-to-end decode", end_to_end_decode),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let result =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".to_string()));
        match result {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!(
        "{} of {} acceptance criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
