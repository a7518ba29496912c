//! Bundled test inputs.
//!
//! The ECG excerpt is a synthetic single-lead trace (12 s at 1 kHz, 0.3 Vpp
//! centered at 0.9 V) produced by `scripts/gen_ecg_fixture.py`. The other
//! fixtures are generated on the fly.

use crate::quantizer::AdcConfig;
use crate::signal::{gen_lpf_square, gen_sine, parse_signal_csv, UniformSignal};

const ECG_EXCERPT_CSV: &str = include_str!("../fixtures/ecg_excerpt.csv");

/// Sample rate of every bundled fixture.
pub const FS_HZ: f64 = 1000.0;

pub fn ecg_excerpt() -> UniformSignal {
    parse_signal_csv(ECG_EXCERPT_CSV.as_bytes(), None).expect("bundled ECG fixture parses")
}

/// Raw CSV text of [`ecg_excerpt`].
pub fn ecg_excerpt_csv() -> &'static str {
    ECG_EXCERPT_CSV
}

/// 1000 samples at mid-scale.
pub fn dc() -> UniformSignal {
    gen_sine(1.0, 0.0, 0.9, FS_HZ, 1.0).expect("valid generator arguments")
}

/// 10 Hz, 0.3 Vpp sine around 0.9 V, 1 s.
pub fn sine_10hz() -> UniformSignal {
    gen_sine(10.0, 0.3, 0.9, FS_HZ, 1.0).expect("valid generator arguments")
}

/// 5 Hz, 1 Vpp sine around 0.9 V, 1 s.
pub fn sine_5hz_1vpp() -> UniformSignal {
    gen_sine(5.0, 1.0, 0.9, FS_HZ, 1.0).expect("valid generator arguments")
}

pub const LPF_SQUARE_FREQ_HZ: f64 = 5.0;
pub const LPF_SQUARE_CUTOFF_HZ: f64 = 50.0;

/// 5 Hz, 1 Vpp square wave around 0.9 V through a 50 Hz single-pole
/// low-pass, 1 s.
pub fn lpf_square() -> UniformSignal {
    gen_lpf_square(
        LPF_SQUARE_FREQ_HZ,
        1.0,
        0.9,
        LPF_SQUARE_CUTOFF_HZ,
        FS_HZ,
        1.0,
    )
    .expect("valid generator arguments")
}

/// Ramp sitting exactly on code centers, one code per sample from code
/// `from` to code `to` inclusive.
pub fn code_ramp(adc: &AdcConfig, from: u32, to: u32) -> UniformSignal {
    let samples = (from..=to)
        .map(|c| adc.dequantize(c).expect("ramp codes within range"))
        .collect();
    UniformSignal::new(FS_HZ, samples).expect("positive rate")
}
