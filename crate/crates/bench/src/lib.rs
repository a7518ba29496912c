//! Shared inputs for the codec benchmarks.

use dpsadc::{fixtures, gen_sine, AdcConfig, DpsConfig, UniformSignal};

/// Window half-width used by every benchmark, in volts.
pub const DELTA_VOLTS: f64 = 0.01;

pub fn chip_config() -> DpsConfig {
    DpsConfig::new(AdcConfig::chip_default(), DELTA_VOLTS, 10).expect("chip configuration is valid")
}

/// Named traces from sparse to dense event rates.
pub fn workloads() -> Vec<(&'static str, UniformSignal)> {
    vec![
        ("ecg_12s", fixtures::ecg_excerpt()),
        ("lpf_square_1s", fixtures::lpf_square()),
        (
            "sine_40hz_60s",
            gen_sine(40.0, 1.5, 0.9, 1000.0, 60.0).expect("valid sine"),
        ),
    ]
}
