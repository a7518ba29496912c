use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{Context, Result};
use clap::Args;
use dpsadc::signal::gen_ramp;
use dpsadc::{gen_lpf_square, gen_sine, load_signal_csv, UniformSignal};

/// Built-in test signal, parsed from `kind:p1,p2,...`.
#[derive(Debug, Clone, PartialEq)]
pub enum GenSpec {
    Sine {
        freq_hz: f64,
        vpp: f64,
        offset: f64,
        duration_s: f64,
    },
    LpfSquare {
        freq_hz: f64,
        vpp: f64,
        offset: f64,
        cutoff_hz: f64,
        duration_s: f64,
    },
    Ramp {
        v_start: f64,
        v_end: f64,
        duration_s: f64,
    },
}

pub const DEFAULT_DURATION_S: f64 = 1.0;

#[derive(Debug)]
pub struct GenSpecError(String);

impl fmt::Display for GenSpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for GenSpecError {}

fn params(kind: &str, raw: &str, required: usize) -> Result<Vec<f64>, GenSpecError> {
    let values = raw
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| GenSpecError(format!("{kind}: `{p}` is not a number")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if values.len() != required && values.len() != required + 1 {
        return Err(GenSpecError(format!(
            "{kind} takes {required} parameters plus an optional duration, got {}",
            values.len()
        )));
    }
    Ok(values)
}

impl FromStr for GenSpec {
    type Err = GenSpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, raw) = s
            .split_once(':')
            .ok_or_else(|| GenSpecError(format!("expected kind:params, got `{s}`")))?;
        let duration = |v: &[f64], n: usize| v.get(n).copied().unwrap_or(DEFAULT_DURATION_S);
        match kind {
            "sine" => {
                let v = params(kind, raw, 3)?;
                Ok(GenSpec::Sine {
                    freq_hz: v[0],
                    vpp: v[1],
                    offset: v[2],
                    duration_s: duration(&v, 3),
                })
            }
            "lpfsq" => {
                let v = params(kind, raw, 4)?;
                Ok(GenSpec::LpfSquare {
                    freq_hz: v[0],
                    vpp: v[1],
                    offset: v[2],
                    cutoff_hz: v[3],
                    duration_s: duration(&v, 4),
                })
            }
            "ramp" => {
                let v = params(kind, raw, 2)?;
                Ok(GenSpec::Ramp {
                    v_start: v[0],
                    v_end: v[1],
                    duration_s: duration(&v, 2),
                })
            }
            other => Err(GenSpecError(format!(
                "unknown generator `{other}` (expected sine, lpfsq or ramp)"
            ))),
        }
    }
}

impl GenSpec {
    pub fn generate(&self, fs_hz: f64) -> dpsadc::Result<UniformSignal> {
        match *self {
            GenSpec::Sine {
                freq_hz,
                vpp,
                offset,
                duration_s,
            } => gen_sine(freq_hz, vpp, offset, fs_hz, duration_s),
            GenSpec::LpfSquare {
                freq_hz,
                vpp,
                offset,
                cutoff_hz,
                duration_s,
            } => gen_lpf_square(freq_hz, vpp, offset, cutoff_hz, fs_hz, duration_s),
            GenSpec::Ramp {
                v_start,
                v_end,
                duration_s,
            } => gen_ramp(v_start, v_end, fs_hz, duration_s),
        }
    }
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct SourceArgs {
    /// Two-column `t,v` CSV trace
    #[arg(long, value_name = "CSV")]
    pub input: Option<PathBuf>,

    /// Generated trace: sine:F,VPP,OFFSET[,DUR] | lpfsq:F,VPP,OFFSET,CUTOFF[,DUR] | ramp:V0,V1[,DUR]
    #[arg(long, value_name = "SPEC")]
    pub gen: Option<GenSpec>,
}

impl SourceArgs {
    /// CSV inputs infer their rate unless `fs_override` is given; generated
    /// inputs use `fs_override` or `fs_default`.
    pub fn load(&self, fs_override: Option<f64>, fs_default: f64) -> Result<UniformSignal> {
        match (&self.input, &self.gen) {
            (Some(path), _) => load_signal_csv(path, fs_override)
                .with_context(|| format!("reading {}", path.display())),
            (None, Some(spec)) => {
                let fs = fs_override.unwrap_or(fs_default);
                Ok(spec.generate(fs)?)
            }
            (None, None) => unreachable!("clap enforces one input source"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_generators() {
        assert_eq!(
            "sine:1,0,0.9".parse::<GenSpec>().unwrap(),
            GenSpec::Sine {
                freq_hz: 1.0,
                vpp: 0.0,
                offset: 0.9,
                duration_s: 1.0
            }
        );
        assert_eq!(
            "lpfsq:5,1,0.9,50,2".parse::<GenSpec>().unwrap(),
            GenSpec::LpfSquare {
                freq_hz: 5.0,
                vpp: 1.0,
                offset: 0.9,
                cutoff_hz: 50.0,
                duration_s: 2.0
            }
        );
        assert_eq!(
            "ramp:0.1,1.7".parse::<GenSpec>().unwrap(),
            GenSpec::Ramp {
                v_start: 0.1,
                v_end: 1.7,
                duration_s: 1.0
            }
        );
    }

    #[test]
    fn rejects_malformed_generators() {
        for bad in [
            "sine",
            "sine:1,2",
            "sine:1,2,3,4,5",
            "sine:1,x,3",
            "square:1,2,3",
        ] {
            assert!(bad.parse::<GenSpec>().is_err(), "{bad}");
        }
    }
}
