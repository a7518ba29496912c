//! Option resolution: command-line flag, then `--config` file, then the
//! chip defaults (10-bit, 0 to 1.8 V, 1 kHz, 10-bit timestamps).

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use dpsadc::{kv, AdcConfig, DpsConfig, EnergyModel, LcConfig};

pub const DEFAULT_BITS: u32 = 10;
pub const DEFAULT_V_MIN: f64 = 0.0;
pub const DEFAULT_V_MAX: f64 = 1.8;
pub const DEFAULT_FS_HZ: f64 = 1000.0;
pub const DEFAULT_TIMESTAMP_BITS: u32 = 10;

const KNOWN_KEYS: [&str; 8] = [
    "bits",
    "v_min",
    "v_max",
    "fs_hz",
    "delta_mv",
    "timestamp_bits",
    "emit_startup_pair",
    "lc_spacing_mv",
];

#[derive(Debug, Clone, Args)]
pub struct AdcArgs {
    /// Converter resolution [default: 10]
    #[arg(long)]
    pub bits: Option<u32>,

    /// Bottom of the input range in volts [default: 0]
    #[arg(long, allow_negative_numbers = true)]
    pub vmin: Option<f64>,

    /// Top of the input range in volts [default: 1.8]
    #[arg(long, allow_negative_numbers = true)]
    pub vmax: Option<f64>,

    /// Sample rate; overrides the rate inferred from a CSV input [default for generated input: 1000]
    #[arg(long, value_name = "HZ")]
    pub fs: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct DpsArgs {
    /// Window half-width in millivolts
    #[arg(long, value_name = "MV", allow_negative_numbers = true)]
    pub delta_mv: Option<f64>,

    /// Timestamp counter width [default: 10]
    #[arg(long)]
    pub ts_bits: Option<u32>,

    /// Do not emit the two start-up conversions
    #[arg(long)]
    pub no_startup_pair: bool,
}

/// Values read from a `--config` file.
#[derive(Debug, Default)]
pub struct Settings {
    map: BTreeMap<String, String>,
}

impl Settings {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let map = kv::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
        if let Some(key) = map
            .keys()
            .find(|k| !KNOWN_KEYS.contains(&k.as_str()) && !EnergyModel::KEYS.contains(&k.as_str()))
        {
            bail!("{}: unknown key `{key}`", path.display());
        }
        Ok(Self { map })
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.map
            .get(key)
            .map(|raw| {
                raw.parse::<T>()
                    .map_err(|_| anyhow!("config key {key}: cannot parse `{raw}`"))
            })
            .transpose()
    }

    fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }

    pub fn adc(&self, args: &AdcArgs) -> Result<AdcConfig> {
        Ok(AdcConfig::new(
            self.pick(args.bits, "bits")?.unwrap_or(DEFAULT_BITS),
            self.pick(args.vmin, "v_min")?.unwrap_or(DEFAULT_V_MIN),
            self.pick(args.vmax, "v_max")?.unwrap_or(DEFAULT_V_MAX),
        )?)
    }

    /// `None` means "infer from the input".
    pub fn fs_override(&self, args: &AdcArgs) -> Result<Option<f64>> {
        self.pick(args.fs, "fs_hz")
    }

    pub fn delta_mv(&self, args: &DpsArgs) -> Result<Option<f64>> {
        self.pick(args.delta_mv, "delta_mv")
    }

    pub fn dps(&self, adc: AdcConfig, args: &DpsArgs, delta_mv: f64) -> Result<DpsConfig> {
        let ts = self.timestamp_bits(args.ts_bits)?;
        let startup =
            !args.no_startup_pair && self.get::<bool>("emit_startup_pair")?.unwrap_or(true);
        Ok(DpsConfig::new(adc, delta_mv * 1e-3, ts)?.with_startup_pair(startup))
    }

    pub fn timestamp_bits(&self, flag: Option<u32>) -> Result<u32> {
        Ok(self
            .pick(flag, "timestamp_bits")?
            .unwrap_or(DEFAULT_TIMESTAMP_BITS))
    }

    pub fn lc(&self, adc: AdcConfig, flag_mv: Option<f64>, delta_mv: f64) -> Result<LcConfig> {
        let mv = self.pick(flag_mv, "lc_spacing_mv")?.unwrap_or(delta_mv);
        Ok(LcConfig::new(adc, mv * 1e-3)?)
    }

    pub fn energy(&self) -> Result<EnergyModel> {
        Ok(EnergyModel::from_map(&self.map)?)
    }
}
