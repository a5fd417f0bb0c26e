//! Flat `key = value` scenario configuration.
//!
//! Blank lines and lines starting with `#` are ignored. Unknown keys are
//! rejected so typos surface as config errors with the offending field.

use std::fmt::Write as _;

use crate::cipher::{
    maximal_taps, AssignmentMode, ConstellationKind, ConstellationSpec, GeneratorKind,
    GeneratorSpec, SeedKey,
};
use crate::error::{Error, Result};
use crate::link::LinkParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelModel {
    /// Direct detection through the IMDD link noise model.
    Link,
    /// Bob observes the transmitted level exactly.
    Noiseless,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Bases,
    AlphaMax,
    Repeaters,
    PhotonRate,
}

impl SweepVariable {
    pub fn key(self) -> &'static str {
        match self {
            SweepVariable::Bases => "M",
            SweepVariable::AlphaMax => "alpha_max",
            SweepVariable::Repeaters => "N",
            SweepVariable::PhotonRate => "n_mean",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "M" => SweepVariable::Bases,
            "alpha_max" => SweepVariable::AlphaMax,
            "N" => SweepVariable::Repeaters,
            "n_mean" => SweepVariable::PhotonRate,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub label: String,
    pub constellation: ConstellationKind,
    pub bases: usize,
    pub alpha_max: f64,
    pub assignment: AssignmentMode,
    pub seed_key: SeedKey,
    pub generator: GeneratorSpec,
    pub channel: ChannelModel,
    pub link: LinkParams,
    pub coding: bool,
    pub trials: usize,
    pub master_rng_seed: u64,
    pub sweep: Option<Sweep>,
    /// Coherent amplitude used by the entanglement-attack table.
    pub entangle_alpha: f64,
}

impl Default for ScenarioConfig {
    /// M = 16, α_max² = 10⁴, OSK, 30 repeaters, 1 GHz, coding on.
    fn default() -> Self {
        let alpha_max = 100.0;
        let link = LinkParams::default();
        ScenarioConfig {
            label: "default (illustrative link parameters)".into(),
            constellation: ConstellationKind::IntensityLadder,
            bases: 16,
            alpha_max,
            assignment: AssignmentMode::Osk,
            seed_key: SeedKey::from_hex("5eed0fc0ffee1234").expect("valid hex"),
            generator: GeneratorSpec::default(),
            channel: ChannelModel::Link,
            link: LinkParams { n_mean: alpha_max * alpha_max * link.bandwidth, ..link },
            coding: true,
            trials: 100_000,
            master_rng_seed: 20_021_205,
            sweep: None,
            entangle_alpha: 1.0,
        }
    }
}

fn parse_f64(field: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::config(field, format!("expected a finite number, got `{value}`")))
}

fn parse_uint<T: std::str::FromStr>(field: &str, value: &str) -> Result<T> {
    value
        .parse::<T>()
        .map_err(|_| Error::config(field, format!("expected a nonnegative integer, got `{value}`")))
}

fn parse_bool(field: &str, value: &str) -> Result<bool> {
    match value {
        "on" | "true" | "1" | "yes" => Ok(true),
        "off" | "false" | "0" | "no" => Ok(false),
        _ => Err(Error::config(field, format!("expected on/off, got `{value}`"))),
    }
}

fn parse_hex_u64(field: &str, value: &str) -> Result<u64> {
    let digits = value.trim_start_matches("0x").trim_start_matches("0X");
    u64::from_str_radix(digits, 16)
        .map_err(|_| Error::config(field, format!("expected hex, got `{value}`")))
}

/// Shortest decimal that parses back to the same `f64`.
fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut config = ScenarioConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::config(format!("line {}", lineno + 1), "expected `key = value`")
            })?;
            config.set(key.trim(), value.trim())?;
        }
        config.validate()?;
        Ok(config)
    }

    /// Apply one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "label" => self.label = value.to_string(),
            "constellation" => {
                self.constellation = match value {
                    "intensity_ladder" => ConstellationKind::IntensityLadder,
                    "phase_ladder" => ConstellationKind::PhaseLadder,
                    _ => return Err(Error::config(key, format!("unknown constellation `{value}`"))),
                }
            }
            "M" => self.bases = parse_uint(key, value)?,
            "alpha_max" => {
                self.alpha_max = parse_f64(key, value)?;
                self.sync_photon_rate();
            }
            "assignment" => {
                self.assignment = match value {
                    "osk" => AssignmentMode::Osk,
                    "non_overlap" => AssignmentMode::NonOverlap,
                    _ => return Err(Error::config(key, format!("unknown assignment `{value}`"))),
                }
            }
            "seed_key" => {
                self.seed_key =
                    SeedKey::from_hex(value).map_err(|e| Error::config(key, e.to_string()))?
            }
            "generator" => {
                self.generator.kind = match value {
                    "lfsr" => GeneratorKind::Lfsr,
                    "counter_hash" => GeneratorKind::CounterHash,
                    _ => return Err(Error::config(key, format!("unknown generator `{value}`"))),
                }
            }
            "generator_poly" => self.generator.taps = parse_hex_u64(key, value)?,
            "channel" => {
                self.channel = match value {
                    "link" => ChannelModel::Link,
                    "noiseless" => ChannelModel::Noiseless,
                    _ => return Err(Error::config(key, format!("unknown channel `{value}`"))),
                }
            }
            "coding" => self.coding = parse_bool(key, value)?,
            "trials" => self.trials = parse_uint(key, value)?,
            "master_rng_seed" => self.master_rng_seed = parse_uint(key, value)?,
            "entangle_alpha" => self.entangle_alpha = parse_f64(key, value)?,
            "sweep" => self.sweep = Some(parse_sweep(value)?),
            "link.G_p" => self.link.gain_pre = parse_f64(key, value)?,
            "link.kappa_r" => self.link.kappa_r = parse_f64(key, value)?,
            "link.N" => self.link.repeaters = parse_uint(key, value)?,
            "link.n_sp" => self.link.n_sp = parse_f64(key, value)?,
            "link.B" => {
                self.link.bandwidth = parse_f64(key, value)?;
                self.sync_photon_rate();
            }
            "link.delta_f" => self.link.filter_bandwidth = parse_f64(key, value)?,
            "link.I_th_var" => self.link.thermal_variance = parse_f64(key, value)?,
            "link.n_mean" => self.set_photon_rate(parse_f64(key, value)?),
            _ => return Err(Error::config(key, "unknown key")),
        }
        Ok(())
    }

    /// Peak transmitter photon rate; rescales `alpha_max = √(n_mean / B)`.
    pub fn set_photon_rate(&mut self, n_mean: f64) {
        self.link.n_mean = n_mean;
        self.alpha_max = (n_mean / self.link.bandwidth).sqrt();
    }

    fn sync_photon_rate(&mut self) {
        self.link.n_mean = self.alpha_max * self.alpha_max * self.link.bandwidth;
    }

    pub fn validate(&self) -> Result<()> {
        if self.bases == 0 {
            return Err(Error::config("M", "must be at least 1"));
        }
        if self.alpha_max.is_nan() || self.alpha_max <= 0.0 {
            return Err(Error::config("alpha_max", "must be positive"));
        }
        if self.trials == 0 {
            return Err(Error::config("trials", "must be at least 1"));
        }
        if self.entangle_alpha.is_nan() || self.entangle_alpha <= 0.0 {
            return Err(Error::config("entangle_alpha", "must be positive"));
        }
        if self.generator.kind == GeneratorKind::Lfsr && self.generator.taps == 0 {
            return Err(Error::config("generator_poly", "tap polynomial is zero"));
        }
        self.link.validate().map_err(|e| match e {
            Error::Parameter { name, reason } => Error::config(format!("link.{name}"), reason),
            other => other,
        })?;
        if self.channel == ChannelModel::Link
            && self.constellation != ConstellationKind::IntensityLadder
        {
            return Err(Error::config(
                "constellation",
                "the direct-detection link needs intensity_ladder (use channel = noiseless)",
            ));
        }
        if let Some(sweep) = &self.sweep {
            if sweep.values.is_empty() {
                return Err(Error::config("sweep", "empty value list"));
            }
        }
        Ok(())
    }

    pub fn constellation_spec(&self) -> Result<ConstellationSpec> {
        ConstellationSpec::new(self.constellation, self.bases, self.alpha_max)
            .map_err(|e| Error::config("constellation", e.to_string()))
    }

    /// Copy of this config with one sweep variable set.
    pub fn with_sweep_value(&self, variable: SweepVariable, value: f64) -> Result<Self> {
        let mut c = self.clone();
        c.sweep = None;
        let field = variable.key();
        let as_count = |v: f64| -> Result<u64> {
            if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
                Ok(v as u64)
            } else {
                Err(Error::config("sweep", format!("{field} needs integer values, got {v}")))
            }
        };
        match variable {
            SweepVariable::Bases => c.bases = as_count(value)? as usize,
            SweepVariable::AlphaMax => {
                c.alpha_max = value;
                c.sync_photon_rate();
            }
            SweepVariable::Repeaters => c.link.repeaters = as_count(value)? as u32,
            SweepVariable::PhotonRate => c.set_photon_rate(value),
        }
        c.validate()?;
        Ok(c)
    }

    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("label", self.label.clone());
        kv(
            "constellation",
            match self.constellation {
                ConstellationKind::IntensityLadder => "intensity_ladder",
                ConstellationKind::PhaseLadder => "phase_ladder",
            }
            .into(),
        );
        kv("M", self.bases.to_string());
        kv("alpha_max", fmt_f64(self.alpha_max));
        kv(
            "assignment",
            match self.assignment {
                AssignmentMode::Osk => "osk",
                AssignmentMode::NonOverlap => "non_overlap",
            }
            .into(),
        );
        kv("seed_key", self.seed_key.to_hex());
        kv(
            "generator",
            match self.generator.kind {
                GeneratorKind::Lfsr => "lfsr",
                GeneratorKind::CounterHash => "counter_hash",
            }
            .into(),
        );
        kv("generator_poly", format!("0x{:x}", self.generator.taps));
        kv(
            "channel",
            match self.channel {
                ChannelModel::Link => "link",
                ChannelModel::Noiseless => "noiseless",
            }
            .into(),
        );
        kv("coding", if self.coding { "on" } else { "off" }.into());
        kv("trials", self.trials.to_string());
        kv("master_rng_seed", self.master_rng_seed.to_string());
        kv("entangle_alpha", fmt_f64(self.entangle_alpha));
        kv("link.G_p", fmt_f64(self.link.gain_pre));
        kv("link.kappa_r", fmt_f64(self.link.kappa_r));
        kv("link.N", self.link.repeaters.to_string());
        kv("link.n_sp", fmt_f64(self.link.n_sp));
        kv("link.B", fmt_f64(self.link.bandwidth));
        kv("link.delta_f", fmt_f64(self.link.filter_bandwidth));
        kv("link.I_th_var", fmt_f64(self.link.thermal_variance));
        if let Some(sweep) = &self.sweep {
            let values: Vec<String> = sweep.values.iter().map(|v| fmt_f64(*v)).collect();
            kv("sweep", format!("{}:{}", sweep.variable.key(), values.join(",")));
        }
        s
    }
}

fn parse_sweep(value: &str) -> Result<Sweep> {
    let (var, list) = value
        .split_once(':')
        .ok_or_else(|| Error::config("sweep", "expected `variable:v1,v2,...`"))?;
    let variable = SweepVariable::parse(var.trim()).ok_or_else(|| {
        Error::config("sweep", format!("variable `{var}` is not one of M, alpha_max, N, n_mean"))
    })?;
    let values = list
        .split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| parse_f64("sweep", v))
        .collect::<Result<Vec<_>>>()?;
    Ok(Sweep { variable, values })
}

/// Default maximal-length LFSR polynomial for the 64-bit register.
pub fn default_generator_poly() -> u64 {
    maximal_taps(64).expect("tabulated width")
}
