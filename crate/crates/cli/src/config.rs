//! Experiment configuration: a TOML file merged with `key=value` overrides.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sumprod_core::incidence::Generator;
use sumprod_core::kakeya::KAKEYA_MAX_Q;
use sumprod_core::sumprod::SearchMode;
use sumprod_core::is_prime;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Sumprod,
    Incidence,
    Distance,
    Kakeya,
    VerifyAll,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Sumprod => "sumprod",
            Kind::Incidence => "incidence",
            Kind::Distance => "distance",
            Kind::Kakeya => "kakeya",
            Kind::VerifyAll => "verify-all",
        }
    }

    /// Stem of the result files.
    pub fn stem(self) -> &'static str {
        match self {
            Kind::VerifyAll => "verify",
            k => k.name(),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "sumprod" => Ok(Kind::Sumprod),
            "incidence" => Ok(Kind::Incidence),
            "distance" => Ok(Kind::Distance),
            "kakeya" => Ok(Kind::Kakeya),
            "verify-all" => Ok(Kind::VerifyAll),
            _ => Err(CliError::Config(format!("unknown experiment '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::Config(format!("unknown format '{s}' (csv or json)"))),
        }
    }
}

/// An integer list written as `7`, `[7, 11]`, `"7,11"` or `"2..5"`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
enum IntList {
    One(u64),
    Many(Vec<u64>),
    Text(String),
}

impl IntList {
    fn resolve(self, key: &str) -> Result<Vec<u64>, CliError> {
        match self {
            IntList::One(x) => Ok(vec![x]),
            IntList::Many(xs) => Ok(xs),
            IntList::Text(s) => parse_int_list(key, &s),
        }
    }
}

fn parse_int_list(key: &str, s: &str) -> Result<Vec<u64>, CliError> {
    let bad = || CliError::Config(format!("{key}: cannot parse '{s}' as an integer list"));
    let mut out = Vec::new();
    for part in s.trim_matches(|c| c == '[' || c == ']').split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        if let Some((lo, hi)) = part.split_once("..") {
            let (lo, hi): (u64, u64) = (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?);
            if hi < lo || hi - lo > 10_000 {
                return Err(bad());
            }
            out.extend(lo..=hi);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    Ok(out)
}

/// Unvalidated settings from one source.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RawConfig {
    experiment: Option<String>,
    q: Option<IntList>,
    n: Option<IntList>,
    mode: Option<String>,
    trials: Option<u64>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    format: Option<String>,
    generator: Option<String>,
    exclude_zero: Option<bool>,
}

impl RawConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("config file: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Parses `key=value` arguments.
    pub fn from_overrides<S: AsRef<str>>(args: &[S]) -> Result<Self, CliError> {
        let mut raw = RawConfig::default();
        for arg in args {
            let arg = arg.as_ref();
            let (key, value) = arg
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("expected key=value, got '{arg}'")))?;
            let num = |v: &str| v.parse::<u64>().map_err(|_| CliError::Config(format!("{key}: '{v}' is not an integer")));
            match key.trim().replace('_', "-").as_str() {
                "q" => raw.q = Some(IntList::Text(value.into())),
                "n" | "N" => raw.n = Some(IntList::Text(value.into())),
                "mode" => raw.mode = Some(value.into()),
                "trials" => raw.trials = Some(num(value)?),
                "seed" => raw.seed = Some(num(value)?),
                "out" => raw.out = Some(value.into()),
                "format" => raw.format = Some(value.into()),
                "generator" => raw.generator = Some(value.into()),
                "exclude-zero" => {
                    raw.exclude_zero = Some(
                        value.parse().map_err(|_| CliError::Config(format!("exclude-zero: '{value}' is not a boolean")))?,
                    )
                }
                "experiment" => raw.experiment = Some(value.into()),
                other => return Err(CliError::Config(format!("unknown key '{other}'"))),
            }
        }
        Ok(raw)
    }

    /// Field-wise merge; entries of `self` win.
    pub fn over(self, base: RawConfig) -> RawConfig {
        RawConfig {
            experiment: self.experiment.or(base.experiment),
            q: self.q.or(base.q),
            n: self.n.or(base.n),
            mode: self.mode.or(base.mode),
            trials: self.trials.or(base.trials),
            seed: self.seed.or(base.seed),
            out: self.out.or(base.out),
            format: self.format.or(base.format),
            generator: self.generator.or(base.generator),
            exclude_zero: self.exclude_zero.or(base.exclude_zero),
        }
    }
}

/// A validated experiment. Fields that the kind ignores are cleared so the
/// hash only sees inputs that reach the output.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub q: Vec<u64>,
    pub n: Vec<u64>,
    pub mode: Option<SearchMode>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    #[serde(skip)]
    pub out: PathBuf,
    pub format: Format,
    pub generator: Option<Generator>,
    pub exclude_zero: Option<bool>,
}

pub const DEFAULT_OUT: &str = "results";

fn cfg_err<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Config(msg.into()))
}

impl ExperimentConfig {
    pub fn resolve(kind: Kind, raw: RawConfig) -> Result<Self, CliError> {
        if let Some(e) = &raw.experiment {
            if e.parse::<Kind>()? != kind {
                return cfg_err(format!("config file is for '{e}', not '{kind}'"));
            }
        }
        let mut q = raw.q.map(|l| l.resolve("q")).transpose()?.unwrap_or_default();
        q.sort_unstable();
        q.dedup();
        if q.is_empty() {
            return cfg_err("q list is empty");
        }
        if let Some(&bad) = q.iter().find(|&&x| !is_prime(x)) {
            return cfg_err(format!("q = {bad} is not prime"));
        }
        let mut n = raw.n.map(|l| l.resolve("n")).transpose()?.unwrap_or_default();
        n.sort_unstable();
        n.dedup();
        let format = raw.format.as_deref().map(str::parse).transpose()?.unwrap_or(Format::Csv);
        let out = raw.out.unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
        let mode = raw
            .mode
            .as_deref()
            .map(|m| m.parse::<SearchMode>().map_err(|e| CliError::Config(e.to_string())))
            .transpose()?;
        let mut cfg = ExperimentConfig {
            kind,
            q,
            n,
            mode: None,
            trials: None,
            seed: None,
            out,
            format,
            generator: None,
            exclude_zero: None,
        };
        let qmax = *cfg.q.last().expect("nonempty");
        match kind {
            Kind::Sumprod | Kind::Distance => {
                let mode = mode.unwrap_or(SearchMode::Exhaustive);
                cfg.require_sizes()?;
                for &q in &cfg.q {
                    let hi = if kind == Kind::Sumprod { q } else { q * q };
                    let lo = if kind == Kind::Sumprod { 2 } else { 1 };
                    if let Some(&bad) = cfg.n.iter().find(|&&n| n < lo || n > hi) {
                        return cfg_err(format!("n = {bad} outside {lo}..={hi} for q = {q}"));
                    }
                }
                if mode == SearchMode::Randomized {
                    cfg.seed = Some(raw.seed.ok_or_else(|| CliError::Config("randomized mode needs a seed".into()))?);
                    cfg.trials = Some(raw.trials.unwrap_or(100));
                }
                cfg.mode = Some(mode);
                if kind == Kind::Distance {
                    cfg.exclude_zero = Some(raw.exclude_zero.unwrap_or(false));
                }
            }
            Kind::Incidence => {
                cfg.require_sizes()?;
                for &q in &cfg.q {
                    if let Some(&bad) = cfg.n.iter().find(|&&n| n == 0 || n > q * q) {
                        return cfg_err(format!("N = {bad} outside 1..={} for q = {q}", q * q));
                    }
                }
                let generator = raw
                    .generator
                    .as_deref()
                    .map(|g| g.parse::<Generator>().map_err(|e| CliError::Config(e.to_string())))
                    .transpose()?
                    .unwrap_or(Generator::Uniform);
                cfg.seed = Some(raw.seed.ok_or_else(|| CliError::Config("incidence experiments need a seed".into()))?);
                cfg.trials = Some(raw.trials.unwrap_or(10));
                cfg.generator = Some(generator);
            }
            Kind::Kakeya => {
                if qmax > KAKEYA_MAX_Q as u64 {
                    return cfg_err(format!("kakeya search supports q <= {KAKEYA_MAX_Q}"));
                }
                cfg.seed = Some(raw.seed.ok_or_else(|| CliError::Config("kakeya search needs a seed".into()))?);
                cfg.trials = Some(raw.trials.unwrap_or(20));
                cfg.n.clear();
            }
            Kind::VerifyAll => {
                if cfg.q.contains(&2) {
                    return cfg_err("verify-all needs odd primes");
                }
                cfg.seed = Some(raw.seed.unwrap_or(0));
                cfg.n.clear();
            }
        }
        if cfg.trials == Some(0) {
            return cfg_err("trials must be at least 1");
        }
        Ok(cfg)
    }

    fn require_sizes(&self) -> Result<(), CliError> {
        if self.n.is_empty() {
            return cfg_err(format!("{} needs a size list n", self.kind));
        }
        Ok(())
    }
}
