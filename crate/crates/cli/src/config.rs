use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use svirlab::scalar::{format_rational, parse_rational};
use svirlab::verma::discrete_series_central_charge;
use svirlab::{HalfInt, Rational, Sector};

use crate::functions::{parse_function, FunctionSpec};
use crate::UsageError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Basis,
    Gram,
    UnitaryScan,
    Relations,
    Index,
    HeatTrace,
    SmearedCheck,
    Bounds,
    SuperderivReport,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Basis => "basis",
            Command::Gram => "gram",
            Command::UnitaryScan => "unitary-scan",
            Command::Relations => "relations",
            Command::Index => "index",
            Command::HeatTrace => "heat-trace",
            Command::SmearedCheck => "smeared-check",
            Command::Bounds => "bounds",
            Command::SuperderivReport => "superderiv-report",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Flags as typed on the command line; every flag may also come from a
/// `key=value` config file, where the command line wins.
#[derive(Debug, Parser)]
#[command(name = "svirlab", version, allow_negative_numbers = true, about = "Truncated super-Virasoro modules: exact checks and numerical experiments")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// `ns` or `ramond`.
    #[arg(long)]
    pub sector: Option<String>,
    /// Central charge as `p/q`.
    #[arg(long)]
    pub c: Option<String>,
    /// Discrete series index, `c = 3/2 (1 − 8/(m(m+2)))`.
    #[arg(long)]
    pub m: Option<String>,
    /// Lowest weight as `p/q`, or `c/24`.
    #[arg(long)]
    pub h: Option<String>,
    #[arg(long)]
    pub cutoff: Option<String>,
    #[arg(long)]
    pub level: Option<String>,
    /// Comma-separated inverse temperatures.
    #[arg(long)]
    pub beta: Option<String>,
    /// Comma-separated resolvent shifts.
    #[arg(long)]
    pub alpha: Option<String>,
    /// Test functions, `;`-separated, for the commutation-relation sweep.
    #[arg(long)]
    pub functions: Option<String>,
    /// Test function of the local supercharge.
    #[arg(long)]
    pub phi: Option<String>,
    #[arg(long)]
    pub f1: Option<String>,
    #[arg(long)]
    pub f2: Option<String>,
    /// Domination constant `C` with `f1² ≤ C f2`.
    #[arg(long)]
    pub c_dom: Option<String>,
    #[arg(long)]
    pub samples: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long)]
    pub sigma: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub float_backend: bool,
    /// Flat `key=value` file mirroring the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Append wall-clock timings outside the report body.
    #[arg(long)]
    pub timing: bool,
}

/// How the central charge was given.
#[derive(Clone, Debug, PartialEq)]
pub enum CentralCharge {
    Direct(Rational),
    Series(i64),
}

impl CentralCharge {
    pub fn value(&self) -> Rational {
        match self {
            CentralCharge::Direct(c) => c.clone(),
            CentralCharge::Series(m) => discrete_series_central_charge(*m).expect("validated"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Weight {
    Direct(Rational),
    CasimirShift,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub sector: Sector,
    pub c: Option<CentralCharge>,
    pub h: Option<Weight>,
    pub cutoff: HalfInt,
    pub level: Option<HalfInt>,
    pub betas: Vec<f64>,
    pub alphas: Vec<f64>,
    pub functions: Vec<FunctionSpec>,
    pub phi: Option<FunctionSpec>,
    pub f1: FunctionSpec,
    pub f2: FunctionSpec,
    pub c_dom: f64,
    pub samples: usize,
    pub seed: u64,
    pub sigma: f64,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub float_backend: bool,
    pub timing: bool,
}

const KEYS: &[&str] = &[
    "command", "sector", "c", "m", "h", "cutoff", "level", "beta", "alpha", "functions", "phi", "f1", "f2", "c-dom",
    "samples", "seed", "sigma", "format", "output", "float-backend", "timing",
];

/// Parses a flat `key=value` file; `#` starts a comment.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, UsageError> {
    let mut out = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| UsageError::new("config", format!("line {}: expected key=value", n + 1)))?;
        let k = k.trim().trim_start_matches("--").replace('_', "-");
        if !KEYS.contains(&k.as_str()) {
            return Err(UsageError::new("config", format!("line {}: unknown key `{k}`", n + 1)));
        }
        out.insert(k, v.trim().to_string());
    }
    Ok(out)
}

fn parse_sector(s: &str) -> Result<Sector, UsageError> {
    match s.to_ascii_lowercase().as_str() {
        "ns" | "neveu-schwarz" => Ok(Sector::NeveuSchwarz),
        "r" | "ramond" => Ok(Sector::Ramond),
        _ => Err(UsageError::new("sector", format!("`{s}` is neither `ns` nor `ramond`"))),
    }
}

fn rational(field: &str, s: &str) -> Result<Rational, UsageError> {
    parse_rational(s).ok_or_else(|| UsageError::new(field, format!("`{s}` is not a rational number")))
}

fn half_int(field: &str, s: &str) -> Result<HalfInt, UsageError> {
    s.parse().map_err(|e| UsageError::new(field, format!("{e}")))
}

fn float_list(field: &str, s: &str) -> Result<Vec<f64>, UsageError> {
    s.split(',')
        .map(|x| {
            let x = x.trim();
            parse_rational(x)
                .map(|q| svirlab::RealScalar::to_f64(&q))
                .or_else(|| x.parse().ok())
                .ok_or_else(|| UsageError::new(field, format!("`{x}` is not a number")))
        })
        .collect()
}

fn number<T: std::str::FromStr>(field: &str, s: &str) -> Result<T, UsageError> {
    s.trim().parse().map_err(|_| UsageError::new(field, format!("`{s}` is not a valid value")))
}

fn flag(field: &str, s: &str) -> Result<bool, UsageError> {
    match s {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(UsageError::new(field, format!("`{s}` is not a boolean"))),
    }
}

impl RunConfig {
    /// Merges command-line flags over the optional config file.
    pub fn from_cli(cli: Cli) -> Result<Self, UsageError> {
        let mut map = match &cli.config {
            Some(path) => read_config(path)?,
            None => BTreeMap::new(),
        };
        let mut set = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                map.insert(k.to_string(), v);
            }
        };
        set("command", Some(cli.command.name().to_string()));
        set("sector", cli.sector);
        set("c", cli.c);
        set("m", cli.m);
        set("h", cli.h);
        set("cutoff", cli.cutoff);
        set("level", cli.level);
        set("beta", cli.beta);
        set("alpha", cli.alpha);
        set("functions", cli.functions);
        set("phi", cli.phi);
        set("f1", cli.f1);
        set("f2", cli.f2);
        set("c-dom", cli.c_dom);
        set("samples", cli.samples);
        set("seed", cli.seed);
        set("sigma", cli.sigma);
        set("format", cli.format.map(|f| format_name(f).to_string()));
        set("output", cli.output.map(|p| p.display().to_string()));
        if cli.float_backend {
            set("float-backend", Some("true".into()));
        }
        if cli.timing {
            set("timing", Some("true".into()));
        }
        Self::from_map(&map)
    }

    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self, UsageError> {
        let get = |k: &str| map.get(k).map(String::as_str);
        let command = get("command").ok_or_else(|| UsageError::new("command", "missing".into()))?;
        let command = Command::from_str(command, true).map_err(|e| UsageError::new("command", e))?;
        let sector = parse_sector(get("sector").ok_or_else(|| UsageError::new("sector", "missing".into()))?)?;
        let c = match (get("c"), get("m")) {
            (Some(_), Some(_)) => return Err(UsageError::new("c", "give either --c or --m, not both".into())),
            (Some(c), None) => Some(CentralCharge::Direct(rational("c", c)?)),
            (None, Some(m)) => {
                let m: i64 = number("m", m)?;
                if m < 2 {
                    return Err(UsageError::new("m", format!("the discrete series starts at m = 2, got {m}")));
                }
                Some(CentralCharge::Series(m))
            }
            (None, None) => None,
        };
        let h = match get("h") {
            Some(s) if s.replace(' ', "") == "c/24" => Some(Weight::CasimirShift),
            Some(s) => Some(Weight::Direct(rational("h", s)?)),
            None => None,
        };
        let cutoff = half_int("cutoff", get("cutoff").unwrap_or("4"))?;
        if cutoff.is_negative() {
            return Err(UsageError::new("cutoff", "must be non-negative".into()));
        }
        let level = get("level").map(|s| half_int("level", s)).transpose()?;
        let functions = get("functions")
            .map(|s| s.split(';').map(|f| parse_function("functions", f)).collect::<Result<Vec<_>, _>>())
            .transpose()?
            .unwrap_or_default();
        let config = RunConfig {
            command,
            sector,
            c,
            h,
            cutoff,
            level,
            betas: float_list("beta", get("beta").unwrap_or("1"))?,
            alphas: float_list("alpha", get("alpha").unwrap_or("5,10,20"))?,
            functions,
            phi: get("phi").map(|s| parse_function("phi", s)).transpose()?,
            f1: parse_function("f1", get("f1").unwrap_or("raised-cosine"))?,
            f2: parse_function("f2", get("f2").unwrap_or("raised-cosine"))?,
            c_dom: float_list("c-dom", get("c-dom").unwrap_or("1"))?[0],
            samples: number("samples", get("samples").unwrap_or("100"))?,
            seed: number("seed", get("seed").unwrap_or("42"))?,
            sigma: number("sigma", get("sigma").unwrap_or("1"))?,
            format: match get("format") {
                Some(f) => Format::from_str(f, true).map_err(|e| UsageError::new("format", e))?,
                None => Format::Json,
            },
            output: get("output").map(PathBuf::from),
            float_backend: get("float-backend").map(|s| flag("float-backend", s)).transpose()?.unwrap_or(false),
            timing: get("timing").map(|s| flag("timing", s)).transpose()?.unwrap_or(false),
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), UsageError> {
        if self.command != Command::Basis && self.c.is_none() {
            return Err(UsageError::new("c", "missing: give --c or --m".into()));
        }
        if self.command != Command::Basis && self.h.is_none() {
            return Err(UsageError::new("h", "missing".into()));
        }
        if self.h.is_some() && self.c.is_none() {
            return Err(UsageError::new("h", "needs a central charge".into()));
        }
        if self.sector == Sector::Ramond && !self.cutoff.is_integer() {
            return Err(UsageError::new("cutoff", "Ramond levels are integers".into()));
        }
        if self.command == Command::Gram && self.level.is_none() {
            return Err(UsageError::new("level", "missing".into()));
        }
        if let Some(l) = self.level {
            if self.sector == Sector::Ramond && !l.is_integer() || l.is_negative() {
                return Err(UsageError::new("level", format!("{l} is not a level of the {} sector", self.sector.name())));
            }
        }
        if let Some(b) = self.betas.iter().find(|b| !(**b > 0.0 && b.is_finite())) {
            return Err(UsageError::new("beta", format!("inverse temperatures must be positive, got {b}")));
        }
        if self.samples == 0 {
            return Err(UsageError::new("samples", "must be positive".into()));
        }
        Ok(())
    }

    pub fn central_charge(&self) -> Rational {
        self.c.as_ref().map(CentralCharge::value).unwrap_or_default()
    }

    pub fn weight(&self) -> Rational {
        match &self.h {
            Some(Weight::Direct(h)) => h.clone(),
            Some(Weight::CasimirShift) => self.central_charge() / Rational::from_integer(24.into()),
            None => Rational::default(),
        }
    }

    /// The resolved configuration as the `key=value` pairs of a config file;
    /// feeding it back through [`RunConfig::from_map`] gives an equal config.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let mut out = BTreeMap::new();
        let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        out.insert("command".into(), self.command.name().into());
        out.insert("sector".into(), self.sector.name().into());
        match &self.c {
            Some(CentralCharge::Direct(c)) => {
                out.insert("c".into(), format_rational(c));
            }
            Some(CentralCharge::Series(m)) => {
                out.insert("m".into(), m.to_string());
            }
            None => {}
        }
        match &self.h {
            Some(Weight::Direct(h)) => {
                out.insert("h".into(), format_rational(h));
            }
            Some(Weight::CasimirShift) => {
                out.insert("h".into(), "c/24".into());
            }
            None => {}
        }
        out.insert("cutoff".into(), self.cutoff.to_string());
        if let Some(l) = self.level {
            out.insert("level".into(), l.to_string());
        }
        out.insert("beta".into(), join(&self.betas));
        out.insert("alpha".into(), join(&self.alphas));
        if !self.functions.is_empty() {
            let fs: Vec<String> = self.functions.iter().map(|f| f.to_string()).collect();
            out.insert("functions".into(), fs.join(";"));
        }
        if let Some(p) = &self.phi {
            out.insert("phi".into(), p.to_string());
        }
        out.insert("f1".into(), self.f1.to_string());
        out.insert("f2".into(), self.f2.to_string());
        out.insert("c-dom".into(), self.c_dom.to_string());
        out.insert("samples".into(), self.samples.to_string());
        out.insert("seed".into(), self.seed.to_string());
        out.insert("sigma".into(), self.sigma.to_string());
        out.insert("format".into(), format_name(self.format).into());
        out.insert("float-backend".into(), self.float_backend.to_string());
        out
    }
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Json => "json",
        Format::Csv => "csv",
    }
}

fn read_config(path: &Path) -> Result<BTreeMap<String, String>, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError::new("config", format!("cannot read {}: {e}", path.display())))?;
    parse_config_file(&text)
}
