//! Command-line and config-file parameters.
//!
//! Every option may also be given in a flat `key = value` file passed with
//! `--config`; keys are the long flag names with `-` replaced by `_`. Flags
//! win over the file, the file wins over the built-in defaults.

use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use clap::Args;
use cspi_core::{HalfInt, Slices};
use num_bigint::BigInt;
use num_rational::BigRational;
use cspi_core::ordering::NumberPoly;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    DualH,
    DualBigH,
    WrongI,
    WrongII,
    WrongIII,
    Oracle,
    Dyson,
    SpinZ,
    SpinX,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::DualH => "dual-h",
            Method::DualBigH => "dual-H",
            Method::WrongI => "wrong-I",
            Method::WrongII => "wrong-II",
            Method::WrongIII => "wrong-III",
            Method::Oracle => "oracle",
            Method::Dyson => "dyson",
            Method::SpinZ => "spin-z",
            Method::SpinX => "spin-x",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinAxis {
    X,
    Z,
}

pub fn parse_method(s: &str) -> Result<Method, String> {
    const ALL: [Method; 9] = [
        Method::DualH,
        Method::DualBigH,
        Method::WrongI,
        Method::WrongII,
        Method::WrongIII,
        Method::Oracle,
        Method::Dyson,
        Method::SpinZ,
        Method::SpinX,
    ];
    ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| {
        let names: Vec<&str> = ALL.iter().map(|m| m.name()).collect();
        format!("unknown method {s:?}; expected one of {}", names.join(", "))
    })
}

pub fn parse_format(s: &str) -> Result<Format, String> {
    match s {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        _ => Err(format!("unknown format {s:?}; expected csv or json")),
    }
}

pub fn parse_axis(s: &str) -> Result<SpinAxis, String> {
    match s {
        "x" => Ok(SpinAxis::X),
        "z" => Ok(SpinAxis::Z),
        _ => Err(format!("unknown axis {s:?}; expected x or z")),
    }
}

/// A plain alias so clap takes the whole comma list as one value.
pub type SliceList = Vec<u64>;

pub fn parse_slices(s: &str) -> Result<Slices, String> {
    match s {
        "continuum" | "inf" => Ok(Slices::Continuum),
        _ => match s.parse::<u64>() {
            Ok(n) if n > 0 => Ok(Slices::Finite(n)),
            _ => Err(format!("slices must be a positive integer or \"continuum\", got {s:?}")),
        },
    }
}

pub fn parse_spin(s: &str) -> Result<HalfInt, String> {
    s.parse().map_err(|e: cspi_core::Error| e.to_string())
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let bad = || format!("not a rational number: {s:?}");
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.starts_with('-');
        let digits = format!("{}{frac}", int.trim_start_matches(['-', '+']));
        let num: BigInt = digits.parse().map_err(|_| bad())?;
        let den = BigInt::from(10).pow(frac.len() as u32);
        let r = BigRational::new(num, den);
        return Ok(if negative { -r } else { r });
    }
    BigRational::from_str(s).map_err(|_| bad())
}

/// Comma-separated coefficients `c0,c1,…` of a polynomial, lowest order first.
pub fn parse_poly(s: &str) -> Result<NumberPoly, String> {
    let coeffs = s.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?;
    Ok(NumberPoly::new(coeffs))
}

pub fn parse_list(s: &str) -> Result<Vec<u64>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|_| format!("not a slice count: {t:?}")))
        .collect()
}

fn number<T: FromStr>(s: &str) -> Result<T, String> {
    s.trim().parse().map_err(|_| format!("not a valid number: {s:?}"))
}

#[derive(Debug, Clone, Default, Args)]
pub struct Params {
    /// Power q of g (b†)^q b^q [default: 1; figure2: 4; symbol: 12]
    #[arg(long, value_parser = number::<usize>)]
    pub q: Option<usize>,
    /// Coupling g [default: 1]
    #[arg(long, value_parser = number::<f64>)]
    pub g: Option<f64>,
    /// Inverse temperature β [default: 1]
    #[arg(long, value_parser = number::<f64>)]
    pub beta: Option<f64>,
    /// Sets β = beta_g / g; excludes --beta
    #[arg(long, value_parser = number::<f64>)]
    pub beta_g: Option<f64>,
    /// Hopping coupling J of the two-site model [default: 1]
    #[arg(long, value_parser = number::<f64>)]
    pub j: Option<f64>,
    /// Spin frequency ω [default: 1]
    #[arg(long, value_parser = number::<f64>)]
    pub omega: Option<f64>,
    /// Reduced Planck constant ħ [default: 1]
    #[arg(long, value_parser = number::<f64>)]
    pub hbar: Option<f64>,
    /// Spin S, e.g. 1/2 or 3 [default: 1/2]
    #[arg(long, value_parser = parse_spin)]
    pub spin: Option<HalfInt>,
    /// f(S_z) coefficients c0,c1,… [default: 0,1]
    #[arg(long, value_parser = parse_poly)]
    pub f: Option<NumberPoly>,
    /// Spin Hamiltonian: x (ω S_x) or z (f(S_z)) [default: x]
    #[arg(long, value_parser = parse_axis)]
    pub axis: Option<SpinAxis>,
    /// Evaluator for `partition` [default: dual-h]
    #[arg(long, value_parser = parse_method)]
    pub method: Option<Method>,
    /// Time slices N, or "continuum" [default: continuum]
    #[arg(long, value_parser = parse_slices)]
    pub slices: Option<Slices>,
    /// Slice counts for `converge` [default: 64,128,…,4096]
    #[arg(long, value_parser = parse_list)]
    pub slices_list: Option<SliceList>,
    /// Total boson number of the two-site sector [default: 1]
    #[arg(long, value_parser = number::<u32>)]
    pub n_tot: Option<u32>,
    /// Relative tail tolerance [default: 1e-15]
    #[arg(long, value_parser = number::<f64>)]
    pub eps_rel: Option<f64>,
    /// Hard cap on summed terms; last row for figure2 [default: 1000000; figure2: 60]
    #[arg(long, value_parser = number::<u64>)]
    pub n_max: Option<u64>,
    /// Maximal (even) expansion order [default: 12]
    #[arg(long, value_parser = number::<usize>)]
    pub p_max: Option<usize>,
    /// csv or json [default: json; figure2 and converge: csv]
    #[arg(long, value_parser = parse_format)]
    pub format: Option<Format>,
    /// Output file, written atomically [default: stdout]
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Flat key = value file with defaults for any of these options
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn fill<T>(slot: &mut Option<T>, key: &str, value: &str, parse: fn(&str) -> Result<T, String>) -> Result<(), CliError> {
    if slot.is_none() {
        *slot = Some(parse(value).map_err(|e| CliError::Config(format!("config key {key}: {e}")))?);
    }
    Ok(())
}

impl Params {
    /// Fills unset options from the `--config` file, if any.
    pub fn merge_config(mut self) -> Result<Self, CliError> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = fs::read_to_string(&path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Config(format!(
                    "{}:{}: expected key = value",
                    path.display(),
                    lineno + 1
                )));
            };
            let (key, value) = (key.trim(), value.trim());
            match key {
                "q" => fill(&mut self.q, key, value, number::<usize>)?,
                "g" => fill(&mut self.g, key, value, number::<f64>)?,
                "beta" => fill(&mut self.beta, key, value, number::<f64>)?,
                "beta_g" => fill(&mut self.beta_g, key, value, number::<f64>)?,
                "j" => fill(&mut self.j, key, value, number::<f64>)?,
                "omega" => fill(&mut self.omega, key, value, number::<f64>)?,
                "hbar" => fill(&mut self.hbar, key, value, number::<f64>)?,
                "spin" => fill(&mut self.spin, key, value, parse_spin)?,
                "f" => fill(&mut self.f, key, value, parse_poly)?,
                "axis" => fill(&mut self.axis, key, value, parse_axis)?,
                "method" => fill(&mut self.method, key, value, parse_method)?,
                "slices" => fill(&mut self.slices, key, value, parse_slices)?,
                "slices_list" => fill(&mut self.slices_list, key, value, parse_list)?,
                "n_tot" => fill(&mut self.n_tot, key, value, number::<u32>)?,
                "eps_rel" => fill(&mut self.eps_rel, key, value, number::<f64>)?,
                "n_max" => fill(&mut self.n_max, key, value, number::<u64>)?,
                "p_max" => fill(&mut self.p_max, key, value, number::<usize>)?,
                "format" => fill(&mut self.format, key, value, parse_format)?,
                "output" => fill(&mut self.output, key, value, |s| Ok(PathBuf::from(s)))?,
                _ => {
                    return Err(CliError::Config(format!(
                        "{}:{}: unknown key {key:?}",
                        path.display(),
                        lineno + 1
                    )))
                }
            }
        }
        Ok(self)
    }

    pub fn g(&self) -> f64 {
        self.g.unwrap_or(1.0)
    }

    /// β, from `beta` or `beta_g / g`.
    pub fn beta(&self) -> Result<f64, CliError> {
        let beta = match (self.beta, self.beta_g) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config("give either beta or beta_g, not both".into()))
            }
            (Some(b), None) => b,
            (None, Some(bg)) => {
                if self.g() == 0.0 {
                    return Err(CliError::Config("beta_g needs a non-zero g".into()));
                }
                bg / self.g()
            }
            (None, None) => 1.0,
        };
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(CliError::Config(format!("beta must be finite and non-negative, got {beta}")));
        }
        Ok(beta)
    }

    pub fn tail(&self) -> Result<cspi_core::TailPolicy, CliError> {
        let tail = cspi_core::TailPolicy {
            eps_rel: self.eps_rel.unwrap_or(1e-15),
            n_min: 0,
            n_max_hard: self.n_max.unwrap_or(1_000_000),
        };
        tail.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(tail)
    }

    pub fn p_max(&self) -> Result<usize, CliError> {
        let p = self.p_max.unwrap_or(12);
        if p % 2 != 0 {
            return Err(CliError::Config(format!("p_max must be even, got {p}")));
        }
        Ok(p)
    }

    pub fn hbar(&self) -> f64 {
        self.hbar.unwrap_or(1.0)
    }

    pub fn omega(&self) -> f64 {
        self.omega.unwrap_or(1.0)
    }

    pub fn spin(&self) -> HalfInt {
        self.spin.unwrap_or(HalfInt::from_twice(1))
    }

    pub fn f(&self) -> NumberPoly {
        self.f.clone().unwrap_or_else(|| NumberPoly::from_integers(&[0, 1]))
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}
