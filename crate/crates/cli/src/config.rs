//! Job configuration and its textual forms.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use polytame::{Complex, Method, StoppingCriterion, UpdateOrder};
use thiserror::Error;

use crate::parse::{parse_complex, split_top_level};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

#[derive(Debug, Clone, PartialEq)]
pub enum InputSource {
    Stdin,
    File(PathBuf),
    /// Coefficient text supplied directly, mainly for library callers.
    Text(String),
}

impl fmt::Display for InputSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputSource::Stdin => f.write_str("-"),
            InputSource::File(path) => write!(f, "{}", path.display()),
            InputSource::Text(_) => f.write_str("<text>"),
        }
    }
}

impl From<&str> for InputSource {
    fn from(s: &str) -> Self {
        if s == "-" {
            InputSource::Stdin
        } else {
            InputSource::File(PathBuf::from(s))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeflationMode {
    #[default]
    None,
    Implicit,
    Explicit,
}

impl FromStr for DeflationMode {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "none" => Ok(DeflationMode::None),
            "implicit" => Ok(DeflationMode::Implicit),
            "explicit" => Ok(DeflationMode::Explicit),
            _ => Err(ConfigError(format!(
                "unknown deflation '{s}' (expected none, implicit or explicit)"
            ))),
        }
    }
}

impl fmt::Display for DeflationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeflationMode::None => "none",
            DeflationMode::Implicit => "implicit",
            DeflationMode::Explicit => "explicit",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum MapSpec {
    #[default]
    None,
    /// `x = 1/z`.
    Reverse,
    Mobius {
        a: Complex,
        b: Complex,
        c: Complex,
    },
    /// Parameters drawn from the job's seeded generator.
    RandomMobius,
    Square,
}

impl FromStr for MapSpec {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "none" => return Ok(MapSpec::None),
            "reverse" => return Ok(MapSpec::Reverse),
            "square" => return Ok(MapSpec::Square),
            "mobius:random" => return Ok(MapSpec::RandomMobius),
            _ => {}
        }
        let Some(params) = s.strip_prefix("mobius:") else {
            return Err(ConfigError(format!(
                "unknown map '{s}' (expected none, reverse, square, mobius:random or mobius:A,B,C)"
            )));
        };
        let values = complex_list(params)?;
        let [a, b, c] = values[..] else {
            return Err(ConfigError(format!(
                "mobius needs three parameters, got {}",
                values.len()
            )));
        };
        if b == Complex::new(0.0, 0.0) {
            return Err(ConfigError("mobius parameter b must be nonzero".into()));
        }
        Ok(MapSpec::Mobius { a, b, c })
    }
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapSpec::None => f.write_str("none"),
            MapSpec::Reverse => f.write_str("reverse"),
            MapSpec::RandomMobius => f.write_str("mobius:random"),
            MapSpec::Square => f.write_str("square"),
            MapSpec::Mobius { a, b, c } => write!(
                f,
                "mobius:{},{},{}",
                ComplexText(*a),
                ComplexText(*b),
                ComplexText(*c)
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub enum InitSpec {
    /// A circle enclosing every root of the iterated polynomial.
    #[default]
    Auto,
    Circle {
        count: usize,
        center: Complex,
        radius: f64,
    },
    Points(Vec<Complex>),
}

impl FromStr for InitSpec {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        if s == "auto" {
            return Ok(InitSpec::Auto);
        }
        if let Some(rest) = s.strip_prefix("circle:") {
            let parts = split_top_level(rest);
            let [count, center, radius] = parts[..] else {
                return Err(ConfigError(format!(
                    "circle needs COUNT,CENTER,RADIUS, got '{rest}'"
                )));
            };
            let count: usize = count
                .trim()
                .parse()
                .map_err(|_| ConfigError(format!("invalid circle count '{count}'")))?;
            let center = parse_complex(center).map_err(|e| ConfigError(e.to_string()))?;
            let radius: f64 = radius
                .trim()
                .parse()
                .map_err(|_| ConfigError(format!("invalid circle radius '{radius}'")))?;
            if count == 0 || !radius.is_finite() || radius <= 0.0 {
                return Err(ConfigError(
                    "circle needs count >= 1 and a positive radius".into(),
                ));
            }
            return Ok(InitSpec::Circle {
                count,
                center,
                radius,
            });
        }
        if let Some(rest) = s.strip_prefix("points:") {
            let points = complex_list(rest)?;
            return Ok(InitSpec::Points(points));
        }
        Err(ConfigError(format!(
            "unknown init '{s}' (expected auto, circle:COUNT,CENTER,RADIUS or points:Z1,Z2,...)"
        )))
    }
}

impl fmt::Display for InitSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitSpec::Auto => f.write_str("auto"),
            InitSpec::Circle {
                count,
                center,
                radius,
            } => {
                write!(f, "circle:{count},{},{radius}", ComplexText(*center))
            }
            InitSpec::Points(points) => {
                f.write_str("points:")?;
                for (k, z) in points.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{}", ComplexText(*z))?;
                }
                Ok(())
            }
        }
    }
}

/// Formats a complex number in the input syntax.
pub struct ComplexText(pub Complex);

impl fmt::Display for ComplexText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.im == 0.0 {
            write!(f, "{}", self.0.re)
        } else {
            write!(f, "({},{})", self.0.re, self.0.im)
        }
    }
}

fn complex_list(text: &str) -> Result<Vec<Complex>, ConfigError> {
    split_top_level(text)
        .into_iter()
        .map(|t| parse_complex(t).map_err(|e| ConfigError(format!("'{}': {e}", t.trim()))))
        .collect()
}

pub fn parse_method(s: &str) -> Result<Method, ConfigError> {
    match s {
        "newton" => Ok(Method::Newton),
        "weierstrass" => Ok(Method::Weierstrass),
        "ehrlich" => Ok(Method::Ehrlich),
        _ => Err(ConfigError(format!(
            "unknown method '{s}' (expected newton, weierstrass or ehrlich)"
        ))),
    }
}

pub fn method_name(m: Method) -> &'static str {
    match m {
        Method::Newton => "newton",
        Method::Weierstrass => "weierstrass",
        Method::Ehrlich => "ehrlich",
    }
}

pub fn parse_ordering(s: &str) -> Result<UpdateOrder, ConfigError> {
    match s {
        "jacobi" => Ok(UpdateOrder::Jacobi),
        "gauss-seidel" => Ok(UpdateOrder::GaussSeidel),
        _ => Err(ConfigError(format!(
            "unknown ordering '{s}' (expected jacobi or gauss-seidel)"
        ))),
    }
}

pub fn ordering_name(o: UpdateOrder) -> &'static str {
    match o {
        UpdateOrder::Jacobi => "jacobi",
        UpdateOrder::GaussSeidel => "gauss-seidel",
    }
}

/// Everything that determines a job's output.
#[derive(Debug, Clone, PartialEq)]
pub struct JobConfig {
    pub input: InputSource,
    pub method: Method,
    pub deflation: DeflationMode,
    pub map: MapSpec,
    pub ordering: UpdateOrder,
    pub stop: StoppingCriterion,
    /// Tame roots in the original variable.
    pub tame: Vec<Complex>,
    pub init: InitSpec,
    pub seed: u64,
    /// Rescale the polynomial so that its roots lie in the unit disc first.
    pub normalize: bool,
    pub parallel: bool,
}

impl JobConfig {
    pub fn new(input: InputSource, method: Method) -> Self {
        JobConfig {
            input,
            method,
            deflation: DeflationMode::None,
            map: MapSpec::None,
            ordering: UpdateOrder::Jacobi,
            stop: StoppingCriterion::default(),
            tame: Vec::new(),
            init: InitSpec::Auto,
            seed: 0,
            normalize: false,
            parallel: false,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.map == MapSpec::Square && self.method != Method::Newton {
            return Err(ConfigError("map square requires method newton".into()));
        }
        if self.deflation == DeflationMode::None && !self.tame.is_empty() {
            return Err(ConfigError("tame roots given but deflation is none".into()));
        }
        if self.tame.iter().any(|z| !z.is_finite()) {
            return Err(ConfigError("tame roots must be finite".into()));
        }
        Ok(())
    }
}
