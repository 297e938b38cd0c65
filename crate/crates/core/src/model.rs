//! Model-definition files: a line-oriented `key = value` format with exact
//! fraction literals and tagged irrationals, documented in docs/format.md.
//!
//! Rational literals are parsed exactly (decimals become fractions over a
//! power of ten); `sqrt:N` marks an entry as irrational, which forces the
//! numeric analysis mode downstream. `serialize` produces the canonical
//! form: `parse(serialize(parse(text)))` equals `parse(text)` field by field.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::bernstein::{BernsteinError, BernsteinFunction};
use crate::grid::{GridError, TorusGrid};
use crate::rational::Rat;
use crate::scalar::Scalar;
use crate::symbol::{SymbolError, SymbolHandle};
use crate::triplet::{Atom, DensityMeasure, LevyMeasure, LevyTriplet};

#[derive(Debug, Error, PartialEq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

/// Exact surface form of a model-file scalar.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarLit {
    Rational(Rat),
    Sqrt { negative: bool, radicand: u64 },
}

impl ScalarLit {
    pub fn zero() -> Self {
        ScalarLit::Rational(Rat::zero())
    }

    pub fn to_scalar(&self) -> Scalar {
        match self {
            ScalarLit::Rational(q) => Scalar::from_rat(q.clone()),
            ScalarLit::Sqrt {
                negative,
                radicand,
            } => {
                let v = (*radicand as f64).sqrt();
                Scalar::approx(if *negative { -v } else { v })
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_scalar().to_f64()
    }
}

impl fmt::Display for ScalarLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarLit::Rational(q) => {
                if q.denom() == &BigInt::from(1) {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            ScalarLit::Sqrt {
                negative,
                radicand,
            } => {
                write!(f, "{}sqrt:{}", if *negative { "-" } else { "" }, radicand)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensitySpec {
    pub family: String,
    pub alpha: f64,
    pub scale: f64,
    pub cutoff: f64,
    pub depth: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BernsteinSpec {
    pub family: String,
    pub alpha: Option<f64>,
    pub tau: Option<f64>,
    pub t: Option<ScalarLit>,
    pub a: Option<f64>,
    pub atoms: Vec<(ScalarLit, ScalarLit)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub period: Vec<ScalarLit>,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ChecksSpec {
    pub tolerance: Option<f64>,
    pub checks: Vec<(String, Option<f64>)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelFile {
    pub name: String,
    pub dim: usize,
    pub drift: Vec<ScalarLit>,
    /// Row-major n² covariance entries.
    pub covariance: Vec<ScalarLit>,
    pub atoms: Vec<(ScalarLit, Vec<ScalarLit>)>,
    pub density: Option<DensitySpec>,
    pub bernstein: Option<BernsteinSpec>,
    pub grid: Option<GridSpec>,
    pub checks: ChecksSpec,
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Top,
    Triplet,
    Bernstein,
    Grid,
    Checks,
}

pub fn parse_model(text: &str) -> Result<ModelFile, ParseError> {
    let mut name = String::new();
    let mut dim: Option<usize> = None;
    let mut drift: Option<Vec<ScalarLit>> = None;
    let mut covariance: Option<Vec<ScalarLit>> = None;
    let mut atoms: Vec<(ScalarLit, Vec<ScalarLit>)> = Vec::new();
    let mut atom_lines: Vec<usize> = Vec::new();
    let mut density: Option<DensitySpec> = None;
    let mut bernstein: Option<BernsteinSpec> = None;
    let mut grid_period: Option<Vec<ScalarLit>> = None;
    let mut grid_points: Option<usize> = None;
    let mut checks = ChecksSpec::default();
    let mut section = Section::Top;

    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(stripped) = line.strip_prefix('[') {
            let Some(sec) = stripped.strip_suffix(']') else {
                return Err(ParseError::new(ln, "unterminated section header"));
            };
            section = match sec.trim() {
                "triplet" => Section::Triplet,
                "bernstein" => Section::Bernstein,
                "grid" => Section::Grid,
                "checks" => Section::Checks,
                other => {
                    return Err(ParseError::new(ln, format!("unknown section [{other}]")));
                }
            };
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ParseError::new(ln, "expected `key = value`"));
        };
        let key = key.trim();
        let value = value.trim();
        match (section, key) {
            (Section::Top, "name") => name = value.to_string(),
            (Section::Top, "dim") => {
                dim = Some(
                    value
                        .parse::<usize>()
                        .map_err(|_| ParseError::new(ln, format!("bad dimension `{value}`")))?,
                );
            }
            (Section::Triplet, "drift") => {
                drift = Some(parse_vector(value).map_err(|m| ParseError::new(ln, m))?);
            }
            (Section::Triplet, "covariance") => {
                covariance = Some(parse_vector(value).map_err(|m| ParseError::new(ln, m))?);
            }
            (Section::Triplet, "atom") => {
                let (mass, loc) = parse_atom(value).map_err(|m| ParseError::new(ln, m))?;
                atoms.push((mass, loc));
                atom_lines.push(ln);
            }
            (Section::Triplet, "density") => {
                density = Some(parse_density(value).map_err(|m| ParseError::new(ln, m))?);
            }
            (Section::Bernstein, "family") => {
                bernstein = Some(BernsteinSpec {
                    family: value.to_string(),
                    alpha: None,
                    tau: None,
                    t: None,
                    a: None,
                    atoms: Vec::new(),
                });
            }
            (Section::Bernstein, k) => {
                let Some(spec) = bernstein.as_mut() else {
                    return Err(ParseError::new(ln, "`family = ...` must come first"));
                };
                match k {
                    "alpha" => spec.alpha = Some(parse_f64(value, ln)?),
                    "tau" => spec.tau = Some(parse_f64(value, ln)?),
                    "t" => {
                        spec.t =
                            Some(parse_scalar_lit(value).map_err(|m| ParseError::new(ln, m))?)
                    }
                    "a" => spec.a = Some(parse_f64(value, ln)?),
                    "atom" => {
                        let (mass, loc) =
                            parse_scalar_atom(value).map_err(|m| ParseError::new(ln, m))?;
                        spec.atoms.push((mass, loc));
                    }
                    other => {
                        return Err(ParseError::new(
                            ln,
                            format!("unknown bernstein key `{other}`"),
                        ));
                    }
                }
            }
            (Section::Grid, "period") => {
                let lits = if value.starts_with('(') {
                    parse_vector(value).map_err(|m| ParseError::new(ln, m))?
                } else {
                    vec![parse_scalar_lit(value).map_err(|m| ParseError::new(ln, m))?]
                };
                grid_period = Some(lits);
            }
            (Section::Grid, "points") => {
                grid_points = Some(
                    value
                        .parse::<usize>()
                        .map_err(|_| ParseError::new(ln, format!("bad point count `{value}`")))?,
                );
            }
            (Section::Checks, "tolerance") => checks.tolerance = Some(parse_f64(value, ln)?),
            (Section::Checks, "check") => {
                let mut parts = value.split_whitespace();
                let cname = parts
                    .next()
                    .ok_or_else(|| ParseError::new(ln, "empty check name"))?
                    .to_string();
                let tol = match parts.next() {
                    Some(t) => Some(
                        t.parse::<f64>()
                            .map_err(|_| ParseError::new(ln, format!("bad tolerance `{t}`")))?,
                    ),
                    None => None,
                };
                checks.checks.push((cname, tol));
            }
            (_, other) => {
                return Err(ParseError::new(
                    ln,
                    format!("key `{other}` not allowed in this section"),
                ));
            }
        }
    }

    let dim = dim.ok_or_else(|| ParseError::new(0, "missing `dim = N`"))?;
    if dim == 0 {
        return Err(ParseError::new(0, "dimension must be at least 1"));
    }
    let drift = drift.unwrap_or_else(|| vec![ScalarLit::zero(); dim]);
    if drift.len() != dim {
        return Err(ParseError::new(
            0,
            format!("triplet.drift has {} entries, expected {dim}", drift.len()),
        ));
    }
    let covariance = covariance.unwrap_or_else(|| vec![ScalarLit::zero(); dim * dim]);
    if covariance.len() != dim * dim {
        return Err(ParseError::new(
            0,
            format!(
                "triplet.covariance has {} entries, expected {} (row-major {dim}x{dim})",
                covariance.len(),
                dim * dim
            ),
        ));
    }
    for (k, (mass, loc)) in atoms.iter().enumerate() {
        let ln = atom_lines[k];
        if loc.len() != dim {
            return Err(ParseError::new(
                ln,
                format!("triplet.atom[{k}]: location has {} entries, expected {dim}", loc.len()),
            ));
        }
        if !positive_lit(mass) {
            return Err(ParseError::new(
                ln,
                format!("triplet.atom[{k}].mass: must be strictly positive"),
            ));
        }
        if loc.iter().all(|l| l.to_scalar().is_zero()) {
            return Err(ParseError::new(
                ln,
                format!("triplet.atom[{k}].location: must be nonzero"),
            ));
        }
    }
    if density.is_some() && !atoms.is_empty() {
        return Err(ParseError::new(
            0,
            "triplet.measure: give either atoms or a density, not both",
        ));
    }
    if let Some(d) = &density {
        if dim != 1 {
            return Err(ParseError::new(0, "triplet.density: only dimension 1"));
        }
        if d.family != "stable" {
            return Err(ParseError::new(
                0,
                format!("triplet.density: unknown family `{}`", d.family),
            ));
        }
        if !(0.0 < d.alpha && d.alpha < 2.0) || d.scale <= 0.0 || d.cutoff < 1.0 || d.depth < 4 {
            return Err(ParseError::new(
                0,
                "triplet.density: need 0 < alpha < 2, scale > 0, cutoff ≥ 1, depth ≥ 4",
            ));
        }
    }
    let grid = match (grid_period, grid_points) {
        (None, None) => None,
        (p, n) => {
            let period = p.unwrap_or_else(|| vec![ScalarLit::Rational(Rat::from_integer(1.into()))]);
            let period = if period.len() == 1 && dim > 1 {
                vec![period[0].clone(); dim]
            } else {
                period
            };
            if period.len() != dim {
                return Err(ParseError::new(
                    0,
                    format!("grid.period has {} entries, expected {dim}", period.len()),
                ));
            }
            let points = n.unwrap_or(64);
            if !points.is_power_of_two() || points < 2 {
                return Err(ParseError::new(
                    0,
                    format!("grid.points: {points} is not a power of two ≥ 2"),
                ));
            }
            Some(GridSpec { period, points })
        }
    };

    Ok(ModelFile {
        name,
        dim,
        drift,
        covariance,
        atoms,
        density,
        bernstein,
        grid,
        checks,
    })
}

fn positive_lit(l: &ScalarLit) -> bool {
    match l {
        ScalarLit::Rational(q) => q.is_positive(),
        ScalarLit::Sqrt { negative, .. } => !negative,
    }
}

fn parse_f64(value: &str, ln: usize) -> Result<f64, ParseError> {
    value
        .parse::<f64>()
        .map_err(|_| ParseError::new(ln, format!("bad number `{value}`")))
}

/// `p`, `p/q`, `d.ddd` (exact over a power of ten) or `[-]sqrt:N`.
pub fn parse_scalar_lit(s: &str) -> Result<ScalarLit, String> {
    let s = s.trim();
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, s.strip_prefix('+').unwrap_or(s).trim()),
    };
    if let Some(rad) = body.strip_prefix("sqrt:") {
        let radicand: u64 = rad
            .parse()
            .map_err(|_| format!("bad radicand in `{s}`"))?;
        return Ok(ScalarLit::Sqrt {
            negative,
            radicand,
        });
    }
    let q = if let Some((num, den)) = body.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator in `{s}`"))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator in `{s}`"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in `{s}`"));
        }
        BigRational::new(n, d)
    } else if let Some((int_part, frac_part)) = body.split_once('.') {
        let digits = format!("{int_part}{frac_part}");
        let n: BigInt = digits
            .parse()
            .map_err(|_| format!("bad decimal `{s}`"))?;
        let d = BigInt::from(10u32).pow(frac_part.len() as u32);
        BigRational::new(n, d)
    } else {
        let n: BigInt = body.parse().map_err(|_| format!("bad integer `{s}`"))?;
        BigRational::from_integer(n)
    };
    Ok(ScalarLit::Rational(if negative { -q } else { q }))
}

/// `(s1, s2, …)`.
fn parse_vector(s: &str) -> Result<Vec<ScalarLit>, String> {
    let s = s.trim();
    let inner = s
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| format!("expected `(…)`, got `{s}`"))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner.split(',').map(parse_scalar_lit).collect()
}

/// `MASS @ (x1, …, xn)`.
fn parse_atom(s: &str) -> Result<(ScalarLit, Vec<ScalarLit>), String> {
    let (mass, loc) = s
        .split_once('@')
        .ok_or_else(|| format!("expected `mass @ (location)`, got `{s}`"))?;
    Ok((parse_scalar_lit(mass)?, parse_vector(loc)?))
}

/// `MASS @ S` with a scalar location (Bernstein π atoms).
fn parse_scalar_atom(s: &str) -> Result<(ScalarLit, ScalarLit), String> {
    let (mass, loc) = s
        .split_once('@')
        .ok_or_else(|| format!("expected `mass @ location`, got `{s}`"))?;
    Ok((parse_scalar_lit(mass)?, parse_scalar_lit(loc)?))
}

/// `stable alpha=A scale=C cutoff=R depth=D`.
fn parse_density(s: &str) -> Result<DensitySpec, String> {
    let mut parts = s.split_whitespace();
    let family = parts
        .next()
        .ok_or_else(|| "empty density spec".to_string())?
        .to_string();
    let mut spec = DensitySpec {
        family,
        alpha: 0.5,
        scale: 1.0,
        cutoff: 1e6,
        depth: 48,
    };
    for kv in parts {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got `{kv}`"))?;
        match k {
            "alpha" => spec.alpha = v.parse().map_err(|_| format!("bad alpha `{v}`"))?,
            "scale" => spec.scale = v.parse().map_err(|_| format!("bad scale `{v}`"))?,
            "cutoff" => spec.cutoff = v.parse().map_err(|_| format!("bad cutoff `{v}`"))?,
            "depth" => spec.depth = v.parse().map_err(|_| format!("bad depth `{v}`"))?,
            other => return Err(format!("unknown density key `{other}`")),
        }
    }
    Ok(spec)
}

/// Comma-separated ξ entries, with or without parentheses.
pub fn parse_xi_list(s: &str) -> Result<Vec<f64>, String> {
    let s = s.trim();
    let inner = s
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .unwrap_or(s);
    inner
        .split(',')
        .map(|p| {
            let p = p.trim();
            p.parse::<f64>().map_err(|_| format!("bad number `{p}`"))
        })
        .collect()
}

impl ModelFile {
    pub fn to_triplet(&self) -> LevyTriplet {
        let n = self.dim;
        let drift: Vec<Scalar> = self.drift.iter().map(ScalarLit::to_scalar).collect();
        let covariance: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.covariance[i * n + j].to_scalar())
                    .collect()
            })
            .collect();
        let measure = if let Some(d) = &self.density {
            LevyMeasure::Density(DensityMeasure::symmetric_stable(
                d.alpha, d.scale, d.cutoff, d.depth,
            ))
        } else if self.atoms.is_empty() {
            LevyMeasure::Null
        } else {
            LevyMeasure::DiscreteAtoms(
                self.atoms
                    .iter()
                    .map(|(m, loc)| {
                        Atom::new(
                            m.to_scalar(),
                            loc.iter().map(ScalarLit::to_scalar).collect(),
                        )
                    })
                    .collect(),
            )
        };
        LevyTriplet::new(drift, covariance, measure)
    }

    pub fn to_symbol(&self) -> Result<SymbolHandle, SymbolError> {
        SymbolHandle::from_triplet(self.to_triplet())
    }

    pub fn bernstein_function(&self) -> Result<Option<BernsteinFunction>, BernsteinError> {
        let Some(spec) = &self.bernstein else {
            return Ok(None);
        };
        let g = match spec.family.as_str() {
            "power" => BernsteinFunction::power(spec.alpha.unwrap_or(0.5))?,
            "log" => BernsteinFunction::log(),
            "resolvent" => BernsteinFunction::resolvent(spec.tau.unwrap_or(1.0))?,
            "semigroup" => {
                let t = match &spec.t {
                    Some(ScalarLit::Rational(q)) => q.clone(),
                    Some(other) => Rat::from_float(other.to_f64()).unwrap(),
                    None => Rat::from_integer(1.into()),
                };
                BernsteinFunction::semigroup_complement(t)?
            }
            "linear" => BernsteinFunction::linear(spec.a.unwrap_or(1.0))?,
            "custom" => {
                let atoms = spec
                    .atoms
                    .iter()
                    .map(|(m, s)| (m.to_f64(), s.to_scalar()))
                    .collect();
                BernsteinFunction::custom(spec.a.unwrap_or(0.0), atoms)?
            }
            other => {
                return Err(BernsteinError::InvalidParameter(format!(
                    "unknown family `{other}`"
                )))
            }
        };
        Ok(Some(g))
    }

    /// Grid from the model's [grid] section, with optional overrides.
    pub fn torus_grid(
        &self,
        period_override: Option<f64>,
        points_override: Option<usize>,
    ) -> Result<TorusGrid, GridError> {
        let (period, points) = match &self.grid {
            Some(g) => (
                g.period.iter().map(ScalarLit::to_f64).collect::<Vec<_>>(),
                g.points,
            ),
            None => (vec![1.0; self.dim], 64),
        };
        let period = match period_override {
            Some(p) => vec![p; self.dim],
            None => period,
        };
        TorusGrid::new(period, points_override.unwrap_or(points))
    }

    /// Canonical serialization; `parse(serialize(m)) == m`.
    pub fn serialize(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        let _ = writeln!(out, "name = {}", self.name);
        let _ = writeln!(out, "dim = {}", self.dim);
        let _ = writeln!(out);
        let _ = writeln!(out, "[triplet]");
        let _ = writeln!(out, "drift = {}", fmt_lits(&self.drift));
        let _ = writeln!(out, "covariance = {}", fmt_lits(&self.covariance));
        for (m, loc) in &self.atoms {
            let _ = writeln!(out, "atom = {m} @ {}", fmt_lits(loc));
        }
        if let Some(d) = &self.density {
            let _ = writeln!(
                out,
                "density = {} alpha={} scale={} cutoff={} depth={}",
                d.family, d.alpha, d.scale, d.cutoff, d.depth
            );
        }
        if let Some(b) = &self.bernstein {
            let _ = writeln!(out);
            let _ = writeln!(out, "[bernstein]");
            let _ = writeln!(out, "family = {}", b.family);
            if let Some(v) = b.alpha {
                let _ = writeln!(out, "alpha = {v}");
            }
            if let Some(v) = b.tau {
                let _ = writeln!(out, "tau = {v}");
            }
            if let Some(v) = &b.t {
                let _ = writeln!(out, "t = {v}");
            }
            if let Some(v) = b.a {
                let _ = writeln!(out, "a = {v}");
            }
            for (m, s) in &b.atoms {
                let _ = writeln!(out, "atom = {m} @ {s}");
            }
        }
        if let Some(g) = &self.grid {
            let _ = writeln!(out);
            let _ = writeln!(out, "[grid]");
            let _ = writeln!(out, "period = {}", fmt_lits(&g.period));
            let _ = writeln!(out, "points = {}", g.points);
        }
        if self.checks.tolerance.is_some() || !self.checks.checks.is_empty() {
            let _ = writeln!(out);
            let _ = writeln!(out, "[checks]");
            if let Some(t) = self.checks.tolerance {
                let _ = writeln!(out, "tolerance = {t}");
            }
            for (name, tol) in &self.checks.checks {
                match tol {
                    Some(t) => {
                        let _ = writeln!(out, "check = {name} {t}");
                    }
                    None => {
                        let _ = writeln!(out, "check = {name}");
                    }
                }
            }
        }
        out
    }
}

fn fmt_lits(lits: &[ScalarLit]) -> String {
    let items: Vec<String> = lits.iter().map(|l| l.to_string()).collect();
    format!("({})", items.join(", "))
}
