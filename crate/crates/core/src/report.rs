//! Machine-readable reports: run the applicable checks for a model and
//! render the result deterministically (fixed field order, no timestamps,
//! seeded randomness derived from the model hash).

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::bernstein::BernsteinError;
use crate::grid::{GridError, GridFunction, TorusGrid};
use crate::model::ModelFile;
use crate::operators::{
    self, Bump, HarmonicCandidate, OperatorError, TrigPolynomial,
};
use crate::symbol::{SymbolError, SymbolHandle};
use crate::triplet::{truncate_measure, validate_triplet, LevyTriplet, TripletError};
use crate::zeroset::{
    self, LiouvilleVerdict, ScanOptions, VerdictMethod, ZeroSetError,
};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    ZeroSet(#[from] ZeroSetError),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Bernstein(#[from] BernsteinError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Triplet(#[from] TripletError),
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error("triplet failed validation:\n{0}")]
    InvalidTriplet(String),
}

#[derive(Debug, Clone)]
pub struct ReportOptions {
    pub tolerance: f64,
    pub grid_points: Option<usize>,
    pub period: Option<f64>,
    pub force_numeric: bool,
    pub seed: Option<u64>,
    /// Halfwidth of the numeric scan box (numeric mode and Liouville
    /// confirmation scans).
    pub scan_box: Option<f64>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            tolerance: 1e-10,
            grid_points: None,
            period: None,
            force_numeric: false,
            seed: None,
            scan_box: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessLine {
    pub location: Vec<f64>,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrosscheckLine {
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub model: String,
    pub model_sha256: String,
    pub tool_version: String,
    pub dimension: usize,
    pub method: String,
    pub liouville: bool,
    pub zero_set: String,
    pub periodicity_group: String,
    pub witnesses: Vec<WitnessLine>,
    pub crosscheck: Option<CrosscheckLine>,
    pub checks: Vec<CheckResult>,
    pub tolerance: f64,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
            && self.crosscheck.as_ref().map(|c| c.equal).unwrap_or(true)
    }

    /// Nested key-value rendering, byte-identical across runs.
    pub fn render_text(&self) -> String {
        use std::fmt::Write as _;
        let mut s = String::new();
        let _ = writeln!(s, "model = {}", self.model);
        let _ = writeln!(s, "model_sha256 = {}", self.model_sha256);
        let _ = writeln!(s, "tool_version = {}", self.tool_version);
        let _ = writeln!(s, "dimension = {}", self.dimension);
        let _ = writeln!(s, "tolerance = {:e}", self.tolerance);
        let _ = writeln!(s, "method = {}", self.method);
        let _ = writeln!(s, "liouville = {}", if self.liouville { "YES" } else { "NO" });
        let _ = writeln!(s, "zero_set = {}", self.zero_set);
        let _ = writeln!(s, "periodicity_group = {}", self.periodicity_group);
        for w in &self.witnesses {
            let loc: Vec<String> = w.location.iter().map(|v| format!("{v:e}")).collect();
            let _ = writeln!(
                s,
                "witness = ({}) residual = {:e}",
                loc.join(", "),
                w.residual
            );
        }
        if let Some(cc) = &self.crosscheck {
            let _ = writeln!(s, "crosscheck.lhs = {}", cc.lhs);
            let _ = writeln!(s, "crosscheck.rhs = {}", cc.rhs);
            let _ = writeln!(s, "crosscheck.equal = {}", cc.equal);
        }
        for c in &self.checks {
            let res = match c.residual {
                Some(r) => format!(" residual = {r:e}"),
                None => String::new(),
            };
            let _ = writeln!(
                s,
                "check.{} = {}{} tolerance = {:e} :: {}",
                c.name,
                if c.pass { "pass" } else { "FAIL" },
                res,
                c.tolerance,
                c.detail
            );
        }
        let _ = writeln!(
            s,
            "result = {}",
            if self.all_passed() { "PASS" } else { "FAIL" }
        );
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }
}

pub const DEFAULT_CHECKS: &[&str] = &[
    "symbol-laws",
    "crosscheck",
    "truncation",
    "harmonic",
    "cross-application",
    "resolvent",
    "semigroup",
    "pairing",
    "density-positivity",
];

/// Subset run by `liouville verify`.
pub const VERIFY_CHECKS: &[&str] = &[
    "harmonic",
    "cross-application",
    "resolvent",
    "semigroup",
    "pairing",
];

pub fn model_hash(model: &ModelFile) -> String {
    let mut hasher = Sha256::new();
    hasher.update(model.serialize().as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

struct Ctx {
    triplet: LevyTriplet,
    symbol: SymbolHandle,
    verdict: LiouvilleVerdict,
    harmonic: Option<HarmonicCandidate>,
    tol: f64,
    seed: u64,
    scan: ScanOptions,
}

pub fn run_report(
    model: &ModelFile,
    checks: &[&str],
    opts: &ReportOptions,
) -> Result<Report, ReportError> {
    let triplet = model.to_triplet();
    let validation = validate_triplet(&triplet);
    if !validation.passed() {
        return Err(ReportError::InvalidTriplet(validation.to_string()));
    }
    let symbol = model.to_symbol()?;
    let hash = model_hash(model);
    let seed = opts.seed.unwrap_or_else(|| {
        let bytes = hash.as_bytes();
        bytes
            .iter()
            .take(8)
            .fold(0u64, |acc, &b| (acc << 8) | b as u64)
    });
    let tol = model.checks.tolerance.unwrap_or(opts.tolerance);
    let mut scan = ScanOptions::for_dim(model.dim);
    if let Some(b) = opts.scan_box {
        scan.box_halfwidth = b;
    }
    let verdict = if opts.force_numeric {
        zeroset::decide_liouville_numeric(&symbol, &scan)
    } else {
        zeroset::decide_liouville_with(&symbol, &scan)?
    };
    let points = opts
        .grid_points
        .or(model.grid.as_ref().map(|g| g.points))
        .unwrap_or(64);
    let harmonic = if !verdict.holds && verdict.method == VerdictMethod::Exact {
        Some(operators::make_harmonic(&verdict.zero_set, seed, points)?)
    } else {
        None
    };

    let ctx = Ctx {
        triplet,
        symbol,
        verdict,
        harmonic,
        tol,
        seed,
        scan,
    };

    let requested: Vec<String> = if model.checks.checks.is_empty() {
        checks.iter().map(|s| s.to_string()).collect()
    } else {
        model.checks.checks.iter().map(|(n, _)| n.clone()).collect()
    };
    let mut results = Vec::new();
    for name in &requested {
        let tol_override = model
            .checks
            .checks
            .iter()
            .find(|(n, t)| n == name && t.is_some())
            .and_then(|(_, t)| *t);
        let r = run_check(name, &ctx, tol_override)?;
        results.push(r);
    }

    let crosscheck = if ctx.triplet.is_rational_discrete() {
        let cc = zeroset::crosscheck_corollary2(&ctx.triplet)?;
        Some(CrosscheckLine {
            lhs: cc.lhs.to_string(),
            rhs: cc.rhs.to_string(),
            equal: cc.equal,
        })
    } else {
        None
    };

    Ok(Report {
        model: model.name.clone(),
        model_sha256: hash,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        dimension: model.dim,
        method: match ctx.verdict.method {
            VerdictMethod::Exact => "exact".to_string(),
            VerdictMethod::NumericHeuristic => "numeric-heuristic".to_string(),
        },
        liouville: ctx.verdict.holds,
        zero_set: ctx.verdict.zero_set.to_string(),
        periodicity_group: ctx.verdict.periodicity_group.to_string(),
        witnesses: ctx
            .verdict
            .witnesses
            .iter()
            .map(|w| WitnessLine {
                location: w.location.clone(),
                residual: w.residual,
            })
            .collect(),
        crosscheck,
        checks: results,
        tolerance: ctx.tol,
    })
}

fn skipped(name: &str, why: &str, tol: f64) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        pass: true,
        residual: None,
        tolerance: tol,
        detail: format!("skipped: {why}"),
    }
}

fn run_check(name: &str, ctx: &Ctx, tol_override: Option<f64>) -> Result<CheckResult, ReportError> {
    let tol = tol_override.unwrap_or(ctx.tol);
    match name {
        "symbol-laws" => symbol_laws_check(ctx, tol_override.unwrap_or(1e-9)),
        "crosscheck" => crosscheck_check(ctx, tol),
        "truncation" => truncation_check(ctx, tol_override.unwrap_or(1e-9)),
        "harmonic" => harmonic_check(ctx, tol),
        "cross-application" => cross_application_check(ctx, tol_override.unwrap_or(1e-8)),
        "resolvent" => resolvent_check(ctx, tol),
        "semigroup" => semigroup_check(ctx, tol),
        "pairing" => pairing_check(ctx, tol_override.unwrap_or(1e-8)),
        "density-positivity" => density_positivity_check(ctx, tol),
        other => Err(ReportError::UnknownCheck(other.to_string())),
    }
}

/// Hermitian symmetry, nonnegative real part, ψ(0) = 0, subadditivity of
/// √|ψ| and the Cauchy–Schwarz bound for the positive-definite kernel
/// ψ(ξ) + conj ψ(η) − ψ(ξ−η), on seeded random samples.
fn symbol_laws_check(ctx: &Ctx, tol: f64) -> Result<CheckResult, ReportError> {
    let dim = ctx.symbol.dim();
    let mut rng = StdRng::seed_from_u64(ctx.seed ^ 0x51);
    let mut worst = 0.0_f64;
    let n_samples = 1000;
    let zero = vec![0.0; dim];
    worst = worst.max(ctx.symbol.eval(&zero)?.norm());
    for _ in 0..n_samples {
        let xi: Vec<f64> = (0..dim).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let eta: Vec<f64> = (0..dim).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let neg_xi: Vec<f64> = xi.iter().map(|v| -v).collect();
        let diff: Vec<f64> = xi.iter().zip(&eta).map(|(a, b)| a - b).collect();
        let sum: Vec<f64> = xi.iter().zip(&eta).map(|(a, b)| a + b).collect();
        let p_xi = ctx.symbol.eval(&xi)?;
        let p_eta = ctx.symbol.eval(&eta)?;
        let p_neg = ctx.symbol.eval(&neg_xi)?;
        let p_diff = ctx.symbol.eval(&diff)?;
        let p_sum = ctx.symbol.eval(&sum)?;
        worst = worst.max((p_neg - p_xi.conj()).norm());
        worst = worst.max(-p_xi.re);
        worst = worst.max(p_sum.norm().sqrt() - p_xi.norm().sqrt() - p_eta.norm().sqrt());
        let k = p_xi + p_eta.conj() - p_diff;
        worst = worst.max(k.norm_sqr() - 4.0 * p_xi.norm() * p_eta.norm());
    }
    Ok(CheckResult {
        name: "symbol-laws".into(),
        pass: worst <= tol,
        residual: Some(worst),
        tolerance: tol,
        detail: format!("{n_samples} random xi/eta pairs in [-10,10]^{dim}"),
    })
}

fn crosscheck_check(ctx: &Ctx, tol: f64) -> Result<CheckResult, ReportError> {
    if !ctx.triplet.is_rational_discrete() {
        return Ok(skipped("crosscheck", "model is not rational discrete", tol));
    }
    let cc = zeroset::crosscheck_corollary2(&ctx.triplet)?;
    Ok(CheckResult {
        name: "crosscheck".into(),
        pass: cc.equal,
        residual: None,
        tolerance: tol,
        detail: format!("lhs = {} vs rhs = {}", cc.lhs, cc.rhs),
    })
}

fn truncation_check(ctx: &Ctx, tol: f64) -> Result<CheckResult, ReportError> {
    if !ctx.triplet.is_rational_discrete() || ctx.triplet.measure().atoms().is_empty() {
        return Ok(skipped(
            "truncation",
            "needs a rational atomic measure",
            tol,
        ));
    }
    let max_norm = ctx
        .triplet
        .measure()
        .atoms()
        .iter()
        .map(|a| {
            a.location_f64()
                .iter()
                .map(|x| x * x)
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0_f64, f64::max);
    let last = max_norm.max(1.0) + 1.0;
    let mut radii = vec![1.0, (1.0 + last) / 2.0, last];
    radii.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let ok_sets = zeroset::truncation_zero_set_check(&ctx.triplet, &radii)?;

    // Uniform bound |ψ − ψ_n| ≤ 2ν(B_n^c) on sampled ξ.
    let mut rng = StdRng::seed_from_u64(ctx.seed ^ 0x7a);
    let dim = ctx.triplet.dim();
    let mut worst_gap = f64::NEG_INFINITY;
    for &r in &radii {
        let tr = truncate_measure(&ctx.triplet, r)?;
        let sym_n = SymbolHandle::from_triplet(tr.triplet.clone())?;
        for _ in 0..200 {
            let xi: Vec<f64> = (0..dim).map(|_| rng.gen_range(-20.0..20.0)).collect();
            let d = (ctx.symbol.eval(&xi)? - sym_n.eval(&xi)?).norm();
            worst_gap = worst_gap.max(d - tr.sup_error_bound);
        }
    }
    let pass = ok_sets && worst_gap <= tol;
    Ok(CheckResult {
        name: "truncation".into(),
        pass,
        residual: Some(worst_gap.max(0.0)),
        tolerance: tol,
        detail: format!(
            "radii {radii:?}; zero-set intersection {}",
            if ok_sets { "equal" } else { "NOT equal" }
        ),
    })
}

fn harmonic_check(ctx: &Ctx, tol: f64) -> Result<CheckResult, ReportError> {
    match (&ctx.harmonic, ctx.verdict.holds) {
        (Some(cand), false) => {
            let grid = cand.grid.clone();
            let rep = operators::verify_harmonic(cand, &ctx.triplet, &grid)?;
            let resid = rep.residual_fourier.max(rep.residual_direct);
            Ok(CheckResult {
                name: "harmonic".into(),
                pass: rep.pass,
                residual: Some(resid),
                tolerance: tol * (1.0 + rep.sup_f),
                detail: format!(
                    "{} frequencies, sup|f| = {:.3}, fourier {:.3e}, direct {:.3e}",
                    cand.terms.len(),
                    rep.sup_f,
                    rep.residual_fourier,
                    rep.residual_direct
                ),
            })
        }
        (None, true) => {
            // Liouville: construction must refuse, and the scan must find no
            // zero off the origin.
            let refused = matches!(
                operators::make_harmonic(&ctx.verdict.zero_set, ctx.seed, 16),
                Err(OperatorError::TrivialZeroSet)
            );
            let candidates =
                zeroset::zero_scan_numeric(&ctx.symbol, ctx.scan.box_halfwidth, ctx.scan.step);
            let spurious = candidates
                .iter()
                .filter(|c| {
                    c.residual < 1e-6
                        && c.location.iter().map(|x| x * x).sum::<f64>().sqrt()
                            > 10.0 * ctx.scan.step
                })
                .count();
            Ok(CheckResult {
                name: "harmonic".into(),
                pass: refused && spurious == 0,
                residual: None,
                tolerance: tol,
                detail: format!(
                    "correctly refused: {refused}; scan candidates off origin with residual < 1e-6: {spurious} (box {})",
                    ctx.scan.box_halfwidth
                ),
            })
        }
        _ => Ok(skipped(
            "harmonic",
            "numeric-mode non-Liouville evidence: no exact zero set to build from",
            tol,
        )),
    }
}

fn cross_application_check(ctx: &Ctx, tol: f64) -> Result<CheckResult, ReportError> {
    if !ctx.triplet.measure().is_discrete_or_null() {
        return Ok(skipped(
            "cross-application",
            "direct path needs a finite discrete measure",
            tol,
        ));
    }
    let dim = ctx.triplet.dim();
    let grid = TorusGrid::uniform(dim, 1.0, 32)?;
    let mut rng = StdRng::seed_from_u64(ctx.seed ^ 0xc4);
    let mut terms = Vec::new();
    for _ in 0..5 {
        let k: Vec<i64> = (0..dim).map(|_| rng.gen_range(-8i64..8)).collect();
        let idx = grid.index_of_freq(&k)?;
        let freq = grid.frequency(idx);
        terms.push((
            freq,
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        ));
    }
    let poly = TrigPolynomial::new(terms);
    let disc = operators::crosscheck_applications(&poly, &ctx.triplet, &grid)?;
    Ok(CheckResult {
        name: "cross-application".into(),
        pass: disc <= tol,
        residual: Some(disc),
        tolerance: tol,
        detail: "5 random grid harmonics, spectral vs integro-differential".into(),
    })
}

fn resolvent_check(ctx: &Ctx, tol: f64) -> Result<CheckResult, ReportError> {
    if !ctx.triplet.measure().is_discrete_or_null() {
        return Ok(skipped("resolvent", "needs a discrete model", tol));
    }
    let tau = 1.0;
    let mut detail = String::new();
    let mut pass = true;
    let mut worst: Option<f64> = None;
    if let Some(cand) = &ctx.harmonic {
        let f = cand.realization();
        let r = operators::resolvent_fixed_point(&f, &ctx.triplet, tau)?;
        let bound = tol * (1.0 + f.sup_norm());
        pass &= r <= bound;
        worst = Some(r);
        detail.push_str(&format!("harmonic residual {r:.3e} (bound {bound:.3e})"));
    }
    // A non-harmonic grid function must violate the fixed point.
    let grid = TorusGrid::uniform(ctx.triplet.dim(), std::f64::consts::TAU, 32)?;
    let symbol = &ctx.symbol;
    let mut bad_freq = None;
    for i in 0..grid.len() {
        let xi = grid.frequency(i);
        if symbol.eval(&xi)?.norm() > 1e-2 {
            bad_freq = Some(xi);
            break;
        }
    }
    if let Some(xi) = bad_freq {
        let f = GridFunction::from_fn(grid, |x| {
            Complex64::new(
                0.0,
                xi.iter().zip(x).map(|(a, b)| a * b).sum::<f64>(),
            )
            .exp()
        });
        let r = operators::resolvent_fixed_point(&f, &ctx.triplet, tau)?;
        pass &= r > 1e-2;
        if !detail.is_empty() {
            detail.push_str("; ");
        }
        detail.push_str(&format!("non-harmonic residual {r:.3e} (must exceed 1e-2)"));
    }
    if detail.is_empty() {
        return Ok(skipped(
            "resolvent",
            "no harmonic candidate and no frequency with |psi| > 1e-2 on the probe grid",
            tol,
        ));
    }
    Ok(CheckResult {
        name: "resolvent".into(),
        pass,
        residual: worst,
        tolerance: tol,
        detail,
    })
}

fn semigroup_check(ctx: &Ctx, tol: f64) -> Result<CheckResult, ReportError> {
    if !ctx.triplet.measure().is_discrete_or_null() {
        return Ok(skipped("semigroup", "needs a discrete model", tol));
    }
    let f = match &ctx.harmonic {
        Some(cand) => cand.realization(),
        None => {
            let grid = TorusGrid::uniform(ctx.triplet.dim(), 1.0, 32)?;
            GridFunction::constant(grid, Complex64::new(1.0, 0.0))
        }
    };
    let check = operators::semigroup_fixed_point(&f, &ctx.triplet, 1.0)?;
    if !check.conclusive {
        return Ok(CheckResult {
            name: "semigroup".into(),
            pass: true,
            residual: Some(check.residual),
            tolerance: tol,
            detail: "non-conclusive: symbol is not real-valued (reported only)".into(),
        });
    }
    let bound = tol * (1.0 + f.sup_norm());
    Ok(CheckResult {
        name: "semigroup".into(),
        pass: check.residual <= bound,
        residual: Some(check.residual),
        tolerance: bound,
        detail: "P_1 f = f on a harmonic (or constant) function, real symbol".into(),
    })
}

fn pairing_check(ctx: &Ctx, tol: f64) -> Result<CheckResult, ReportError> {
    if !ctx.triplet.measure().is_discrete_or_null() {
        return Ok(skipped("pairing", "needs a discrete model", tol));
    }
    let (f, grid) = match &ctx.harmonic {
        Some(cand) => (cand.realization(), cand.grid.clone()),
        None => {
            let grid = TorusGrid::uniform(ctx.triplet.dim(), 1.0, 64)?;
            (
                GridFunction::constant(grid.clone(), Complex64::new(1.0, 0.0)),
                grid,
            )
        }
    };
    let min_l = grid.period().iter().cloned().fold(f64::INFINITY, f64::min);
    let center: Vec<f64> = grid.period().iter().map(|l| 0.5 * l).collect();
    let bump = Bump::new(center, 0.35 * min_l);
    let v = operators::distributional_pairing(&f, &bump, &ctx.triplet)?;
    let bound = tol * (1.0 + f.sup_norm());
    Ok(CheckResult {
        name: "pairing".into(),
        pass: v.norm() <= bound,
        residual: Some(v.norm()),
        tolerance: bound,
        detail: "⟨Lf, φ⟩ against a centered bump on a harmonic (or constant) f".into(),
    })
}

fn density_positivity_check(ctx: &Ctx, tol: f64) -> Result<CheckResult, ReportError> {
    if !ctx.triplet.measure().is_discrete_or_null() {
        return Ok(skipped("density-positivity", "needs a discrete model", tol));
    }
    if !ctx.verdict.holds {
        return Ok(skipped(
            "density-positivity",
            "periodized surrogate positivity is only asserted for Liouville models",
            tol,
        ));
    }
    let dim = ctx.triplet.dim();
    let (l, n) = match dim {
        1 => (16.0, 256),
        2 => (12.0, 64),
        _ => (8.0, 16),
    };
    let grid = TorusGrid::uniform(dim, l, n)?;
    let rep = operators::transition_density(&ctx.triplet, 1.0, &grid)?;
    let pass = rep.min_real > 0.0 && rep.max_abs_imag <= 1e-8;
    Ok(CheckResult {
        name: "density-positivity".into(),
        pass,
        residual: Some(rep.min_real),
        tolerance: tol,
        detail: format!(
            "grid min {:.3e}, max |Im| {:.3e}; Liouville verdict holds — consistent",
            rep.min_real, rep.max_abs_imag
        ),
    })
}
