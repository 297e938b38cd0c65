//! Command-line front end: model files in, verdicts/reports out.
//!
//! Exit codes: 0 success, 1 check failure, 2 input error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use liouville_core::bernstein::{
    corollary1_equivalence_check, halfplane_zero_classification, HalfplaneZeros,
};
use liouville_core::model::{parse_model, parse_xi_list, ModelFile};
use liouville_core::report::{run_report, ReportOptions, DEFAULT_CHECKS, VERIFY_CHECKS};
use liouville_core::triplet::validate_triplet;
use liouville_core::zeroset::{self, ScanOptions, VerdictMethod};

#[derive(Parser)]
#[command(
    name = "liouville",
    version,
    about = "Liouville property of Lévy generators via exact zero-set groups"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// Override the default check tolerance.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Grid points per axis (power of two).
    #[arg(long = "grid")]
    grid_points: Option<usize>,
    /// Grid period per axis.
    #[arg(long)]
    period: Option<f64>,
    /// Force the numeric-heuristic mode even for rational models.
    #[arg(long)]
    numeric: bool,
    /// Halfwidth of the numeric scan box.
    #[arg(long)]
    scan_box: Option<f64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the triplet invariants of a model file.
    Validate { model: PathBuf },
    /// Evaluate the characteristic exponent at a point.
    Eval {
        model: PathBuf,
        /// Evaluation point as comma-separated numbers, e.g. "(0.5, 1)".
        #[arg(long)]
        xi: String,
    },
    /// Print the zero set {ψ=0} (exact for rational models).
    ZeroSet {
        model: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Decide the Liouville property and print the periodicity group.
    Liouville {
        model: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Compare {ψ=0}^⊥ against the triplet-side group closure(G_ν + W).
    Crosscheck { model: PathBuf },
    /// Classify the half-plane zeros of the model's Bernstein function and
    /// check zero-set preservation under subordination.
    Subordinate { model: PathBuf },
    /// Run harmonic, fixed-point and cross-application checks.
    Verify {
        model: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Write the full machine-readable report.
    Report {
        model: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Write the text report to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Emit JSON on stdout.
        #[arg(long)]
        json: bool,
    },
}

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_INPUT_ERROR: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT_ERROR)
        }
    }
}

fn load(path: &Path) -> anyhow::Result<ModelFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
    let model = parse_model(&text)
        .map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    Ok(model)
}

fn report_options(c: &Common) -> ReportOptions {
    ReportOptions {
        tolerance: c.tolerance.unwrap_or(1e-10),
        grid_points: c.grid_points,
        period: c.period,
        force_numeric: c.numeric,
        seed: None,
        scan_box: c.scan_box,
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.cmd {
        Cmd::Validate { model } => {
            let m = load(&model)?;
            let rep = validate_triplet(&m.to_triplet());
            print!("{rep}");
            Ok(if rep.passed() { 0 } else { EXIT_CHECK_FAILED })
        }
        Cmd::Eval { model, xi } => {
            let m = load(&model)?;
            let xi = parse_xi_list(&xi).map_err(|e| anyhow::anyhow!("--xi: {e}"))?;
            let sym = m.to_symbol()?;
            let v = sym.eval(&xi)?;
            println!("psi({xi:?}) = {} + {}i", v.re, v.im);
            let tail = sym.certified_tail_bound();
            if tail > 0.0 {
                println!("certified tail bound = {tail:e}");
            }
            Ok(0)
        }
        Cmd::ZeroSet { model, common } => {
            let m = load(&model)?;
            let t = m.to_triplet();
            if t.is_rational_discrete() && !common.numeric {
                let zs = zeroset::zero_set_exact(&t)?;
                println!("zero set = {zs}");
                println!("orthogonal subgroup = {}", zs.orthogonal());
                Ok(0)
            } else {
                let sym = m.to_symbol()?;
                let mut scan = ScanOptions::for_dim(m.dim);
                if let Some(b) = common.scan_box {
                    scan.box_halfwidth = b;
                }
                let cands = zeroset::zero_scan_numeric(&sym, scan.box_halfwidth, scan.step);
                println!(
                    "numeric scan over [-{0}, {0}]^{1} (heuristic, residuals only):",
                    scan.box_halfwidth, m.dim
                );
                for c in cands.iter().take(24) {
                    println!("  candidate {:?}  |psi| = {:e}", c.location, c.residual);
                }
                Ok(0)
            }
        }
        Cmd::Liouville { model, common } => {
            let m = load(&model)?;
            let sym = m.to_symbol()?;
            let mut scan = ScanOptions::for_dim(m.dim);
            if let Some(b) = common.scan_box {
                scan.box_halfwidth = b;
            }
            let v = if common.numeric {
                zeroset::decide_liouville_numeric(&sym, &scan)
            } else {
                zeroset::decide_liouville_with(&sym, &scan)?
            };
            let method = match v.method {
                VerdictMethod::Exact => "exact",
                VerdictMethod::NumericHeuristic => "numeric-heuristic",
            };
            println!(
                "Liouville: {} ({method}); {{psi=0}} = {}; periodicity group = {}",
                if v.holds { "YES" } else { "NO" },
                v.zero_set,
                v.periodicity_group
            );
            for w in &v.witnesses {
                println!("  witness {:?}  |psi| = {:e}", w.location, w.residual);
            }
            if let Some(cands) = &v.scan {
                let floor = cands
                    .iter()
                    .filter(|c| c.location.iter().map(|x| x * x).sum::<f64>().sqrt() > 0.1)
                    .map(|c| c.residual)
                    .fold(f64::INFINITY, f64::min);
                if floor.is_finite() {
                    println!("  min |psi| off origin over scan = {floor:e}");
                }
            }
            Ok(0)
        }
        Cmd::Crosscheck { model } => {
            let m = load(&model)?;
            let cc = zeroset::crosscheck_corollary2(&m.to_triplet())?;
            println!("lhs ({{psi=0}} orthogonal) = {}", cc.lhs);
            println!("rhs (closure(G_nu + W))   = {}", cc.rhs);
            println!("equal = {}", cc.equal);
            Ok(if cc.equal { 0 } else { EXIT_CHECK_FAILED })
        }
        Cmd::Subordinate { model } => {
            let m = load(&model)?;
            let Some(g) = m.bernstein_function()? else {
                anyhow::bail!("model has no [bernstein] section");
            };
            match halfplane_zero_classification(&g) {
                HalfplaneZeros::OnlyZeroAtOrigin => {
                    println!("half-plane zeros: only the origin");
                }
                HalfplaneZeros::ImaginaryAxisLattice(grp) => {
                    println!("half-plane zeros: imaginary axis lattice {grp}");
                }
                HalfplaneZeros::Heuristic(cands) => {
                    println!("half-plane zeros: heuristic evidence ({} candidates)", cands.len());
                }
            }
            let t = m.to_triplet();
            if t.is_rational_discrete() {
                let res = corollary1_equivalence_check(&g, &t)?;
                println!("condition met (zeros reduce to origin) = {}", res.condition_met);
                println!(
                    "zero sets equal = {} (max generator residual {:e}, off-group candidates {})",
                    res.zero_sets_equal,
                    res.max_generator_residual,
                    res.off_group_candidates.len()
                );
                if res.condition_met && !res.zero_sets_equal {
                    return Ok(EXIT_CHECK_FAILED);
                }
            } else {
                println!("triplet not rational: zero-set preservation check skipped");
            }
            Ok(0)
        }
        Cmd::Verify { model, common } => {
            let m = load(&model)?;
            let rep = run_report(&m, VERIFY_CHECKS, &report_options(&common))?;
            for c in &rep.checks {
                let res = c
                    .residual
                    .map(|r| format!(" residual = {r:e}"))
                    .unwrap_or_default();
                println!(
                    "{} {}{} :: {}",
                    if c.pass { "pass" } else { "FAIL" },
                    c.name,
                    res,
                    c.detail
                );
            }
            Ok(if rep.all_passed() { 0 } else { EXIT_CHECK_FAILED })
        }
        Cmd::Report {
            model,
            common,
            out,
            json,
        } => {
            let m = load(&model)?;
            let rep = run_report(&m, DEFAULT_CHECKS, &report_options(&common))?;
            let text = rep.render_text();
            if let Some(path) = &out {
                std::fs::write(&path, &text)
                    .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?;
            }
            if json {
                println!("{}", rep.to_json());
            } else if out.is_none() {
                print!("{text}");
            }
            Ok(if rep.all_passed() { 0 } else { EXIT_CHECK_FAILED })
        }
    }
}
