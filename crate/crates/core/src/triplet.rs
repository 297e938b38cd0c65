//! Lévy triplets (b, Q, ν) and the measure-level operations on them:
//! validation, truncation of the jump measure, and reduction of bounded
//! symbols to their pure-jump form.

use std::fmt;
use std::sync::Arc;

use num_traits::One;
use thiserror::Error;

use crate::rational::Rat;
use crate::scalar::{all_exact, norm_sq, Scalar};

/// One atom a·δ_b of a discrete Lévy measure.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub mass: Scalar,
    pub location: Vec<Scalar>,
}

impl Atom {
    pub fn new(mass: Scalar, location: Vec<Scalar>) -> Self {
        Atom { mass, location }
    }

    /// Whether the atom sits strictly inside the unit ball, i.e. inside the
    /// compensator region. The indicator 1_{(0,1)}(|x|) is open at 1, so an
    /// atom with |b| = 1 exactly is *not* compensated.
    pub fn compensated(&self) -> bool {
        norm_sq(&self.location).lt_rat(&Rat::one())
    }

    pub fn location_f64(&self) -> Vec<f64> {
        self.location.iter().map(Scalar::to_f64).collect()
    }
}

/// 1-D Lévy density with its quadrature configuration. The tail mass beyond
/// the cutoff is supplied by the constructor and certifies the truncation
/// error 2·ν(|x| > R) of the evaluated symbol.
#[derive(Clone)]
pub struct DensityMeasure {
    pub density: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    /// Dyadic subdivision depth of the inner ball (0, 1).
    pub inner_depth: u32,
    /// Integration cutoff R for the tail |x| ≥ 1.
    pub cutoff: f64,
    /// ν(|x| > R), finite by assumption.
    pub tail_mass: f64,
    /// Requested absolute quadrature tolerance.
    pub quad_tol: f64,
    pub label: String,
}

impl fmt::Debug for DensityMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DensityMeasure")
            .field("label", &self.label)
            .field("inner_depth", &self.inner_depth)
            .field("cutoff", &self.cutoff)
            .field("tail_mass", &self.tail_mass)
            .finish()
    }
}

impl DensityMeasure {
    /// Symmetric α-stable Lévy density c·|x|^{−1−α}, normalized so that the
    /// full compensated integral is scale·|ξ|^α. The tail mass beyond the
    /// cutoff has the closed form 2c·R^{−α}/α.
    pub fn symmetric_stable(alpha: f64, scale: f64, cutoff: f64, depth: u32) -> Self {
        let c = scale * special_stable_constant(alpha);
        DensityMeasure {
            density: Arc::new(move |x: f64| c * x.abs().powf(-1.0 - alpha)),
            inner_depth: depth,
            cutoff,
            tail_mass: 2.0 * c * cutoff.powf(-alpha) / alpha,
            quad_tol: 1e-9,
            label: format!("stable(alpha={alpha}, scale={scale})"),
        }
    }
}

/// Γ(1+α)·sin(πα/2)/π, the inverse of ∫(1−cos u)|u|^{−1−α}du.
fn special_stable_constant(alpha: f64) -> f64 {
    gamma(1.0 + alpha) * (std::f64::consts::PI * alpha / 2.0).sin() / std::f64::consts::PI
}

/// Lanczos approximation of Γ, accurate to ~1e-13 on the range used here.
fn gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut a = COEF[0];
        let t = x + G + 0.5;
        for (i, &c) in COEF.iter().enumerate().skip(1) {
            a += c / (x + i as f64);
        }
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
    }
}

#[derive(Debug, Clone)]
pub enum LevyMeasure {
    Null,
    DiscreteAtoms(Vec<Atom>),
    Density(DensityMeasure),
}

impl LevyMeasure {
    pub fn atoms(&self) -> &[Atom] {
        match self {
            LevyMeasure::DiscreteAtoms(a) => a,
            _ => &[],
        }
    }

    pub fn is_discrete_or_null(&self) -> bool {
        !matches!(self, LevyMeasure::Density(_))
    }
}

/// The Lévy–Khintchine coefficients (b, Q, ν). The covariance is symmetrized
/// on ingestion; validity is reported, never enforced, by [`validate_triplet`].
#[derive(Debug, Clone)]
pub struct LevyTriplet {
    drift: Vec<Scalar>,
    covariance: Vec<Vec<Scalar>>,
    measure: LevyMeasure,
}

impl LevyTriplet {
    pub fn new(drift: Vec<Scalar>, covariance: Vec<Vec<Scalar>>, measure: LevyMeasure) -> Self {
        let n = drift.len();
        let half = Scalar::from_rat(Rat::new(1.into(), 2.into()));
        let mut q = covariance;
        if q.len() == n && q.iter().all(|row| row.len() == n) {
            let orig = q.clone();
            for i in 0..n {
                for j in 0..n {
                    q[i][j] = &(&orig[i][j] + &orig[j][i]) * &half;
                }
            }
        }
        LevyTriplet {
            drift,
            covariance: q,
            measure,
        }
    }

    /// Pure-jump triplet in dimension n with the given atoms.
    pub fn compound_poisson(dim: usize, atoms: Vec<Atom>) -> Self {
        LevyTriplet::new(
            vec![Scalar::zero(); dim],
            vec![vec![Scalar::zero(); dim]; dim],
            LevyMeasure::DiscreteAtoms(atoms),
        )
    }

    /// Brownian triplet with unit covariance.
    pub fn brownian(dim: usize) -> Self {
        let mut q = vec![vec![Scalar::zero(); dim]; dim];
        for (i, row) in q.iter_mut().enumerate() {
            row[i] = Scalar::from_int(1);
        }
        LevyTriplet::new(vec![Scalar::zero(); dim], q, LevyMeasure::Null)
    }

    pub fn dim(&self) -> usize {
        self.drift.len()
    }

    pub fn drift(&self) -> &[Scalar] {
        &self.drift
    }

    pub fn covariance(&self) -> &[Vec<Scalar>] {
        &self.covariance
    }

    pub fn measure(&self) -> &LevyMeasure {
        &self.measure
    }

    pub fn drift_f64(&self) -> Vec<f64> {
        self.drift.iter().map(Scalar::to_f64).collect()
    }

    pub fn covariance_f64(&self) -> Vec<Vec<f64>> {
        self.covariance
            .iter()
            .map(|row| row.iter().map(Scalar::to_f64).collect())
            .collect()
    }

    /// (mass, location, compensated) per atom, ready for evaluation loops.
    pub fn atoms_f64(&self) -> Vec<(f64, Vec<f64>, bool)> {
        self.measure
            .atoms()
            .iter()
            .map(|a| (a.mass.to_f64(), a.location_f64(), a.compensated()))
            .collect()
    }

    /// Exact zero-set analysis needs every coefficient rational and the
    /// measure discrete (or null).
    pub fn is_rational_discrete(&self) -> bool {
        self.measure.is_discrete_or_null()
            && all_exact(&self.drift)
            && self.covariance.iter().all(|row| all_exact(row))
            && self
                .measure
                .atoms()
                .iter()
                .all(|a| a.mass.is_exact() && all_exact(&a.location))
    }

    /// Effective drift b + Σ_{|b_j|<1} a_j b_j: the linear coefficient of
    /// Im ψ on the set where every atom phase is a multiple of 2π.
    pub fn effective_drift(&self) -> Vec<Scalar> {
        let mut b = self.drift.clone();
        for atom in self.measure.atoms() {
            if atom.compensated() {
                for (bi, xi) in b.iter_mut().zip(&atom.location) {
                    *bi = &*bi + &(&atom.mass * xi);
                }
            }
        }
        b
    }

    /// Mass of ν outside the closed ball of the given radius (tail integral
    /// of the density part estimated by quadrature plus its certified tail).
    pub fn mass_outside(&self, radius: f64) -> f64 {
        match &self.measure {
            LevyMeasure::Null => 0.0,
            LevyMeasure::DiscreteAtoms(atoms) => {
                let r2 = Rat::from_float(radius * radius).unwrap();
                atoms
                    .iter()
                    .filter(|a| !norm_sq(&a.location).lt_rat(&r2))
                    .map(|a| a.mass.to_f64())
                    .sum()
            }
            LevyMeasure::Density(d) => {
                if radius >= d.cutoff {
                    d.tail_mass
                } else {
                    let mut s = d.tail_mass;
                    // ∫_{radius ≤ |x| ≤ R} f, both signs, log-spaced panels.
                    let mut lo = radius;
                    while lo < d.cutoff {
                        let hi = (lo * 2.0).min(d.cutoff);
                        s += gauss_legendre(lo, hi, |x| (d.density)(x) + (d.density)(-x));
                        lo = hi;
                    }
                    s
                }
            }
        }
    }
}

const GL16_NODES: [f64; 8] = [
    0.095_012_509_837_637_44,
    0.281_603_550_779_258_9,
    0.458_016_777_657_227_4,
    0.617_876_244_402_643_7,
    0.755_404_408_355_003_0,
    0.865_631_202_387_831_7,
    0.944_575_023_073_232_6,
    0.989_400_934_991_649_9,
];
const GL16_WEIGHTS: [f64; 8] = [
    0.189_450_610_455_068_5,
    0.182_603_415_044_923_6,
    0.169_156_519_395_002_54,
    0.149_595_988_816_576_73,
    0.124_628_971_255_533_87,
    0.095_158_511_682_492_79,
    0.062_253_523_938_647_89,
    0.027_152_459_411_754_096,
];

/// 16-point Gauss–Legendre on [a, b].
pub(crate) fn gauss_legendre(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = 0.0;
    for (&x, &w) in GL16_NODES.iter().zip(&GL16_WEIGHTS) {
        s += w * (f(c + h * x) + f(c - h * x));
    }
    s * h
}

/// One line of a validation report.
#[derive(Debug, Clone)]
pub struct CheckItem {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Invariant-by-invariant report; reported, never thrown.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub items: Vec<CheckItem>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.items {
            writeln!(
                f,
                "{} {}: {}",
                if item.pass { "pass" } else { "FAIL" },
                item.name,
                item.detail
            )?;
        }
        Ok(())
    }
}

/// Check the Lévy–Khintchine hypotheses: dimensional consistency, a positive
/// semidefinite (symmetrized) covariance, strictly positive atom masses at
/// nonzero pairwise-distinct locations, and integrability of the measure.
pub fn validate_triplet(t: &LevyTriplet) -> ValidationReport {
    let n = t.dim();
    let mut items = Vec::new();

    let dims_ok = t.covariance.len() == n
        && t.covariance.iter().all(|r| r.len() == n)
        && t.measure.atoms().iter().all(|a| a.location.len() == n);
    items.push(CheckItem {
        name: "dimensions".into(),
        pass: dims_ok,
        detail: format!("ambient dimension {n}"),
    });

    if dims_ok && n > 0 {
        let q = t.covariance_f64();
        let eigs = symmetric_eigenvalues(&q);
        let spectral = eigs.iter().fold(0.0_f64, |m, e| m.max(e.abs()));
        let min_eig = eigs.iter().fold(f64::INFINITY, |m, &e| m.min(e));
        let pass = min_eig >= -1e-12 * spectral.max(1.0);
        items.push(CheckItem {
            name: "covariance positive semidefinite".into(),
            pass,
            detail: format!("smallest eigenvalue {min_eig:.3e}, spectral norm {spectral:.3e}"),
        });
    }

    for (j, atom) in t.measure.atoms().iter().enumerate() {
        if !atom.mass.is_positive() {
            items.push(CheckItem {
                name: format!("atom {j} mass positive"),
                pass: false,
                detail: format!("mass {}", atom.mass.to_f64()),
            });
        }
        if atom.location.iter().all(Scalar::is_zero) {
            items.push(CheckItem {
                name: format!("atom {j} location nonzero"),
                pass: false,
                detail: "atom at the origin".into(),
            });
        }
    }
    let atoms = t.measure.atoms();
    let mut distinct = true;
    for i in 0..atoms.len() {
        for j in i + 1..atoms.len() {
            if atoms[i].location == atoms[j].location {
                distinct = false;
                items.push(CheckItem {
                    name: "atom locations pairwise distinct".into(),
                    pass: false,
                    detail: format!("atoms {i} and {j} coincide"),
                });
            }
        }
    }
    if distinct && !atoms.is_empty() {
        items.push(CheckItem {
            name: "atom locations pairwise distinct".into(),
            pass: true,
            detail: format!("{} atoms", atoms.len()),
        });
    }
    if atoms
        .iter()
        .all(|a| a.mass.is_positive() && !a.location.iter().all(Scalar::is_zero))
        && !atoms.is_empty()
    {
        items.push(CheckItem {
            name: "atom masses positive, locations nonzero".into(),
            pass: true,
            detail: String::new(),
        });
    }

    // ∫ min(|x|², 1) ν(dx) < ∞: automatic for finite atom lists; for density
    // measures the configured tail mass must be finite.
    match &t.measure {
        LevyMeasure::Density(d) => {
            let pass = d.tail_mass.is_finite() && d.cutoff > 0.0;
            items.push(CheckItem {
                name: "integrability bound".into(),
                pass,
                detail: format!("tail mass nu(|x|>{}) = {:.6e}", d.cutoff, d.tail_mass),
            });
        }
        LevyMeasure::DiscreteAtoms(atoms) => {
            let bound: f64 = atoms
                .iter()
                .map(|a| {
                    let n2 = norm_sq(&a.location).to_f64();
                    a.mass.to_f64() * n2.min(1.0)
                })
                .sum();
            items.push(CheckItem {
                name: "integrability bound".into(),
                pass: bound.is_finite(),
                detail: format!("sum a_j*min(|b_j|^2,1) = {bound:.6e}"),
            });
        }
        LevyMeasure::Null => {}
    }

    ValidationReport { items }
}

#[derive(Debug, Error)]
pub enum TripletError {
    #[error("truncation radius {0} < 1 would cut into the compensator region")]
    RadiusBelowOne(f64),
}

/// A truncated triplet together with the Lemma-type uniform error bound
/// sup_ξ |ψ − ψ_n| ≤ 2ν(B_n^c).
#[derive(Debug, Clone)]
pub struct Truncation {
    pub triplet: LevyTriplet,
    pub sup_error_bound: f64,
}

/// Replace ν by 1_{B_r(0)}·ν: atoms with |b_j| ≥ r are removed, density
/// cutoffs shrink to min(R, r). The attached bound certifies the removed mass.
pub fn truncate_measure(t: &LevyTriplet, radius: f64) -> Result<Truncation, TripletError> {
    if radius < 1.0 {
        return Err(TripletError::RadiusBelowOne(radius));
    }
    let (measure, removed) = match &t.measure {
        LevyMeasure::Null => (LevyMeasure::Null, 0.0),
        LevyMeasure::DiscreteAtoms(atoms) => {
            let r2 = Rat::from_float(radius * radius).unwrap();
            let kept: Vec<Atom> = atoms
                .iter()
                .filter(|a| norm_sq(&a.location).lt_rat(&r2))
                .cloned()
                .collect();
            let removed: f64 = atoms
                .iter()
                .filter(|a| !norm_sq(&a.location).lt_rat(&r2))
                .map(|a| a.mass.to_f64())
                .sum();
            let m = if kept.is_empty() {
                LevyMeasure::Null
            } else {
                LevyMeasure::DiscreteAtoms(kept)
            };
            (m, removed)
        }
        LevyMeasure::Density(d) => {
            let removed = t.mass_outside(radius);
            let mut nd = d.clone();
            nd.cutoff = d.cutoff.min(radius);
            nd.tail_mass = 0.0; // everything beyond the new cutoff is removed, not deferred
            (LevyMeasure::Density(nd), removed)
        }
    };
    Ok(Truncation {
        triplet: LevyTriplet {
            drift: t.drift.clone(),
            covariance: t.covariance.clone(),
            measure,
        },
        sup_error_bound: 2.0 * removed,
    })
}

/// Why a symbol is not of the bounded pure-jump form ∫(1−e^{ix·ξ})ν(dx).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnboundedReason {
    GaussianPartPresent,
    EffectiveDriftNonzero,
    DensityMeasure,
}

impl fmt::Display for UnboundedReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnboundedReason::GaussianPartPresent => write!(f, "Q != 0"),
            UnboundedReason::EffectiveDriftNonzero => {
                write!(f, "effective drift b + sum a_j b_j does not vanish")
            }
            UnboundedReason::DensityMeasure => write!(f, "measure is not a finite atom list"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BoundedReduction {
    /// The finite measure ν with ψ(ξ) = Σ a_j(1 − e^{i b_j·ξ}).
    pub measure: Vec<Atom>,
    /// True when a nonzero stated drift is cancelled by the compensator.
    pub drift_cancels: bool,
}

/// A symbol is bounded iff ν is finite and ψ reduces to the pure-jump form:
/// Q = 0 and the effective drift vanishes. Returns the reduced form or names
/// the violated condition.
pub fn bounded_reduction(t: &LevyTriplet) -> Result<BoundedReduction, UnboundedReason> {
    if !t.measure.is_discrete_or_null() {
        return Err(UnboundedReason::DensityMeasure);
    }
    if t.covariance.iter().any(|row| row.iter().any(|x| !x.is_zero())) {
        return Err(UnboundedReason::GaussianPartPresent);
    }
    let beff = t.effective_drift();
    if beff.iter().any(|x| !x.is_zero()) {
        return Err(UnboundedReason::EffectiveDriftNonzero);
    }
    Ok(BoundedReduction {
        measure: t.measure.atoms().to_vec(),
        drift_cancels: t.drift.iter().any(|x| !x.is_zero()),
    })
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub(crate) fn symmetric_eigenvalues(m: &[Vec<f64>]) -> Vec<f64> {
    let n = m.len();
    if n == 0 {
        return Vec::new();
    }
    let mut a: Vec<Vec<f64>> = m.to_vec();
    for _sweep in 0..64 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}
