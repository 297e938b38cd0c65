//! Apply 𝓛_ψ two independent ways and verify the structural consequences.
//!
//! The spectral path multiplies the discrete spectrum by −ψ(ξ_k) (exact for
//! trigonometric polynomials with grid-exact frequencies); the direct path
//! evaluates the integro-differential form
//! b·∇u + ½∇·Q∇u + Σ a_j(u(x+b_j) − u(x) + b_j·∇u(x)·1_{|b_j|<1})
//! pointwise. The compensator sign pairs with the symbol convention
//! ψ(ξ) = −ib·ξ + ½Qξ·ξ + Σ a_j(1 − e^{ib_j·ξ} − ib_j·ξ·1_{|b_j|<1}): on a
//! plane wave e^{iξ·x} the direct form then produces exactly −ψ(ξ)e^{iξ·x},
//! so both paths realize the same operator.
//!
//! On top of the two paths: distributional pairings against smooth compactly
//! supported bumps, harmonic-counterexample construction from a nontrivial
//! zero set, and resolvent/semigroup fixed-point checks.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use thiserror::Error;

use crate::grid::{GridError, GridFunction, TorusGrid};
use crate::groups::{ClosedSubgroup, LatticeScale};
use crate::symbol::{SymbolError, SymbolHandle};
use crate::triplet::{LevyMeasure, LevyTriplet};

#[derive(Debug, Error)]
pub enum OperatorError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("the direct integro-differential path requires a finite discrete measure")]
    DensityUnsupported,
    #[error("bump support (diameter {0}) exceeds the grid period {1}")]
    BumpTooWide(f64, f64),
    #[error("trivial zero set: no bounded non-constant harmonic function exists")]
    TrivialZeroSet,
    #[error("zero-set generator needs frequency index {0} but the grid only resolves |k| < {1}")]
    GridTooCoarse(i64, usize),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// A function with two analytic derivatives, as the direct path needs.
pub trait SmoothFunction {
    fn value(&self, x: &[f64]) -> Complex64;
    fn gradient(&self, x: &[f64]) -> Vec<Complex64>;
    fn hessian(&self, x: &[f64]) -> Vec<Vec<Complex64>>;
}

/// Σ c·e^{iω·x} with analytic derivatives.
#[derive(Debug, Clone)]
pub struct TrigPolynomial {
    pub terms: Vec<(Vec<f64>, Complex64)>,
}

impl TrigPolynomial {
    pub fn new(terms: Vec<(Vec<f64>, Complex64)>) -> Self {
        TrigPolynomial { terms }
    }
}

impl SmoothFunction for TrigPolynomial {
    fn value(&self, x: &[f64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(w, c)| c * Complex64::new(0.0, dot(w, x)).exp())
            .sum()
    }

    fn gradient(&self, x: &[f64]) -> Vec<Complex64> {
        let n = x.len();
        let mut g = vec![Complex64::ZERO; n];
        for (w, c) in &self.terms {
            let e = c * Complex64::new(0.0, dot(w, x)).exp();
            for (gk, wk) in g.iter_mut().zip(w) {
                *gk += e * Complex64::new(0.0, *wk);
            }
        }
        g
    }

    fn hessian(&self, x: &[f64]) -> Vec<Vec<Complex64>> {
        let n = x.len();
        let mut h = vec![vec![Complex64::ZERO; n]; n];
        for (w, c) in &self.terms {
            let e = c * Complex64::new(0.0, dot(w, x)).exp();
            for k in 0..n {
                for l in 0..n {
                    h[k][l] -= e * (w[k] * w[l]);
                }
            }
        }
        h
    }
}

/// The classical bump exp(1 − 1/(1 − |x−x₀|²/r²)) on |x−x₀| < r, with
/// analytic gradient and Hessian.
#[derive(Debug, Clone)]
pub struct Bump {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Bump {
    pub fn new(center: Vec<f64>, radius: f64) -> Self {
        Bump { center, radius }
    }

    fn s_and_y(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let y: Vec<f64> = x.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        let s = y.iter().map(|v| v * v).sum::<f64>() / (self.radius * self.radius);
        (s, y)
    }
}

impl SmoothFunction for Bump {
    fn value(&self, x: &[f64]) -> Complex64 {
        let (s, _) = self.s_and_y(x);
        if s >= 1.0 {
            return Complex64::ZERO;
        }
        Complex64::new((1.0 - 1.0 / (1.0 - s)).exp(), 0.0)
    }

    fn gradient(&self, x: &[f64]) -> Vec<Complex64> {
        let (s, y) = self.s_and_y(x);
        let n = x.len();
        if s >= 1.0 {
            return vec![Complex64::ZERO; n];
        }
        let w = 1.0 / (1.0 - s);
        let phi = (1.0 - w).exp();
        let r2 = self.radius * self.radius;
        y.iter()
            .map(|yk| Complex64::new(-phi * w * w * 2.0 * yk / r2, 0.0))
            .collect()
    }

    fn hessian(&self, x: &[f64]) -> Vec<Vec<Complex64>> {
        let (s, y) = self.s_and_y(x);
        let n = x.len();
        if s >= 1.0 {
            return vec![vec![Complex64::ZERO; n]; n];
        }
        let w = 1.0 / (1.0 - s);
        let phi = (1.0 - w).exp();
        let r2 = self.radius * self.radius;
        let ds: Vec<f64> = y.iter().map(|yk| 2.0 * yk / r2).collect();
        let coef = w.powi(4) - 2.0 * w.powi(3);
        let mut h = vec![vec![Complex64::ZERO; n]; n];
        for k in 0..n {
            for l in 0..n {
                let mut v = phi * coef * ds[k] * ds[l];
                if k == l {
                    v -= phi * w * w * 2.0 / r2;
                }
                h[k][l] = Complex64::new(v, 0.0);
            }
        }
        h
    }
}

/// Central finite differences for callers without analytic derivatives
/// (step h, error O(h²)).
pub struct FiniteDifference<F: Fn(&[f64]) -> Complex64> {
    pub f: F,
    pub h: f64,
}

impl<F: Fn(&[f64]) -> Complex64> FiniteDifference<F> {
    pub fn new(f: F) -> Self {
        FiniteDifference { f, h: 1e-5 }
    }
}

impl<F: Fn(&[f64]) -> Complex64> SmoothFunction for FiniteDifference<F> {
    fn value(&self, x: &[f64]) -> Complex64 {
        (self.f)(x)
    }

    fn gradient(&self, x: &[f64]) -> Vec<Complex64> {
        let mut g = Vec::with_capacity(x.len());
        for a in 0..x.len() {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[a] += self.h;
            xm[a] -= self.h;
            g.push(((self.f)(&xp) - (self.f)(&xm)) / (2.0 * self.h));
        }
        g
    }

    fn hessian(&self, x: &[f64]) -> Vec<Vec<Complex64>> {
        let n = x.len();
        let h = self.h;
        let mut out = vec![vec![Complex64::ZERO; n]; n];
        let f0 = (self.f)(x);
        for a in 0..n {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[a] += h;
            xm[a] -= h;
            out[a][a] = ((self.f)(&xp) - 2.0 * f0 + (self.f)(&xm)) / (h * h);
            for b in a + 1..n {
                let mut xpp = x.to_vec();
                let mut xpm = x.to_vec();
                let mut xmp = x.to_vec();
                let mut xmm = x.to_vec();
                xpp[a] += h;
                xpp[b] += h;
                xpm[a] += h;
                xpm[b] -= h;
                xmp[a] -= h;
                xmp[b] += h;
                xmm[a] -= h;
                xmm[b] -= h;
                let v = ((self.f)(&xpp) - (self.f)(&xpm) - (self.f)(&xmp) + (self.f)(&xmm))
                    / (4.0 * h * h);
                out[a][b] = v;
                out[b][a] = v;
            }
        }
        out
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Spectral application: inverse-transform(−ψ(ξ_k)·transform(u)).
pub fn apply_generator_fourier(
    u: &GridFunction,
    psi: &SymbolHandle,
) -> Result<GridFunction, OperatorError> {
    if u.grid().dim() != psi.dim() {
        return Err(OperatorError::DimensionMismatch(u.grid().dim(), psi.dim()));
    }
    let multipliers = psi.eval_grid(u.grid())?;
    let mut spectrum = u.fft();
    for (s, m) in spectrum.iter_mut().zip(&multipliers) {
        *s *= -m;
    }
    Ok(GridFunction::from_spectrum(u.grid().clone(), spectrum)?)
}

/// Pointwise integro-differential application of 𝓛_ψ at x.
pub fn apply_generator_direct(
    u: &dyn SmoothFunction,
    t: &LevyTriplet,
    x: &[f64],
) -> Result<Complex64, OperatorError> {
    if !t.measure().is_discrete_or_null() {
        return Err(OperatorError::DensityUnsupported);
    }
    if x.len() != t.dim() {
        return Err(OperatorError::DimensionMismatch(x.len(), t.dim()));
    }
    let grad = u.gradient(x);
    let hess = u.hessian(x);
    let b = t.drift_f64();
    let q = t.covariance_f64();
    let mut acc = Complex64::ZERO;
    for (bk, gk) in b.iter().zip(&grad) {
        acc += gk * *bk;
    }
    for (k, row) in q.iter().enumerate() {
        for (l, qkl) in row.iter().enumerate() {
            acc += hess[k][l] * (0.5 * qkl);
        }
    }
    let ux = u.value(x);
    for (mass, loc, compensated) in t.atoms_f64() {
        let shifted: Vec<f64> = x.iter().zip(&loc).map(|(a, b)| a + b).collect();
        let mut jump = u.value(&shifted) - ux;
        if compensated {
            for (lk, gk) in loc.iter().zip(&grad) {
                jump += gk * *lk;
            }
        }
        acc += jump * mass;
    }
    Ok(acc)
}

/// Sup over grid points of |spectral − direct| / (1 + ‖direct‖_∞) for a
/// trigonometric polynomial with grid-exact frequencies.
pub fn crosscheck_applications(
    poly: &TrigPolynomial,
    t: &LevyTriplet,
    grid: &TorusGrid,
) -> Result<f64, OperatorError> {
    let symbol = SymbolHandle::from_triplet(t.clone())?;
    let realization = GridFunction::from_fn(grid.clone(), |x| poly.value(x));
    let fourier = apply_generator_fourier(&realization, &symbol)?;
    let direct: Vec<Complex64> = (0..grid.len())
        .into_par_iter()
        .map(|i| apply_generator_direct(poly, t, &grid.point(i)))
        .collect::<Result<_, _>>()?;
    let direct_sup = direct.iter().fold(0.0_f64, |m, v| m.max(v.norm()));
    let disc = fourier
        .values()
        .iter()
        .zip(&direct)
        .fold(0.0_f64, |m, (a, b)| m.max((a - b).norm()));
    Ok(disc / (1.0 + direct_sup))
}

/// ⟨𝓛_ψ f, φ⟩ = ∫ f·𝓛_{conj ψ}φ dx by trapezoidal quadrature on the grid.
///
/// conj ψ is the symbol of the reflected triplet (−b, Q, ν∘(−id)); since f is
/// periodic while φ is not, 𝓛_{conj ψ}φ is summed over its periodic images so
/// that the window integral equals the whole-space pairing.
pub fn distributional_pairing(
    f: &GridFunction,
    bump: &Bump,
    t: &LevyTriplet,
) -> Result<Complex64, OperatorError> {
    let grid = f.grid();
    let n = grid.dim();
    if bump.center.len() != n || t.dim() != n {
        return Err(OperatorError::DimensionMismatch(bump.center.len(), n));
    }
    let min_period = grid.period().iter().cloned().fold(f64::INFINITY, f64::min);
    if 2.0 * bump.radius > min_period {
        return Err(OperatorError::BumpTooWide(2.0 * bump.radius, min_period));
    }
    let reflected = reflect_triplet(t);
    let max_jump = t
        .atoms_f64()
        .iter()
        .map(|(_, loc, _)| loc.iter().map(|v| v * v).sum::<f64>().sqrt())
        .fold(0.0_f64, f64::max);
    let reach = bump.radius + max_jump + 1e-9;

    let values: Vec<Complex64> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let x = grid.point(i);
            // Periodic images of x that can see the support of 𝓛φ.
            let mut ranges = Vec::with_capacity(n);
            for a in 0..n {
                let la = grid.period()[a];
                let lo = ((bump.center[a] - reach - x[a]) / la).ceil() as i64;
                let hi = ((bump.center[a] + reach - x[a]) / la).floor() as i64;
                ranges.push((lo, hi.max(lo - 1)));
            }
            let mut total = Complex64::ZERO;
            let mut shift = ranges.iter().map(|r| r.0).collect::<Vec<i64>>();
            'sum: loop {
                if shift.iter().zip(&ranges).all(|(s, r)| *s <= r.1) {
                    let xs: Vec<f64> = x
                        .iter()
                        .enumerate()
                        .map(|(a, &v)| v + shift[a] as f64 * grid.period()[a])
                        .collect();
                    if let Ok(v) = apply_generator_direct(bump, &reflected, &xs) {
                        total += v;
                    }
                }
                for a in (0..n).rev() {
                    shift[a] += 1;
                    if shift[a] <= ranges[a].1 {
                        continue 'sum;
                    }
                    shift[a] = ranges[a].0;
                }
                break;
            }
            total * f.values()[i]
        })
        .collect();
    Ok(values.into_iter().sum::<Complex64>() * grid.cell_volume())
}

/// (−b, Q, ν reflected through the origin): the triplet of conj ψ.
fn reflect_triplet(t: &LevyTriplet) -> LevyTriplet {
    use crate::triplet::Atom;
    let drift: Vec<crate::scalar::Scalar> = t.drift().iter().map(|s| -s).collect();
    let atoms: Vec<Atom> = t
        .measure()
        .atoms()
        .iter()
        .map(|a| Atom::new(a.mass.clone(), a.location.iter().map(|s| -s).collect()))
        .collect();
    let measure = if atoms.is_empty() {
        LevyMeasure::Null
    } else {
        LevyMeasure::DiscreteAtoms(atoms)
    };
    LevyTriplet::new(drift, t.covariance().to_vec(), measure)
}

/// One frequency g of a harmonic candidate together with its exact grid
/// index, so the realization is grid-exact by construction.
#[derive(Debug, Clone)]
pub struct HarmonicTerm {
    pub freq_index: Vec<i64>,
    pub frequency: Vec<f64>,
    pub coefficient: Complex64,
}

/// Finite combination f(x) = Σ c_g e^{−i g·x} over zero-set frequencies,
/// with 0 and ±g conjugate pairs so the realization is real-valued.
#[derive(Debug, Clone)]
pub struct HarmonicCandidate {
    pub grid: TorusGrid,
    pub terms: Vec<HarmonicTerm>,
}

impl HarmonicCandidate {
    pub fn realization(&self) -> GridFunction {
        let poly = self.trig_poly();
        GridFunction::from_fn(self.grid.clone(), |x| poly.value(x))
    }

    /// As Σ c e^{iω·x} with ω = −g.
    pub fn trig_poly(&self) -> TrigPolynomial {
        TrigPolynomial::new(
            self.terms
                .iter()
                .map(|t| (t.frequency.iter().map(|v| -v).collect(), t.coefficient))
                .collect(),
        )
    }
}

/// Build a non-constant bounded harmonic candidate from a nontrivial zero
/// set: pick generators (lattice generators preferred, subspace directions
/// otherwise), choose the grid period as their least common period, and
/// attach conjugate coefficient pairs. Fails on a trivial zero set — that is
/// the Liouville case, where no counterexample exists.
pub fn make_harmonic(
    zero_set: &ClosedSubgroup,
    seed: u64,
    points: usize,
) -> Result<HarmonicCandidate, OperatorError> {
    if zero_set.is_trivial() {
        return Err(OperatorError::TrivialZeroSet);
    }
    let n = zero_set.dim();
    let (gens, scale) = if zero_set.lattice_rank() > 0 {
        (zero_set.lattice_basis().to_vec(), zero_set.scale())
    } else {
        (zero_set.subspace_basis().to_vec(), LatticeScale::One)
    };
    let mut rng = StdRng::seed_from_u64(seed);
    let count = if gens.len() > 1 && rng.gen_bool(0.5) {
        2
    } else {
        1
    };
    let used: Vec<_> = gens.iter().take(count).collect();

    // Least common period per axis: clear the denominators of every used
    // generator component.
    let mut lcm_den = vec![BigInt::from(1); n];
    for g in &used {
        for (a, entry) in g.iter().enumerate() {
            lcm_den[a] = lcm_den[a].lcm(entry.denom());
        }
    }
    let period: Vec<f64> = lcm_den
        .iter()
        .map(|d| {
            let d = d.to_f64().unwrap();
            match scale {
                LatticeScale::TwoPi => d,
                LatticeScale::One => std::f64::consts::TAU * d,
            }
        })
        .collect();
    let grid = TorusGrid::new(period, points)?;

    let mut terms = vec![HarmonicTerm {
        freq_index: vec![0; n],
        frequency: vec![0.0; n],
        coefficient: Complex64::new(rng.gen_range(0.5..1.0), 0.0),
    }];
    for g in used {
        let k: Vec<i64> = g
            .iter()
            .zip(&lcm_den)
            .map(|(entry, d)| {
                let v = entry * num_rational::BigRational::from_integer(d.clone());
                debug_assert!(v.is_integer());
                v.numer().to_i64().expect("desk-scale frequency index")
            })
            .collect();
        for ka in &k {
            if ka.abs() >= points as i64 / 2 {
                return Err(OperatorError::GridTooCoarse(*ka, points));
            }
        }
        let freq: Vec<f64> = g
            .iter()
            .map(|entry| entry.to_f64().unwrap() * scale.factor())
            .collect();
        let c = Complex64::new(rng.gen_range(0.3..0.6), rng.gen_range(-0.3..0.3));
        terms.push(HarmonicTerm {
            freq_index: k.clone(),
            frequency: freq.clone(),
            coefficient: c,
        });
        terms.push(HarmonicTerm {
            freq_index: k.iter().map(|v| -v).collect(),
            frequency: freq.iter().map(|v| -v).collect(),
            coefficient: c.conj(),
        });
    }
    Ok(HarmonicCandidate { grid, terms })
}

#[derive(Debug, Clone)]
pub struct HarmonicReport {
    pub residual_fourier: f64,
    pub residual_direct: f64,
    pub sup_f: f64,
    pub pass: bool,
}

/// ‖𝓛_ψ f‖_∞ through both application paths; passes iff both stay below
/// 1e−10·(1 + ‖f‖_∞).
pub fn verify_harmonic(
    candidate: &HarmonicCandidate,
    t: &LevyTriplet,
    grid: &TorusGrid,
) -> Result<HarmonicReport, OperatorError> {
    let poly = candidate.trig_poly();
    let f = GridFunction::from_fn(grid.clone(), |x| poly.value(x));
    let sup_f = f.sup_norm();
    let symbol = SymbolHandle::from_triplet(t.clone())?;
    let residual_fourier = apply_generator_fourier(&f, &symbol)?.sup_norm();
    let residual_direct = (0..grid.len())
        .into_par_iter()
        .map(|i| apply_generator_direct(&poly, t, &grid.point(i)).map(|v| v.norm()))
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))?;
    let tol = 1e-10 * (1.0 + sup_f);
    Ok(HarmonicReport {
        residual_fourier,
        residual_direct,
        sup_f,
        pass: residual_fourier <= tol && residual_direct <= tol,
    })
}

/// ‖τR_τ f − f‖_∞ with the spectral multiplier τ/(τ + ψ(ξ_k)); Re ψ ≥ 0 and
/// τ > 0 keep the denominator away from 0.
pub fn resolvent_fixed_point(
    f: &GridFunction,
    t: &LevyTriplet,
    tau: f64,
) -> Result<f64, OperatorError> {
    let symbol = SymbolHandle::from_triplet(t.clone())?;
    let multipliers = symbol.eval_grid(f.grid())?;
    let mut spectrum = f.fft();
    for (s, psi) in spectrum.iter_mut().zip(&multipliers) {
        *s *= tau / (tau + psi) - 1.0;
    }
    Ok(GridFunction::from_spectrum(f.grid().clone(), spectrum)?.sup_norm())
}

#[derive(Debug, Clone)]
pub struct SemigroupCheck {
    pub residual: f64,
    /// The fixed-point ⟺ harmonic equivalence needs ψ real-valued; for
    /// complex symbols the residual is reported but tagged non-conclusive.
    pub conclusive: bool,
}

/// ‖P_t f − f‖_∞ with multiplier e^{−tψ(ξ_k)}.
pub fn semigroup_fixed_point(
    f: &GridFunction,
    t: &LevyTriplet,
    time: f64,
) -> Result<SemigroupCheck, OperatorError> {
    let symbol = SymbolHandle::from_triplet(t.clone())?;
    let multipliers = symbol.eval_grid(f.grid())?;
    let psi_sup = multipliers.iter().fold(0.0_f64, |m, v| m.max(v.norm()));
    let imag_sup = multipliers.iter().fold(0.0_f64, |m, v| m.max(v.im.abs()));
    let mut spectrum = f.fft();
    for (s, psi) in spectrum.iter_mut().zip(&multipliers) {
        *s *= (-psi * time).exp() - 1.0;
    }
    let residual = GridFunction::from_spectrum(f.grid().clone(), spectrum)?.sup_norm();
    Ok(SemigroupCheck {
        residual,
        conclusive: imag_sup <= 1e-10 * (1.0 + psi_sup),
    })
}

#[derive(Debug, Clone)]
pub struct DensityReport {
    pub density: GridFunction,
    pub min_real: f64,
    pub max_abs_imag: f64,
}

/// Periodized spectral reconstruction of the transition kernel at time t:
/// p(x_j) = L^{−n} Σ_k e^{−tψ(ξ_k)} e^{iξ_k·x_j}. A surrogate for the true
/// density μ_t; grid positivity is heuristic evidence, never a proof.
pub fn transition_density(
    t: &LevyTriplet,
    time: f64,
    grid: &TorusGrid,
) -> Result<DensityReport, OperatorError> {
    let symbol = SymbolHandle::from_triplet(t.clone())?;
    let multipliers = symbol.eval_grid(grid)?;
    let spectrum: Vec<Complex64> = multipliers.iter().map(|psi| (-psi * time).exp()).collect();
    let mut density = GridFunction::from_spectrum(grid.clone(), spectrum)?;
    let scale: f64 = grid
        .period()
        .iter()
        .map(|l| grid.points_per_axis() as f64 / l)
        .product();
    for v in density.values_mut() {
        *v *= scale;
    }
    let min_real = density
        .values()
        .iter()
        .fold(f64::INFINITY, |m, v| m.min(v.re));
    let max_abs_imag = density.values().iter().fold(0.0_f64, |m, v| m.max(v.im.abs()));
    Ok(DensityReport {
        density,
        min_real,
        max_abs_imag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;
    use crate::triplet::Atom;

    fn delta_one() -> LevyTriplet {
        LevyTriplet::compound_poisson(
            1,
            vec![Atom::new(Scalar::from_int(1), vec![Scalar::from_int(1)])],
        )
    }

    #[test]
    fn constants_are_annihilated_spectrally() {
        let grid = TorusGrid::uniform(1, 1.0, 32).unwrap();
        let u = GridFunction::constant(grid, Complex64::new(3.5, -1.0));
        let psi = SymbolHandle::from_triplet(delta_one()).unwrap();
        let out = apply_generator_fourier(&u, &psi).unwrap();
        assert!(out.sup_norm() < 1e-12 * (1.0 + u.sup_norm()));
    }

    #[test]
    fn eigenfunction_relation_on_grid() {
        // 𝓛 e^{iξ₀x} = −ψ(ξ₀) e^{iξ₀x} for grid-exact ξ₀.
        let grid = TorusGrid::uniform(1, std::f64::consts::TAU, 64).unwrap();
        let k = 5i64;
        let xi0 = grid.frequency(grid.index_of_freq(&[k]).unwrap())[0];
        let u = GridFunction::from_fn(grid.clone(), |x| Complex64::new(0.0, xi0 * x[0]).exp());
        let psi = SymbolHandle::from_triplet(LevyTriplet::brownian(1)).unwrap();
        let out = apply_generator_fourier(&u, &psi).unwrap();
        let expect = -psi.eval(&[xi0]).unwrap();
        for i in 0..grid.len() {
            let x = grid.point(i);
            let want = expect * Complex64::new(0.0, xi0 * x[0]).exp();
            assert!((out.values()[i] - want).norm() < 1e-12 * (1.0 + want.norm()));
        }
    }

    #[test]
    fn direct_application_of_quadratic_under_brownian() {
        // u = ½x²: ½u'' = ½.
        let u = FiniteDifference::new(|x: &[f64]| Complex64::new(0.5 * x[0] * x[0], 0.0));
        let t = LevyTriplet::brownian(1);
        let v = apply_generator_direct(&u, &t, &[1.7]).unwrap();
        assert!((v - Complex64::new(0.5, 0.0)).norm() < 1e-5);
    }

    #[test]
    fn direct_application_single_atom_cos() {
        // u = cos(2πx), ν = δ₁ at x = 0: cos(2π) − cos(0) = 0.
        let tau = std::f64::consts::TAU;
        let poly = TrigPolynomial::new(vec![
            (vec![tau], Complex64::new(0.5, 0.0)),
            (vec![-tau], Complex64::new(0.5, 0.0)),
        ]);
        let v = apply_generator_direct(&poly, &delta_one(), &[0.0]).unwrap();
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn direct_matches_eigenrelation_for_complex_exponential() {
        // u = e^{ix}, ν = δ₁: 𝓛u = −ψ(1)u, checked at several x.
        let poly = TrigPolynomial::new(vec![(vec![1.0], Complex64::new(1.0, 0.0))]);
        let t = delta_one();
        let psi = SymbolHandle::from_triplet(t.clone()).unwrap();
        let m = -psi.eval(&[1.0]).unwrap();
        for x in [0.0, 0.3, 1.7] {
            let direct = apply_generator_direct(&poly, &t, &[x]).unwrap();
            let expect = m * poly.value(&[x]);
            assert!((direct - expect).norm() < 1e-13);
        }
    }

    #[test]
    fn crosscheck_paths_on_harmonic() {
        let grid = TorusGrid::uniform(1, 1.0, 64).unwrap();
        let tau = std::f64::consts::TAU;
        let poly = TrigPolynomial::new(vec![
            (vec![0.0], Complex64::new(1.0, 0.0)),
            (vec![tau], Complex64::new(0.5, 0.0)),
            (vec![-tau], Complex64::new(0.5, 0.0)),
        ]);
        let disc = crosscheck_applications(&poly, &delta_one(), &grid).unwrap();
        assert!(disc < 1e-10, "discrepancy {disc}");
    }

    #[test]
    fn make_harmonic_requires_nontrivial_zero_set() {
        let zs = ClosedSubgroup::trivial(1);
        assert!(matches!(
            make_harmonic(&zs, 7, 64),
            Err(OperatorError::TrivialZeroSet)
        ));
    }

    #[test]
    fn harmonic_for_two_pi_lattice_passes_verification() {
        let t = delta_one();
        let zs = crate::zeroset::zero_set_exact(&t).unwrap();
        let cand = make_harmonic(&zs, 42, 64).unwrap();
        // realization is real and non-constant
        let f = cand.realization();
        assert!(f.values().iter().all(|v| v.im.abs() < 1e-12));
        let spread = f
            .values()
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v.re), hi.max(v.re))
            });
        assert!(spread.1 - spread.0 > 0.1);
        let grid = cand.grid.clone();
        let rep = verify_harmonic(&cand, &t, &grid).unwrap();
        assert!(
            rep.pass,
            "fourier {:.3e} direct {:.3e}",
            rep.residual_fourier, rep.residual_direct
        );
    }

    #[test]
    fn non_harmonic_fails_verification() {
        // cos(x) against ν = δ₁ has residual |ψ(1)| = |1−e^{i}| = 2|sin ½|.
        let t = delta_one();
        let grid = TorusGrid::uniform(1, std::f64::consts::TAU, 512).unwrap();
        let cand = HarmonicCandidate {
            grid: grid.clone(),
            terms: vec![
                HarmonicTerm {
                    freq_index: vec![1],
                    frequency: vec![1.0],
                    coefficient: Complex64::new(0.5, 0.0),
                },
                HarmonicTerm {
                    freq_index: vec![-1],
                    frequency: vec![-1.0],
                    coefficient: Complex64::new(0.5, 0.0),
                },
            ],
        };
        let rep = verify_harmonic(&cand, &t, &grid).unwrap();
        assert!(!rep.pass);
        let expect = 2.0 * (0.5_f64).sin();
        assert!(
            (rep.residual_fourier - expect).abs() < 1e-3 * expect,
            "residual {} vs |1-e^i| = {}",
            rep.residual_fourier,
            expect
        );
    }

    #[test]
    fn resolvent_fixed_point_for_harmonic_and_not() {
        let t = delta_one();
        // Harmonic on the L=1 grid: frequencies 2πk, ψ(2πk) = 0.
        let grid = TorusGrid::uniform(1, 1.0, 64).unwrap();
        let tau2 = std::f64::consts::TAU;
        let f = GridFunction::from_fn(grid, |x| Complex64::new(1.0 + (tau2 * x[0]).cos(), 0.0));
        let r = resolvent_fixed_point(&f, &t, 1.0).unwrap();
        assert!(r <= 1e-10, "harmonic residual {r}");

        // cos(x) on the L=2π grid: ψ(±1) ≠ 0.
        let grid2 = TorusGrid::uniform(1, tau2, 64).unwrap();
        let g = GridFunction::from_fn(grid2, |x| Complex64::new(x[0].cos(), 0.0));
        let r2 = resolvent_fixed_point(&g, &t, 1.0).unwrap();
        assert!(r2 > 1e-2, "non-harmonic residual {r2}");
    }

    #[test]
    fn semigroup_fixed_point_on_real_symbol() {
        // δ₁ + δ₋₁: ψ(ξ) = 2(1 − cos ξ), real.
        let t = LevyTriplet::compound_poisson(
            1,
            vec![
                Atom::new(Scalar::from_int(1), vec![Scalar::from_int(1)]),
                Atom::new(Scalar::from_int(1), vec![Scalar::from_int(-1)]),
            ],
        );
        let grid = TorusGrid::uniform(1, 1.0, 64).unwrap();
        let tau = std::f64::consts::TAU;
        let f = GridFunction::from_fn(grid, |x| Complex64::new(1.0 + (tau * x[0]).cos(), 0.0));
        let check = semigroup_fixed_point(&f, &t, 1.0).unwrap();
        assert!(check.conclusive);
        assert!(check.residual <= 1e-10, "residual {}", check.residual);
    }

    #[test]
    fn transition_density_of_brownian_is_positive() {
        let t = LevyTriplet::brownian(1);
        let grid = TorusGrid::uniform(1, 16.0, 128).unwrap();
        let rep = transition_density(&t, 1.0, &grid).unwrap();
        assert!(rep.min_real > 0.0);
        assert!(rep.max_abs_imag < 1e-10);
        // Total mass over one period ≈ 1 for a well-contained kernel.
        let mass: f64 = rep.density.values().iter().map(|v| v.re).sum::<f64>()
            * rep.density.grid().cell_volume();
        assert!((mass - 1.0).abs() < 1e-8, "mass {mass}");
    }

    #[test]
    fn pairing_of_constant_vanishes() {
        let t = delta_one();
        let grid = TorusGrid::uniform(1, 1.0, 128).unwrap();
        let f = GridFunction::constant(grid, Complex64::new(2.0, 0.0));
        let bump = Bump::new(vec![0.5], 0.4);
        let v = distributional_pairing(&f, &bump, &t).unwrap();
        assert!(v.norm() < 1e-8, "pairing {v}");
    }

    #[test]
    fn pairing_rejects_wide_bump() {
        let t = delta_one();
        let grid = TorusGrid::uniform(1, 1.0, 32).unwrap();
        let f = GridFunction::constant(grid, Complex64::new(1.0, 0.0));
        let bump = Bump::new(vec![0.5], 0.6);
        assert!(matches!(
            distributional_pairing(&f, &bump, &t),
            Err(OperatorError::BumpTooWide(_, _))
        ));
    }

    #[test]
    fn linearity_of_both_paths() {
        let t = delta_one();
        let grid = TorusGrid::uniform(1, 1.0, 32).unwrap();
        let tau = std::f64::consts::TAU;
        let p1 = TrigPolynomial::new(vec![(vec![tau * 3.0], Complex64::new(0.7, 0.1))]);
        let p2 = TrigPolynomial::new(vec![(vec![-tau * 2.0], Complex64::new(0.2, -0.4))]);
        let both = TrigPolynomial::new(
            p1.terms
                .iter()
                .chain(&p2.terms)
                .cloned()
                .collect::<Vec<_>>(),
        );
        for i in [0usize, 7, 19] {
            let x = grid.point(i);
            let a = apply_generator_direct(&p1, &t, &x).unwrap();
            let b = apply_generator_direct(&p2, &t, &x).unwrap();
            let c = apply_generator_direct(&both, &t, &x).unwrap();
            assert!((a + b - c).norm() < 1e-12);
        }
    }
}
