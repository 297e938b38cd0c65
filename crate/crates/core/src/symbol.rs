//! Evaluable characteristic exponents ψ(ξ).
//!
//! A [`SymbolHandle`] is either triplet-driven (Lévy–Khintchine sum over
//! atoms, plus compensated quadrature for 1-D density measures), one of the
//! exact closed forms, or a Bernstein-subordinated composite g∘ψ. Evaluation
//! is pure; grid evaluation parallelizes over frequencies.

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use num_traits::{ToPrimitive, Zero};

use crate::bernstein::{BernsteinError, BernsteinFunction};
use crate::grid::TorusGrid;
use crate::rational::Rat;
use crate::triplet::{gauss_legendre, DensityMeasure, LevyMeasure, LevyTriplet};

#[derive(Debug, Error)]
pub enum SymbolError {
    #[error("dimension mismatch: ξ has length {0}, symbol has dimension {1}")]
    DimensionMismatch(usize, usize),
    #[error("invalid closed-form parameter: {0}")]
    InvalidParameter(String),
    #[error("density measures are supported in dimension 1 only (got {0})")]
    DensityDimension(usize),
    #[error("quadrature did not reach the requested tolerance: error estimate {estimate:.3e}")]
    QuadratureNonConvergence { estimate: f64 },
    #[error("symbol does not vanish at 0: |ψ(0)| = {0:.3e}")]
    NonvanishingAtZero(f64),
    #[error(transparent)]
    Bernstein(#[from] BernsteinError),
}

/// Exact closed-form families; these bypass quadrature entirely so tests have
/// machine-precision references.
#[derive(Debug, Clone)]
pub enum ClosedFormSymbol {
    /// scale·|ξ|^α with α ∈ (0, 2].
    IsotropicStable { alpha: f64, scale: f64 },
    /// −i b·ξ + ½ Qξ·ξ.
    BrownianWithDrift {
        drift: Vec<f64>,
        covariance: Vec<Vec<f64>>,
    },
    /// −i b·ξ.
    PureDrift { drift: Vec<f64> },
}

#[derive(Debug, Clone)]
pub enum SymbolSource {
    Triplet(LevyTriplet),
    ClosedForm(ClosedFormSymbol),
    Subordinated {
        outer: BernsteinFunction,
        inner: Box<SymbolHandle>,
    },
}

#[derive(Debug, Clone)]
pub struct SymbolHandle {
    source: SymbolSource,
    dim: usize,
    // Cached f64 view of triplet sources.
    prepared: Option<PreparedTriplet>,
}

#[derive(Debug, Clone)]
struct PreparedTriplet {
    drift: Vec<f64>,
    covariance: Vec<Vec<f64>>,
    atoms: Vec<(f64, Vec<f64>, bool)>,
}

impl SymbolHandle {
    pub fn from_triplet(t: LevyTriplet) -> Result<Self, SymbolError> {
        let dim = t.dim();
        if let LevyMeasure::Density(_) = t.measure() {
            if dim != 1 {
                return Err(SymbolError::DensityDimension(dim));
            }
        }
        let prepared = PreparedTriplet {
            drift: t.drift_f64(),
            covariance: t.covariance_f64(),
            atoms: t.atoms_f64(),
        };
        let s = SymbolHandle {
            source: SymbolSource::Triplet(t),
            dim,
            prepared: Some(prepared),
        };
        s.check_vanishes_at_zero()?;
        Ok(s)
    }

    pub fn isotropic_stable(alpha: f64, scale: f64, dim: usize) -> Result<Self, SymbolError> {
        if !(0.0 < alpha && alpha <= 2.0) || scale <= 0.0 {
            return Err(SymbolError::InvalidParameter(format!(
                "stable symbol needs α ∈ (0,2] and positive scale, got α={alpha}, scale={scale}"
            )));
        }
        Ok(SymbolHandle {
            source: SymbolSource::ClosedForm(ClosedFormSymbol::IsotropicStable { alpha, scale }),
            dim,
            prepared: None,
        })
    }

    pub fn brownian_with_drift(
        drift: Vec<f64>,
        covariance: Vec<Vec<f64>>,
    ) -> Result<Self, SymbolError> {
        let dim = drift.len();
        if covariance.len() != dim || covariance.iter().any(|r| r.len() != dim) {
            return Err(SymbolError::InvalidParameter(
                "covariance shape does not match drift".into(),
            ));
        }
        Ok(SymbolHandle {
            source: SymbolSource::ClosedForm(ClosedFormSymbol::BrownianWithDrift {
                drift,
                covariance,
            }),
            dim,
            prepared: None,
        })
    }

    pub fn pure_drift(drift: Vec<f64>) -> Result<Self, SymbolError> {
        let dim = drift.len();
        Ok(SymbolHandle {
            source: SymbolSource::ClosedForm(ClosedFormSymbol::PureDrift { drift }),
            dim,
            prepared: None,
        })
    }

    /// g∘ψ as an evaluation composite; Re ψ ≥ 0 keeps g on its domain.
    pub fn subordinate(outer: BernsteinFunction, inner: SymbolHandle) -> Self {
        let dim = inner.dim;
        SymbolHandle {
            source: SymbolSource::Subordinated {
                outer,
                inner: Box::new(inner),
            },
            dim,
            prepared: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn source(&self) -> &SymbolSource {
        &self.source
    }

    pub fn triplet(&self) -> Option<&LevyTriplet> {
        match &self.source {
            SymbolSource::Triplet(t) => Some(t),
            _ => None,
        }
    }

    /// Certified uniform truncation error of the evaluated symbol, carried by
    /// the density cutoff: |ψ_true − ψ_evaluated| ≤ 2ν(|x| > R). Zero for
    /// discrete and closed-form symbols.
    pub fn certified_tail_bound(&self) -> f64 {
        match &self.source {
            SymbolSource::Triplet(t) => match t.measure() {
                LevyMeasure::Density(d) => 2.0 * d.tail_mass,
                _ => 0.0,
            },
            SymbolSource::ClosedForm(_) => 0.0,
            SymbolSource::Subordinated { inner, .. } => inner.certified_tail_bound(),
        }
    }

    fn check_vanishes_at_zero(&self) -> Result<(), SymbolError> {
        let zero = vec![0.0; self.dim];
        let v = self.eval(&zero)?;
        if v.norm() > 1e-12 {
            return Err(SymbolError::NonvanishingAtZero(v.norm()));
        }
        Ok(())
    }

    /// ψ(ξ).
    pub fn eval(&self, xi: &[f64]) -> Result<Complex64, SymbolError> {
        if xi.len() != self.dim {
            return Err(SymbolError::DimensionMismatch(xi.len(), self.dim));
        }
        match &self.source {
            SymbolSource::Triplet(t) => {
                let p = self.prepared.as_ref().expect("prepared with triplet");
                let mut acc = Complex64::ZERO;
                // −i b·ξ
                acc += Complex64::new(0.0, -dot(&p.drift, xi));
                // ½ Qξ·ξ
                let mut quad = 0.0;
                for (row, &xii) in p.covariance.iter().zip(xi) {
                    quad += xii * dot(row, xi);
                }
                acc += 0.5 * quad;
                // Σ a_j (1 − e^{i b_j·ξ} − i b_j·ξ 1_{|b_j|<1})
                for (mass, loc, compensated) in &p.atoms {
                    let theta = dot(loc, xi);
                    let mut term = Complex64::new(1.0 - theta.cos(), -theta.sin());
                    if *compensated {
                        term.im -= theta;
                    }
                    acc += mass * term;
                }
                if let LevyMeasure::Density(d) = t.measure() {
                    acc += density_symbol_1d(d, xi[0])?;
                }
                Ok(acc)
            }
            SymbolSource::ClosedForm(cf) => Ok(match cf {
                ClosedFormSymbol::IsotropicStable { alpha, scale } => {
                    let norm = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
                    Complex64::new(scale * norm.powf(*alpha), 0.0)
                }
                ClosedFormSymbol::BrownianWithDrift { drift, covariance } => {
                    let mut quad = 0.0;
                    for (row, &xii) in covariance.iter().zip(xi) {
                        quad += xii * dot(row, xi);
                    }
                    Complex64::new(0.5 * quad, -dot(drift, xi))
                }
                ClosedFormSymbol::PureDrift { drift } => Complex64::new(0.0, -dot(drift, xi)),
            }),
            SymbolSource::Subordinated { outer, inner } => {
                let z = inner.eval(xi)?;
                Ok(outer.eval_halfplane(z)?)
            }
        }
    }

    /// ψ(2π·q) for exact rational q, with exact argument reduction.
    ///
    /// Zero-set generators are 2π-rational points; evaluating there through
    /// plain floats loses the phase to roundoff (|ψ| ≈ 1e−16, which e.g. a
    /// square-root subordination amplifies to 1e−8). For rational discrete
    /// triplets the atom phases b_j·(2πq) reduce mod 2π exactly and the
    /// linear imaginary part is taken through the exact effective drift, so
    /// a point of the zero set evaluates to exactly 0.
    pub fn eval_two_pi_rational(&self, q: &[Rat]) -> Result<Complex64, SymbolError> {
        if q.len() != self.dim {
            return Err(SymbolError::DimensionMismatch(q.len(), self.dim));
        }
        match &self.source {
            SymbolSource::Triplet(t) if t.is_rational_discrete() => {
                let tau = std::f64::consts::TAU;
                // ½ ξᵀQξ = ½(2π)²·qᵀQq, exactly over ℚ.
                let mut quad = Rat::zero();
                for (row, qi) in t.covariance().iter().zip(q) {
                    let mut s = Rat::zero();
                    for (entry, qj) in row.iter().zip(q) {
                        s += entry.as_exact().unwrap() * qj;
                    }
                    quad += qi * s;
                }
                let mut re = 0.5 * tau * tau * quad.to_f64().unwrap();
                // Im: −b_eff·ξ − Σ a_j sin(θ_j) with exact b_eff and exact
                // phase reduction θ_j = 2π·frac(b_j·q).
                let mut beff_dot = Rat::zero();
                for (b, qi) in t.effective_drift().iter().zip(q) {
                    beff_dot += b.as_exact().unwrap() * qi;
                }
                let mut im = -tau * beff_dot.to_f64().unwrap();
                for atom in t.measure().atoms() {
                    let mut phase = Rat::zero();
                    for (l, qi) in atom.location.iter().zip(q) {
                        phase += l.as_exact().unwrap() * qi;
                    }
                    let frac = &phase - phase.floor();
                    let theta = tau * frac.to_f64().unwrap();
                    let mass = atom.mass.to_f64();
                    re += mass * (1.0 - theta.cos());
                    im += mass * -theta.sin();
                }
                Ok(Complex64::new(re, im))
            }
            SymbolSource::Subordinated { outer, inner } => {
                let z = inner.eval_two_pi_rational(q)?;
                Ok(outer.eval_halfplane(z)?)
            }
            _ => {
                let xi: Vec<f64> = q
                    .iter()
                    .map(|v| std::f64::consts::TAU * v.to_f64().unwrap())
                    .collect();
                self.eval(&xi)
            }
        }
    }

    /// ψ at every grid frequency ξ_k = 2πk/L, in the grid's frequency layout.
    /// Evaluation order over frequencies carries no contract.
    pub fn eval_grid(&self, grid: &TorusGrid) -> Result<Vec<Complex64>, SymbolError> {
        if grid.dim() != self.dim {
            return Err(SymbolError::DimensionMismatch(grid.dim(), self.dim));
        }
        let n = grid.len();
        if n >= 4096 {
            (0..n)
                .into_par_iter()
                .map(|i| self.eval(&grid.frequency(i)))
                .collect()
        } else {
            (0..n).map(|i| self.eval(&grid.frequency(i))).collect()
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// GL16 on [lo, hi], subdivided so each subpanel sees at most ~4 radians of
/// phase; returns (value, error estimate from coarse-vs-halved comparison).
fn panel(lo: f64, hi: f64, w_abs: f64, g: &impl Fn(f64) -> f64) -> (f64, f64) {
    let parts = (((hi - lo) * w_abs / 4.0).ceil() as usize).max(1);
    let h = (hi - lo) / parts as f64;
    let mut value = 0.0;
    let mut err = 0.0;
    for p in 0..parts {
        let a = lo + p as f64 * h;
        let b = a + h;
        let m = 0.5 * (a + b);
        let coarse = gauss_legendre(a, b, g);
        let fine = gauss_legendre(a, m, g) + gauss_legendre(m, b, g);
        value += fine;
        err += (coarse - fine).abs();
    }
    (value, err)
}

/// ∫(1 − e^{ixξ} − ixξ·1_{(0,1)}(|x|)) f(x) dx over |x| ≤ R in 1-D.
///
/// Points at ±x are paired into even/odd combinations f₊ = f(x)+f(−x),
/// f₋ = f(x)−f(−x), so symmetric measures cancel their odd parts pointwise
/// instead of by subtraction of two large halves. The inner ball uses the
/// compensated integrand on dyadic shells toward 0; the tail resolves
/// oscillations with phase-limited panels up to a crossover point and
/// completes [X, R] with two integrations by parts, whose residue enters the
/// error estimate. The mass beyond R is certified separately (tail_mass).
fn density_symbol_1d(d: &DensityMeasure, xi: f64) -> Result<Complex64, SymbolError> {
    if xi == 0.0 {
        return Ok(Complex64::ZERO);
    }
    let w = xi;
    let wa = w.abs();
    let f = &d.density;
    let f_even = |x: f64| f(x) + f(-x);
    let f_odd = |x: f64| f(x) - f(-x);

    let mut re = 0.0;
    let mut im = 0.0;
    let mut err_est = 0.0;

    // Inner ball (0,1), dyadic shells. Paired integrands:
    //   re: (1 − cos xw)·f₊,   im: −(sin xw + xw)·f₋.
    let inner_re = |x: f64| (1.0 - (x * w).cos()) * f_even(x);
    let inner_im = |x: f64| -((x * w).sin() + x * w) * f_odd(x);
    let mut last_shell = 0.0;
    for k in 0..d.inner_depth {
        let hi = 0.5f64.powi(k as i32);
        let lo = 0.5 * hi;
        let (vr, er) = panel(lo, hi, wa, &inner_re);
        let (vi, ei) = panel(lo, hi, wa, &inner_im);
        re += vr;
        im += vi;
        err_est += er + ei;
        last_shell = vr.abs() + vi.abs();
    }
    // Geometric-decay estimate for the ball below the last shell.
    err_est += last_shell;

    // Tail [1, R]. Paired integrands:
    //   re: (1 − cos xw)·f₊,   im: −sin(xw)·f₋.
    // March with phase-limited panels; once the two-term integration-by-parts
    // boundary data is below tolerance, complete analytically.
    let tail_re = |x: f64| (1.0 - (x * w).cos()) * f_even(x);
    let tail_im = |x: f64| -(x * w).sin() * f_odd(x);
    let r_cut = d.cutoff;
    let mut x = 1.0f64;
    let fd = |g: &dyn Fn(f64) -> f64, t: f64| {
        let h = 1e-4 * t;
        (g(t + h) - g(t - h)) / (2.0 * h)
    };
    while x < r_cut {
        // Stopping criterion for the oscillatory march.
        let deriv_scale = fd(&f_even, x).abs() + fd(&f_odd, x).abs();
        if deriv_scale / (w * w) <= d.quad_tol / 8.0 && x > 4.0 / wa {
            break;
        }
        let hi = (x * 1.5).min(r_cut);
        let (vr, er) = panel(x, hi, wa, &tail_re);
        let (vi, ei) = panel(x, hi, wa, &tail_im);
        re += vr;
        im += vi;
        err_est += er + ei;
        x = hi;
    }
    if x < r_cut {
        // Smooth part ∫_x^R f₊ on log panels (no oscillation).
        let mut lo = x;
        while lo < r_cut {
            let hi = (lo * 2.0).min(r_cut);
            let (v, e) = panel(lo, hi, 0.0, &f_even);
            re += v;
            err_est += e;
            lo = hi;
        }
        // Oscillatory completions by parts:
        //   C = ∫ cos(xw)f₊ ≈ [f₊ sin(xw)/w + f₊' cos(xw)/w²]_x^R
        //   S = ∫ sin(xw)f₋ ≈ [−f₋ cos(xw)/w + f₋' sin(xw)/w²]_x^R
        // with residue ≤ (|f'(x)| + |f'(R)|)/w² folded into the estimate.
        let bc = |t: f64| f_even(t) * (t * w).sin() / w + fd(&f_even, t) * (t * w).cos() / (w * w);
        let bs =
            |t: f64| -f_odd(t) * (t * w).cos() / w + fd(&f_odd, t) * (t * w).sin() / (w * w);
        let c_val = bc(r_cut) - bc(x);
        let s_val = bs(r_cut) - bs(x);
        re -= c_val;
        im -= s_val;
        err_est += (fd(&f_even, x).abs()
            + fd(&f_even, r_cut).abs()
            + fd(&f_odd, x).abs()
            + fd(&f_odd, r_cut).abs())
            / (w * w);
    }

    if err_est > d.quad_tol {
        return Err(SymbolError::QuadratureNonConvergence { estimate: err_est });
    }
    Ok(Complex64::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::scalar::Scalar;
    use crate::triplet::Atom;

    fn delta_one() -> LevyTriplet {
        LevyTriplet::compound_poisson(
            1,
            vec![Atom::new(Scalar::from_int(1), vec![Scalar::from_int(1)])],
        )
    }

    #[test]
    fn brownian_symbol_value() {
        let s = SymbolHandle::from_triplet(LevyTriplet::brownian(1)).unwrap();
        let v = s.eval(&[2.0]).unwrap();
        assert!((v - Complex64::new(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn single_atom_at_pi() {
        // 1 − e^{iπ} = 2
        let s = SymbolHandle::from_triplet(delta_one()).unwrap();
        let v = s.eval(&[std::f64::consts::PI]).unwrap();
        assert!((v - Complex64::new(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn stable_closed_form_is_euclidean_norm() {
        let s = SymbolHandle::isotropic_stable(1.0, 1.0, 2).unwrap();
        let v = s.eval(&[3.0, 4.0]).unwrap();
        assert!((v - Complex64::new(5.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn symbol_vanishes_at_origin() {
        let symbols = [
            SymbolHandle::from_triplet(delta_one()).unwrap(),
            SymbolHandle::isotropic_stable(0.5, 1.0, 1).unwrap(),
            SymbolHandle::pure_drift(vec![1.0, -2.0]).unwrap(),
        ];
        for s in symbols {
            let z = vec![0.0; s.dim()];
            assert_eq!(s.eval(&z).unwrap(), Complex64::ZERO);
        }
    }

    #[test]
    fn dimension_mismatch_reported() {
        let s = SymbolHandle::from_triplet(LevyTriplet::brownian(2)).unwrap();
        assert!(matches!(
            s.eval(&[1.0]),
            Err(SymbolError::DimensionMismatch(1, 2))
        ));
    }

    #[test]
    fn compensated_drift_model_is_pure_jump() {
        // b = −1/4 with mass 1/2 at 1/2: ψ(ξ) = ½(1 − e^{iξ/2})
        let t = LevyTriplet::new(
            vec![Scalar::from_rat(rat(-1, 4))],
            vec![vec![Scalar::zero()]],
            LevyMeasure::DiscreteAtoms(vec![Atom::new(
                Scalar::from_rat(rat(1, 2)),
                vec![Scalar::from_rat(rat(1, 2))],
            )]),
        );
        let s = SymbolHandle::from_triplet(t).unwrap();
        for xi in [0.7, -2.3, 4.0 * std::f64::consts::PI] {
            let v = s.eval(&[xi]).unwrap();
            let expect = 0.5
                * (Complex64::new(1.0, 0.0)
                    - Complex64::new(0.0, xi / 2.0).exp());
            assert!((v - expect).norm() < 1e-13, "xi={xi}");
        }
    }

    #[test]
    fn subordinated_power_of_brownian_is_stable() {
        // √(ξ²) = |ξ|: Power(1/2) ∘ Brownian(Q=2) matches IsotropicStable α=1.
        let g = BernsteinFunction::power(0.5).unwrap();
        let q = vec![vec![Scalar::from_int(2)]];
        let inner = SymbolHandle::from_triplet(LevyTriplet::new(
            vec![Scalar::zero()],
            q,
            LevyMeasure::Null,
        ))
        .unwrap();
        let s = SymbolHandle::subordinate(g, inner);
        for xi in [0.5, 1.0, 3.25, -2.0] {
            let v = s.eval(&[xi]).unwrap();
            assert!((v - Complex64::new(xi.abs(), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn stable_density_quadrature_matches_closed_form() {
        // The normalized symmetric stable density reproduces |ξ|^α up to the
        // certified tail bound; the closed form is the independent reference.
        let alpha = 0.5;
        let d = DensityMeasure::symmetric_stable(alpha, 1.0, 1e9, 48);
        let tail_bound = 2.0 * d.tail_mass;
        let t = LevyTriplet::new(
            vec![Scalar::zero()],
            vec![vec![Scalar::zero()]],
            LevyMeasure::Density(d),
        );
        let s = SymbolHandle::from_triplet(t).unwrap();
        for xi in [0.5, 1.0, 2.0, 5.0] {
            let v = s.eval(&[xi]).unwrap();
            let expect = xi.abs().powf(alpha);
            assert!(
                (v.re - expect).abs() <= tail_bound + 1e-6 * expect,
                "xi={xi}: got {v}, expected {expect}, tail bound {tail_bound:.3e}"
            );
            assert!(v.im.abs() <= 1e-8);
        }
    }
}
