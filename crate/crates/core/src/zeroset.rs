//! The zero set {ψ = 0} as an exact closed subgroup, the Liouville verdict,
//! the independent triplet-side characterization, and the numeric fallback
//! scan for models outside the rational-exact regime.
//!
//! For a rational discrete model, ψ(ξ) = 0 decomposes exactly: the
//! nonnegative real part forces Qξ = 0 and cos(b_j·ξ) = 1 for every atom
//! (each term is nonnegative), and on that set the imaginary part reduces to
//! the single linear constraint b_eff·ξ = 0 with b_eff = b + Σ_{|b_j|<1} a_j b_j.
//! The zero set is therefore {ξ ∈ ker Q ∩ b_eff^⊥ : b_j·ξ ∈ 2πℤ ∀j}, a
//! lattice-preimage computation carried out over exact rationals.

use num_traits::ToPrimitive;
use rayon::prelude::*;
use thiserror::Error;

use crate::bernstein::{halfplane_zero_classification, HalfplaneZeros};
use crate::groups::{lattice_preimage, ClosedSubgroup, GroupError, LatticeScale};
use crate::rational::{kernel_basis, Rat, RatVec};
use crate::symbol::{ClosedFormSymbol, SymbolError, SymbolHandle, SymbolSource};
use crate::triplet::{truncate_measure, LevyTriplet, TripletError};

#[derive(Debug, Error)]
pub enum ZeroSetError {
    #[error("exact zero-set analysis requires rational drift, covariance, masses and atoms")]
    IrrationalData,
    #[error("exact zero-set analysis is not defined for density Lévy measures")]
    DensityMeasure,
    #[error("radii must be nonempty, increasing, ≥ 1, and end beyond the largest atom: {0}")]
    InvalidRadii(String),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Triplet(#[from] TripletError),
}

/// Exact rational rows of the covariance (nonzero rows only).
fn covariance_rows(t: &LevyTriplet) -> Vec<RatVec> {
    t.covariance()
        .iter()
        .map(|row| {
            row.iter()
                .map(|s| s.as_exact().expect("rational model").clone())
                .collect::<RatVec>()
        })
        .filter(|row| row.iter().any(|x| !num_traits::Zero::is_zero(x)))
        .collect()
}

fn atom_rows(t: &LevyTriplet) -> Vec<RatVec> {
    t.measure()
        .atoms()
        .iter()
        .map(|a| {
            a.location
                .iter()
                .map(|s| s.as_exact().expect("rational model").clone())
                .collect()
        })
        .collect()
}

fn effective_drift_row(t: &LevyTriplet) -> Option<RatVec> {
    let beff: RatVec = t
        .effective_drift()
        .iter()
        .map(|s| s.as_exact().expect("rational model").clone())
        .collect();
    if beff.iter().any(|x| !num_traits::Zero::is_zero(x)) {
        Some(beff)
    } else {
        None
    }
}

fn require_rational(t: &LevyTriplet) -> Result<(), ZeroSetError> {
    if !t.measure().is_discrete_or_null() {
        return Err(ZeroSetError::DensityMeasure);
    }
    if !t.is_rational_discrete() {
        return Err(ZeroSetError::IrrationalData);
    }
    Ok(())
}

/// {ψ = 0} for a rational discrete model, exactly.
pub fn zero_set_exact(t: &LevyTriplet) -> Result<ClosedSubgroup, ZeroSetError> {
    require_rational(t)?;
    let n = t.dim();
    let mut linear = covariance_rows(t);
    if let Some(beff) = effective_drift_row(t) {
        linear.push(beff);
    }
    let s = kernel_basis(&linear, n);
    let atoms = atom_rows(t);
    Ok(lattice_preimage(&atoms, &s, n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictMethod {
    Exact,
    NumericHeuristic,
}

#[derive(Debug, Clone)]
pub struct Witness {
    pub location: Vec<f64>,
    pub residual: f64,
}

/// Liouville decision. In exact mode `holds ⟺ zero_set is trivial` by
/// construction and the periodicity group is {ψ=0}^⊥; in numeric mode the
/// groups are indicative only (trivial placeholders unless the scan found
/// nothing) and `witnesses` carry the polished near-zeros.
#[derive(Debug, Clone)]
pub struct LiouvilleVerdict {
    pub holds: bool,
    pub zero_set: ClosedSubgroup,
    pub periodicity_group: ClosedSubgroup,
    pub method: VerdictMethod,
    pub witnesses: Vec<Witness>,
    /// Scan evidence, present in numeric mode.
    pub scan: Option<Vec<ScanCandidate>>,
}

#[derive(Debug, Clone)]
pub struct ScanCandidate {
    pub location: Vec<f64>,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct ScanOptions {
    pub box_halfwidth: f64,
    pub step: f64,
}

impl ScanOptions {
    /// Desk-scale defaults keeping the coarse pass around a few million
    /// evaluations per model.
    pub fn for_dim(dim: usize) -> Self {
        match dim {
            0 | 1 => ScanOptions {
                box_halfwidth: 50.0,
                step: 1e-3,
            },
            2 => ScanOptions {
                box_halfwidth: 50.0,
                step: 0.05,
            },
            _ => ScanOptions {
                box_halfwidth: 20.0,
                step: 0.25,
            },
        }
    }
}

pub fn decide_liouville(symbol: &SymbolHandle) -> Result<LiouvilleVerdict, ZeroSetError> {
    decide_liouville_with(symbol, &ScanOptions::for_dim(symbol.dim()))
}

pub fn decide_liouville_triplet(t: &LevyTriplet) -> Result<LiouvilleVerdict, ZeroSetError> {
    let symbol = SymbolHandle::from_triplet(t.clone())?;
    decide_liouville(&symbol)
}

pub fn decide_liouville_with(
    symbol: &SymbolHandle,
    opts: &ScanOptions,
) -> Result<LiouvilleVerdict, ZeroSetError> {
    match symbol.source() {
        SymbolSource::Triplet(t) if t.is_rational_discrete() => exact_verdict(t, symbol),
        SymbolSource::Triplet(_) => Ok(numeric_verdict(symbol, opts)),
        SymbolSource::ClosedForm(cf) => match cf {
            ClosedFormSymbol::IsotropicStable { .. } => {
                // scale·|ξ|^α vanishes only at the origin.
                let n = symbol.dim();
                Ok(LiouvilleVerdict {
                    holds: true,
                    zero_set: ClosedSubgroup::trivial(n),
                    periodicity_group: ClosedSubgroup::full(n),
                    method: VerdictMethod::Exact,
                    witnesses: Vec::new(),
                    scan: None,
                })
            }
            ClosedFormSymbol::BrownianWithDrift { drift, covariance } => {
                let t = rationalized_triplet(drift, Some(covariance));
                exact_verdict(&t, symbol)
            }
            ClosedFormSymbol::PureDrift { drift } => {
                let t = rationalized_triplet(drift, None);
                exact_verdict(&t, symbol)
            }
        },
        SymbolSource::Subordinated { outer, inner } => {
            match halfplane_zero_classification(outer) {
                HalfplaneZeros::OnlyZeroAtOrigin => {
                    // g(ζ) = 0 only at ζ = 0, so {g∘ψ = 0} = {ψ = 0}.
                    let mut v = decide_liouville_with(inner, opts)?;
                    if v.method == VerdictMethod::Exact && !v.holds {
                        v.witnesses = witnesses_for(&v.zero_set, symbol)?;
                    }
                    Ok(v)
                }
                _ => Ok(numeric_verdict(symbol, opts)),
            }
        }
    }
}

/// Every f64 is an exact binary rational, so closed-form coefficient data
/// converts losslessly for the exact path.
fn rationalized_triplet(drift: &[f64], covariance: Option<&Vec<Vec<f64>>>) -> LevyTriplet {
    use crate::scalar::Scalar;
    let n = drift.len();
    let b: Vec<Scalar> = drift
        .iter()
        .map(|&x| Scalar::from_rat(Rat::from_float(x).expect("finite coefficient")))
        .collect();
    let q: Vec<Vec<Scalar>> = match covariance {
        Some(c) => c
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&x| Scalar::from_rat(Rat::from_float(x).expect("finite coefficient")))
                    .collect()
            })
            .collect(),
        None => vec![vec![Scalar::zero(); n]; n],
    };
    LevyTriplet::new(b, q, crate::triplet::LevyMeasure::Null)
}

fn exact_verdict(
    t: &LevyTriplet,
    symbol: &SymbolHandle,
) -> Result<LiouvilleVerdict, ZeroSetError> {
    let zs = zero_set_exact(t)?;
    let holds = zs.is_trivial();
    let periodicity = zs.orthogonal();
    let witnesses = if holds {
        Vec::new()
    } else {
        witnesses_for(&zs, symbol)?
    };
    Ok(LiouvilleVerdict {
        holds,
        zero_set: zs,
        periodicity_group: periodicity,
        method: VerdictMethod::Exact,
        witnesses,
        scan: None,
    })
}

/// Numeric-heuristic verdict regardless of rationality (`--numeric`).
pub fn decide_liouville_numeric(symbol: &SymbolHandle, opts: &ScanOptions) -> LiouvilleVerdict {
    numeric_verdict(symbol, opts)
}

/// Nonzero generators of the zero set with their |ψ| residuals. Lattice
/// generators of 2π-scaled groups go through the exact-phase evaluation.
fn witnesses_for(
    zs: &ClosedSubgroup,
    symbol: &SymbolHandle,
) -> Result<Vec<Witness>, ZeroSetError> {
    let mut witnesses = Vec::new();
    for lam in zs.lattice_basis() {
        let residual = match zs.scale() {
            LatticeScale::TwoPi => symbol.eval_two_pi_rational(lam)?.norm(),
            LatticeScale::One => {
                let loc: Vec<f64> = lam.iter().map(|v| v.to_f64().unwrap()).collect();
                symbol.eval(&loc)?.norm()
            }
        };
        let location: Vec<f64> = lam
            .iter()
            .map(|v| v.to_f64().unwrap() * zs.scale().factor())
            .collect();
        witnesses.push(Witness { location, residual });
    }
    for v in zs.subspace_basis() {
        let location: Vec<f64> = v.iter().map(|x| x.to_f64().unwrap()).collect();
        let residual = symbol.eval(&location)?.norm();
        witnesses.push(Witness { location, residual });
    }
    Ok(witnesses)
}

fn numeric_verdict(symbol: &SymbolHandle, opts: &ScanOptions) -> LiouvilleVerdict {
    let n = symbol.dim();
    let candidates = zero_scan_numeric(symbol, opts.box_halfwidth, opts.step);
    let off_origin: Vec<Witness> = candidates
        .iter()
        .filter(|c| {
            c.residual <= 1e-10
                && c.location.iter().map(|x| x * x).sum::<f64>().sqrt() > 10.0 * opts.step
        })
        .map(|c| Witness {
            location: c.location.clone(),
            residual: c.residual,
        })
        .collect();
    let holds = off_origin.is_empty();
    LiouvilleVerdict {
        holds,
        zero_set: ClosedSubgroup::trivial(n),
        periodicity_group: if holds {
            ClosedSubgroup::full(n)
        } else {
            ClosedSubgroup::trivial(n)
        },
        method: VerdictMethod::NumericHeuristic,
        witnesses: off_origin,
        scan: Some(candidates),
    }
}

/// Coarse |ψ|² scan over [−B, B]ⁿ followed by pattern-search polish of every
/// local minimum; candidates within 10·step of each other are clustered.
/// Evaluation failures count as +∞. The report never certifies a zero, it
/// only states residuals.
pub fn zero_scan_numeric(
    symbol: &SymbolHandle,
    box_halfwidth: f64,
    step: f64,
) -> Vec<ScanCandidate> {
    let dim = symbol.dim();
    let eval = |x: &[f64]| {
        symbol
            .eval(x)
            .map(|v| v.norm())
            .unwrap_or(f64::INFINITY)
    };
    scan_zeros(
        &eval,
        dim,
        &ScanOptions {
            box_halfwidth,
            step,
        },
    )
}

/// Generic scan of a nonnegative objective for near-zeros.
pub(crate) fn scan_zeros(
    f: &(impl Fn(&[f64]) -> f64 + Sync),
    dim: usize,
    opts: &ScanOptions,
) -> Vec<ScanCandidate> {
    let b = opts.box_halfwidth;
    let step = opts.step;
    let m = ((2.0 * b / step).floor() as usize) + 1;
    let coord = |i: usize| -b + i as f64 * step;
    let total = m.pow(dim as u32);
    let values: Vec<f64> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut x = vec![0.0; dim];
            let mut rem = flat;
            for a in (0..dim).rev() {
                x[a] = coord(rem % m);
                rem /= m;
            }
            let v = f(&x);
            v * v
        })
        .collect();

    // Local minima over the 3ⁿ−1 neighborhood.
    let mut minima = Vec::new();
    'outer: for flat in 0..total {
        let mut idx = vec![0usize; dim];
        let mut rem = flat;
        for a in (0..dim).rev() {
            idx[a] = rem % m;
            rem /= m;
        }
        let v = values[flat];
        if !v.is_finite() {
            continue;
        }
        let mut offsets = vec![0i64; dim];
        loop {
            // iterate offsets in {-1,0,1}^dim
            let mut carry = true;
            let mut all_zero = true;
            for o in &offsets {
                if *o != 0 {
                    all_zero = false;
                }
            }
            if !all_zero {
                let mut nflat = 0usize;
                let mut ok = true;
                for a in 0..dim {
                    let j = idx[a] as i64 + offsets[a];
                    if j < 0 || j >= m as i64 {
                        ok = false;
                        break;
                    }
                    nflat = nflat * m + j as usize;
                }
                if ok && values[nflat] < v {
                    continue 'outer;
                }
            }
            for a in (0..dim).rev() {
                if offsets[a] < 1 {
                    offsets[a] += 1;
                    carry = false;
                    break;
                }
                offsets[a] = -1;
            }
            if carry {
                break;
            }
        }
        let x: Vec<f64> = idx.iter().map(|&i| coord(i)).collect();
        minima.push(x);
    }

    // Polish and cluster.
    let mut polished: Vec<ScanCandidate> = minima
        .into_par_iter()
        .map(|x0| {
            let (x, fx) = pattern_search(f, x0, step);
            ScanCandidate {
                location: x,
                residual: fx,
            }
        })
        .collect();
    polished.sort_by(|a, b| a.residual.total_cmp(&b.residual));
    let mut kept: Vec<ScanCandidate> = Vec::new();
    let cluster = 10.0 * step;
    for c in polished {
        let dup = kept.iter().any(|k| {
            k.location
                .iter()
                .zip(&c.location)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
                < cluster
        });
        if !dup {
            kept.push(c);
        }
    }
    kept.sort_by(|a, b| {
        let na: f64 = a.location.iter().map(|x| x * x).sum();
        let nb: f64 = b.location.iter().map(|x| x * x).sum();
        na.total_cmp(&nb)
    });
    kept
}

/// Derivative-free local refinement of f toward a minimum, to sub-1e-12
/// localization at desk scale.
fn pattern_search(f: &impl Fn(&[f64]) -> f64, mut x: Vec<f64>, step: f64) -> (Vec<f64>, f64) {
    let dim = x.len();
    let mut fx = f(&x);
    let mut w = step;
    for _ in 0..400 {
        let scale: f64 = x.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        if w < 1e-14 * scale {
            break;
        }
        let mut best: Option<(Vec<f64>, f64)> = None;
        for a in 0..dim {
            for s in [-1.0, 1.0] {
                let mut y = x.clone();
                y[a] += s * w;
                let fy = f(&y);
                if fy < best.as_ref().map(|(_, b)| *b).unwrap_or(fx) {
                    best = Some((y, fy));
                }
            }
        }
        match best {
            Some((y, fy)) => {
                x = y;
                fx = fy;
            }
            None => w *= 0.5,
        }
    }
    (x, fx)
}

/// The five objects of the triplet-side characterization: the group generated
/// by supp ν, its subspace part V_ν, the compensator correction c_ν, the
/// Gaussian-drift span W, and the combined right-hand side closure(G_ν + W).
#[derive(Debug, Clone)]
pub struct TripletCharacterization {
    pub g_nu: ClosedSubgroup,
    pub v_nu: ClosedSubgroup,
    pub c_nu: RatVec,
    pub w: ClosedSubgroup,
    pub rhs_group: ClosedSubgroup,
}

/// Build (G_ν, V_ν, c_ν, W, closure(G_ν+W)) for a rational discrete model.
///
/// The span of the columns of Σ = Q^{1/2} equals range(Q) exactly (a PSD
/// matrix and its square root share kernels, hence ranges), so W is computed
/// rationally from Q itself and no numeric square root ever enters.
/// c_ν sums a_j·b_j over compensated atoms off V_ν with a positive sign; the
/// positive sign is what makes b + c_ν the effective drift, matching the
/// zero-set side.
pub fn triplet_characterization(
    t: &LevyTriplet,
) -> Result<TripletCharacterization, ZeroSetError> {
    require_rational(t)?;
    let n = t.dim();
    let atoms = atom_rows(t);
    let g_nu = ClosedSubgroup::from_lattice_generators(n, atoms.clone(), LatticeScale::One);
    let v_nu = ClosedSubgroup::from_parts(
        n,
        g_nu.subspace_basis().to_vec(),
        Vec::new(),
        LatticeScale::One,
    );

    let mut c_nu = vec![Rat::from_integer(0.into()); n];
    for atom in t.measure().atoms() {
        if !atom.compensated() {
            continue;
        }
        let loc: RatVec = atom
            .location
            .iter()
            .map(|s| s.as_exact().unwrap().clone())
            .collect();
        if v_nu.member(&loc, LatticeScale::One)? {
            continue;
        }
        let mass = atom.mass.as_exact().unwrap();
        for (c, l) in c_nu.iter_mut().zip(&loc) {
            *c += mass * l;
        }
    }

    let drift: RatVec = t
        .drift()
        .iter()
        .map(|s| s.as_exact().unwrap().clone())
        .collect();
    let b_plus_c: RatVec = drift.iter().zip(&c_nu).map(|(b, c)| b + c).collect();

    let mut w_gens = covariance_rows(t);
    if b_plus_c.iter().any(|x| !num_traits::Zero::is_zero(x)) {
        w_gens.push(b_plus_c);
    }
    let w = ClosedSubgroup::from_parts(n, w_gens, Vec::new(), LatticeScale::One);
    let rhs_group = g_nu.sum_closure(&w)?;
    Ok(TripletCharacterization {
        g_nu,
        v_nu,
        c_nu,
        w,
        rhs_group,
    })
}

#[derive(Debug, Clone)]
pub struct CrossCheck {
    pub lhs: ClosedSubgroup,
    pub rhs: ClosedSubgroup,
    pub equal: bool,
}

/// The central oracle: {ψ=0}^⊥ computed from the zero set must equal
/// closure(G_ν + W) computed from the triplet, as exact canonical forms.
pub fn crosscheck_corollary2(t: &LevyTriplet) -> Result<CrossCheck, ZeroSetError> {
    let lhs = zero_set_exact(t)?.orthogonal();
    let rhs = triplet_characterization(t)?.rhs_group;
    let equal = lhs.equals(&rhs);
    Ok(CrossCheck { lhs, rhs, equal })
}

/// Verify {ψ = 0} = ⋂ {ψ_n = 0} over the supplied truncation radii by
/// stacking the per-truncation constraints into one lattice-preimage call.
pub fn truncation_zero_set_check(t: &LevyTriplet, radii: &[f64]) -> Result<bool, ZeroSetError> {
    require_rational(t)?;
    if radii.is_empty() {
        return Err(ZeroSetError::InvalidRadii("empty radius list".into()));
    }
    if radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ZeroSetError::InvalidRadii(format!("{radii:?} not increasing")));
    }
    let max_norm = t
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
    let last = *radii.last().unwrap();
    if last <= max_norm {
        return Err(ZeroSetError::InvalidRadii(format!(
            "final radius {last} does not exceed the largest atom norm {max_norm}"
        )));
    }
    let n = t.dim();
    let mut linear = Vec::new();
    let mut stacked_atoms = Vec::new();
    for &r in radii {
        let tr = truncate_measure(t, r)?;
        linear.extend(covariance_rows(&tr.triplet));
        if let Some(beff) = effective_drift_row(&tr.triplet) {
            linear.push(beff);
        }
        stacked_atoms.extend(atom_rows(&tr.triplet));
    }
    let s = kernel_basis(&linear, n);
    let intersection = lattice_preimage(&stacked_atoms, &s, n);
    Ok(intersection.equals(&zero_set_exact(t)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rint, rvec};
    use crate::scalar::Scalar;
    use crate::triplet::{Atom, LevyMeasure};

    fn delta_at(dim: usize, loc: &[i64]) -> Atom {
        Atom::new(
            Scalar::from_int(1),
            loc.iter().map(|&x| Scalar::from_int(x)).collect(),
        )
    }

    #[test]
    fn brownian_zero_set_is_trivial() {
        let zs = zero_set_exact(&LevyTriplet::brownian(1)).unwrap();
        assert!(zs.is_trivial());
    }

    #[test]
    fn single_atom_zero_set_is_two_pi_lattice() {
        // 1 − e^{iξ} = 0 ⟺ ξ ∈ 2πℤ; brute-force oracle: scan |ψ| on [−10,10].
        let t = LevyTriplet::compound_poisson(1, vec![delta_at(1, &[1])]);
        let zs = zero_set_exact(&t).unwrap();
        assert_eq!(zs.scale(), LatticeScale::TwoPi);
        assert_eq!(zs.lattice_basis(), &[rvec(&[1])][..]);

        let s = SymbolHandle::from_triplet(t).unwrap();
        let tau = std::f64::consts::TAU;
        let mut found = Vec::new();
        let mut xi = -10.0;
        while xi <= 10.0 {
            if s.eval(&[xi]).unwrap().norm() < 1e-3 {
                found.push(xi);
            }
            xi += 1e-3;
        }
        for f in found {
            let k = (f / tau).round();
            assert!((f - k * tau).abs() < 0.1, "scan zero {f} not near 2πℤ");
        }
    }

    #[test]
    fn mixed_gaussian_atom_zero_set() {
        // Q = diag(1,0), ν = δ_(0,1): Qξ = 0 forces ξ₁ = 0, atom forces
        // ξ₂ ∈ 2πℤ; |ψ(0, 2π)| confirms numerically.
        let t = LevyTriplet::new(
            vec![Scalar::zero(); 2],
            vec![
                vec![Scalar::from_int(1), Scalar::zero()],
                vec![Scalar::zero(), Scalar::zero()],
            ],
            LevyMeasure::DiscreteAtoms(vec![delta_at(2, &[0, 1])]),
        );
        let zs = zero_set_exact(&t).unwrap();
        assert!(zs.subspace_basis().is_empty());
        assert_eq!(zs.lattice_basis(), &[rvec(&[0, 1])][..]);
        assert_eq!(zs.scale(), LatticeScale::TwoPi);

        let s = SymbolHandle::from_triplet(t).unwrap();
        let v = s.eval(&[0.0, std::f64::consts::TAU]).unwrap();
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn liouville_verdict_for_stable() {
        let s = SymbolHandle::isotropic_stable(0.5, 1.0, 1).unwrap();
        let v = decide_liouville(&s).unwrap();
        assert!(v.holds);
        assert!(v.zero_set.is_trivial());
        assert!(v.periodicity_group.is_full_space());
    }

    #[test]
    fn liouville_verdict_for_single_atom() {
        let t = LevyTriplet::compound_poisson(1, vec![delta_at(1, &[1])]);
        let v = decide_liouville_triplet(&t).unwrap();
        assert!(!v.holds);
        assert_eq!(v.method, VerdictMethod::Exact);
        let tau = std::f64::consts::TAU;
        assert!(v
            .witnesses
            .iter()
            .any(|w| (w.location[0].abs() - tau).abs() < 1e-12));
        assert!(v.witnesses.iter().all(|w| w.residual <= 1e-10));
    }

    #[test]
    fn characterization_of_single_atom_model() {
        // G_ν = ℤ, c_ν = 0 (|b|=1 not compensated), W = {0}, rhs = ℤ.
        let t = LevyTriplet::compound_poisson(1, vec![delta_at(1, &[1])]);
        let ch = triplet_characterization(&t).unwrap();
        assert_eq!(ch.g_nu.lattice_basis(), &[rvec(&[1])][..]);
        assert!(ch.v_nu.is_trivial());
        assert!(ch.c_nu[0] == rint(0));
        assert!(ch.w.is_trivial());
        assert_eq!(ch.rhs_group.lattice_basis(), &[rvec(&[1])][..]);
    }

    #[test]
    fn characterization_of_pure_drift() {
        let t = LevyTriplet::new(
            vec![Scalar::from_int(1), Scalar::zero()],
            vec![vec![Scalar::zero(); 2]; 2],
            LevyMeasure::Null,
        );
        let ch = triplet_characterization(&t).unwrap();
        assert!(ch.g_nu.is_trivial());
        assert_eq!(ch.w.subspace_rank(), 1);
        assert_eq!(ch.rhs_group.subspace_rank(), 1);
        assert_eq!(ch.rhs_group.lattice_rank(), 0);
    }

    #[test]
    fn crosscheck_single_atom() {
        let t = LevyTriplet::compound_poisson(1, vec![delta_at(1, &[1])]);
        let cc = crosscheck_corollary2(&t).unwrap();
        assert!(cc.equal, "lhs {} vs rhs {}", cc.lhs, cc.rhs);
        assert_eq!(cc.lhs.lattice_basis(), &[rvec(&[1])][..]);
        assert_eq!(cc.lhs.scale(), LatticeScale::One);
    }

    #[test]
    fn crosscheck_brownian_full_space() {
        let cc = crosscheck_corollary2(&LevyTriplet::brownian(2)).unwrap();
        assert!(cc.equal);
        assert!(cc.lhs.is_full_space());
    }

    #[test]
    fn crosscheck_mixed_model() {
        let t = LevyTriplet::new(
            vec![Scalar::zero(); 2],
            vec![
                vec![Scalar::from_int(1), Scalar::zero()],
                vec![Scalar::zero(), Scalar::zero()],
            ],
            LevyMeasure::DiscreteAtoms(vec![delta_at(2, &[0, 1])]),
        );
        let cc = crosscheck_corollary2(&t).unwrap();
        assert!(cc.equal, "lhs {} vs rhs {}", cc.lhs, cc.rhs);
        // ℝ×ℤ: subspace e₁, lattice (0,1)
        assert_eq!(cc.lhs.subspace_rank(), 1);
        assert_eq!(cc.lhs.lattice_basis(), &[rvec(&[0, 1])][..]);
    }

    #[test]
    fn crosscheck_drift_compensated_model() {
        // b = −1/4, mass 1/2 at 1/2: ψ = ½(1 − e^{iξ/2}), zero set 4πℤ,
        // dual (1/2)ℤ; the compensator correction makes b + c_ν = 0.
        let t = LevyTriplet::new(
            vec![Scalar::from_rat(rat(-1, 4))],
            vec![vec![Scalar::zero()]],
            LevyMeasure::DiscreteAtoms(vec![Atom::new(
                Scalar::from_rat(rat(1, 2)),
                vec![Scalar::from_rat(rat(1, 2))],
            )]),
        );
        let ch = triplet_characterization(&t).unwrap();
        assert_eq!(ch.c_nu[0], rat(1, 4));
        assert!(ch.w.is_trivial(), "b + c_ν must vanish, got {}", ch.w);
        let cc = crosscheck_corollary2(&t).unwrap();
        assert!(cc.equal, "lhs {} vs rhs {}", cc.lhs, cc.rhs);
        assert_eq!(cc.lhs.lattice_basis(), &[vec![rat(1, 2)]][..]);
    }

    #[test]
    fn truncation_check_two_atoms() {
        // Atoms at 1 and 3, radii {2, 4}: 2πℤ ∩ (2π/3)ℤ = 2πℤ equals the
        // full zero set. Brute-force arithmetic-progression oracle below.
        let t = LevyTriplet::compound_poisson(1, vec![delta_at(1, &[1]), delta_at(1, &[3])]);
        assert!(truncation_zero_set_check(&t, &[2.0, 4.0]).unwrap());

        let mut common = Vec::new();
        for a in -30i64..=30 {
            // ξ = 2πa must also satisfy 3ξ ∈ 2πℤ, i.e. 3a integer: always.
            // Members of (2π/3)ℤ: ξ = 2πb/3; intersect: b = 3a.
            common.push(a);
        }
        assert_eq!(common.len(), 61); // every multiple of 2π survives
    }

    #[test]
    fn truncation_check_rejects_bad_radii() {
        let t = LevyTriplet::compound_poisson(1, vec![delta_at(1, &[1]), delta_at(1, &[3])]);
        assert!(truncation_zero_set_check(&t, &[]).is_err());
        assert!(truncation_zero_set_check(&t, &[2.0]).is_err()); // 2 < |3|
        assert!(truncation_zero_set_check(&t, &[4.0, 3.0]).is_err());
    }

    #[test]
    fn scan_finds_two_pi_zeros() {
        let t = LevyTriplet::compound_poisson(1, vec![delta_at(1, &[1])]);
        let s = SymbolHandle::from_triplet(t).unwrap();
        let cands = zero_scan_numeric(&s, 10.0, 0.01);
        let tau = std::f64::consts::TAU;
        let good: Vec<&ScanCandidate> = cands.iter().filter(|c| c.residual < 1e-10).collect();
        assert!(good.len() >= 3, "expected 0, ±2π, got {good:?}");
        for c in good {
            let k = (c.location[0] / tau).round();
            assert!((c.location[0] - k * tau).abs() < 1e-6);
        }
    }

    #[test]
    fn scan_on_brownian_only_origin() {
        let s = SymbolHandle::from_triplet(LevyTriplet::brownian(1)).unwrap();
        let cands = zero_scan_numeric(&s, 10.0, 0.01);
        let good: Vec<_> = cands.iter().filter(|c| c.residual < 1e-6).collect();
        assert_eq!(good.len(), 1);
        assert!(good[0].location[0].abs() < 1e-6);
    }

    #[test]
    fn incommensurable_atoms_have_no_numeric_zeros_off_origin() {
        let t = LevyTriplet::compound_poisson(
            1,
            vec![
                delta_at(1, &[1]),
                Atom::new(Scalar::from_int(1), vec![Scalar::approx(2.0_f64.sqrt())]),
            ],
        );
        let s = SymbolHandle::from_triplet(t.clone()).unwrap();
        let cands = zero_scan_numeric(&s, 50.0, 1e-3);
        for c in cands {
            let off_origin = c.location[0].abs() > 1e-2;
            if off_origin {
                assert!(
                    c.residual > 1e-6,
                    "unexpected near-zero at {} with residual {:.3e}",
                    c.location[0],
                    c.residual
                );
            }
        }
        let v = decide_liouville_triplet(&t).unwrap();
        assert!(v.holds);
        assert_eq!(v.method, VerdictMethod::NumericHeuristic);
    }

    #[test]
    fn exact_zero_generators_evaluate_to_zero() {
        // Exact/numeric consistency on a 2-D lattice model.
        let t = LevyTriplet::compound_poisson(2, vec![delta_at(2, &[1, 0]), delta_at(2, &[0, 1])]);
        let zs = zero_set_exact(&t).unwrap();
        let s = SymbolHandle::from_triplet(t).unwrap();
        for g in zs.generators_f64() {
            assert!(s.eval(&g).unwrap().norm() <= 1e-10);
        }
    }

    #[test]
    fn shift_property_at_exact_zeros() {
        // ψ(ξ + g) = ψ(ξ) for g in the zero set.
        let t = LevyTriplet::compound_poisson(1, vec![delta_at(1, &[1])]);
        let zs = zero_set_exact(&t).unwrap();
        let s = SymbolHandle::from_triplet(t).unwrap();
        let g = &zs.generators_f64()[0];
        let mut xi = -7.3;
        while xi < 7.3 {
            let a = s.eval(&[xi]).unwrap();
            let b = s.eval(&[xi + g[0]]).unwrap();
            assert!((a - b).norm() <= 1e-9 * (1.0 + a.norm()));
            xi += 0.37;
        }
    }

    #[test]
    fn subordinated_verdict_preserves_zero_set() {
        use crate::bernstein::BernsteinFunction;
        let t = LevyTriplet::compound_poisson(1, vec![delta_at(1, &[1])]);
        let base = SymbolHandle::from_triplet(t).unwrap();
        let s = SymbolHandle::subordinate(BernsteinFunction::power(0.5).unwrap(), base);
        let v = decide_liouville(&s).unwrap();
        assert!(!v.holds);
        assert_eq!(v.method, VerdictMethod::Exact);
        assert!(v.witnesses.iter().all(|w| w.residual <= 1e-10));
    }

}
