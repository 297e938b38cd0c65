//! Bernstein functions g(λ) = aλ + ∫(1 − e^{−λs})π(ds), their extension to
//! the right half plane, the classification of half-plane zeros, and the
//! zero-set preservation check for subordinated symbols g∘ψ.

use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use crate::groups::{lattice_preimage, standard_basis, ClosedSubgroup};
use crate::rational::{Rat, RatVec};
use crate::scalar::Scalar;
use crate::symbol::SymbolHandle;
use crate::triplet::LevyTriplet;
use crate::zeroset::{self, ScanCandidate, ScanOptions};

#[derive(Debug, Error)]
pub enum BernsteinError {
    #[error("invalid Bernstein parameter: {0}")]
    InvalidParameter(String),
    #[error("evaluation point outside the closed right half plane: Re = {0}")]
    OutsideHalfPlane(f64),
}

/// Canonical families. Each tag carries its representation (a, π):
/// Power(α): a=0, π(ds) = α/Γ(1−α)·s^{−1−α} ds; Log: a=0, π(ds) = s⁻¹e^{−s} ds;
/// Resolvent(τ): a=0, π(ds) = τe^{−sτ} ds; SemigroupComplement(t): a=0, π=δ_t;
/// Linear(a): π=0; Custom: finite atomic π.
#[derive(Debug, Clone)]
pub enum BernsteinFamily {
    Power { alpha: f64 },
    Log,
    Resolvent { tau: f64 },
    SemigroupComplement { t: Rat },
    Linear { a: f64 },
    Custom { a: f64, atoms: Vec<(f64, Scalar)> },
}

#[derive(Debug, Clone)]
pub struct BernsteinFunction {
    family: BernsteinFamily,
}

impl BernsteinFunction {
    pub fn power(alpha: f64) -> Result<Self, BernsteinError> {
        if !(0.0 < alpha && alpha < 1.0) {
            return Err(BernsteinError::InvalidParameter(format!(
                "power exponent {alpha} outside (0,1)"
            )));
        }
        Ok(Self {
            family: BernsteinFamily::Power { alpha },
        })
    }

    pub fn log() -> Self {
        Self {
            family: BernsteinFamily::Log,
        }
    }

    pub fn resolvent(tau: f64) -> Result<Self, BernsteinError> {
        if tau <= 0.0 {
            return Err(BernsteinError::InvalidParameter(format!(
                "resolvent parameter {tau} <= 0"
            )));
        }
        Ok(Self {
            family: BernsteinFamily::Resolvent { tau },
        })
    }

    /// g(λ) = 1 − e^{−tλ} with π = δ_t. The atom position is kept exact so
    /// the half-plane zero lattice 2π/t·ℤ is exact.
    pub fn semigroup_complement(t: Rat) -> Result<Self, BernsteinError> {
        if !t.is_positive() {
            return Err(BernsteinError::InvalidParameter(
                "semigroup time must be positive".into(),
            ));
        }
        Ok(Self {
            family: BernsteinFamily::SemigroupComplement { t },
        })
    }

    pub fn linear(a: f64) -> Result<Self, BernsteinError> {
        if a <= 0.0 {
            return Err(BernsteinError::InvalidParameter(format!(
                "linear coefficient {a} <= 0 gives g ≡ 0"
            )));
        }
        Ok(Self {
            family: BernsteinFamily::Linear { a },
        })
    }

    pub fn custom(a: f64, atoms: Vec<(f64, Scalar)>) -> Result<Self, BernsteinError> {
        if a < 0.0 {
            return Err(BernsteinError::InvalidParameter(format!(
                "linear coefficient {a} < 0"
            )));
        }
        if atoms
            .iter()
            .any(|(m, s)| *m <= 0.0 || s.to_f64() <= 0.0)
        {
            return Err(BernsteinError::InvalidParameter(
                "custom pi atoms need positive mass and location".into(),
            ));
        }
        if a == 0.0 && atoms.is_empty() {
            return Err(BernsteinError::InvalidParameter("g ≡ 0".into()));
        }
        Ok(Self {
            family: BernsteinFamily::Custom { a, atoms },
        })
    }

    pub fn family(&self) -> &BernsteinFamily {
        &self.family
    }

    /// Linear coefficient a of the representation.
    pub fn linear_coefficient(&self) -> f64 {
        match &self.family {
            BernsteinFamily::Linear { a } => *a,
            BernsteinFamily::Custom { a, .. } => *a,
            _ => 0.0,
        }
    }

    /// Atoms of π when π is purely atomic, None for the continuous families.
    pub fn pi_atoms(&self) -> Option<Vec<(f64, Scalar)>> {
        match &self.family {
            BernsteinFamily::SemigroupComplement { t } => {
                Some(vec![(1.0, Scalar::from_rat(t.clone()))])
            }
            BernsteinFamily::Custom { atoms, .. } => Some(atoms.clone()),
            BernsteinFamily::Linear { .. } => Some(Vec::new()),
            _ => None,
        }
    }

    /// g on the nonnegative reals.
    pub fn eval(&self, lambda: f64) -> Result<f64, BernsteinError> {
        if lambda < 0.0 {
            return Err(BernsteinError::OutsideHalfPlane(lambda));
        }
        Ok(match &self.family {
            BernsteinFamily::Power { alpha } => lambda.powf(*alpha),
            BernsteinFamily::Log => lambda.ln_1p(),
            BernsteinFamily::Resolvent { tau } => lambda / (tau + lambda),
            BernsteinFamily::SemigroupComplement { t } => {
                -(-t.to_f64().unwrap() * lambda).exp_m1()
            }
            BernsteinFamily::Linear { a } => a * lambda,
            BernsteinFamily::Custom { a, atoms } => {
                a * lambda
                    + atoms
                        .iter()
                        .map(|(m, s)| m * -(-s.to_f64() * lambda).exp_m1())
                        .sum::<f64>()
            }
        })
    }

    /// Analytic extension to {Re ζ ≥ 0}. Closed forms use principal branches;
    /// Re ψ ≥ 0 keeps subordination inside the slit-free region. A slightly
    /// negative real part (roundoff from symbol evaluation) is clamped to the
    /// imaginary axis.
    pub fn eval_halfplane(&self, zeta: Complex64) -> Result<Complex64, BernsteinError> {
        let zeta = if zeta.re < 0.0 {
            if zeta.re > -1e-9 * (1.0 + zeta.norm()) {
                Complex64::new(0.0, zeta.im)
            } else {
                return Err(BernsteinError::OutsideHalfPlane(zeta.re));
            }
        } else {
            zeta
        };
        Ok(match &self.family {
            BernsteinFamily::Power { alpha } => {
                if zeta == Complex64::ZERO {
                    Complex64::ZERO
                } else {
                    zeta.powf(*alpha)
                }
            }
            BernsteinFamily::Log => (Complex64::new(1.0, 0.0) + zeta).ln(),
            BernsteinFamily::Resolvent { tau } => zeta / (tau + zeta),
            BernsteinFamily::SemigroupComplement { t } => {
                Complex64::new(1.0, 0.0) - (-zeta * t.to_f64().unwrap()).exp()
            }
            BernsteinFamily::Linear { a } => zeta * *a,
            BernsteinFamily::Custom { a, atoms } => {
                let mut acc = zeta * *a;
                for (m, s) in atoms {
                    acc += (Complex64::new(1.0, 0.0) - (-zeta * s.to_f64()).exp()) * *m;
                }
                acc
            }
        })
    }
}

/// Zeros of g on the closed right half plane.
#[derive(Debug, Clone)]
pub enum HalfplaneZeros {
    /// g(ζ) = 0 only at ζ = 0 (a > 0, or supp π not discrete).
    OnlyZeroAtOrigin,
    /// a = 0 with atomic π: zeros sit on the imaginary axis at iη for η in
    /// this 1-D group (trivial group still means only the origin).
    ImaginaryAxisLattice(ClosedSubgroup),
    /// Irrational atom ratios: numeric scan evidence only.
    Heuristic(Vec<ScanCandidate>),
}

/// Classify the half-plane zero set of g.
///
/// Re g(λ+iη) = aλ + ∫(1 − e^{−λs}cos ηs)π(ds) is strictly positive for
/// λ > 0 when a > 0 or π ≠ 0; zeros can only sit on the imaginary axis where
/// ∫(1 − cos ηs)π(ds) = 0, which for η ≠ 0 forces supp π discrete with
/// commensurable atoms: η·s_k ∈ 2πℤ for every atom.
pub fn halfplane_zero_classification(g: &BernsteinFunction) -> HalfplaneZeros {
    if g.linear_coefficient() > 0.0 {
        return HalfplaneZeros::OnlyZeroAtOrigin;
    }
    let Some(atoms) = g.pi_atoms() else {
        // Power, Log, Resolvent: π has a density, supp π is not discrete.
        return HalfplaneZeros::OnlyZeroAtOrigin;
    };
    if atoms.is_empty() {
        return HalfplaneZeros::OnlyZeroAtOrigin;
    }
    if atoms.iter().all(|(_, s)| s.is_exact()) {
        let rows: Vec<RatVec> = atoms
            .iter()
            .map(|(_, s)| vec![s.as_exact().unwrap().clone()])
            .collect();
        let group = lattice_preimage(&rows, &standard_basis(1), 1);
        if group.is_trivial() {
            return HalfplaneZeros::OnlyZeroAtOrigin;
        }
        return HalfplaneZeros::ImaginaryAxisLattice(group);
    }
    // Incommensurable (tagged-irrational) atoms: scan Σ m(1 − cos ηs) for
    // near-zeros of g along the imaginary axis.
    let g2 = g.clone();
    let eval = move |eta: &[f64]| {
        g2.eval_halfplane(Complex64::new(0.0, eta[0]))
            .map(|v| v.norm())
            .unwrap_or(f64::INFINITY)
    };
    let candidates = zeroset::scan_zeros(&eval, 1, &ScanOptions::for_dim(1));
    HalfplaneZeros::Heuristic(candidates)
}

/// g∘ψ as an evaluation composite (valid since Re ψ ≥ 0). No triplet-level
/// reconstruction of the subordinated symbol is attempted.
pub fn subordinate_symbol(g: BernsteinFunction, psi: SymbolHandle) -> SymbolHandle {
    SymbolHandle::subordinate(g, psi)
}

/// Outcome of the zero-set preservation test for g∘ψ.
#[derive(Debug, Clone)]
pub struct Corollary1Check {
    /// Half-plane zeros of g reduce to the origin (the preservation
    /// hypothesis: a ≠ 0 or supp π not discrete).
    pub condition_met: bool,
    /// {g∘ψ = 0} agrees with {ψ = 0}: residuals ≤ 1e−10 on the exact
    /// generators, and no polished numeric candidate off the exact group.
    pub zero_sets_equal: bool,
    pub max_generator_residual: f64,
    pub off_group_candidates: Vec<ScanCandidate>,
}

/// Check that subordination by g preserves the zero set of a rational
/// discrete model: |{(g∘ψ)(gen)}| stays at machine zero on the generators of
/// {ψ = 0}, and every polished numeric zero of g∘ψ lies on the exact group.
pub fn corollary1_equivalence_check(
    g: &BernsteinFunction,
    triplet: &LevyTriplet,
) -> Result<Corollary1Check, zeroset::ZeroSetError> {
    let condition_met = matches!(
        halfplane_zero_classification(g),
        HalfplaneZeros::OnlyZeroAtOrigin
    );
    let zero_set = zeroset::zero_set_exact(triplet)?;
    let base = SymbolHandle::from_triplet(triplet.clone())
        .map_err(zeroset::ZeroSetError::Symbol)?;
    let composite = SymbolHandle::subordinate(g.clone(), base);

    let mut max_res = 0.0_f64;
    if zero_set.scale() == crate::groups::LatticeScale::TwoPi {
        for lam in zero_set.lattice_basis() {
            let v = composite
                .eval_two_pi_rational(lam)
                .map_err(zeroset::ZeroSetError::Symbol)?;
            max_res = max_res.max(v.norm());
        }
    }
    for sub in zero_set.subspace_basis() {
        let loc: Vec<f64> = sub.iter().map(|x| x.to_f64().unwrap()).collect();
        let v = composite.eval(&loc).map_err(zeroset::ZeroSetError::Symbol)?;
        max_res = max_res.max(v.norm());
    }
    let gens_ok = max_res <= 1e-10;

    let opts = ScanOptions::for_dim(triplet.dim());
    let candidates = zeroset::zero_scan_numeric(&composite, opts.box_halfwidth, opts.step);
    let off_group: Vec<ScanCandidate> = candidates
        .into_iter()
        .filter(|c| c.residual <= 1e-10 && !zero_set.member_approx(&c.location, 1e-6))
        .collect();

    Ok(Corollary1Check {
        condition_met,
        zero_sets_equal: gens_ok && off_group.is_empty(),
        max_generator_residual: max_res,
        off_group_candidates: off_group,
    })
}
