//! Randomized law checks for characteristic exponents across model families:
//! Hermitian symmetry, nonnegative real part, subadditivity of √|ψ|, the
//! positive-definite-kernel bound, truncation error bounds, and the period
//! shift at exact zeros.

use liouville_core::scalar::Scalar;
use liouville_core::symbol::SymbolHandle;
use liouville_core::triplet::{truncate_measure, Atom, LevyMeasure, LevyTriplet};
use liouville_core::rational::rat;
use proptest::prelude::*;

fn s(p: i64, q: i64) -> Scalar {
    Scalar::from_rat(rat(p, q))
}

fn models() -> Vec<(&'static str, SymbolHandle)> {
    let delta1 = LevyTriplet::compound_poisson(
        1,
        vec![Atom::new(Scalar::from_int(1), vec![Scalar::from_int(1)])],
    );
    let sym = LevyTriplet::compound_poisson(
        1,
        vec![
            Atom::new(Scalar::from_int(1), vec![Scalar::from_int(1)]),
            Atom::new(Scalar::from_int(1), vec![Scalar::from_int(-1)]),
        ],
    );
    let compensated = LevyTriplet::new(
        vec![s(-1, 4)],
        vec![vec![Scalar::zero()]],
        LevyMeasure::DiscreteAtoms(vec![Atom::new(s(1, 2), vec![s(1, 2)])]),
    );
    let mixed = LevyTriplet::new(
        vec![Scalar::zero(); 2],
        vec![
            vec![Scalar::from_int(1), Scalar::zero()],
            vec![Scalar::zero(), Scalar::zero()],
        ],
        LevyMeasure::DiscreteAtoms(vec![Atom::new(
            Scalar::from_int(1),
            vec![Scalar::zero(), Scalar::from_int(1)],
        )]),
    );
    vec![
        ("brownian1d", SymbolHandle::from_triplet(LevyTriplet::brownian(1)).unwrap()),
        ("delta1", SymbolHandle::from_triplet(delta1).unwrap()),
        ("sympoisson", SymbolHandle::from_triplet(sym).unwrap()),
        ("compensated", SymbolHandle::from_triplet(compensated).unwrap()),
        ("mixed2d", SymbolHandle::from_triplet(mixed).unwrap()),
        ("stable_half", SymbolHandle::isotropic_stable(0.5, 1.0, 1).unwrap()),
        ("stable_one_2d", SymbolHandle::isotropic_stable(1.0, 1.0, 2).unwrap()),
        ("drift2d", SymbolHandle::pure_drift(vec![1.0, 0.0]).unwrap()),
    ]
}

fn sample(dim: usize, raw: &[f64]) -> Vec<f64> {
    raw.iter().take(dim).cloned().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hermitian_symmetry(raw in proptest::collection::vec(-20.0f64..20.0, 2)) {
        for (name, sym) in models() {
            let xi = sample(sym.dim(), &raw);
            let neg: Vec<f64> = xi.iter().map(|v| -v).collect();
            let a = sym.eval(&xi).unwrap();
            let b = sym.eval(&neg).unwrap();
            prop_assert!(
                (b - a.conj()).norm() <= 1e-12 * (1.0 + a.norm()),
                "{name}: ψ(−ξ) ≠ conj ψ(ξ) at {xi:?}"
            );
        }
    }

    #[test]
    fn nonnegative_real_part(raw in proptest::collection::vec(-20.0f64..20.0, 2)) {
        for (name, sym) in models() {
            let xi = sample(sym.dim(), &raw);
            let v = sym.eval(&xi).unwrap();
            prop_assert!(v.re >= -1e-12 * (1.0 + v.norm()), "{name}: Re ψ < 0 at {xi:?}");
        }
    }

    #[test]
    fn sqrt_subadditivity(raw in proptest::collection::vec(-10.0f64..10.0, 4)) {
        for (name, sym) in models() {
            let d = sym.dim();
            let xi = sample(d, &raw);
            let eta = sample(d, &raw[2..]);
            let total: Vec<f64> = xi.iter().zip(&eta).map(|(a, b)| a + b).collect();
            let lhs = sym.eval(&total).unwrap().norm().sqrt();
            let rhs = sym.eval(&xi).unwrap().norm().sqrt() + sym.eval(&eta).unwrap().norm().sqrt();
            prop_assert!(lhs <= rhs + 1e-9, "{name}: subadditivity at {xi:?}, {eta:?}");
        }
    }

    #[test]
    fn kernel_cauchy_schwarz(raw in proptest::collection::vec(-10.0f64..10.0, 4)) {
        // |ψ(ξ) + conj ψ(η) − ψ(ξ−η)|² ≤ 4|ψ(ξ)||ψ(η)|: Cauchy–Schwarz for
        // the positive-definite kernel; equality for Brownian symbols.
        for (name, sym) in models() {
            let d = sym.dim();
            let xi = sample(d, &raw);
            let eta = sample(d, &raw[2..]);
            let diff: Vec<f64> = xi.iter().zip(&eta).map(|(a, b)| a - b).collect();
            let p_xi = sym.eval(&xi).unwrap();
            let p_eta = sym.eval(&eta).unwrap();
            let p_diff = sym.eval(&diff).unwrap();
            let k = p_xi + p_eta.conj() - p_diff;
            prop_assert!(
                k.norm_sqr() <= 4.0 * p_xi.norm() * p_eta.norm() + 1e-9,
                "{name}: kernel bound at {xi:?}, {eta:?}"
            );
        }
    }

    #[test]
    fn truncation_uniform_bound(xi in -40.0f64..40.0, radius in 1.0f64..7.0) {
        // |ψ − ψ_n| ≤ 2ν(B_n^c) pointwise, three-atom model.
        let t = LevyTriplet::compound_poisson(
            1,
            vec![
                Atom::new(Scalar::from_int(1), vec![s(1, 2)]),
                Atom::new(s(1, 2), vec![Scalar::from_int(2)]),
                Atom::new(s(1, 3), vec![Scalar::from_int(5)]),
            ],
        );
        let full = SymbolHandle::from_triplet(t.clone()).unwrap();
        let tr = truncate_measure(&t, radius).unwrap();
        let cut = SymbolHandle::from_triplet(tr.triplet.clone()).unwrap();
        let gap = (full.eval(&[xi]).unwrap() - cut.eval(&[xi]).unwrap()).norm();
        prop_assert!(gap <= tr.sup_error_bound + 1e-12);
    }

    #[test]
    fn zero_shift_periodicity(xi in -25.0f64..25.0, k in 1i64..=3) {
        // ψ(ξ + g) = ψ(ξ) for g in the zero set (δ₁ model, g = 2πk).
        let t = LevyTriplet::compound_poisson(
            1,
            vec![Atom::new(Scalar::from_int(1), vec![Scalar::from_int(1)])],
        );
        let sym = SymbolHandle::from_triplet(t).unwrap();
        let g = k as f64 * std::f64::consts::TAU;
        let a = sym.eval(&[xi]).unwrap();
        let b = sym.eval(&[xi + g]).unwrap();
        prop_assert!((a - b).norm() <= 1e-9 * (1.0 + a.norm()));
    }
}

#[test]
fn truncation_bound_tight_at_phase_pi() {
    // Removing the single atom at 5 (mass 1/3) with radius 3 gives bound
    // 2/3; at ξ = π/5 the removed term is (1/3)|1 − e^{iπ}| = 2/3 exactly.
    let t = LevyTriplet::compound_poisson(
        1,
        vec![
            Atom::new(Scalar::from_int(1), vec![s(1, 2)]),
            Atom::new(s(1, 2), vec![Scalar::from_int(2)]),
            Atom::new(s(1, 3), vec![Scalar::from_int(5)]),
        ],
    );
    let full = SymbolHandle::from_triplet(t.clone()).unwrap();
    let tr = truncate_measure(&t, 3.0).unwrap();
    let cut = SymbolHandle::from_triplet(tr.triplet.clone()).unwrap();
    let xi = std::f64::consts::PI / 5.0;
    let gap = (full.eval(&[xi]).unwrap() - cut.eval(&[xi]).unwrap()).norm();
    assert!((gap - tr.sup_error_bound).abs() <= 1e-9, "gap {gap} vs bound {}", tr.sup_error_bound);
}
