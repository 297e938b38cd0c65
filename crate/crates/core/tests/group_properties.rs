//! Randomized algebraic laws of the closed-subgroup module: duality,
//! membership against brute-force enumeration, and closure arithmetic.

use liouville_core::groups::{ClosedSubgroup, LatticeScale};
use liouville_core::rational::{rat, Rat, RatVec};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn double_dual_is_identity(dim in 1usize..=4, gens in proptest::collection::vec(proptest::collection::vec((-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d)), 4), 0..4)) {
        let gens: Vec<RatVec> = gens.into_iter().map(|g| g.into_iter().take(dim).collect()).collect();
        let g = ClosedSubgroup::from_lattice_generators(dim, gens, LatticeScale::TwoPi);
        let dd = g.orthogonal().orthogonal();
        prop_assert!(g.equals(&dd), "G = {g}, G^⊥⊥ = {dd}");
    }

    #[test]
    fn orthogonal_reverses_inclusion(dim in 1usize..=3, g1 in proptest::collection::vec(proptest::collection::vec((-4i64..=4, 1i64..=3).prop_map(|(n, d)| rat(n, d)), 3), 1..3), extra in proptest::collection::vec((-4i64..=4, 1i64..=3).prop_map(|(n, d)| rat(n, d)), 3)) {
        let g1: Vec<RatVec> = g1.into_iter().map(|g| g.into_iter().take(dim).collect()).collect();
        let extra: RatVec = extra.into_iter().take(dim).collect();
        let small = ClosedSubgroup::from_lattice_generators(dim, g1.clone(), LatticeScale::TwoPi);
        let mut g2 = g1;
        g2.push(extra);
        let big = ClosedSubgroup::from_lattice_generators(dim, g2, LatticeScale::TwoPi);
        // small ⊆ big, so big^⊥ ⊆ small^⊥: every generator of big^⊥ is a
        // member of small^⊥.
        let big_dual = big.orthogonal();
        let small_dual = small.orthogonal();
        for lam in big_dual.lattice_basis() {
            prop_assert!(small_dual.member(lam, big_dual.scale()).unwrap());
        }
        for v in big_dual.subspace_basis() {
            // subspace directions are scale-free members.
            prop_assert!(small_dual.member(v, LatticeScale::One).unwrap()
                || small_dual.member(v, big_dual.scale()).unwrap());
        }
    }

    #[test]
    fn member_agrees_with_brute_force(dim in 1usize..=3, gens in proptest::collection::vec(proptest::collection::vec((-3i64..=3, 1i64..=3).prop_map(|(n, d)| rat(n, d)), 3), 1..=2), coeffs in proptest::collection::vec(-6i64..=6, 2)) {
        let gens: Vec<RatVec> = gens.into_iter().map(|g| g.into_iter().take(dim).collect()).collect();
        let g = ClosedSubgroup::from_lattice_generators(dim, gens.clone(), LatticeScale::One);
        // A |k| ≤ 6 combination of the generators must be a member.
        let mut x = vec![Rat::from_integer(0.into()); dim];
        for (k, gen) in coeffs.iter().zip(&gens) {
            for (xi, gi) in x.iter_mut().zip(gen) {
                *xi += Rat::from_integer((*k).into()) * gi;
            }
        }
        prop_assert!(g.member(&x, LatticeScale::One).unwrap());
        // Shifting by half of the first canonical basis vector leaves the
        // lattice (the basis is a basis, so half a basis vector never lands
        // back inside).
        if let Some(b0) = g.lattice_basis().first() {
            let half = rat(1, 2);
            let y: RatVec = x.iter().zip(b0).map(|(xi, bi)| xi + &half * bi).collect();
            prop_assert!(!g.member(&y, LatticeScale::One).unwrap());
        }
    }

    #[test]
    fn sum_closure_commutes(dim in 1usize..=3, a in proptest::collection::vec(proptest::collection::vec((-4i64..=4, 1i64..=3).prop_map(|(n, d)| rat(n, d)), 3), 0..3), b in proptest::collection::vec(proptest::collection::vec((-4i64..=4, 1i64..=3).prop_map(|(n, d)| rat(n, d)), 3), 0..3)) {
        let a: Vec<RatVec> = a.into_iter().map(|g| g.into_iter().take(dim).collect()).collect();
        let b: Vec<RatVec> = b.into_iter().map(|g| g.into_iter().take(dim).collect()).collect();
        let ga = ClosedSubgroup::from_lattice_generators(dim, a, LatticeScale::One);
        let gb = ClosedSubgroup::from_lattice_generators(dim, b, LatticeScale::One);
        let ab = ga.sum_closure(&gb).unwrap();
        let ba = gb.sum_closure(&ga).unwrap();
        prop_assert!(ab.equals(&ba));
    }

    #[test]
    fn sum_closure_associates(dim in 1usize..=2, a in proptest::collection::vec((-4i64..=4, 1i64..=3).prop_map(|(n, d)| rat(n, d)), 2), b in proptest::collection::vec((-4i64..=4, 1i64..=3).prop_map(|(n, d)| rat(n, d)), 2), c in proptest::collection::vec((-4i64..=4, 1i64..=3).prop_map(|(n, d)| rat(n, d)), 2)) {
        let mk = |v: Vec<Rat>| ClosedSubgroup::from_lattice_generators(dim, vec![v.into_iter().take(dim).collect()], LatticeScale::One);
        let (ga, gb, gc) = (mk(a), mk(b), mk(c));
        let left = ga.sum_closure(&gb).unwrap().sum_closure(&gc).unwrap();
        let right = ga.sum_closure(&gb.sum_closure(&gc).unwrap()).unwrap();
        prop_assert!(left.equals(&right));
    }

    #[test]
    fn generators_regenerate_the_group(dim in 1usize..=3, gens in proptest::collection::vec(proptest::collection::vec((-5i64..=5, 1i64..=4).prop_map(|(n, d)| rat(n, d)), 3), 1..4)) {
        let gens: Vec<RatVec> = gens.into_iter().map(|g| g.into_iter().take(dim).collect()).collect();
        let g = ClosedSubgroup::from_lattice_generators(dim, gens, LatticeScale::One);
        let h = ClosedSubgroup::from_lattice_generators(dim, g.lattice_basis().to_vec(), LatticeScale::One);
        prop_assert!(g.equals(&h));
    }
}
