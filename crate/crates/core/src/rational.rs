//! Exact linear algebra over ℚ and ℤ.
//!
//! Everything the group algebra needs: reduced row echelon form, kernels,
//! linear solves, orthogonal projections, Hermite normal form, and unimodular
//! diagonalization of integer matrices. All of it is exact; no floating point
//! enters this module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;
pub type RatVec = Vec<Rat>;

/// `p/q` as an exact rational.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Integer as an exact rational.
pub fn rint(p: i64) -> Rat {
    Rat::from_integer(BigInt::from(p))
}

pub fn rvec(entries: &[i64]) -> RatVec {
    entries.iter().map(|&e| rint(e)).collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(Rat::is_zero)
}

pub fn sub_vec(a: &[Rat], b: &[Rat]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(c: &Rat, v: &[Rat]) -> RatVec {
    v.iter().map(|x| c * x).collect()
}

/// Reduced row echelon form in place. Returns the pivot columns; zero rows
/// are removed, so afterwards `mat.len()` is the rank.
pub fn rref(mat: &mut Vec<RatVec>) -> Vec<usize> {
    let rows = mat.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = mat[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let inv = mat[r][c].clone();
        for x in mat[r].iter_mut() {
            *x = &*x / &inv;
        }
        for i in 0..rows {
            if i != r && !mat[i][c].is_zero() {
                let f = mat[i][c].clone();
                for j in 0..cols {
                    let d = &f * &mat[r][j];
                    mat[i][j] = &mat[i][j] - d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    mat.truncate(r);
    pivots
}

/// Basis of `{x : Ax = 0}`, the null space of the row-constraint matrix.
/// For an empty constraint list the kernel is all of ℝⁿ.
pub fn kernel_basis(a: &[RatVec], n: usize) -> Vec<RatVec> {
    let mut m: Vec<RatVec> = a.to_vec();
    let pivots = rref(&mut m);
    let mut basis = Vec::new();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    for f in 0..n {
        if is_pivot[f] {
            continue;
        }
        let mut v = vec![Rat::zero(); n];
        v[f] = Rat::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -m[i][f].clone();
        }
        basis.push(v);
    }
    basis
}

/// Rank of a rational matrix.
pub fn rank(a: &[RatVec]) -> usize {
    let mut m = a.to_vec();
    rref(&mut m);
    m.len()
}

/// One solution of `Ax = b` if the system is consistent.
pub fn solve(a: &[RatVec], b: &[Rat]) -> Option<RatVec> {
    let rows = a.len();
    debug_assert_eq!(rows, b.len());
    let cols = if rows == 0 { 0 } else { a[0].len() };
    if rows == 0 {
        return Some(Vec::new());
    }
    // Augment, reduce, read off.
    let mut m: Vec<RatVec> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.last() == Some(&cols) {
        return None; // pivot in the augmented column: inconsistent
    }
    let mut x = vec![Rat::zero(); cols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = m[i][cols].clone();
    }
    Some(x)
}

/// Orthogonal projection of `v` onto the row span of `basis`
/// (rows must be linearly independent).
pub fn project_onto(v: &[Rat], basis: &[RatVec]) -> RatVec {
    let n = v.len();
    if basis.is_empty() {
        return vec![Rat::zero(); n];
    }
    // Solve the Gram system (B Bᵀ) c = B v; projection is Σ cᵢ bᵢ.
    let k = basis.len();
    let gram: Vec<RatVec> = (0..k)
        .map(|i| (0..k).map(|j| dot(&basis[i], &basis[j])).collect())
        .collect();
    let rhs: RatVec = basis.iter().map(|b| dot(b, v)).collect();
    let c = solve(&gram, &rhs).expect("Gram matrix of independent rows is invertible");
    let mut p = vec![Rat::zero(); n];
    for (ci, b) in c.iter().zip(basis) {
        for (pj, bj) in p.iter_mut().zip(b) {
            *pj += ci * bj;
        }
    }
    p
}

/// `v` minus its orthogonal projection onto the row span of `basis`.
pub fn project_off(v: &[Rat], basis: &[RatVec]) -> RatVec {
    sub_vec(v, &project_onto(v, basis))
}

/// Least common multiple of all denominators; `(c, c·rows)` with integer rows.
pub fn clear_denominators(rows: &[RatVec]) -> (BigInt, Vec<Vec<BigInt>>) {
    let mut c = BigInt::one();
    for row in rows {
        for x in row {
            c = c.lcm(x.denom());
        }
    }
    let int_rows = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| x.numer() * (&c / x.denom()))
                .collect::<Vec<_>>()
        })
        .collect();
    (c, int_rows)
}

/// Row-style Hermite normal form of an integer matrix: echelon shape,
/// positive pivots, entries above a pivot reduced into `[0, pivot)`.
/// Zero rows are removed. The result is the unique canonical basis of the
/// row ℤ-span, so two generating sets span the same lattice iff their HNFs
/// are identical.
pub fn hermite_normal_form(mut a: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let rows = a.len();
    if rows == 0 {
        return a;
    }
    let cols = a[0].len();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        // Euclidean reduction of column c among rows r.. until one nonzero is left.
        loop {
            let Some(p) = (r..rows)
                .filter(|&i| !a[i][c].is_zero())
                .min_by_key(|&i| a[i][c].abs())
            else {
                break;
            };
            a.swap(r, p);
            let mut clean = true;
            for i in r + 1..rows {
                if !a[i][c].is_zero() {
                    let q = a[i][c].div_floor(&a[r][c]);
                    for j in 0..cols {
                        let d = &q * &a[r][j];
                        a[i][j] -= d;
                    }
                    if !a[i][c].is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            for x in a[r].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..r {
            let q = a[i][c].div_floor(&a[r][c]);
            if !q.is_zero() {
                for j in 0..cols {
                    let d = &q * &a[r][j];
                    a[i][j] -= d;
                }
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}

/// Diagonalize an integer matrix by unimodular row and column operations:
/// returns `(d, v)` where `d` holds the diagonal entries of `U·N·V` (one per
/// pivot position, nonnegative) and `v` is the accumulated right transform,
/// column-tracked so that column `j` of `v` is the coefficient vector of the
/// `j`-th diagonal direction. Row transforms are not tracked.
pub fn diagonalize(n_mat: &[Vec<BigInt>]) -> (Vec<BigInt>, Vec<Vec<BigInt>>) {
    let m = n_mat.len();
    let d = if m == 0 { 0 } else { n_mat[0].len() };
    let mut a: Vec<Vec<BigInt>> = n_mat.to_vec();
    // v as columns: v[j] is the j-th column of the right transform.
    let mut v: Vec<Vec<BigInt>> = (0..d)
        .map(|j| {
            (0..d)
                .map(|i| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let steps = m.min(d);
    let mut t = 0;
    while t < steps {
        // Smallest nonzero entry of the trailing block to the pivot slot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..d {
                if !a[i][j].is_zero()
                    && best
                        .map(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                        .unwrap_or(true)
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else {
            break;
        };
        a.swap(t, bi);
        if bj != t {
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            v.swap(t, bj);
        }
        // Clear below and to the right of the pivot; repeat until both stay clean.
        let mut dirty = false;
        for i in t + 1..m {
            if !a[i][t].is_zero() {
                let q = a[i][t].div_floor(&a[t][t]);
                for j in 0..d {
                    let dd = &q * &a[t][j];
                    a[i][j] -= dd;
                }
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
        }
        for j in t + 1..d {
            if !a[t][j].is_zero() {
                let q = a[t][j].div_floor(&a[t][t]);
                for (row_idx, row) in a.iter_mut().enumerate() {
                    let dd = &q * &row[t];
                    let _ = row_idx;
                    row[j] -= dd;
                }
                for i in 0..d {
                    let dd = &q * &v[t][i];
                    v[j][i] -= dd;
                }
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
        }
        let below_clean = (t + 1..m).all(|i| a[i][t].is_zero());
        let right_clean = (t + 1..d).all(|j| a[t][j].is_zero());
        if !dirty && below_clean && right_clean {
            t += 1;
        }
    }
    let diag: Vec<BigInt> = (0..steps).map(|i| a[i][i].abs()).collect();
    (diag, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rmat(rows: &[&[i64]]) -> Vec<RatVec> {
        rows.iter().map(|r| rvec(r)).collect()
    }

    #[test]
    fn rref_identity_and_rank() {
        let mut m = rmat(&[&[2, 0], &[0, 3]]);
        let piv = rref(&mut m);
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(m, rmat(&[&[1, 0], &[0, 1]]));
    }

    #[test]
    fn rref_dependent_rows_dropped() {
        let mut m = rmat(&[&[1, 2], &[2, 4], &[3, 6]]);
        let piv = rref(&mut m);
        assert_eq!(piv, vec![0]);
        assert_eq!(m.len(), 1);
        assert_eq!(m[0], rvec(&[1, 2]));
    }

    #[test]
    fn kernel_of_single_constraint() {
        // {x : x1 + x2 = 0} = span{(-1, 1)}
        let k = kernel_basis(&rmat(&[&[1, 1]]), 2);
        assert_eq!(k.len(), 1);
        assert!(dot(&k[0], &rvec(&[1, 1])).is_zero());
    }

    #[test]
    fn kernel_of_empty_constraints_is_full_space() {
        let k = kernel_basis(&[], 3);
        assert_eq!(k.len(), 3);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = rmat(&[&[1, 1], &[1, -1]]);
        let x = solve(&a, &rvec(&[3, 1])).unwrap();
        assert_eq!(x, vec![rint(2), rint(1)]);
        let a2 = rmat(&[&[1, 1], &[2, 2]]);
        assert!(solve(&a2, &rvec(&[1, 3])).is_none());
    }

    #[test]
    fn projection_splits_orthogonally() {
        let basis = rmat(&[&[1, 1, 0]]);
        let v = rvec(&[1, 0, 5]);
        let p = project_onto(&v, &basis);
        assert_eq!(p, vec![rat(1, 2), rat(1, 2), rint(0)]);
        let q = project_off(&v, &basis);
        assert!(dot(&q, &basis[0]).is_zero());
    }

    #[test]
    fn hnf_gcd_of_scalars() {
        // ℤ-span of {2, 3} in 1-D is ℤ; brute-force oracle: smallest positive
        // element of {2a + 3b} over |a|,|b| ≤ 6.
        let mut smallest = i64::MAX;
        for a in -6i64..=6 {
            for b in -6i64..=6 {
                let x = 2 * a + 3 * b;
                if x > 0 && x < smallest {
                    smallest = x;
                }
            }
        }
        assert_eq!(smallest, 1);
        let h = hermite_normal_form(vec![vec![BigInt::from(2)], vec![BigInt::from(3)]]);
        assert_eq!(h, vec![vec![BigInt::from(smallest)]]);
    }

    #[test]
    fn hnf_canonical_reduction_above_pivot() {
        // Rows (1,2),(0,3): entry above the (2,2)-pivot must land in [0,3).
        let h = hermite_normal_form(vec![
            vec![BigInt::from(1), BigInt::from(2)],
            vec![BigInt::from(0), BigInt::from(3)],
        ]);
        assert_eq!(
            h,
            vec![
                vec![BigInt::from(1), BigInt::from(2)],
                vec![BigInt::from(0), BigInt::from(3)],
            ]
        );
        // A different generating set of the same lattice canonicalizes identically.
        let h2 = hermite_normal_form(vec![
            vec![BigInt::from(1), BigInt::from(5)],
            vec![BigInt::from(0), BigInt::from(-3)],
        ]);
        assert_eq!(h, h2);
    }

    #[test]
    fn diagonalize_recovers_invariant_factors() {
        // [[2,0],[0,3]] and [[2,1],[0,3]] both have |det| = 6 lattices.
        let (d, _v) = diagonalize(&[
            vec![BigInt::from(2), BigInt::from(1)],
            vec![BigInt::from(0), BigInt::from(3)],
        ]);
        let prod: BigInt = d.iter().product();
        assert_eq!(prod, BigInt::from(6));
        assert!(d.iter().all(|x| !x.is_zero()));
    }

    #[test]
    fn diagonalize_right_transform_is_consistent() {
        // Verify N·v_j = (diag_j)·(something integral in the row space is not
        // required); what we rely on is: for the returned v, N·V has the
        // cleared shape in each processed column. Spot-check via the defining
        // property used downstream: columns of V with zero diagonal span the
        // integer kernel.
        let n = vec![vec![BigInt::from(2), BigInt::from(-2)]];
        let (d, v) = diagonalize(&n);
        assert_eq!(d.len(), 1);
        assert!(!d[0].is_zero());
        // kernel column: N * v[1] = 0
        let kcol = &v[1];
        let s = &n[0][0] * &kcol[0] + &n[0][1] * &kcol[1];
        assert!(s.is_zero());
    }
}
