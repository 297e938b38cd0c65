//! Exact algebra of closed additive subgroups of ℝⁿ.
//!
//! Every closed subgroup of (ℝⁿ, +) decomposes as E ⊕ G with E a linear
//! subspace and G a relative lattice inside E^⊥. We keep both parts over
//! arbitrary-precision rationals in a canonical form — the subspace basis in
//! reduced row echelon form, the lattice basis as the Hermite normal form of
//! its integer coordinate matrix after clearing denominators — so that two
//! groups are equal iff their canonical forms are structurally equal.
//!
//! Groups produced by exponential constraints (ξ·λ ∈ 2πℤ) carry the factor
//! 2π symbolically: a group with [`LatticeScale::TwoPi`] stores rational
//! lattice generators whose actual vectors are 2π times the stored entries.
//! This keeps every computation rational; 2π is introduced or removed only
//! when a dual group is taken.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::rational::{
    clear_denominators, diagonalize, dot, hermite_normal_form, is_zero_vec, kernel_basis,
    project_off, rref, solve, sub_vec, Rat, RatVec,
};

/// Unit attached to the lattice generators of a group.
///
/// `TwoPi` lattices have actual generators 2π·(stored rational vector);
/// subspace parts are scale-free. A group with an empty lattice is always
/// normalized to `One`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeScale {
    One,
    TwoPi,
}

impl LatticeScale {
    pub fn factor(self) -> f64 {
        match self {
            LatticeScale::One => 1.0,
            LatticeScale::TwoPi => std::f64::consts::TAU,
        }
    }

    fn flip(self) -> Self {
        match self {
            LatticeScale::One => LatticeScale::TwoPi,
            LatticeScale::TwoPi => LatticeScale::One,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum GroupError {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("sum of lattices with incommensurable scales (2π vs 1) is not supported")]
    IncommensurableScales,
}

/// A closed additive subgroup of ℝⁿ in canonical subspace ⊕ lattice form.
#[derive(Debug, Clone)]
pub struct ClosedSubgroup {
    dim: usize,
    /// RREF basis of the subspace part E.
    subspace: Vec<RatVec>,
    /// Canonical basis of the discrete part G ⊂ E^⊥, each row orthogonal to
    /// every subspace row; actual vectors are `scale.factor()` times these.
    lattice: Vec<RatVec>,
    scale: LatticeScale,
}

impl ClosedSubgroup {
    /// The trivial group {0}.
    pub fn trivial(dim: usize) -> Self {
        ClosedSubgroup {
            dim,
            subspace: Vec::new(),
            lattice: Vec::new(),
            scale: LatticeScale::One,
        }
    }

    /// All of ℝⁿ.
    pub fn full(dim: usize) -> Self {
        let subspace = (0..dim)
            .map(|i| {
                let mut v = vec![Rat::zero(); dim];
                v[i] = Rat::from_integer(BigInt::from(1));
                v
            })
            .collect();
        let mut g = ClosedSubgroup {
            dim,
            subspace,
            lattice: Vec::new(),
            scale: LatticeScale::One,
        };
        g.canonicalize(Vec::new());
        g
    }

    /// Group generated by a subspace (spanned by `subspace_gens`) together
    /// with the ℤ-span of `lattice_gens`, canonicalized.
    pub fn from_parts(
        dim: usize,
        subspace_gens: Vec<RatVec>,
        lattice_gens: Vec<RatVec>,
        scale: LatticeScale,
    ) -> Self {
        let mut g = ClosedSubgroup {
            dim,
            subspace: subspace_gens,
            lattice: Vec::new(),
            scale,
        };
        g.canonicalize(lattice_gens);
        g
    }

    /// Closure of the ℤ-span of rational generators. Over ℚ this is always a
    /// pure lattice: scaling by a common denominator embeds it in ℤⁿ, so the
    /// group is discrete and already closed.
    pub fn from_lattice_generators(dim: usize, gens: Vec<RatVec>, scale: LatticeScale) -> Self {
        Self::from_parts(dim, Vec::new(), gens, scale)
    }

    fn canonicalize(&mut self, lattice_gens: Vec<RatVec>) {
        rref(&mut self.subspace);
        let projected: Vec<RatVec> = lattice_gens
            .into_iter()
            .map(|v| project_off(&v, &self.subspace))
            .filter(|v| !is_zero_vec(v))
            .collect();
        if projected.is_empty() {
            self.lattice = Vec::new();
            self.scale = LatticeScale::One;
            return;
        }
        let (c, int_rows) = clear_denominators(&projected);
        let hnf = hermite_normal_form(int_rows);
        let c = Rat::from_integer(c);
        self.lattice = hnf
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|x| Rat::from_integer(x) / &c)
                    .collect()
            })
            .collect();
        if self.lattice.is_empty() {
            self.scale = LatticeScale::One;
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn subspace_basis(&self) -> &[RatVec] {
        &self.subspace
    }

    pub fn lattice_basis(&self) -> &[RatVec] {
        &self.lattice
    }

    pub fn scale(&self) -> LatticeScale {
        self.scale
    }

    pub fn is_trivial(&self) -> bool {
        self.subspace.is_empty() && self.lattice.is_empty()
    }

    pub fn is_full_space(&self) -> bool {
        self.subspace.len() == self.dim
    }

    pub fn subspace_rank(&self) -> usize {
        self.subspace.len()
    }

    pub fn lattice_rank(&self) -> usize {
        self.lattice.len()
    }

    /// Exact membership of `scale_of_x · x` in the group.
    ///
    /// Decomposes x off the subspace part and solves the echelon lattice
    /// system over ℚ, demanding integer coefficients. A vector carrying the
    /// other scale can only belong to the group through its subspace part
    /// (2π·q = q′ has no nonzero rational solutions).
    pub fn member(&self, x: &[Rat], scale_of_x: LatticeScale) -> Result<bool, GroupError> {
        if x.len() != self.dim {
            return Err(GroupError::DimensionMismatch(x.len(), self.dim));
        }
        let y = project_off(x, &self.subspace);
        if is_zero_vec(&y) {
            return Ok(true);
        }
        if self.lattice.is_empty() || scale_of_x != self.scale {
            return Ok(false);
        }
        Ok(lattice_member(&y, &self.lattice))
    }

    /// Approximate membership of a floating-point vector (interpreted at
    /// physical scale, i.e. 2π factors already multiplied out), within `tol`
    /// in the sup norm. Used to place polished numeric zero candidates.
    pub fn member_approx(&self, x: &[f64], tol: f64) -> bool {
        assert_eq!(x.len(), self.dim);
        let sub: Vec<Vec<f64>> = self
            .subspace
            .iter()
            .map(|r| r.iter().map(|q| q.to_f64().unwrap()).collect())
            .collect();
        let mut y: Vec<f64> = x.to_vec();
        if !sub.is_empty() {
            // Project off the subspace numerically via the Gram system.
            let k = sub.len();
            let gram: Vec<Vec<f64>> = (0..k)
                .map(|i| (0..k).map(|j| dot_f64(&sub[i], &sub[j])).collect())
                .collect();
            let rhs: Vec<f64> = sub.iter().map(|b| dot_f64(b, &y)).collect();
            if let Some(c) = solve_f64(&gram, &rhs) {
                for (ci, b) in c.iter().zip(&sub) {
                    for (yj, bj) in y.iter_mut().zip(b) {
                        *yj -= ci * bj;
                    }
                }
            }
        }
        if self.lattice.is_empty() {
            return y.iter().all(|v| v.abs() <= tol);
        }
        let f = self.scale.factor();
        let lat: Vec<Vec<f64>> = self
            .lattice
            .iter()
            .map(|r| r.iter().map(|q| q.to_f64().unwrap() * f).collect())
            .collect();
        // Babai rounding: least-squares coefficients, rounded to integers.
        let k = lat.len();
        let gram: Vec<Vec<f64>> = (0..k)
            .map(|i| (0..k).map(|j| dot_f64(&lat[i], &lat[j])).collect())
            .collect();
        let rhs: Vec<f64> = lat.iter().map(|b| dot_f64(b, &y)).collect();
        let Some(c) = solve_f64(&gram, &rhs) else {
            return false;
        };
        let mut resid = y;
        for (ci, b) in c.iter().zip(&lat) {
            let r = ci.round();
            for (rj, bj) in resid.iter_mut().zip(b) {
                *rj -= r * bj;
            }
        }
        resid.iter().all(|v| v.abs() <= tol)
    }

    /// The orthogonal subgroup G^⊥ = {ξ : e^{iξ·g} = 1 for all g ∈ G}.
    ///
    /// Subspace directions force ξ ⊥ E; each lattice generator 2π·λ (resp. λ)
    /// forces ξ·λ ∈ ℤ (resp. ξ·λ ∈ 2πℤ), so the dual flips the 2π scale.
    /// Taking the dual twice returns the original canonical group.
    pub fn orthogonal(&self) -> ClosedSubgroup {
        let ambient = kernel_basis(&self.subspace, self.dim);
        if self.lattice.is_empty() {
            return ClosedSubgroup::from_parts(
                self.dim,
                ambient,
                Vec::new(),
                LatticeScale::One,
            );
        }
        let (sub, lat) = integral_preimage(&self.lattice, &ambient, self.dim);
        ClosedSubgroup::from_parts(self.dim, sub, lat, self.scale.flip())
    }

    /// Canonical form of the closure of {g₁ + g₂ : gᵢ ∈ Gᵢ}.
    ///
    /// Over rationals the sum of two lattices is again a rational lattice, so
    /// no dense direction can appear except through subspace ⊕ lattice
    /// interaction, which canonicalization handles by projection. Lattices on
    /// different 2π scales cannot be combined exactly and are rejected.
    pub fn sum_closure(&self, other: &ClosedSubgroup) -> Result<ClosedSubgroup, GroupError> {
        if self.dim != other.dim {
            return Err(GroupError::DimensionMismatch(self.dim, other.dim));
        }
        let scale = match (self.lattice.is_empty(), other.lattice.is_empty()) {
            (true, true) => LatticeScale::One,
            (false, true) => self.scale,
            (true, false) => other.scale,
            (false, false) if self.scale == other.scale => self.scale,
            _ => return Err(GroupError::IncommensurableScales),
        };
        let mut sub = self.subspace.clone();
        sub.extend(other.subspace.iter().cloned());
        let mut lat = self.lattice.clone();
        lat.extend(other.lattice.iter().cloned());
        Ok(ClosedSubgroup::from_parts(self.dim, sub, lat, scale))
    }

    /// {x ∈ group : x ∈ S} for a rational subspace S (given by spanning rows).
    pub fn intersect_subspace(&self, s_basis: &[RatVec]) -> Result<ClosedSubgroup, GroupError> {
        for s in s_basis {
            if s.len() != self.dim {
                return Err(GroupError::DimensionMismatch(s.len(), self.dim));
            }
        }
        // Constraints of S: rows c with c·x = 0 characterizing S.
        let constraints = kernel_basis(s_basis, self.dim);
        if constraints.is_empty() {
            return Ok(self.clone());
        }
        // x = Eᵀa + s·Λᵀm must satisfy C x = 0, i.e. (CEᵀ)a = −(CΛᵀ)m.
        // Membership of (CΛᵀ)m in the column space of CEᵀ is a rational
        // condition on m; its integer solutions form a lattice.
        let e = &self.subspace;
        let lam = &self.lattice;
        let ce: Vec<RatVec> = constraints
            .iter()
            .map(|c| e.iter().map(|erow| dot(c, erow)).collect())
            .collect(); // (#C) × (dim E)
        let cl: Vec<RatVec> = constraints
            .iter()
            .map(|c| lam.iter().map(|lrow| dot(c, lrow)).collect())
            .collect(); // (#C) × (rank Λ)

        // Subspace part: {Eᵀa : (CEᵀ)a = 0}.
        let a_kernel = kernel_basis(&ce, e.len());
        let sub_gens: Vec<RatVec> = a_kernel
            .iter()
            .map(|a| combine_rows(e, a, self.dim))
            .collect();

        if lam.is_empty() {
            return Ok(ClosedSubgroup::from_parts(
                self.dim,
                sub_gens,
                Vec::new(),
                LatticeScale::One,
            ));
        }

        // Y = column space of CEᵀ; (CΛᵀ)m ∈ Y ⟺ z·(CΛᵀ)m = 0 for all z ⊥ Y.
        let ce_t: Vec<RatVec> = transpose(&ce, e.len());
        let y_perp = kernel_basis(&ce_t, constraints.len());
        let m_constraints: Vec<RatVec> = y_perp
            .iter()
            .map(|z| {
                (0..lam.len())
                    .map(|j| (0..constraints.len()).map(|i| &z[i] * &cl[i][j]).sum())
                    .collect()
            })
            .collect();
        let (_, int_m) = clear_denominators(&m_constraints);
        let (diag, v) = diagonalize(&int_m);
        let r = diag.iter().filter(|d| !d.is_zero()).count();
        let mut lat_gens = Vec::new();
        for col in v.iter().skip(r) {
            let m_vec: RatVec = col.iter().map(|x| Rat::from_integer(x.clone())).collect();
            // Solve (CEᵀ)a = −(CΛᵀ)m for a.
            let rhs: RatVec = (0..constraints.len())
                .map(|i| -dot(&cl[i], &m_vec))
                .collect();
            let a = solve(&ce, &rhs)
                .expect("m was constructed so that (CΛᵀ)m lies in the column space of CEᵀ");
            let mut x = combine_rows(lam, &m_vec, self.dim);
            let ea = combine_rows(e, &a, self.dim);
            x = x.iter().zip(&ea).map(|(u, w)| u + w).collect();
            lat_gens.push(x);
        }
        Ok(ClosedSubgroup::from_parts(
            self.dim, sub_gens, lat_gens, self.scale,
        ))
    }

    /// Structural equality of canonical forms (⟺ equality of the groups).
    pub fn equals(&self, other: &ClosedSubgroup) -> bool {
        self.dim == other.dim
            && self.subspace == other.subspace
            && self.lattice == other.lattice
            && (self.lattice.is_empty() || self.scale == other.scale)
    }

    /// Subspace directions and physical-scale lattice generators as floats.
    pub fn generators_f64(&self) -> Vec<Vec<f64>> {
        let f = self.scale.factor();
        self.lattice
            .iter()
            .map(|row| row.iter().map(|q| q.to_f64().unwrap() * f).collect())
            .chain(
                self.subspace
                    .iter()
                    .map(|row| row.iter().map(|q| q.to_f64().unwrap()).collect()),
            )
            .collect()
    }
}

impl PartialEq for ClosedSubgroup {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl fmt::Display for ClosedSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "{{0}}");
        }
        if self.is_full_space() {
            return write!(f, "R^{}", self.dim);
        }
        let mut parts = Vec::new();
        if !self.subspace.is_empty() {
            let rows: Vec<String> = self.subspace.iter().map(|r| fmt_vec(r)).collect();
            parts.push(format!("span{{{}}}", rows.join(", ")));
        }
        for row in &self.lattice {
            let prefix = match self.scale {
                LatticeScale::One => String::new(),
                LatticeScale::TwoPi => "2pi*".to_string(),
            };
            if self.dim == 1 {
                let qs = fmt_rat(&row[0]);
                if qs == "1" {
                    parts.push(format!("{prefix}Z"));
                } else {
                    parts.push(format!("{prefix}{qs}*Z"));
                }
            } else {
                parts.push(format!("{}{}*Z", prefix, fmt_vec(row)));
            }
        }
        write!(f, "{}", parts.join(" (+) "))
    }
}

fn fmt_rat(q: &Rat) -> String {
    if q.denom() == &BigInt::from(1) {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn fmt_vec(v: &[Rat]) -> String {
    let items: Vec<String> = v.iter().map(fmt_rat).collect();
    format!("({})", items.join(", "))
}

fn transpose(m: &[RatVec], cols: usize) -> Vec<RatVec> {
    (0..cols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

fn combine_rows(rows: &[RatVec], coeffs: &[Rat], dim: usize) -> RatVec {
    let mut out = vec![Rat::zero(); dim];
    for (c, row) in coeffs.iter().zip(rows) {
        for (o, x) in out.iter_mut().zip(row) {
            *o += c * x;
        }
    }
    out
}

/// Exact membership of `y` (already orthogonal to the subspace part) in the
/// ℤ-span of a canonical echelon lattice basis.
fn lattice_member(y: &[Rat], basis: &[RatVec]) -> bool {
    let mut y = y.to_vec();
    for row in basis {
        let p = row
            .iter()
            .position(|x| !x.is_zero())
            .expect("canonical basis has no zero rows");
        if y[p].is_zero() {
            continue;
        }
        let c = &y[p] / &row[p];
        if !c.denom().abs().eq(&BigInt::from(1)) {
            return false;
        }
        y = sub_vec(&y, &crate::rational::scale_vec(&c, row));
    }
    is_zero_vec(&y)
}

/// {ξ ∈ S : Λξ ∈ ℤ^m} split into (subspace directions, lattice generators),
/// both expressed in ambient coordinates and not yet canonicalized.
///
/// Parametrize ξ = Sᵀt and clear denominators of ΛSᵀ = N/q; diagonalizing
/// N = U⁻¹DV⁻¹ turns the condition into dᵢuᵢ ∈ qℤ on u = V⁻¹t, so the free
/// directions (dᵢ = 0) give the subspace and each dᵢ ≠ 0 gives a lattice
/// generator (q/dᵢ)·Sᵀvᵢ.
fn integral_preimage(
    lam: &[RatVec],
    s_basis: &[RatVec],
    dim: usize,
) -> (Vec<RatVec>, Vec<RatVec>) {
    if s_basis.is_empty() {
        return (Vec::new(), Vec::new());
    }
    if lam.is_empty() {
        return (s_basis.to_vec(), Vec::new());
    }
    let d = s_basis.len();
    let c_mat: Vec<RatVec> = lam
        .iter()
        .map(|l| s_basis.iter().map(|s| dot(l, s)).collect())
        .collect();
    let (q, n_int) = clear_denominators(&c_mat);
    let (diag, v) = diagonalize(&n_int);
    let q = Rat::from_integer(q);
    let mut sub = Vec::new();
    let mut lat = Vec::new();
    for j in 0..d {
        let col: RatVec = v[j].iter().map(|x| Rat::from_integer(x.clone())).collect();
        let in_ambient = combine_rows(s_basis, &col, dim);
        match diag.get(j) {
            Some(dj) if !dj.is_zero() => {
                let step = &q / Rat::from_integer(dj.clone());
                lat.push(crate::rational::scale_vec(&step, &in_ambient));
            }
            _ => sub.push(in_ambient),
        }
    }
    (sub, lat)
}

/// {ξ ∈ S : Aξ ∈ 2πℤ^m} for a rational constraint matrix A (rows) and a
/// rational subspace S (spanning rows; pass the standard basis for S = ℝⁿ).
/// The result carries the 2π scale on its lattice part.
pub fn lattice_preimage(a: &[RatVec], s_basis: &[RatVec], dim: usize) -> ClosedSubgroup {
    let (sub, lat) = integral_preimage(a, s_basis, dim);
    ClosedSubgroup::from_parts(dim, sub, lat, LatticeScale::TwoPi)
}

/// Standard basis rows of ℝⁿ, for use as the unconstrained `S`.
pub fn standard_basis(dim: usize) -> Vec<RatVec> {
    (0..dim)
        .map(|i| {
            let mut v = vec![Rat::zero(); dim];
            v[i] = Rat::from_integer(BigInt::from(1));
            v
        })
        .collect()
}

fn dot_f64(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gaussian elimination with partial pivoting; None for (near-)singular.
fn solve_f64(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = a.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();
    for i in 0..n {
        let p = (i..n).max_by(|&x, &y| m[x][i].abs().total_cmp(&m[y][i].abs()))?;
        if m[p][i].abs() < 1e-300 {
            return None;
        }
        m.swap(i, p);
        for r in 0..n {
            if r != i {
                let f = m[r][i] / m[i][i];
                for c in i..=n {
                    m[r][c] -= f * m[i][c];
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n] / m[i][i]).collect())
}
