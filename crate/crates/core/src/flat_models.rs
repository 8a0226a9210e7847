//! Flat models at algebra level: the affine algebra of the flat space, the
//! tower of iterated affine algebras, geometric completeness of associative
//! algebras, and simple right ideals.

use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::algebra::{basis_vector, BilinearProduct};
use crate::cohomology::{ce_cohomology_dims, CeCoefficients};
use crate::error::{Error, Result};
use crate::form::{BilinearForm, Symmetry};
use crate::linalg::{self, Matrix};
use crate::rational::{int, Rational};
use crate::sample;

/// Pairs `(A, a)` of an `m × m` matrix and an `m`-vector with
/// `(A, a)·(B, b) = (BA, Ba)`: the product `∇_X Y` of the affine vector
/// fields `X = Ax + a`, `Y = Bx + b` on flat `ℝ^m`.
///
/// Basis: the matrix unit `E_{ab}` at index `a*m + b`, then `v_c` at
/// `m² + c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineAlgebra {
    m: usize,
    product: BilinearProduct,
}

impl AffineAlgebra {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.m * self.m + self.m
    }

    pub fn product(&self) -> &BilinearProduct {
        &self.product
    }

    pub fn matrix_index(&self, a: usize, b: usize) -> usize {
        a * self.m + b
    }

    pub fn vector_index(&self, c: usize) -> usize {
        self.m * self.m + c
    }
}

pub fn affine_algebra(m: usize) -> AffineAlgebra {
    let mm = m * m;
    let mut entries = Vec::new();
    for a in 0..m {
        for b in 0..m {
            // E_ab · E_cd = (E_cd E_ab, 0) = δ_da E_cb
            for c in 0..m {
                entries.push((a * m + b, c * m + a, c * m + b, int(1)));
            }
            // v_c · E_ab = (0, E_ab v_c) = δ_bc v_a
            entries.push((mm + b, a * m + b, mm + a, int(1)));
        }
    }
    let product = BilinearProduct::from_sparse(mm + m, &entries).expect("indices in range");
    AffineAlgebra { m, product }
}

/// Dimensions `d_0 = m`, `d_{t+1} = d_t² + d_t` of the tower of affine
/// algebras of the complete flat model; level `t ≥ 1` is
/// `affine_algebra(d_{t−1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct TowerReport {
    pub dims: Vec<usize>,
    /// Level algebras with `d_t ≤ MATERIALIZE_LIMIT`; `None` above that.
    pub levels: Vec<Option<AffineAlgebra>>,
}

pub const MATERIALIZE_LIMIT: usize = 64;

pub fn tower_dims(m: usize, steps: usize) -> Result<TowerReport> {
    let mut dims = alloc::vec![m];
    let mut levels = alloc::vec![None];
    for _ in 0..steps {
        let d = *dims.last().expect("nonempty");
        let next = d
            .checked_mul(d)
            .and_then(|s| s.checked_add(d))
            .ok_or_else(|| Error::Invalid("tower dimension overflows".into()))?;
        levels.push((next <= MATERIALIZE_LIMIT).then(|| affine_algebra(d)));
        dims.push(next);
    }
    Ok(TowerReport { dims, levels })
}

/// Chevalley–Eilenberg Betti numbers `b_0..=b_max_p` (trivial coefficients)
/// of the commutator algebra of each materialized level of dimension at most
/// `max_dim`.
pub fn tower_betti(report: &TowerReport, max_p: usize, max_dim: usize) -> Result<Vec<Option<Vec<usize>>>> {
    report
        .levels
        .iter()
        .map(|level| match level {
            Some(a) if a.dim() <= max_dim => {
                let lie = crate::algebra::commutator_bracket(a.product())?;
                Ok(Some(ce_cohomology_dims(&lie, CeCoefficients::Trivial, max_p).cohomology))
            }
            _ => Ok(None),
        })
        .collect()
}

/// `ψ_{a*}(a) = a·a* + a` injective for every `a*`, i.e.
/// `det(I + R_{a*}) ≠ 0` everywhere.
#[derive(Debug, Clone, PartialEq)]
pub enum Completeness {
    Complete(CompletenessProof),
    /// `witness` is an `a*` with `det(I + R_{a*}) = 0`; `None` when a real
    /// zero is certified to exist but none with rational coordinates was
    /// found.
    Incomplete { witness: Option<Vec<Rational>> },
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompletenessProof {
    /// `A^k = 0`, so every `R_{a*}` is nilpotent.
    Nilpotent { index: usize },
    /// The determinant polynomial in dimension ≤ 2 has no real zero.
    LowDimensional,
}

/// `I + R_u`, the matrix of `a ↦ a·u + a`.
pub fn psi_matrix(p: &BilinearProduct, u: &[Rational]) -> Matrix {
    Matrix::identity(p.dim()).add(&p.right_by(u))
}

/// Smallest `k` with `A^k = 0`, if any.
fn nilpotency_index(p: &BilinearProduct) -> Option<usize> {
    let m = p.dim();
    let mut power: Vec<Vec<Rational>> = linalg::identity_basis(m);
    for k in 1..=m + 1 {
        if power.is_empty() {
            return Some(k);
        }
        let mut next = Vec::new();
        for x in &power {
            for j in 0..m {
                let y = p.product(x, &basis_vector(m, j));
                if !linalg::is_zero_vec(&y) {
                    next.push(y);
                }
            }
        }
        let next = linalg::span_basis(m, &next);
        if next.len() == power.len() {
            return None;
        }
        power = next;
    }
    None
}

/// Characteristic polynomial coefficients `c_0..=c_n` (monic, `c_n = 1`) of
/// `det(tI − R)` by Faddeev–LeVerrier.
fn char_poly(r: &Matrix) -> Vec<Rational> {
    let n = r.rows();
    let mut c = alloc::vec![Rational::zero(); n + 1];
    c[n] = Rational::one();
    let mut mk = Matrix::zeros(n, n);
    for k in 1..=n {
        mk = r.mul(&mk).add(&Matrix::identity(n).scale(&c[n - k + 1]));
        let t = r.mul(&mk).trace();
        c[n - k] = -t / int(k as i64);
    }
    c
}

fn eval_poly(c: &[Rational], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for coef in c.iter().rev() {
        acc = acc * x + coef;
    }
    acc
}

fn small_divisors(n: &num_bigint::BigInt) -> Option<Vec<i64>> {
    use num_traits::ToPrimitive;
    let v = n.abs().to_i64()?;
    if v == 0 || v > 100_000 {
        return None;
    }
    Some((1..=v).filter(|d| v % d == 0).collect())
}

/// Nonzero rational roots of the polynomial (rational root theorem after
/// clearing denominators). Gives up on large coefficients.
fn rational_roots(c: &[Rational]) -> Vec<Rational> {
    let mut coeffs: Vec<Rational> = c.to_vec();
    while coeffs.len() > 1 && coeffs[0].is_zero() {
        coeffs.remove(0);
    }
    while coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    if coeffs.len() < 2 {
        return Vec::new();
    }
    let mut lcm = num_bigint::BigInt::one();
    for q in &coeffs {
        lcm = num_integer::lcm(lcm, q.denom().clone());
    }
    let ints: Vec<num_bigint::BigInt> =
        coeffs.iter().map(|q| (q * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let (Some(ps), Some(qs)) = (small_divisors(&ints[0]), small_divisors(ints.last().expect("nonempty"))) else {
        return Vec::new();
    };
    let mut roots = Vec::new();
    for &p in &ps {
        for &q in &qs {
            for s in [1, -1] {
                let x = Rational::new((s * p).into(), q.into());
                if !roots.contains(&x) && eval_poly(&coeffs, &x).is_zero() {
                    roots.push(x);
                }
            }
        }
    }
    roots
}

/// Looks for `λ` with `det(I + λ R_d) = 0`: `−1/λ` must be a rational
/// eigenvalue of `R_d`.
fn rational_zero_along(p: &BilinearProduct, d: &[Rational]) -> Option<Vec<Rational>> {
    let r = p.right_by(d);
    for mu in rational_roots(&char_poly(&r)) {
        let lambda = -mu.recip();
        let u: Vec<Rational> = d.iter().map(|x| x * &lambda).collect();
        if psi_matrix(p, &u).determinant().is_zero() {
            return Some(u);
        }
    }
    None
}

/// `det(I + λ R_d)` changes sign on the real line, so a real zero exists.
fn sign_change_along(p: &BilinearProduct, d: &[Rational]) -> bool {
    let mut last: Option<bool> = None;
    for k in -40..=40 {
        let lambda = Rational::new(k.into(), 4.into());
        let u: Vec<Rational> = d.iter().map(|x| x * &lambda).collect();
        let det = psi_matrix(p, &u).determinant();
        if det.is_zero() {
            continue;
        }
        let pos = det.is_positive();
        if last.is_some_and(|l| l != pos) {
            return true;
        }
        last = Some(pos);
    }
    false
}

/// Exact decision for `dim ≤ 2`: along a direction `d`,
/// `det(I + λR_d) = 1 + λL(d) + λ²Q(d)` with `L = tr R_d`, `Q = det R_d`, so
/// a real zero exists iff the discriminant `D = L² − 4Q` is `≥ 0` at some `d`
/// where the polynomial is not constant.
fn low_dimensional_completeness(p: &BilinearProduct) -> Completeness {
    let m = p.dim();
    if m == 0 {
        return Completeness::Complete(CompletenessProof::LowDimensional);
    }
    if m == 1 {
        let g = p.gamma(0, 0, 0);
        if g.is_zero() {
            return Completeness::Complete(CompletenessProof::LowDimensional);
        }
        return Completeness::Incomplete { witness: Some(alloc::vec![-g.recip()]) };
    }
    let r0 = p.right(0);
    let r1 = p.right(1);
    let (l0, l1) = (r0.trace(), r1.trace());
    let (q00, q11) = (r0.determinant(), r1.determinant());
    let q01 = r0.add(&r1).determinant() - &q00 - &q11;
    // D(s, t) = (l0 s + l1 t)² − 4(q00 s² + q01 st + q11 t²) as a symmetric matrix.
    let four = int(4);
    let d00 = &l0 * &l0 - &four * &q00;
    let d11 = &l1 * &l1 - &four * &q11;
    let d01 = (int(2) * &l0 * &l1 - &four * &q01) / int(2);
    let dmat = Matrix::from_flat(2, 2, alloc::vec![d00, d01.clone(), d01, d11]);
    let form = BilinearForm::new(dmat.clone(), Symmetry::Symmetric).expect("symmetric");
    let sig = form.signature().expect("symmetric");
    let quad = |d: &[Rational]| -> (Rational, Rational) {
        let r = p.right_by(d);
        (r.trace(), r.determinant())
    };
    if sig.positive > 0 {
        // A real zero exists on an open cone of directions; look for a
        // rational one, else report the certified real zero without a witness.
        for d in small_directions(2) {
            if let Some(u) = rational_zero_along(p, &d) {
                return Completeness::Incomplete { witness: Some(u) };
            }
        }
        return Completeness::Incomplete { witness: None };
    }
    // D ≤ 0 everywhere: zeros can only sit on the kernel directions of D.
    let kernel = if sig.zero == 2 { linalg::identity_basis(2) } else { dmat.nullspace() };
    for d in kernel {
        let (l, q) = quad(&d);
        if !q.is_zero() {
            let lambda = -l / (int(2) * q);
            let u: Vec<Rational> = d.iter().map(|x| x * &lambda).collect();
            debug_assert!(psi_matrix(p, &u).determinant().is_zero());
            return Completeness::Incomplete { witness: Some(u) };
        }
    }
    if sig.zero == 2 {
        // D ≡ 0: Q vanished on both basis directions; try their sum.
        let d = alloc::vec![int(1), int(1)];
        let (l, q) = quad(&d);
        if !q.is_zero() {
            let lambda = -l / (int(2) * q);
            let u: Vec<Rational> = d.iter().map(|x| x * &lambda).collect();
            return Completeness::Incomplete { witness: Some(u) };
        }
    }
    Completeness::Complete(CompletenessProof::LowDimensional)
}

fn small_directions(m: usize) -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    for i in 0..m {
        out.push(basis_vector(m, i));
    }
    for i in 0..m {
        for j in i + 1..m {
            for s in [1, -1] {
                let mut v = basis_vector(m, i);
                v[j] = int(s);
                out.push(v);
            }
        }
    }
    out
}

pub const COMPLETENESS_SAMPLES: usize = 256;

pub fn geometric_completeness(p: &BilinearProduct, seed: u64) -> Result<Completeness> {
    if !p.is_associative() {
        return Err(Error::NotAssociative);
    }
    if let Some(index) = nilpotency_index(p) {
        return Ok(Completeness::Complete(CompletenessProof::Nilpotent { index }));
    }
    let m = p.dim();
    if m <= 2 {
        return Ok(low_dimensional_completeness(p));
    }
    let mut directions = small_directions(m);
    let mut rng = sample::rng(seed);
    for _ in 0..COMPLETENESS_SAMPLES {
        directions.push((0..m).map(|_| sample::small_int(&mut rng, 3)).collect());
    }
    let mut real_zero = false;
    for (idx, d) in directions.iter().enumerate() {
        if linalg::is_zero_vec(d) {
            continue;
        }
        if let Some(u) = rational_zero_along(p, d) {
            return Ok(Completeness::Incomplete { witness: Some(u) });
        }
        if !real_zero && idx < 16 {
            real_zero = sign_change_along(p, d);
        }
    }
    Ok(if real_zero { Completeness::Incomplete { witness: None } } else { Completeness::Unknown })
}

/// Whether a right ideal contains a nonzero two-sided ideal; an effective
/// pair `(I, A)` is a simple right ideal `I` of `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealReport {
    pub ideal_dim: usize,
    /// Basis of the largest two-sided ideal of `A` inside `I`.
    pub largest_two_sided: Vec<Vec<Rational>>,
    pub simple: bool,
}

pub fn simple_right_ideal_check(p: &BilinearProduct, ideal: &[Vec<Rational>]) -> Result<IdealReport> {
    let m = p.dim();
    for v in ideal {
        Error::check_dim(m, v.len())?;
    }
    if !p.is_associative() {
        return Err(Error::NotAssociative);
    }
    let basis = linalg::span_basis(m, ideal);
    for (element, x) in basis.iter().enumerate() {
        for generator in 0..m {
            if !linalg::contains(m, &basis, &p.product(x, &basis_vector(m, generator))) {
                return Err(Error::NotRightIdeal { element, generator });
            }
        }
    }
    let lefts: Vec<Matrix> = (0..m).map(|g| p.left(g)).collect();
    let rights: Vec<Matrix> = (0..m).map(|g| p.right(g)).collect();
    let mut j = basis.clone();
    loop {
        if j.is_empty() {
            break;
        }
        // x = Jᵀc stays in J under e_g· and ·e_g.
        let jt = Matrix::from_columns(m, &j);
        let ann = linalg::annihilator(m, &j);
        let mut rows = Vec::new();
        if !ann.is_empty() {
            let pm = Matrix::from_rows(m, &ann);
            for op in lefts.iter().chain(&rights) {
                let c = pm.mul(op).mul(&jt);
                for r in 0..c.rows() {
                    if !linalg::is_zero_vec(c.row(r)) {
                        rows.push(c.row(r).to_vec());
                    }
                }
            }
        }
        if rows.is_empty() {
            break;
        }
        let coeffs = Matrix::from_rows(j.len(), &rows).nullspace();
        let next: Vec<Vec<Rational>> = coeffs.iter().map(|c| jt.mul_vec(c)).collect();
        let next = linalg::span_basis(m, &next);
        if next.len() == j.len() {
            break;
        }
        j = next;
    }
    Ok(IdealReport { ideal_dim: basis.len(), simple: j.is_empty(), largest_two_sided: j })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::associator_defect;
    use crate::catalog;
    use crate::invariants::DEFAULT_SEED;

    #[test]
    fn affine_algebra_small_cases() {
        let a1 = affine_algebra(1);
        let p = a1.product();
        assert_eq!(p.product_basis(0, 0), alloc::vec![int(1), int(0)]);
        assert_eq!(p.product_basis(0, 1), alloc::vec![int(0), int(0)]);
        assert_eq!(p.product_basis(1, 0), alloc::vec![int(0), int(1)]);
        assert_eq!(p.product_basis(1, 1), alloc::vec![int(0), int(0)]);
        let a2 = affine_algebra(2);
        assert_eq!(a2.dim(), 6);
        assert!(associator_defect(a2.product()).is_zero());
        assert_eq!(affine_algebra(0).dim(), 0);
    }

    #[test]
    fn tower_examples() {
        assert_eq!(tower_dims(1, 3).unwrap().dims, alloc::vec![1, 2, 6, 42]);
        assert_eq!(tower_dims(2, 2).unwrap().dims, alloc::vec![2, 6, 42]);
        assert_eq!(tower_dims(5, 0).unwrap().dims, alloc::vec![5]);
        let t = tower_dims(1, 2).unwrap();
        assert!(t.levels[2].as_ref().unwrap().product().is_associative());
        assert!(tower_dims(3, 8).is_err());
    }

    #[test]
    fn completeness_examples() {
        let h = geometric_completeness(&catalog::heisenberg_kv(), DEFAULT_SEED).unwrap();
        assert!(matches!(h, Completeness::Complete(CompletenessProof::Nilpotent { .. })));
        let a = affine_algebra(1);
        let c = geometric_completeness(a.product(), DEFAULT_SEED).unwrap();
        assert_eq!(c, Completeness::Incomplete { witness: Some(alloc::vec![int(-1), int(0)]) });
        let z = geometric_completeness(&BilinearProduct::zero(3), DEFAULT_SEED).unwrap();
        assert!(matches!(z, Completeness::Complete(_)));
        let m2 = geometric_completeness(&catalog::matrix_algebra(2), DEFAULT_SEED).unwrap();
        let Completeness::Incomplete { witness: Some(u) } = m2 else { panic!("{m2:?}") };
        assert!(psi_matrix(&catalog::matrix_algebra(2), &u).determinant().is_zero());
        assert_eq!(geometric_completeness(&catalog::aff1_kv(), 1), Err(Error::NotAssociative));
    }

    #[test]
    fn right_ideal_examples() {
        let m2 = catalog::matrix_algebra(2);
        let row = alloc::vec![basis_vector(4, 0), basis_vector(4, 1)];
        let r = simple_right_ideal_check(&m2, &row).unwrap();
        assert!(r.simple);
        assert_eq!(r.ideal_dim, 2);
        let all = linalg::identity_basis(4);
        assert!(!simple_right_ideal_check(&m2, &all).unwrap().simple);
        assert!(simple_right_ideal_check(&m2, &[]).unwrap().simple);
        let col = alloc::vec![basis_vector(4, 0), basis_vector(4, 2)];
        assert!(matches!(simple_right_ideal_check(&m2, &col), Err(Error::NotRightIdeal { .. })));
    }
}
