//! Finite-dimensional algebras given by structure constants: Lie brackets and
//! general bilinear products, with the defect tensors that classify them
//! (Jacobi anomaly, associator, Koszul-Vinberg anomaly) and the Killing form.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::form::{BilinearForm, Symmetry};
use crate::linalg::Matrix;
use crate::rational::Rational;
use crate::tensor::DefectTensor;

/// Flat `(i, j, k)` table: component along `e_k` of `e_i * e_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Table {
    dim: usize,
    data: Vec<Rational>,
}

impl Table {
    fn zeros(dim: usize) -> Self {
        Table { dim, data: vec![Rational::zero(); dim * dim * dim] }
    }

    #[inline]
    fn at(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.data[(i * self.dim + j) * self.dim + k]
    }

    #[inline]
    fn at_mut(&mut self, i: usize, j: usize, k: usize) -> &mut Rational {
        let d = self.dim;
        &mut self.data[(i * d + j) * d + k]
    }

    /// Nonzero output coefficients of each basis product, indexed by `i*m + j`.
    fn sparse(&self) -> Vec<Vec<(usize, Rational)>> {
        let m = self.dim;
        (0..m * m)
            .map(|ij| {
                (0..m)
                    .filter_map(|k| {
                        let v = &self.data[ij * m + k];
                        (!v.is_zero()).then(|| (k, v.clone()))
                    })
                    .collect()
            })
            .collect()
    }

    fn apply(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let m = self.dim;
        let mut out = vec![Rational::zero(); m];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let w = xi * yj;
                for (k, o) in out.iter_mut().enumerate() {
                    let g = self.at(i, j, k);
                    if !g.is_zero() {
                        *o += &w * g;
                    }
                }
            }
        }
        out
    }

    /// Structure constants in the basis `f_a = Σ_i p[(i, a)] e_i`.
    fn change_basis(&self, p: &Matrix) -> Result<Table> {
        let m = self.dim;
        Error::check_dim(m, p.rows())?;
        let p_inv = p.inverse().ok_or(Error::Invalid("change of basis is singular".into()))?;
        let images: Vec<Vec<Rational>> = (0..m).map(|a| p.column(a)).collect();
        let mut out = Table::zeros(m);
        for a in 0..m {
            for b in 0..m {
                let prod = self.apply(&images[a], &images[b]);
                let coords = p_inv.mul_vec(&prod);
                for (c, v) in coords.into_iter().enumerate() {
                    *out.at_mut(a, b, c) = v;
                }
            }
        }
        Ok(out)
    }
}

fn unit(m: usize, i: usize) -> Vec<Rational> {
    let mut e = vec![Rational::zero(); m];
    e[i] = Rational::from_integer(1.into());
    e
}

/// A Lie algebra over the rationals: dimension plus skew structure constants
/// satisfying the Jacobi identity (both checked at construction).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    table: Table,
}

impl LieAlgebra {
    /// Validates skewness and Jacobi on the full `(i, j, k)` table.
    pub fn new(dim: usize, c: Vec<Rational>) -> Result<Self> {
        Error::check_dim(dim * dim * dim, c.len())?;
        let table = Table { dim, data: c };
        for i in 0..dim {
            for j in i..dim {
                for k in 0..dim {
                    if *table.at(i, j, k) != -table.at(j, i, k).clone() {
                        return Err(Error::NotSkew { i, j, k });
                    }
                }
            }
        }
        let alg = LieAlgebra { table };
        alg.check_jacobi()?;
        Ok(alg)
    }

    /// Builds from sparse `(i, j, k, value)` entries, completing skewness.
    /// Supplying both `(i, j, k, v)` and `(j, i, k, w)` is allowed only when
    /// `w = -v`; `(i, i, k, v)` must have `v = 0`.
    pub fn from_sparse(dim: usize, entries: &[(usize, usize, usize, Rational)]) -> Result<Self> {
        let mut table = Table::zeros(dim);
        let mut set = vec![false; dim * dim * dim];
        for (i, j, k, v) in entries {
            let (i, j, k) = (*i, *j, *k);
            for idx in [i, j, k] {
                if idx >= dim {
                    return Err(Error::IndexOutOfRange { index: idx, dim });
                }
            }
            let pos = (i * dim + j) * dim + k;
            let mirror = (j * dim + i) * dim + k;
            if (set[pos] && table.data[pos] != *v) || (set[mirror] && table.data[mirror] != -v.clone()) {
                return Err(Error::NotSkew { i, j, k });
            }
            if i == j && !v.is_zero() {
                return Err(Error::NotSkew { i, j, k });
            }
            table.data[pos] = v.clone();
            table.data[mirror] = -v.clone();
            set[pos] = true;
            set[mirror] = true;
        }
        let alg = LieAlgebra { table };
        alg.check_jacobi()?;
        Ok(alg)
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra { table: Table::zeros(dim) }
    }

    fn check_jacobi(&self) -> Result<()> {
        match jacobi_defect_table(&self.table).first_nonzero() {
            None => Ok(()),
            Some((idx, _)) => Err(Error::JacobiViolation { i: idx[0], j: idx[1], k: idx[2] }),
        }
    }

    pub fn dim(&self) -> usize {
        self.table.dim
    }

    /// `c^k_{ij}`: component along `e_k` of `[e_i, e_j]`.
    pub fn c(&self, i: usize, j: usize, k: usize) -> &Rational {
        self.table.at(i, j, k)
    }

    pub fn structure_constants(&self) -> &[Rational] {
        &self.table.data
    }

    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        self.table.apply(x, y)
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Rational> {
        (0..self.dim()).map(|k| self.c(i, j, k).clone()).collect()
    }

    /// Matrix of `ad_{e_i}`; column `j` is `[e_i, e_j]`.
    pub fn ad(&self, i: usize) -> Matrix {
        let m = self.dim();
        Matrix::from_fn(m, m, |k, j| self.c(i, j, k).clone())
    }

    pub fn is_abelian(&self) -> bool {
        self.table.data.iter().all(Zero::is_zero)
    }

    /// Sparse `(i, j, k, value)` entries with `i < j`, skipping zeros.
    pub fn sparse_entries(&self) -> Vec<(usize, usize, usize, Rational)> {
        let m = self.dim();
        let mut out = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                for k in 0..m {
                    let v = self.c(i, j, k);
                    if !v.is_zero() {
                        out.push((i, j, k, v.clone()));
                    }
                }
            }
        }
        out
    }

    /// The same algebra written in the basis `f_a = Σ_i p[(i, a)] e_i`.
    pub fn change_basis(&self, p: &Matrix) -> Result<Self> {
        Ok(LieAlgebra { table: self.table.change_basis(p)? })
    }

    /// Direct sum with another Lie algebra (blocks in order).
    pub fn direct_sum(&self, other: &LieAlgebra) -> LieAlgebra {
        let (a, b) = (self.dim(), other.dim());
        let m = a + b;
        let mut t = Table::zeros(m);
        for i in 0..a {
            for j in 0..a {
                for k in 0..a {
                    *t.at_mut(i, j, k) = self.c(i, j, k).clone();
                }
            }
        }
        for i in 0..b {
            for j in 0..b {
                for k in 0..b {
                    *t.at_mut(a + i, a + j, a + k) = other.c(i, j, k).clone();
                }
            }
        }
        LieAlgebra { table: t }
    }

    /// The bracket viewed as a bilinear product (`Γ = c`).
    pub fn as_product(&self) -> BilinearProduct {
        BilinearProduct { table: self.table.clone() }
    }
}

/// A general bilinear product `e_i · e_j = Σ_k Γ^k_{ij} e_k`; also the
/// coefficient table of a left-invariant connection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearProduct {
    table: Table,
}

impl BilinearProduct {
    pub fn new(dim: usize, gamma: Vec<Rational>) -> Result<Self> {
        Error::check_dim(dim * dim * dim, gamma.len())?;
        Ok(BilinearProduct { table: Table { dim, data: gamma } })
    }

    pub fn zero(dim: usize) -> Self {
        BilinearProduct { table: Table::zeros(dim) }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize) -> Rational) -> Self {
        let mut t = Table::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    *t.at_mut(i, j, k) = f(i, j, k);
                }
            }
        }
        BilinearProduct { table: t }
    }

    /// Sparse `(i, j, k, value)` entries; a repeated index with a different
    /// value is an error.
    pub fn from_sparse(dim: usize, entries: &[(usize, usize, usize, Rational)]) -> Result<Self> {
        let mut t = Table::zeros(dim);
        let mut set = vec![false; dim * dim * dim];
        for (i, j, k, v) in entries {
            for idx in [*i, *j, *k] {
                if idx >= dim {
                    return Err(Error::IndexOutOfRange { index: idx, dim });
                }
            }
            let pos = (i * dim + j) * dim + k;
            if set[pos] && t.data[pos] != *v {
                return Err(Error::Invalid(alloc::format!("conflicting entries for ({i}, {j}, {k})")));
            }
            set[pos] = true;
            t.data[pos] = v.clone();
        }
        Ok(BilinearProduct { table: t })
    }

    pub fn dim(&self) -> usize {
        self.table.dim
    }

    /// `Γ^k_{ij}`.
    pub fn gamma(&self, i: usize, j: usize, k: usize) -> &Rational {
        self.table.at(i, j, k)
    }

    pub fn gamma_mut(&mut self, i: usize, j: usize, k: usize) -> &mut Rational {
        self.table.at_mut(i, j, k)
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.table.data
    }

    pub fn product(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        self.table.apply(x, y)
    }

    pub fn product_basis(&self, i: usize, j: usize) -> Vec<Rational> {
        (0..self.dim()).map(|k| self.gamma(i, j, k).clone()).collect()
    }

    /// Left multiplication by `e_i` (the matrix `Γ_i` with `(Γ_i)^k_j = Γ^k_{ij}`).
    pub fn left(&self, i: usize) -> Matrix {
        let m = self.dim();
        Matrix::from_fn(m, m, |k, j| self.gamma(i, j, k).clone())
    }

    /// Right multiplication by `e_j`: `x ↦ x · e_j`.
    pub fn right(&self, j: usize) -> Matrix {
        let m = self.dim();
        Matrix::from_fn(m, m, |k, i| self.gamma(i, j, k).clone())
    }

    /// Right multiplication by an arbitrary element.
    pub fn right_by(&self, a: &[Rational]) -> Matrix {
        let m = self.dim();
        let mut out = Matrix::zeros(m, m);
        for (j, aj) in a.iter().enumerate() {
            if !aj.is_zero() {
                out = out.add(&self.right(j).scale(aj));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.table.data.iter().all(Zero::is_zero)
    }

    pub fn sparse_entries(&self) -> Vec<(usize, usize, usize, Rational)> {
        let m = self.dim();
        let mut out = Vec::new();
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let v = self.gamma(i, j, k);
                    if !v.is_zero() {
                        out.push((i, j, k, v.clone()));
                    }
                }
            }
        }
        out
    }

    pub fn change_basis(&self, p: &Matrix) -> Result<Self> {
        Ok(BilinearProduct { table: self.table.change_basis(p)? })
    }

    pub fn scale(&self, s: &Rational) -> Self {
        BilinearProduct { table: Table { dim: self.dim(), data: self.table.data.iter().map(|x| x * s).collect() } }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Error::check_dim(self.dim(), other.dim())?;
        let data = self.table.data.iter().zip(&other.table.data).map(|(a, b)| a + b).collect();
        Ok(BilinearProduct { table: Table { dim: self.dim(), data } })
    }

    /// Streams `(x·y)·z − x·(y·z)` over basis triples, stopping early when
    /// `visit` returns `false`. Never materializes the rank-4 tensor.
    fn for_each_associator(&self, mut visit: impl FnMut(usize, usize, usize, &[Rational]) -> bool) {
        let m = self.dim();
        let sp = self.table.sparse();
        let mut acc = vec![Rational::zero(); m];
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    for a in acc.iter_mut() {
                        a.set_zero();
                    }
                    for (l, g) in &sp[i * m + j] {
                        for (p, h) in &sp[l * m + k] {
                            acc[*p] += g * h;
                        }
                    }
                    for (l, g) in &sp[j * m + k] {
                        for (p, h) in &sp[i * m + l] {
                            acc[*p] -= g * h;
                        }
                    }
                    if !visit(i, j, k, &acc) {
                        return;
                    }
                }
            }
        }
    }

    pub fn is_associative(&self) -> bool {
        let mut ok = true;
        self.for_each_associator(|_, _, _, v| {
            ok = v.iter().all(Zero::is_zero);
            ok
        });
        ok
    }

    pub fn is_kv(&self) -> bool {
        kv_anomaly(self).is_zero()
    }
}

fn jacobi_defect_table(t: &Table) -> DefectTensor {
    let m = t.dim;
    let mut out = DefectTensor::zeros(&[m, m, m, m]);
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                    for p in 0..m {
                        let ab = t.at(a, b, p);
                        if ab.is_zero() {
                            continue;
                        }
                        for l in 0..m {
                            let pc = t.at(p, c, l);
                            if !pc.is_zero() {
                                *out.get_mut(&[i, j, k, l]) += ab * pc;
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// `Σ_cyclic [[e_i, e_j], e_k]` along `e_l`, indexed `(i, j, k, l)`, for any
/// skew table (which need not satisfy Jacobi).
pub fn jacobi_defect(dim: usize, c: &[Rational]) -> Result<DefectTensor> {
    Error::check_dim(dim * dim * dim, c.len())?;
    Ok(jacobi_defect_table(&Table { dim, data: c.to_vec() }))
}

/// `b^k_{ij} = Γ^k_{ij} − Γ^k_{ji}`, checked for Jacobi.
pub fn commutator_bracket(p: &BilinearProduct) -> Result<LieAlgebra> {
    let m = p.dim();
    let mut t = Table::zeros(m);
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                *t.at_mut(i, j, k) = p.gamma(i, j, k) - p.gamma(j, i, k);
            }
        }
    }
    let alg = LieAlgebra { table: t };
    alg.check_jacobi()?;
    Ok(alg)
}

/// `((e_i e_j) e_k − e_i (e_j e_k))` along `e_l`, indexed `(i, j, k, l)`.
pub fn associator_defect(p: &BilinearProduct) -> DefectTensor {
    let m = p.dim();
    let mut out = DefectTensor::zeros(&[m, m, m, m]);
    p.for_each_associator(|i, j, k, v| {
        for (l, x) in v.iter().enumerate() {
            if !x.is_zero() {
                *out.get_mut(&[i, j, k, l]) = x.clone();
            }
        }
        true
    });
    out
}

/// `KV(x, y, z) = (x, y, z) − (y, x, z)` for the associator `(x, y, z)`;
/// zero iff the product is left-symmetric.
pub fn kv_anomaly(p: &BilinearProduct) -> DefectTensor {
    let assoc = associator_defect(p);
    let m = p.dim();
    let mut out = DefectTensor::zeros(&[m, m, m, m]);
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for l in 0..m {
                    *out.get_mut(&[i, j, k, l]) = assoc.get(&[i, j, k, l]) - assoc.get(&[j, i, k, l]);
                }
            }
        }
    }
    out
}

/// `K(x, y) = tr(ad_x ∘ ad_y)`.
pub fn killing_form(l: &LieAlgebra) -> BilinearForm {
    let m = l.dim();
    let ads: Vec<Matrix> = (0..m).map(|i| l.ad(i)).collect();
    let entries = Matrix::from_fn(m, m, |i, j| ads[i].mul(&ads[j]).trace());
    BilinearForm::new(entries, Symmetry::Symmetric).expect("Killing form is symmetric")
}

pub(crate) fn basis_vector(m: usize, i: usize) -> Vec<Rational> {
    unit(m, i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rational::{half, int, rat};

    #[test]
    fn zero_product_commutator_is_abelian() {
        let l = commutator_bracket(&BilinearProduct::zero(3)).unwrap();
        assert!(l.is_abelian());
        assert_eq!(l.dim(), 3);
    }

    #[test]
    fn heisenberg_product_commutator() {
        let l = commutator_bracket(&catalog::heisenberg_kv()).unwrap();
        assert_eq!(l, catalog::heisenberg());
        assert_eq!(l.bracket_basis(0, 1), vec![int(0), int(0), int(1)]);
    }

    #[test]
    fn matrix_algebra_commutator_is_gl2() {
        let l = commutator_bracket(&catalog::matrix_algebra(2)).unwrap();
        // [e11, e12] = e12, [e12, e21] = e11 - e22
        assert_eq!(l.bracket_basis(0, 1), vec![int(0), int(1), int(0), int(0)]);
        assert_eq!(l.bracket_basis(1, 2), vec![int(1), int(0), int(0), int(-1)]);
        assert_eq!(l.bracket_basis(0, 3), vec![int(0); 4]);
    }

    #[test]
    fn jacobi_defect_examples() {
        assert!(jacobi_defect(3, catalog::so3().structure_constants()).unwrap().is_zero());
        assert!(jacobi_defect(2, LieAlgebra::abelian(2).structure_constants()).unwrap().is_zero());
        // [x,y]=x, [y,z]=x, [x,z]=y: cyclic sum on (x,y,z) is
        // [[x,y],z] + [[y,z],x] + [[z,x],y] = [x,z] + [x,x] - [y,y] = y.
        let bad = [(0, 1, 0, int(1)), (1, 2, 0, int(1)), (0, 2, 1, int(1))];
        let mut c = vec![Rational::zero(); 27];
        for (i, j, k, v) in bad.iter().cloned() {
            c[(i * 3 + j) * 3 + k] = v.clone();
            c[(j * 3 + i) * 3 + k] = -v;
        }
        let d = jacobi_defect(3, &c).unwrap();
        assert_eq!(*d.get(&[0, 1, 2, 1]), int(1));
        assert!(matches!(LieAlgebra::new(3, c), Err(Error::JacobiViolation { .. })));
    }

    #[test]
    fn from_sparse_checks_skew_consistency() {
        let ok = LieAlgebra::from_sparse(2, &[(0, 1, 1, int(1)), (1, 0, 1, int(-1))]).unwrap();
        assert_eq!(ok, catalog::aff1());
        assert!(LieAlgebra::from_sparse(2, &[(0, 1, 1, int(1)), (1, 0, 1, int(2))]).is_err());
        assert!(LieAlgebra::from_sparse(2, &[(0, 0, 1, int(1))]).is_err());
        assert!(LieAlgebra::from_sparse(2, &[(0, 2, 1, int(1))]).is_err());
    }

    #[test]
    fn associator_examples() {
        assert!(associator_defect(&catalog::affine_algebra(1)).is_zero());
        assert!(associator_defect(&BilinearProduct::zero(3)).is_zero());
        let nabla0 = catalog::so3().as_product().scale(&half());
        let a = associator_defect(&nabla0);
        assert!(!a.is_zero());
        // (e0 e0) e1 - e0 (e0 e1) = -¼[e0,[e0,e1]] = -¼[e0,e2] = ¼ e1
        assert_eq!(*a.get(&[0, 0, 1, 1]), rat(1, 4));
    }

    #[test]
    fn kv_anomaly_examples() {
        assert!(kv_anomaly(&catalog::heisenberg_kv()).is_zero());
        assert!(kv_anomaly(&BilinearProduct::zero(2)).is_zero());
        let so3 = catalog::so3();
        let nabla0 = so3.as_product().scale(&half());
        let kv = kv_anomaly(&nabla0);
        // ¼[[x,y],z] for every basis triple
        for i in 0..3 {
            for j in 0..3 {
                let xy = so3.bracket_basis(i, j);
                for k in 0..3 {
                    let expect = so3.bracket(&xy, &basis_vector(3, k));
                    for l in 0..3 {
                        assert_eq!(*kv.get(&[i, j, k, l]), rat(1, 4) * &expect[l]);
                    }
                }
            }
        }
    }

    #[test]
    fn killing_forms() {
        assert_eq!(killing_form(&catalog::so3()).matrix(), &Matrix::identity(3).scale(&int(-2)));
        assert!(killing_form(&LieAlgebra::abelian(3)).matrix().is_zero());
        let k = killing_form(&catalog::sl2());
        let expect = Matrix::from_flat(3, 3, [8, 0, 0, 0, 0, 4, 0, 4, 0].iter().map(|&x| int(x)).collect());
        assert_eq!(k.matrix(), &expect);
    }

    #[test]
    fn dimension_zero_is_legal() {
        let l = LieAlgebra::new(0, vec![]).unwrap();
        assert_eq!(l.dim(), 0);
        assert!(killing_form(&l).matrix().is_zero());
        assert!(kv_anomaly(&BilinearProduct::zero(0)).is_zero());
    }

    #[test]
    fn change_of_basis_round_trip() {
        let p = Matrix::from_flat(3, 3, [1, 1, 0, 0, 1, 0, 2, 0, 1].iter().map(|&x| int(x)).collect());
        let l = catalog::sl2().change_basis(&p).unwrap();
        let back = l.change_basis(&p.inverse().unwrap()).unwrap();
        assert_eq!(back, catalog::sl2());
    }
}
