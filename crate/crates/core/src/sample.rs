//! Seeded random instances: rationals, changes of basis, Lie algebras,
//! torsion-free and flat connections, metrics and KV algebras.
//!
//! Used by the property tests and the acceptance harness; every generator is
//! deterministic given its `rng`.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{BilinearProduct, LieAlgebra};
use crate::catalog;
use crate::connection::InvariantConnection;
use crate::form::{BilinearForm, Symmetry};
use crate::linalg::Matrix;
use crate::rational::{half, int, rat, Rational};

pub type SampleRng = rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn small_int<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    int(rng.gen_range(-bound..=bound))
}

/// Numerator uniform in `[-bound·d, bound·d]`, denominator `d` in `1..=max_den`.
pub fn rational_in<R: Rng>(rng: &mut R, bound: i64, max_den: i64) -> Rational {
    let d = rng.gen_range(1..=max_den);
    rat(rng.gen_range(-bound * d..=bound * d), d)
}

pub fn invertible_matrix<R: Rng>(rng: &mut R, m: usize, bound: i64) -> Matrix {
    loop {
        let p = Matrix::from_fn(m, m, |_, _| small_int(rng, bound));
        if p.rank() == m {
            return p;
        }
    }
}

fn semidirect<R: Rng>(rng: &mut R, m: usize) -> LieAlgebra {
    // [e0, e_i] = D e_i on the ideal span{e1..}: a Lie algebra for every D.
    let mut entries = Vec::new();
    for i in 1..m {
        for j in 1..m {
            let v = small_int(rng, 2);
            if v != int(0) {
                entries.push((0, i, j, v));
            }
        }
    }
    LieAlgebra::from_sparse(m, &entries).expect("semidirect product is Lie")
}

fn filiform4() -> LieAlgebra {
    LieAlgebra::from_sparse(4, &[(0, 1, 2, int(1)), (0, 2, 3, int(1))]).expect("filiform")
}

/// A random Lie algebra of exactly dimension `m`, drawn from a pool of
/// structured templates and conjugated by a random change of basis.
pub fn lie_algebra_of_dim<R: Rng>(rng: &mut R, m: usize) -> LieAlgebra {
    let mut pool: Vec<LieAlgebra> = alloc::vec![catalog::abelian(m)];
    if m >= 2 {
        pool.push(semidirect(rng, m));
        pool.push(semidirect(rng, m));
        pool.push(catalog::aff1().direct_sum(&catalog::abelian(m - 2)));
    }
    if m >= 3 {
        pool.push(catalog::heisenberg().direct_sum(&catalog::abelian(m - 3)));
        pool.push(catalog::so3().direct_sum(&catalog::abelian(m - 3)));
        pool.push(catalog::sl2().direct_sum(&catalog::abelian(m - 3)));
    }
    if m == 4 {
        pool.push(filiform4());
        pool.push(catalog::aff1().direct_sum(&catalog::aff1()));
    }
    let base = pool.choose(rng).expect("nonempty pool").clone();
    let p = invertible_matrix(rng, m, 1);
    base.change_basis(&p).expect("invertible change of basis")
}

pub fn lie_algebra<R: Rng>(rng: &mut R, min_dim: usize, max_dim: usize) -> LieAlgebra {
    let m = rng.gen_range(min_dim..=max_dim);
    lie_algebra_of_dim(rng, m)
}

/// `Γ = ½c + S` with `S` symmetric in the lower indices, entries in `[-2, 2]`.
pub fn torsion_free_connection<R: Rng>(rng: &mut R, l: &LieAlgebra) -> InvariantConnection {
    let m = l.dim();
    let mut gamma = l.as_product().scale(&half());
    for i in 0..m {
        for j in i..m {
            for k in 0..m {
                if rng.gen_bool(0.5) {
                    continue;
                }
                let s = small_int(rng, 2);
                *gamma.gamma_mut(i, j, k) += &s;
                if i != j {
                    *gamma.gamma_mut(j, i, k) += &s;
                }
            }
        }
    }
    InvariantConnection::new(l.clone(), gamma).expect("shapes agree")
}

fn product_direct_sum(a: &BilinearProduct, b: &BilinearProduct) -> BilinearProduct {
    let (da, db) = (a.dim(), b.dim());
    BilinearProduct::from_fn(da + db, |i, j, k| {
        if i < da && j < da && k < da {
            a.gamma(i, j, k).clone()
        } else if i >= da && j >= da && k >= da {
            b.gamma(i - da, j - da, k - da).clone()
        } else {
            int(0)
        }
    })
}

/// Upper-triangular 2×2 matrices, basis `(e11, e12, e22)`.
fn upper_triangular2() -> BilinearProduct {
    BilinearProduct::from_sparse(
        3,
        &[(0, 0, 0, int(1)), (0, 1, 1, int(1)), (1, 2, 1, int(1)), (2, 2, 2, int(1))],
    )
    .expect("well formed")
}

/// Random associative algebra of dimension in `1..=max_dim`.
pub fn associative_algebra<R: Rng>(rng: &mut R, max_dim: usize) -> BilinearProduct {
    let mut pool: Vec<BilinearProduct> = Vec::new();
    for m in 1..=max_dim {
        pool.push(BilinearProduct::zero(m));
    }
    pool.push(catalog::unital_line());
    if max_dim >= 2 {
        pool.push(catalog::affine_algebra(1));
        pool.push(product_direct_sum(&catalog::unital_line(), &catalog::unital_line()));
    }
    if max_dim >= 3 {
        pool.push(catalog::heisenberg_kv());
        pool.push(upper_triangular2());
        pool.push(product_direct_sum(&catalog::affine_algebra(1), &catalog::unital_line()));
    }
    if max_dim >= 4 {
        pool.push(catalog::matrix_algebra(2));
    }
    let base = pool.choose(rng).expect("nonempty").clone();
    let p = invertible_matrix(rng, base.dim(), 1);
    base.change_basis(&p).expect("invertible")
}

/// Random left-symmetric (KV) algebra of dimension in `1..=max_dim`:
/// associative algebras plus genuinely non-associative KV products.
pub fn kv_algebra<R: Rng>(rng: &mut R, max_dim: usize) -> BilinearProduct {
    if max_dim >= 2 && rng.gen_bool(0.35) {
        let mut pool = alloc::vec![catalog::aff1_kv()];
        if max_dim >= 3 {
            pool.push(product_direct_sum(&catalog::aff1_kv(), &catalog::unital_line()));
            pool.push(product_direct_sum(&catalog::aff1_kv(), &BilinearProduct::zero(1)));
        }
        let base = pool.choose(rng).expect("nonempty").clone();
        let p = invertible_matrix(rng, base.dim(), 1);
        return base.change_basis(&p).expect("invertible");
    }
    associative_algebra(rng, max_dim)
}

/// A flat torsion-free connection: a random KV algebra on its commutator.
pub fn flat_connection<R: Rng>(rng: &mut R, max_dim: usize) -> InvariantConnection {
    InvariantConnection::from_product(kv_algebra(rng, max_dim)).expect("KV commutator is Lie")
}

/// Nondegenerate symmetric form with small integer entries (any signature).
pub fn metric<R: Rng>(rng: &mut R, m: usize) -> BilinearForm {
    loop {
        let a = Matrix::from_fn(m, m, |_, _| small_int(rng, 2));
        let s = a.add(&a.transpose());
        if s.rank() == m {
            return BilinearForm::new(s, Symmetry::Symmetric).expect("symmetric");
        }
    }
}

/// Positive definite: `AᵀA + I`.
pub fn positive_metric<R: Rng>(rng: &mut R, m: usize) -> BilinearForm {
    let a = Matrix::from_fn(m, m, |_, _| small_int(rng, 2));
    let s = a.transpose().mul(&a).add(&Matrix::identity(m));
    BilinearForm::new(s, Symmetry::Symmetric).expect("symmetric")
}

pub fn matrix<R: Rng>(rng: &mut R, m: usize, bound: i64) -> Matrix {
    Matrix::from_fn(m, m, |_, _| small_int(rng, bound))
}

/// Random skew table (need not satisfy Jacobi).
pub fn skew_table<R: Rng>(rng: &mut R, m: usize) -> Vec<Rational> {
    let mut c = alloc::vec![int(0); m * m * m];
    for i in 0..m {
        for j in i + 1..m {
            for k in 0..m {
                let v = small_int(rng, 2);
                c[(i * m + j) * m + k] = v.clone();
                c[(j * m + i) * m + k] = -v;
            }
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::kv_anomaly;
    use crate::connection::torsion;

    #[test]
    fn generators_respect_their_contracts() {
        let mut r = rng(7);
        for _ in 0..30 {
            let l = lie_algebra(&mut r, 1, 4);
            let nabla = torsion_free_connection(&mut r, &l);
            assert!(torsion(&nabla).is_zero());
            assert!(kv_anomaly(&kv_algebra(&mut r, 3)).is_zero());
            assert!(associative_algebra(&mut r, 4).is_associative());
            assert!(metric(&mut r, 3).is_nondegenerate());
            assert!(positive_metric(&mut r, 3).is_positive_definite());
        }
    }
}
