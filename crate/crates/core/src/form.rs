//! Bilinear forms on the algebra: metrics, cocycles, symplectic candidates.

use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symmetry {
    Symmetric,
    Skew,
    General,
}

impl Symmetry {
    pub fn name(self) -> &'static str {
        match self {
            Symmetry::Symmetric => "symmetric",
            Symmetry::Skew => "skew",
            Symmetry::General => "general",
        }
    }
}

/// `g(e_i, e_j) = matrix[(i, j)]`, with the declared symmetry enforced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearForm {
    matrix: Matrix,
    symmetry: Symmetry,
}

/// Sylvester inertia `(positive, negative, zero)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl BilinearForm {
    pub fn new(matrix: Matrix, symmetry: Symmetry) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.rows(), found: matrix.cols() });
        }
        let n = matrix.rows();
        for i in 0..n {
            for j in i..n {
                let ok = match symmetry {
                    Symmetry::Symmetric => matrix[(i, j)] == matrix[(j, i)],
                    Symmetry::Skew => matrix[(i, j)] == -matrix[(j, i)].clone(),
                    Symmetry::General => true,
                };
                if !ok {
                    return Err(Error::SymmetryViolation { i, j });
                }
            }
        }
        Ok(BilinearForm { matrix, symmetry })
    }

    pub fn identity(dim: usize) -> Self {
        BilinearForm { matrix: Matrix::identity(dim), symmetry: Symmetry::Symmetric }
    }

    /// Declared class from the entries: symmetric, else skew, else general.
    pub fn classify(matrix: Matrix) -> Result<Self> {
        for sym in [Symmetry::Symmetric, Symmetry::Skew] {
            if let Ok(f) = BilinearForm::new(matrix.clone(), sym) {
                return Ok(f);
            }
        }
        BilinearForm::new(matrix, Symmetry::General)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.matrix[(i, j)]
    }

    pub fn eval(&self, x: &[Rational], y: &[Rational]) -> Rational {
        crate::linalg::dot(x, &self.matrix.mul_vec(y))
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.rank() == self.dim()
    }

    pub fn require_nondegenerate(&self) -> Result<()> {
        let rank = self.rank();
        if rank < self.dim() {
            Err(Error::SingularMetric { rank, dim: self.dim() })
        } else {
            Ok(())
        }
    }

    /// Leading principal minors all positive. Only meaningful for symmetric
    /// forms; `false` for anything else.
    pub fn is_positive_definite(&self) -> bool {
        if self.symmetry != Symmetry::Symmetric {
            return false;
        }
        let n = self.dim();
        (1..=n).all(|k| {
            let minor = Matrix::from_fn(k, k, |r, c| self.matrix[(r, c)].clone());
            minor.determinant().is_positive()
        })
    }

    /// Inertia by exact congruence diagonalisation (symmetric forms only).
    pub fn signature(&self) -> Option<Signature> {
        if self.symmetry != Symmetry::Symmetric {
            return None;
        }
        let diag = congruence_diagonal(&self.matrix);
        let positive = diag.iter().filter(|d| d.is_positive()).count();
        let negative = diag.iter().filter(|d| d.is_negative()).count();
        Some(Signature { positive, negative, zero: self.dim() - positive - negative })
    }

    pub fn scale(&self, s: &Rational) -> Self {
        BilinearForm { matrix: self.matrix.scale(s), symmetry: self.symmetry }
    }

    /// `true` when `other = λ · self` for some nonzero rational `λ`.
    pub fn is_proportional_to(&self, other: &BilinearForm) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let a = self.matrix.as_flat();
        let b = other.matrix.as_flat();
        let Some(p) = a.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        if b[p].is_zero() {
            return false;
        }
        let ratio = &b[p] / &a[p];
        a.iter().zip(b).all(|(x, y)| &(x * &ratio) == y)
    }
}

/// Diagonal of a symmetric matrix after symmetric Gaussian reduction
/// (`P^T S P = D`). A zero pivot with a nonzero off-diagonal entry `s_ij` is
/// repaired by adding row/column `j` to `i`, which makes the pivot `2 s_ij`.
fn congruence_diagonal(s: &Matrix) -> Vec<Rational> {
    let mut a = s.clone();
    let n = a.rows();
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        if a[(k, k)].is_zero() {
            if let Some(p) = (k + 1..n).find(|&p| !a[(p, p)].is_zero()) {
                swap_sym(&mut a, k, p);
            } else if let Some(p) = (k + 1..n).find(|&p| !a[(k, p)].is_zero()) {
                for c in 0..n {
                    let v = a[(p, c)].clone();
                    a[(k, c)] += v;
                }
                for r in 0..n {
                    let v = a[(r, p)].clone();
                    a[(r, k)] += v;
                }
            }
        }
        let pivot = a[(k, k)].clone();
        diag.push(pivot.clone());
        if pivot.is_zero() {
            continue;
        }
        for r in k + 1..n {
            if a[(r, k)].is_zero() {
                continue;
            }
            let f = &a[(r, k)] / &pivot;
            for c in k..n {
                let delta = &f * &a[(k, c)];
                a[(r, c)] -= delta;
            }
            for rr in k..n {
                let delta = &f * &a[(rr, k)];
                a[(rr, r)] -= delta;
            }
        }
    }
    diag
}

fn swap_sym(a: &mut Matrix, i: usize, j: usize) {
    let n = a.rows();
    for c in 0..n {
        let t = a[(i, c)].clone();
        a[(i, c)] = a[(j, c)].clone();
        a[(j, c)] = t;
    }
    for r in 0..n {
        let t = a[(r, i)].clone();
        a[(r, i)] = a[(r, j)].clone();
        a[(r, j)] = t;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn sym(n: usize, v: &[i64]) -> BilinearForm {
        BilinearForm::new(Matrix::from_flat(n, n, v.iter().map(|&x| int(x)).collect()), Symmetry::Symmetric).unwrap()
    }

    #[test]
    fn symmetry_enforced() {
        let m = Matrix::from_flat(2, 2, [0, 1, 2, 0].iter().map(|&x| int(x)).collect());
        assert!(BilinearForm::new(m.clone(), Symmetry::Symmetric).is_err());
        assert!(BilinearForm::new(m.clone(), Symmetry::Skew).is_err());
        assert_eq!(BilinearForm::classify(m).unwrap().symmetry(), Symmetry::General);
    }

    #[test]
    fn signature_handles_zero_diagonal() {
        // hyperbolic plane: one positive, one negative
        let h = sym(2, &[0, 1, 1, 0]);
        assert_eq!(h.signature(), Some(Signature { positive: 1, negative: 1, zero: 0 }));
        assert!(!h.is_positive_definite());
        let d = sym(3, &[2, 1, 0, 1, 2, 0, 0, 0, 0]);
        assert_eq!(d.signature(), Some(Signature { positive: 2, negative: 0, zero: 1 }));
        assert!(sym(2, &[2, 1, 1, 2]).is_positive_definite());
        assert_eq!(sym(3, &[-2, 0, 0, 0, -2, 0, 0, 0, -2]).signature().unwrap().negative, 3);
    }

    #[test]
    fn proportionality() {
        let a = sym(2, &[1, 0, 0, 2]);
        assert!(a.is_proportional_to(&a.scale(&int(-3))));
        assert!(!a.is_proportional_to(&sym(2, &[1, 0, 0, 1])));
        assert!(!a.is_proportional_to(&a.scale(&int(0))));
    }
}
