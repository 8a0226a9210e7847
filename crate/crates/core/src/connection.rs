//! Left-invariant Koszul connections on a Lie algebra: Cartan's three
//! canonical connections, torsion and curvature, the metric (Amari) dual and
//! the α-family.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::algebra::{BilinearProduct, LieAlgebra};
use crate::error::{Error, Result};
use crate::form::{BilinearForm, Symmetry};
use crate::linalg::Matrix;
use crate::rational::{half, int, Rational};
use crate::tensor::DefectTensor;

/// `∇_{e_i} e_j = Σ_k Γ^k_{ij} e_k` over a fixed Lie algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantConnection {
    base: LieAlgebra,
    gamma: BilinearProduct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CartanKind {
    /// `∇⁻_X Y = 0`
    Minus,
    /// `∇⁰_X Y = ½[X, Y]`
    Zero,
    /// `∇⁺_X Y = [X, Y]`
    Plus,
}

impl InvariantConnection {
    pub fn new(base: LieAlgebra, gamma: BilinearProduct) -> Result<Self> {
        Error::check_dim(base.dim(), gamma.dim())?;
        Ok(InvariantConnection { base, gamma })
    }

    /// A product viewed as a connection on its own commutator algebra.
    pub fn from_product(gamma: BilinearProduct) -> Result<Self> {
        let base = crate::algebra::commutator_bracket(&gamma)?;
        Ok(InvariantConnection { base, gamma })
    }

    pub fn zero(base: LieAlgebra) -> Self {
        let gamma = BilinearProduct::zero(base.dim());
        InvariantConnection { base, gamma }
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn base(&self) -> &LieAlgebra {
        &self.base
    }

    pub fn gamma(&self) -> &BilinearProduct {
        &self.gamma
    }

    /// `Γ_i`: the matrix of `∇_{e_i}`.
    pub fn gamma_matrix(&self, i: usize) -> Matrix {
        self.gamma.left(i)
    }

    pub fn covariant(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        self.gamma.product(x, y)
    }

    pub fn is_torsion_free(&self) -> bool {
        torsion(self).is_zero()
    }
}

pub fn cartan_connection(l: &LieAlgebra, kind: CartanKind) -> InvariantConnection {
    let gamma = match kind {
        CartanKind::Minus => BilinearProduct::zero(l.dim()),
        CartanKind::Zero => l.as_product().scale(&half()),
        CartanKind::Plus => l.as_product(),
    };
    InvariantConnection { base: l.clone(), gamma }
}

/// `T^k_{ij} = Γ^k_{ij} − Γ^k_{ji} − c^k_{ij}`, indexed `(i, j, k)`.
pub fn torsion(nabla: &InvariantConnection) -> DefectTensor {
    let m = nabla.dim();
    let mut t = DefectTensor::zeros(&[m, m, m]);
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                *t.get_mut(&[i, j, k]) =
                    nabla.gamma.gamma(i, j, k) - nabla.gamma.gamma(j, i, k) - nabla.base.c(i, j, k);
            }
        }
    }
    t
}

/// `R(e_i, e_j) e_k` along `e_l`, indexed `(i, j, k, l)`:
/// `∇_i ∇_j e_k − ∇_j ∇_i e_k − ∇_{[e_i, e_j]} e_k`.
pub fn curvature(nabla: &InvariantConnection) -> DefectTensor {
    let m = nabla.dim();
    let gammas: Vec<Matrix> = (0..m).map(|i| nabla.gamma_matrix(i)).collect();
    let mut r = DefectTensor::zeros(&[m, m, m, m]);
    for i in 0..m {
        for j in 0..m {
            let mut rij = gammas[i].commutator(&gammas[j]);
            for (p, gp) in gammas.iter().enumerate() {
                let c = nabla.base.c(i, j, p);
                if !c.is_zero() {
                    rij = rij.sub(&gp.scale(c));
                }
            }
            for k in 0..m {
                for l in 0..m {
                    *r.get_mut(&[i, j, k, l]) = rij[(l, k)].clone();
                }
            }
        }
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefectKind {
    Torsion,
    Curvature,
}

/// Outcome of the flatness test; a non-flat answer names the first nonzero
/// component found (torsion checked before curvature).
#[derive(Debug, Clone, PartialEq)]
pub struct Flatness {
    pub flat: bool,
    pub witness: Option<(DefectKind, Vec<usize>, Rational)>,
}

pub fn is_locally_flat(nabla: &InvariantConnection) -> Flatness {
    if let Some((idx, v)) = torsion(nabla).first_nonzero() {
        return Flatness { flat: false, witness: Some((DefectKind::Torsion, idx, v)) };
    }
    if let Some((idx, v)) = curvature(nabla).first_nonzero() {
        return Flatness { flat: false, witness: Some((DefectKind::Curvature, idx, v)) };
    }
    Flatness { flat: true, witness: None }
}

fn metric_inverse(g: &BilinearForm) -> Result<Matrix> {
    if g.symmetry() != Symmetry::Symmetric {
        return Err(Error::Invalid("metric must be symmetric".into()));
    }
    g.require_nondegenerate()?;
    Ok(g.matrix().inverse().expect("nondegenerate metric is invertible"))
}

/// The unique `∇^g` with `g(∇^g_X Y, Z) + g(Y, ∇_X Z) = 0`; in matrices
/// `Γ^g_i = −G⁻¹ Γ_iᵀ G`.
pub fn amari_dual(nabla: &InvariantConnection, g: &BilinearForm) -> Result<InvariantConnection> {
    Error::check_dim(nabla.dim(), g.dim())?;
    let g_inv = metric_inverse(g)?;
    let m = nabla.dim();
    let minus_one = int(-1);
    let mut gamma = BilinearProduct::zero(m);
    for i in 0..m {
        let dual = g_inv.mul(&nabla.gamma_matrix(i).transpose()).mul(g.matrix()).scale(&minus_one);
        for j in 0..m {
            for k in 0..m {
                *gamma.gamma_mut(i, j, k) = dual[(k, j)].clone();
            }
        }
    }
    Ok(InvariantConnection { base: nabla.base.clone(), gamma })
}

/// `(1+α)/2 ∇ + (1−α)/2 ∇*`.
pub fn alpha_connection(
    nabla: &InvariantConnection,
    dual: &InvariantConnection,
    alpha: &Rational,
) -> Result<InvariantConnection> {
    Error::check_dim(nabla.dim(), dual.dim())?;
    if nabla.base != dual.base {
        return Err(Error::Invalid("connections live on different Lie algebras".into()));
    }
    let one = int(1);
    let a = (&one + alpha) * half();
    let b = (&one - alpha) * half();
    let gamma = nabla.gamma.scale(&a).add(&dual.gamma.scale(&b))?;
    Ok(InvariantConnection { base: nabla.base.clone(), gamma })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{basis_vector, kv_anomaly};
    use crate::catalog;
    use crate::rational::rat;

    #[test]
    fn cartan_connections_on_so3() {
        let so3 = catalog::so3();
        assert!(cartan_connection(&so3, CartanKind::Minus).gamma().is_zero());
        let z = cartan_connection(&so3, CartanKind::Zero);
        assert_eq!(*z.gamma().gamma(0, 1, 2), rat(1, 2));
        assert_eq!(*z.gamma().gamma(1, 0, 2), rat(-1, 2));
        assert!(cartan_connection(&catalog::abelian(3), CartanKind::Plus).gamma().is_zero());
    }

    #[test]
    fn torsion_examples() {
        let so3 = catalog::so3();
        assert!(torsion(&cartan_connection(&so3, CartanKind::Zero)).is_zero());
        assert!(torsion(&cartan_connection(&catalog::sl2(), CartanKind::Zero)).is_zero());
        let t = torsion(&cartan_connection(&so3, CartanKind::Minus));
        assert_eq!(*t.get(&[0, 1, 2]), int(-1));
        assert_eq!(*t.get(&[2, 0, 1]), int(-1));
        let h = InvariantConnection::new(catalog::heisenberg(), catalog::heisenberg_kv()).unwrap();
        assert!(torsion(&h).is_zero());
    }

    #[test]
    fn curvature_of_zero_connection_on_so3() {
        let so3 = catalog::so3();
        let r = curvature(&cartan_connection(&so3, CartanKind::Zero));
        for i in 0..3 {
            for j in 0..3 {
                let xy = so3.bracket_basis(i, j);
                for k in 0..3 {
                    let expect = so3.bracket(&xy, &basis_vector(3, k));
                    for l in 0..3 {
                        assert_eq!(*r.get(&[i, j, k, l]), -rat(1, 4) * &expect[l]);
                    }
                }
            }
        }
        assert!(curvature(&InvariantConnection::zero(catalog::abelian(2))).is_zero());
    }

    #[test]
    fn flatness_with_witness() {
        let h = InvariantConnection::new(catalog::heisenberg(), catalog::heisenberg_kv()).unwrap();
        assert!(is_locally_flat(&h).flat);
        let f = is_locally_flat(&cartan_connection(&catalog::so3(), CartanKind::Zero));
        assert!(!f.flat);
        // R(e0, e1) e0 = −¼ [e2, e0] = −¼ e1
        assert_eq!(f.witness, Some((DefectKind::Curvature, alloc::vec![0, 1, 0, 1], rat(-1, 4))));
        assert!(is_locally_flat(&InvariantConnection::zero(catalog::abelian(4))).flat);
    }

    #[test]
    fn amari_dual_examples() {
        let so3 = catalog::so3();
        let g = BilinearForm::new(
            Matrix::from_flat(3, 3, [2, 1, 0, 1, 3, 0, 0, 0, 1].iter().map(|&x| int(x)).collect()),
            Symmetry::Symmetric,
        )
        .unwrap();
        let zero = InvariantConnection::zero(so3.clone());
        assert_eq!(amari_dual(&zero, &g).unwrap(), zero);
        let plus = cartan_connection(&so3, CartanKind::Plus);
        let k = crate::algebra::killing_form(&so3);
        assert_eq!(amari_dual(&plus, &k).unwrap(), plus);
        let singular = BilinearForm::new(Matrix::zeros(3, 3), Symmetry::Symmetric).unwrap();
        assert!(matches!(amari_dual(&plus, &singular), Err(Error::SingularMetric { .. })));
    }

    #[test]
    fn alpha_family_endpoints() {
        let so3 = catalog::so3();
        let a = cartan_connection(&so3, CartanKind::Plus);
        let b = cartan_connection(&so3, CartanKind::Minus);
        assert_eq!(alpha_connection(&a, &b, &int(1)).unwrap(), a);
        assert_eq!(alpha_connection(&a, &b, &int(-1)).unwrap(), b);
        assert_eq!(alpha_connection(&a, &b, &int(0)).unwrap(), cartan_connection(&so3, CartanKind::Zero));
    }

    #[test]
    fn torsion_free_kv_anomaly_is_minus_curvature() {
        let z = cartan_connection(&catalog::sl2(), CartanKind::Zero);
        assert_eq!(kv_anomaly(z.gamma()), curvature(&z).neg());
    }
}
