//! Exact solution spaces of the gauge equations attached to a pair of
//! connections: intertwiners `M(∇, ∇*)`, parallel bilinear forms, the
//! Φ/Φ* splitting of an endomorphism, and the prolonged system whose
//! solutions are the vector fields `X` with `∇²X` vanishing on `(Y, Z)` in
//! the sense `∇_Y ∇_Z X − ∇_{∇_Y Z} X = 0`.
//!
//! # Solving the prolonged system
//!
//! On the simply connected group every left-invariant frame trivializes the
//! tangent bundle, so a vector field is a function `f: G → ℝ^m` and the
//! equation becomes a linear first-order system for the pair `s = (f, A)`,
//! `A = ∇X` written in the frame:
//!
//! ```text
//! e_i f = A e_i − Γ_i f
//! e_i A = A Γ_i − Γ_i A          ((Γ_i)_{kj} = Γ^k_{ij})
//! ```
//!
//! Both right-hand sides are constant linear maps `M_i` of `s`. Because
//! `e_i e_j − e_j e_i = Σ_k c^k_{ij} e_k` on functions and `e_i e_j s = M_j M_i s`,
//! a solution through `s(1) = s₀` exists iff `s₀` lies in the largest subspace
//! `W` that is invariant under every `M_i` and killed by every
//! `F_ij = [M_i, M_j] + Σ_k c^k_{ij} M_k` (Frobenius). `W` is computed by
//! starting from `∩ ker F_ij` and repeatedly discarding vectors that some
//! `M_i` maps outside the current subspace; each step either fixes the space
//! or shrinks it, so at most `m + m²` steps are taken.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::connection::InvariantConnection;
use crate::error::{Error, Result};
use crate::form::{BilinearForm, Symmetry};
use crate::linalg::{self, Matrix};
use crate::rational::{half, int, Rational};
use crate::tensor::DefectTensor;

/// What the coefficient arrays of a [`LinearSolutionSpace`] describe.
///
/// Endomorphisms and forms are stored row-major as `m × m` matrices: an
/// endomorphism `φ` has `φ e_j = Σ_i φ[i][j] e_i`, a form has
/// `b[i][j] = b(e_i, e_j)`. Stacked pairs put `f` first and then `A` row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ambient {
    Endomorphisms { m: usize },
    Vectors { m: usize },
    Forms { m: usize, symmetry: Symmetry },
    Stacked { m: usize },
}

impl Ambient {
    pub fn m(self) -> usize {
        match self {
            Ambient::Endomorphisms { m }
            | Ambient::Vectors { m }
            | Ambient::Forms { m, .. }
            | Ambient::Stacked { m } => m,
        }
    }

    /// Length of each coefficient array.
    pub fn len(self) -> usize {
        let m = self.m();
        match self {
            Ambient::Vectors { .. } => m,
            Ambient::Endomorphisms { .. } | Ambient::Forms { .. } => m * m,
            Ambient::Stacked { .. } => m + m * m,
        }
    }

    pub fn is_empty(self) -> bool {
        self.len() == 0
    }

    pub fn name(self) -> &'static str {
        match self {
            Ambient::Endomorphisms { .. } => "endomorphisms",
            Ambient::Vectors { .. } => "vectors",
            Ambient::Forms { .. } => "forms",
            Ambient::Stacked { .. } => "stacked",
        }
    }
}

/// A linear subspace given by an exactly independent basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSolutionSpace {
    ambient: Ambient,
    basis: Vec<Vec<Rational>>,
}

impl LinearSolutionSpace {
    /// Wraps `vectors`, reducing them to an independent basis of their span.
    pub fn spanned_by(ambient: Ambient, vectors: &[Vec<Rational>]) -> Result<Self> {
        let n = ambient.len();
        for v in vectors {
            Error::check_dim(n, v.len())?;
        }
        Ok(LinearSolutionSpace { ambient, basis: linalg::span_basis(n, vectors) })
    }

    /// The nullspace of `constraints` (rows of length `ambient.len()`).
    pub fn kernel_of(ambient: Ambient, constraints: &[Vec<Rational>]) -> Self {
        let n = ambient.len();
        let basis = if constraints.is_empty() {
            linalg::identity_basis(n)
        } else {
            Matrix::from_rows(n, constraints).nullspace()
        };
        let space = LinearSolutionSpace { ambient, basis };
        debug_assert!(space.basis.iter().all(|v| constraints.iter().all(|r| linalg::dot(r, v).is_zero())));
        space
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        linalg::contains(self.ambient.len(), &self.basis, v)
    }

    pub fn combination(&self, coeffs: &[Rational]) -> Vec<Rational> {
        linalg::combine(self.ambient.len(), &self.basis, coeffs)
    }

    /// Basis element `s` as an `m × m` matrix (endomorphism and form spaces).
    pub fn element_matrix(&self, s: usize) -> Matrix {
        let m = self.ambient.m();
        Matrix::from_flat(m, m, self.basis[s].clone())
    }

    pub fn matrices(&self) -> Vec<Matrix> {
        (0..self.dim()).map(|s| self.element_matrix(s)).collect()
    }
}

fn flat(m: usize, a: usize, b: usize) -> usize {
    a * m + b
}

/// Residual `∇*_{e_i}(φ e_j) − φ(∇_{e_i} e_j)` along `e_k`, indexed `(i, j, k)`.
pub fn gauge_defect(
    nabla: &InvariantConnection,
    dual: &InvariantConnection,
    phi: &Matrix,
) -> Result<DefectTensor> {
    let m = nabla.dim();
    Error::check_dim(m, dual.dim())?;
    Error::check_dim(m, phi.rows())?;
    Error::check_dim(m, phi.cols())?;
    let mut out = DefectTensor::zeros(&[m, m, m]);
    for i in 0..m {
        let lhs = dual.gamma_matrix(i).mul(phi);
        let rhs = phi.mul(&nabla.gamma_matrix(i));
        let d = lhs.sub(&rhs);
        for j in 0..m {
            for k in 0..m {
                *out.get_mut(&[i, j, k]) = d[(k, j)].clone();
            }
        }
    }
    Ok(out)
}

/// `M(∇, ∇*)`: endomorphisms `φ` with `∇*_X ∘ φ = φ ∘ ∇_X` for every `X`.
pub fn solve_gauge_equation(
    nabla: &InvariantConnection,
    dual: &InvariantConnection,
) -> Result<LinearSolutionSpace> {
    let m = nabla.dim();
    Error::check_dim(m, dual.dim())?;
    let n = m * m;
    let mut rows = Vec::with_capacity(m * m * m);
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                let mut row = alloc::vec![Rational::zero(); n];
                for l in 0..m {
                    let a = dual.gamma().gamma(i, l, k);
                    if !a.is_zero() {
                        row[flat(m, l, j)] += a;
                    }
                    let b = nabla.gamma().gamma(i, j, l);
                    if !b.is_zero() {
                        row[flat(m, k, l)] -= b;
                    }
                }
                if !linalg::is_zero_vec(&row) {
                    rows.push(row);
                }
            }
        }
    }
    let space = LinearSolutionSpace::kernel_of(Ambient::Endomorphisms { m }, &rows);
    for phi in space.matrices() {
        assert!(gauge_defect(nabla, dual, &phi)?.is_zero(), "gauge solution failed re-verification");
    }
    Ok(space)
}

/// The g-symmetric and g-skew parts of an endomorphism.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugePair {
    pub phi: Matrix,
    pub phi_star: Matrix,
}

impl GaugePair {
    /// `q(x, y) = g(Φx, y)` (symmetric) and `ω(x, y) = g(Φ*x, y)` (skew).
    pub fn forms(&self, g: &BilinearForm) -> Result<(BilinearForm, BilinearForm)> {
        let q = BilinearForm::new(self.phi.transpose().mul(g.matrix()), Symmetry::Symmetric)?;
        let w = BilinearForm::new(self.phi_star.transpose().mul(g.matrix()), Symmetry::Skew)?;
        Ok((q, w))
    }
}

fn metric_inverse(g: &BilinearForm) -> Result<Matrix> {
    if g.symmetry() != Symmetry::Symmetric {
        return Err(Error::Invalid("metric must be symmetric".into()));
    }
    g.require_nondegenerate()?;
    Ok(g.matrix().inverse().expect("nondegenerate"))
}

/// `g`-adjoint of `φ`: the `ψ` with `g(φx, y) = g(x, ψy)`, i.e. `G⁻¹ φᵀ G`.
fn adjoint(phi: &Matrix, g: &BilinearForm, g_inv: &Matrix) -> Matrix {
    g_inv.mul(&phi.transpose()).mul(g.matrix())
}

/// `Φ = ½(φ + φ^†)`, `Φ* = ½(φ − φ^†)` with `†` the `g`-adjoint.
pub fn phi_split(phi: &Matrix, g: &BilinearForm) -> Result<GaugePair> {
    Error::check_dim(g.dim(), phi.rows())?;
    Error::check_dim(g.dim(), phi.cols())?;
    let g_inv = metric_inverse(g)?;
    let adj = adjoint(phi, g, &g_inv);
    Ok(GaugePair { phi: phi.add(&adj).scale(&half()), phi_star: phi.sub(&adj).scale(&half()) })
}

/// Residual `b(∇_{e_i} e_j, e_k) + b(e_j, ∇_{e_i} e_k)`, indexed `(i, j, k)`.
pub fn parallel_defect(nabla: &InvariantConnection, b: &Matrix) -> Result<DefectTensor> {
    let m = nabla.dim();
    Error::check_dim(m, b.rows())?;
    Error::check_dim(m, b.cols())?;
    let mut out = DefectTensor::zeros(&[m, m, m]);
    for i in 0..m {
        // (Γ_iᵀ B + B Γ_i)[j][k]
        let gi = nabla.gamma_matrix(i);
        let d = gi.transpose().mul(b).add(&b.mul(&gi));
        for j in 0..m {
            for k in 0..m {
                *out.get_mut(&[i, j, k]) = d[(j, k)].clone();
            }
        }
    }
    Ok(out)
}

/// `∇`-parallel bilinear forms of the given symmetry class.
pub fn parallel_forms(nabla: &InvariantConnection, symmetry: Symmetry) -> LinearSolutionSpace {
    let m = nabla.dim();
    let n = m * m;
    let mut rows = Vec::new();
    for a in 0..m {
        for b in a..m {
            let mut row = alloc::vec![Rational::zero(); n];
            match symmetry {
                Symmetry::Symmetric if a != b => {
                    row[flat(m, a, b)] = int(1);
                    row[flat(m, b, a)] = int(-1);
                }
                Symmetry::Skew => {
                    row[flat(m, a, b)] = int(1);
                    row[flat(m, b, a)] += int(1);
                }
                _ => continue,
            }
            rows.push(row);
        }
    }
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                let mut row = alloc::vec![Rational::zero(); n];
                for l in 0..m {
                    let a = nabla.gamma().gamma(i, j, l);
                    if !a.is_zero() {
                        row[flat(m, l, k)] += a;
                    }
                    let b = nabla.gamma().gamma(i, k, l);
                    if !b.is_zero() {
                        row[flat(m, j, l)] += b;
                    }
                }
                if !linalg::is_zero_vec(&row) {
                    rows.push(row);
                }
            }
        }
    }
    let space = LinearSolutionSpace::kernel_of(Ambient::Forms { m, symmetry }, &rows);
    debug_assert!(space.matrices().iter().all(|b| parallel_defect(nabla, b).is_ok_and(|d| d.is_zero())));
    space
}

/// The stabilized solution space of the prolonged system, see the module docs.
#[derive(Debug, Clone, PartialEq)]
pub struct FeStarSolutions {
    pub space: LinearSolutionSpace,
    /// Dimension of the projection of `W` onto the `f` slot.
    pub r_b: usize,
    /// Number of shrinking passes before the fixed point.
    pub steps: usize,
}

/// Evolution operators `M_i` on the stacked space `(f, A)`.
pub fn evolution_operators(nabla: &InvariantConnection) -> Vec<Matrix> {
    let m = nabla.dim();
    let n = m + m * m;
    let a_idx = |a: usize, b: usize| m + a * m + b;
    (0..m)
        .map(|i| {
            let gi = nabla.gamma_matrix(i);
            let mut entries: Vec<(usize, usize, Rational)> = Vec::new();
            for a in 0..m {
                entries.push((a, a_idx(a, i), int(1)));
                for b in 0..m {
                    if !gi[(a, b)].is_zero() {
                        entries.push((a, b, -gi[(a, b)].clone()));
                    }
                }
            }
            for a in 0..m {
                for b in 0..m {
                    for l in 0..m {
                        // (A Γ_i)_{ab} = Σ_l A_{al} (Γ_i)_{lb}
                        if !gi[(l, b)].is_zero() {
                            entries.push((a_idx(a, b), a_idx(a, l), gi[(l, b)].clone()));
                        }
                        // (Γ_i A)_{ab} = Σ_l (Γ_i)_{al} A_{lb}
                        if !gi[(a, l)].is_zero() {
                            entries.push((a_idx(a, b), a_idx(l, b), -gi[(a, l)].clone()));
                        }
                    }
                }
            }
            let mut data = alloc::vec![Rational::zero(); n * n];
            for (r, c, v) in entries {
                data[r * n + c] += v;
            }
            Matrix::from_flat(n, n, data)
        })
        .collect()
}

/// Compatibility operators `F_ij = [M_i, M_j] + Σ_k c^k_{ij} M_k`, `i < j`.
pub fn compatibility_operators(nabla: &InvariantConnection, ops: &[Matrix]) -> Vec<Matrix> {
    let m = nabla.dim();
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let mut f = ops[i].commutator(&ops[j]);
            for (k, op) in ops.iter().enumerate() {
                let c = nabla.base().c(i, j, k);
                if !c.is_zero() {
                    f = f.add(&op.scale(c));
                }
            }
            out.push(f);
        }
    }
    out
}

pub fn solve_fe_star(nabla: &InvariantConnection) -> FeStarSolutions {
    let m = nabla.dim();
    let n = m + m * m;
    let ops = evolution_operators(nabla);
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for f in compatibility_operators(nabla, &ops) {
        for r in 0..n {
            if !linalg::is_zero_vec(f.row(r)) {
                rows.push(f.row(r).to_vec());
            }
        }
    }
    let ambient = Ambient::Stacked { m };
    let mut space = LinearSolutionSpace::kernel_of(ambient, &rows);
    let mut steps = 0;
    loop {
        let ann = linalg::annihilator(n, &space.basis);
        if ann.is_empty() {
            // W is everything, so it is trivially invariant.
            break;
        }
        let p = Matrix::from_rows(n, &ann);
        let mut constraints = ann.clone();
        for op in &ops {
            let pm = p.mul(op);
            for r in 0..pm.rows() {
                if !linalg::is_zero_vec(pm.row(r)) {
                    constraints.push(pm.row(r).to_vec());
                }
            }
        }
        let next = LinearSolutionSpace::kernel_of(ambient, &constraints);
        steps += 1;
        assert!(steps <= n + 1, "stabilization exceeded m + m² shrink steps");
        if next.dim() == space.dim() {
            break;
        }
        space = next;
    }
    let projections: Vec<Vec<Rational>> = space.basis.iter().map(|v| v[..m].to_vec()).collect();
    let r_b = linalg::rank_of(m, &projections);
    FeStarSolutions { space, r_b, steps }
}

/// The same prolonged system read as the operator `L_X∇ − ι_X R`; defined
/// only for torsion-free connections, where the two equations coincide.
pub fn solve_fe_star_star(nabla: &InvariantConnection) -> Result<FeStarSolutions> {
    if !nabla.is_torsion_free() {
        return Err(Error::Unsupported("the second gauge operator needs a torsion-free connection"));
    }
    Ok(solve_fe_star(nabla))
}

/// `𝒢_∇`: invariant vectors `a` with `∇_{e_i}∇_{e_j} a = ∇_{∇_{e_i} e_j} a`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubalgebraReport {
    pub space: LinearSolutionSpace,
    /// `Some(true)` when `Γ` is KV and the space was checked to be closed
    /// under the product; `None` when `Γ` is not KV.
    pub closed_under_product: Option<bool>,
}

pub fn g_nabla_subalgebra(nabla: &InvariantConnection) -> SubalgebraReport {
    let m = nabla.dim();
    let gammas: Vec<Matrix> = (0..m).map(|i| nabla.gamma_matrix(i)).collect();
    let mut rows = Vec::new();
    for i in 0..m {
        for j in 0..m {
            let mut op = gammas[i].mul(&gammas[j]);
            for (l, gl) in gammas.iter().enumerate() {
                let c = nabla.gamma().gamma(i, j, l);
                if !c.is_zero() {
                    op = op.sub(&gl.scale(c));
                }
            }
            for r in 0..m {
                if !linalg::is_zero_vec(op.row(r)) {
                    rows.push(op.row(r).to_vec());
                }
            }
        }
    }
    let space = LinearSolutionSpace::kernel_of(Ambient::Vectors { m }, &rows);
    let closed_under_product = if nabla.gamma().is_kv() {
        let basis = space.basis();
        let closed = basis
            .iter()
            .all(|a| basis.iter().all(|b| space.contains(&nabla.covariant(a, b))));
        Some(closed)
    } else {
        None
    };
    SubalgebraReport { space, closed_under_product }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelImageSplit {
    pub kernel: Vec<Vec<Rational>>,
    pub image: Vec<Vec<Rational>>,
    /// `dim ker + dim im = m` and the two spaces meet only in zero.
    pub complementary: bool,
    pub orthogonal: bool,
}

/// `ker Φ ⊕ im Φ` for a `g`-self-adjoint or `g`-skew-adjoint `Φ`.
pub fn kernel_image_split(phi: &Matrix, g: &BilinearForm) -> Result<KernelImageSplit> {
    let m = g.dim();
    Error::check_dim(m, phi.rows())?;
    Error::check_dim(m, phi.cols())?;
    if g.symmetry() != Symmetry::Symmetric || !g.is_positive_definite() {
        g.require_nondegenerate()?;
        return Err(Error::Invalid("metric must be positive definite".into()));
    }
    let gphi = g.matrix().mul(phi);
    let pg = phi.transpose().mul(g.matrix());
    let self_adjoint = pg == gphi;
    let skew_adjoint = pg == gphi.scale(&int(-1));
    if !self_adjoint && !skew_adjoint {
        return Err(Error::NotSelfOrSkewAdjoint);
    }
    let kernel = phi.nullspace();
    let columns: Vec<Vec<Rational>> = (0..m).map(|j| phi.column(j)).collect();
    let image = linalg::span_basis(m, &columns);
    let mut all = kernel.clone();
    all.extend(image.iter().cloned());
    let complementary = kernel.len() + image.len() == m && linalg::rank_of(m, &all) == m;
    let orthogonal = kernel.iter().all(|u| image.iter().all(|v| g.eval(u, v).is_zero()));
    Ok(KernelImageSplit { kernel, image, complementary, orthogonal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::killing_form;
    use crate::catalog;
    use crate::connection::{amari_dual, cartan_connection, CartanKind};

    #[test]
    fn zero_connection_on_abelian() {
        let z = InvariantConnection::zero(catalog::abelian(3));
        assert_eq!(solve_gauge_equation(&z, &z).unwrap().dim(), 9);
        assert_eq!(parallel_forms(&z, Symmetry::Symmetric).dim(), 6);
        assert_eq!(parallel_forms(&z, Symmetry::Skew).dim(), 3);
        let fe = solve_fe_star(&z);
        assert_eq!((fe.space.dim(), fe.r_b), (12, 3));
        assert_eq!(g_nabla_subalgebra(&z).space.dim(), 3);
    }

    #[test]
    fn so3_plus_connection_intertwiners() {
        let so3 = catalog::so3();
        let plus = cartan_connection(&so3, CartanKind::Plus);
        let k = killing_form(&so3);
        let dual = amari_dual(&plus, &k).unwrap();
        let space = solve_gauge_equation(&plus, &dual).unwrap();
        assert_eq!(space.dim(), 1);
        assert!(space.contains(Matrix::identity(3).as_flat()));
        let sym = parallel_forms(&plus, Symmetry::Symmetric);
        assert_eq!(sym.dim(), 1);
        assert!(sym.contains(k.matrix().as_flat()));
        assert_eq!(parallel_forms(&plus, Symmetry::Skew).dim(), 0);
    }

    #[test]
    fn prolonged_system_on_catalog() {
        let h = InvariantConnection::new(catalog::heisenberg(), catalog::heisenberg_kv()).unwrap();
        let fe = solve_fe_star(&h);
        assert_eq!((fe.space.dim(), fe.r_b), (12, 3));
        let sub = g_nabla_subalgebra(&h);
        assert_eq!(sub.space.dim(), 3);
        assert_eq!(sub.closed_under_product, Some(true));
        let z = cartan_connection(&catalog::so3(), CartanKind::Zero);
        assert_eq!(solve_fe_star(&z).r_b, 0);
        assert_eq!(g_nabla_subalgebra(&z).space.dim(), 0);
        let minus = cartan_connection(&catalog::so3(), CartanKind::Minus);
        assert!(matches!(solve_fe_star_star(&minus), Err(Error::Unsupported(_))));
    }

    #[test]
    fn phi_split_examples() {
        let g = BilinearForm::new(
            Matrix::from_flat(2, 2, [2, 1, 1, 3].iter().map(|&x| int(x)).collect()),
            Symmetry::Symmetric,
        )
        .unwrap();
        let id = phi_split(&Matrix::identity(2), &g).unwrap();
        assert_eq!(id.phi, Matrix::identity(2));
        assert!(id.phi_star.is_zero());
        let phi = Matrix::from_flat(2, 2, [1, 2, -1, 4].iter().map(|&x| int(x)).collect());
        let pair = phi_split(&phi, &g).unwrap();
        assert_eq!(pair.phi.add(&pair.phi_star), phi);
        pair.forms(&g).unwrap();
        let again = phi_split(&pair.phi_star, &g).unwrap();
        assert!(again.phi.is_zero());
        assert_eq!(again.phi_star, pair.phi_star);
    }

    #[test]
    fn kernel_image_examples() {
        let g = BilinearForm::identity(2);
        let d = Matrix::from_flat(2, 2, [1, 0, 0, 0].iter().map(|&x| int(x)).collect());
        let s = kernel_image_split(&d, &g).unwrap();
        assert_eq!(s.kernel, alloc::vec![alloc::vec![int(0), int(1)]]);
        assert_eq!(s.image.len(), 1);
        assert!(s.complementary && s.orthogonal);
        let full = kernel_image_split(&Matrix::identity(2), &g).unwrap();
        assert!(full.kernel.is_empty() && full.image.len() == 2);
        let bad = Matrix::from_flat(2, 2, [0, 1, 0, 0].iter().map(|&x| int(x)).collect());
        assert_eq!(kernel_image_split(&bad, &g), Err(Error::NotSelfOrSkewAdjoint));
    }
}
