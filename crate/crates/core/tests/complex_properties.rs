//! Property tests for the cochain complexes, the symbol calculus, the affine
//! tower and the statistical-model numerics.

use koszul_core::algebra::{associator_defect, commutator_bracket, jacobi_defect};
use koszul_core::cohomology::{
    ce_coboundary, ce_cohomology_dims, hochschild_coboundary, kv_coboundary, kv_cohomology_dims,
    kv_degree_zero_space, maurer_cartan_defect, subsets, CeCoefficients, Cochain, KvCoefficients,
};
use koszul_core::flat_models::{affine_algebra, geometric_completeness, tower_dims, Completeness};
use koszul_core::gauge::solve_fe_star;
use koszul_core::invariants::hessian_cocycle_space;
use koszul_core::linalg;
use koszul_core::rational::int;
use koszul_core::spencer::{cartan_test, prolong, spencer_cohomology, SymbolSpace};
use koszul_core::statmodel::{
    alpha_christoffels, alpha_curvature, fisher_from_hessian, fisher_information, Derivatives, FiniteStatModel,
    StatModel,
};
use koszul_core::{catalog, sample, BilinearProduct, InvariantConnection, Matrix, Rational};
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn random_cochain(seed: u64, degree: usize, dim: usize, module_dim: usize) -> Cochain {
    let mut rng = sample::rng(seed);
    let len = dim.pow(degree as u32) * module_dim;
    let data = (0..len).map(|_| sample::small_int(&mut rng, 3)).collect();
    Cochain::from_flat(degree, dim, module_dim, data).unwrap()
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn kv_coboundary_squares_to_zero(seed in any::<u64>(), degree in 1usize..=2, adjoint in any::<bool>()) {
        let p = sample::kv_algebra(&mut sample::rng(seed), 3);
        let coeffs = if adjoint { KvCoefficients::Adjoint } else { KvCoefficients::Scalar };
        let md = if adjoint { p.dim() } else { 1 };
        let c = random_cochain(seed ^ 1, degree, p.dim(), md);
        let dd = kv_coboundary(&kv_coboundary(&c, &p, coeffs).unwrap(), &p, coeffs).unwrap();
        prop_assert!(dd.is_zero());
    }

    #[test]
    fn kv_coboundary_from_degree_zero(seed in any::<u64>()) {
        let p = sample::kv_algebra(&mut sample::rng(seed), 3);
        for xi in kv_degree_zero_space(&p) {
            let c = Cochain::from_flat(0, p.dim(), p.dim(), xi).unwrap();
            let d = kv_coboundary(&c, &p, KvCoefficients::Adjoint).unwrap();
            prop_assert!(kv_coboundary(&d, &p, KvCoefficients::Adjoint).unwrap().is_zero());
        }
    }

    #[test]
    fn ce_coboundary_squares_to_zero(seed in any::<u64>(), degree in 0usize..=2, adjoint in any::<bool>()) {
        let mut rng = sample::rng(seed);
        let l = sample::lie_algebra(&mut rng, 1, 3);
        let coeffs = if adjoint { CeCoefficients::Adjoint } else { CeCoefficients::Trivial };
        let md = if adjoint { l.dim() } else { 1 };
        let len = subsets(l.dim(), degree).len() * md;
        let data: Vec<Rational> = (0..len).map(|_| sample::small_int(&mut rng, 3)).collect();
        let d = ce_coboundary(&l, coeffs, degree, &data).unwrap();
        let dd = ce_coboundary(&l, coeffs, degree + 1, &d).unwrap();
        prop_assert!(linalg::is_zero_vec(&dd));
    }

    #[test]
    fn hochschild_coboundary_squares_to_zero(seed in any::<u64>(), degree in 0usize..=1) {
        let p = sample::associative_algebra(&mut sample::rng(seed), 3);
        let c = random_cochain(seed ^ 3, degree, p.dim(), p.dim());
        let dd = hochschild_coboundary(&p, &hochschild_coboundary(&p, &c).unwrap()).unwrap();
        prop_assert!(dd.is_zero());
    }
}

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn maurer_cartan_vanishes_on_differences_of_brackets(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let m = 1 + (seed % 4) as usize;
        let mu = sample::lie_algebra_of_dim(&mut rng, m);
        let nu = sample::lie_algebra_of_dim(&mut rng, m);
        let b: Vec<Rational> = nu
            .structure_constants()
            .iter()
            .zip(mu.structure_constants())
            .map(|(x, y)| x - y)
            .collect();
        prop_assert!(maurer_cartan_defect(&mu, &b).unwrap().is_zero());
    }

    #[test]
    fn cohomology_is_basis_invariant(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let l = sample::lie_algebra(&mut rng, 1, 3);
        let p = sample::invertible_matrix(&mut rng, l.dim(), 2);
        let moved = l.change_basis(&p).unwrap();
        for coeffs in [CeCoefficients::Trivial, CeCoefficients::Adjoint] {
            prop_assert_eq!(
                ce_cohomology_dims(&l, coeffs, 3).cohomology,
                ce_cohomology_dims(&moved, coeffs, 3).cohomology
            );
        }
        let kv = sample::kv_algebra(&mut rng, 2);
        let q = sample::invertible_matrix(&mut rng, kv.dim(), 2);
        let kv_moved = kv.change_basis(&q).unwrap();
        for coeffs in [KvCoefficients::Adjoint, KvCoefficients::Scalar] {
            prop_assert_eq!(
                kv_cohomology_dims(&kv, coeffs, 2).unwrap().cohomology,
                kv_cohomology_dims(&kv_moved, coeffs, 2).unwrap().cohomology
            );
        }
    }

    #[test]
    fn symmetric_scalar_cocycles_are_hessian_cocycles(seed in any::<u64>()) {
        let nabla = sample::flat_connection(&mut sample::rng(seed), 3);
        let p = nabla.gamma();
        let m = p.dim();
        // Symmetric 2-cochains as a nullspace: δc = 0 together with symmetry.
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for i in 0..m {
            for j in 0..m {
                let mut row = vec![int(0); m * m];
                row[i * m + j] += int(1);
                row[j * m + i] -= int(1);
                rows.push(row);
            }
        }
        for s in 0..m * m {
            let mut unit = vec![int(0); m * m];
            unit[s] = int(1);
            let c = Cochain::from_flat(2, m, 1, unit).unwrap();
            let image = kv_coboundary(&c, p, KvCoefficients::Scalar).unwrap();
            // column s of δ: transpose into rows afterwards
            rows.push(image.as_flat().to_vec());
        }
        // rows[m*m..] are columns of δ; rebuild δ as rows over the m² unknowns.
        let cols: Vec<Vec<Rational>> = rows.split_off(m * m);
        let out_len = cols[0].len();
        for r in 0..out_len {
            rows.push(cols.iter().map(|c| c[r].clone()).collect());
        }
        let kv_space = Matrix::from_rows(m * m, &rows).nullspace();
        let hessian = hessian_cocycle_space(&nabla).unwrap();
        prop_assert_eq!(kv_space.len(), hessian.dim());
        for v in &kv_space {
            prop_assert!(hessian.contains(v));
        }
    }
}

fn random_symbol(seed: u64) -> SymbolSpace {
    let mut rng = sample::rng(seed);
    let v = 1 + (seed % 3) as usize;
    let w = 1 + ((seed / 3) % 3) as usize;
    let count = (seed / 9 % 4) as usize;
    let elements: Vec<Vec<Rational>> = (0..count).map(|_| (0..v * w).map(|_| sample::small_int(&mut rng, 1)).collect()).collect();
    SymbolSpace::new(v, w, &elements).unwrap()
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn cartan_inequality_on_random_symbols(seed in any::<u64>()) {
        let a = random_symbol(seed);
        let basis = sample::invertible_matrix(&mut sample::rng(seed ^ 9), a.v_dim(), 3);
        let t = cartan_test(&a, &basis).unwrap();
        prop_assert!(t.prolongation_dim <= t.flag_sum);
    }

    #[test]
    fn prolongation_is_monotone(seed in any::<u64>()) {
        let a = random_symbol(seed);
        let mut rng = sample::rng(seed ^ 11);
        let mut bigger: Vec<Vec<Rational>> = a.basis().to_vec();
        bigger.push((0..a.v_dim() * a.w_dim()).map(|_| sample::small_int(&mut rng, 2)).collect());
        let b = SymbolSpace::new(a.v_dim(), a.w_dim(), &bigger).unwrap();
        prop_assert!(prolong(&a).is_subspace_of(&prolong(&b)));
    }
}

proptest! {
    #![proptest_config(config(40))]

    #[test]
    fn spencer_differential_squares_to_zero(seed in any::<u64>()) {
        let a = random_symbol(seed);
        prop_assert!(spencer_cohomology(&a).d_squared_zero);
    }
}

#[test]
fn affine_algebras_are_associative_with_lie_commutators() {
    for m in 1..=4 {
        let a = affine_algebra(m);
        assert!(associator_defect(a.product()).is_zero(), "m = {m}");
        let lie = commutator_bracket(a.product()).unwrap();
        assert_eq!(lie.dim(), m * m + m);
        assert!(jacobi_defect(lie.dim(), lie.structure_constants()).unwrap().is_zero());
    }
}

#[test]
fn fe_star_dimension_matches_first_tower_level() {
    for seed in 0..10 {
        let nabla = sample::flat_connection(&mut sample::rng(seed), 3);
        let m = nabla.dim();
        assert_eq!(solve_fe_star(&nabla).space.dim(), tower_dims(m, 1).unwrap().dims[1]);
    }
    let h = InvariantConnection::new(catalog::heisenberg(), catalog::heisenberg_kv()).unwrap();
    assert_eq!(solve_fe_star(&h).space.dim(), tower_dims(3, 1).unwrap().dims[1]);
}

#[test]
fn closed_subalgebras_of_complete_algebras_are_complete() {
    // Strictly upper triangular 3×3 matrices and their closed coordinate subalgebras.
    let n3 = BilinearProduct::from_sparse(3, &[(0, 1, 2, int(1))]).unwrap();
    assert!(matches!(geometric_completeness(&n3, 1).unwrap(), Completeness::Complete(_)));
    for keep in [vec![0usize, 2], vec![1, 2], vec![2]] {
        let k = keep.len();
        let sub = BilinearProduct::from_fn(k, |i, j, l| n3.gamma(keep[i], keep[j], keep[l]).clone());
        assert!(matches!(geometric_completeness(&sub, 1).unwrap(), Completeness::Complete(_)));
    }
    let h = catalog::heisenberg_kv();
    assert!(matches!(geometric_completeness(&h, 1).unwrap(), Completeness::Complete(_)));
}

fn stat_catalog() -> Vec<(FiniteStatModel, Vec<Vec<f64>>)> {
    [
        FiniteStatModel::Bernoulli,
        FiniteStatModel::CategoricalMean(3),
        FiniteStatModel::CategoricalNatural(3),
        FiniteStatModel::Curved4,
    ]
    .into_iter()
    .map(|m| {
        let grid = m.default_grid();
        (m, grid)
    })
    .collect()
}

#[test]
fn statistical_models_are_normalized() {
    for (model, grid) in stat_catalog() {
        for theta in &grid {
            let total: f64 = (0..model.n_outcomes()).map(|x| model.log_density(theta, x).exp()).sum();
            assert!((total - 1.0).abs() < 1e-12, "{}", model.tag());
        }
    }
}

#[test]
fn fisher_routes_agree() {
    for (model, grid) in stat_catalog() {
        for theta in &grid {
            let a = fisher_information(&model, theta).unwrap();
            let b = fisher_from_hessian(&model, theta, Derivatives::FiniteDifference).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-6, "{} at {theta:?}: {a:?} vs {b:?}", model.tag());
            }
        }
    }
}

/// Levi-Civita symbols `Γ_{ij,k} = ½(∂_i g_jk + ∂_j g_ik − ∂_k g_ij)` from
/// closed-form Fisher matrices differentiated numerically.
fn levi_civita(model: &FiniteStatModel, theta: &[f64]) -> Vec<f64> {
    let d = model.n_params();
    let h = 1e-4;
    let dg: Vec<Vec<f64>> = (0..d)
        .map(|i| {
            let mut up = theta.to_vec();
            let mut down = theta.to_vec();
            up[i] += h;
            down[i] -= h;
            let gu = koszul_core::statmodel::fisher_with(model, &up, Derivatives::Analytic).unwrap();
            let gd = koszul_core::statmodel::fisher_with(model, &down, Derivatives::Analytic).unwrap();
            gu.iter().zip(&gd).map(|(a, b)| (a - b) / (2.0 * h)).collect()
        })
        .collect();
    let mut out = vec![0.0; d * d * d];
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                out[(i * d + j) * d + k] = 0.5 * (dg[i][j * d + k] + dg[j][i * d + k] - dg[k][i * d + j]);
            }
        }
    }
    out
}

#[test]
fn alpha_symbols_are_affine_and_centered_on_levi_civita() {
    for (model, grid) in stat_catalog() {
        for theta in &grid {
            let zero = alpha_christoffels(&model, theta, 0.0).unwrap();
            for alpha in [0.5, 1.0, 2.0] {
                let plus = alpha_christoffels(&model, theta, alpha).unwrap();
                let minus = alpha_christoffels(&model, theta, -alpha).unwrap();
                for ((p, m), z) in plus.lowered.iter().zip(&minus.lowered).zip(&zero.lowered) {
                    assert!((p + m - 2.0 * z).abs() < 1e-9 * (1.0 + z.abs()), "{}", model.tag());
                }
            }
            let lc = levi_civita(&model, theta);
            for (a, b) in zero.lowered.iter().zip(&lc) {
                // Symbols reach ~10³ near the boundary of the simplex.
                assert!((a - b).abs() < 1e-5 * b.abs().max(1.0), "{} at {theta:?}: {a} vs {b}", model.tag());
            }
        }
    }
}

#[test]
fn curvature_is_antisymmetric_in_the_first_pair() {
    for (model, grid) in stat_catalog() {
        let d = model.n_params();
        for theta in grid.iter().take(3) {
            for alpha in [-1.0, 0.0, 0.7] {
                let r = alpha_curvature(&model, theta, alpha).unwrap();
                for i in 0..d {
                    for j in 0..d {
                        for kl in 0..d * d {
                            let a = r.tensor[(i * d + j) * d * d + kl];
                            let b = r.tensor[(j * d + i) * d * d + kl];
                            assert!((a + b).abs() < 1e-6);
                        }
                    }
                }
            }
        }
    }
}
