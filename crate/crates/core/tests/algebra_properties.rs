//! Property tests for products, connections, gauge solutions and invariants
//! over seeded random inputs.

use koszul_core::algebra::{associator_defect, commutator_bracket, jacobi_defect, kv_anomaly, killing_form};
use koszul_core::connection::{alpha_connection, amari_dual, curvature, is_locally_flat, torsion};
use koszul_core::gauge::{parallel_forms, phi_split, solve_fe_star, solve_gauge_equation, parallel_defect};
use koszul_core::invariants::{ad_invariance_defect, r_b_defect, s_b, SearchOptions};
use koszul_core::rational::{int, rat};
use koszul_core::{catalog, sample, BilinearForm, InvariantConnection, Symmetry};
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

/// A torsion-free connection on a random Lie algebra of dimension `1..=max`.
fn random_connection(seed: u64, max: usize) -> InvariantConnection {
    let mut rng = sample::rng(seed);
    let l = sample::lie_algebra(&mut rng, 1, max);
    sample::torsion_free_connection(&mut rng, &l)
}

proptest! {
    #![proptest_config(config(120))]

    #[test]
    fn kv_anomaly_is_minus_curvature(seed in any::<u64>()) {
        let nabla = random_connection(seed, 4);
        prop_assert!(torsion(&nabla).is_zero());
        prop_assert_eq!(kv_anomaly(nabla.gamma()), curvature(&nabla).neg());
    }

    #[test]
    fn kv_and_flat_agree_on_products(seed in any::<u64>(), pick_kv in any::<bool>()) {
        let mut rng = sample::rng(seed);
        let p = if pick_kv {
            sample::kv_algebra(&mut rng, 4)
        } else {
            let l = sample::lie_algebra(&mut rng, 1, 4);
            sample::torsion_free_connection(&mut rng, &l).gamma().clone()
        };
        // Every product is a torsion-free connection on its commutator algebra
        // as soon as that commutator is a Lie bracket.
        let is_kv = kv_anomaly(&p).is_zero();
        if is_kv {
            prop_assert!(commutator_bracket(&p).is_ok());
        }
        if let Ok(nabla) = InvariantConnection::from_product(p.clone()) {
            prop_assert!(torsion(&nabla).is_zero());
            prop_assert_eq!(is_kv, is_locally_flat(&nabla).flat);
        }
    }

    #[test]
    fn associative_products_are_kv(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let p = sample::associative_algebra(&mut rng, 4);
        prop_assert!(associator_defect(&p).is_zero());
        prop_assert!(kv_anomaly(&p).is_zero());
    }

    #[test]
    fn killing_form_is_ad_invariant(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let l = sample::lie_algebra(&mut rng, 1, 4);
        let k = killing_form(&l);
        prop_assert!(ad_invariance_defect(&l, k.matrix()).unwrap().is_zero());
    }

    #[test]
    fn amari_dual_satisfies_metric_duality(seed in any::<u64>()) {
        let nabla = random_connection(seed, 4);
        let m = nabla.dim();
        let g = sample::metric(&mut sample::rng(seed ^ 0x5151), m);
        let dual = amari_dual(&nabla, &g).unwrap();
        let e = |i: usize| (0..m).map(|k| if k == i { int(1) } else { int(0) }).collect::<Vec<_>>();
        for x in 0..m {
            for y in 0..m {
                for z in 0..m {
                    let lhs = g.eval(&dual.covariant(&e(x), &e(y)), &e(z)) + g.eval(&e(y), &nabla.covariant(&e(x), &e(z)));
                    prop_assert_eq!(lhs, int(0));
                }
            }
        }
        prop_assert_eq!(amari_dual(&dual, &g).unwrap(), nabla);
    }

    #[test]
    fn alpha_family_is_affine(seed in any::<u64>(), num in -6i64..=6, den in 1i64..=5) {
        let nabla = random_connection(seed, 3);
        let g = sample::metric(&mut sample::rng(seed ^ 7), nabla.dim());
        let dual = amari_dual(&nabla, &g).unwrap();
        let a = rat(num, den);
        let plus = alpha_connection(&nabla, &dual, &a).unwrap();
        let minus = alpha_connection(&nabla, &dual, &-a.clone()).unwrap();
        let zero = alpha_connection(&nabla, &dual, &int(0)).unwrap();
        let sum = plus.gamma().add(minus.gamma()).unwrap();
        prop_assert_eq!(sum, zero.gamma().scale(&int(2)));
    }
}

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn gauge_solutions_match_parallel_forms(seed in any::<u64>()) {
        let nabla = random_connection(seed, 4);
        let m = nabla.dim();
        let g = sample::metric(&mut sample::rng(seed ^ 0xa5a5), m);
        let dual = amari_dual(&nabla, &g).unwrap();
        let solutions = solve_gauge_equation(&nabla, &dual).unwrap();
        let sym = parallel_forms(&nabla, Symmetry::Symmetric);
        let skew = parallel_forms(&nabla, Symmetry::Skew);
        prop_assert_eq!(solutions.dim(), sym.dim() + skew.dim());
        let gm = g.matrix();
        // φ ↦ b = φᵀG is a ∇-parallel form …
        for phi in solutions.matrices() {
            let b = phi.transpose().mul(gm);
            prop_assert!(parallel_defect(&nabla, &b).unwrap().is_zero());
        }
        // … and every parallel form comes from φ = G⁻¹bᵀ.
        let g_inv = gm.inverse().unwrap();
        for b in sym.matrices().into_iter().chain(skew.matrices()) {
            let phi = g_inv.mul(&b.transpose());
            prop_assert!(solutions.contains(phi.as_flat()));
        }
    }

    #[test]
    fn phi_split_is_idempotent(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let m = 1 + (seed % 4) as usize;
        let g = sample::metric(&mut rng, m);
        let phi = sample::matrix(&mut rng, m, 3);
        let split = phi_split(&phi, &g).unwrap();
        prop_assert_eq!(split.phi.add(&split.phi_star), phi);
        let again = phi_split(&split.phi, &g).unwrap();
        prop_assert_eq!(&again.phi, &split.phi);
        prop_assert!(again.phi_star.is_zero());
        let again = phi_split(&split.phi_star, &g).unwrap();
        prop_assert!(again.phi.is_zero());
        prop_assert_eq!(&again.phi_star, &split.phi_star);
        let (q, w) = split.forms(&g).unwrap();
        prop_assert_eq!(q.symmetry(), Symmetry::Symmetric);
        prop_assert_eq!(w.symmetry(), Symmetry::Skew);
    }

    #[test]
    fn fe_star_on_flat_connections(seed in any::<u64>()) {
        let nabla = sample::flat_connection(&mut sample::rng(seed), 3);
        let m = nabla.dim();
        let sol = solve_fe_star(&nabla);
        prop_assert_eq!(sol.space.dim(), m * m + m);
        prop_assert_eq!(sol.r_b, m);
        prop_assert!(sol.steps <= m * m + m);
        prop_assert_eq!(r_b_defect(&nabla), 0);
    }

    #[test]
    fn flatness_iff_zero_r_b_defect(seed in any::<u64>()) {
        let nabla = random_connection(seed, 3);
        prop_assert_eq!(is_locally_flat(&nabla).flat, r_b_defect(&nabla) == 0);
    }
}

#[test]
fn closure_of_gauge_solutions_under_composition() {
    // With ∇ = ∇* flat, M(∇, ∇) is an algebra of endomorphisms.
    for seed in 0..20 {
        let nabla = sample::flat_connection(&mut sample::rng(seed), 3);
        let space = solve_gauge_equation(&nabla, &nabla).unwrap();
        let mats = space.matrices();
        for a in &mats {
            for b in &mats {
                assert!(space.contains(a.mul(b).as_flat()), "seed {seed}");
            }
        }
    }
}

#[test]
fn ricci_constraint_lowers_r_b_on_curved_catalog() {
    for l in [catalog::so3(), catalog::sl2()] {
        let nabla = koszul_core::connection::cartan_connection(&l, koszul_core::connection::CartanKind::Zero);
        assert!(!is_locally_flat(&nabla).flat);
        assert!(solve_fe_star(&nabla).r_b < l.dim());
    }
}

#[test]
fn s_b_does_not_depend_on_the_auxiliary_metric() {
    let opts = SearchOptions::default();
    for (name, l) in catalog::named_lie_algebras().into_iter().filter(|(_, l)| l.dim() <= 4) {
        let mut values = Vec::new();
        for seed in 0..5 {
            let g = sample::metric(&mut sample::rng(seed), l.dim());
            values.push(s_b(&l, &g, false, &opts).unwrap().value);
        }
        values.push(s_b(&l, &BilinearForm::identity(l.dim()), false, &opts).unwrap().value);
        assert!(values.windows(2).all(|w| w[0] == w[1]), "{name}: {values:?}");
    }
}

#[test]
fn jacobi_defect_flags_a_bad_table() {
    // [e0,e1] = e1, [e1,e2] = e0: Jacobi fails on (0,1,2).
    let mut c = vec![int(0); 27];
    let at = |i: usize, j: usize, k: usize| (i * 3 + j) * 3 + k;
    c[at(0, 1, 1)] = int(1);
    c[at(1, 0, 1)] = int(-1);
    c[at(1, 2, 0)] = int(1);
    c[at(2, 1, 0)] = int(-1);
    assert!(!jacobi_defect(3, &c).unwrap().is_zero());
}
