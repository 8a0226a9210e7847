//! Named built-in algebras, products and symbols used by tests, reports and
//! the command line.

use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{BilinearProduct, LieAlgebra};
use crate::rational::{int, Rational};

fn lie(dim: usize, entries: &[(usize, usize, usize, i64)]) -> LieAlgebra {
    let e: Vec<(usize, usize, usize, Rational)> = entries.iter().map(|&(i, j, k, v)| (i, j, k, int(v))).collect();
    LieAlgebra::from_sparse(dim, &e).expect("catalog algebra is a Lie algebra")
}

fn product(dim: usize, entries: &[(usize, usize, usize, i64)]) -> BilinearProduct {
    let e: Vec<(usize, usize, usize, Rational)> = entries.iter().map(|&(i, j, k, v)| (i, j, k, int(v))).collect();
    BilinearProduct::from_sparse(dim, &e).expect("catalog product is well formed")
}

pub fn abelian(m: usize) -> LieAlgebra {
    LieAlgebra::abelian(m)
}

/// `[x, y] = z` on `(x, y, z) = (e0, e1, e2)`.
pub fn heisenberg() -> LieAlgebra {
    lie(3, &[(0, 1, 2, 1)])
}

/// The left-symmetric product `x · y = z`, all other basis products zero.
pub fn heisenberg_kv() -> BilinearProduct {
    product(3, &[(0, 1, 2, 1)])
}

/// `[e0, e1] = e2` and cyclic.
pub fn so3() -> LieAlgebra {
    lie(3, &[(0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, 1)])
}

/// Basis `(h, e, f)`: `[h, e] = 2e`, `[h, f] = −2f`, `[e, f] = h`.
pub fn sl2() -> LieAlgebra {
    lie(3, &[(0, 1, 1, 2), (0, 2, 2, -2), (1, 2, 0, 1)])
}

/// The non-abelian 2-dimensional algebra `[x, y] = y`.
pub fn aff1() -> LieAlgebra {
    lie(2, &[(0, 1, 1, 1)])
}

/// A left-symmetric product on `aff1`: `x · y = y`, other products zero.
pub fn aff1_kv() -> BilinearProduct {
    product(2, &[(0, 1, 1, 1)])
}

/// Full matrix algebra `M_n`, basis `e_{ab}` at index `a*n + b`,
/// `e_{ab} e_{cd} = δ_{bc} e_{ad}`.
pub fn matrix_algebra(n: usize) -> BilinearProduct {
    let m = n * n;
    BilinearProduct::from_fn(m, |i, j, k| {
        let (a, b) = (i / n, i % n);
        let (c, d) = (j / n, j % n);
        if b == c && k == a * n + d {
            int(1)
        } else {
            int(0)
        }
    })
}

/// The 1-dimensional unital algebra `x · x = x`.
pub fn unital_line() -> BilinearProduct {
    product(1, &[(0, 0, 0, 1)])
}

/// The affine algebra of the flat model; see [`crate::flat_models::affine_algebra`].
pub fn affine_algebra(m: usize) -> BilinearProduct {
    crate::flat_models::affine_algebra(m).product().clone()
}

/// Names accepted by [`lie_algebra`].
pub const LIE_NAMES: &[&str] = &["abelian:N", "heisenberg", "so3", "sl2", "aff1", "affine:N", "gl:N"];

/// Names accepted by [`kv_product`].
pub const PRODUCT_NAMES: &[&str] = &["zero:N", "heisenberg", "aff1", "affine:N", "matrix:N", "unital-line"];

fn parse_param(name: &str, prefix: &str) -> Option<usize> {
    name.strip_prefix(prefix)?.strip_prefix(':')?.parse().ok()
}

/// Looks up a Lie algebra by catalog name (`abelian:4`, `so3`, ...).
/// `affine:N` and `gl:N` are commutator algebras of `affine_algebra(N)` and
/// `matrix_algebra(N)`.
pub fn lie_algebra(name: &str) -> Option<LieAlgebra> {
    Some(match name {
        "heisenberg" => heisenberg(),
        "so3" => so3(),
        "sl2" => sl2(),
        "aff1" => aff1(),
        "unital-line" => abelian(1),
        _ => {
            if let Some(m) = parse_param(name, "abelian") {
                abelian(m)
            } else if let Some(m) = parse_param(name, "affine") {
                crate::algebra::commutator_bracket(&affine_algebra(m)).ok()?
            } else if let Some(m) = parse_param(name, "gl").or_else(|| parse_param(name, "matrix")) {
                crate::algebra::commutator_bracket(&matrix_algebra(m)).ok()?
            } else {
                let m = parse_param(name, "zero")?;
                abelian(m)
            }
        }
    })
}

/// Canonical bilinear product attached to a catalog name, if it has one.
pub fn kv_product(name: &str) -> Option<BilinearProduct> {
    Some(match name {
        "heisenberg" => heisenberg_kv(),
        "aff1" => aff1_kv(),
        "unital-line" => unital_line(),
        _ => {
            if let Some(m) = parse_param(name, "zero").or_else(|| parse_param(name, "abelian")) {
                BilinearProduct::zero(m)
            } else if let Some(m) = parse_param(name, "affine") {
                affine_algebra(m)
            } else {
                let m = parse_param(name, "matrix").or_else(|| parse_param(name, "gl"))?;
                matrix_algebra(m)
            }
        }
    })
}

/// The catalog Lie algebras with fixed size, for sweeping tests.
pub fn named_lie_algebras() -> Vec<(&'static str, LieAlgebra)> {
    vec![
        ("abelian:1", abelian(1)),
        ("abelian:2", abelian(2)),
        ("abelian:3", abelian(3)),
        ("heisenberg", heisenberg()),
        ("so3", so3()),
        ("sl2", sl2()),
        ("aff1", aff1()),
    ]
}

/// Catalog KV products paired with their commutator algebras.
pub fn named_kv_products() -> Vec<(&'static str, BilinearProduct)> {
    vec![
        ("zero:1", BilinearProduct::zero(1)),
        ("zero:2", BilinearProduct::zero(2)),
        ("zero:3", BilinearProduct::zero(3)),
        ("heisenberg", heisenberg_kv()),
        ("aff1", aff1_kv()),
        ("affine:1", affine_algebra(1)),
        ("unital-line", unital_line()),
    ]
}
