//! Symbols `a ⊆ Hom(V, W)`: prolongations, Cartan's test with a search for
//! quasi-regular bases, the Spencer complex `Λ^p V* ⊗ a^{(q)}`, and the
//! involutivity verdict that compares the two routes.
//!
//! Elements of `Hom(V, W)` are flat arrays with `element[i*w + r]` the
//! `e_r`-component of `A e_i`. The `q`-th prolongation `a^{(q)}` lives in
//! `S^{q+1}V* ⊗ W` and is stored on sorted multi-indices (`a^{(0)} = a`,
//! `a^{(−1)} = W`).

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::cohomology::subsets;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::{int, Rational};
use crate::sample;

/// A linear subspace of `Hom(V, W)` with an independent basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolSpace {
    v: usize,
    w: usize,
    basis: Vec<Vec<Rational>>,
}

impl SymbolSpace {
    /// The span of `elements` (reduced to a basis).
    pub fn new(v: usize, w: usize, elements: &[Vec<Rational>]) -> Result<Self> {
        for e in elements {
            Error::check_dim(v * w, e.len())?;
        }
        Ok(SymbolSpace { v, w, basis: linalg::span_basis(v * w, elements) })
    }

    /// From `w × v` matrices (row `r`, column `i` = component `r` of `A e_i`).
    pub fn from_matrices(v: usize, w: usize, matrices: &[Matrix]) -> Result<Self> {
        let mut elements = Vec::new();
        for a in matrices {
            Error::check_dim(w, a.rows())?;
            Error::check_dim(v, a.cols())?;
            let mut e = alloc::vec![Rational::zero(); v * w];
            for i in 0..v {
                for r in 0..w {
                    e[i * w + r] = a[(r, i)].clone();
                }
            }
            elements.push(e);
        }
        SymbolSpace::new(v, w, &elements)
    }

    pub fn to_matrices(&self) -> Vec<Matrix> {
        self.basis
            .iter()
            .map(|e| Matrix::from_fn(self.w, self.v, |r, i| e[i * self.w + r].clone()))
            .collect()
    }

    pub fn full(v: usize, w: usize) -> Self {
        SymbolSpace { v, w, basis: linalg::identity_basis(v * w) }
    }

    pub fn zero(v: usize, w: usize) -> Self {
        SymbolSpace { v, w, basis: Vec::new() }
    }

    /// Skew-symmetric `n × n` matrices.
    pub fn orthogonal(n: usize) -> Self {
        let mut mats = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let mut m = Matrix::zeros(n, n).into_flat();
                m[a * n + b] = int(1);
                m[b * n + a] = int(-1);
                mats.push(Matrix::from_flat(n, n, m));
            }
        }
        SymbolSpace::from_matrices(n, n, &mats).expect("square")
    }

    /// Diagonal `n × n` matrices.
    pub fn diagonal(n: usize) -> Self {
        let mats: Vec<Matrix> = (0..n)
            .map(|a| Matrix::from_fn(n, n, |r, c| if r == a && c == a { int(1) } else { int(0) }))
            .collect();
        SymbolSpace::from_matrices(n, n, &mats).expect("square")
    }

    /// The Cauchy–Riemann symbol `{[[a, −b], [b, a]]}`.
    pub fn cauchy_riemann() -> Self {
        let id = Matrix::identity(2);
        let j = Matrix::from_flat(2, 2, alloc::vec![int(0), int(-1), int(1), int(0)]);
        SymbolSpace::from_matrices(2, 2, &[id, j]).expect("square")
    }

    pub fn v_dim(&self) -> usize {
        self.v
    }

    pub fn w_dim(&self) -> usize {
        self.w
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn contains(&self, element: &[Rational]) -> bool {
        linalg::contains(self.v * self.w, &self.basis, element)
    }
}

/// Names accepted by [`catalog_symbol`].
pub const SYMBOL_NAMES: &[&str] =
    &["hom:V:W", "zero:V:W", "so:N", "diag:N", "cauchy-riemann", "symbol-of-fe-star:N"];

/// Named symbols. `symbol-of-fe-star:N` is the (zero) second-order symbol of
/// the equation `∂²X^k/∂x_i∂x_j = 0` governing the prolonged gauge system:
/// finite type, trivially involutive.
pub fn catalog_symbol(name: &str) -> Option<SymbolSpace> {
    let parts: Vec<&str> = name.split(':').collect();
    let num = |s: &str| s.parse::<usize>().ok();
    Some(match parts.as_slice() {
        ["hom", v, w] => SymbolSpace::full(num(v)?, num(w)?),
        ["zero", v, w] => SymbolSpace::zero(num(v)?, num(w)?),
        ["so", n] => SymbolSpace::orthogonal(num(n)?),
        ["so3"] => SymbolSpace::orthogonal(3),
        ["diag", n] => SymbolSpace::diagonal(num(n)?),
        ["cauchy-riemann"] => SymbolSpace::cauchy_riemann(),
        ["symbol-of-fe-star", n] => SymbolSpace::zero(num(n)?, num(n)?),
        _ => return None,
    })
}

/// Sorted multi-indices of length `k` over `0..m`.
fn multisets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, k, &mut Vec::new(), &mut out);
    out
}

/// `a^{(q)} ⊆ S^{q+1}V* ⊗ W`, coordinates `(multi-index, r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prolongation {
    pub q: isize,
    v: usize,
    w: usize,
    multis: Vec<Vec<usize>>,
    index: BTreeMap<Vec<usize>, usize>,
    basis: Vec<Vec<Rational>>,
}

impl Prolongation {
    fn with_basis(q: isize, v: usize, w: usize, basis: Vec<Vec<Rational>>) -> Self {
        let multis = multisets(v, (q + 1) as usize);
        let index = multis.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        Prolongation { q, v, w, multis, index, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Length of the coordinate arrays.
    pub fn ambient_len(&self) -> usize {
        self.multis.len() * self.w
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    fn coord(&self, indices: &[usize], r: usize) -> usize {
        let mut key = indices.to_vec();
        key.sort_unstable();
        self.index[&key] * self.w + r
    }

    /// Basis elements as full tensors `T(i_1, …, i_{q+1}, r)`, flattened with
    /// the `V` indices in base `v` and `r` last.
    pub fn full_tensors(&self) -> Vec<Vec<Rational>> {
        let k = (self.q + 1) as usize;
        let total = self.v.pow(k as u32);
        self.basis
            .iter()
            .map(|b| {
                let mut out = Vec::with_capacity(total * self.w);
                for code in 0..total {
                    let mut idx = alloc::vec![0; k];
                    let mut c = code;
                    for slot in (0..k).rev() {
                        idx[slot] = c % self.v;
                        c /= self.v;
                    }
                    for r in 0..self.w {
                        out.push(b[self.coord(&idx, r)].clone());
                    }
                }
                out
            })
            .collect()
    }

    /// `self ⊆ other` (same level and shape).
    pub fn is_subspace_of(&self, other: &Prolongation) -> bool {
        self.q == other.q
            && self.v == other.v
            && self.w == other.w
            && self.basis.iter().all(|b| linalg::contains(self.ambient_len(), &other.basis, b))
    }
}

/// `a^{(q)}` for `q ≥ −1`: symmetric tensors all of whose slices
/// `j ↦ T(J, j, ·)` lie in `a`.
pub fn prolongation(a: &SymbolSpace, q: isize) -> Prolongation {
    let (v, w) = (a.v, a.w);
    assert!(q >= -1, "prolongation order below −1");
    if q == -1 {
        return Prolongation::with_basis(-1, v, w, linalg::identity_basis(w));
    }
    if q == 0 {
        return Prolongation::with_basis(0, v, w, a.basis.clone());
    }
    let shell = Prolongation::with_basis(q, v, w, Vec::new());
    let n = shell.ambient_len();
    let ann = linalg::annihilator(v * w, &a.basis);
    let mut rows = Vec::new();
    for j_multi in multisets(v, q as usize) {
        for y in &ann {
            let mut row = alloc::vec![Rational::zero(); n];
            for j in 0..v {
                let mut idx = j_multi.clone();
                idx.push(j);
                for r in 0..w {
                    let c = &y[j * w + r];
                    if !c.is_zero() {
                        row[shell.coord(&idx, r)] += c;
                    }
                }
            }
            if !linalg::is_zero_vec(&row) {
                rows.push(row);
            }
        }
    }
    let basis = if rows.is_empty() { linalg::identity_basis(n) } else { Matrix::from_rows(n, &rows).nullspace() };
    Prolongation::with_basis(q, v, w, basis)
}

/// The first prolongation `a^{(1)} = Hom(V, a) ∩ Hom(S²V, W)`.
pub fn prolong(a: &SymbolSpace) -> Prolongation {
    prolongation(a, 1)
}

/// `a_j = {A ∈ a : A v_i = 0, i ≤ j}` for the columns `v_1, …, v_m` of
/// `basis`, `j = 0..=m`.
pub fn flag_dims(a: &SymbolSpace, basis: &Matrix) -> Vec<usize> {
    let (v, w) = (a.v, a.w);
    let d = a.dim();
    let mut out = alloc::vec![d];
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for j in 0..v {
        let col = basis.column(j);
        // Coefficients c with Σ_s c_s A_s v_j = 0.
        for r in 0..w {
            let row: Vec<Rational> = a
                .basis
                .iter()
                .map(|e| (0..v).fold(Rational::zero(), |acc, i| acc + &col[i] * &e[i * w + r]))
                .collect();
            if !linalg::is_zero_vec(&row) {
                rows.push(row);
            }
        }
        let dim = if d == 0 { 0 } else if rows.is_empty() { d } else { Matrix::from_rows(d, &rows).nullspace().len() };
        out.push(dim);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanTest {
    pub prolongation_dim: usize,
    pub flag_sum: usize,
    pub quasi_regular: bool,
}

/// Cartan's inequality `dim a^{(1)} ≤ Σ_j dim a_j` for the given ordering of
/// `V`; equality means the basis is quasi-regular.
pub fn cartan_test(a: &SymbolSpace, basis: &Matrix) -> Result<CartanTest> {
    Error::check_dim(a.v, basis.rows())?;
    Error::check_dim(a.v, basis.cols())?;
    if basis.rank() < a.v {
        return Err(Error::Invalid("basis does not span V".into()));
    }
    let prolongation_dim = prolong(a).dim();
    Ok(cartan_test_with(a, basis, prolongation_dim))
}

fn cartan_test_with(a: &SymbolSpace, basis: &Matrix, prolongation_dim: usize) -> CartanTest {
    let flag_sum = flag_dims(a, basis).iter().sum();
    assert!(prolongation_dim <= flag_sum, "Cartan's inequality violated");
    CartanTest { prolongation_dim, flag_sum, quasi_regular: prolongation_dim == flag_sum }
}

pub const DEFAULT_TRIALS: usize = 64;

/// A quasi-regular basis: the standard basis, then `trials` random integer
/// changes of basis with entries in `[−5, 5]`. Returns the basis and the
/// trial that found it (0 for the standard basis).
pub fn find_quasi_regular_basis(a: &SymbolSpace, trials: usize, seed: u64) -> Option<(Matrix, usize)> {
    let pd = prolong(a).dim();
    let standard = Matrix::identity(a.v);
    if cartan_test_with(a, &standard, pd).quasi_regular {
        return Some((standard, 0));
    }
    let mut rng = sample::rng(seed);
    for t in 1..=trials {
        let p = sample::invertible_matrix(&mut rng, a.v, 5);
        if cartan_test_with(a, &p, pd).quasi_regular {
            return Some((p, t));
        }
    }
    None
}

/// Coordinates on `Λ^p V* ⊗ S^k V* ⊗ W`: `(subset, multi-index, r)`.
struct Grading {
    subsets: Vec<Vec<usize>>,
    multis: Vec<Vec<usize>>,
    multi_index: BTreeMap<Vec<usize>, usize>,
    w: usize,
}

impl Grading {
    fn new(v: usize, w: usize, p: usize, k: usize) -> Self {
        let multis = multisets(v, k);
        let multi_index = multis.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Grading { subsets: subsets(v, p), multis, multi_index, w }
    }

    fn len(&self) -> usize {
        self.subsets.len() * self.multis.len() * self.w
    }

    fn at(&self, s: usize, mi: usize, r: usize) -> usize {
        (s * self.multis.len() + mi) * self.w + r
    }
}

/// Spencer differential `Λ^p ⊗ S^k ⊗ W → Λ^{p+1} ⊗ S^{k−1} ⊗ W`,
/// `dω(T; J, r) = Σ_j (−1)^j ω(T ∖ t_j; t_j J, r)`.
fn spencer_d(v: usize, w: usize, p: usize, k: usize, omega: &[Rational]) -> Vec<Rational> {
    let src = Grading::new(v, w, p, k);
    let dst = Grading::new(v, w, p + 1, k - 1);
    let dst_index: BTreeMap<Vec<usize>, usize> = dst.subsets.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let mut out = alloc::vec![Rational::zero(); dst.len()];
    for (si, s) in src.subsets.iter().enumerate() {
        for t in 0..v {
            if s.contains(&t) {
                continue;
            }
            let mut tset = s.clone();
            tset.push(t);
            tset.sort_unstable();
            let pos = tset.iter().position(|&x| x == t).expect("inserted");
            let sign = if pos % 2 == 0 { int(1) } else { int(-1) };
            let ti = dst_index[&tset];
            for (ji, j) in dst.multis.iter().enumerate() {
                let mut full = j.clone();
                full.push(t);
                full.sort_unstable();
                let mi = src.multi_index[&full];
                for r in 0..w {
                    let val = &omega[src.at(si, mi, r)];
                    if !val.is_zero() {
                        out[dst.at(ti, ji, r)] += &sign * val;
                    }
                }
            }
        }
    }
    out
}

/// Basis of `C^{p,q} = Λ^p V* ⊗ a^{(q)}` in `(subset, multi-index, r)` coordinates.
fn cochain_basis(pr: &Prolongation, p: usize) -> Vec<Vec<Rational>> {
    let g = Grading::new(pr.v, pr.w, p, (pr.q + 1) as usize);
    let mut out = Vec::new();
    for s in 0..g.subsets.len() {
        for b in &pr.basis {
            let mut vec = alloc::vec![Rational::zero(); g.len()];
            for mi in 0..g.multis.len() {
                for r in 0..pr.w {
                    vec[g.at(s, mi, r)] = b[mi * pr.w + r].clone();
                }
            }
            out.push(vec);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpencerCell {
    pub p: usize,
    pub q: usize,
    pub cochain_dim: usize,
    pub cohomology: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpencerReport {
    /// `dim a^{(q)}` for `q = 0..=MAX_Q + 1`.
    pub prolongation_dims: Vec<usize>,
    pub cells: Vec<SpencerCell>,
    pub d_squared_zero: bool,
}

impl SpencerReport {
    pub fn first_nonzero(&self) -> Option<&SpencerCell> {
        self.cells.iter().find(|c| c.cohomology != 0)
    }

    pub fn vanishes(&self) -> bool {
        self.first_nonzero().is_none()
    }
}

pub const MAX_P: usize = 3;
pub const MAX_Q: usize = 2;

/// `H^{p,q}(a)` for `1 ≤ p ≤ 3`, `0 ≤ q ≤ 2`, with `d: C^{p,q} → C^{p+1,q−1}`
/// and `H^{p,q} = dim C^{p,q} − rank d_{p,q} − rank d_{p−1,q+1}`.
pub fn spencer_cohomology(a: &SymbolSpace) -> SpencerReport {
    let (v, w) = (a.v, a.w);
    let pros: Vec<Prolongation> = (0..=(MAX_Q as isize + 1)).map(|q| prolongation(a, q)).collect();
    // rank of d_{p,q} and the images themselves (for the d² check)
    let mut ranks: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut d_squared_zero = true;
    for p in 0..=MAX_P {
        for q in 0..=MAX_Q + 1 {
            let basis = cochain_basis(&pros[q], p);
            let k = q + 1;
            let images: Vec<Vec<Rational>> = basis.iter().map(|c| spencer_d(v, w, p, k, c)).collect();
            let target_len = Grading::new(v, w, p + 1, k - 1).len();
            ranks.insert((p, q), linalg::rank_of(target_len, &images));
            if k >= 2 && p < MAX_P {
                for img in &images {
                    if !linalg::is_zero_vec(&spencer_d(v, w, p + 1, k - 1, img)) {
                        d_squared_zero = false;
                    }
                }
            }
        }
    }
    let mut cells = Vec::new();
    for p in 1..=MAX_P {
        for q in 0..=MAX_Q {
            let cochain_dim = subsets(v, p).len() * pros[q].dim();
            let out = ranks[&(p, q)];
            let incoming = ranks[&(p - 1, q + 1)];
            cells.push(SpencerCell { p, q, cochain_dim, cohomology: cochain_dim - out - incoming });
        }
    }
    SpencerReport { prolongation_dims: pros.iter().map(Prolongation::dim).collect(), cells, d_squared_zero }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Involutivity {
    /// A quasi-regular basis exists and the cohomology window vanishes.
    Yes { basis: Matrix, trial: usize },
    /// No quasi-regular basis was found and `H^{p,q} ≠ 0` in the window.
    No { witness: SpencerCell },
    /// No basis found but the window vanishes; the window is not a proof.
    Unknown,
}

pub const MAX_INVOLUTIVITY_DIM: usize = 4;

/// Runs both routes of Serre's criterion and insists they agree.
pub fn is_involutive(a: &SymbolSpace, trials: usize, seed: u64) -> Result<(Involutivity, SpencerReport)> {
    if a.v > MAX_INVOLUTIVITY_DIM || a.w > MAX_INVOLUTIVITY_DIM {
        return Err(Error::Invalid("involutivity check supports dim V, dim W ≤ 4".into()));
    }
    let report = spencer_cohomology(a);
    if !report.d_squared_zero {
        return Err(Error::ConformanceMismatch("Spencer differential does not square to zero".into()));
    }
    let basis = find_quasi_regular_basis(a, trials, seed);
    let verdict = match (basis, report.first_nonzero()) {
        (Some((basis, trial)), None) => Involutivity::Yes { basis, trial },
        (None, Some(cell)) => Involutivity::No { witness: cell.clone() },
        (None, None) => Involutivity::Unknown,
        (Some((_, trial)), Some(cell)) => {
            let mut msg = String::from("quasi-regular basis found at trial ");
            msg.push_str(&alloc::format!("{trial}, but H^({},{}) has dimension {}", cell.p, cell.q, cell.cohomology));
            return Err(Error::ConformanceMismatch(msg));
        }
    };
    Ok((verdict, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::DEFAULT_SEED;

    #[test]
    fn prolongation_examples() {
        assert_eq!(prolong(&SymbolSpace::full(2, 3)).dim(), 9);
        assert_eq!(prolong(&SymbolSpace::zero(2, 3)).dim(), 0);
        assert_eq!(prolong(&SymbolSpace::orthogonal(3)).dim(), 0);
        assert_eq!(prolongation(&SymbolSpace::full(2, 1), 2).dim(), 4);
        assert_eq!(prolong(&SymbolSpace::diagonal(2)).dim(), 2);
    }

    #[test]
    fn cartan_examples() {
        let id2 = Matrix::identity(2);
        let t = cartan_test(&SymbolSpace::full(2, 3), &id2).unwrap();
        assert_eq!((t.prolongation_dim, t.flag_sum, t.quasi_regular), (9, 9, true));
        let so3 = SymbolSpace::orthogonal(3);
        assert_eq!(flag_dims(&so3, &Matrix::identity(3)), alloc::vec![3, 1, 0, 0]);
        let t = cartan_test(&so3, &Matrix::identity(3)).unwrap();
        assert_eq!((t.prolongation_dim, t.flag_sum, t.quasi_regular), (0, 4, false));
        let t = cartan_test(&SymbolSpace::zero(2, 2), &id2).unwrap();
        assert_eq!((t.prolongation_dim, t.flag_sum, t.quasi_regular), (0, 0, true));
    }

    #[test]
    fn quasi_regular_search() {
        assert_eq!(find_quasi_regular_basis(&SymbolSpace::full(2, 2), 4, DEFAULT_SEED).unwrap().1, 0);
        assert!(find_quasi_regular_basis(&SymbolSpace::orthogonal(3), 20, DEFAULT_SEED).is_none());
        assert!(find_quasi_regular_basis(&SymbolSpace::diagonal(2), 20, DEFAULT_SEED).is_some());
    }

    #[test]
    fn serre_agreement_on_small_catalog() {
        for name in ["hom:2:2", "zero:2:2", "diag:2", "cauchy-riemann", "so:2"] {
            let a = catalog_symbol(name).unwrap();
            let (verdict, report) = is_involutive(&a, 32, DEFAULT_SEED).unwrap();
            assert!(report.d_squared_zero);
            let expect_yes = name != "so:2";
            assert_eq!(matches!(verdict, Involutivity::Yes { .. }), expect_yes, "{name}");
        }
    }
}
