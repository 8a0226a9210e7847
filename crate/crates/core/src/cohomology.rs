//! Cochain complexes of finite-dimensional algebras and their cohomology
//! dimensions: the KV complex of a left-symmetric algebra (with adjoint or
//! trivial scalar coefficients), the Chevalley–Eilenberg complex of a Lie
//! algebra, the Hochschild complex of an associative algebra in low degree,
//! and the Maurer–Cartan identity for deformations of a Lie bracket.
//!
//! KV coboundary, for `ξ = (X_1, …, X_{q+1})`:
//!
//! ```text
//! δf(ξ) = Σ_{i=1}^{q} (−1)^i [ X_i·f(∂_iξ) + f(X_1, …, X̂_i, …, X_q, X_i)·X_{q+1} − f(X_i.∂_iξ) ]
//! ```
//!
//! where `∂_iξ` drops `X_i` and `X_i.∂_iξ` lets `X_i` act by left
//! multiplication as a derivation on each remaining argument. With scalar
//! coefficients the two module terms vanish. In degree 0 the adjoint complex
//! starts at `J = {ξ : (X, Y, ξ) = 0}` with `δξ(X) = −X·ξ + ξ·X`, which is
//! what makes `δ ∘ δ = 0` from degree 0; the scalar complex uses the rule
//! `δf = −f`, so `H⁰ = 0` and nothing from degree 0 reaches `C¹`.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::algebra::{BilinearProduct, LieAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::{int, Rational};
use crate::tensor::DefectTensor;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KvCoefficients {
    /// The algebra acting on itself.
    Adjoint,
    /// Trivial action on the scalars.
    Scalar,
}

impl KvCoefficients {
    pub fn name(self) -> &'static str {
        match self {
            KvCoefficients::Adjoint => "adjoint",
            KvCoefficients::Scalar => "scalar",
        }
    }
}

/// A `q`-linear map `𝒜^{⊗q} → module`, stored as
/// `data[(i_1 … i_q) in base m, then module index]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    degree: usize,
    dim: usize,
    module_dim: usize,
    data: Vec<Rational>,
}

impl Cochain {
    pub fn zeros(degree: usize, dim: usize, module_dim: usize) -> Self {
        let len = dim.pow(degree as u32) * module_dim;
        Cochain { degree, dim, module_dim, data: alloc::vec![Rational::zero(); len] }
    }

    pub fn from_flat(degree: usize, dim: usize, module_dim: usize, data: Vec<Rational>) -> Result<Self> {
        Error::check_dim(dim.pow(degree as u32) * module_dim, data.len())?;
        Ok(Cochain { degree, dim, module_dim, data })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn module_dim(&self) -> usize {
        self.module_dim
    }

    pub fn as_flat(&self) -> &[Rational] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        linalg::is_zero_vec(&self.data)
    }

    fn offset(&self, args: &[usize]) -> usize {
        args.iter().fold(0, |acc, &a| acc * self.dim + a) * self.module_dim
    }

    /// Value on basis arguments, a module vector.
    pub fn get(&self, args: &[usize]) -> &[Rational] {
        let o = self.offset(args);
        &self.data[o..o + self.module_dim]
    }

    pub fn get_mut(&mut self, args: &[usize]) -> &mut [Rational] {
        let o = self.offset(args);
        &mut self.data[o..o + self.module_dim]
    }
}

fn decode(mut code: usize, m: usize, len: usize) -> Vec<usize> {
    let mut out = alloc::vec![0; len];
    for slot in (0..len).rev() {
        out[slot] = code % m;
        code /= m;
    }
    out
}

fn add_scaled(acc: &mut [Rational], v: &[Rational], s: &Rational) {
    if s.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += s * x;
        }
    }
}

/// `J = {ξ : (X, Y, ξ) = 0 for all X, Y}`, the degree-0 adjoint cochains.
pub fn kv_degree_zero_space(p: &BilinearProduct) -> Vec<Vec<Rational>> {
    let m = p.dim();
    let mut rows = Vec::new();
    for x in 0..m {
        for y in 0..m {
            // (x·y)·ξ − x·(y·ξ) as a matrix in ξ: L_{x·y} − L_x L_y.
            let xy = p.product_basis(x, y);
            let mut op = Matrix::zeros(m, m);
            for (k, c) in xy.iter().enumerate() {
                if !c.is_zero() {
                    op = op.add(&p.left(k).scale(c));
                }
            }
            op = op.sub(&p.left(x).mul(&p.left(y)));
            for r in 0..m {
                if !linalg::is_zero_vec(op.row(r)) {
                    rows.push(op.row(r).to_vec());
                }
            }
        }
    }
    if rows.is_empty() {
        return linalg::identity_basis(m);
    }
    Matrix::from_rows(m, &rows).nullspace()
}

fn kv_apply(p: &BilinearProduct, coeffs: KvCoefficients, f: &Cochain) -> Cochain {
    let m = p.dim();
    let q = f.degree;
    let md = f.module_dim;
    let mut out = Cochain::zeros(q + 1, m, md);
    if q == 0 {
        // δξ(X) = −X·ξ + ξ·X (adjoint); scalar degree 0 maps nothing to C¹.
        if coeffs == KvCoefficients::Adjoint {
            let xi = f.get(&[]).to_vec();
            for x in 0..m {
                let e = crate::algebra::basis_vector(m, x);
                let left = p.product(&e, &xi);
                let right = p.product(&xi, &e);
                let slot = out.get_mut(&[x]);
                for k in 0..m {
                    slot[k] = &right[k] - &left[k];
                }
            }
        }
        return out;
    }
    let total = m.pow(q as u32 + 1);
    let mut acc = alloc::vec![Rational::zero(); md];
    let mut args = Vec::with_capacity(q + 1);
    for code in 0..total {
        let xi = decode(code, m, q + 1);
        for a in acc.iter_mut() {
            a.set_zero();
        }
        for i in 0..q {
            let sign = if (i + 1) % 2 == 0 { int(1) } else { int(-1) };
            let xi_i = xi[i];
            // ∂_iξ
            args.clear();
            args.extend(xi.iter().enumerate().filter(|&(s, _)| s != i).map(|(_, &v)| v));
            if coeffs == KvCoefficients::Adjoint {
                // X_i · f(∂_iξ)
                let v = f.get(&args).to_vec();
                let e = crate::algebra::basis_vector(m, xi_i);
                add_scaled(&mut acc, &p.product(&e, &v), &sign);
                // f(X_1..X̂_i..X_q, X_i) · X_{q+1}
                let mut second: Vec<usize> = xi[..q].iter().enumerate().filter(|&(s, _)| s != i).map(|(_, &v)| v).collect();
                second.push(xi_i);
                let w = f.get(&second).to_vec();
                let e_last = crate::algebra::basis_vector(m, xi[q]);
                add_scaled(&mut acc, &p.product(&w, &e_last), &sign);
            }
            // −f(X_i.∂_iξ): X_i acts on every remaining slot.
            for slot in 0..q {
                let original = args[slot];
                for k in 0..m {
                    let g = p.gamma(xi_i, original, k);
                    if g.is_zero() {
                        continue;
                    }
                    args[slot] = k;
                    let s = -(&sign * g);
                    add_scaled(&mut acc, f.get(&args), &s);
                }
                args[slot] = original;
            }
        }
        out.get_mut(&xi).clone_from_slice(&acc);
    }
    out
}

fn module_dim(p: &BilinearProduct, coeffs: KvCoefficients) -> usize {
    match coeffs {
        KvCoefficients::Adjoint => p.dim(),
        KvCoefficients::Scalar => 1,
    }
}

pub const MAX_KV_DEGREE: usize = 4;

/// The KV coboundary of `c`; requires a KV (left-symmetric) product.
pub fn kv_coboundary(c: &Cochain, p: &BilinearProduct, coeffs: KvCoefficients) -> Result<Cochain> {
    if !p.is_kv() {
        return Err(Error::NotKV);
    }
    Error::check_dim(p.dim(), c.dim)?;
    Error::check_dim(module_dim(p, coeffs), c.module_dim)?;
    if c.degree > MAX_KV_DEGREE {
        return Err(Error::Invalid("cochain degree above the supported range".into()));
    }
    if c.degree == 0 && coeffs == KvCoefficients::Adjoint {
        let j = kv_degree_zero_space(p);
        if !linalg::contains(p.dim(), &j, c.get(&[])) {
            return Err(Error::Invalid("degree-0 cochain lies outside J".into()));
        }
    }
    Ok(kv_apply(p, coeffs, c))
}

/// Per-degree dimensions of a cochain complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyReport {
    pub complex: &'static str,
    pub cochains: Vec<usize>,
    /// `dim ker δ_q`.
    pub kernels: Vec<usize>,
    /// `dim im δ_{q−1}` inside `C^q`.
    pub images: Vec<usize>,
    pub cohomology: Vec<usize>,
}

impl CohomologyReport {
    /// Assembles the report from `dim C^q` and `rank δ_q` for `q ≤ max`.
    fn from_ranks(complex: &'static str, cochains: Vec<usize>, ranks: Vec<usize>, images_override0: Option<usize>) -> Self {
        let n = cochains.len();
        let kernels: Vec<usize> = (0..n).map(|q| cochains[q] - ranks[q]).collect();
        let images: Vec<usize> = (0..n)
            .map(|q| match q {
                0 => 0,
                1 => images_override0.unwrap_or(ranks[0]),
                _ => ranks[q - 1],
            })
            .collect();
        let cohomology = (0..n).map(|q| kernels[q] - images[q]).collect();
        CohomologyReport { complex, cochains, kernels, images, cohomology }
    }
}

/// Rank of `δ` on `C^q` for the KV complex (restricted to `J` in degree 0).
fn kv_rank(p: &BilinearProduct, coeffs: KvCoefficients, q: usize) -> (usize, usize) {
    let m = p.dim();
    let md = module_dim(p, coeffs);
    if q == 0 {
        return match coeffs {
            KvCoefficients::Adjoint => {
                let j = kv_degree_zero_space(p);
                let images: Vec<Vec<Rational>> = j
                    .iter()
                    .map(|xi| {
                        let c = Cochain::from_flat(0, m, md, xi.clone()).expect("shape");
                        kv_apply(p, coeffs, &c).data
                    })
                    .collect();
                (j.len(), linalg::rank_of(m * md, &images))
            }
            // δf = −f: injective on C⁰, with nothing landing in C¹.
            KvCoefficients::Scalar => (1, 1),
        };
    }
    let len = m.pow(q as u32) * md;
    let out_len = len * m;
    let mut columns = Vec::with_capacity(len);
    for s in 0..len {
        let mut unit = alloc::vec![Rational::zero(); len];
        unit[s] = int(1);
        let c = Cochain::from_flat(q, m, md, unit).expect("shape");
        columns.push(kv_apply(p, coeffs, &c).data);
    }
    (len, linalg::rank_of(out_len, &columns))
}

pub const MAX_REPORT_DEGREE: usize = 3;

pub fn kv_cohomology_dims(p: &BilinearProduct, coeffs: KvCoefficients, max_degree: usize) -> Result<CohomologyReport> {
    if !p.is_kv() {
        return Err(Error::NotKV);
    }
    if max_degree > MAX_REPORT_DEGREE {
        return Err(Error::Invalid("cohomology degree above the supported range".into()));
    }
    let mut cochains = Vec::new();
    let mut ranks = Vec::new();
    for q in 0..=max_degree {
        let (c, r) = kv_rank(p, coeffs, q);
        cochains.push(c);
        ranks.push(r);
    }
    let (name, override0) = match coeffs {
        KvCoefficients::Adjoint => ("kv-adjoint", None),
        KvCoefficients::Scalar => ("kv-scalar", Some(0)),
    };
    Ok(CohomologyReport::from_ranks(name, cochains, ranks, override0))
}

// ---------------------------------------------------------------------------
// Chevalley–Eilenberg

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CeCoefficients {
    Trivial,
    Adjoint,
}

impl CeCoefficients {
    pub fn name(self) -> &'static str {
        match self {
            CeCoefficients::Trivial => "trivial",
            CeCoefficients::Adjoint => "adjoint",
        }
    }
}

/// Increasing `p`-subsets of `0..m` in lexicographic order.
pub fn subsets(m: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, p, &mut Vec::new(), &mut out);
    out
}

/// Sorts `args` in place, returning the permutation sign, or `None` on a
/// repeated index.
fn sort_sign(args: &mut [usize]) -> Option<i64> {
    let mut sign = 1;
    for i in 1..args.len() {
        let mut j = i;
        while j > 0 && args[j - 1] > args[j] {
            args.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if args.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

/// An alternating cochain stored on increasing subsets.
struct Alternating<'a> {
    index: &'a alloc::collections::BTreeMap<Vec<usize>, usize>,
    module_dim: usize,
    data: &'a [Rational],
}

impl Alternating<'_> {
    fn eval(&self, args: &[usize], acc: &mut [Rational], scale: &Rational) {
        let mut sorted = args.to_vec();
        let Some(sign) = sort_sign(&mut sorted) else { return };
        let s = self.index[&sorted];
        let v = &self.data[s * self.module_dim..(s + 1) * self.module_dim];
        let scale = if sign < 0 { -scale.clone() } else { scale.clone() };
        add_scaled(acc, v, &scale);
    }
}

fn ce_matrix(l: &LieAlgebra, coeffs: CeCoefficients, p: usize) -> (usize, Vec<Vec<Rational>>, usize) {
    let m = l.dim();
    let md = match coeffs {
        CeCoefficients::Trivial => 1,
        CeCoefficients::Adjoint => m,
    };
    let src = subsets(m, p);
    let dst = subsets(m, p + 1);
    let index: alloc::collections::BTreeMap<Vec<usize>, usize> =
        src.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let len = src.len() * md;
    let out_len = dst.len() * md;
    let mut columns = Vec::with_capacity(len);
    for s in 0..len {
        let mut unit = alloc::vec![Rational::zero(); len];
        unit[s] = int(1);
        let w = Alternating { index: &index, module_dim: md, data: &unit };
        columns.push(ce_apply(l, coeffs, &w, &dst, p));
    }
    (len, columns, out_len)
}

/// `dω(x_0..x_p) = Σ_i (−1)^i x_i·ω(…x̂_i…) + Σ_{i<j} (−1)^{i+j} ω([x_i, x_j], …x̂_i…x̂_j…)`.
fn ce_apply(l: &LieAlgebra, coeffs: CeCoefficients, w: &Alternating<'_>, dst: &[Vec<usize>], p: usize) -> Vec<Rational> {
    let m = l.dim();
    let md = w.module_dim;
    let mut out = alloc::vec![Rational::zero(); dst.len() * md];
    let mut acc = alloc::vec![Rational::zero(); md];
    for (t, xs) in dst.iter().enumerate() {
        for a in acc.iter_mut() {
            a.set_zero();
        }
        for i in 0..=p {
            let sign_i = if i % 2 == 0 { int(1) } else { int(-1) };
            if coeffs == CeCoefficients::Adjoint {
                let rest: Vec<usize> = xs.iter().enumerate().filter(|&(s, _)| s != i).map(|(_, &v)| v).collect();
                let mut val = alloc::vec![Rational::zero(); md];
                w.eval(&rest, &mut val, &int(1));
                let ad = l.bracket(&crate::algebra::basis_vector(m, xs[i]), &val);
                add_scaled(&mut acc, &ad, &sign_i);
            }
            for j in i + 1..=p {
                let sign = if (i + j) % 2 == 0 { int(1) } else { int(-1) };
                let mut rest: Vec<usize> = Vec::with_capacity(p);
                rest.push(0);
                rest.extend(xs.iter().enumerate().filter(|&(s, _)| s != i && s != j).map(|(_, &v)| v));
                for k in 0..m {
                    let c = l.c(xs[i], xs[j], k);
                    if c.is_zero() {
                        continue;
                    }
                    rest[0] = k;
                    w.eval(&rest, &mut acc, &(&sign * c));
                }
            }
        }
        out[t * md..(t + 1) * md].clone_from_slice(&acc);
    }
    out
}

pub const MAX_CE_DEGREE: usize = 3;

/// Chevalley–Eilenberg cohomology dimensions for `p = 0..=max_p`.
pub fn ce_cohomology_dims(l: &LieAlgebra, coeffs: CeCoefficients, max_p: usize) -> CohomologyReport {
    let mut cochains = Vec::new();
    let mut ranks = Vec::new();
    for p in 0..=max_p {
        let (len, columns, out_len) = ce_matrix(l, coeffs, p);
        cochains.push(len);
        ranks.push(linalg::rank_of(out_len, &columns));
    }
    let name = match coeffs {
        CeCoefficients::Trivial => "ce-trivial",
        CeCoefficients::Adjoint => "ce-adjoint",
    };
    CohomologyReport::from_ranks(name, cochains, ranks, None)
}

/// The CE coboundary of an alternating `p`-cochain given on increasing
/// subsets (module index last); used by the δ∘δ tests.
pub fn ce_coboundary(l: &LieAlgebra, coeffs: CeCoefficients, p: usize, data: &[Rational]) -> Result<Vec<Rational>> {
    let m = l.dim();
    let md = match coeffs {
        CeCoefficients::Trivial => 1,
        CeCoefficients::Adjoint => m,
    };
    let src = subsets(m, p);
    Error::check_dim(src.len() * md, data.len())?;
    let index: alloc::collections::BTreeMap<Vec<usize>, usize> =
        src.into_iter().enumerate().map(|(i, s)| (s, i)).collect();
    let w = Alternating { index: &index, module_dim: md, data };
    Ok(ce_apply(l, coeffs, &w, &subsets(m, p + 1), p))
}

// ---------------------------------------------------------------------------
// Hochschild

/// `(δf)(a_1..a_{n+1}) = a_1·f(a_2..) + Σ_i (−1)^i f(…, a_i a_{i+1}, …) + (−1)^{n+1} f(a_1..a_n)·a_{n+1}`.
pub fn hochschild_coboundary(p: &BilinearProduct, f: &Cochain) -> Result<Cochain> {
    let m = p.dim();
    Error::check_dim(m, f.dim)?;
    Error::check_dim(m, f.module_dim)?;
    let n = f.degree;
    let mut out = Cochain::zeros(n + 1, m, m);
    let total = m.pow(n as u32 + 1);
    for code in 0..total {
        let a = decode(code, m, n + 1);
        let mut acc = alloc::vec![Rational::zero(); m];
        let e0 = crate::algebra::basis_vector(m, a[0]);
        add_scaled(&mut acc, &p.product(&e0, f.get(&a[1..])), &int(1));
        for i in 0..n {
            let sign = if (i + 1) % 2 == 0 { int(1) } else { int(-1) };
            let mut args: Vec<usize> = Vec::with_capacity(n);
            args.extend_from_slice(&a[..i]);
            args.push(0);
            args.extend_from_slice(&a[i + 2..]);
            for k in 0..m {
                let g = p.gamma(a[i], a[i + 1], k);
                if g.is_zero() {
                    continue;
                }
                args[i] = k;
                add_scaled(&mut acc, f.get(&args), &(&sign * g));
            }
        }
        let sign = if (n + 1).is_multiple_of(2) { int(1) } else { int(-1) };
        let e_last = crate::algebra::basis_vector(m, a[n]);
        add_scaled(&mut acc, &p.product(f.get(&a[..n]), &e_last), &sign);
        out.get_mut(&a).clone_from_slice(&acc);
    }
    Ok(out)
}

pub const MAX_HOCHSCHILD_DEGREE: usize = 2;

pub fn hochschild_dims(p: &BilinearProduct, max_degree: usize) -> Result<CohomologyReport> {
    if !p.is_associative() {
        return Err(Error::NotAssociative);
    }
    if max_degree > MAX_HOCHSCHILD_DEGREE {
        return Err(Error::Invalid("Hochschild degree above the supported range".into()));
    }
    let m = p.dim();
    let mut cochains = Vec::new();
    let mut ranks = Vec::new();
    for q in 0..=max_degree {
        let len = m.pow(q as u32) * m;
        let mut columns = Vec::with_capacity(len);
        for s in 0..len {
            let mut unit = alloc::vec![Rational::zero(); len];
            unit[s] = int(1);
            let c = Cochain::from_flat(q, m, m, unit).expect("shape");
            columns.push(hochschild_coboundary(p, &c)?.data);
        }
        cochains.push(len);
        ranks.push(linalg::rank_of(len * m, &columns));
    }
    Ok(CohomologyReport::from_ranks("hochschild", cochains, ranks, None))
}

// ---------------------------------------------------------------------------
// Maurer–Cartan

fn table_apply(m: usize, t: &[Rational], x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    let mut out = alloc::vec![Rational::zero(); m];
    for i in 0..m {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..m {
            if y[j].is_zero() {
                continue;
            }
            let xy = &x[i] * &y[j];
            for k in 0..m {
                let c = &t[(i * m + j) * m + k];
                if !c.is_zero() {
                    out[k] += &xy * c;
                }
            }
        }
    }
    out
}

/// `dB + J_B` on basis triples, indexed `(i, j, k, l)`, where `dB` is the CE
/// coboundary of `B` with coefficients in the adjoint module of `μ` and
/// `J_B(x, y, z) = Σ_cyclic B(x, B(y, z))`. Vanishes iff `μ + B` satisfies
/// Jacobi.
pub fn maurer_cartan_defect(mu: &LieAlgebra, b: &[Rational]) -> Result<DefectTensor> {
    let m = mu.dim();
    Error::check_dim(m * m * m, b.len())?;
    let c = mu.structure_constants();
    let e = |i: usize| crate::algebra::basis_vector(m, i);
    let mut out = DefectTensor::zeros(&[m, m, m, m]);
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                let (x, y, z) = (e(i), e(j), e(k));
                let mut acc = alloc::vec![Rational::zero(); m];
                let one = int(1);
                let neg = int(-1);
                add_scaled(&mut acc, &table_apply(m, c, &x, &table_apply(m, b, &y, &z)), &one);
                add_scaled(&mut acc, &table_apply(m, c, &y, &table_apply(m, b, &x, &z)), &neg);
                add_scaled(&mut acc, &table_apply(m, c, &z, &table_apply(m, b, &x, &y)), &one);
                add_scaled(&mut acc, &table_apply(m, b, &table_apply(m, c, &x, &y), &z), &neg);
                add_scaled(&mut acc, &table_apply(m, b, &table_apply(m, c, &x, &z), &y), &one);
                add_scaled(&mut acc, &table_apply(m, b, &table_apply(m, c, &y, &z), &x), &neg);
                for (p, q, r) in [(&x, &y, &z), (&y, &z, &x), (&z, &x, &y)] {
                    add_scaled(&mut acc, &table_apply(m, b, p, &table_apply(m, b, q, r)), &one);
                }
                for (l, v) in acc.into_iter().enumerate() {
                    *out.get_mut(&[i, j, k, l]) = v;
                }
            }
        }
    }
    Ok(out)
}
