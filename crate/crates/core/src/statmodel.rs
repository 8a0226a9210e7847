//! Information geometry of parametric families on a finite outcome set:
//! Fisher information, the α-connections, their curvature, and a numeric
//! probe for exponential families.
//!
//! Everything here is `f64`. The α-connections use the convention
//! `Γ_{ij,k}(α) = Σ_x p [∂_i∂_j ℓ + (1+α)/2 ∂_iℓ ∂_jℓ] ∂_kℓ` with `ℓ = log p`,
//! so `α = −1` is the exponential connection: its symbols vanish in natural
//! coordinates of an exponential family. Sums over outcomes use the counting
//! measure.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numeric;

/// Allowed deviation of `Σ_x p(θ, x)` from 1.
pub const NORMALIZATION_TOL: f64 = 1e-12;
/// Step for first and second derivatives of `ℓ` (one Richardson level).
pub const DERIVATIVE_STEP: f64 = 1e-4;
/// Step for derivatives of the raised Christoffel symbols.
pub const CURVATURE_STEP: f64 = 1e-3;
pub const DEFAULT_PROBE_TOL: f64 = 1e-4;

/// `ℓ(θ, x)` with its gradient and Hessian in `θ` at one outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct LogJet {
    pub value: f64,
    pub grad: Vec<f64>,
    /// Row-major `d × d`.
    pub hess: Vec<f64>,
}

/// A smooth family of strictly positive probability vectors.
pub trait StatModel {
    fn n_outcomes(&self) -> usize;
    fn n_params(&self) -> usize;
    fn tag(&self) -> String;
    fn in_domain(&self, theta: &[f64]) -> bool;
    fn log_density(&self, theta: &[f64], outcome: usize) -> f64;

    /// Closed-form derivatives of `ℓ`, when the family has them.
    fn analytic_jet(&self, _theta: &[f64], _outcome: usize) -> Option<LogJet> {
        None
    }
}

/// How derivatives of `ℓ` are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Derivatives {
    /// Central differences with step [`DERIVATIVE_STEP`] and one Richardson level.
    #[default]
    FiniteDifference,
    /// The family's closed form, falling back to finite differences.
    Analytic,
}

/// The catalog of families.
#[derive(Debug, Clone, PartialEq)]
pub enum FiniteStatModel {
    /// `p(1) = θ`, `p(0) = 1 − θ`.
    Bernoulli,
    /// Mean coordinates `θ_x = p(x)` for `x < n − 1`.
    CategoricalMean(usize),
    /// Natural (logit) coordinates `log p(x)/p(n−1) = θ_x`.
    CategoricalNatural(usize),
    /// Four outcomes with logits `(θ₁, θ₂, θ₁² + θ₂², 0)`.
    Curved4,
    /// Uniform on `n` outcomes whatever the `d` parameters.
    Constant { outcomes: usize, params: usize },
}

impl FiniteStatModel {
    /// Parses `bernoulli`, `categorical:N`, `categorical-natural:N`,
    /// `curved4` and `constant:N:D`.
    pub fn parse(name: &str) -> Option<Self> {
        let parts: Vec<&str> = name.split(':').collect();
        let num = |s: &str| s.parse::<usize>().ok().filter(|&n| n >= 2);
        Some(match parts.as_slice() {
            ["bernoulli"] => FiniteStatModel::Bernoulli,
            ["categorical", n] => FiniteStatModel::CategoricalMean(num(n)?),
            ["categorical-natural", n] => FiniteStatModel::CategoricalNatural(num(n)?),
            ["curved4"] => FiniteStatModel::Curved4,
            ["constant", n, d] => FiniteStatModel::Constant { outcomes: num(n)?, params: d.parse().ok()? },
            _ => return None,
        })
    }

    /// Nine interior points (a 3 × 3 grid when `d = 2`).
    pub fn default_grid(&self) -> Vec<Vec<f64>> {
        let d = self.n_params();
        match self {
            FiniteStatModel::Bernoulli => (1..=9).map(|k| alloc::vec![k as f64 / 10.0]).collect(),
            FiniteStatModel::CategoricalMean(n) => {
                let base = 1.0 / *n as f64;
                let offsets = [-0.3 * base, 0.0, 0.3 * base];
                grid_around(d, &offsets, base)
            }
            _ => grid_around(d, &[-0.5, 0.0, 0.5], 0.0),
        }
    }

    /// Logits, their gradients and Hessians for the logit-parametrized families.
    fn logits(&self, theta: &[f64]) -> Option<(Vec<f64>, Vec<Vec<f64>>, Vec<Vec<f64>>)> {
        let d = self.n_params();
        match self {
            FiniteStatModel::CategoricalNatural(n) => {
                let mut eta = theta.to_vec();
                eta.push(0.0);
                let grads = (0..*n)
                    .map(|x| (0..d).map(|i| if i == x { 1.0 } else { 0.0 }).collect())
                    .collect();
                Some((eta, grads, alloc::vec![alloc::vec![0.0; d * d]; *n]))
            }
            FiniteStatModel::Curved4 => {
                let (a, b) = (theta[0], theta[1]);
                let eta = alloc::vec![a, b, a * a + b * b, 0.0];
                let grads = alloc::vec![
                    alloc::vec![1.0, 0.0],
                    alloc::vec![0.0, 1.0],
                    alloc::vec![2.0 * a, 2.0 * b],
                    alloc::vec![0.0, 0.0]
                ];
                let hess = alloc::vec![
                    alloc::vec![0.0; 4],
                    alloc::vec![0.0; 4],
                    alloc::vec![2.0, 0.0, 0.0, 2.0],
                    alloc::vec![0.0; 4]
                ];
                Some((eta, grads, hess))
            }
            _ => None,
        }
    }
}

fn grid_around(d: usize, offsets: &[f64], base: f64) -> Vec<Vec<f64>> {
    let count = if d == 0 { 1 } else { 9 };
    (0..count)
        .map(|k| {
            (0..d)
                .map(|i| match d {
                    1 => base + (k as f64 - 4.0) * (offsets[2] - offsets[1]) / 4.0,
                    _ => base + offsets[(k / 3usize.pow(i as u32)) % 3],
                })
                .collect()
        })
        .collect()
}

fn log_sum_exp(values: &[f64]) -> f64 {
    let m = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    m + libm::log(values.iter().map(|v| libm::exp(v - m)).sum::<f64>())
}

impl StatModel for FiniteStatModel {
    fn n_outcomes(&self) -> usize {
        match self {
            FiniteStatModel::Bernoulli => 2,
            FiniteStatModel::CategoricalMean(n) | FiniteStatModel::CategoricalNatural(n) => *n,
            FiniteStatModel::Curved4 => 4,
            FiniteStatModel::Constant { outcomes, .. } => *outcomes,
        }
    }

    fn n_params(&self) -> usize {
        match self {
            FiniteStatModel::Bernoulli => 1,
            FiniteStatModel::CategoricalMean(n) | FiniteStatModel::CategoricalNatural(n) => n - 1,
            FiniteStatModel::Curved4 => 2,
            FiniteStatModel::Constant { params, .. } => *params,
        }
    }

    fn tag(&self) -> String {
        match self {
            FiniteStatModel::Bernoulli => "bernoulli".into(),
            FiniteStatModel::CategoricalMean(n) => alloc::format!("categorical:{n}"),
            FiniteStatModel::CategoricalNatural(n) => alloc::format!("categorical-natural:{n}"),
            FiniteStatModel::Curved4 => "curved4".into(),
            FiniteStatModel::Constant { outcomes, params } => alloc::format!("constant:{outcomes}:{params}"),
        }
    }

    fn in_domain(&self, theta: &[f64]) -> bool {
        if theta.len() != self.n_params() || theta.iter().any(|t| !t.is_finite()) {
            return false;
        }
        match self {
            FiniteStatModel::Bernoulli => theta[0] > 0.0 && theta[0] < 1.0,
            FiniteStatModel::CategoricalMean(_) => {
                theta.iter().all(|&t| t > 0.0) && theta.iter().sum::<f64>() < 1.0
            }
            FiniteStatModel::CategoricalNatural(_) => theta.iter().all(|t| t.abs() <= 50.0),
            FiniteStatModel::Curved4 => theta.iter().all(|t| t.abs() <= 3.0),
            FiniteStatModel::Constant { .. } => true,
        }
    }

    fn log_density(&self, theta: &[f64], x: usize) -> f64 {
        match self {
            FiniteStatModel::Bernoulli => libm::log(if x == 1 { theta[0] } else { 1.0 - theta[0] }),
            FiniteStatModel::CategoricalMean(n) => {
                if x + 1 < *n {
                    libm::log(theta[x])
                } else {
                    libm::log(1.0 - theta.iter().sum::<f64>())
                }
            }
            FiniteStatModel::Constant { outcomes, .. } => -libm::log(*outcomes as f64),
            _ => {
                let (eta, _, _) = self.logits(theta).expect("logit family");
                eta[x] - log_sum_exp(&eta)
            }
        }
    }

    fn analytic_jet(&self, theta: &[f64], x: usize) -> Option<LogJet> {
        let d = self.n_params();
        let value = self.log_density(theta, x);
        let mut grad = alloc::vec![0.0; d];
        let mut hess = alloc::vec![0.0; d * d];
        match self {
            FiniteStatModel::Bernoulli => {
                let (g, h) = if x == 1 {
                    (1.0 / theta[0], -1.0 / (theta[0] * theta[0]))
                } else {
                    let q = 1.0 - theta[0];
                    (-1.0 / q, -1.0 / (q * q))
                };
                grad[0] = g;
                hess[0] = h;
            }
            FiniteStatModel::CategoricalMean(n) => {
                if x + 1 < *n {
                    grad[x] = 1.0 / theta[x];
                    hess[x * d + x] = -1.0 / (theta[x] * theta[x]);
                } else {
                    let last = 1.0 - theta.iter().sum::<f64>();
                    grad.iter_mut().for_each(|g| *g = -1.0 / last);
                    hess.iter_mut().for_each(|h| *h = -1.0 / (last * last));
                }
            }
            FiniteStatModel::Constant { .. } => {}
            _ => {
                let (eta, deta, d2eta) = self.logits(theta)?;
                let lse = log_sum_exp(&eta);
                let p: Vec<f64> = eta.iter().map(|e| libm::exp(e - lse)).collect();
                let mean_grad: Vec<f64> =
                    (0..d).map(|i| p.iter().zip(&deta).map(|(py, g)| py * g[i]).sum()).collect();
                for i in 0..d {
                    grad[i] = deta[x][i] - mean_grad[i];
                    for j in 0..d {
                        let mean_hess: f64 = p.iter().zip(&d2eta).map(|(py, h)| py * h[i * d + j]).sum();
                        let cov: f64 = p
                            .iter()
                            .zip(&deta)
                            .map(|(py, g)| py * (g[i] - mean_grad[i]) * (g[j] - mean_grad[j]))
                            .sum();
                        hess[i * d + j] = d2eta[x][i * d + j] - mean_hess - cov;
                    }
                }
            }
        }
        Some(LogJet { value, grad, hess })
    }
}

fn shifted(theta: &[f64], moves: &[(usize, f64)]) -> Vec<f64> {
    let mut t = theta.to_vec();
    for &(i, h) in moves {
        t[i] += h;
    }
    t
}

/// `∂_i ℓ` and `∂_i∂_j ℓ` by central differences with one Richardson level.
pub fn finite_difference_jet<M: StatModel + ?Sized>(model: &M, theta: &[f64], x: usize) -> LogJet {
    let d = model.n_params();
    let f = |t: &[f64]| model.log_density(t, x);
    let value = f(theta);
    let first = |i: usize, h: f64| (f(&shifted(theta, &[(i, h)])) - f(&shifted(theta, &[(i, -h)]))) / (2.0 * h);
    let second = |i: usize, j: usize, h: f64| {
        if i == j {
            (f(&shifted(theta, &[(i, h)])) - 2.0 * value + f(&shifted(theta, &[(i, -h)]))) / (h * h)
        } else {
            (f(&shifted(theta, &[(i, h), (j, h)])) - f(&shifted(theta, &[(i, h), (j, -h)]))
                - f(&shifted(theta, &[(i, -h), (j, h)]))
                + f(&shifted(theta, &[(i, -h), (j, -h)])))
                / (4.0 * h * h)
        }
    };
    let h = DERIVATIVE_STEP;
    let richardson = |coarse: f64, fine: f64| (4.0 * fine - coarse) / 3.0;
    let grad = (0..d).map(|i| richardson(first(i, h), first(i, h / 2.0))).collect();
    let mut hess = alloc::vec![0.0; d * d];
    for i in 0..d {
        for j in i..d {
            let v = richardson(second(i, j, h), second(i, j, h / 2.0));
            hess[i * d + j] = v;
            hess[j * d + i] = v;
        }
    }
    LogJet { value, grad, hess }
}

/// Probabilities and jets at `θ`, after the domain and normalization checks.
fn jets<M: StatModel + ?Sized>(model: &M, theta: &[f64], how: Derivatives) -> Result<(Vec<f64>, Vec<LogJet>)> {
    if !model.in_domain(theta) {
        return Err(Error::DomainViolation);
    }
    let n = model.n_outcomes();
    let mut probs = Vec::with_capacity(n);
    let mut out = Vec::with_capacity(n);
    for x in 0..n {
        let jet = match how {
            Derivatives::Analytic => model.analytic_jet(theta, x),
            Derivatives::FiniteDifference => None,
        }
        .unwrap_or_else(|| finite_difference_jet(model, theta, x));
        let p = libm::exp(jet.value);
        if !(p > 0.0) {
            return Err(Error::DomainViolation);
        }
        probs.push(p);
        out.push(jet);
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NonNormalized(total));
    }
    Ok((probs, out))
}

/// `g_ij = Σ_x p ∂_iℓ ∂_jℓ` (row-major `d × d`).
pub fn fisher_information<M: StatModel + ?Sized>(model: &M, theta: &[f64]) -> Result<Vec<f64>> {
    fisher_with(model, theta, Derivatives::FiniteDifference)
}

pub fn fisher_with<M: StatModel + ?Sized>(model: &M, theta: &[f64], how: Derivatives) -> Result<Vec<f64>> {
    let d = model.n_params();
    let (probs, jets) = jets(model, theta, how)?;
    let mut g = alloc::vec![0.0; d * d];
    for (p, jet) in probs.iter().zip(&jets) {
        for i in 0..d {
            for j in 0..d {
                g[i * d + j] += p * jet.grad[i] * jet.grad[j];
            }
        }
    }
    Ok(g)
}

/// The second route, `−Σ_x p ∂_i∂_jℓ`.
pub fn fisher_from_hessian<M: StatModel + ?Sized>(model: &M, theta: &[f64], how: Derivatives) -> Result<Vec<f64>> {
    let d = model.n_params();
    let (probs, jets) = jets(model, theta, how)?;
    let mut g = alloc::vec![0.0; d * d];
    for (p, jet) in probs.iter().zip(&jets) {
        for (gij, h) in g.iter_mut().zip(&jet.hess) {
            *gij -= p * h;
        }
    }
    Ok(g)
}

/// Christoffel symbols of one α-connection at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaChristoffels {
    pub d: usize,
    /// `Γ_{ij,k}` at `(i*d + j)*d + k`.
    pub lowered: Vec<f64>,
    /// `Γ^k_{ij}` at `(i*d + j)*d + k`, when the Fisher matrix is invertible.
    pub raised: Option<Vec<f64>>,
}

impl AlphaChristoffels {
    /// `max |Γ^k_{ij} − Γ^k_{ji}|` over the raised symbols (lowered if absent).
    pub fn torsion(&self) -> f64 {
        let d = self.d;
        let src = self.raised.as_ref().unwrap_or(&self.lowered);
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    worst = worst.max((src[(i * d + j) * d + k] - src[(j * d + i) * d + k]).abs());
                }
            }
        }
        worst
    }
}

pub fn alpha_christoffels<M: StatModel + ?Sized>(model: &M, theta: &[f64], alpha: f64) -> Result<AlphaChristoffels> {
    christoffels_with(model, theta, alpha, Derivatives::FiniteDifference)
}

pub fn christoffels_with<M: StatModel + ?Sized>(
    model: &M,
    theta: &[f64],
    alpha: f64,
    how: Derivatives,
) -> Result<AlphaChristoffels> {
    let d = model.n_params();
    let (probs, jets) = jets(model, theta, how)?;
    let weight = (1.0 + alpha) / 2.0;
    let mut lowered = alloc::vec![0.0; d * d * d];
    let mut g = alloc::vec![0.0; d * d];
    for (p, jet) in probs.iter().zip(&jets) {
        for i in 0..d {
            for j in 0..d {
                let inner = jet.hess[i * d + j] + weight * jet.grad[i] * jet.grad[j];
                g[i * d + j] += p * jet.grad[i] * jet.grad[j];
                for k in 0..d {
                    lowered[(i * d + j) * d + k] += p * inner * jet.grad[k];
                }
            }
        }
    }
    let raised = numeric::inverse(d, &g).map(|ginv| {
        let mut up = alloc::vec![0.0; d * d * d];
        for ij in 0..d * d {
            for k in 0..d {
                up[ij * d + k] = (0..d).map(|l| ginv[k * d + l] * lowered[ij * d + l]).sum();
            }
        }
        up
    });
    Ok(AlphaChristoffels { d, lowered, raised })
}

fn raised_symbols<M: StatModel + ?Sized>(model: &M, theta: &[f64], alpha: f64, how: Derivatives) -> Result<Vec<f64>> {
    christoffels_with(model, theta, alpha, how)?.raised.ok_or(Error::SingularFisher)
}

/// Curvature `R^l_{ijk}` of an α-connection at `(((i*d + j)*d + k)*d + l)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaCurvature {
    pub d: usize,
    pub tensor: Vec<f64>,
    pub max_abs: f64,
}

/// `R^l_{ijk} = ∂_iΓ^l_{jk} − ∂_jΓ^l_{ik} + Γ^l_{im}Γ^m_{jk} − Γ^l_{jm}Γ^m_{ik}`,
/// differentiating the raised symbols with step [`CURVATURE_STEP`] and one
/// Richardson level. The
/// symbols come from the closed-form derivatives of `ℓ` when the family has
/// them: nested finite differences would swamp the `1e−4` flatness scale.
pub fn alpha_curvature<M: StatModel + ?Sized>(model: &M, theta: &[f64], alpha: f64) -> Result<AlphaCurvature> {
    curvature_with(model, theta, alpha, Derivatives::Analytic)
}

pub fn curvature_with<M: StatModel + ?Sized>(
    model: &M,
    theta: &[f64],
    alpha: f64,
    how: Derivatives,
) -> Result<AlphaCurvature> {
    let d = model.n_params();
    let gamma = raised_symbols(model, theta, alpha, how)?;
    let h = CURVATURE_STEP;
    let central = |i: usize, h: f64| -> Result<Vec<f64>> {
        let plus = raised_symbols(model, &shifted(theta, &[(i, h)]), alpha, how)?;
        let minus = raised_symbols(model, &shifted(theta, &[(i, -h)]), alpha, how)?;
        Ok(plus.iter().zip(&minus).map(|(a, b)| (a - b) / (2.0 * h)).collect())
    };
    let mut dgamma = Vec::with_capacity(d);
    for i in 0..d {
        let coarse = central(i, h)?;
        let fine = central(i, h / 2.0)?;
        dgamma.push(coarse.iter().zip(&fine).map(|(c, f)| (4.0 * f - c) / 3.0).collect::<Vec<f64>>());
    }
    let at = |i: usize, j: usize, k: usize| (i * d + j) * d + k;
    let mut tensor = alloc::vec![0.0; d * d * d * d];
    let mut max_abs: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let mut r = dgamma[i][at(j, k, l)] - dgamma[j][at(i, k, l)];
                    for m in 0..d {
                        r += gamma[at(i, m, l)] * gamma[at(j, k, m)] - gamma[at(j, m, l)] * gamma[at(i, k, m)];
                    }
                    tensor[at(i, j, k) * d + l] = r;
                    max_abs = max_abs.max(r.abs());
                }
            }
        }
    }
    Ok(AlphaCurvature { d, tensor, max_abs })
}

/// Outcome of [`exponential_defect_probe`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentialProbe {
    pub exponential_like: bool,
    /// `(α, max over the grid of |R(α)|)` for each probed α.
    pub curvature: Vec<(f64, f64)>,
    pub torsion: f64,
    /// The probed α with the smallest curvature.
    pub best_alpha: f64,
}

pub const PROBE_ALPHAS: [f64; 5] = [-1.0, -0.5, 0.0, 0.5, 1.0];

/// Exponential-like iff both `α = ±1` connections are flat and torsion-free
/// to within `tol` over the grid. A numeric surrogate, not a proof.
pub fn exponential_defect_probe<M: StatModel + ?Sized>(model: &M, grid: &[Vec<f64>], tol: f64) -> Result<ExponentialProbe> {
    let mut curvature = Vec::new();
    let mut torsion: f64 = 0.0;
    for &alpha in &PROBE_ALPHAS {
        let mut worst: f64 = 0.0;
        for theta in grid {
            worst = worst.max(alpha_curvature(model, theta, alpha)?.max_abs);
            let symbols = christoffels_with(model, theta, alpha, Derivatives::Analytic)?;
            torsion = torsion.max(symbols.torsion());
        }
        curvature.push((alpha, worst));
    }
    let flat_ends = curvature.iter().filter(|(a, _)| a.abs() == 1.0).all(|&(_, r)| r < tol);
    let best_alpha = curvature
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|&(a, _)| a)
        .unwrap_or(-1.0);
    Ok(ExponentialProbe { exponential_like: flat_ends && torsion < tol, curvature, torsion, best_alpha })
}
