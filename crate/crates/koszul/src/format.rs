//! JSON documents for algebras, products, connections, forms, symbols and
//! subspaces. Rationals travel as strings (`"3"`, `"-1/2"`); sparse tables
//! list only the nonzero entries.

use std::path::Path;

use koszul_core::rational::{self, Rational};
use koszul_core::spencer::SymbolSpace;
use koszul_core::{BilinearForm, BilinearProduct, InvariantConnection, LieAlgebra, Matrix, Symmetry};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// A rational as `"p/q"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Q(pub String);

impl Q {
    pub fn of(q: &Rational) -> Self {
        Q(rational::format(q))
    }

    pub fn value(&self) -> Result<Rational, CliError> {
        Ok(rational::parse(&self.0)?)
    }
}

pub fn qs(v: &[Rational]) -> Vec<Q> {
    v.iter().map(Q::of).collect()
}

pub fn values(v: &[Q]) -> Result<Vec<Rational>, CliError> {
    v.iter().map(Q::value).collect()
}

pub fn matrix_rows(m: &Matrix) -> Vec<Vec<Q>> {
    (0..m.rows()).map(|r| qs(m.row(r))).collect()
}

type Triple = (usize, usize, usize, Q);

fn triples(entries: &[Triple]) -> Result<Vec<(usize, usize, usize, Rational)>, CliError> {
    entries.iter().map(|(i, j, k, v)| Ok((*i, *j, *k, v.value()?))).collect()
}

/// `{"dim": m, "bracket": [[i, j, k, "p/q"], ...]}`; only `i < j` entries
/// are emitted and skewness is completed on load.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub dim: usize,
    pub bracket: Vec<Triple>,
}

impl AlgebraDoc {
    pub fn from_algebra(l: &LieAlgebra) -> Self {
        let bracket = l
            .sparse_entries()
            .into_iter()
            .filter(|(i, j, _, _)| i < j)
            .map(|(i, j, k, v)| (i, j, k, Q::of(&v)))
            .collect();
        AlgebraDoc { dim: l.dim(), bracket }
    }

    pub fn to_algebra(&self) -> Result<LieAlgebra, CliError> {
        Ok(LieAlgebra::from_sparse(self.dim, &triples(&self.bracket)?)?)
    }
}

/// `{"dim": m, "gamma": [[i, j, k, "p/q"], ...]}` with `gamma[i][j][k]` the
/// `e_k` component of `e_i · e_j`. Used for products and connections.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductDoc {
    pub dim: usize,
    pub gamma: Vec<Triple>,
}

impl ProductDoc {
    pub fn from_product(p: &BilinearProduct) -> Self {
        let gamma = p.sparse_entries().into_iter().map(|(i, j, k, v)| (i, j, k, Q::of(&v))).collect();
        ProductDoc { dim: p.dim(), gamma }
    }

    pub fn to_product(&self) -> Result<BilinearProduct, CliError> {
        Ok(BilinearProduct::from_sparse(self.dim, &triples(&self.gamma)?)?)
    }

    pub fn from_connection(c: &InvariantConnection) -> Self {
        ProductDoc::from_product(c.gamma())
    }

    /// A connection on `base`, whose dimension must match.
    pub fn to_connection(&self, base: &LieAlgebra) -> Result<InvariantConnection, CliError> {
        Ok(InvariantConnection::new(base.clone(), self.to_product()?)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymDoc {
    Symmetric,
    Skew,
}

/// `{"dim": m, "sym": "symmetric"|"skew", "entries": [[i, j, "p/q"], ...]}`;
/// the mirror entry `(j, i)` is completed on load and may be given only if
/// it agrees.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormDoc {
    pub dim: usize,
    pub sym: SymDoc,
    pub entries: Vec<(usize, usize, Q)>,
}

impl FormDoc {
    pub fn from_form(f: &BilinearForm) -> Result<Self, CliError> {
        let sym = match f.symmetry() {
            Symmetry::Symmetric => SymDoc::Symmetric,
            Symmetry::Skew => SymDoc::Skew,
            Symmetry::General => return Err(CliError::Validation("only symmetric or skew forms have a file format".into())),
        };
        let m = f.dim();
        let mut entries = Vec::new();
        for i in 0..m {
            for j in i..m {
                let v = f.get(i, j);
                if *v != rational::zero() {
                    entries.push((i, j, Q::of(v)));
                }
            }
        }
        Ok(FormDoc { dim: m, sym, entries })
    }

    pub fn to_form(&self) -> Result<BilinearForm, CliError> {
        let m = self.dim;
        let (symmetry, sign) = match self.sym {
            SymDoc::Symmetric => (Symmetry::Symmetric, rational::int(1)),
            SymDoc::Skew => (Symmetry::Skew, rational::int(-1)),
        };
        let mut data: Vec<Option<Rational>> = vec![None; m * m];
        let mut put = |i: usize, j: usize, v: Rational| -> Result<(), CliError> {
            match &data[i * m + j] {
                Some(old) if *old != v => Err(CliError::Validation(format!("conflicting form entries at ({i}, {j})"))),
                _ => {
                    data[i * m + j] = Some(v);
                    Ok(())
                }
            }
        };
        for (i, j, v) in &self.entries {
            if *i >= m || *j >= m {
                return Err(CliError::Validation(format!("form entry ({i}, {j}) outside dimension {m}")));
            }
            let v = v.value()?;
            put(*j, *i, &sign * &v)?;
            put(*i, *j, v)?;
        }
        let flat = data.into_iter().map(|v| v.unwrap_or_else(rational::zero)).collect();
        Ok(BilinearForm::new(Matrix::from_flat(m, m, flat), symmetry)?)
    }
}

/// `{"v": m, "w": w, "basis": [[...]]}`, each element a `w × m` row-major
/// matrix (row = component in W, column = basis vector of V).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolDoc {
    pub v: usize,
    pub w: usize,
    pub basis: Vec<Vec<Q>>,
}

impl SymbolDoc {
    pub fn from_symbol(a: &SymbolSpace) -> Self {
        let basis = a.to_matrices().iter().map(|m| qs(m.as_flat())).collect();
        SymbolDoc { v: a.v_dim(), w: a.w_dim(), basis }
    }

    pub fn to_symbol(&self) -> Result<SymbolSpace, CliError> {
        let mats = self
            .basis
            .iter()
            .map(|e| {
                if e.len() != self.v * self.w {
                    return Err(CliError::Validation(format!(
                        "symbol element has {} entries, expected {}",
                        e.len(),
                        self.v * self.w
                    )));
                }
                Ok(Matrix::from_flat(self.w, self.v, values(e)?))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SymbolSpace::from_matrices(self.v, self.w, &mats)?)
    }
}

/// `{"dim": m, "basis": [[...], ...]}`: a subspace of an algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceDoc {
    pub dim: usize,
    pub basis: Vec<Vec<Q>>,
}

impl SubspaceDoc {
    pub fn vectors(&self) -> Result<Vec<Vec<Rational>>, CliError> {
        self.basis
            .iter()
            .map(|v| {
                if v.len() != self.dim {
                    return Err(CliError::Validation(format!("vector of length {} in dimension {}", v.len(), self.dim)));
                }
                values(v)
            })
            .collect()
    }
}

/// Reads and parses a JSON document.
pub fn load<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_slice(&bytes).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}
