//! JSON forms of pencils, cone realizations and fixtures. Complex numbers
//! are always `[re, im]` pairs; matrices are lists of rows.

use serde::{Deserialize, Serialize};

use crate::cone_ode::ConeRealization;
use crate::error::{Error, Result};
use crate::model_zoo::Fixture;
use crate::numerics::{c64, CMatrix};
use crate::pencil::SelfAdjointPencil;

pub type ComplexRows = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_rows(m: &CMatrix) -> ComplexRows {
    m.row_iter().map(|row| row.iter().map(|z| [z.re, z.im]).collect()).collect()
}

pub fn matrix_from_rows(rows: &ComplexRows, nrows: usize, ncols: usize) -> Result<CMatrix> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::DimensionMismatch(format!("expected a {nrows}×{ncols} matrix")));
    }
    Ok(CMatrix::from_fn(nrows, ncols, |i, j| c64(rows[i][j][0], rows[i][j][1])))
}

/// `{"mu": μ, "dim": n, "coeffs": [a_0, …, a_μ]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PencilJson {
    pub mu: usize,
    pub dim: usize,
    pub coeffs: Vec<ComplexRows>,
}

impl PencilJson {
    pub fn from_pencil(p: &SelfAdjointPencil) -> Self {
        Self { mu: p.mu(), dim: p.dim(), coeffs: p.coeffs().iter().map(|a| matrix_to_rows(a.matrix())).collect() }
    }

    /// Validates shapes and passes every coefficient through the Hermiticity gate.
    pub fn to_pencil(&self) -> Result<SelfAdjointPencil> {
        if self.coeffs.len() != self.mu + 1 {
            return Err(Error::DimensionMismatch(format!(
                "mu = {} needs {} coefficients, found {}",
                self.mu,
                self.mu + 1,
                self.coeffs.len()
            )));
        }
        if self.dim == 0 {
            return Err(Error::DimensionMismatch("dim must be positive".into()));
        }
        let mats = self.coeffs.iter().map(|a| matrix_from_rows(a, self.dim, self.dim)).collect::<Result<Vec<_>>>()?;
        SelfAdjointPencil::from_matrices(mats)
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::InvalidInput(format!("malformed JSON: {e}"))
}

pub fn parse_pencil(text: &str) -> Result<SelfAdjointPencil> {
    serde_json::from_str::<PencilJson>(text).map_err(json_error)?.to_pencil()
}

pub fn pencil_to_json(p: &SelfAdjointPencil) -> String {
    serde_json::to_string(&PencilJson::from_pencil(p)).expect("pencil JSON is serializable")
}

/// Pencil JSON plus optional `"boundary"`: orthonormal columns, each a list
/// of `[re, im]`. Without it the canonical Lagrangian subspace is used.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConeJson {
    #[serde(flatten)]
    pub pencil: PencilJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<Vec<Vec<[f64; 2]>>>,
}

impl ConeJson {
    pub fn from_cone(c: &ConeRealization) -> Self {
        let cols = c.boundary().column_iter().map(|col| col.iter().map(|z| [z.re, z.im]).collect()).collect();
        Self { pencil: PencilJson::from_pencil(c.pencil()), boundary: Some(cols) }
    }

    pub fn to_cone(&self) -> Result<ConeRealization> {
        let p = self.pencil.to_pencil()?;
        match &self.boundary {
            None => ConeRealization::with_lagrangian(p),
            Some(cols) => {
                let n = p.dim();
                let l = matrix_from_rows(cols, cols.len(), n)?.transpose();
                ConeRealization::new(p, l)
            }
        }
    }
}

pub fn parse_cone(text: &str) -> Result<ConeRealization> {
    serde_json::from_str::<ConeJson>(text).map_err(json_error)?.to_cone()
}

/// Fixture file: pencil JSON plus `seed`, `expected_sf`, `expected_ind`,
/// the generator name and a fixture name.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FixtureJson {
    pub name: String,
    #[serde(flatten)]
    pub pencil: PencilJson,
    pub seed: Option<u64>,
    pub expected_sf: i64,
    pub expected_ind: Option<i64>,
    pub generator: String,
}

impl FixtureJson {
    pub fn from_fixture(f: &Fixture) -> Self {
        Self {
            name: f.name.clone(),
            pencil: PencilJson::from_pencil(&f.pencil),
            seed: f.seed,
            expected_sf: f.expected_sf,
            expected_ind: f.expected_ind,
            generator: f.generator.clone(),
        }
    }

    pub fn to_fixture(&self) -> Result<Fixture> {
        Ok(Fixture {
            name: self.name.clone(),
            pencil: self.pencil.to_pencil()?,
            seed: self.seed,
            expected_sf: self.expected_sf,
            expected_ind: self.expected_ind,
            generator: self.generator.clone(),
        })
    }
}
