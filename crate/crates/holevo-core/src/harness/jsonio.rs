//! JSON wire format for matrices, states, channels, ensembles, and the
//! block/chain instance types, with path-aware parse diagnostics.

use crate::blockpos::{Block3, ChainForm, UnitaryChain};
use crate::channel::KrausChannel;
use crate::config::Tolerances;
use crate::ensemble::Ensemble;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::state::DensityMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Row-major complex matrix: `data[r·cols + c] = [re, im]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            data: m.data().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let data: Vec<Complex64> = self
            .data
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        ComplexMatrix::from_vec(self.rows, self.cols, data)
    }
}

/// A density matrix; `dims = [d_A, d_B]` declares a bipartite split.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityJson {
    #[serde(flatten)]
    pub matrix: MatrixJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<[usize; 2]>,
}

impl DensityJson {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        DensityJson {
            matrix: MatrixJson::from_matrix(rho.mat()),
            dims: rho.split().map(|(a, b)| [a, b]),
        }
    }

    pub fn to_density(&self, tol: &Tolerances) -> Result<DensityMatrix> {
        let rho = DensityMatrix::new(self.matrix.to_matrix()?, tol)?;
        match self.dims {
            Some([a, b]) => rho.into_split(a, b),
            None => Ok(rho),
        }
    }
}

/// A channel as its Kraus operator list.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelJson {
    pub kraus: Vec<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl ChannelJson {
    pub fn from_channel(ch: &KrausChannel) -> Self {
        ChannelJson {
            kraus: ch.kraus().iter().map(MatrixJson::from_matrix).collect(),
            label: ch.label().map(str::to_owned),
        }
    }

    pub fn to_channel(&self, tol: &Tolerances) -> Result<KrausChannel> {
        let kraus = self
            .kraus
            .iter()
            .map(MatrixJson::to_matrix)
            .collect::<Result<Vec<_>>>()?;
        KrausChannel::new(kraus, self.label.clone(), tol)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnsembleEntryJson {
    pub p: f64,
    pub rho: MatrixJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnsembleJson {
    pub entries: Vec<EnsembleEntryJson>,
}

impl EnsembleJson {
    pub fn from_ensemble(ens: &Ensemble) -> Self {
        EnsembleJson {
            entries: ens
                .entries()
                .iter()
                .map(|(p, rho)| EnsembleEntryJson {
                    p: *p,
                    rho: MatrixJson::from_matrix(rho.mat()),
                })
                .collect(),
        }
    }

    pub fn to_ensemble(&self, tol: &Tolerances) -> Result<Ensemble> {
        let entries = self
            .entries
            .iter()
            .map(|e| Ok((e.p, DensityMatrix::new(e.rho.to_matrix()?, tol)?)))
            .collect::<Result<Vec<_>>>()?;
        Ensemble::new(entries)
    }
}

/// Three unitaries for the 3×3 criterion check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TripleJson {
    pub u: MatrixJson,
    pub v: MatrixJson,
    pub w: MatrixJson,
}

impl TripleJson {
    pub fn to_matrices(&self) -> Result<(ComplexMatrix, ComplexMatrix, ComplexMatrix)> {
        Ok((
            self.u.to_matrix()?,
            self.v.to_matrix()?,
            self.w.to_matrix()?,
        ))
    }
}

/// K×K unitary-block factor list; `form` is `"chain"` or `"stack"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainJson {
    pub form: String,
    pub factors: Vec<MatrixJson>,
}

impl ChainJson {
    pub fn to_chain(&self, tol: &Tolerances) -> Result<UnitaryChain> {
        let form = match self.form.as_str() {
            "chain" => ChainForm::Chain,
            "stack" => ChainForm::Stack,
            other => {
                return Err(Error::Parse(format!(
                    "unknown form {other:?}: expected \"chain\" or \"stack\""
                )))
            }
        };
        let factors = self
            .factors
            .iter()
            .map(MatrixJson::to_matrix)
            .collect::<Result<Vec<_>>>()?;
        UnitaryChain::new(factors, form, tol)
    }
}

/// Upper triangle of a 3×3 block operator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Block3Json {
    pub a: MatrixJson,
    pub b: MatrixJson,
    pub c: MatrixJson,
    pub d: MatrixJson,
    pub e: MatrixJson,
    pub f: MatrixJson,
}

impl Block3Json {
    pub fn to_block(&self, tol: &Tolerances) -> Result<Block3> {
        Block3::new(
            self.a.to_matrix()?,
            self.b.to_matrix()?,
            self.c.to_matrix()?,
            self.d.to_matrix()?,
            self.e.to_matrix()?,
            self.f.to_matrix()?,
            tol,
        )
    }
}

/// Parse a JSON file into any wire type, reporting the failing field path
/// and position on error.
pub fn parse_file<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    let mut de = serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(&mut de).map_err(|err| {
        Error::Parse(format!(
            "{}: {} (field path: {})",
            path.display(),
            err.inner(),
            err.path()
        ))
    })
}
