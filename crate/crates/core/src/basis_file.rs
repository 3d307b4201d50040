//! JSON interchange format for bases.
//!
//! ```json
//! {
//!   "dims": [2, 3],
//!   "vectors": [[[1.0, 0.0], [0.0, 0.0], ...], ...],
//!   "meta": {"family": "d6_B1"}
//! }
//! ```
//!
//! Each complex entry is a `[re, im]` pair. Floats are written in their
//! shortest round-trip decimal form, so save → load is lossless.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analyzer::ProductBasis;
use crate::error::{Error, Result};
use crate::numerics::ComplexVector;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisFile {
    pub dims: [usize; 2],
    pub vectors: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub meta: BTreeMap<String, serde_json::Value>,
}

impl BasisFile {
    pub fn from_basis(basis: &ProductBasis) -> Self {
        BasisFile {
            dims: [2, basis.n()],
            vectors: basis
                .vectors()
                .iter()
                .map(|v| v.entries().iter().map(|z| [z.re, z.im]).collect())
                .collect(),
            meta: BTreeMap::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.meta.insert(key.to_string(), value.into());
        self
    }

    /// Checks the shape invariants and converts to a [`ProductBasis`].
    pub fn to_basis(&self) -> Result<ProductBasis> {
        let [qubit_dim, n] = self.dims;
        if qubit_dim != 2 {
            return Err(Error::MalformedBasis(format!(
                "dims[0] must be 2, got {qubit_dim}"
            )));
        }
        if n == 0 {
            return Err(Error::MalformedBasis("dims[1] must be positive".into()));
        }
        let vectors = self
            .vectors
            .iter()
            .map(|v| {
                ComplexVector::try_new(v.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        ProductBasis::new(n, vectors)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("finite floats serialize");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        BasisFile::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }
}
