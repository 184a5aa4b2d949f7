//! JSON matrix files and run reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::{c, Matrix, C64};
use crate::quantum::{DensityMatrix, Pvm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixKind {
    Density,
    Unitary,
    Projector,
    Vector,
}

/// Entries as `[re, im]` pairs: a list of rows, or a flat list for vectors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixData {
    Square(Vec<Vec<[f64; 2]>>),
    Vector(Vec<[f64; 2]>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    pub kind: MatrixKind,
    pub matrix: MatrixData,
}

/// Malformed JSON or a shape that cannot be a matrix of the declared kind.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct ParseError(pub String);

fn pair(z: &C64) -> [f64; 2] {
    [z.re, z.im]
}

impl MatrixFile {
    pub fn parse(text: &str) -> std::result::Result<Self, ParseError> {
        let f: Self = serde_json::from_str(text).map_err(|e| ParseError(e.to_string()))?;
        match (&f.kind, &f.matrix) {
            (MatrixKind::Vector, MatrixData::Vector(v)) if !v.is_empty() => {}
            (MatrixKind::Vector, _) => return Err(ParseError("vector files need a non-empty flat list of [re, im] pairs".into())),
            (_, MatrixData::Square(rows)) => {
                let n = rows.len();
                if n == 0 || rows.iter().any(|r| r.len() != n) {
                    return Err(ParseError(format!("matrix must be square and non-empty ({n} rows)")));
                }
            }
            (_, MatrixData::Vector(_)) => {
                return Err(ParseError("only vector files may hold a flat list".into()));
            }
        }
        Ok(f)
    }

    pub fn from_matrix(m: &Matrix, kind: MatrixKind, dims: Option<Vec<usize>>) -> Self {
        let rows = m.rows().iter().map(|r| r.iter().map(pair).collect()).collect();
        Self { dims, kind, matrix: MatrixData::Square(rows) }
    }

    pub fn from_vector(v: &[C64]) -> Self {
        Self {
            dims: None,
            kind: MatrixKind::Vector,
            matrix: MatrixData::Vector(v.iter().map(pair).collect()),
        }
    }

    pub fn from_density(rho: &DensityMatrix) -> Self {
        Self::from_matrix(rho.matrix(), MatrixKind::Density, rho.dims().map(<[usize]>::to_vec))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    fn expect_kind(&self, kind: MatrixKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::InvalidArgument(format!(
                "expected a {kind:?} file, found {:?}",
                self.kind
            )));
        }
        Ok(())
    }

    /// Raw entries; no validation beyond shape.
    pub fn matrix(&self) -> Result<Matrix> {
        match &self.matrix {
            MatrixData::Square(rows) => Matrix::from_rows(
                rows.iter()
                    .map(|r| r.iter().map(|p| c(p[0], p[1])).collect())
                    .collect(),
            ),
            MatrixData::Vector(_) => Err(Error::InvalidArgument("file holds a vector, not a matrix".into())),
        }
    }

    pub fn vector(&self) -> Result<Vec<C64>> {
        self.expect_kind(MatrixKind::Vector)?;
        match &self.matrix {
            MatrixData::Vector(v) => Ok(v.iter().map(|p| c(p[0], p[1])).collect()),
            MatrixData::Square(_) => Err(Error::InvalidArgument("file holds a matrix, not a vector".into())),
        }
    }

    pub fn density(&self) -> Result<DensityMatrix> {
        self.expect_kind(MatrixKind::Density)?;
        let rho = DensityMatrix::new(self.matrix()?)?;
        match &self.dims {
            Some(d) => rho.with_dims(d.clone()),
            None => Ok(rho),
        }
    }

    pub fn unitary(&self) -> Result<Matrix> {
        self.expect_kind(MatrixKind::Unitary)?;
        let u = self.matrix()?;
        let defect = u.unitarity_defect();
        if defect > crate::linalg::RECON_TOL {
            return Err(Error::NotUnitary(defect));
        }
        Ok(u)
    }
}

/// A PVM is stored either as a unitary whose columns give rank-one
/// projectors, or as a list of projector files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PvmFile {
    Basis(MatrixFile),
    Blocks(Vec<MatrixFile>),
}

impl PvmFile {
    pub fn parse(text: &str) -> std::result::Result<Self, ParseError> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| ParseError(e.to_string()))?;
        match v {
            serde_json::Value::Array(items) => items
                .iter()
                .map(|i| MatrixFile::parse(&i.to_string()))
                .collect::<std::result::Result<Vec<_>, _>>()
                .map(PvmFile::Blocks),
            other => MatrixFile::parse(&other.to_string()).map(PvmFile::Basis),
        }
    }

    pub fn pvm(&self) -> Result<Pvm> {
        match self {
            PvmFile::Basis(f) => Pvm::from_basis(&f.unitary()?),
            PvmFile::Blocks(fs) => {
                let blocks = fs
                    .iter()
                    .map(|f| {
                        f.expect_kind(MatrixKind::Projector)?;
                        f.matrix()
                    })
                    .collect::<Result<Vec<_>>>()?;
                Pvm::new(blocks)
            }
        }
    }
}

/// SHA-256 over the length-prefixed input byte strings, hex encoded.
pub fn inputs_digest(inputs: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for bytes in inputs {
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs_digest: String,
    pub results: BTreeMap<String, serde_json::Value>,
    pub warnings: Vec<String>,
    pub version: String,
    pub seed: Option<u64>,
}

impl RunReport {
    pub fn new(command: Vec<String>, inputs_digest: String, seed: Option<u64>) -> Self {
        Self {
            command,
            inputs_digest,
            results: BTreeMap::new(),
            warnings: Vec::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
        }
    }

    pub fn insert(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report values serialize");
        self.results.insert(key.to_string(), v);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::sample_density;

    #[test]
    fn density_round_trip_is_bit_exact() {
        for seed in 0..10 {
            let rho = sample_density(seed, 3, None).unwrap();
            let text = MatrixFile::from_density(&rho).to_json();
            let back = MatrixFile::parse(&text).unwrap().matrix().unwrap();
            for (a, b) in back.entries().iter().zip(rho.matrix().entries()) {
                assert_eq!(a.re.to_bits(), b.re.to_bits());
                assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
        }
    }

    #[test]
    fn vector_file() {
        let f = MatrixFile::parse(r#"{"kind":"vector","matrix":[[1,0],[0,0]]}"#).unwrap();
        assert_eq!(f.vector().unwrap().len(), 2);
        assert!(MatrixFile::parse(r#"{"kind":"vector","matrix":[[[1,0]]]}"#).is_err());
    }

    #[test]
    fn shape_errors() {
        assert!(MatrixFile::parse("not json").is_err());
        assert!(MatrixFile::parse(r#"{"kind":"density","matrix":[[[1,0],[0,0]]]}"#).is_err());
        assert!(MatrixFile::parse(r#"{"kind":"density","matrix":[[1,0]]}"#).is_err());
        assert!(MatrixFile::parse(r#"{"kind":"qubit","matrix":[[[1,0]]]}"#).is_err());
    }

    #[test]
    fn validation_errors() {
        let f = MatrixFile::parse(r#"{"kind":"density","matrix":[[[1,0],[0,0]],[[0,0],[1,0]]]}"#).unwrap();
        assert!(matches!(f.density(), Err(Error::InvalidTrace(_))));
        let f = MatrixFile::parse(r#"{"kind":"density","dims":[3],"matrix":[[[1,0],[0,0]],[[0,0],[0,0]]]}"#).unwrap();
        assert!(matches!(f.density(), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn pvm_files() {
        let basis = r#"{"kind":"unitary","matrix":[[[1,0],[0,0]],[[0,0],[1,0]]]}"#;
        assert_eq!(PvmFile::parse(basis).unwrap().pvm().unwrap(), Pvm::computational(2));
        let blocks = r#"[{"kind":"projector","matrix":[[[1,0],[0,0]],[[0,0],[0,0]]]},
                         {"kind":"projector","matrix":[[[0,0],[0,0]],[[0,0],[1,0]]]}]"#;
        assert_eq!(PvmFile::parse(blocks).unwrap().pvm().unwrap().len(), 2);
        let bad = r#"[{"kind":"projector","matrix":[[[1,0],[0,0]],[[0,0],[0,0]]]}]"#;
        assert!(PvmFile::parse(bad).unwrap().pvm().is_err());
    }

    #[test]
    fn digest_is_length_prefixed() {
        assert_ne!(inputs_digest(&[b"ab", b"c"]), inputs_digest(&[b"a", b"bc"]));
        assert_eq!(inputs_digest(&[]).len(), 64);
    }
}
