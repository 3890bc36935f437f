//! JSON encoding of operators.
//!
//! ```json
//! {"dim": 2, "operators": [
//!   {"label": "e0", "kind": "ket", "entries": [[1, 0], [0, 0]]},
//!   {"label": "P", "kind": "projector", "entries": [[1, 0], [0, 0], [0, 0], [0, 0]]}
//! ]}
//! ```
//!
//! Entries are `[re, im]` pairs; matrices are row-major.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMat, Ket};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryKind {
    Ket,
    Projector,
    Psd,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorEntry {
    pub label: String,
    pub kind: EntryKind,
    pub entries: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorFile {
    pub dim: usize,
    pub operators: Vec<OperatorEntry>,
}

pub fn encode_entries(m: &CMat) -> Vec<[f64; 2]> {
    m.data().iter().map(|z| [z.re, z.im]).collect()
}

pub fn encode_ket(k: &Ket) -> Vec<[f64; 2]> {
    k.amps().iter().map(|z| [z.re, z.im]).collect()
}

pub fn decode_matrix(dim: usize, entries: &[[f64; 2]]) -> Result<CMat> {
    if entries.len() != dim * dim {
        return Err(Error::Parse(format!(
            "matrix needs {} entries for dim {dim}, got {}",
            dim * dim,
            entries.len()
        )));
    }
    CMat::from_row_major(dim, dim, to_complex(entries))
}

/// Square matrix whose side is inferred from the entry count.
pub fn decode_square(entries: &[[f64; 2]]) -> Result<CMat> {
    let dim = (entries.len() as f64).sqrt().round() as usize;
    decode_matrix(dim, entries)
}

pub fn decode_ket(dim: usize, entries: &[[f64; 2]]) -> Result<Vec<Complex64>> {
    if entries.len() != dim {
        return Err(Error::Parse(format!("ket needs {dim} entries, got {}", entries.len())));
    }
    Ok(to_complex(entries))
}

fn to_complex(entries: &[[f64; 2]]) -> Vec<Complex64> {
    entries.iter().map(|[re, im]| Complex64::new(*re, *im)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_operator_file() {
        let text = r#"{"dim": 2, "operators": [
            {"label": "a", "kind": "ket", "entries": [[1, 0], [0, 0]]},
            {"label": "b", "kind": "psd", "entries": [[0.5, 0], [0, 0], [0, 0], [0.5, 0]]}
        ]}"#;
        let f: OperatorFile = serde_json::from_str(text).unwrap();
        assert_eq!(f.operators[0].kind, EntryKind::Ket);
        let m = decode_matrix(2, &f.operators[1].entries).unwrap();
        assert_eq!(m[(1, 1)], Complex64::new(0.5, 0.0));
        assert!(decode_matrix(3, &f.operators[1].entries).is_err());
        assert!(decode_ket(3, &f.operators[0].entries).is_err());
    }
}
