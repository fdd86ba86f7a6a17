//! Tensor file schema: a JSON object with "dims": [I, J, 2] and "slices":
//! an array of two row-major I x J matrices. Parsing validates shape and
//! finiteness with field context; emission round-trips every finite double
//! bit-exactly.

use gsdfit::{DenseMatrix, Tensor3};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Serialize, Deserialize)]
pub struct TensorFile {
    pub dims: Vec<usize>,
    pub slices: Vec<Vec<Vec<f64>>>,
}

impl TensorFile {
    pub fn from_tensor(y: &Tensor3) -> Self {
        let (i, j, k) = y.dims();
        let slices = (0..k)
            .map(|s| {
                (0..i)
                    .map(|r| (0..j).map(|c| y.get(r, c, s)).collect())
                    .collect()
            })
            .collect();
        Self {
            dims: vec![i, j, k],
            slices,
        }
    }

    pub fn into_tensor(self) -> Result<Tensor3, CliError> {
        if self.dims.len() != 3 {
            return Err(CliError::computation(format!(
                "field \"dims\" must have 3 entries, got {}",
                self.dims.len()
            )));
        }
        let (i, j, k) = (self.dims[0], self.dims[1], self.dims[2]);
        if k != 2 {
            return Err(CliError::computation(format!(
                "field \"dims\": K must equal 2, got {k}"
            )));
        }
        if i == 0 || j == 0 {
            return Err(CliError::computation(
                "field \"dims\": I and J must be positive".to_string(),
            ));
        }
        if self.slices.len() != 2 {
            return Err(CliError::computation(format!(
                "field \"slices\" must hold exactly 2 matrices, got {}",
                self.slices.len()
            )));
        }
        let mut mats = Vec::with_capacity(2);
        for (s, slice) in self.slices.iter().enumerate() {
            if slice.len() != i {
                return Err(CliError::computation(format!(
                    "slices[{s}] must have {i} rows, got {}",
                    slice.len()
                )));
            }
            let mut data = Vec::with_capacity(i * j);
            for (r, row) in slice.iter().enumerate() {
                if row.len() != j {
                    return Err(CliError::computation(format!(
                        "slices[{s}][{r}] must have {j} entries, got {}",
                        row.len()
                    )));
                }
                for (c, v) in row.iter().enumerate() {
                    if !v.is_finite() {
                        return Err(CliError::computation(format!(
                            "slices[{s}][{r}][{c}] is not finite"
                        )));
                    }
                    data.push(*v);
                }
            }
            mats.push(DenseMatrix::from_vec(i, j, data).map_err(CliError::from_core)?);
        }
        Tensor3::from_slices(&mats[0], &mats[1]).map_err(CliError::from_core)
    }
}

pub fn parse_tensor_str(text: &str) -> Result<Tensor3, CliError> {
    let file: TensorFile = serde_json::from_str(text).map_err(|e| {
        CliError::computation(format!(
            "malformed tensor file at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    file.into_tensor()
}

pub fn parse_tensor_file(path: &str) -> Result<Tensor3, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::computation(format!("cannot read {path}: {e}")))?;
    parse_tensor_str(&text)
}

pub fn emit_tensor(y: &Tensor3) -> String {
    serde_json::to_string_pretty(&TensorFile::from_tensor(y)).expect("tensor serializes")
}

/// FNV-1a over the canonical tensor serialization: a stable content
/// fingerprint echoed in reports.
pub fn tensor_digest(y: &Tensor3) -> String {
    let canon = serde_json::to_string(&TensorFile::from_tensor(y)).expect("tensor serializes");
    let mut hash: u64 = 0xcbf29ce484222325;
    for b in canon.as_bytes() {
        hash ^= u64::from(*b);
        hash = hash.wrapping_mul(0x100000001b3);
    }
    format!("{hash:016x}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_diagonal_example() {
        let y =
            parse_tensor_str(r#"{"dims":[2,2,2],"slices":[[[1,0],[0,1]],[[1,0],[0,2]]]}"#).unwrap();
        assert_eq!(y.dims(), (2, 2, 2));
        assert_eq!(y.get(0, 0, 0), 1.0);
        assert_eq!(y.get(1, 1, 1), 2.0);
    }

    #[test]
    fn rejects_bad_third_mode() {
        let err = parse_tensor_str(r#"{"dims":[2,2,3],"slices":[[[1,0],[0,1]],[[1,0],[0,2]]]}"#)
            .unwrap_err();
        assert!(err.to_string().contains("K must equal 2"), "{err}");
    }

    #[test]
    fn rejects_ragged_rows_with_context() {
        let err =
            parse_tensor_str(r#"{"dims":[2,2,2],"slices":[[[1,0],[0]],[[1,0],[0,2]]]}"#).unwrap_err();
        assert!(err.to_string().contains("slices[0][1]"), "{err}");
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let data: Vec<f64> = vec![
            1.0,
            -2.5e-17,
            std::f64::consts::PI,
            f64::MIN_POSITIVE,
            3.3333333333333335,
            -0.1,
            1e300,
            -7.0,
        ];
        let y = Tensor3::new(2, 2, 2, data).unwrap();
        let text = emit_tensor(&y);
        let back = parse_tensor_str(&text).unwrap();
        assert_eq!(y.data(), back.data());
    }
}
