//! Matrix input: inline JSON or a file path, both holding a MatrixDocument.

use qh2_core::{c64, Mat2};
use serde::Deserialize;

/// On-disk / inline matrix format: {"matrix": 2x2 of [re, im], "label"?}.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDocument {
    pub matrix: [[[f64; 2]; 2]; 2],
    #[serde(default)]
    pub label: Option<String>,
}

impl MatrixDocument {
    pub fn to_mat2(&self) -> Mat2 {
        let m = &self.matrix;
        Mat2::new(
            c64(m[0][0][0], m[0][0][1]),
            c64(m[0][1][0], m[0][1][1]),
            c64(m[1][0][0], m[1][0][1]),
            c64(m[1][1][0], m[1][1][1]),
        )
    }
}

/// A value that failed before any verdict could be computed; rendered as
/// {"error", "detail"} with exit code 2.
pub struct InputError {
    pub detail: String,
}

/// Reads a matrix argument: values starting with '{' parse as inline JSON,
/// anything else is a file path.
pub fn load_matrix(arg: &str) -> Result<(Mat2, Option<String>), InputError> {
    let (text, origin) = if arg.trim_start().starts_with('{') {
        (arg.to_string(), "inline matrix".to_string())
    } else {
        let text = std::fs::read_to_string(arg).map_err(|e| InputError {
            detail: format!("{arg}: {e}"),
        })?;
        (text, arg.to_string())
    };
    let doc: MatrixDocument = serde_json::from_str(&text).map_err(|e| InputError {
        detail: format!("{origin}: {e}"),
    })?;
    for (i, row) in doc.matrix.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            if !entry.iter().all(|x| x.is_finite()) {
                return Err(InputError {
                    detail: format!("{origin}: non-finite entry at row {i}, column {j}"),
                });
            }
        }
    }
    Ok((doc.to_mat2(), doc.label))
}
