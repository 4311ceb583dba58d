use serde::{Deserialize, Serialize};

use super::KernelError;

/// `k`-point correlation function `R_k = det[K(a_b, a_c)]` for `k <= 6`,
/// assembled from any kernel evaluator.
pub fn kpoint_correlation<F>(kernel: F, points: &[f64], k: usize) -> Result<f64, KernelError>
where
    F: Fn(f64, f64) -> Result<f64, KernelError>,
{
    if k != points.len() {
        return Err(KernelError::Domain(format!(
            "k = {k} does not match {} points",
            points.len()
        )));
    }
    if k == 0 || k > 6 {
        return Err(KernelError::Domain(format!("k must lie in 1..=6, got {k}")));
    }
    let mut mat = vec![0.0; k * k];
    for b in 0..k {
        for c in 0..k {
            mat[b * k + c] = kernel(points[b], points[c])?;
        }
    }
    Ok(det_small(&mut mat, k))
}

// Gaussian elimination with partial pivoting; k <= 6 keeps this exact enough.
fn det_small(mat: &mut [f64], k: usize) -> f64 {
    let mut det = 1.0;
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&a, &b| {
                mat[a * k + col]
                    .abs()
                    .partial_cmp(&mat[b * k + col].abs())
                    .unwrap()
            })
            .unwrap();
        if mat[pivot * k + col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for j in 0..k {
                mat.swap(col * k + j, pivot * k + j);
            }
            det = -det;
        }
        let d = mat[col * k + col];
        det *= d;
        for row in (col + 1)..k {
            let f = mat[row * k + col] / d;
            for j in col..k {
                mat[row * k + j] -= f * mat[col * k + j];
            }
        }
    }
    det
}

/// A kernel evaluated on a rectangular grid, with enough metadata to identify
/// the run that produced it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KernelGrid {
    pub a1: Vec<f64>,
    pub a2: Vec<f64>,
    /// `values[i][j] = K(a1[i], a2[j])`
    pub values: Vec<Vec<f64>>,
    pub meta: KernelGridMeta,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KernelGridMeta {
    pub kind: String,
    pub n: Option<u32>,
    pub x: Option<f64>,
    pub spec_id: String,
    pub tolerance: f64,
}

impl KernelGrid {
    pub fn evaluate<F>(
        a1: Vec<f64>,
        a2: Vec<f64>,
        meta: KernelGridMeta,
        kernel: F,
    ) -> Result<Self, KernelError>
    where
        F: Fn(f64, f64) -> Result<f64, KernelError>,
    {
        let mut values = Vec::with_capacity(a1.len());
        for &u in &a1 {
            let mut row = Vec::with_capacity(a2.len());
            for &v in &a2 {
                let val = kernel(u, v)?;
                if !val.is_finite() {
                    return Err(KernelError::Domain(format!(
                        "kernel value at ({u}, {v}) is not finite"
                    )));
                }
                row.push(val);
            }
            values.push(row);
        }
        Ok(KernelGrid { a1, a2, values, meta })
    }
}
