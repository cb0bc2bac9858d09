//! Choi matrices and dense channel primitives.
//!
//! A channel `Φ : M_d → M_d` is carried by its unnormalized Choi matrix
//!
//! ```text
//! J(Φ) = Σ_{ij} Φ(|i⟩⟨j|) ⊗ |i⟩⟨j| ∈ M_d ⊗ M_d,
//! ```
//!
//! with the **output factor first**: the row index of `J` is the composite
//! `(a, i) = a·d + i` where `a` indexes the output space and `i` the input
//! space. The partial transpose acts on the second (input) factor,
//! `X^Γ = [id ⊗ ⊤](X)`. Half the literature uses the opposite ordering;
//! every index computation in this crate assumes the one above.

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{self, CMat, CVec, LinalgError};

/// Hermiticity validation threshold for Choi matrices.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Default positivity tolerance; every positivity test also takes an
/// explicit tolerance so experiments can report margins.
pub const PSD_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum QuantumError {
    #[error("matrix of side {0} is not of the form d²")]
    NotASquareSide(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("imaginary residue {0:.3e} exceeds tolerance")]
    NonRealValue(f64),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The Choi matrix of a linear map `M_d → M_d`, in output⊗input ordering.
#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    d: usize,
    m: CMat,
}

impl ChoiMatrix {
    /// Wraps a `d²×d²` matrix, validating the shape and Hermiticity (within
    /// [`HERMITICITY_TOL`] relative to the largest entry).
    pub fn new(d: usize, m: CMat) -> Result<Self, QuantumError> {
        if m.nrows() != d * d || m.ncols() != d * d {
            return Err(QuantumError::DimensionMismatch(m.nrows(), d * d));
        }
        let scale = linalg::max_abs(&m).max(1.0);
        let m = linalg::hermitian_part_checked(&m, HERMITICITY_TOL * scale)?;
        Ok(ChoiMatrix { d, m })
    }

    /// Wraps without validation; for matrices Hermitian by construction.
    pub fn new_unchecked(d: usize, m: CMat) -> Self {
        debug_assert_eq!(m.nrows(), d * d);
        ChoiMatrix { d, m }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    pub fn into_matrix(self) -> CMat {
        self.m
    }

    #[inline]
    pub fn entry(&self, out_row: usize, in_row: usize, out_col: usize, in_col: usize) -> Complex64 {
        self.m[(out_row * self.d + in_row, out_col * self.d + in_col)]
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    /// `[Tr ⊗ id](J)`: partial trace over the output factor; equals `I_d`
    /// for trace-preserving maps.
    pub fn input_marginal(&self) -> CMat {
        let d = self.d;
        let mut out = CMat::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for a in 0..d {
                    acc += self.m[(a * d + i, a * d + j)];
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// Deviation diagnostics for the channel invariants: Hermiticity defect,
    /// `|Tr J − d|`, `max|[Tr⊗id](J) − I|`, and the smallest eigenvalue.
    pub fn channel_defects(&self) -> Result<ChannelDefects, QuantumError> {
        let herm = linalg::hermiticity_defect(&self.m);
        let trace_dev = (self.trace() - Complex64::new(self.d as f64, 0.0)).norm();
        let marginal = self.input_marginal();
        let eye = CMat::identity(self.d, self.d);
        let marginal_dev = linalg::max_abs(&(marginal - eye));
        let min_eig = linalg::min_eigenvalue(&self.m)?;
        Ok(ChannelDefects { hermiticity: herm, trace_dev, marginal_dev, min_eig })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ChannelDefects {
    pub hermiticity: f64,
    pub trace_dev: f64,
    pub marginal_dev: f64,
    pub min_eig: f64,
}

/// `|Ω_d⟩ = d^{−1/2} Σ_i |ii⟩`.
pub fn max_entangled_vector(d: usize) -> CVec {
    assert!(d >= 1);
    let norm = 1.0 / (d as f64).sqrt();
    CVec::from_fn(d * d, |k, _| {
        if k / d == k % d {
            Complex64::new(norm, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// The flip (swap) unitary `F = Σ |ij⟩⟨ji|`; `F² = I`, `Tr F = d`.
pub fn flip_operator(d: usize) -> CMat {
    let mut f = CMat::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            f[(i * d + j, j * d + i)] = Complex64::new(1.0, 0.0);
        }
    }
    f
}

/// `Π_diag = Σ_i |ii⟩⟨ii|`, the Choi matrix of the completely dephasing map.
pub fn diag_projector(d: usize) -> CMat {
    let mut p = CMat::zeros(d * d, d * d);
    for i in 0..d {
        p[(i * d + i, i * d + i)] = Complex64::new(1.0, 0.0);
    }
    p
}

/// Partial transpose on the input (second) factor:
/// `X^Γ_{(a,i),(b,j)} = X_{(a,j),(b,i)}`.
pub fn partial_transpose(x: &CMat) -> Result<CMat, QuantumError> {
    let side = x.nrows();
    if x.ncols() != side {
        return Err(QuantumError::DimensionMismatch(side, x.ncols()));
    }
    let d = (side as f64).sqrt().round() as usize;
    if d * d != side {
        return Err(QuantumError::NotASquareSide(side));
    }
    let mut out = CMat::zeros(side, side);
    for a in 0..d {
        for i in 0..d {
            for b in 0..d {
                for j in 0..d {
                    out[(a * d + i, b * d + j)] = x[(a * d + j, b * d + i)];
                }
            }
        }
    }
    Ok(out)
}

/// Positive semidefiniteness up to tolerance: `λ_min(X) ≥ −tol · scale`
/// with `scale = max(1, Tr X / side)`. Validates Hermiticity first.
pub fn is_psd(x: &CMat, tol: f64) -> Result<bool, QuantumError> {
    Ok(psd_margin(x, tol)?.0)
}

/// Returns `(is_psd, λ_min)`.
pub fn psd_margin(x: &CMat, tol: f64) -> Result<(bool, f64), QuantumError> {
    let scale = x.nrows().max(1);
    let h = linalg::hermitian_part_checked(x, 1e-9 * linalg::max_abs(x).max(1.0))?;
    let min_eig = linalg::min_eigenvalue(&h)?;
    let trace_scale = (h.trace().re / scale as f64).max(1.0);
    Ok((min_eig >= -tol * trace_scale, min_eig))
}

/// PPT test: positive semidefiniteness of the partial transpose.
pub fn is_ppt(choi: &ChoiMatrix, tol: f64) -> Result<bool, QuantumError> {
    let gamma = partial_transpose(choi.matrix())?;
    is_psd(&gamma, tol)
}

/// Smallest eigenvalue of the partial transpose (the PPT margin).
pub fn ppt_margin(choi: &ChoiMatrix) -> Result<f64, QuantumError> {
    let gamma = partial_transpose(choi.matrix())?;
    Ok(linalg::min_eigenvalue(&gamma)?)
}

/// Nuclear (trace) norm.
pub fn nuclear_norm(m: &CMat) -> f64 {
    linalg::nuclear_norm(m)
}

/// Zeroes the diagonal: `X̊ = X − diag(X)`.
pub fn off_diagonal(x: &CMat) -> CMat {
    let mut out = x.clone();
    for i in 0..x.nrows().min(x.ncols()) {
        out[(i, i)] = Complex64::new(0.0, 0.0);
    }
    out
}

/// Applies a Choi-carried map: `Φ(Z)_{ab} = Σ_{ij} Z_{ij} J_{(a,i),(b,j)}`.
pub fn apply_choi(choi: &ChoiMatrix, z: &CMat) -> Result<CMat, QuantumError> {
    let d = choi.dim();
    if z.nrows() != d || z.ncols() != d {
        return Err(QuantumError::DimensionMismatch(z.nrows(), d));
    }
    let mut out = CMat::zeros(d, d);
    for a in 0..d {
        for b in 0..d {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..d {
                for j in 0..d {
                    acc += z[(i, j)] * choi.m[(a * d + i, b * d + j)];
                }
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

/// Serializes a complex matrix as nested JSON arrays of `[re, im]` pairs
/// (the fixture format).
pub fn matrix_to_json(m: &CMat) -> serde_json::Value {
    let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect();
    serde_json::json!(rows)
}

/// Reads a complex matrix from nested JSON arrays of `[re, im]` pairs.
pub fn matrix_from_json(value: &serde_json::Value) -> Result<CMat, QuantumError> {
    let rows: Vec<Vec<[f64; 2]>> = serde_json::from_value(value.clone())
        .map_err(|_| QuantumError::NotASquareSide(0))?;
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(QuantumError::DimensionMismatch(nrows, ncols));
    }
    Ok(CMat::from_fn(nrows, ncols, |i, j| {
        Complex64::new(rows[i][j][0], rows[i][j][1])
    }))
}

/// Builds the Choi matrix of a map given by its action on matrix units.
pub fn choi_of_fn(d: usize, mut phi: impl FnMut(&CMat) -> CMat) -> ChoiMatrix {
    let mut j = CMat::zeros(d * d, d * d);
    let mut unit = CMat::zeros(d, d);
    for i in 0..d {
        for jj in 0..d {
            unit[(i, jj)] = Complex64::new(1.0, 0.0);
            let image = phi(&unit);
            unit[(i, jj)] = Complex64::new(0.0, 0.0);
            for a in 0..d {
                for b in 0..d {
                    j[(a * d + i, b * d + jj)] = image[(a, b)];
                }
            }
        }
    }
    ChoiMatrix::new_unchecked(d, j)
}
