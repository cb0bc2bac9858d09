//! Dense complex-matrix kernels.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>` (column-major). The hot
//! operations — matrix products, Gram matrices, Cholesky, triangular
//! inverses, Hermitian eigendecompositions — go through the system
//! BLAS/LAPACK (OpenBLAS); everything else uses nalgebra directly.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::os::raw::{c_char, c_int};
use thiserror::Error;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

#[derive(Debug, Error, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not square: {0}×{1}")]
    NotSquare(usize, usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix is not Hermitian (defect {defect:.3e} exceeds {tol:.3e})")]
    NotHermitian { defect: f64, tol: f64 },
    #[error("{routine} failed with info = {info}")]
    Lapack { routine: &'static str, info: i32 },
    #[error("matrix is not positive definite (leading minor {0})")]
    NotPositiveDefinite(i32),
}

#[link(name = "openblas")]
extern "C" {
    fn zgemm_(
        transa: *const c_char,
        transb: *const c_char,
        m: *const c_int,
        n: *const c_int,
        k: *const c_int,
        alpha: *const Complex64,
        a: *const Complex64,
        lda: *const c_int,
        b: *const Complex64,
        ldb: *const c_int,
        beta: *const Complex64,
        c: *mut Complex64,
        ldc: *const c_int,
    );
    fn zherk_(
        uplo: *const c_char,
        trans: *const c_char,
        n: *const c_int,
        k: *const c_int,
        alpha: *const f64,
        a: *const Complex64,
        lda: *const c_int,
        beta: *const f64,
        c: *mut Complex64,
        ldc: *const c_int,
    );
    fn zpotrf_(
        uplo: *const c_char,
        n: *const c_int,
        a: *mut Complex64,
        lda: *const c_int,
        info: *mut c_int,
    );
    fn ztrtri_(
        uplo: *const c_char,
        diag: *const c_char,
        n: *const c_int,
        a: *mut Complex64,
        lda: *const c_int,
        info: *mut c_int,
    );
    fn zheev_(
        jobz: *const c_char,
        uplo: *const c_char,
        n: *const c_int,
        a: *mut Complex64,
        lda: *const c_int,
        w: *mut f64,
        work: *mut Complex64,
        lwork: *const c_int,
        rwork: *mut f64,
        info: *mut c_int,
    );
    fn openblas_set_num_threads(n: c_int);
}

/// Caps the BLAS thread pool; experiments pin it to 1 so that outer
/// sample-level parallelism composes predictably and output stays
/// independent of the machine's core count.
pub fn set_blas_threads(n: usize) {
    unsafe { openblas_set_num_threads(n.max(1) as c_int) };
}

const N: *const c_char = c"N".as_ptr();
const C: *const c_char = c"C".as_ptr();
const U: *const c_char = c"U".as_ptr();
const L: *const c_char = c"L".as_ptr();
const V: *const c_char = c"V".as_ptr();

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    /// Use the matrix as is.
    None,
    /// Use the conjugate transpose.
    Adjoint,
}

impl Op {
    fn flag(self) -> *const c_char {
        match self {
            Op::None => N,
            Op::Adjoint => C,
        }
    }

    fn shape(self, m: &CMat) -> (usize, usize) {
        match self {
            Op::None => (m.nrows(), m.ncols()),
            Op::Adjoint => (m.ncols(), m.nrows()),
        }
    }
}

/// `op_a(A) · op_b(B)` through BLAS.
pub fn gemm(op_a: Op, a: &CMat, op_b: Op, b: &CMat) -> CMat {
    let (m, ka) = op_a.shape(a);
    let (kb, n) = op_b.shape(b);
    assert_eq!(ka, kb, "gemm inner dimension mismatch");
    let mut c = CMat::zeros(m, n);
    if m == 0 || n == 0 || ka == 0 {
        return c;
    }
    let (mm, nn, kk) = (m as c_int, n as c_int, ka as c_int);
    let lda = a.nrows().max(1) as c_int;
    let ldb = b.nrows().max(1) as c_int;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    unsafe {
        zgemm_(
            op_a.flag(),
            op_b.flag(),
            &mm,
            &nn,
            &kk,
            &one,
            a.as_ptr(),
            &lda,
            b.as_ptr(),
            &ldb,
            &zero,
            c.as_mut_ptr(),
            &mm,
        );
    }
    c
}

/// Gram matrix `A† A` (Hermitian), via a rank-k update at half the flops of
/// a general product.
pub fn gram(a: &CMat) -> CMat {
    let n = a.ncols();
    let k = a.nrows();
    let mut h = CMat::zeros(n, n);
    if n == 0 {
        return h;
    }
    let (nn, kk) = (n as c_int, k.max(1) as c_int);
    let (one, zero) = (1.0f64, 0.0f64);
    unsafe {
        zherk_(L, C, &nn, &kk, &one, a.as_ptr(), &kk, &zero, h.as_mut_ptr(), &nn);
    }
    // zherk fills the lower triangle only.
    for j in 0..n {
        for i in 0..j {
            h[(i, j)] = h[(j, i)].conj();
        }
    }
    h
}

/// Adds `A† A` into an accumulator (used when a Gram matrix is built from
/// vertically stacked slabs).
pub fn gram_accumulate(acc: &mut CMat, a: &CMat) {
    let n = a.ncols();
    assert_eq!(acc.nrows(), n);
    assert_eq!(acc.ncols(), n);
    let k = a.nrows();
    if n == 0 || k == 0 {
        return;
    }
    let (nn, kk) = (n as c_int, k as c_int);
    let (one, one_beta) = (1.0f64, 1.0f64);
    unsafe {
        zherk_(L, C, &nn, &kk, &one, a.as_ptr(), &kk, &one_beta, acc.as_mut_ptr(), &nn);
    }
}

/// Copies the lower triangle of a `zherk` accumulator onto the upper one.
pub fn symmetrize_from_lower(h: &mut CMat) {
    let n = h.nrows();
    for j in 0..n {
        for i in 0..j {
            h[(i, j)] = h[(j, i)].conj();
        }
    }
}

/// Upper-triangular Cholesky factor `R` with `H = R† R` and positive real
/// diagonal.
pub fn cholesky_upper(h: &CMat) -> Result<CMat, LinalgError> {
    let n = check_square(h)?;
    let mut r = h.clone();
    let nn = n as c_int;
    let mut info: c_int = 0;
    unsafe { zpotrf_(U, &nn, r.as_mut_ptr(), &nn, &mut info) };
    if info > 0 {
        return Err(LinalgError::NotPositiveDefinite(info));
    }
    if info < 0 {
        return Err(LinalgError::Lapack { routine: "zpotrf", info });
    }
    for j in 0..n {
        for i in j + 1..n {
            r[(i, j)] = Complex64::new(0.0, 0.0);
        }
    }
    Ok(r)
}

/// Inverse of an upper-triangular matrix.
pub fn triangular_inverse_upper(r: &CMat) -> Result<CMat, LinalgError> {
    let n = check_square(r)?;
    let mut inv = r.clone();
    let nn = n as c_int;
    let mut info: c_int = 0;
    unsafe { ztrtri_(U, N, &nn, inv.as_mut_ptr(), &nn, &mut info) };
    if info != 0 {
        return Err(LinalgError::Lapack { routine: "ztrtri", info });
    }
    Ok(inv)
}

/// Eigendecomposition of a Hermitian matrix: ascending eigenvalues and a
/// unitary matrix of eigenvectors (columns).
pub fn eigh(h: &CMat) -> Result<(Vec<f64>, CMat), LinalgError> {
    zheev(h, true).map(|(w, v)| (w, v.expect("vectors requested")))
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn eigvalsh(h: &CMat) -> Result<Vec<f64>, LinalgError> {
    zheev(h, false).map(|(w, _)| w)
}

fn zheev(h: &CMat, vectors: bool) -> Result<(Vec<f64>, Option<CMat>), LinalgError> {
    let n = check_square(h)?;
    if n == 0 {
        return Ok((Vec::new(), vectors.then(|| CMat::zeros(0, 0))));
    }
    let mut a = h.clone();
    let mut w = vec![0.0f64; n];
    let nn = n as c_int;
    let jobz = if vectors { V } else { N };
    let mut info: c_int = 0;
    let mut rwork = vec![0.0f64; (3 * n - 2).max(1)];
    // workspace query
    let mut probe = [Complex64::new(0.0, 0.0)];
    let minus_one: c_int = -1;
    unsafe {
        zheev_(jobz, L, &nn, a.as_mut_ptr(), &nn, w.as_mut_ptr(), probe.as_mut_ptr(), &minus_one, rwork.as_mut_ptr(), &mut info);
    }
    if info != 0 {
        return Err(LinalgError::Lapack { routine: "zheev (query)", info });
    }
    let lwork = (probe[0].re as usize).max(2 * n);
    let mut work = vec![Complex64::new(0.0, 0.0); lwork];
    let lwork_i = lwork as c_int;
    unsafe {
        zheev_(jobz, L, &nn, a.as_mut_ptr(), &nn, w.as_mut_ptr(), work.as_mut_ptr(), &lwork_i, rwork.as_mut_ptr(), &mut info);
    }
    if info != 0 {
        return Err(LinalgError::Lapack { routine: "zheev", info });
    }
    Ok((w, vectors.then_some(a)))
}

/// Hermiticity defect `max_{ij} |X_{ij} − conj(X_{ji})|`.
pub fn hermiticity_defect(x: &CMat) -> f64 {
    let n = x.nrows().min(x.ncols());
    let mut defect: f64 = 0.0;
    for j in 0..n {
        for i in 0..=j {
            defect = defect.max((x[(i, j)] - x[(j, i)].conj()).norm());
        }
    }
    defect
}

/// Ensures Hermiticity within `tol` and returns the exactly Hermitian part
/// `(X + X†)/2`.
pub fn hermitian_part_checked(x: &CMat, tol: f64) -> Result<CMat, LinalgError> {
    check_square(x)?;
    let defect = hermiticity_defect(x);
    if defect > tol {
        return Err(LinalgError::NotHermitian { defect, tol });
    }
    let mut h = x.clone();
    let n = h.nrows();
    for j in 0..n {
        for i in 0..j {
            let avg = (h[(i, j)] + h[(j, i)].conj()) * 0.5;
            h[(i, j)] = avg;
            h[(j, i)] = avg.conj();
        }
        h[(j, j)] = Complex64::new(h[(j, j)].re, 0.0);
    }
    Ok(h)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(h: &CMat) -> Result<f64, LinalgError> {
    Ok(*eigvalsh(h)?
        .first()
        .expect("nonempty matrix"))
}

/// `H^{−1/2}` via eigendecomposition, flooring eigenvalues at
/// `1e−14 · λ_max` before inversion.
pub fn inverse_sqrt_psd(h: &CMat) -> Result<CMat, LinalgError> {
    let (w, v) = eigh(h)?;
    let floor = 1e-14 * w.last().copied().unwrap_or(0.0).max(0.0);
    let n = h.nrows();
    let mut scaled = v.clone();
    for (j, &lambda) in w.iter().enumerate() {
        let inv_sqrt = 1.0 / lambda.max(floor).sqrt();
        for i in 0..n {
            scaled[(i, j)] *= inv_sqrt;
        }
    }
    Ok(gemm(Op::None, &scaled, Op::Adjoint, &v))
}

/// Nuclear norm (sum of singular values), via the spectrum of `M† M`.
pub fn nuclear_norm(m: &CMat) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    // Work with the smaller Gram matrix of the two.
    let g = if m.nrows() >= m.ncols() {
        gram(m)
    } else {
        gram(&m.adjoint())
    };
    let eigs = eigvalsh(&g).expect("Gram matrices are Hermitian");
    // Eigenvalues of the Gram matrix carry O(ε·λ_max) noise; left alone it
    // would surface as O(√ε) spurious singular values.
    let floor = 1e-13 * eigs.last().copied().unwrap_or(0.0).max(0.0);
    eigs.iter()
        .map(|&l| if l <= floor { 0.0 } else { l.sqrt() })
        .sum()
}

fn check_square(m: &CMat) -> Result<usize, LinalgError> {
    if m.nrows() != m.ncols() {
        return Err(LinalgError::NotSquare(m.nrows(), m.ncols()));
    }
    Ok(m.nrows())
}

/// Converts a real matrix into the complex carrier type.
pub fn complex_from_real(m: &DMatrix<f64>) -> CMat {
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| Complex64::new(m[(i, j)], 0.0))
}

pub fn frobenius_norm(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
