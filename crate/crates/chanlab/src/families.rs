//! Structured covariant channels and their entanglement criteria.
//!
//! Two structured families cover the five symmetry classes:
//!
//! - [`HHChannel`] — linear combinations of the completely depolarizing map,
//!   the identity, the transposition, and the dephasing (diagonal) map. The
//!   full span is the hyperoctahedral-covariant family; unitary, conjugate
//!   unitary, and orthogonal covariance are sub-families.
//! - [`DocChannel`] — channels covariant under diagonal unitary or diagonal
//!   orthogonal conjugation, parametrized by a matrix triple `(A, B, C)`
//!   with a shared diagonal:
//!
//!   ```text
//!   Φ(Z) = diag(A|diag Z⟩) + B̊ ⊙ Z + C̊ ⊙ Zᵀ
//!   ```
//!
//!   where `X̊` zeroes the diagonal and `⊙` is the entrywise product. The
//!   class `DUC` forces `C` diagonal, `CDUC` forces `B` diagonal.
//!
//! PPT is decided entrywise and spectrally (`C ⪰ 0` and
//! `|B_ij|² ≤ A_ij A_ji`); entanglement breaking is certified through the
//! factor-width-2 decomposition into `2×2` triples, refuted through PPT or
//! the realignment criterion, and left `Unknown` otherwise — exact
//! separability decision is out of scope.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, CMat};
use crate::quantum::{self, apply_choi, choi_of_fn, ChoiMatrix, QuantumError};

/// Shared-diagonal agreement required of a triple; beyond this the Choi the
/// triple was read from was malformed.
pub const DIAG_TOL: f64 = 1e-8;

/// Inequalities are tested as `lhs ≥ rhs − tol·(1 + |lhs| + |rhs|)`.
pub const INEQ_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum FamiliesError {
    #[error("triple diagonals disagree by {0:.3e}")]
    DiagonalMismatch(f64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("dimension {0} too small (need d ≥ 2)")]
    DimensionTooSmall(usize),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Linalg(#[from] linalg::LinalgError),
}

fn geq_with_tol(lhs: f64, rhs: f64) -> bool {
    lhs >= rhs - INEQ_TOL * (1.0 + lhs.abs() + rhs.abs())
}

// ---------------------------------------------------------------------------
// Hyperoctahedral-covariant channels (and their unitary/orthogonal subsets)
// ---------------------------------------------------------------------------

/// A channel in the span of (Δ, id, ⊤, diag):
/// `Φ = w_depol·Δ + w_id·id + w_transp·⊤ + w_diag·diag`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HHChannel {
    pub d: usize,
    pub w_depol: f64,
    pub w_id: f64,
    pub w_transp: f64,
    pub w_diag: f64,
}

impl HHChannel {
    pub fn new(d: usize, w_depol: f64, w_id: f64, w_transp: f64, w_diag: f64) -> Self {
        HHChannel { d, w_depol, w_id, w_transp, w_diag }
    }

    pub fn identity(d: usize) -> Self {
        Self::new(d, 0.0, 1.0, 0.0, 0.0)
    }

    pub fn depolarizing(d: usize) -> Self {
        Self::new(d, 1.0, 0.0, 0.0, 0.0)
    }

    pub fn transposition(d: usize) -> Self {
        Self::new(d, 0.0, 0.0, 1.0, 0.0)
    }

    pub fn dephasing(d: usize) -> Self {
        Self::new(d, 0.0, 0.0, 0.0, 1.0)
    }

    pub fn apply(&self, z: &CMat) -> CMat {
        let d = self.d;
        let mut out = CMat::zeros(d, d);
        let tr = z.trace() / Complex64::from(d as f64);
        for i in 0..d {
            for j in 0..d {
                let mut v = self.w_id * z[(i, j)] + self.w_transp * z[(j, i)];
                if i == j {
                    v += self.w_depol * tr + self.w_diag * z[(i, i)];
                }
                out[(i, j)] = v;
            }
        }
        out
    }

    /// `J = w_depol·I/d + w_id·d|Ω⟩⟨Ω| + w_transp·F + w_diag·Π_diag`.
    pub fn choi(&self) -> ChoiMatrix {
        let d = self.d;
        let mut j = CMat::identity(d * d, d * d) * Complex64::from(self.w_depol / d as f64);
        for i in 0..d {
            for k in 0..d {
                // d|Ω⟩⟨Ω| has entry 1 at ((i,i),(k,k))
                j[(i * d + i, k * d + k)] += Complex64::from(self.w_id);
                // F has entry 1 at ((i,k),(k,i))
                j[(i * d + k, k * d + i)] += Complex64::from(self.w_transp);
            }
            j[(i * d + i, i * d + i)] += Complex64::from(self.w_diag);
        }
        ChoiMatrix::new_unchecked(d, j)
    }

    /// Coefficients of the Choi matrix on the four orthogonal projectors
    /// `(Π₀, Π₁, Π₂, Π₃)`; the channel is completely positive iff all four
    /// are nonnegative.
    pub fn projector_coefficients(&self) -> [f64; 4] {
        let base = self.w_depol / self.d as f64;
        [
            base + self.w_id * self.d as f64 + self.w_transp + self.w_diag,
            base + self.w_transp,
            base - self.w_transp,
            base + self.w_transp + self.w_diag,
        ]
    }

    pub fn is_cp(&self, tol: f64) -> bool {
        self.projector_coefficients().iter().all(|&c| c >= -tol)
    }

    pub fn is_tp(&self, tol: f64) -> bool {
        (self.w_depol + self.w_id + self.w_transp + self.w_diag - 1.0).abs() <= tol
    }

    /// `(λ₁, λ₂, λ₃)` of the channel, in closed form.
    pub fn lambdas(&self) -> (f64, f64, f64) {
        let d = self.d as f64;
        let l1 = self.w_depol + self.w_id * d * d + self.w_transp * d + self.w_diag * d;
        let l2 = self.w_depol + self.w_id * d + self.w_transp * d * d + self.w_diag * d;
        let l3 = self.w_depol + self.w_id * d + self.w_transp * d + self.w_diag * d;
        (l1, l2, l3)
    }

    /// Composition, exact on the generator algebra.
    pub fn compose(&self, other: &HHChannel) -> Result<HHChannel, FamiliesError> {
        if self.d != other.d {
            return Err(FamiliesError::DimensionMismatch(self.d, other.d));
        }
        // generator order: [Δ, id, ⊤, diag]; TABLE[i][j] = index of gᵢ∘gⱼ
        const TABLE: [[usize; 4]; 4] = [
            [0, 0, 0, 0], // Δ∘·
            [0, 1, 2, 3], // id∘·
            [0, 2, 1, 3], // ⊤∘·
            [0, 3, 3, 3], // diag∘·
        ];
        let a = [self.w_depol, self.w_id, self.w_transp, self.w_diag];
        let b = [other.w_depol, other.w_id, other.w_transp, other.w_diag];
        let mut w = [0.0f64; 4];
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                w[TABLE[i][j]] += ai * bj;
            }
        }
        Ok(HHChannel::new(self.d, w[0], w[1], w[2], w[3]))
    }
}

/// The four closed-form twirl families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TwirlFamily {
    /// Unitary covariance `(U, U)`.
    UU,
    /// Conjugate-unitary covariance `(U, Ū)`.
    UUbar,
    /// Orthogonal covariance `(O, O)`.
    OO,
    /// Hyperoctahedral covariance `(H, H)`.
    HH,
}

/// PPT (equivalently entanglement-breaking) test for the twirled channel of
/// a channel with parameters `(λ₁, λ₂, λ₃)`:
///
/// - `(U,U)`:  `0 ≤ λ₁ ≤ d`
/// - `(U,Ū)`:  `0 ≤ λ₂ ≤ d`
/// - `(O,O)`:  both of the above
/// - `(H,H)`:  `0 ≤ λ₃ ≤ d`, `0 ≤ λ₁,λ₂ ≤ dλ₃`, `2λ₃−d ≤ λ₁,λ₂ ≤ d`
pub fn ppt_eb_test(family: TwirlFamily, d: usize, l1: f64, l2: f64, l3: f64, tol: f64) -> bool {
    let df = d as f64;
    let within = |x: f64, lo: f64, hi: f64| x >= lo - tol && x <= hi + tol;
    match family {
        TwirlFamily::UU => within(l1, 0.0, df),
        TwirlFamily::UUbar => within(l2, 0.0, df),
        TwirlFamily::OO => within(l1, 0.0, df) && within(l2, 0.0, df),
        TwirlFamily::HH => {
            within(l3, 0.0, df)
                && within(l1, 0.0, df * l3 + tol)
                && within(l2, 0.0, df * l3 + tol)
                && within(l1, 2.0 * l3 - df, df)
                && within(l2, 2.0 * l3 - df, df)
        }
    }
}

// ---------------------------------------------------------------------------
// Diagonal-covariant channels
// ---------------------------------------------------------------------------

/// Covariance class of a diagonal channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DocClass {
    /// Diagonal unitary covariance: parametrized by `(A, B)`.
    Duc,
    /// Conjugate diagonal unitary covariance: parametrized by `(A, C)`.
    Cduc,
    /// Diagonal orthogonal covariance: the full triple `(A, B, C)`.
    Doc,
}

/// A matrix triple `(A, B, C)` with shared diagonal. `A` is real (its
/// entries come from diagonal entries of a Hermitian Choi matrix); `B` and
/// `C` are Hermitian candidates.
#[derive(Debug, Clone, PartialEq)]
pub struct DocTriple {
    d: usize,
    a: DMatrix<f64>,
    b: CMat,
    c: CMat,
}

impl DocTriple {
    pub fn new(a: DMatrix<f64>, b: CMat, c: CMat) -> Result<Self, FamiliesError> {
        let d = a.nrows();
        if a.ncols() != d || b.nrows() != d || b.ncols() != d || c.nrows() != d || c.ncols() != d {
            return Err(FamiliesError::DimensionMismatch(d, b.nrows()));
        }
        let mut dev: f64 = 0.0;
        for i in 0..d {
            dev = dev.max((b[(i, i)] - Complex64::from(a[(i, i)])).norm());
            dev = dev.max((c[(i, i)] - Complex64::from(a[(i, i)])).norm());
        }
        if dev > DIAG_TOL {
            return Err(FamiliesError::DiagonalMismatch(dev));
        }
        Ok(DocTriple { d, a, b, c })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &CMat {
        &self.b
    }

    pub fn c(&self) -> &CMat {
        &self.c
    }

    /// Triple of the identity channel: `(I, J, I)`.
    pub fn identity(d: usize) -> Self {
        let eye_c = CMat::identity(d, d);
        DocTriple {
            d,
            a: DMatrix::identity(d, d),
            b: CMat::from_element(d, d, Complex64::new(1.0, 0.0)),
            c: eye_c,
        }
    }

    /// Triple of the completely depolarizing channel: `(J/d, I/d, I/d)`.
    pub fn depolarizing(d: usize) -> Self {
        let inv = 1.0 / d as f64;
        DocTriple {
            d,
            a: DMatrix::from_element(d, d, inv),
            b: CMat::identity(d, d) * Complex64::from(inv),
            c: CMat::identity(d, d) * Complex64::from(inv),
        }
    }

    /// Triple of the dephasing channel: `(I, I, I)`.
    pub fn dephasing(d: usize) -> Self {
        DocTriple {
            d,
            a: DMatrix::identity(d, d),
            b: CMat::identity(d, d),
            c: CMat::identity(d, d),
        }
    }

    /// Triple of the transposition map: `(I, I, J)`.
    pub fn transposition(d: usize) -> Self {
        DocTriple {
            d,
            a: DMatrix::identity(d, d),
            b: CMat::identity(d, d),
            c: CMat::from_element(d, d, Complex64::new(1.0, 0.0)),
        }
    }

    pub fn max_diag_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.d {
            dev = dev.max((self.b[(i, i)] - Complex64::from(self.a[(i, i)])).norm());
            dev = dev.max((self.c[(i, i)] - Complex64::from(self.a[(i, i)])).norm());
        }
        dev
    }

    /// Composition of triples: if `self` carries `Φ₁` and `other` carries
    /// `Φ₂`, the result carries `Φ₁ ∘ Φ₂`:
    ///
    /// ```text
    /// 𝒜 = A·D,   ℬ = diag(AD) + B̊⊙E̊ + C̊⊙F̊ᵀ,   𝒞 = diag(AD) + B̊⊙F̊ + C̊⊙E̊ᵀ
    /// ```
    pub fn compose(&self, other: &DocTriple) -> Result<DocTriple, FamiliesError> {
        if self.d != other.d {
            return Err(FamiliesError::DimensionMismatch(self.d, other.d));
        }
        let d = self.d;
        let ad = &self.a * &other.a;
        let mut b_new = CMat::zeros(d, d);
        let mut c_new = CMat::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                if i == j {
                    b_new[(i, i)] = Complex64::from(ad[(i, i)]);
                    c_new[(i, i)] = Complex64::from(ad[(i, i)]);
                } else {
                    let (b1, c1) = (self.b[(i, j)], self.c[(i, j)]);
                    let (e2, f2) = (other.b[(i, j)], other.c[(i, j)]);
                    // (F̊ᵀ)_ij = F_ji = conj(F_ij) for Hermitian F
                    b_new[(i, j)] = b1 * e2 + c1 * other.c[(j, i)];
                    c_new[(i, j)] = b1 * f2 + c1 * other.b[(j, i)];
                }
            }
        }
        DocTriple::new(ad, b_new, c_new)
    }
}

/// Validity report for a triple as a CP/TP channel, with margins.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DocValidity {
    /// `min_{ij} A_ij` (CP requires ≥ 0).
    pub min_a_entry: f64,
    /// `λ_min(B)` (CP requires ⪰ 0).
    pub min_eig_b: f64,
    /// `min_{i≠j} (A_ij A_ji − |C_ij|²)` (CP requires ≥ 0).
    pub min_pair_margin: f64,
    /// `max_j |Σ_i A_ij − 1|` (TP requires column stochasticity).
    pub max_col_dev: f64,
    pub cp: bool,
    pub tp: bool,
}

/// A diagonal-covariant channel: a triple plus its covariance class. At
/// construction the parts the class does not carry are projected away
/// (`DUC` keeps `(A, B)`, `CDUC` keeps `(A, C)`).
#[derive(Debug, Clone, PartialEq)]
pub struct DocChannel {
    triple: DocTriple,
    class: DocClass,
}

impl DocChannel {
    pub fn new(mut triple: DocTriple, class: DocClass) -> Self {
        match class {
            DocClass::Duc => triple.c = diagonal_part(&triple.c),
            DocClass::Cduc => triple.b = diagonal_part(&triple.b),
            DocClass::Doc => {}
        }
        DocChannel { triple, class }
    }

    /// Infers the narrowest class the triple belongs to.
    pub fn classify(triple: DocTriple) -> Self {
        let b_off = linalg::max_abs(&quantum::off_diagonal(&triple.b));
        let c_off = linalg::max_abs(&quantum::off_diagonal(&triple.c));
        let class = if c_off <= 1e-14 {
            DocClass::Duc
        } else if b_off <= 1e-14 {
            DocClass::Cduc
        } else {
            DocClass::Doc
        };
        DocChannel { triple, class }
    }

    pub fn dim(&self) -> usize {
        self.triple.d
    }

    pub fn class(&self) -> DocClass {
        self.class
    }

    pub fn triple(&self) -> &DocTriple {
        &self.triple
    }

    /// `Φ(Z) = diag(A|diag Z⟩) + B̊ ⊙ Z + C̊ ⊙ Zᵀ`.
    pub fn apply(&self, z: &CMat) -> CMat {
        let d = self.triple.d;
        assert_eq!(z.nrows(), d, "input dimension mismatch");
        let mut out = CMat::zeros(d, d);
        for i in 0..d {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..d {
                acc += Complex64::from(self.triple.a[(i, j)]) * z[(j, j)];
            }
            out[(i, i)] = acc;
        }
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    out[(i, j)] = self.triple.b[(i, j)] * z[(i, j)] + self.triple.c[(i, j)] * z[(j, i)];
                }
            }
        }
        out
    }

    /// Dense Choi matrix of the channel.
    pub fn choi(&self) -> ChoiMatrix {
        let d = self.triple.d;
        let mut j = CMat::zeros(d * d, d * d);
        for i in 0..d {
            for a in 0..d {
                j[(a * d + i, a * d + i)] = Complex64::from(self.triple.a[(a, i)]);
            }
        }
        for i in 0..d {
            for k in 0..d {
                if i != k {
                    j[(i * d + i, k * d + k)] = self.triple.b[(i, k)];
                    j[(k * d + i, i * d + k)] = self.triple.c[(k, i)];
                }
            }
        }
        ChoiMatrix::new_unchecked(d, j)
    }

    /// CP/TP validity with margins.
    pub fn validate(&self) -> DocValidity {
        let d = self.triple.d;
        let a = &self.triple.a;
        let min_a_entry = a.iter().copied().fold(f64::INFINITY, f64::min);
        let min_eig_b = linalg::min_eigenvalue(&hermitianized(&self.triple.b))
            .expect("B candidate is square");
        let mut min_pair_margin = f64::INFINITY;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    let m = a[(i, j)] * a[(j, i)] - self.triple.c[(i, j)].norm_sqr();
                    min_pair_margin = min_pair_margin.min(m);
                }
            }
        }
        if d == 1 {
            min_pair_margin = 0.0;
        }
        let mut max_col_dev: f64 = 0.0;
        for j in 0..d {
            let col: f64 = (0..d).map(|i| a[(i, j)]).sum();
            max_col_dev = max_col_dev.max((col - 1.0).abs());
        }
        let cp = min_a_entry >= -INEQ_TOL
            && min_eig_b >= -INEQ_TOL * (1.0 + min_eig_b.abs())
            && geq_with_tol(min_pair_margin, 0.0);
        let tp = max_col_dev <= 1e-8;
        DocValidity { min_a_entry, min_eig_b, min_pair_margin, max_col_dev, cp, tp }
    }

    /// PPT test by class:
    ///
    /// - `DUC`: `|B_ij|² ≤ A_ij A_ji` for all `i ≠ j`;
    /// - `CDUC`: `C ⪰ 0`;
    /// - `DOC`: both.
    pub fn ppt_test(&self, tol: f64) -> DocPptReport {
        let d = self.triple.d;
        let a = &self.triple.a;
        let needs_spectral = matches!(self.class, DocClass::Cduc | DocClass::Doc);
        let needs_pairs = matches!(self.class, DocClass::Duc | DocClass::Doc);

        let lambda_min_c = needs_spectral.then(|| {
            linalg::min_eigenvalue(&hermitianized(&self.triple.c)).expect("C candidate is square")
        });
        let min_pair_margin = needs_pairs.then(|| {
            let mut m = f64::INFINITY;
            for i in 0..d {
                for j in 0..d {
                    if i != j {
                        m = m.min(a[(i, j)] * a[(j, i)] - self.triple.b[(i, j)].norm_sqr());
                    }
                }
            }
            if d == 1 {
                m = 0.0;
            }
            m
        });

        let scale_c = {
            let tr: f64 = (0..d).map(|i| self.triple.c[(i, i)].re).sum();
            (tr / d as f64).max(1.0)
        };
        let spectral_ok = lambda_min_c.is_none_or(|l| l >= -tol * scale_c);
        let pair_ok = min_pair_margin.is_none_or(|m| geq_with_tol(m, 0.0));
        DocPptReport { pass: spectral_ok && pair_ok, lambda_min_c, min_pair_margin }
    }

    /// Realignment necessary condition for entanglement breaking:
    /// `Σ_ij A_ij − ‖A‖₁ ≥ Σ_{i≠j} max(|B_ij|, |C_ij|)`. A negative slack
    /// refutes EB.
    pub fn realignment_test(&self) -> (bool, f64) {
        let d = self.triple.d;
        let a = &self.triple.a;
        let sum_a: f64 = a.iter().sum();
        let nuclear = linalg::nuclear_norm(&linalg::complex_from_real(a));
        let mut rhs = 0.0;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    rhs += self.triple.b[(i, j)].norm().max(self.triple.c[(i, j)].norm());
                }
            }
        }
        let slack = sum_a - nuclear - rhs;
        (slack >= -INEQ_TOL * (1.0 + sum_a.abs() + nuclear + rhs), slack)
    }

    /// Entanglement-breaking certificate.
    ///
    /// `Certified`: the triple decomposes into `2×2` triples
    /// `(A^{(ij)}, B^{(ij)}, C^{(ij)})` with diagonal shares `A_ii/(d−1)`,
    /// each of which is PPT (hence EB on a 2-dimensional support) — this
    /// needs, for every pair `i < j`,
    ///
    /// ```text
    /// A_ii A_jj/(d−1)² ≥ |B_ij|²,  A_ii A_jj/(d−1)² ≥ |C_ij|²,  A_ij A_ji ≥ |B_ij|².
    /// ```
    ///
    /// `Refuted`: a necessary condition fails (PPT or realignment).
    /// `Unknown`: otherwise; the gap between the certificate and exact
    /// separability is genuine.
    pub fn eb_certificate(&self) -> EbCertificate {
        let d = self.triple.d;
        if d < 2 {
            return EbCertificate {
                verdict: EbVerdict::Certified,
                min_margin: f64::INFINITY,
                worst_pair: None,
                refutation: None,
            };
        }
        let ppt = self.ppt_test(quantum::PSD_TOL);
        if !ppt.pass {
            return EbCertificate {
                verdict: EbVerdict::Refuted,
                min_margin: f64::NEG_INFINITY,
                worst_pair: None,
                refutation: Some(EbRefutation::NotPpt {
                    lambda_min_c: ppt.lambda_min_c,
                    min_pair_margin: ppt.min_pair_margin,
                }),
            };
        }
        let (realign_ok, slack) = self.realignment_test();
        if !realign_ok {
            return EbCertificate {
                verdict: EbVerdict::Refuted,
                min_margin: f64::NEG_INFINITY,
                worst_pair: None,
                refutation: Some(EbRefutation::Realignment { slack }),
            };
        }
        let a = &self.triple.a;
        let share = 1.0 / (d as f64 - 1.0);
        let mut min_margin = f64::INFINITY;
        let mut worst_pair = None;
        let mut all_pass = true;
        for i in 0..d {
            for j in i + 1..d {
                let block_diag = a[(i, i)] * a[(j, j)] * share * share;
                let b2 = self.triple.b[(i, j)].norm_sqr();
                let c2 = self.triple.c[(i, j)].norm_sqr();
                let pair = a[(i, j)] * a[(j, i)];
                for (lhs, rhs) in [(block_diag, b2), (block_diag, c2), (pair, b2)] {
                    let margin = lhs - rhs;
                    if margin < min_margin {
                        min_margin = margin;
                        worst_pair = Some((i, j));
                    }
                    if !geq_with_tol(lhs, rhs) {
                        all_pass = false;
                    }
                }
            }
        }
        EbCertificate {
            verdict: if all_pass { EbVerdict::Certified } else { EbVerdict::Unknown },
            min_margin,
            worst_pair,
            refutation: None,
        }
    }
}

/// Verdict of the EB certificate; `Unknown` is an honest outcome, not a
/// failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EbVerdict {
    Certified,
    Refuted,
    Unknown,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub enum EbRefutation {
    NotPpt {
        lambda_min_c: Option<f64>,
        min_pair_margin: Option<f64>,
    },
    Realignment {
        slack: f64,
    },
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct EbCertificate {
    pub verdict: EbVerdict,
    /// Worst margin over all `2×2` block inequalities (when evaluated).
    pub min_margin: f64,
    pub worst_pair: Option<(usize, usize)>,
    pub refutation: Option<EbRefutation>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DocPptReport {
    pub pass: bool,
    pub lambda_min_c: Option<f64>,
    pub min_pair_margin: Option<f64>,
}

/// The two entrywise families of inequalities under which the composition of
/// two CP diagonal-covariant triples is certifiably entanglement breaking
/// (factor width 2): for all `i ≠ j`,
///
/// ```text
/// (A_ii D_ii/(d−1) + A_ij D_ji)(A_jj D_jj/(d−1) + A_ji D_ij) ≥ R_ij
/// (AD)_ij (AD)_ji ≥ R_ij
/// ```
///
/// with `R_ij = max(|B_ij E_ij + C_ij F̄_ij|², |B_ij F_ij + C_ij Ē_ij|²)`.
pub fn ppt2_conditions(t1: &DocTriple, t2: &DocTriple) -> Result<Ppt2Report, FamiliesError> {
    if t1.d != t2.d {
        return Err(FamiliesError::DimensionMismatch(t1.d, t2.d));
    }
    let d = t1.d;
    if d < 2 {
        return Ok(Ppt2Report { pass: true, min_margin_blocks: f64::INFINITY, min_margin_products: f64::INFINITY });
    }
    let ad = &t1.a * &t2.a;
    let share = 1.0 / (d as f64 - 1.0);
    let mut min1 = f64::INFINITY;
    let mut min2 = f64::INFINITY;
    let mut pass = true;
    for i in 0..d {
        for j in 0..d {
            if i == j {
                continue;
            }
            let r1 = (t1.b[(i, j)] * t2.b[(i, j)] + t1.c[(i, j)] * t2.c[(i, j)].conj()).norm_sqr();
            let r2 = (t1.b[(i, j)] * t2.c[(i, j)] + t1.c[(i, j)] * t2.b[(i, j)].conj()).norm_sqr();
            let rhs = r1.max(r2);
            let lhs1 = (t1.a[(i, i)] * t2.a[(i, i)] * share + t1.a[(i, j)] * t2.a[(j, i)])
                * (t1.a[(j, j)] * t2.a[(j, j)] * share + t1.a[(j, i)] * t2.a[(i, j)]);
            let lhs2 = ad[(i, j)] * ad[(j, i)];
            min1 = min1.min(lhs1 - rhs);
            min2 = min2.min(lhs2 - rhs);
            if !geq_with_tol(lhs1, rhs) || !geq_with_tol(lhs2, rhs) {
                pass = false;
            }
        }
    }
    Ok(Ppt2Report { pass, min_margin_blocks: min1, min_margin_products: min2 })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Ppt2Report {
    pub pass: bool,
    pub min_margin_blocks: f64,
    pub min_margin_products: f64,
}

fn diagonal_part(m: &CMat) -> CMat {
    let mut out = CMat::zeros(m.nrows(), m.ncols());
    for i in 0..m.nrows().min(m.ncols()) {
        out[(i, i)] = m[(i, i)];
    }
    out
}

fn hermitianized(m: &CMat) -> CMat {
    (m + m.adjoint()) * Complex64::from(0.5)
}

// ---------------------------------------------------------------------------
// The channel enum
// ---------------------------------------------------------------------------

/// A quantum channel in whichever representation suits it: dense
/// (Choi-backed), a mixture of the four reference maps, or a
/// diagonal-covariant triple.
#[derive(Debug, Clone)]
pub enum Channel {
    Dense(ChoiMatrix),
    Mixture(HHChannel),
    Doc(DocChannel),
}

impl Channel {
    pub fn dense(choi: ChoiMatrix) -> Self {
        Channel::Dense(choi)
    }

    pub fn dim(&self) -> usize {
        match self {
            Channel::Dense(j) => j.dim(),
            Channel::Mixture(m) => m.d,
            Channel::Doc(c) => c.dim(),
        }
    }

    pub fn apply(&self, z: &CMat) -> CMat {
        match self {
            Channel::Dense(j) => apply_choi(j, z).expect("dimension validated"),
            Channel::Mixture(m) => m.apply(z),
            Channel::Doc(c) => c.apply(z),
        }
    }

    pub fn choi(&self) -> ChoiMatrix {
        match self {
            Channel::Dense(j) => j.clone(),
            Channel::Mixture(m) => m.choi(),
            Channel::Doc(c) => c.choi(),
        }
    }

    /// `Φ₁ ∘ Φ₂` (self after other), staying structured when possible.
    pub fn compose(&self, other: &Channel) -> Result<Channel, FamiliesError> {
        if self.dim() != other.dim() {
            return Err(FamiliesError::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(match (self, other) {
            (Channel::Mixture(a), Channel::Mixture(b)) => Channel::Mixture(a.compose(b)?),
            (Channel::Doc(a), Channel::Doc(b)) => {
                Channel::Doc(DocChannel::classify(a.triple().compose(b.triple())?))
            }
            (Channel::Doc(a), Channel::Mixture(b)) => {
                let bt = mixture_triple(b);
                Channel::Doc(DocChannel::classify(a.triple().compose(&bt)?))
            }
            (Channel::Mixture(a), Channel::Doc(b)) => {
                let at = mixture_triple(a);
                Channel::Doc(DocChannel::classify(at.compose(b.triple())?))
            }
            _ => {
                let d = self.dim();
                Channel::Dense(choi_of_fn(d, |z| self.apply(&other.apply(z))))
            }
        })
    }
}

/// The diagonal triple carrying a mixture channel (every generator is
/// diagonal-covariant).
fn mixture_triple(m: &HHChannel) -> DocTriple {
    let d = m.d;
    let depol = DocTriple::depolarizing(d);
    let ident = DocTriple::identity(d);
    let transp = DocTriple::transposition(d);
    let deph = DocTriple::dephasing(d);
    let mut a = DMatrix::<f64>::zeros(d, d);
    let mut b = CMat::zeros(d, d);
    let mut c = CMat::zeros(d, d);
    for (w, t) in [
        (m.w_depol, &depol),
        (m.w_id, &ident),
        (m.w_transp, &transp),
        (m.w_diag, &deph),
    ] {
        a += t.a() * w;
        b += t.b() * Complex64::from(w);
        c += t.c() * Complex64::from(w);
    }
    DocTriple::new(a, b, c).expect("generators share diagonals")
}

// ---------------------------------------------------------------------------
// JSON fixtures
// ---------------------------------------------------------------------------

/// JSON wire format for diagonal-covariant channels.
#[derive(Debug, Serialize, Deserialize)]
pub struct DocChannelJson {
    pub d: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    #[serde(rename = "B_re")]
    pub b_re: Vec<Vec<f64>>,
    #[serde(rename = "B_im")]
    pub b_im: Vec<Vec<f64>>,
    #[serde(rename = "C_re")]
    pub c_re: Vec<Vec<f64>>,
    #[serde(rename = "C_im")]
    pub c_im: Vec<Vec<f64>>,
    pub class: DocClass,
}

impl DocChannelJson {
    pub fn from_channel(ch: &DocChannel) -> Self {
        let d = ch.dim();
        let t = ch.triple();
        let real = |m: &CMat, f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..d).map(|i| (0..d).map(|j| f(&m[(i, j)])).collect()).collect()
        };
        DocChannelJson {
            d,
            a: (0..d).map(|i| (0..d).map(|j| t.a()[(i, j)]).collect()).collect(),
            b_re: real(t.b(), |z| z.re),
            b_im: real(t.b(), |z| z.im),
            c_re: real(t.c(), |z| z.re),
            c_im: real(t.c(), |z| z.im),
            class: ch.class(),
        }
    }

    pub fn into_channel(self) -> Result<DocChannel, FamiliesError> {
        let d = self.d;
        let dense_real = |rows: &[Vec<f64>]| DMatrix::from_fn(d, d, |i, j| rows[i][j]);
        let dense = |re: &[Vec<f64>], im: &[Vec<f64>]| {
            CMat::from_fn(d, d, |i, j| Complex64::new(re[i][j], im[i][j]))
        };
        let triple = DocTriple::new(
            dense_real(&self.a),
            dense(&self.b_re, &self.b_im),
            dense(&self.c_re, &self.c_im),
        )?;
        Ok(DocChannel::new(triple, self.class))
    }
}
