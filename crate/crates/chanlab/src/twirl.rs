//! Twirling: projecting channels onto covariant families.
//!
//! Twirls are computed by closed-form parameter extraction, never by
//! numerical group integration. Three scalars determine the four
//! group-covariant twirls of a channel:
//!
//! ```text
//! λ₁ = d⟨Ω|J(Φ)|Ω⟩,   λ₂ = Tr(J(Φ)F),   λ₃ = Tr(J(Φ)Π_diag),
//! ```
//!
//! and the diagonal twirls keep the entry data `(A, B, C)` of the Choi
//! matrix:
//!
//! ```text
//! A_ij = ⟨ij|J|ij⟩,   B_ij = ⟨ii|J|jj⟩,   C_ij = ⟨ij|J|ji⟩.
//! ```
//!
//! For channels given by a Stinespring isometry the same quantities come
//! directly from the Kraus blocks, so no `d²×d²` matrix is ever formed at
//! large dimension; [`LambdaAccumulator`] and [`AbcAccumulator`] consume
//! streamed blocks.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::families::{Channel, DocChannel, DocClass, DocTriple, FamiliesError, HHChannel};
use crate::linalg::CMat;
use crate::quantum::{diag_projector, flip_operator, max_entangled_vector, ChoiMatrix};
use crate::sampling::HaarIsometry;

/// Imaginary residue beyond this is an error; below it is discarded.
pub const IMAG_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum TwirlError {
    #[error("imaginary residue {0:.3e} on a real parameter")]
    NonReal(f64),
    #[error("dimension {0} too small for twirl coefficients (need d ≥ 2)")]
    DimensionTooSmall(usize),
    #[error(transparent)]
    Families(#[from] FamiliesError),
}

/// `λ₁ = d⟨Ω|J|Ω⟩ = Σ_{ik} J_{(i,i),(k,k)}`.
pub fn lambda1(choi: &ChoiMatrix) -> Result<f64, TwirlError> {
    let d = choi.dim();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..d {
        for k in 0..d {
            acc += choi.entry(i, i, k, k);
        }
    }
    real_checked(acc, d as f64)
}

/// `λ₂ = Tr(J F) = Σ_{ai} J_{(a,i),(i,a)}`.
pub fn lambda2(choi: &ChoiMatrix) -> Result<f64, TwirlError> {
    let d = choi.dim();
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 0..d {
        for i in 0..d {
            acc += choi.entry(a, i, i, a);
        }
    }
    real_checked(acc, d as f64)
}

/// `λ₃ = Tr(J Π_diag) = Σ_i J_{(i,i),(i,i)}`.
pub fn lambda3(choi: &ChoiMatrix) -> Result<f64, TwirlError> {
    let d = choi.dim();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..d {
        acc += choi.entry(i, i, i, i);
    }
    real_checked(acc, d as f64)
}

fn real_checked(z: Complex64, scale: f64) -> Result<f64, TwirlError> {
    if z.im.abs() > IMAG_TOL * scale.max(1.0) {
        return Err(TwirlError::NonReal(z.im));
    }
    Ok(z.re)
}

/// The scalar parameters of a channel together with the derived twirl
/// coefficients.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CovariantParams {
    pub d: usize,
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
}

impl CovariantParams {
    pub fn new(d: usize, lambda1: f64, lambda2: f64, lambda3: f64) -> Self {
        CovariantParams { d, lambda1, lambda2, lambda3 }
    }

    /// `p = (λ₁−1)/(d²−1)`: weight of the identity in the `(U,U)` twirl.
    pub fn uu_weight(&self) -> f64 {
        let d2 = (self.d * self.d) as f64;
        (self.lambda1 - 1.0) / (d2 - 1.0)
    }

    /// `q = (λ₂−1)/(d²−1)`: weight of the transposition in the `(U,Ū)` twirl.
    pub fn uubar_weight(&self) -> f64 {
        let d2 = (self.d * self.d) as f64;
        (self.lambda2 - 1.0) / (d2 - 1.0)
    }

    /// `(p′, q′)` of the `(O,O)` twirl `p′·id + q′·⊤ + (1−p′−q′)·Δ`:
    /// `p′ = ((d+1)λ₁ − λ₂ − d)/(d(d+2)(d−1))` and symmetrically for `q′`.
    pub fn oo_weights(&self) -> (f64, f64) {
        let d = self.d as f64;
        let denom = d * (d + 2.0) * (d - 1.0);
        (
            ((d + 1.0) * self.lambda1 - self.lambda2 - d) / denom,
            ((d + 1.0) * self.lambda2 - self.lambda1 - d) / denom,
        )
    }

    /// `(p, q, r)` of the `(H,H)` twirl `p·Δ + q·id + r·⊤ + (1−p−q−r)·diag`:
    /// `p = (d−λ₃)/(d−1)`, `q = (λ₁−λ₃)/(d²−d)`, `r = (λ₂−λ₃)/(d²−d)`.
    pub fn hh_weights(&self) -> (f64, f64, f64) {
        let d = self.d as f64;
        (
            (d - self.lambda3) / (d - 1.0),
            (self.lambda1 - self.lambda3) / (d * d - d),
            (self.lambda2 - self.lambda3) / (d * d - d),
        )
    }
}

/// Extracts `(λ₁, λ₂, λ₃)` from a dense Choi matrix.
pub fn params_of_choi(choi: &ChoiMatrix) -> Result<CovariantParams, TwirlError> {
    Ok(CovariantParams::new(
        choi.dim(),
        lambda1(choi)?,
        lambda2(choi)?,
        lambda3(choi)?,
    ))
}

/// Extracts the parameters without densifying structured channels.
pub fn params_of_channel(channel: &Channel) -> Result<CovariantParams, TwirlError> {
    match channel {
        Channel::Dense(j) => params_of_choi(j),
        Channel::Mixture(m) => {
            let (l1, l2, l3) = m.lambdas();
            Ok(CovariantParams::new(m.d, l1, l2, l3))
        }
        Channel::Doc(c) => Ok(params_of_triple(c.triple())),
    }
}

/// `λ₁ = Σ_{ij} B_ij`, `λ₂ = Σ_{ij} C_ij`, `λ₃ = Tr A`.
pub fn params_of_triple(t: &DocTriple) -> CovariantParams {
    let d = t.dim();
    let l1: Complex64 = t.b().iter().sum();
    let l2: Complex64 = t.c().iter().sum();
    let l3: f64 = (0..d).map(|i| t.a()[(i, i)]).sum();
    CovariantParams::new(d, l1.re, l2.re, l3)
}

fn require_d2(d: usize) -> Result<(), TwirlError> {
    if d < 2 {
        return Err(TwirlError::DimensionTooSmall(d));
    }
    Ok(())
}

/// `(U,U)` twirl: `p·id + (1−p)·Δ`.
pub fn twirl_uu(channel: &Channel) -> Result<(CovariantParams, HHChannel), TwirlError> {
    require_d2(channel.dim())?;
    let params = params_of_channel(channel)?;
    let p = params.uu_weight();
    Ok((params, HHChannel::new(params.d, 1.0 - p, p, 0.0, 0.0)))
}

/// `(U,Ū)` twirl: `q·⊤ + (1−q)·Δ`.
pub fn twirl_uubar(channel: &Channel) -> Result<(CovariantParams, HHChannel), TwirlError> {
    require_d2(channel.dim())?;
    let params = params_of_channel(channel)?;
    let q = params.uubar_weight();
    Ok((params, HHChannel::new(params.d, 1.0 - q, 0.0, q, 0.0)))
}

/// `(O,O)` twirl: `p′·id + q′·⊤ + (1−p′−q′)·Δ`.
pub fn twirl_oo(channel: &Channel) -> Result<(CovariantParams, HHChannel), TwirlError> {
    require_d2(channel.dim())?;
    let params = params_of_channel(channel)?;
    let (p, q) = params.oo_weights();
    Ok((params, HHChannel::new(params.d, 1.0 - p - q, p, q, 0.0)))
}

/// `(H,H)` twirl: `p·Δ + q·id + r·⊤ + (1−p−q−r)·diag`.
pub fn twirl_hh(channel: &Channel) -> Result<(CovariantParams, HHChannel), TwirlError> {
    require_d2(channel.dim())?;
    let params = params_of_channel(channel)?;
    let (p, q, r) = params.hh_weights();
    Ok((params, HHChannel::new(params.d, p, q, r, 1.0 - p - q - r)))
}

/// The four mutually orthogonal projectors spanning the hyperoctahedral
/// invariant space:
///
/// ```text
/// Π₀ = |Ω⟩⟨Ω|,  Π₁ = Π_sym − Π_diag,  Π₂ = Π_anti,  Π₃ = Π_diag − |Ω⟩⟨Ω|,
/// ```
///
/// with ranks `(1, (d²−d)/2, (d²−d)/2, d−1)`.
#[derive(Debug, Clone)]
pub struct HHProjectors {
    pub d: usize,
    pub projectors: [CMat; 4],
    pub ranks: [usize; 4],
}

impl HHProjectors {
    pub fn new(d: usize) -> Self {
        let omega = max_entangled_vector(d);
        let p0 = &omega * omega.adjoint();
        let flip = flip_operator(d);
        let eye = CMat::identity(d * d, d * d);
        let diag = diag_projector(d);
        let sym = (&eye + &flip) * Complex64::from(0.5);
        let anti = (&eye - &flip) * Complex64::from(0.5);
        let p1 = &sym - &diag;
        let p3 = &diag - &p0;
        HHProjectors {
            d,
            projectors: [p0, p1, anti, p3],
            ranks: [1, (d * d - d) / 2, (d * d - d) / 2, d - 1],
        }
    }
}

/// Multiplicity-free projector twirl: `X ↦ Σ_i Tr(Πᵢ X) Πᵢ / rank(Πᵢ)`.
pub fn projector_twirl(x: &CMat, projectors: &[CMat], ranks: &[usize]) -> CMat {
    let mut out = CMat::zeros(x.nrows(), x.ncols());
    for (pi, &rank) in projectors.iter().zip(ranks) {
        let coeff = (pi * x).trace() / Complex64::from(rank as f64);
        out += pi * coeff;
    }
    out
}

/// Reads the `(A, B, C)` entry data out of a Choi matrix. Fails if the three
/// diagonals (which coincide in exact arithmetic) drift apart, signalling a
/// malformed input.
pub fn abc_of_choi(choi: &ChoiMatrix) -> Result<DocTriple, TwirlError> {
    let d = choi.dim();
    let mut a = DMatrix::<f64>::zeros(d, d);
    let mut b = CMat::zeros(d, d);
    let mut c = CMat::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            a[(i, j)] = choi.entry(i, j, i, j).re;
            b[(i, j)] = choi.entry(i, i, j, j);
            c[(i, j)] = choi.entry(i, j, j, i);
        }
    }
    Ok(DocTriple::new(a, b, c)?)
}

/// Builds `(A, B, C)` directly from the Kraus blocks of an isometry:
/// `A = Σ_k V⁽ᵏ⁾ ⊙ V̄⁽ᵏ⁾`, `B = Σ_k |diag V⁽ᵏ⁾⟩⟨diag V⁽ᵏ⁾|`,
/// `C = Σ_k V⁽ᵏ⁾ ⊙ (V⁽ᵏ⁾)^†ᵀ` (entrywise, `C_ij = Σ_k V_ij V̄_ji`).
pub fn abc_of_isometry(iso: &HaarIsometry) -> Result<DocTriple, TwirlError> {
    let mut acc = AbcAccumulator::new(iso.system_dim());
    for k in 0..iso.env_dim() {
        acc.visit(&iso.block(k));
    }
    acc.finish()
}

/// Diagonal twirl of a channel: keeps the entry data its class retains.
pub fn twirl_diagonal(channel: &Channel, class: DocClass) -> Result<DocChannel, TwirlError> {
    let triple = match channel {
        Channel::Doc(c) => c.triple().clone(),
        Channel::Mixture(_) | Channel::Dense(_) => abc_of_choi(&channel.choi())?,
    };
    Ok(DocChannel::new(triple, class))
}

/// Dense oracle for the diagonal twirls: zeroes every Choi entry the class
/// does not retain. The surviving positions are exactly those fixed by
/// averaging over the diagonal group action.
pub fn diagonal_mask_twirl(choi: &ChoiMatrix, class: DocClass) -> ChoiMatrix {
    let d = choi.dim();
    let mut out = CMat::zeros(d * d, d * d);
    for a in 0..d {
        for i in 0..d {
            for b in 0..d {
                for j in 0..d {
                    let keep_a = a == b && i == j;
                    let keep_b = a == i && b == j;
                    let keep_c = a == j && i == b;
                    let keep = match class {
                        DocClass::Duc => keep_a || keep_b,
                        DocClass::Cduc => keep_a || keep_c,
                        DocClass::Doc => keep_a || keep_b || keep_c,
                    };
                    if keep {
                        out[(a * d + i, b * d + j)] = choi.entry(a, i, b, j);
                    }
                }
            }
        }
    }
    ChoiMatrix::new_unchecked(d, out)
}

/// Streaming accumulator for `(λ₁, λ₂, λ₃)` over Kraus blocks:
/// `λ₁ = Σ_k |Tr V⁽ᵏ⁾|²`, `λ₂ = Σ_k Σ_{ij} V̄⁽ᵏ⁾_ij V⁽ᵏ⁾_ji`,
/// `λ₃ = Σ_k Σ_i |V⁽ᵏ⁾_ii|²`.
#[derive(Debug, Clone)]
pub struct LambdaAccumulator {
    d: usize,
    l1: f64,
    l2: Complex64,
    l3: f64,
}

impl LambdaAccumulator {
    pub fn new(d: usize) -> Self {
        LambdaAccumulator { d, l1: 0.0, l2: Complex64::new(0.0, 0.0), l3: 0.0 }
    }

    pub fn visit(&mut self, block: &CMat) {
        let d = self.d;
        let mut tr = Complex64::new(0.0, 0.0);
        for i in 0..d {
            tr += block[(i, i)];
            self.l3 += block[(i, i)].norm_sqr();
        }
        self.l1 += tr.norm_sqr();
        for i in 0..d {
            for j in 0..d {
                self.l2 += block[(i, j)].conj() * block[(j, i)];
            }
        }
    }

    pub fn finish(&self) -> Result<CovariantParams, TwirlError> {
        let l2 = real_checked(self.l2, self.d as f64)?;
        Ok(CovariantParams::new(self.d, self.l1, l2, self.l3))
    }
}

/// Streaming accumulator for the `(A, B, C)` triple over Kraus blocks.
#[derive(Debug, Clone)]
pub struct AbcAccumulator {
    d: usize,
    a: DMatrix<f64>,
    b: CMat,
    c: CMat,
}

impl AbcAccumulator {
    pub fn new(d: usize) -> Self {
        AbcAccumulator {
            d,
            a: DMatrix::zeros(d, d),
            b: CMat::zeros(d, d),
            c: CMat::zeros(d, d),
        }
    }

    pub fn visit(&mut self, block: &CMat) {
        let d = self.d;
        for i in 0..d {
            for j in 0..d {
                self.a[(i, j)] += block[(i, j)].norm_sqr();
                self.b[(i, j)] += block[(i, i)] * block[(j, j)].conj();
                self.c[(i, j)] += block[(i, j)] * block[(j, i)].conj();
            }
        }
    }

    pub fn finish(&self) -> Result<DocTriple, TwirlError> {
        Ok(DocTriple::new(self.a.clone(), self.b.clone(), self.c.clone())?)
    }
}
