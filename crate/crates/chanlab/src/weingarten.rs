//! Exact Weingarten functions and closed-form moment oracles.
//!
//! The Weingarten function `Wg_n` on `S_p` is the inverse of the Gram matrix
//! `(σ, τ) ↦ n^{#(στ⁻¹)}` in the group algebra: for every `σ`,
//!
//! ```text
//! Σ_{τ ∈ S_p} n^{#(στ⁻¹)} Wg_n(τ) = [σ = id].
//! ```
//!
//! It is a class function, so the table is computed on the class algebra:
//! one row and column per cycle type, which keeps `p = 6` at an 11×11 exact
//! rational solve instead of 720×720. All oracle values in this module are
//! exact `BigRational`s; floating conversion happens only at comparison
//! boundaries.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num::bigint::BigInt;
use num::traits::{One, Signed, ToPrimitive, Zero};
use num::BigRational;
use thiserror::Error;

use crate::perm::{
    binomial, catalan, enumerate_symmetric_group, full_cycle, join_block_count, mobius,
    Permutation,
};

/// Degree cap for exact tables; `S_6` has 720 elements and 11 cycle types.
pub const MAX_TABLE_DEGREE: usize = 6;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WgError {
    #[error("moment degree {0} out of range (max {1})")]
    DegreeOutOfRange(usize, usize),
    #[error("Gram matrix n^{{#(στ⁻¹)}} is singular for n = {n} < p = {p}")]
    SingularGram { p: usize, n: i64 },
    #[error("dimension parameter must be positive, got {0}")]
    NonPositiveDimension(i64),
}

/// Exact Weingarten table for fixed degree `p` and dimension `n`, indexed by
/// cycle type.
#[derive(Debug, Clone)]
pub struct WeingartenTable {
    p: usize,
    n: i64,
    values: BTreeMap<Vec<usize>, BigRational>,
}

impl WeingartenTable {
    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn dimension(&self) -> i64 {
        self.n
    }

    /// `Wg_n(σ)`.
    pub fn value(&self, sigma: &Permutation) -> &BigRational {
        self.value_of_type(&sigma.cycle_type())
    }

    /// Value for a cycle type (partition of `p`, sorted descending).
    pub fn value_of_type(&self, cycle_type: &[usize]) -> &BigRational {
        self.values
            .get(cycle_type)
            .unwrap_or_else(|| panic!("cycle type {cycle_type:?} is not a partition of {}", self.p))
    }

    pub fn cycle_types(&self) -> impl Iterator<Item = (&Vec<usize>, &BigRational)> {
        self.values.iter()
    }

    /// `Σ_{α ∈ S_p} Wg_n(α)`, exactly `1 / (n(n+1)⋯(n+p−1))`.
    pub fn sum_over_group(&self) -> BigRational {
        self.values
            .iter()
            .map(|(t, v)| BigRational::from(class_size(self.p, t)) * v)
            .sum()
    }
}

/// Computes (and memoizes) the exact Weingarten table for `(p, n)`.
///
/// Requires `n ≥ p`; below that the Gram matrix is singular and the function
/// refuses rather than pseudo-inverting.
pub fn weingarten_table(p: usize, n: i64) -> Result<Arc<WeingartenTable>, WgError> {
    if p == 0 || p > MAX_TABLE_DEGREE {
        return Err(WgError::DegreeOutOfRange(p, MAX_TABLE_DEGREE));
    }
    if n <= 0 {
        return Err(WgError::NonPositiveDimension(n));
    }
    if (n as usize) < p {
        return Err(WgError::SingularGram { p, n });
    }

    type Cache = Mutex<HashMap<(usize, i64), Arc<WeingartenTable>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&(p, n)) {
        return Ok(hit.clone());
    }

    let table = Arc::new(build_table(p, n)?);
    cache.lock().unwrap().insert((p, n), table.clone());
    Ok(table)
}

fn build_table(p: usize, n: i64) -> Result<WeingartenTable, WgError> {
    let group = enumerate_symmetric_group(p).expect("degree validated");
    // One representative per cycle type.
    let mut reps: BTreeMap<Vec<usize>, Permutation> = BTreeMap::new();
    for sigma in &group {
        reps.entry(sigma.cycle_type()).or_insert_with(|| sigma.clone());
    }
    let types: Vec<Vec<usize>> = reps.keys().cloned().collect();
    let index: BTreeMap<&Vec<usize>, usize> =
        types.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let ell = types.len();

    // Gram restricted to class functions: row λ, column μ aggregates
    // Σ_{τ of type μ} n^{#(σ_λ τ⁻¹)} for a fixed representative σ_λ.
    let mut gram = vec![vec![BigRational::zero(); ell]; ell];
    for (row, t) in types.iter().enumerate() {
        let rep = &reps[t];
        for tau in &group {
            let col = index[&tau.cycle_type()];
            let cycles = rep.compose(&tau.inverse()).cycle_count();
            gram[row][col] += BigRational::from(BigInt::from(n).pow(cycles as u32));
        }
    }

    let id_type = vec![1usize; p];
    let mut rhs = vec![BigRational::zero(); ell];
    rhs[index[&id_type]] = BigRational::one();

    let solution = solve_exact(gram, rhs).ok_or(WgError::SingularGram { p, n })?;
    let values = types.into_iter().zip(solution).collect();
    Ok(WeingartenTable { p, n, values })
}

/// Gaussian elimination over exact rationals.
fn solve_exact(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].clone().recip();
        for x in a[col].iter_mut() {
            *x *= inv.clone();
        }
        b[col] *= inv;
        for row in 0..n {
            if row == col || a[row][col].is_zero() {
                continue;
            }
            let factor = a[row][col].clone();
            let pivot_row = a[col].clone();
            for (cell, pivot) in a[row][col..].iter_mut().zip(&pivot_row[col..]) {
                let sub = factor.clone() * pivot.clone();
                *cell -= sub;
            }
            let sub = factor * b[col].clone();
            b[row] -= sub;
        }
    }
    Some(b)
}

/// Number of permutations in `S_p` with the given cycle type.
pub fn class_size(p: usize, cycle_type: &[usize]) -> BigInt {
    let mut denom = BigInt::one();
    let mut mult: BTreeMap<usize, usize> = BTreeMap::new();
    for &c in cycle_type {
        denom *= BigInt::from(c as u64);
        *mult.entry(c).or_insert(0) += 1;
    }
    for (_, m) in mult {
        denom *= factorial(m);
    }
    factorial(p) / denom
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n as u64).map(BigInt::from).product()
}

/// Rising factorial `x(x+1)⋯(x+p−1)` as an exact integer.
pub fn rising_factorial(x: i64, p: usize) -> BigInt {
    (0..p as i64).map(|j| BigInt::from(x + j)).product()
}

/// First-order asymptotics `Möb(σ) · n^{−p−|σ|}`; the relative error against
/// the exact table is `O(1/n²)`.
pub fn weingarten_asymptotic(sigma: &Permutation, n: i64) -> f64 {
    assert!(n >= 1);
    let exponent = (sigma.degree() + sigma.length()) as i32;
    mobius(sigma) as f64 * (n as f64).powi(-exponent)
}

/// Which scalar channel parameter a moment refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LambdaIndex {
    #[serde(alias = "1")]
    Lambda1,
    #[serde(alias = "2")]
    Lambda2,
    #[serde(alias = "3")]
    Lambda3,
}

/// Which of the three matrix parameters a trace moment refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixParam {
    A,
    B,
    C,
}

/// Entry-moment targets: `E[(A_ij)^p]` or `E[|B_ij|^{2p}] = E[|C_ij|^{2p}]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryParam {
    A,
    B2,
    C2,
}

/// `E[(λ_i)^p]` for the random Stinespring channel with system dimension `d`
/// and environment dimension `s`, as an exact rational.
///
/// The three formulas enumerate `S_p` (or `S_p × S_p`) with the exact
/// Weingarten table at dimension `ds`:
///
/// ```text
/// E[(λ₁)^p] = s(s+1)⋯(s+p−1) Σ_β d^{#β} Wg_{ds}(β)
/// E[(λ₂)^p] = Σ_{α,β} s^{#α} d^{#(αβ)}  Wg_{ds}(αβ⁻¹)
/// E[(λ₃)^p] = Σ_{α,β} s^{#α} d^{#(α∨β)} Wg_{ds}(αβ⁻¹)
/// ```
pub fn moment_lambda(which: LambdaIndex, d: u32, s: u32, p: usize) -> Result<BigRational, WgError> {
    let n = d as i64 * s as i64;
    if p == 0 {
        return Ok(BigRational::one());
    }
    let table = weingarten_table(p, n)?;
    let group = enumerate_symmetric_group(p).expect("degree validated by table");
    let d_big = BigInt::from(d);
    let s_big = BigInt::from(s);
    match which {
        LambdaIndex::Lambda1 => {
            let mut sum = BigRational::zero();
            for (cycle_type, wg) in table.cycle_types() {
                let size = class_size(p, cycle_type);
                let dpow = d_big.pow(cycle_type.len() as u32);
                sum += BigRational::from(size * dpow) * wg;
            }
            Ok(BigRational::from(rising_factorial(s as i64, p)) * sum)
        }
        LambdaIndex::Lambda2 => {
            let mut sum = BigRational::zero();
            for alpha in &group {
                let spow = s_big.pow(alpha.cycle_count() as u32);
                for beta in &group {
                    let prod = alpha.compose(beta);
                    let wg = table.value(&alpha.compose(&beta.inverse()));
                    let dpow = d_big.pow(prod.cycle_count() as u32);
                    sum += BigRational::from(spow.clone() * dpow) * wg;
                }
            }
            Ok(sum)
        }
        LambdaIndex::Lambda3 => {
            let mut sum = BigRational::zero();
            for alpha in &group {
                let spow = s_big.pow(alpha.cycle_count() as u32);
                for beta in &group {
                    let blocks = join_block_count(alpha, beta);
                    let wg = table.value(&alpha.compose(&beta.inverse()));
                    let dpow = d_big.pow(blocks as u32);
                    sum += BigRational::from(spow.clone() * dpow) * wg;
                }
            }
            Ok(sum)
        }
    }
}

/// `E[Tr(X^p)]` for `X ∈ {A, B, C}`, by enumeration of `S_p × S_p` with join
/// ranks against the full cycle `γ`:
///
/// ```text
/// E[Tr(A^p)] = Σ_{α,β} s^{#α} d^{#((γ⁻¹αγ) ∨ β)}        Wg_{ds}(αβ⁻¹)
/// E[Tr(B^p)] = Σ_{α,β} s^{#α} d^{#((γ⁻¹α) ∨ (γ⁻¹β))}    Wg_{ds}(αβ⁻¹)
/// E[Tr(C^p)] = Σ_{α,β} s^{#α} d^{#((γ⁻¹α) ∨ (γ⁻¹β⁻¹))}  Wg_{ds}(αβ⁻¹)
/// ```
pub fn moment_trace_matrix(
    which: MatrixParam,
    d: u32,
    s: u32,
    p: usize,
) -> Result<BigRational, WgError> {
    const MAX_TRACE_DEGREE: usize = 5;
    if p == 0 {
        // Tr(X⁰) = Tr I = d
        return Ok(BigRational::from(BigInt::from(d)));
    }
    if p > MAX_TRACE_DEGREE {
        return Err(WgError::DegreeOutOfRange(p, MAX_TRACE_DEGREE));
    }
    let n = d as i64 * s as i64;
    let table = weingarten_table(p, n)?;
    let group = enumerate_symmetric_group(p).expect("degree validated");
    let gamma = full_cycle(p);
    let gamma_inv = gamma.inverse();
    let d_big = BigInt::from(d);
    let s_big = BigInt::from(s);

    let mut sum = BigRational::zero();
    for alpha in &group {
        let spow = s_big.pow(alpha.cycle_count() as u32);
        let left = match which {
            MatrixParam::A => gamma_inv.compose(alpha).compose(&gamma),
            MatrixParam::B | MatrixParam::C => gamma_inv.compose(alpha),
        };
        for beta in &group {
            let right = match which {
                MatrixParam::A => beta.clone(),
                MatrixParam::B => gamma_inv.compose(beta),
                MatrixParam::C => gamma_inv.compose(&beta.inverse()),
            };
            let blocks = join_block_count(&left, &right);
            let wg = table.value(&alpha.compose(&beta.inverse()));
            sum += BigRational::from(spow.clone() * d_big.pow(blocks as u32)) * wg;
        }
    }
    Ok(sum)
}

/// Entry moments.
///
/// `E[(A_ij)^p] = s(s+1)⋯(s+p−1) / (ds(ds+1)⋯(ds+p−1))` for any entry, and
/// for off-diagonal entries
///
/// ```text
/// E[|B_ij|^{2p}] = E[|C_ij|^{2p}] = p! · s(s+1)⋯(s+p−1) · Σ_{β ∈ 𝒮} Wg_{ds}(β)
/// ```
///
/// where `𝒮 ⊂ S_{2p}` is the parity-preserving subset. The `B2` case needs a
/// degree-`2p` table, hence `p ≤ 3` and `ds ≥ 2p`.
pub fn moment_entry(which: EntryParam, d: u32, s: u32, p: usize) -> Result<BigRational, WgError> {
    let n = d as i64 * s as i64;
    if p == 0 {
        return Ok(BigRational::one());
    }
    match which {
        EntryParam::A => {
            if p > MAX_TABLE_DEGREE {
                return Err(WgError::DegreeOutOfRange(p, MAX_TABLE_DEGREE));
            }
            if n < p as i64 {
                return Err(WgError::SingularGram { p, n });
            }
            Ok(BigRational::new(
                rising_factorial(s as i64, p),
                rising_factorial(n, p),
            ))
        }
        EntryParam::B2 | EntryParam::C2 => {
            if 2 * p > MAX_TABLE_DEGREE {
                return Err(WgError::DegreeOutOfRange(p, MAX_TABLE_DEGREE / 2));
            }
            let table = weingarten_table(2 * p, n)?;
            let mut wg_sum = BigRational::zero();
            for beta in enumerate_symmetric_group(2 * p).expect("degree validated") {
                if (0..2 * p).all(|i| beta.image(i) % 2 == i % 2) {
                    wg_sum += table.value(&beta);
                }
            }
            Ok(BigRational::from(factorial(p) * rising_factorial(s as i64, p)) * wg_sum)
        }
    }
}

/// `p`-th moment of the Gamma distribution `Γ(s, 1)`: the rising factorial
/// `s(s+1)⋯(s+p−1)`.
pub fn gamma_moment(s: u32, p: usize) -> BigRational {
    BigRational::from(rising_factorial(s as i64, p))
}

/// `p`-th moment of the normal distribution `𝒩(s, s)`:
/// `Σ_{π ∈ 𝒫₁,₂(p)} s^{#π}`, summing over partitions with blocks of size 1
/// or 2 (the moment-cumulant formula with both cumulants equal to `s`).
pub fn normal_ss_moment(s: u32, p: usize) -> BigRational {
    let mut total = BigInt::zero();
    let s_big = BigInt::from(s);
    for k in 0..=p / 2 {
        // involutions with exactly k transpositions: p! / (2^k k! (p−2k)!)
        let count = factorial(p) / ((BigInt::one() << k) * factorial(k) * factorial(p - 2 * k));
        total += count * s_big.pow((p - k) as u32);
    }
    BigRational::from(total)
}

/// `p`-th moment of the semicircle distribution with mean `m` and variance
/// `v`: `Σ_{π ∈ NC₁,₂(p)} m^{#singletons(π)} v^{#pairs(π)}`.
pub fn semicircle_moment(m: &BigRational, v: &BigRational, p: usize) -> BigRational {
    let mut total = BigRational::zero();
    for k in 0..=p / 2 {
        let count = binomial(p, 2 * k) * BigInt::from(catalan(k as u32).expect("p/2 ≤ 15"));
        let mut term = BigRational::from(count);
        if p - 2 * k > 0 {
            term *= pow_rational(m, (p - 2 * k) as u32);
        }
        if k > 0 {
            term *= pow_rational(v, k as u32);
        }
        total += term;
    }
    total
}

fn pow_rational(x: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= x.clone();
    }
    acc
}

/// A fully-specified oracle query, as accepted by the `oracle` CLI
/// subcommand and the `oracle-check` experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct MomentQuery {
    pub target: MomentTarget,
    pub d: u32,
    pub s: u32,
    pub p: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentTarget {
    Lambda1,
    Lambda2,
    Lambda3,
    TraceA,
    TraceB,
    TraceC,
    EntryA,
    EntryB2,
    EntryC2,
}

impl std::fmt::Display for MomentTarget {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            MomentTarget::Lambda1 => "lambda1",
            MomentTarget::Lambda2 => "lambda2",
            MomentTarget::Lambda3 => "lambda3",
            MomentTarget::TraceA => "trace-a",
            MomentTarget::TraceB => "trace-b",
            MomentTarget::TraceC => "trace-c",
            MomentTarget::EntryA => "entry-a",
            MomentTarget::EntryB2 => "entry-b2",
            MomentTarget::EntryC2 => "entry-c2",
        };
        f.write_str(s)
    }
}

/// Evaluates a [`MomentQuery`] against the exact oracle.
pub fn evaluate_query(q: &MomentQuery) -> Result<BigRational, WgError> {
    match q.target {
        MomentTarget::Lambda1 => moment_lambda(LambdaIndex::Lambda1, q.d, q.s, q.p),
        MomentTarget::Lambda2 => moment_lambda(LambdaIndex::Lambda2, q.d, q.s, q.p),
        MomentTarget::Lambda3 => moment_lambda(LambdaIndex::Lambda3, q.d, q.s, q.p),
        MomentTarget::TraceA => moment_trace_matrix(MatrixParam::A, q.d, q.s, q.p),
        MomentTarget::TraceB => moment_trace_matrix(MatrixParam::B, q.d, q.s, q.p),
        MomentTarget::TraceC => moment_trace_matrix(MatrixParam::C, q.d, q.s, q.p),
        MomentTarget::EntryA => moment_entry(EntryParam::A, q.d, q.s, q.p),
        MomentTarget::EntryB2 => moment_entry(EntryParam::B2, q.d, q.s, q.p),
        MomentTarget::EntryC2 => moment_entry(EntryParam::C2, q.d, q.s, q.p),
    }
}

/// Formats an exact rational as `"num/den"`.
pub fn rational_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    // Scale down first so that huge numerators/denominators survive the
    // conversion.
    let digits_n = x.numer().abs().to_string().len() as i32;
    let digits_d = x.denom().abs().to_string().len() as i32;
    if digits_n < 250 && digits_d < 250 {
        let n = x.numer().to_f64().unwrap_or(f64::NAN);
        let d = x.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    } else {
        let shift = (digits_n.min(digits_d) - 1).max(0) as u32;
        let scale = BigInt::from(10u32).pow(shift);
        let n = (x.numer() / &scale).to_f64().unwrap_or(f64::NAN);
        let d = (x.denom() / &scale).to_f64().unwrap_or(f64::NAN);
        n / d
    }
}
