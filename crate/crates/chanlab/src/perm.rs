//! Symmetric-group and set-partition combinatorics.
//!
//! Everything here is exact integer/rational arithmetic. Permutations of
//! `{1, …, p}` are stored 0-based internally; the composition convention is
//! `(α ∘ β)(i) = α(β(i))`, i.e. `β` acts first. The length `|α|` is the
//! minimal number of transpositions whose product is `α`, related to the
//! cycle count by `#α + |α| = p`.

use num::BigRational;
use num::bigint::BigInt;
use thiserror::Error;

/// Enumeration is capped here; 8! = 40 320 permutations.
pub const MAX_ENUM_DEGREE: usize = 8;

/// Largest `n` for which `catalan(n)` fits comfortably in 64 bits.
pub const MAX_CATALAN: u32 = 30;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("degree {0} out of range (must be 1..={MAX_ENUM_DEGREE} for enumeration)")]
    DegreeOutOfRange(usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("images do not form a bijection of {{1, …, {0}}}")]
    NotABijection(usize),
    #[error("catalan({0}) exceeds the 64-bit overflow guard (n ≤ {MAX_CATALAN})")]
    CatalanOverflow(u32),
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),
}

/// A permutation of `{1, …, p}`, stored as 0-based images.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(p: usize) -> Self {
        Permutation { images: (0..p).collect() }
    }

    /// Builds a permutation from 0-based images, validating bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let p = images.len();
        let mut seen = vec![false; p];
        for &im in &images {
            if im >= p || seen[im] {
                return Err(PermError::NotABijection(p));
            }
            seen[im] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of degree `p` from disjoint cycles in 1-based notation.
    ///
    /// The cycle `(c₁ c₂ … c_k)` maps `c₁ ↦ c₂ ↦ … ↦ c_k ↦ c₁`.
    pub fn from_cycles(p: usize, cycles: &[&[usize]]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..p).collect();
        let mut touched = vec![false; p];
        for cycle in cycles {
            for window in 0..cycle.len() {
                let from = cycle[window];
                let to = cycle[(window + 1) % cycle.len()];
                if from == 0 || from > p || to == 0 || to > p {
                    return Err(PermError::InvalidCycle(format!("entry out of 1..={p}")));
                }
                if touched[from - 1] {
                    return Err(PermError::InvalidCycle(format!("element {from} repeated")));
                }
                touched[from - 1] = true;
                images[from - 1] = to - 1;
            }
        }
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// 0-based image of `i`.
    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// 1-based images, for display.
    pub fn one_based(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i + 1).collect()
    }

    /// `(self ∘ other)(i) = self(other(i))`; `other` acts first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "composition degree mismatch");
        Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &im) in self.images.iter().enumerate() {
            inv[im] = i;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &im)| i == im)
    }

    pub fn is_involution(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &im)| self.images[im] == i)
    }

    /// Cycle decomposition (0-based elements), including singletons.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let p = self.degree();
        let mut seen = vec![false; p];
        let mut out = Vec::new();
        for start in 0..p {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut cur = self.images[start];
            while cur != start {
                seen[cur] = true;
                cycle.push(cur);
                cur = self.images[cur];
            }
            out.push(cycle);
        }
        out
    }

    /// `#σ`: number of cycles, singletons included.
    pub fn cycle_count(&self) -> usize {
        let p = self.degree();
        let mut seen = vec![false; p];
        let mut count = 0;
        for start in 0..p {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cur = self.images[cur];
            }
        }
        count
    }

    /// `|σ| = p − #σ`: minimal number of transpositions.
    pub fn length(&self) -> usize {
        self.degree() - self.cycle_count()
    }

    /// Cycle type as a partition of `p`, sorted descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    /// The partition of `{1, …, p}` into orbits.
    pub fn orbit_partition(&self) -> SetPartition {
        SetPartition::from_blocks(self.degree(), self.cycles()).expect("orbits partition the ground set")
    }
}

impl std::fmt::Display for Permutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut wrote = false;
        for cycle in self.cycles() {
            if cycle.len() == 1 {
                continue;
            }
            write!(f, "(")?;
            for (i, e) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", e + 1)?;
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "id")?;
        }
        Ok(())
    }
}

/// A partition of `{1, …, p}` into disjoint nonempty blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetPartition {
    p: usize,
    /// Canonical form: blocks sorted, each block sorted (0-based elements).
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn from_blocks(p: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self, PermError> {
        let mut seen = vec![false; p];
        for block in &mut blocks {
            if block.is_empty() {
                return Err(PermError::InvalidCycle("empty block".into()));
            }
            block.sort_unstable();
            for &e in block.iter() {
                if e >= p || seen[e] {
                    return Err(PermError::NotABijection(p));
                }
                seen[e] = true;
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(PermError::NotABijection(p));
        }
        blocks.sort();
        Ok(SetPartition { p, blocks })
    }

    pub fn ground_size(&self) -> usize {
        self.p
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Supremum of two partitions in the partition lattice.
    pub fn join(&self, other: &SetPartition) -> Result<SetPartition, PermError> {
        if self.p != other.p {
            return Err(PermError::DegreeMismatch(self.p, other.p));
        }
        let mut uf = UnionFind::new(self.p);
        for part in [self, other] {
            for block in &part.blocks {
                for w in block.windows(2) {
                    uf.union(w[0], w[1]);
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for e in 0..self.p {
            groups.entry(uf.find(e)).or_default().push(e);
        }
        SetPartition::from_blocks(self.p, groups.into_values().collect())
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// All `p!` permutations of degree `p ≤ 8`, identity first.
pub fn enumerate_symmetric_group(p: usize) -> Result<Vec<Permutation>, PermError> {
    if p == 0 || p > MAX_ENUM_DEGREE {
        return Err(PermError::DegreeOutOfRange(p));
    }
    let mut out = Vec::with_capacity((1..=p).product());
    let mut current: Vec<usize> = (0..p).collect();
    loop {
        out.push(Permutation { images: current.clone() });
        // next lexicographic arrangement
        let Some(i) = (0..p - 1).rev().find(|&i| current[i] < current[i + 1]) else {
            break;
        };
        let j = (i + 1..p).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
    }
    Ok(out)
}

/// Exact Catalan number `Cat_n = binom(2n, n) / (n + 1)`.
pub fn catalan(n: u32) -> Result<u64, PermError> {
    if n > MAX_CATALAN {
        return Err(PermError::CatalanOverflow(n));
    }
    // Cat_{k+1} = Cat_k * 2(2k+1) / (k+2), exact at every step.
    let mut cat: u64 = 1;
    for k in 0..n as u64 {
        cat = cat * (2 * (2 * k + 1)) / (k + 2);
    }
    Ok(cat)
}

/// Möbius function of the symmetric group, multiplicative over cycles:
/// `Möb(σ) = ∏_{c ∈ σ} (−1)^{|c|−1} Cat_{|c|−1}`.
pub fn mobius(sigma: &Permutation) -> i64 {
    let mut acc: i64 = 1;
    for cycle in sigma.cycles() {
        let len = cycle.len() as u32;
        let cat = catalan(len - 1).expect("cycle length bounded by degree") as i64;
        let sign = if (len - 1).is_multiple_of(2) { 1 } else { -1 };
        acc *= sign * cat;
    }
    acc
}

/// `|α∨β| = p − #(π(α)∨π(β))`: the length of the join of the orbit partitions.
pub fn join_rank(alpha: &Permutation, beta: &Permutation) -> Result<usize, PermError> {
    if alpha.degree() != beta.degree() {
        return Err(PermError::DegreeMismatch(alpha.degree(), beta.degree()));
    }
    Ok(alpha.degree() - join_block_count(alpha, beta))
}

/// `#(π(α)∨π(β))` via union-find over both orbit structures.
pub fn join_block_count(alpha: &Permutation, beta: &Permutation) -> usize {
    let p = alpha.degree();
    let mut uf = UnionFind::new(p);
    for i in 0..p {
        uf.union(i, alpha.image(i));
        uf.union(i, beta.image(i));
    }
    let mut roots = vec![false; p];
    let mut count = 0;
    for i in 0..p {
        let r = uf.find(i);
        if !roots[r] {
            roots[r] = true;
            count += 1;
        }
    }
    count
}

/// True iff `α` lies on a geodesic from the identity to `σ`:
/// `|α| + |α⁻¹σ| = |σ|`.
pub fn is_geodesic(alpha: &Permutation, sigma: &Permutation) -> Result<bool, PermError> {
    if alpha.degree() != sigma.degree() {
        return Err(PermError::DegreeMismatch(alpha.degree(), sigma.degree()));
    }
    let rest = alpha.inverse().compose(sigma);
    Ok(alpha.length() + rest.length() == sigma.length())
}

/// All geodesic involutions: permutations with cycles of size 1 or 2 lying on
/// a geodesic to `σ`. For `σ` a full cycle the count is the Motzkin number of
/// `p`; in general it is the product of Motzkin numbers over the cycle sizes
/// of `σ`.
pub fn enumerate_nc12(sigma: &Permutation) -> Result<Vec<Permutation>, PermError> {
    let p = sigma.degree();
    if p == 0 || p > MAX_ENUM_DEGREE {
        return Err(PermError::DegreeOutOfRange(p));
    }
    let mut out = Vec::new();
    let mut images: Vec<usize> = (0..p).collect();
    collect_involutions(0, &mut images, &mut vec![false; p], &mut |cand| {
        if is_geodesic(cand, sigma).expect("equal degrees") {
            out.push(cand.clone());
        }
    });
    Ok(out)
}

/// Recursively builds all involutions of degree `p` (products of disjoint
/// transpositions and fixed points).
fn collect_involutions(
    next: usize,
    images: &mut Vec<usize>,
    used: &mut Vec<bool>,
    visit: &mut impl FnMut(&Permutation),
) {
    let p = images.len();
    let Some(i) = (next..p).find(|&i| !used[i]) else {
        visit(&Permutation { images: images.clone() });
        return;
    };
    // i stays fixed
    used[i] = true;
    collect_involutions(i + 1, images, used, visit);
    used[i] = false;
    // or i pairs with some later j
    for j in i + 1..p {
        if used[j] {
            continue;
        }
        used[i] = true;
        used[j] = true;
        images[i] = j;
        images[j] = i;
        collect_involutions(i + 1, images, used, visit);
        images[i] = i;
        images[j] = j;
        used[i] = false;
        used[j] = false;
    }
}

/// The full cycle `γ = (p p−1 ⋯ 2 1)`: `γ(1) = p`, `γ(i) = i − 1` for `i ≥ 2`
/// (1-based).
pub fn full_cycle(p: usize) -> Permutation {
    assert!(p >= 1);
    let mut images = Vec::with_capacity(p);
    images.push(p - 1);
    images.extend(0..p - 1);
    Permutation { images }
}

/// `γ̃ ∈ S_{2p}`: two disjoint full cycles on `{1, …, p}` and `{p+1, …, 2p}`.
pub fn double_cycle(p: usize) -> Permutation {
    assert!(p >= 1);
    let mut images = Vec::with_capacity(2 * p);
    images.push(p - 1);
    images.extend(0..p - 1);
    images.push(2 * p - 1);
    images.extend(p..2 * p - 1);
    Permutation { images }
}

/// Coefficient families for the `1/s` power-series expansions used by the
/// large-dimension moment estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    /// `s^{1−p}(s+1)⋯(s+p−1) = Σ_k a_{k,p} s^{−k}`.
    A,
    /// `Σ_{α ∈ 𝒫₁,₂(p)} s^{−|α|} = Σ_k b_{k,p} s^{−k}`.
    B,
    /// `Σ_{α ∈ NC₁,₂(p)} s^{−|α|} = Σ_k c_{k,p} s^{−k}`.
    C,
}

/// Exact series coefficient `a_{k,p}`, `b_{k,p}`, or `c_{k,p}`.
pub fn series_coefficient(kind: SeriesKind, k: usize, p: usize) -> BigRational {
    match kind {
        SeriesKind::A => BigRational::from(series_a(k, p)),
        SeriesKind::B => {
            // p(p−1)⋯(p−2k+1) / (2^k k!)
            let mut num = BigInt::from(1);
            for j in 0..2 * k {
                num *= BigInt::from(p as i64 - j as i64);
            }
            let mut den = BigInt::from(1) << k;
            for j in 1..=k {
                den *= BigInt::from(j as i64);
            }
            BigRational::new(num, den)
        }
        SeriesKind::C => {
            let b = binomial(p, 2 * k);
            let cat = if 2 * k <= p {
                BigInt::from(catalan(k as u32).expect("k ≤ p/2 ≤ 4 at enumeration degrees"))
            } else {
                BigInt::from(0)
            };
            BigRational::from(b * cat)
        }
    }
}

/// `a_{k,p}` via the recurrence `a_{k,p} = (p−1)a_{k−1,p−1} + a_{k,p−1}`,
/// `a_{0,p} = 1`.
fn series_a(k: usize, p: usize) -> BigInt {
    let mut table = vec![vec![BigInt::from(0); p + 1]; k + 1];
    for cell in table[0].iter_mut() {
        *cell = BigInt::from(1);
    }
    for kk in 1..=k {
        for q in 1..=p {
            let prev = table[kk - 1][q - 1].clone() * BigInt::from(q as i64 - 1);
            table[kk][q] = prev + table[kk][q - 1].clone();
        }
    }
    table[k][p].clone()
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let mut acc = BigInt::from(1);
    for j in 0..k {
        acc = acc * BigInt::from((n - j) as u64) / BigInt::from((j + 1) as u64);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::traits::{One, Zero};

    fn big(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    /// Independent Motzkin oracle: M_{n+1} = M_n + Σ_{k} M_k M_{n−1−k}.
    fn motzkin(n: usize) -> u64 {
        let mut m = vec![1u64; n + 1];
        for i in 1..=n {
            let mut v = m[i - 1];
            for k in 0..i - 1 {
                v += m[k] * m[i - 2 - k];
            }
            m[i] = v;
        }
        m[n]
    }

    #[test]
    fn enumeration_counts_and_distinctness() {
        assert_eq!(enumerate_symmetric_group(1).unwrap().len(), 1);
        assert_eq!(enumerate_symmetric_group(3).unwrap().len(), 6);
        let s5 = enumerate_symmetric_group(5).unwrap();
        assert_eq!(s5.len(), 120);
        let set: std::collections::HashSet<_> = s5.iter().collect();
        assert_eq!(set.len(), 120);
        assert_eq!(enumerate_symmetric_group(0), Err(PermError::DegreeOutOfRange(0)));
        assert_eq!(enumerate_symmetric_group(9), Err(PermError::DegreeOutOfRange(9)));
    }

    #[test]
    fn cycle_count_examples() {
        assert_eq!(Permutation::identity(3).cycle_count(), 3);
        assert_eq!(full_cycle(4).cycle_count(), 1);
        let t = Permutation::from_cycles(3, &[&[1, 2]]).unwrap();
        assert_eq!(t.cycle_count(), 2);
    }

    #[test]
    fn cycle_count_plus_length_is_degree() {
        for p in 1..=6 {
            for sigma in enumerate_symmetric_group(p).unwrap() {
                assert_eq!(sigma.cycle_count() + sigma.length(), p);
            }
        }
    }

    #[test]
    fn composition_convention_applies_right_factor_first() {
        // α = (1 2), β = (2 3): (αβ)(3) = α(2) = 1.
        let a = Permutation::from_cycles(3, &[&[1, 2]]).unwrap();
        let b = Permutation::from_cycles(3, &[&[2, 3]]).unwrap();
        let ab = a.compose(&b);
        assert_eq!(ab.image(2), 0);
        assert_eq!(ab.one_based(), vec![2, 3, 1]);
    }

    #[test]
    fn mobius_examples() {
        assert_eq!(mobius(&Permutation::identity(5)), 1);
        assert_eq!(mobius(&Permutation::from_cycles(2, &[&[1, 2]]).unwrap()), -1);
        assert_eq!(mobius(&Permutation::from_cycles(3, &[&[1, 2, 3]]).unwrap()), 2);
        // multiplicative over cycles: (1 2)(3 4 5) -> (−1)·2
        let s = Permutation::from_cycles(5, &[&[1, 2], &[3, 4, 5]]).unwrap();
        assert_eq!(mobius(&s), -2);
    }

    #[test]
    fn catalan_values_and_recurrence() {
        assert_eq!(catalan(0).unwrap(), 1);
        assert_eq!(catalan(3).unwrap(), 5);
        // Cat_{n+1} = Σ Cat_k Cat_{n−k}
        for n in 0..12u32 {
            let direct = catalan(n + 1).unwrap();
            let conv: u64 = (0..=n).map(|k| catalan(k).unwrap() * catalan(n - k).unwrap()).sum();
            assert_eq!(direct, conv, "catalan recurrence at n={n}");
        }
        assert_eq!(catalan(4).unwrap(), 14);
        assert!(catalan(31).is_err());
    }

    #[test]
    fn join_rank_examples() {
        let a = Permutation::from_cycles(3, &[&[1, 2]]).unwrap();
        let b = Permutation::from_cycles(3, &[&[2, 3]]).unwrap();
        assert_eq!(join_rank(&a, &b).unwrap(), 2);
        assert_eq!(join_rank(&a, &a).unwrap(), a.length());
        let id = Permutation::identity(4);
        assert_eq!(join_rank(&id, &id).unwrap(), 0);
        assert!(join_rank(&a, &id).is_err());
    }

    #[test]
    fn join_rank_dominates_lengths() {
        for alpha in enumerate_symmetric_group(4).unwrap() {
            for beta in enumerate_symmetric_group(4).unwrap() {
                let j = join_rank(&alpha, &beta).unwrap();
                assert!(j >= alpha.length().max(beta.length()));
            }
        }
    }

    #[test]
    fn join_agrees_with_partition_join() {
        for alpha in enumerate_symmetric_group(5).unwrap().iter().step_by(7) {
            for beta in enumerate_symmetric_group(5).unwrap().iter().step_by(11) {
                let via_partitions = alpha
                    .orbit_partition()
                    .join(&beta.orbit_partition())
                    .unwrap()
                    .num_blocks();
                assert_eq!(join_block_count(alpha, beta), via_partitions);
            }
        }
    }

    #[test]
    fn geodesic_examples() {
        let g3 = full_cycle(3);
        assert!(is_geodesic(&Permutation::identity(3), &g3).unwrap());
        let a = Permutation::from_cycles(3, &[&[1, 3]]).unwrap();
        assert!(is_geodesic(&a, &g3).unwrap());
        let g4 = full_cycle(4);
        let b = Permutation::from_cycles(4, &[&[1, 3], &[2, 4]]).unwrap();
        assert!(!is_geodesic(&b, &g4).unwrap());
    }

    #[test]
    fn nc12_counts_match_motzkin() {
        // |S_{NC₁,₂}(γ_p)| follows the Motzkin sequence 1, 1, 2, 4, 9, 21.
        let expected = [1u64, 2, 4, 9, 21];
        for p in 1..=5 {
            let got = enumerate_nc12(&full_cycle(p)).unwrap().len() as u64;
            assert_eq!(got, expected[p - 1], "p={p}");
            assert_eq!(got, motzkin(p), "independent recurrence at p={p}");
        }
        // identity target admits only the identity
        let only = enumerate_nc12(&Permutation::identity(4)).unwrap();
        assert_eq!(only, vec![Permutation::identity(4)]);
    }

    #[test]
    fn nc12_count_is_multiplicative_over_cycles() {
        // σ = (1 2 3)(4 5): product of Motzkin numbers M_3 · M_2 = 4 · 2.
        let sigma = Permutation::from_cycles(5, &[&[1, 2, 3], &[4, 5]]).unwrap();
        assert_eq!(enumerate_nc12(&sigma).unwrap().len(), 8);
        for alpha in enumerate_nc12(&sigma).unwrap() {
            assert!(alpha.is_involution());
            assert!(is_geodesic(&alpha, &sigma).unwrap());
        }
    }

    #[test]
    fn full_and_double_cycles() {
        let g = full_cycle(3);
        assert_eq!(g.one_based(), vec![3, 1, 2]); // γ(1)=3, γ(2)=1, γ(3)=2
        assert_eq!(full_cycle(5).cycle_count(), 1);
        let dg = double_cycle(3);
        assert_eq!(dg.degree(), 6);
        assert_eq!(dg.cycle_count(), 2);
        assert_eq!(dg.cycle_type(), vec![3, 3]);
    }

    #[test]
    fn series_coefficients_match_closed_forms() {
        assert_eq!(series_coefficient(SeriesKind::B, 1, 2), big(1));
        assert_eq!(series_coefficient(SeriesKind::C, 1, 3), big(3));
        for p in 1..=6 {
            assert!(series_coefficient(SeriesKind::A, p, p).is_zero(), "a_{{p,p}} = 0 at p={p}");
            assert!(series_coefficient(SeriesKind::A, 0, p).is_one());
        }
    }

    #[test]
    fn series_a_reproduces_rising_factorial() {
        // Σ_k a_{k,p} s^{p−k} must equal s(s+1)⋯(s+p−1) exactly.
        for p in 1..=6usize {
            for s in [2i64, 7, 11] {
                let mut poly = BigRational::zero();
                for k in 0..=p {
                    let term = series_coefficient(SeriesKind::A, k, p) * big(s.pow((p - k) as u32));
                    poly += term;
                }
                let mut rising = BigRational::one();
                for j in 0..p as i64 {
                    rising *= big(s + j);
                }
                assert_eq!(poly, rising, "p={p}, s={s}");
            }
        }
    }

    #[test]
    fn series_b_and_c_count_involutions() {
        // b_{k,p} counts involutions with exactly k transpositions; c_{k,p}
        // counts the non-crossing ones (geodesics to the full cycle).
        for p in 1..=6usize {
            let mut by_pairs = vec![0u64; p / 2 + 1];
            let mut images: Vec<usize> = (0..p).collect();
            collect_involutions(0, &mut images, &mut vec![false; p], &mut |inv| {
                by_pairs[inv.length()] += 1;
            });
            for (k, &count) in by_pairs.iter().enumerate() {
                assert_eq!(series_coefficient(SeriesKind::B, k, p), big(count as i64), "b at k={k}, p={p}");
            }
            let gamma = full_cycle(p);
            let mut nc_by_pairs = vec![0u64; p / 2 + 1];
            for alpha in enumerate_nc12(&gamma).unwrap() {
                nc_by_pairs[alpha.length()] += 1;
            }
            for (k, &count) in nc_by_pairs.iter().enumerate() {
                assert_eq!(series_coefficient(SeriesKind::C, k, p), big(count as i64), "c at k={k}, p={p}");
            }
        }
    }

    #[test]
    fn parity_lemma_exhaustive() {
        // For all σ₁, σ₂:  |σ₁⁻¹α| + |α⁻¹σ₂| ≡ |σ₁⁻¹σ₂| (mod 2), with
        // nonnegative excess, for every α.
        for p in 1..=5 {
            let group = enumerate_symmetric_group(p).unwrap();
            for s1 in group.iter().step_by(if p == 5 { 3 } else { 1 }) {
                let s1_inv = s1.inverse();
                for s2 in group.iter().step_by(if p == 5 { 3 } else { 1 }) {
                    let base = s1_inv.compose(s2).length();
                    for alpha in &group {
                        let total = s1_inv.compose(alpha).length()
                            + alpha.inverse().compose(s2).length();
                        assert!(total >= base);
                        assert_eq!((total - base) % 2, 0);
                    }
                }
            }
        }
    }

    #[test]
    fn optimization_lemma_full_cycle() {
        // |α| + 2|αβ⁻¹| + |(γ⁻¹α)∨(γ⁻¹β⁻¹)| ≥ |γ|, equality iff
        // α = β ∈ S_{NC₁,₂}(γ), and the gap is at least 2 otherwise.
        for p in 2..=5 {
            let gamma = full_cycle(p);
            let gamma_inv = gamma.inverse();
            let group = enumerate_symmetric_group(p).unwrap();
            let nc12: std::collections::HashSet<_> =
                enumerate_nc12(&gamma).unwrap().into_iter().collect();
            for alpha in &group {
                for beta in &group {
                    let lhs = alpha.length()
                        + 2 * alpha.compose(&beta.inverse()).length()
                        + join_rank(&gamma_inv.compose(alpha), &gamma_inv.compose(&beta.inverse()))
                            .unwrap();
                    let target = gamma.length();
                    if alpha == beta && nc12.contains(alpha) {
                        assert_eq!(lhs, target);
                    } else {
                        assert!(lhs >= target + 2, "p={p} α={alpha} β={beta}");
                    }
                }
            }
        }
    }

    #[test]
    fn optimization_lemma_squared_cycle() {
        // |αβ⁻¹| + |(σ⁻¹α)∨(σ⁻¹β⁻¹)| ≥ |σ²|/2 for every σ.
        for p in 2..=5 {
            let group = enumerate_symmetric_group(p).unwrap();
            let step = if p == 5 { 7 } else { 1 };
            for sigma in group.iter().step_by(step) {
                let sigma_inv = sigma.inverse();
                let target = sigma.compose(sigma).length();
                for alpha in &group {
                    for beta in &group {
                        let lhs = 2 * (alpha.compose(&beta.inverse()).length()
                            + join_rank(&sigma_inv.compose(alpha), &sigma_inv.compose(&beta.inverse()))
                                .unwrap());
                        assert!(lhs >= target, "p={p} σ={sigma} α={alpha} β={beta}");
                    }
                }
            }
        }
    }

    #[test]
    fn binomial_annihilation() {
        // Σ_q (−1)^{n−q} F(q) binom(n,q) = 0 for polynomials of degree < n.
        let polys: [&[i64]; 4] = [&[3], &[1, -2], &[5, 0, 7], &[2, 1, -4, 9]];
        for coeffs in polys {
            let deg = coeffs.len() - 1;
            for n in (deg + 1)..=(deg + 3) {
                let mut acc = BigRational::zero();
                for q in 0..=n {
                    let fq: BigRational = coeffs
                        .iter()
                        .enumerate()
                        .map(|(j, &c)| big(c) * big((q as i64).pow(j as u32)))
                        .sum();
                    let sign = if (n - q) % 2 == 0 { big(1) } else { big(-1) };
                    acc += sign * fq * BigRational::from(binomial(n, q));
                }
                assert!(acc.is_zero(), "degree {deg} poly, n={n}");
            }
        }
    }

    #[test]
    fn set_partition_join() {
        let p1 = SetPartition::from_blocks(4, vec![vec![0, 1], vec![2], vec![3]]).unwrap();
        let p2 = SetPartition::from_blocks(4, vec![vec![1, 2], vec![0], vec![3]]).unwrap();
        let j = p1.join(&p2).unwrap();
        assert_eq!(j.num_blocks(), 2);
        assert_eq!(j.blocks()[0], vec![0, 1, 2]);
    }
}
