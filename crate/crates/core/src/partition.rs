//! Partitions, signed permutations and cycle statistics.
//!
//! Partitions are stored without trailing zeros. Call sites that need a fixed
//! number of parts pad explicitly with [`Partition::padded`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// Exact rational number used for character-weighted accumulations.
pub type BigRat = num_rational::BigRational;

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    /// Builds a partition, dropping trailing zeros.
    ///
    /// Fails if the sequence is not weakly decreasing.
    pub fn new(mut parts: Vec<u64>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if let Some(i) = parts.windows(2).position(|w| w[0] < w[1]) {
            return Err(Error::MalformedPartition {
                input: join(&parts),
                reason: format!("part {} is smaller than the next part", i + 1),
            });
        }
        Ok(Self { parts })
    }

    /// The empty partition of zero.
    pub fn empty() -> Self {
        Self::default()
    }

    /// The one-row partition `(n)`; empty for `n = 0`.
    pub fn row(n: u64) -> Self {
        if n == 0 {
            Self::empty()
        } else {
            Self { parts: vec![n] }
        }
    }

    /// The one-column partition `(1^n)`.
    pub fn column(n: usize) -> Self {
        Self { parts: vec![1; n] }
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn weight(&self) -> u64 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `parts[i]`, or 0 past the last part.
    pub fn part(&self, i: usize) -> u64 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// The parts padded with zeros to length `n`. Fails if there are more
    /// than `n` parts.
    pub fn padded(&self, n: usize) -> Option<Vec<u64>> {
        if self.parts.len() > n {
            return None;
        }
        let mut v = self.parts.clone();
        v.resize(n, 0);
        Some(v)
    }

    /// All parts distinct (the zero tail is not counted).
    pub fn is_regular(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] != w[1])
    }

    /// Column lengths of the Young diagram.
    pub fn conjugate(&self) -> Self {
        let width = self.part(0);
        let parts = (1..=width)
            .map(|c| self.parts.iter().take_while(|&&p| p >= c).count() as u64)
            .collect();
        Self { parts }
    }

    /// `(s·λ_1, s·λ_2, …)`.
    pub fn scaled(&self, s: u64) -> Self {
        if s == 0 {
            return Self::empty();
        }
        Self {
            parts: self.parts.iter().map(|p| p * s).collect(),
        }
    }

    /// Sign of any permutation of this cycle type: `(-1)^(d - length)`.
    pub fn sign(&self) -> i32 {
        if (self.weight() - self.len() as u64).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Multiplicity of each part size, keyed by part size.
    pub fn multiplicities(&self) -> BTreeMap<u64, usize> {
        let mut m = BTreeMap::new();
        for &p in &self.parts {
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }
}

fn join(parts: &[u64]) -> String {
    parts
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join(&self.parts))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Reads `"31,3,2,2,2"`; the empty string is the empty partition.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let parts = s
            .split(',')
            .map(|t| {
                t.trim().parse::<u64>().map_err(|_| Error::MalformedPartition {
                    input: s.to_string(),
                    reason: format!("{:?} is not a nonnegative integer", t.trim()),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts).map_err(|e| match e {
            Error::MalformedPartition { reason, .. } => Error::MalformedPartition {
                input: s.to_string(),
                reason,
            },
            other => other,
        })
    }
}

impl TryFrom<Vec<u64>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<u64>) -> Result<Self> {
        Self::new(parts)
    }
}

/// All partitions of `d` in reverse-lexicographic order, `(d)` first and
/// `(1^d)` last.
pub fn partitions_of(d: u64) -> Vec<Partition> {
    partitions_with_max_len(d, usize::MAX)
}

/// Partitions of `d` with at most `max_len` parts, reverse-lexicographic.
pub fn partitions_with_max_len(d: u64, max_len: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill(d, d, max_len, &mut current, &mut out);
    out
}

fn fill(rest: u64, cap: u64, max_len: usize, current: &mut Vec<u64>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition {
            parts: current.clone(),
        });
        return;
    }
    if current.len() == max_len {
        return;
    }
    for p in (1..=cap.min(rest)).rev() {
        current.push(p);
        fill(rest - p, p, max_len, current, out);
        current.pop();
    }
}

/// Cycle-type statistics of a conjugacy class of `S_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleStats {
    /// Part size → multiplicity.
    pub multiplicities: BTreeMap<u64, usize>,
    /// Number of permutations with this cycle type, `d!/z`.
    pub class_size: BigUint,
    /// Centralizer order `z = Π i^{m_i} m_i!`.
    pub centralizer: BigUint,
}

pub fn cycle_stats(rho: &Partition) -> CycleStats {
    let multiplicities = rho.multiplicities();
    let mut centralizer = BigUint::one();
    for (&i, &m) in &multiplicities {
        centralizer *= BigUint::from(i).pow(m as u32) * factorial(m as u64);
    }
    let class_size = factorial(rho.weight()) / &centralizer;
    CycleStats {
        multiplicities,
        class_size,
        centralizer,
    }
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// A permutation of `{1..n}` in one-line notation, with its sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPermutation {
    pub images: Vec<usize>,
    pub sign: i32,
}

/// All `n!` permutations of `{1..n}` in lexicographic order of their
/// one-line notation, each with its sign. `n = 0` yields the empty
/// permutation.
pub fn permutations_signed(n: usize) -> Vec<SignedPermutation> {
    let mut out = Vec::new();
    let mut images: Vec<usize> = (1..=n).collect();
    loop {
        out.push(SignedPermutation {
            sign: sign_of(&images),
            images: images.clone(),
        });
        if !next_permutation(&mut images) {
            break;
        }
    }
    out
}

fn sign_of(images: &[usize]) -> i32 {
    let inversions = (0..images.len())
        .flat_map(|i| (i + 1..images.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| images[i] > images[j])
        .count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).unwrap();
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u64]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn partitions_small() {
        assert_eq!(partitions_of(0), vec![Partition::empty()]);
        assert_eq!(partitions_of(3), vec![p(&[3]), p(&[2, 1]), p(&[1, 1, 1])]);
        assert_eq!(partitions_of(5).len(), 7);
    }

    #[test]
    fn partition_counts_match_known_sequence() {
        let known = [1, 1, 2, 3, 5, 7, 11, 15, 22];
        for (d, &n) in known.iter().enumerate() {
            let ps = partitions_of(d as u64);
            assert_eq!(ps.len(), n, "p({d})");
            let mut sorted = ps.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), n);
            assert!(ps.iter().all(|q| q.weight() == d as u64));
        }
    }

    #[test]
    fn bounded_length() {
        let ps = partitions_with_max_len(6, 2);
        assert_eq!(ps, vec![p(&[6]), p(&[5, 1]), p(&[4, 2]), p(&[3, 3])]);
    }

    #[test]
    fn cycle_stats_examples() {
        let s = cycle_stats(&p(&[2, 1]));
        assert_eq!(s.centralizer, BigUint::from(2u32));
        assert_eq!(s.class_size, BigUint::from(3u32));
        let s = cycle_stats(&p(&[1, 1, 1]));
        assert_eq!(s.centralizer, BigUint::from(6u32));
        assert_eq!(s.class_size, BigUint::from(1u32));
    }

    /// Cycle type of a permutation given in one-line notation (1-based).
    fn cycle_type(images: &[usize]) -> Partition {
        let mut seen = vec![false; images.len()];
        let mut lens = Vec::new();
        for start in 0..images.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = images[i] - 1;
                len += 1;
            }
            lens.push(len);
        }
        lens.sort_unstable_by(|a, b| b.cmp(a));
        p(&lens)
    }

    #[test]
    fn class_sizes_match_enumeration() {
        for d in 0..=6usize {
            let mut counts: BTreeMap<Partition, u64> = BTreeMap::new();
            for perm in permutations_signed(d) {
                *counts.entry(cycle_type(&perm.images)).or_default() += 1;
            }
            for rho in partitions_of(d as u64) {
                let stats = cycle_stats(&rho);
                assert_eq!(stats.class_size, BigUint::from(counts[&rho]), "{rho}");
                assert_eq!(&stats.class_size * &stats.centralizer, factorial(d as u64));
            }
        }
        assert_eq!(cycle_stats(&p(&[3, 1])).class_size, BigUint::from(8u32));
        assert_eq!(cycle_stats(&p(&[3, 1])).centralizer, BigUint::from(3u32));
    }

    #[test]
    fn class_sizes_sum_to_factorial() {
        for d in 0..=8u64 {
            let total: BigUint = partitions_of(d)
                .iter()
                .map(|r| cycle_stats(r).class_size)
                .sum();
            assert_eq!(total, factorial(d));
        }
    }

    #[test]
    fn sign_matches_permutations() {
        for perm in permutations_signed(5) {
            assert_eq!(cycle_type(&perm.images).sign(), perm.sign);
        }
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(p(&[3, 1]).conjugate(), p(&[2, 1, 1]));
        assert_eq!(p(&[1, 1, 1, 1]).conjugate(), p(&[4]));
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
    }

    #[test]
    fn conjugate_is_weight_preserving_involution() {
        for d in 0..=12 {
            for q in partitions_of(d) {
                let c = q.conjugate();
                assert_eq!(c.weight(), d);
                assert_eq!(c.conjugate(), q);
            }
        }
    }

    #[test]
    fn signed_permutations() {
        let one = permutations_signed(1);
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].images, vec![1]);
        assert_eq!(one[0].sign, 1);
        let two = permutations_signed(2);
        assert_eq!(two[0].images, vec![1, 2]);
        assert_eq!(two[0].sign, 1);
        assert_eq!(two[1].images, vec![2, 1]);
        assert_eq!(two[1].sign, -1);
        let three = permutations_signed(3);
        assert_eq!(three.len(), 6);
        assert_eq!(three.iter().map(|p| p.sign).sum::<i32>(), 0);
    }

    #[test]
    fn string_form() {
        let q: Partition = "31,3,2,2,2".parse().unwrap();
        assert_eq!(q.parts(), &[31, 3, 2, 2, 2]);
        assert_eq!(q.to_string(), "31,3,2,2,2");
        assert_eq!("".parse::<Partition>().unwrap(), Partition::empty());
        assert_eq!(Partition::empty().to_string(), "");
        assert_eq!("3,3,0,0".parse::<Partition>().unwrap(), p(&[3, 3]));
        assert!("1,2".parse::<Partition>().is_err());
        assert!("a".parse::<Partition>().is_err());
        assert!("-1".parse::<Partition>().is_err());
    }
}
