//! Plethysm multiplicities through lattice-point counting.
//!
//! For `μ ⊢ d` and `λ` with at most `d − 1` rows, the multiplicity of `S^λ`
//! in `S^μ(S^k W)` is
//!
//! ```text
//! a_λ = (−1)^{C(d−1,2)} Σ_{α⊢d} χ_μ(α) (D_α/d!) Σ_{π∈S_{d−1}} sgn(π) Q_α(k, λ_π)
//! ```
//!
//! with `(λ_π)_j = λ_j + (d − j) − π(j)`. Partitions with exactly `d` rows
//! are first reduced by stripping full columns ([`reduce`]); the wedge
//! inner functor is handled through the transpose duality.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::Zero;
use rayon::prelude::*;

use crate::characters::{dimension, CharacterTable};
use crate::counting::{count_matrices_batch, pieri_chain_count, EntryDomain, PieriChain};
use crate::error::{Error, Result};
use crate::partition::{
    cycle_stats, factorial, partitions_of, partitions_with_max_len, permutations_signed, BigRat,
    Partition, SignedPermutation,
};
pub use crate::symfunc::Inner;

/// Multiplicity of `S^λ` inside `S^μ(S^k W)` (or `S^μ(Λ^k W)`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlethysmQuery {
    pub mu: Partition,
    pub k: u64,
    pub lambda: Partition,
    pub inner: Inner,
}

impl PlethysmQuery {
    /// Checks `|λ| = |μ|·k`.
    pub fn new(mu: Partition, k: u64, lambda: Partition, inner: Inner) -> Result<Self> {
        let expected = mu.weight() * k;
        if lambda.weight() != expected {
            return Err(Error::WeightMismatch {
                actual: lambda.weight(),
                expected,
            });
        }
        Ok(Self {
            mu,
            k,
            lambda,
            inner,
        })
    }

    pub fn sym(mu: Partition, k: u64, lambda: Partition) -> Result<Self> {
        Self::new(mu, k, lambda, Inner::Sym)
    }

    pub fn degree(&self) -> usize {
        self.mu.weight() as usize
    }

    /// The equivalent symmetric-power query: `λ^∨` inside `S^{μ'}(S^k W)`,
    /// where `μ' = μ` for even `k` and `μ^∨` for odd `k`.
    pub fn to_sym(&self) -> Self {
        match self.inner {
            Inner::Sym => self.clone(),
            Inner::Wedge => Self {
                mu: if self.k.is_multiple_of(2) {
                    self.mu.clone()
                } else {
                    self.mu.conjugate()
                },
                k: self.k,
                lambda: self.lambda.conjugate(),
                inner: Inner::Sym,
            },
        }
    }
}

/// `λ_π` for one permutation of `{1..d−1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftedArguments {
    pub pi: SignedPermutation,
    pub vector: Vec<i64>,
}

/// `(λ_π)_j = λ_j + (d − j) − π(j)` for `j = 1..d−1`, where `lambda` is
/// already padded to `d − 1` entries.
pub fn shifted_arguments(lambda: &[u64], pi: &SignedPermutation) -> ShiftedArguments {
    let n = lambda.len();
    let d = n + 1;
    let vector: Vec<i64> = (0..n)
        .map(|j| lambda[j] as i64 + (d - (j + 1)) as i64 - pi.images[j] as i64)
        .collect();
    // The last entry is carried explicitly; the staircase shifts cancel.
    debug_assert_eq!(
        vector.iter().sum::<i64>(),
        lambda.iter().map(|&x| x as i64).sum::<i64>()
    );
    ShiftedArguments {
        pi: pi.clone(),
        vector,
    }
}

/// Strips the `d`-th row: `λ ↦ λ − λ_d`, `k ↦ k − λ_d`, and `μ ↦ μ^∨` when
/// `λ_d` is odd. Queries whose `λ` has fewer than `d` rows come back
/// unchanged, as do those with more than `d` rows (their multiplicity is 0).
pub fn reduce(q: &PlethysmQuery) -> PlethysmQuery {
    let d = q.degree();
    if d == 0 || q.lambda.len() != d {
        return q.clone();
    }
    let last = q.lambda.part(d - 1);
    let lambda = Partition::new(q.lambda.parts().iter().map(|&x| x - last).collect())
        .expect("subtracting the last part keeps the order");
    PlethysmQuery {
        mu: if last % 2 == 1 {
            q.mu.conjugate()
        } else {
            q.mu.clone()
        },
        k: q.k - last,
        lambda,
        inner: q.inner,
    }
}

/// The paper-file argument convention `(b_1, …, b_{d−2}, s)` for a reduced
/// query: `b_i = λ_{d−i}` in increasing order and `s = k`.
pub fn b_arguments(q: &PlethysmQuery) -> Result<(Vec<u64>, u64)> {
    let r = reduce(&q.to_sym());
    let d = r.degree();
    if d < 2 {
        return Ok((Vec::new(), r.k));
    }
    let lam = r.lambda.padded(d).ok_or_else(|| {
        Error::Argument(format!("({}) has more than {d} rows", q.lambda))
    })?;
    let b = (2..d).rev().map(|j| lam[j - 1]).collect();
    Ok((b, r.k))
}

/// Inverse of [`b_arguments`]: the reduced `(k, λ)` for `d` outer boxes.
pub fn from_b_arguments(b: &[u64], s: u64, d: usize) -> Result<(u64, Partition)> {
    if d < 2 || b.len() != d - 2 {
        return Err(Error::Argument(format!(
            "expected {} b-arguments for d = {d}",
            d.saturating_sub(2)
        )));
    }
    let rest: u64 = b.iter().sum();
    let total = s * d as u64;
    if rest > total {
        return Err(Error::Argument("b-arguments exceed d·s".into()));
    }
    let mut parts = vec![total - rest];
    parts.extend(b.iter().rev());
    Ok((s, Partition::new(parts)?))
}

/// Multiplicity of `S^λ` in the plethysm. Both evaluation routes (uniform
/// sum over `α`, and the split form with the `α = (1^d)` term replaced by
/// the Pieri-chain count) are computed and must agree.
pub fn coefficient(q: &PlethysmQuery) -> Result<BigUint> {
    let eval = evaluate(q)?;
    if eval.uniform != eval.split {
        return Err(Error::Inconsistency(format!(
            "evaluation routes disagree for S^({})(S^{}) at ({}): {} vs {}",
            q.mu, q.k, q.lambda, eval.uniform, eval.split
        )));
    }
    match eval.uniform.sign() {
        Sign::Minus => Err(Error::Inconsistency(format!(
            "negative multiplicity {} for ({}) in S^({})(S^{})",
            eval.uniform, q.lambda, q.mu, q.k
        ))),
        _ => Ok(eval.uniform.magnitude().clone()),
    }
}

/// Both routes of the master formula, before any sign check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub uniform: BigInt,
    pub split: BigInt,
}

/// Evaluates the master formula without asserting nonnegativity.
pub fn evaluate(q: &PlethysmQuery) -> Result<Evaluation> {
    let (r, terms) = match prepare(q, 0)? {
        Prepared::Value(v) => return Ok(Evaluation::same(v)),
        Prepared::Sum(r, terms) => (r, terms),
    };
    let d = r.degree();
    let sign = staircase_sign(d);
    let d_fact = BigInt::from(factorial(d as u64));
    let ones = Partition::column(d);

    let mut uniform = BigRat::zero();
    let mut others = BigRat::zero();
    for (alpha, term) in &terms {
        let x = BigRat::new(term * sign, d_fact.clone());
        if *alpha != ones {
            others += &x;
        }
        uniform += x;
    }
    let tensor = pieri_chain_count(&PieriChain::new(r.k, d, r.lambda.clone())?);
    let split = BigRat::new(BigInt::from(dimension(&r.mu)) * BigInt::from(tensor), d_fact) + others;

    Ok(Evaluation {
        uniform: integral(uniform, q)?,
        split: integral(split, q)?,
    })
}

/// A deliberately altered master formula. The default is the real one;
/// other values exist so tests can check that the self-test suites notice
/// a broken formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FormulaVariant {
    /// Multiplies the whole result.
    pub sign: i64,
    /// Added to every entry of every `λ_π`.
    pub shift: i64,
}

impl Default for FormulaVariant {
    fn default() -> Self {
        Self { sign: 1, shift: 0 }
    }
}

/// The uniform route of the master formula under `variant`, as a rational
/// with no integrality or sign checks.
pub fn evaluate_variant(q: &PlethysmQuery, variant: FormulaVariant) -> Result<BigRat> {
    let value = match prepare(q, variant.shift)? {
        Prepared::Value(v) => BigRat::from_integer(v),
        Prepared::Sum(r, terms) => {
            let d = r.degree();
            let total: BigInt = terms.into_iter().map(|(_, t)| t).sum();
            BigRat::new(total * staircase_sign(d), BigInt::from(factorial(d as u64)))
        }
    };
    Ok(value * BigRat::from_integer(variant.sign.into()))
}

enum Prepared {
    /// Settled without the sum (degenerate degrees or `k = 0`).
    Value(BigInt),
    /// The reduced query and the terms `χ_μ(α)·D_α·Σ_π sgn(π) Q_α(k, λ_π)`.
    Sum(PlethysmQuery, Vec<(Partition, BigInt)>),
}

fn prepare(q: &PlethysmQuery, shift: i64) -> Result<Prepared> {
    let q = PlethysmQuery::new(q.mu.clone(), q.k, q.lambda.clone(), q.inner)?.to_sym();
    let d = q.degree();
    if q.lambda.len() > d {
        return Ok(Prepared::Value(BigInt::zero()));
    }
    let r = reduce(&q);
    if d == 0 {
        return Ok(Prepared::Value(BigInt::from(r.lambda.is_empty() as u8)));
    }
    if r.k == 0 {
        // S^μ of a line is nonzero only for one-row μ.
        let v = r.lambda.is_empty() && r.mu.len() <= 1;
        return Ok(Prepared::Value(BigInt::from(v as u8)));
    }
    // d ≥ 2 here: d = 1 always reduces to k = 0.
    let n = d - 1;
    let lambda = r.lambda.padded(n).expect("reduced λ has at most d − 1 rows");
    let table = CharacterTable::for_degree(d as u64)?;
    let perms = permutations_signed(n);
    let targets: Vec<Vec<i64>> = perms
        .iter()
        .map(|pi| {
            let mut v = shifted_arguments(&lambda, pi).vector;
            v.iter_mut().for_each(|x| *x += shift);
            v
        })
        .collect();

    let terms = partitions_of(d as u64)
        .par_iter()
        .map(|alpha| -> Result<(Partition, BigInt)> {
            let chi = table.value(&r.mu, alpha)?;
            if chi == 0 {
                return Ok((alpha.clone(), BigInt::zero()));
            }
            let signed = weyl_sum(alpha, r.k, &targets, &perms);
            let weight = BigInt::from(chi) * BigInt::from(cycle_stats(alpha).class_size);
            Ok((alpha.clone(), weight * signed))
        })
        .collect::<Result<_>>()?;
    Ok(Prepared::Sum(r, terms))
}

impl Evaluation {
    fn same(v: BigInt) -> Self {
        Self {
            uniform: v.clone(),
            split: v,
        }
    }
}

fn integral(x: BigRat, q: &PlethysmQuery) -> Result<BigInt> {
    if !x.is_integer() {
        return Err(Error::Inconsistency(format!(
            "non-integral multiplicity {x} for ({}) in S^({})(S^{})",
            q.lambda, q.mu, q.k
        )));
    }
    Ok(x.to_integer())
}

/// `(−1)^{C(d−1, 2)}`.
pub fn staircase_sign(d: usize) -> i64 {
    let n = d.saturating_sub(1);
    if (n * n.saturating_sub(1) / 2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `Σ_π sgn(π) Q_α(k, λ_π)` over precomputed shifted targets.
pub fn weyl_sum(alpha: &Partition, k: u64, targets: &[Vec<i64>], perms: &[SignedPermutation]) -> BigInt {
    let counts = count_matrices_batch(alpha, k, targets, EntryDomain::Integer);
    let mut total = BigInt::zero();
    for (c, pi) in counts.into_iter().zip(perms) {
        if pi.sign > 0 {
            total += BigInt::from(c);
        } else {
            total -= BigInt::from(c);
        }
    }
    total
}

/// All `λ` with nonzero multiplicity in `S^μ(S^k W)` (or `S^μ(Λ^k W)`).
pub fn decompose(mu: &Partition, k: u64, inner: Inner) -> Result<BTreeMap<Partition, BigUint>> {
    match inner {
        Inner::Wedge => {
            let outer = if k.is_multiple_of(2) { mu.clone() } else { mu.conjugate() };
            Ok(decompose(&outer, k, Inner::Sym)?
                .into_iter()
                .map(|(l, m)| (l.conjugate(), m))
                .collect())
        }
        Inner::Sym => {
            let d = mu.weight();
            let lambdas = partitions_with_max_len(d * k, d as usize);
            let values: Vec<(Partition, BigUint)> = lambdas
                .into_par_iter()
                .map(|lambda| {
                    let m = coefficient(&PlethysmQuery::sym(mu.clone(), k, lambda.clone())?)?;
                    Ok((lambda, m))
                })
                .collect::<Result<_>>()?;
            Ok(values.into_iter().filter(|(_, m)| !m.is_zero()).collect())
        }
    }
}

/// Multiplicity of `S^λ` in `(S^k W)^{⊗d}`.
pub fn tensor_multiplicity(k: u64, d: usize, lambda: &Partition) -> Result<BigUint> {
    Ok(pieri_chain_count(&PieriChain::new(k, d, lambda.clone())?))
}

/// One row of a Foulkes comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoulkesRow {
    pub lambda: Partition,
    /// Multiplicity in `S^a(S^b)`.
    pub left: BigUint,
    /// Multiplicity in `S^b(S^a)`.
    pub right: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoulkesReport {
    pub a: u64,
    pub b: u64,
    pub rows: Vec<FoulkesRow>,
    /// `left ≤ right` for every `λ ⊢ ab`.
    pub holds: bool,
}

/// Compares `S^a(S^b)` against `S^b(S^a)` partition by partition.
pub fn foulkes_compare(a: u64, b: u64) -> Result<FoulkesReport> {
    if a == 0 || b == 0 {
        return Err(Error::Argument("Foulkes exponents must be positive".into()));
    }
    let left = decompose(&Partition::row(a), b, Inner::Sym)?;
    let right = decompose(&Partition::row(b), a, Inner::Sym)?;
    let mut lambdas: Vec<Partition> = left.keys().chain(right.keys()).cloned().collect();
    lambdas.sort_by(|x, y| y.cmp(x));
    lambdas.dedup();
    let rows: Vec<FoulkesRow> = lambdas
        .into_iter()
        .map(|lambda| FoulkesRow {
            left: left.get(&lambda).cloned().unwrap_or_default(),
            right: right.get(&lambda).cloned().unwrap_or_default(),
            lambda,
        })
        .collect();
    let holds = rows.iter().all(|r| r.left <= r.right);
    Ok(FoulkesReport { a, b, rows, holds })
}

/// One probed point of a stable-multiplicity sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeEntry {
    pub k: u64,
    /// `λ'(k) = (dk − |tail|, tail…)`, or `None` when that is not a
    /// partition (first row shorter than `tail_1`).
    pub lambda: Option<Partition>,
    pub multiplicity: Option<BigUint>,
}

/// Multiplicities of `(dk − |tail|, tail…)` in `S^μ(S^k)` for `k = 1..=kmax`.
pub fn stable_multiplicity_probe(mu: &Partition, tail: &Partition, kmax: u64) -> Result<Vec<ProbeEntry>> {
    let d = mu.weight();
    (1..=kmax)
        .map(|k| {
            let total = d * k;
            let first = total.checked_sub(tail.weight()).filter(|&f| f >= tail.part(0));
            let Some(first) = first else {
                return Ok(ProbeEntry {
                    k,
                    lambda: None,
                    multiplicity: None,
                });
            };
            let mut parts = vec![first];
            parts.extend_from_slice(tail.parts());
            let lambda = Partition::new(parts)?;
            let m = coefficient(&PlethysmQuery::sym(mu.clone(), k, lambda.clone())?)?;
            Ok(ProbeEntry {
                k,
                lambda: Some(lambda),
                multiplicity: Some(m),
            })
        })
        .collect()
}

/// The value a probe sequence settles on: the common multiplicity of its
/// last `window` valid entries, if they agree.
pub fn eventual_value(entries: &[ProbeEntry], window: usize) -> Option<BigUint> {
    let tail: Vec<&BigUint> = entries
        .iter()
        .rev()
        .filter_map(|e| e.multiplicity.as_ref())
        .take(window)
        .collect();
    if tail.len() < window || window == 0 {
        return None;
    }
    tail.windows(2).all(|w| w[0] == w[1]).then(|| tail[0].clone())
}
