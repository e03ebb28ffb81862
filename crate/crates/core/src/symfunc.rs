//! Sparse exact polynomials and the brute-force plethysm oracle.
//!
//! The oracle expands the character of `S^μ(S^k W)` (or `S^μ(Λ^k W)`) as
//! `Σ_α χ_μ(α) (D_α/d!) Π_i h_k(x^{α_i})` in a fixed number of variables and
//! reads off Schur multiplicities with the Vandermonde trick. It shares no
//! code with the lattice-point route in [`crate::plethysm`] beyond the
//! character table.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::characters;
use crate::error::{Error, Result};
use crate::partition::{
    binomial, cycle_stats, factorial, partitions_of, partitions_with_max_len,
    permutations_signed, Partition,
};

/// Which inner functor a plethysm is taken over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Inner {
    /// `S^k W`
    Sym,
    /// `Λ^k W`
    Wedge,
}

impl std::str::FromStr for Inner {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sym" => Ok(Inner::Sym),
            "wedge" => Ok(Inner::Wedge),
            other => Err(Error::Argument(format!(
                "unknown inner functor {other:?} (expected sym or wedge)"
            ))),
        }
    }
}

impl fmt::Display for Inner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Inner::Sym => "sym",
            Inner::Wedge => "wedge",
        })
    }
}

/// Multivariate polynomial with big-integer coefficients, keyed by exponent
/// vector. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(vec![0; nvars], BigInt::one())
    }

    pub fn monomial(exponents: Vec<u32>, coeff: BigInt) -> Self {
        let nvars = exponents.len();
        let mut p = Self::zero(nvars);
        p.add_term(exponents, coeff);
        p
    }

    /// The variable `x_i` (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, BigInt::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coefficient(&self, exponents: &[u32]) -> BigInt {
        self.terms.get(exponents).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, exponents: Vec<u32>, coeff: BigInt) {
        assert_eq!(exponents.len(), self.nvars, "exponent vector length");
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exponents) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Divides every coefficient by `c`, failing if any division is inexact.
    pub fn div_exact(&self, c: &BigInt) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (e, v) in &self.terms {
            let (q, r) = v.div_rem(c);
            if !r.is_zero() {
                return None;
            }
            terms.insert(e.clone(), q);
        }
        Some(Self {
            nvars: self.nvars,
            terms,
        })
    }

    /// Substitutes `x_i ↦ x_i^a` for every variable.
    pub fn power_substitute(&self, a: u32) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().map(|x| x * a).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(self.nvars), |acc, _| &acc * self)
    }

    /// Total degrees present among the terms.
    pub fn total_degrees(&self) -> Vec<u64> {
        let mut ds: Vec<u64> = self
            .terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u64).sum())
            .collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;

    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;

    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = SparsePoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let (sign, mag) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| {
                    if x == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, x)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Exponent vectors `e ∈ N^n` with `Σ e = k`, optionally with `e_i ≤ 1`.
fn compositions(k: u32, n: usize, square_free: bool) -> Vec<Vec<u32>> {
    fn go(rest: u32, n: usize, square_free: bool, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == n {
            if !square_free || rest <= 1 {
                cur.push(rest);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        let top = if square_free { rest.min(1) } else { rest };
        for x in 0..=top {
            cur.push(x);
            go(rest - x, n, square_free, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if k == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(k, n, square_free, &mut Vec::new(), &mut out);
    out
}

/// `h_k(x_1^a, …, x_n^a)`: every monomial of degree `k` in the `a`-th powers.
pub fn complete_h(k: u32, nvars: usize, a: u32) -> SparsePoly {
    let mut p = SparsePoly::zero(nvars);
    for e in compositions(k, nvars, false) {
        p.add_term(e.into_iter().map(|x| x * a).collect(), BigInt::one());
    }
    p
}

/// `e_k(x_1^a, …, x_n^a)`; zero when `k > n`.
pub fn elementary_e(k: u32, nvars: usize, a: u32) -> SparsePoly {
    let mut p = SparsePoly::zero(nvars);
    for e in compositions(k, nvars, true) {
        p.add_term(e.into_iter().map(|x| x * a).collect(), BigInt::one());
    }
    p
}

/// `ψ_α ∘ h_k = Π_i h_k(x^{α_i})`, or the `e_k` analogue for [`Inner::Wedge`].
pub fn psi_alpha_inner(alpha: &Partition, k: u32, nvars: usize, inner: Inner) -> SparsePoly {
    let mut factors: BTreeMap<u64, SparsePoly> = BTreeMap::new();
    let mut out = SparsePoly::one(nvars);
    for &a in alpha.parts() {
        let f = factors.entry(a).or_insert_with(|| match inner {
            Inner::Sym => complete_h(k, nvars, a as u32),
            Inner::Wedge => elementary_e(k, nvars, a as u32),
        });
        out = &out * f;
    }
    out
}

/// Power sum `ψ_n = Σ x_i^n`.
pub fn power_sum(n: u32, nvars: usize) -> SparsePoly {
    let mut p = SparsePoly::zero(nvars);
    for i in 0..nvars {
        let mut e = vec![0; nvars];
        e[i] = n;
        p.add_term(e, BigInt::one());
    }
    p
}

/// `ψ_ρ = Π_i ψ_{ρ_i}`.
pub fn power_sum_product(rho: &Partition, nvars: usize) -> SparsePoly {
    rho.parts()
        .iter()
        .fold(SparsePoly::one(nvars), |acc, &r| &acc * &power_sum(r as u32, nvars))
}

/// `Δ(x) = Π_{i<j} (x_i − x_j)`.
pub fn vandermonde(nvars: usize) -> SparsePoly {
    let mut out = SparsePoly::one(nvars);
    for i in 0..nvars {
        for j in i + 1..nvars {
            let diff = &SparsePoly::var(nvars, i) + &SparsePoly::var(nvars, j).scale(&-BigInt::one());
            out = &out * &diff;
        }
    }
    out
}

/// Coefficient of `x^{λ+δ}` in `Δ(x)·P`, with `δ = (n−1, …, 1, 0)`.
///
/// For symmetric `P` this is the multiplicity of the Schur polynomial `s_λ`
/// in `P`. `Δ = Σ_σ sgn(σ) x^{σ(δ)}` is applied term by term, so the product
/// is never materialised.
pub fn schur_coefficient(poly: &SparsePoly, lambda: &Partition) -> Result<BigInt> {
    let n = poly.nvars();
    let parts = lambda.padded(n).ok_or_else(|| {
        Error::Argument(format!(
            "partition ({lambda}) has {} parts but the polynomial has {n} variables",
            lambda.len()
        ))
    })?;
    let mut total = BigInt::zero();
    let mut exps = vec![0u32; n];
    'perm: for perm in permutations_signed(n) {
        // Δ contributes x_i^{σ(i) − 1}, so P must supply λ_i + (n − 1 − i) − (σ(i) − 1).
        for i in 0..n {
            let e = parts[i] as i64 + (n - 1 - i) as i64 - (perm.images[i] as i64 - 1);
            if e < 0 {
                continue 'perm;
            }
            exps[i] = e as u32;
        }
        let c = poly.coefficient(&exps);
        if perm.sign > 0 {
            total += c;
        } else {
            total -= c;
        }
    }
    // Δ above is Π_{i<j}(x_j − x_i) under this indexing; fix the orientation.
    if (n * n.saturating_sub(1) / 2) % 2 == 1 {
        total = -total;
    }
    Ok(total)
}

/// Dimension of `S^λ` on an `n`-dimensional space (hook-content formula).
pub fn schur_dim(lambda: &Partition, n: u64) -> BigUint {
    if lambda.len() as u64 > n {
        return BigUint::zero();
    }
    let conj = lambda.conjugate();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for (i, &row) in lambda.parts().iter().enumerate() {
        for j in 0..row as usize {
            // content j − i, hook arm + leg + 1
            let content = n as i64 + j as i64 - i as i64;
            num *= BigUint::from(content as u64);
            let hook = (row as usize - j - 1) + (conj.part(j) as usize - i - 1) + 1;
            den *= BigUint::from(hook as u64);
        }
    }
    num / den
}

/// The full decomposition of `S^μ(S^k W)` (or `S^μ(Λ^k W)`) restricted to
/// `λ` with at most `nvars` rows, by brute-force symmetric-polynomial
/// expansion.
pub fn oracle_plethysm(
    mu: &Partition,
    k: u32,
    nvars: usize,
    inner: Inner,
) -> Result<BTreeMap<Partition, BigUint>> {
    let character = oracle_character(mu, k, nvars, inner)?;
    let d = mu.weight();
    let mut out = BTreeMap::new();
    for lambda in partitions_with_max_len(d * k as u64, nvars) {
        let m = schur_coefficient(&character, &lambda)?;
        match m.sign() {
            Sign::NoSign => {}
            Sign::Plus => {
                out.insert(lambda, m.magnitude().clone());
            }
            Sign::Minus => {
                return Err(Error::Inconsistency(format!(
                    "negative oracle multiplicity {m} for ({lambda})"
                )))
            }
        }
    }
    Ok(out)
}

/// The character `Σ_α χ_μ(α) (D_α/d!) ψ_α∘h_k` as an integer polynomial.
pub fn oracle_character(mu: &Partition, k: u32, nvars: usize, inner: Inner) -> Result<SparsePoly> {
    let d = mu.weight();
    let mut acc = SparsePoly::zero(nvars);
    for alpha in partitions_of(d) {
        let chi = characters::character_value(mu, &alpha)?;
        if chi.is_zero() {
            continue;
        }
        let weight = BigInt::from(chi) * BigInt::from(cycle_stats(&alpha).class_size);
        acc = &acc + &psi_alpha_inner(&alpha, k, nvars, inner).scale(&weight);
    }
    acc.div_exact(&BigInt::from(factorial(d))).ok_or_else(|| {
        Error::Inconsistency(format!(
            "character of S^({mu})(inner^{k}) is not divisible by {d}!"
        ))
    })
}

/// `binomial(n + k − 1, k)`, the dimension of `S^k` of an `n`-space.
pub fn sym_power_dim(n: u64, k: u64) -> BigUint {
    if n == 0 {
        return if k == 0 { BigUint::one() } else { BigUint::zero() };
    }
    binomial(n + k - 1, k)
}
