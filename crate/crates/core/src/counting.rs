//! Lattice-point counters.
//!
//! - `Q_α`: the number of `(α, λ)`-matrices, i.e. `a × n` matrices over
//!   an entry domain whose rows sum to `k` and whose `α`-weighted columns
//!   sum to prescribed values. Two independent implementations:
//!   [`count_matrices`] (pruned enumeration) and [`count_matrices_dp`]
//!   (dynamic programming over column totals).
//! - `#P^λ_{k,d}`: integer points of the Pieri-chain polytope, counted by
//!   [`pieri_chain_count`]; [`pieri_polytope_dim`] computes the dimension
//!   of its affine hull.
//!
//! Counters are total: infeasible queries (negative column sums, weight
//! mismatch) count zero, since the master formula evaluates them at
//! shifted arguments outside the cone.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, LpOutcome};
use crate::partition::{BigRat, Partition};

/// Admissible matrix entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EntryDomain {
    /// Nonnegative integers.
    Integer,
    /// `{0, 1}`.
    Binary,
}

/// One `Q_α` evaluation: count matrices with `alpha.len()` rows and
/// `colsums.len()` columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountQuery {
    pub alpha: Partition,
    pub k: u64,
    pub colsums: Vec<i64>,
    pub domain: EntryDomain,
}

impl CountQuery {
    pub fn new(alpha: Partition, k: u64, colsums: Vec<i64>, domain: EntryDomain) -> Self {
        Self {
            alpha,
            k,
            colsums,
            domain,
        }
    }

    /// Cheap necessary conditions for a nonzero count.
    fn feasible(&self) -> bool {
        feasible(self.alpha.parts(), self.k, &self.colsums, self.domain)
    }
}

fn feasible(weights: &[u64], k: u64, colsums: &[i64], domain: EntryDomain) -> bool {
    if colsums.iter().any(|&c| c < 0) {
        return false;
    }
    let total: i128 = colsums.iter().map(|&c| c as i128).sum();
    let expected = k as i128 * weights.iter().map(|&w| w as i128).sum::<i128>();
    if total != expected {
        return false;
    }
    if !weights.is_empty() {
        if colsums.is_empty() && k > 0 {
            return false;
        }
        if domain == EntryDomain::Binary && k as usize > colsums.len() {
            return false;
        }
    }
    true
}

/// `Q_α` by depth-first enumeration of rows, pruning on the gcd of the
/// remaining row weights.
pub fn count_matrices(q: &CountQuery) -> BigUint {
    if !q.feasible() {
        return BigUint::zero();
    }
    let weights = q.alpha.parts();
    let mut suffix_gcd = vec![0u64; weights.len() + 1];
    for i in (0..weights.len()).rev() {
        suffix_gcd[i] = suffix_gcd[i + 1].gcd(&weights[i]);
    }
    let mut remaining = q.colsums.clone();
    let mut count = BigUint::zero();
    enumerate_rows(weights, &suffix_gcd, q.k, q.domain, 0, &mut remaining, &mut count);
    count
}

fn enumerate_rows(
    weights: &[u64],
    suffix_gcd: &[u64],
    k: u64,
    domain: EntryDomain,
    row: usize,
    remaining: &mut [i64],
    count: &mut BigUint,
) {
    if row == weights.len() {
        if remaining.iter().all(|&r| r == 0) {
            *count += 1u32;
        }
        return;
    }
    let g = suffix_gcd[row] as i64;
    if remaining.iter().any(|&r| r % g != 0) {
        return;
    }
    if remaining.is_empty() {
        // Zero columns: feasibility forced k = 0, so every row is empty.
        enumerate_rows(weights, suffix_gcd, k, domain, row + 1, remaining, count);
        return;
    }
    let w = weights[row] as i64;
    fill_row(weights, suffix_gcd, k, domain, row, w, 0, k as i64, remaining, count);
}

#[allow(clippy::too_many_arguments)]
fn fill_row(
    weights: &[u64],
    suffix_gcd: &[u64],
    k: u64,
    domain: EntryDomain,
    row: usize,
    w: i64,
    col: usize,
    budget: i64,
    remaining: &mut [i64],
    count: &mut BigUint,
) {
    if col + 1 == remaining.len() {
        let cap = match domain {
            EntryDomain::Integer => budget,
            EntryDomain::Binary => 1,
        };
        if budget <= cap && w * budget <= remaining[col] {
            remaining[col] -= w * budget;
            enumerate_rows(weights, suffix_gcd, k, domain, row + 1, remaining, count);
            remaining[col] += w * budget;
        }
        return;
    }
    let cap = match domain {
        EntryDomain::Integer => budget,
        EntryDomain::Binary => budget.min(1),
    };
    let mut m = 0;
    while m <= cap && w * m <= remaining[col] {
        remaining[col] -= w * m;
        fill_row(weights, suffix_gcd, k, domain, row, w, col + 1, budget - m, remaining, count);
        remaining[col] += w * m;
        m += 1;
    }
}

/// `Q_α` by dynamic programming; same contract as [`count_matrices`].
pub fn count_matrices_dp(q: &CountQuery) -> BigUint {
    count_matrices_batch(&q.alpha, q.k, std::slice::from_ref(&q.colsums), q.domain)
        .pop()
        .unwrap()
}

/// `Q_α(k, c)` for several column-sum vectors `c` of equal length, sharing
/// one dynamic program.
///
/// One column (the largest) is eliminated: its entry in every row is `k`
/// minus the row's other entries, and its weighted sum is then forced by
/// the total. The program runs over a dense box of partial weighted sums of
/// the remaining columns, adding rows in order of decreasing weight. When a
/// row's budget `k` cannot bind inside the box, adding a row of weight `w`
/// multiplies the generating function by `Π_j 1/(1 − y_j^w)`, which is a
/// strided prefix sum along each axis. Otherwise rows are enumerated.
pub fn count_matrices_batch(
    alpha: &Partition,
    k: u64,
    targets: &[Vec<i64>],
    domain: EntryDomain,
) -> Vec<BigUint> {
    let weights = alpha.parts();
    let live: Vec<usize> = (0..targets.len())
        .filter(|&t| feasible(weights, k, &targets[t], domain))
        .collect();
    let mut out = vec![BigUint::zero(); targets.len()];
    if live.is_empty() {
        return out;
    }
    let ncols = targets[live[0]].len();
    if weights.is_empty() || ncols == 0 {
        // Feasibility already pinned the only matrix (empty, or all-k rows
        // in a lone column).
        for &t in &live {
            out[t] = BigUint::one();
        }
        return out;
    }
    let live_targets: Vec<&[i64]> = live.iter().map(|&t| targets[t].as_slice()).collect();
    let dp = BoxDp::new(weights, k, &live_targets, domain);
    let counts = match dp.run::<u128>() {
        Some(c) => c,
        None => dp.run::<BigUint>().expect("big integers do not overflow"),
    };
    for (&t, c) in live.iter().zip(counts) {
        out[t] = c;
    }
    out
}

/// Accumulator cell for [`BoxDp`]; `u128` first, big integers on overflow.
trait Cell: Clone {
    fn empty() -> Self;
    fn unit() -> Self;
    fn is_empty(&self) -> bool;
    /// `self += other`; `false` on overflow.
    fn add_from(&mut self, other: &Self) -> bool;
    fn into_big(self) -> BigUint;
}

impl Cell for u128 {
    fn empty() -> Self {
        0
    }
    fn unit() -> Self {
        1
    }
    fn is_empty(&self) -> bool {
        *self == 0
    }
    fn add_from(&mut self, other: &Self) -> bool {
        match self.checked_add(*other) {
            Some(v) => {
                *self = v;
                true
            }
            None => false,
        }
    }
    fn into_big(self) -> BigUint {
        BigUint::from(self)
    }
}

impl Cell for BigUint {
    fn empty() -> Self {
        BigUint::zero()
    }
    fn unit() -> Self {
        BigUint::one()
    }
    fn is_empty(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_from(&mut self, other: &Self) -> bool {
        *self += other;
        true
    }
    fn into_big(self) -> BigUint {
        self
    }
}

struct BoxDp<'a> {
    weights: Vec<u64>,
    k: u64,
    domain: EntryDomain,
    targets: &'a [&'a [i64]],
    /// Columns kept in the box (all but the eliminated one).
    axes: Vec<usize>,
    extents: Vec<usize>,
    strides: Vec<usize>,
    size: usize,
}

impl<'a> BoxDp<'a> {
    fn new(weights: &[u64], k: u64, targets: &'a [&'a [i64]], domain: EntryDomain) -> Self {
        let ncols = targets[0].len();
        let maxima: Vec<i64> = (0..ncols)
            .map(|j| targets.iter().map(|t| t[j]).max().unwrap())
            .collect();
        let slack = (0..ncols).max_by_key(|&j| (maxima[j], std::cmp::Reverse(j))).unwrap();
        let axes: Vec<usize> = (0..ncols).filter(|&j| j != slack).collect();
        let extents: Vec<usize> = axes.iter().map(|&j| maxima[j] as usize + 1).collect();
        let mut strides = vec![1usize; axes.len()];
        for i in (0..axes.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * extents[i + 1];
        }
        let size = extents.iter().product();
        let mut weights = weights.to_vec();
        weights.sort_unstable_by(|a, b| b.cmp(a));
        Self {
            weights,
            k,
            domain,
            targets,
            axes,
            extents,
            strides,
            size,
        }
    }

    fn index_of(&self, target: &[i64]) -> usize {
        self.axes
            .iter()
            .zip(&self.strides)
            .map(|(&j, &s)| target[j] as usize * s)
            .sum()
    }

    fn coords(&self, mut idx: usize) -> Vec<usize> {
        self.strides
            .iter()
            .map(|&s| {
                let c = idx / s;
                idx %= s;
                c
            })
            .collect()
    }

    fn run<C: Cell>(&self) -> Option<Vec<BigUint>> {
        let mut cells = vec![C::empty(); self.size];
        cells[0] = C::unit();
        let total_rows = self.weights.len();
        for (row, &w) in self.weights.iter().enumerate() {
            let budget_slack = self
                .extents
                .iter()
                .map(|&e| ((e - 1) as u64) / w)
                .sum::<u64>()
                <= self.k;
            cells = if self.domain == EntryDomain::Integer && budget_slack {
                self.prefix_step(cells, w as usize)?
            } else {
                self.enumerate_step(cells, w as usize)?
            };
            if self.targets.len() == 1 {
                self.prune(&mut cells, &self.weights[row + 1..total_rows]);
            }
        }
        Some(
            self.targets
                .iter()
                .map(|t| cells[self.index_of(t)].clone().into_big())
                .collect(),
        )
    }

    /// Multiplies by `Π_j 1/(1 − y_j^w)` in place.
    fn prefix_step<C: Cell>(&self, mut cells: Vec<C>, w: usize) -> Option<Vec<C>> {
        for (axis, (&extent, &stride)) in self.extents.iter().zip(&self.strides).enumerate() {
            if extent <= w {
                continue;
            }
            let step = w * stride;
            for idx in 0..self.size {
                let coord = (idx / stride) % extent;
                if coord >= w {
                    let (lo, hi) = cells.split_at_mut(idx);
                    let src = &lo[idx - step];
                    if !src.is_empty() && !hi[0].add_from(src) {
                        return None;
                    }
                }
            }
            let _ = axis;
        }
        Some(cells)
    }

    /// Explicit row enumeration honouring the budget and the entry domain.
    fn enumerate_step<C: Cell>(&self, cells: Vec<C>, w: usize) -> Option<Vec<C>> {
        let mut next = vec![C::empty(); self.size];
        let k = self.k as usize;
        let naxes = self.axes.len();
        let mut m = vec![0usize; naxes];
        for (idx, value) in cells.iter().enumerate() {
            if value.is_empty() {
                continue;
            }
            let base = self.coords(idx);
            if !self.spread(&base, w, 0, 0, k, &mut m, value, &mut next) {
                return None;
            }
        }
        Some(next)
    }

    #[allow(clippy::too_many_arguments)]
    fn spread<C: Cell>(
        &self,
        base: &[usize],
        w: usize,
        axis: usize,
        used: usize,
        k: usize,
        m: &mut Vec<usize>,
        value: &C,
        next: &mut [C],
    ) -> bool {
        if axis == m.len() {
            let ok = match self.domain {
                EntryDomain::Integer => used <= k,
                // The eliminated column's entry k − used must be 0 or 1.
                EntryDomain::Binary => used <= k && k - used <= 1,
            };
            if !ok {
                return true;
            }
            let idx: usize = (0..m.len())
                .map(|a| (base[a] + w * m[a]) * self.strides[a])
                .sum();
            return next[idx].add_from(value);
        }
        let cap = match self.domain {
            EntryDomain::Integer => k - used,
            EntryDomain::Binary => (k - used).min(1),
        };
        let mut x = 0;
        while x <= cap && base[axis] + w * x < self.extents[axis] {
            m[axis] = x;
            if !self.spread(base, w, axis + 1, used + x, k, m, value, next) {
                return false;
            }
            x += 1;
        }
        m[axis] = 0;
        true
    }

    /// Zeroes states the remaining rows cannot complete: every remaining
    /// column total must be divisible by the gcd of the remaining weights,
    /// and their sum cannot exceed `k` times the remaining weight.
    fn prune<C: Cell>(&self, cells: &mut [C], rest: &[u64]) {
        let target = self.targets[0];
        let g = rest.iter().fold(0u64, |acc, &w| acc.gcd(&w));
        let capacity = self.k as i64 * rest.iter().sum::<u64>() as i64;
        for (idx, cell) in cells.iter_mut().enumerate() {
            if cell.is_empty() {
                continue;
            }
            let coords = self.coords(idx);
            let mut need_sum = 0i64;
            let mut dead = false;
            for (a, &j) in self.axes.iter().enumerate() {
                let need = target[j] - coords[a] as i64;
                if need < 0 || (g == 0 && need != 0) || (g > 0 && need % g as i64 != 0) {
                    dead = true;
                    break;
                }
                need_sum += need;
            }
            if dead || need_sum > capacity {
                *cell = C::empty();
            }
        }
    }
}

/// A Pieri-chain counting instance: `d` horizontal strips of `k` boxes each,
/// building `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieriChain {
    pub k: u64,
    pub d: usize,
    pub target: Partition,
}

impl PieriChain {
    pub fn new(k: u64, d: usize, target: Partition) -> Result<Self> {
        let expected = k * d as u64;
        if target.weight() != expected {
            return Err(Error::WeightMismatch {
                actual: target.weight(),
                expected,
            });
        }
        Ok(Self { k, d, target })
    }
}

/// `#P^λ_{k,d}`: the number of chains `∅ = ν^0 ⊂ ν^1 ⊂ … ⊂ ν^d = λ` where
/// each step adds a horizontal strip of `k` boxes. Equals the multiplicity
/// of `S^λ` in `(S^k W)^{⊗d}`.
pub fn pieri_chain_count(p: &PieriChain) -> BigUint {
    let lambda = p.target.parts();
    if lambda.len() > p.d {
        return BigUint::zero();
    }
    let mut level: BTreeMap<Vec<u64>, BigUint> = BTreeMap::new();
    level.insert(vec![0; lambda.len()], BigUint::one());
    for _ in 0..p.d {
        let mut next: BTreeMap<Vec<u64>, BigUint> = BTreeMap::new();
        for (shape, count) in &level {
            let mut grown = shape.clone();
            add_strips(shape, lambda, 0, p.k, &mut grown, &mut |nu| {
                *next.entry(nu.to_vec()).or_default() += count;
            });
        }
        level = next;
    }
    level.remove(lambda).unwrap_or_default()
}

/// Visits every `ν ⊆ λ` obtained from `shape` by a horizontal strip of
/// exactly `boxes` boxes.
fn add_strips(
    shape: &[u64],
    lambda: &[u64],
    row: usize,
    boxes: u64,
    grown: &mut Vec<u64>,
    visit: &mut impl FnMut(&[u64]),
) {
    if row == shape.len() {
        if boxes == 0 {
            visit(grown);
        }
        return;
    }
    let cap = if row == 0 {
        lambda[0]
    } else {
        lambda[row].min(shape[row - 1])
    };
    let room = cap.saturating_sub(shape[row]);
    // Rows below can absorb at most their own room.
    let below: u64 = (row + 1..shape.len())
        .map(|r| lambda[r].min(shape[r - 1]).saturating_sub(shape[r]))
        .sum();
    let lo = boxes.saturating_sub(below);
    for x in lo..=room.min(boxes) {
        grown[row] = shape[row] + x;
        add_strips(shape, lambda, row + 1, boxes - x, grown, visit);
    }
    grown[row] = shape[row];
}

/// Dimension of a rational polytope, or `Empty`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolytopeDim {
    Empty,
    Dim(usize),
}

/// Dimension of the affine hull of `P^λ_{k,d}`.
///
/// Coordinates are the Pieri increments `x_i^j` (boxes added to row `i` at
/// step `j`, for steps `1..d−1` and rows `1..j`); step 0 puts `k` boxes in
/// row 1 and the increment of row `j+1` at step `j` is `k` minus the rest.
/// Every inequality that is tight on the whole polytope (found by exact LP)
/// joins the row-sum equations, and the dimension is the number of
/// coordinates minus the rank of that system.
pub fn pieri_polytope_dim(p: &PieriChain) -> PolytopeDim {
    let d = p.d;
    if d == 0 {
        return if p.target.is_empty() {
            PolytopeDim::Dim(0)
        } else {
            PolytopeDim::Empty
        };
    }
    let Some(lambda) = p.target.padded(d) else {
        return PolytopeDim::Empty;
    };
    let k = BigRat::from_integer((p.k as i64).into());
    // Free coordinates x_i^j, 1 ≤ j ≤ d−1, 1 ≤ i ≤ j.
    let mut var = BTreeMap::new();
    for j in 1..d {
        for i in 1..=j {
            let n = var.len();
            var.insert((i, j), n);
        }
    }
    let nvars = var.len();
    // Affine form (coefficients, constant) of every x_i^j, including derived ones.
    let zero_form = || (vec![BigRat::zero(); nvars], BigRat::zero());
    let form = |i: usize, j: usize| -> (Vec<BigRat>, BigRat) {
        let mut f = zero_form();
        if j == 0 {
            if i == 1 {
                f.1 = k.clone();
            }
        } else if i <= j {
            f.0[var[&(i, j)]] = BigRat::one();
        } else if i == j + 1 {
            f.1 = k.clone();
            for r in 1..=j {
                f.0[var[&(r, j)]] = -BigRat::one();
            }
        }
        f
    };
    let add = |a: &mut (Vec<BigRat>, BigRat), b: &(Vec<BigRat>, BigRat), sign: i64| {
        let s = BigRat::from_integer(sign.into());
        for (x, y) in a.0.iter_mut().zip(&b.0) {
            *x += &s * y;
        }
        a.1 += &s * &b.1;
    };

    // Inequalities as `form ≥ 0`.
    let mut geq: Vec<(Vec<BigRat>, BigRat)> = Vec::new();
    for j in 1..d {
        geq.push(form(j + 1, j));
    }
    for j in 1..d {
        for i in 2..=j + 1 {
            // Σ_{l≤j−1} x_{i−1}^l − Σ_{l≤j} x_i^l ≥ 0
            let mut f = zero_form();
            for l in 0..j {
                add(&mut f, &form(i - 1, l), 1);
            }
            for l in 0..=j {
                add(&mut f, &form(i, l), -1);
            }
            geq.push(f);
        }
    }
    // Row sums.
    let mut eqs: Vec<(Vec<BigRat>, BigRat)> = Vec::new();
    for (i0, &target) in lambda.iter().enumerate() {
        let i = i0 + 1;
        let mut f = zero_form();
        for j in 0..d {
            add(&mut f, &form(i, j), 1);
        }
        f.1 -= BigRat::from_integer((target as i64).into());
        eqs.push(f);
    }

    // LP form: a·x ≤ b from `c·x + c0 ≥ 0`  ⇔  −c·x ≤ c0; equalities c·x = −c0.
    let le: Vec<Vec<BigRat>> = geq.iter().map(|(c, _)| c.iter().map(|x| -x).collect()).collect();
    let le_rhs: Vec<BigRat> = geq.iter().map(|(_, c0)| c0.clone()).collect();
    let eq: Vec<Vec<BigRat>> = eqs.iter().map(|(c, _)| c.clone()).collect();
    let eq_rhs: Vec<BigRat> = eqs.iter().map(|(_, c0)| -c0).collect();

    let mut implicit: Vec<Vec<BigRat>> = eq.clone();
    let zero_obj = vec![BigRat::zero(); nvars];
    if nvars == 0 {
        let ok = geq.iter().all(|(_, c0)| *c0 >= BigRat::zero())
            && eqs.iter().all(|(_, c0)| c0.is_zero());
        return if ok { PolytopeDim::Dim(0) } else { PolytopeDim::Empty };
    }
    if linalg::maximize(&zero_obj, &le, &le_rhs, &eq, &eq_rhs) == LpOutcome::Infeasible {
        return PolytopeDim::Empty;
    }
    // Slack of each `form ≥ 0`: the general inequalities and the bounds x ≥ 0.
    let mut candidates: Vec<(Vec<BigRat>, BigRat)> = geq.clone();
    for v in 0..nvars {
        let mut unit = vec![BigRat::zero(); nvars];
        unit[v] = BigRat::one();
        candidates.push((unit, BigRat::zero()));
    }
    for (c, c0) in candidates {
        match linalg::maximize(&c, &le, &le_rhs, &eq, &eq_rhs) {
            LpOutcome::Optimal(v) => {
                if (v + c0).is_zero() {
                    implicit.push(c);
                }
            }
            LpOutcome::Infeasible => return PolytopeDim::Empty,
            LpOutcome::Unbounded => unreachable!("Pieri polytopes are bounded"),
        }
    }
    PolytopeDim::Dim(nvars - linalg::rank(implicit))
}

/// The closed-form dimension `(l−1)(d − l/2 − 1) − Σ_j C(a_j, 2)` where `l`
/// is the number of parts of `λ` and `a_j` the multiplicities of its
/// distinct parts. It agrees with [`pieri_polytope_dim`] for every `λ` with
/// at most `d` rows except the rectangle `(k^d)`, whose polytope is a point
/// while the formula gives `−(d−1)`.
pub fn pieri_dim_formula(d: usize, lambda: &Partition) -> i64 {
    let l = lambda.len() as i64;
    let d = d as i64;
    let repeats: i64 = lambda
        .multiplicities()
        .values()
        .map(|&a| (a as i64) * (a as i64 - 1) / 2)
        .sum();
    // (l−1)(d − l/2 − 1) = (l−1)(2d − l − 2)/2, always an integer.
    (l - 1) * (2 * d - l - 2) / 2 - repeats
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u64]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn q(alpha: &[u64], k: u64, colsums: &[i64], domain: EntryDomain) -> CountQuery {
        CountQuery::new(p(alpha), k, colsums.to_vec(), domain)
    }

    fn both(query: &CountQuery) -> BigUint {
        let a = count_matrices(query);
        let b = count_matrices_dp(query);
        assert_eq!(a, b, "{query:?}");
        a
    }

    #[test]
    fn matrix_count_examples() {
        use EntryDomain::*;
        assert_eq!(both(&q(&[3], 2, &[3, 3], Integer)), BigUint::one());
        assert_eq!(both(&q(&[3], 2, &[4, 2], Integer)), BigUint::zero());
        assert_eq!(both(&q(&[1, 1], 1, &[1, 1], Integer)), BigUint::from(2u32));
        assert_eq!(both(&q(&[1, 1], 1, &[1, 1], Binary)), BigUint::from(2u32));
        assert_eq!(both(&q(&[5], 7, &[35, 0, 0, 0], Integer)), BigUint::one());
        assert_eq!(both(&q(&[2, 1], 3, &[-1, 10], Integer)), BigUint::zero());
        assert_eq!(both(&q(&[2, 1], 3, &[4, 4], Integer)), BigUint::zero());
    }

    #[test]
    fn degenerate_shapes() {
        use EntryDomain::*;
        assert_eq!(both(&q(&[], 3, &[0, 0], Integer)), BigUint::one());
        assert_eq!(both(&q(&[], 3, &[1, 0], Integer)), BigUint::zero());
        assert_eq!(both(&q(&[2], 0, &[], Integer)), BigUint::one());
        assert_eq!(both(&q(&[2], 1, &[], Integer)), BigUint::zero());
        assert_eq!(both(&q(&[2, 1], 4, &[12], Integer)), BigUint::one());
        assert_eq!(both(&q(&[1], 2, &[2], Binary)), BigUint::zero());
        assert_eq!(both(&q(&[1, 1], 3, &[2, 2, 2], Binary)), BigUint::one());
    }

    #[test]
    fn reduced_large_instance_agrees() {
        let query = q(&[1, 1, 1, 1, 1], 6, &[29, 1, 0, 0], EntryDomain::Integer);
        // Row entries in the last two columns are forced to zero and the
        // single box of column 2 goes to one of the five rows.
        assert_eq!(both(&query), BigUint::from(5u32));
    }

    #[test]
    fn large_k_uses_prefix_path() {
        let query = q(&[2, 2, 1], 4000, &[19_990, 8, 2], EntryDomain::Integer);
        let dp = count_matrices_dp(&query);
        assert_eq!(dp, count_matrices(&query));
        assert!(!dp.is_zero());
    }

    #[test]
    fn batch_matches_single_queries() {
        let alpha = p(&[2, 1, 1]);
        let targets = vec![vec![6, 4, 2], vec![5, 5, 2], vec![-1, 9, 4], vec![12, 0, 0], vec![3, 3, 3]];
        let batch = count_matrices_batch(&alpha, 3, &targets, EntryDomain::Integer);
        for (t, b) in targets.iter().zip(&batch) {
            let single = count_matrices(&CountQuery::new(alpha.clone(), 3, t.clone(), EntryDomain::Integer));
            assert_eq!(&single, b, "{t:?}");
        }
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        // 12 unit rows, 2 columns: C(2000+1,...) style counts overflow u128
        // only for much larger instances, so force it through many rows.
        let alpha = Partition::column(40);
        let query = CountQuery::new(alpha, 100, vec![2000, 2000], EntryDomain::Integer);
        let dp = count_matrices_dp(&query);
        assert!(dp.bits() > 128);
        // Coefficient of y^2000 in (Σ_{m≤100} y^m)^40, via a direct convolution.
        let mut poly = vec![BigUint::one()];
        for _ in 0..40 {
            let mut next = vec![BigUint::zero(); poly.len() + 100];
            for (i, c) in poly.iter().enumerate() {
                for m in 0..=100 {
                    next[i + m] += c;
                }
            }
            poly = next;
        }
        assert_eq!(dp, poly[2000]);
    }

    /// Direct enumeration of the coordinates x_i^j of the Pieri polytope.
    fn brute_force_polytope(k: i64, d: usize, lambda: &[u64]) -> u64 {
        let lam: Vec<i64> = (0..d).map(|i| lambda.get(i).copied().unwrap_or(0) as i64).collect();
        // rows[i] = current length of row i.
        fn go(step: usize, d: usize, k: i64, rows: &mut Vec<i64>, lam: &[i64]) -> u64 {
            if step == d {
                return (rows.as_slice() == lam) as u64;
            }
            let prev = rows.clone();
            let mut count = 0;
            let mut adds = vec![0i64; step + 1];
            fn assign(
                i: usize,
                left: i64,
                step: usize,
                d: usize,
                k: i64,
                adds: &mut Vec<i64>,
                prev: &[i64],
                rows: &mut Vec<i64>,
                lam: &[i64],
                count: &mut u64,
            ) {
                if i == step {
                    adds[i] = left;
                    for r in 0..=step {
                        rows[r] = prev[r] + adds[r];
                    }
                    // constraint (2): new row r ≤ old row r−1
                    let ok = (1..=step).all(|r| rows[r] <= prev[r - 1]);
                    if ok {
                        *count += go(step + 1, d, k, rows, lam);
                    }
                    rows.copy_from_slice(prev);
                    return;
                }
                for x in 0..=left {
                    adds[i] = x;
                    assign(i + 1, left - x, step, d, k, adds, prev, rows, lam, count);
                }
            }
            assign(0, k, step, d, k, &mut adds, &prev, rows, lam, &mut count);
            count
        }
        let mut rows = vec![0i64; d];
        go(0, d, k, &mut rows, &lam)
    }

    #[test]
    fn pieri_examples() {
        let c = |k, d, l: &[u64]| pieri_chain_count(&PieriChain::new(k, d, p(l)).unwrap());
        assert_eq!(c(2, 2, &[3, 1]), BigUint::one());
        assert_eq!(c(1, 3, &[1, 1, 1]), BigUint::one());
        // Chains (2)→(4)→(4,2), (2)→(3,1)→(4,2), (2)→(2,2)→(4,2).
        assert_eq!(c(2, 3, &[4, 2]), BigUint::from(3u32));
        assert_eq!(c(1, 3, &[2, 1]), BigUint::from(2u32));
        assert_eq!(c(3, 0, &[]), BigUint::one());
        assert!(PieriChain::new(2, 2, p(&[3])).is_err());
    }

    #[test]
    fn pieri_matches_polytope_enumeration() {
        for d in 1..=4usize {
            for k in 0..=4u64 {
                for lambda in crate::partition::partitions_with_max_len(k * d as u64, d) {
                    let chain = PieriChain::new(k, d, lambda.clone()).unwrap();
                    assert_eq!(
                        pieri_chain_count(&chain),
                        BigUint::from(brute_force_polytope(k as i64, d, lambda.parts())),
                        "k={k} d={d} λ=({lambda})"
                    );
                }
            }
        }
    }

    #[test]
    fn polytope_dim_examples() {
        let dim = |k, d, l: &[u64]| pieri_polytope_dim(&PieriChain::new(k, d, p(l)).unwrap());
        assert_eq!(dim(2, 2, &[3, 1]), PolytopeDim::Dim(0));
        assert_eq!(dim(2, 3, &[4, 2]), PolytopeDim::Dim(1));
        assert_eq!(pieri_dim_formula(3, &p(&[4, 2])), 1);
        assert_eq!(dim(3, 4, &[6, 3, 2, 1]), PolytopeDim::Dim(3));
        assert_eq!(pieri_dim_formula(4, &p(&[6, 3, 2, 1])), 3);
        assert_eq!(dim(1, 2, &[2]), PolytopeDim::Dim(0));
        // (1,1,1,1) is not reachable in two steps of two boxes.
        assert_eq!(dim(2, 2, &[1, 1, 1, 1]), PolytopeDim::Empty);
    }
}
