//! Fast self-check suites: character orthogonality, Thrall's two-row
//! decompositions, the formula against the brute-force oracle, and
//! nonnegativity.
//!
//! Every suite that touches multiplicities goes through an injected
//! evaluator, so a deliberately broken formula can be run through the same
//! suites.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::characters::CharacterTable;
use crate::error::Result;
use crate::partition::{factorial, partitions_of, partitions_with_max_len, BigRat, Partition};
use crate::plethysm::{evaluate_variant, FormulaVariant, Inner, PlethysmQuery};
use crate::symfunc::oracle_plethysm;

/// A multiplicity evaluator under test.
pub type Evaluator<'a> = dyn Fn(&PlethysmQuery) -> Result<BigRat> + Sync + 'a;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    /// Number of individual checks run.
    pub checked: usize,
    /// The first few failures, as readable lines.
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelftestReport {
    pub suites: Vec<SuiteResult>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }
}

pub const ORTHOGONALITY: &str = "character orthogonality";
pub const THRALL: &str = "thrall two-row decompositions";
pub const ORACLE: &str = "oracle equivalence";
pub const NONNEGATIVITY: &str = "nonnegativity";

const MAX_FAILURES: usize = 5;

struct Tally {
    name: &'static str,
    checked: usize,
    failures: Vec<String>,
    failed: bool,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checked: 0,
            failures: Vec::new(),
            failed: false,
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed = true;
            if self.failures.len() < MAX_FAILURES {
                self.failures.push(describe());
            }
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name,
            passed: !self.failed,
            checked: self.checked,
            failures: self.failures,
        }
    }
}

/// Runs every suite against the real formula.
pub fn selftest() -> SelftestReport {
    selftest_with(&|q| evaluate_variant(q, FormulaVariant::default()))
}

/// Runs every suite, with `eval` standing in for the multiplicity formula.
pub fn selftest_with(eval: &Evaluator) -> SelftestReport {
    SelftestReport {
        suites: vec![
            orthogonality(5),
            thrall(eval, 20),
            oracle(eval, 3, 4),
            nonnegativity(eval, 4, 3),
        ],
    }
}

/// `Σ_ρ D_ρ χ_μ(ρ) χ_ν(ρ) = d!·[μ = ν]` for every `d ≤ max_d`.
pub fn orthogonality(max_d: u64) -> SuiteResult {
    let mut t = Tally::new(ORTHOGONALITY);
    for d in 0..=max_d {
        let table = match CharacterTable::for_degree(d) {
            Ok(table) => table,
            Err(e) => {
                t.check(false, || format!("d = {d}: {e}"));
                continue;
            }
        };
        let d_fact = BigInt::from(factorial(d));
        for mu in &table.partitions {
            for nu in &table.partitions {
                let want = if mu == nu { d_fact.clone() } else { BigInt::zero() };
                let got = table.inner_product(mu, nu);
                t.check(got.as_ref() == Ok(&want), || {
                    format!("<({mu}), ({nu})> = {got:?}, expected {want}")
                });
            }
        }
    }
    t.finish()
}

/// `S^2(S^k)` is the sum of `S^λ` over two even parts, `Λ^2(S^k)` over two
/// odd parts, each once.
pub fn thrall(eval: &Evaluator, max_k: u64) -> SuiteResult {
    let mut t = Tally::new(THRALL);
    for k in 1..=max_k {
        for (mu, parity) in [(Partition::row(2), 0), (Partition::column(2), 1)] {
            for lambda in partitions_with_max_len(2 * k, 3) {
                let expected = lambda.len() <= 2
                    && lambda.part(0) % 2 == parity
                    && lambda.part(1) % 2 == parity;
                let want = BigRat::from_integer(BigInt::from(expected as u8));
                let got = PlethysmQuery::sym(mu.clone(), k, lambda.clone()).and_then(|q| eval(&q));
                t.check(got.as_ref() == Ok(&want), || {
                    format!("({lambda}) in S^({mu})(S^{k}): {got:?}, expected {want}")
                });
            }
        }
    }
    t.finish()
}

/// The evaluator against the symmetric-polynomial oracle, for `μ ⊢ d`,
/// `d ≤ max_d`, `k ≤ max_k`, every `λ`.
pub fn oracle(eval: &Evaluator, max_d: u64, max_k: u64) -> SuiteResult {
    let mut t = Tally::new(ORACLE);
    for d in 1..=max_d {
        for mu in partitions_of(d) {
            for k in 1..=max_k {
                let truth = match oracle_plethysm(&mu, k as u32, d as usize, Inner::Sym) {
                    Ok(m) => m,
                    Err(e) => {
                        t.check(false, || format!("oracle for S^({mu})(S^{k}): {e}"));
                        continue;
                    }
                };
                for lambda in partitions_with_max_len(d * k, d as usize) {
                    let want = BigRat::from_integer(truth.get(&lambda).cloned().unwrap_or_default().into());
                    let got = PlethysmQuery::sym(mu.clone(), k, lambda.clone()).and_then(|q| eval(&q));
                    t.check(got.as_ref() == Ok(&want), || {
                        format!("({lambda}) in S^({mu})(S^{k}): {got:?}, oracle {want}")
                    });
                }
            }
        }
    }
    t.finish()
}

/// Every value is a nonnegative integer, for `μ ⊢ d ≤ max_d`, `k ≤ max_k`.
pub fn nonnegativity(eval: &Evaluator, max_d: u64, max_k: u64) -> SuiteResult {
    let mut t = Tally::new(NONNEGATIVITY);
    for d in 1..=max_d {
        for mu in partitions_of(d) {
            for k in 0..=max_k {
                for lambda in partitions_with_max_len(d * k, d as usize) {
                    let got = PlethysmQuery::sym(mu.clone(), k, lambda.clone()).and_then(|q| eval(&q));
                    let ok = matches!(&got, Ok(v) if v.is_integer() && !v.is_negative());
                    t.check(ok, || format!("({lambda}) in S^({mu})(S^{k}) = {got:?}"));
                }
            }
        }
    }
    t.finish()
}
