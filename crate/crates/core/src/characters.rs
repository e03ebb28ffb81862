//! Irreducible characters of the symmetric group.
//!
//! [`character_value`] reads `χ_μ(ρ)` off the Frobenius formula as the
//! coefficient of `x^{μ+δ}` in `Δ(x)·ψ_ρ(x)`, in `length(μ)` variables.
//! [`character_value_mn`] is an independent Murnaghan–Nakayama evaluation
//! used as a cross-check.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::partition::{cycle_stats, factorial, partitions_of, Partition};
use crate::symfunc::{power_sum_product, schur_coefficient};

fn check_weights(mu: &Partition, rho: &Partition) -> Result<()> {
    if mu.weight() != rho.weight() {
        return Err(Error::Argument(format!(
            "character arguments must have equal weight: |mu|={}, |rho|={}",
            mu.weight(),
            rho.weight()
        )));
    }
    Ok(())
}

/// `χ_μ(ρ)` via the Frobenius formula.
pub fn character_value(mu: &Partition, rho: &Partition) -> Result<i64> {
    check_weights(mu, rho)?;
    let n = mu.len();
    if n == 0 {
        return Ok(1);
    }
    let value = schur_coefficient(&power_sum_product(rho, n), mu)?;
    value
        .to_i64()
        .ok_or_else(|| Error::Inconsistency(format!("character value {value} out of range")))
}

/// `χ_μ(ρ)` via the Murnaghan–Nakayama rule on beta-sets.
pub fn character_value_mn(mu: &Partition, rho: &Partition) -> Result<i64> {
    check_weights(mu, rho)?;
    let n = mu.len();
    let beta: Vec<i64> = (0..n).map(|i| mu.part(i) as i64 + (n - 1 - i) as i64).collect();
    Ok(mn_recurse(beta, rho.parts()))
}

fn mn_recurse(beta: Vec<i64>, rho: &[u64]) -> i64 {
    let Some((&r, rest)) = rho.split_first() else {
        return 1;
    };
    let r = r as i64;
    let mut total = 0;
    for (i, &b) in beta.iter().enumerate() {
        let target = b - r;
        if target < 0 || beta.contains(&target) {
            continue;
        }
        // Removing a rim hook of length r moves bead b to b − r; the leg
        // length is the number of beads jumped over.
        let leg = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut next = beta.clone();
        next[i] = target;
        let sign = if leg % 2 == 0 { 1 } else { -1 };
        total += sign * mn_recurse(next, rest);
    }
    total
}

/// Dimension of the irreducible representation of `S_d` indexed by `μ`
/// (hook length formula).
pub fn dimension(mu: &Partition) -> BigUint {
    let conj = mu.conjugate();
    let mut hooks = BigUint::from(1u32);
    for (i, &row) in mu.parts().iter().enumerate() {
        for j in 0..row as usize {
            let hook = (row as usize - j - 1) + (conj.part(j) as usize - i - 1) + 1;
            hooks *= BigUint::from(hook);
        }
    }
    factorial(mu.weight()) / hooks
}

/// The full character table of `S_d`, rows and columns indexed by
/// [`partitions_of`]`(d)` in order.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub degree: u64,
    pub partitions: Vec<Partition>,
    values: Vec<Vec<i64>>,
    index: HashMap<Partition, usize>,
}

impl CharacterTable {
    fn build(d: u64) -> Result<Self> {
        let partitions = partitions_of(d);
        let values = partitions
            .iter()
            .map(|mu| {
                partitions
                    .iter()
                    .map(|rho| character_value(mu, rho))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let index = partitions
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        Ok(Self {
            degree: d,
            partitions,
            values,
            index,
        })
    }

    /// The memoised table for degree `d`, built once per process.
    pub fn for_degree(d: u64) -> Result<Arc<CharacterTable>> {
        static TABLES: OnceLock<Mutex<HashMap<u64, Arc<CharacterTable>>>> = OnceLock::new();
        let tables = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(t) = tables.lock().unwrap().get(&d) {
            return Ok(Arc::clone(t));
        }
        // Built outside the lock; a racing builder produces an identical table.
        let table = Arc::new(Self::build(d)?);
        let mut guard = tables.lock().unwrap();
        Ok(Arc::clone(guard.entry(d).or_insert(table)))
    }

    pub fn value(&self, mu: &Partition, rho: &Partition) -> Result<i64> {
        let i = self.position(mu)?;
        let j = self.position(rho)?;
        Ok(self.values[i][j])
    }

    fn position(&self, p: &Partition) -> Result<usize> {
        self.index.get(p).copied().ok_or_else(|| {
            Error::Argument(format!(
                "({p}) is not a partition of {}",
                self.degree
            ))
        })
    }

    /// `Σ_ρ D_ρ χ_μ(ρ) χ_ν(ρ)`.
    pub fn inner_product(&self, mu: &Partition, nu: &Partition) -> Result<BigInt> {
        let i = self.position(mu)?;
        let j = self.position(nu)?;
        let mut total = BigInt::zero();
        for (c, rho) in self.partitions.iter().enumerate() {
            let size = BigInt::from(cycle_stats(rho).class_size);
            total += size * self.values[i][c] * self.values[j][c];
        }
        Ok(total)
    }
}
