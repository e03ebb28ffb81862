//! Exact quasi-polynomial fits along rays, and the asymptotic lead-term
//! comparison between plethysms and tensor powers.
//!
//! A ray function `f(s)` (for instance the multiplicity of `s·λ` in
//! `S^μ(S^{sk})`) agrees for large `s` with a quasi-polynomial: one
//! polynomial per residue class of `s` modulo a period. [`fit_ray`] finds
//! the smallest period, then the smallest degree, that reproduces every
//! sample exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;

use crate::characters::dimension;
use crate::counting::pieri_dim_formula;
use crate::error::{Error, Result};
use crate::linalg::solve;
use crate::partition::{factorial, BigRat, Partition};
use crate::plethysm::{coefficient, tensor_multiplicity, PlethysmQuery};

/// A quasi-polynomial `s ↦ Σ_j c_{s mod p, j} s^j`, valid for `s ≥ s_min`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayFit {
    pub period: u64,
    pub degree: usize,
    /// `coefficients[r][j]` multiplies `s^j` when `s ≡ r (mod period)`.
    pub coefficients: Vec<Vec<BigRat>>,
    pub s_min: u64,
    /// Largest sampled `s` used to build and verify the fit.
    pub s_max: u64,
}

impl RayFit {
    pub fn value(&self, s: u64) -> BigRat {
        let r = (s % self.period) as usize;
        let x = BigRat::from_integer(BigInt::from(s));
        self.coefficients[r]
            .iter()
            .rev()
            .fold(BigRat::zero(), |acc, c| acc * &x + c)
    }

    /// The coefficient of `s^degree` on residue class `r`.
    pub fn lead(&self, r: u64) -> BigRat {
        self.coefficients[(r % self.period) as usize]
            .get(self.degree)
            .cloned()
            .unwrap_or_else(BigRat::zero)
    }
}

/// Candidate periods: `D·m` for every divisor `D` of `lcm(1..=d)` and `m`
/// in a small multiplier set, ascending.
pub fn default_periods(d: usize) -> Vec<u64> {
    let l = (1..=d.max(1) as u64).fold(1u64, |acc, x| acc.lcm(&x));
    let mut out: Vec<u64> = (1..=l)
        .filter(|x| l % x == 0)
        .flat_map(|x| [1, 2, 3, 4, 5, 6, 10, 12, 15, 20, 30, 60].map(|m| x * m))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Evaluates `f` on `s_min..=s_max`, in parallel, in order.
pub fn sample<F>(f: F, s_min: u64, s_max: u64) -> Result<Vec<BigInt>>
where
    F: Fn(u64) -> Result<BigInt> + Sync,
{
    (s_min..=s_max).into_par_iter().map(&f).collect()
}

/// Fits `f` on `s_min..=s_max`.
pub fn fit_ray<F>(f: F, s_min: u64, s_max: u64, degree_bound: usize, periods: &[u64]) -> Result<RayFit>
where
    F: Fn(u64) -> Result<BigInt> + Sync,
{
    if s_max < s_min {
        return Err(Error::Argument(format!("empty sample range {s_min}..={s_max}")));
    }
    let values = sample(f, s_min, s_max)?;
    fit_samples(s_min, &values, degree_bound, periods)
}

/// Fits samples `values[i] = f(s_min + i)`. For each period (ascending)
/// with at least `2·(degree_bound + 1)` samples per residue class, and
/// each degree up to the bound, every class is interpolated through its
/// first `g + 1` samples and checked exactly on all the others.
pub fn fit_samples(s_min: u64, values: &[BigInt], degree_bound: usize, periods: &[u64]) -> Result<RayFit> {
    let s_max = s_min + values.len() as u64 - 1;
    let need = 2 * (degree_bound + 1);
    let mut periods = periods.to_vec();
    periods.sort_unstable();
    periods.dedup();

    let mut last_residual: Option<String> = None;
    for &p in periods.iter().filter(|&&p| p > 0) {
        if (values.len() as u64) < p * need as u64 {
            continue;
        }
        let classes: Vec<Vec<(u64, &BigInt)>> = (0..p)
            .map(|r| {
                values
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (s_min + i as u64, v))
                    .filter(|(s, _)| s % p == r)
                    .collect()
            })
            .collect();
        for g in 0..=degree_bound {
            match fit_classes(&classes, g) {
                Ok(mut coefficients) => {
                    let degree = coefficients
                        .iter()
                        .map(|c| c.iter().rposition(|x| !x.is_zero()).unwrap_or(0))
                        .max()
                        .unwrap_or(0);
                    for c in &mut coefficients {
                        c.truncate(degree + 1);
                    }
                    return Ok(RayFit {
                        period: p,
                        degree,
                        coefficients,
                        s_min,
                        s_max,
                    });
                }
                Err(residual) => last_residual = Some(format!("period {p}, degree {g}: {residual}")),
            }
        }
    }
    Err(Error::NoFit(match last_residual {
        Some(r) => format!("no candidate period fits on s in [{s_min}, {s_max}]; last residual at {r}"),
        None => format!(
            "no candidate period has {need} samples per residue class on s in [{s_min}, {s_max}] (degree bound {degree_bound})"
        ),
    }))
}

fn fit_classes(classes: &[Vec<(u64, &BigInt)>], g: usize) -> std::result::Result<Vec<Vec<BigRat>>, String> {
    classes
        .iter()
        .map(|pts| {
            let rat = |x: u64| BigRat::from_integer(BigInt::from(x));
            let a: Vec<Vec<BigRat>> = pts[..=g]
                .iter()
                .map(|(s, _)| (0..=g).map(|j| num_traits::pow(rat(*s), j)).collect())
                .collect();
            let b: Vec<BigRat> = pts[..=g].iter().map(|(_, v)| BigRat::from_integer((*v).clone())).collect();
            let c = solve(&a, &b).expect("distinct nodes give a nonsingular system");
            for (s, v) in &pts[g + 1..] {
                let x = rat(*s);
                let predicted = c.iter().rev().fold(BigRat::zero(), |acc, k| acc * &x + k);
                if predicted != BigRat::from_integer((*v).clone()) {
                    return Err(format!("s = {s}, observed {v}, predicted {predicted}"));
                }
            }
            Ok(c)
        })
        .collect()
}

/// Degree bound `(l−1)(d − l/2 − 1) − Σ C(a_j, 2)` for rays through `λ`,
/// clamped at zero.
pub fn degree_bound(d: usize, lambda: &Partition) -> usize {
    pieri_dim_formula(d, lambda).max(0) as usize
}

/// Outcome of [`asymptotic_lead_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadVerdict {
    pub holds: bool,
    pub plethysm: RayFit,
    pub tensor: RayFit,
    /// `lead(plethysm)/lead(tensor)`, when it is the same on every residue
    /// class and the tensor lead is nonzero.
    pub ratio: Option<BigRat>,
    /// `dim μ / d!`.
    pub expected: BigRat,
}

/// Fits `s ↦ a_{sλ}(S^μ(S^{sk}))` and `s ↦ mult(sλ, (S^{sk})^{⊗d})` over
/// `1..=s_max` and compares their top coefficients class by class.
pub fn asymptotic_lead_check(mu: &Partition, k: u64, lambda: &Partition, s_max: u64) -> Result<LeadVerdict> {
    PlethysmQuery::sym(mu.clone(), k, lambda.clone())?;
    if !lambda.is_regular() {
        return Err(Error::Argument(format!("({lambda}) has repeated parts")));
    }
    let d = mu.weight() as usize;
    let bound = degree_bound(d, lambda);
    let periods = default_periods(d);
    let plethysm = fit_ray(
        |s| {
            let q = PlethysmQuery::sym(mu.clone(), s * k, lambda.scaled(s))?;
            Ok(BigInt::from(coefficient(&q)?))
        },
        1,
        s_max,
        bound,
        &periods,
    )?;
    let tensor = fit_ray(
        |s| Ok(BigInt::from(tensor_multiplicity(s * k, d, &lambda.scaled(s))?)),
        1,
        s_max,
        bound,
        &periods,
    )?;
    let expected = BigRat::new(
        BigInt::from(dimension(mu)),
        BigInt::from(factorial(d as u64)),
    );
    let period = plethysm.period.lcm(&tensor.period);
    let ratios: Vec<Option<BigRat>> = (0..period)
        .map(|r| {
            let t = tensor.lead(r);
            (!t.is_zero()).then(|| plethysm.lead(r) / t)
        })
        .collect();
    let ratio = match ratios.first() {
        Some(Some(first)) if ratios.iter().all(|x| x.as_ref() == Some(first)) => Some(first.clone()),
        _ => None,
    };
    let holds = plethysm.degree == tensor.degree && ratio.as_ref() == Some(&expected);
    Ok(LeadVerdict {
        holds,
        plethysm,
        tensor,
        ratio,
        expected,
    })
}
