//! Exact rational linear algebra: rank, square solves and a small simplex.
//!
//! Sizes here are tiny (tens of variables), so everything is dense and uses
//! Bland's rule for guaranteed termination.

use num_traits::{One, Signed, Zero};

use crate::partition::BigRat;

/// Row-reduces `rows` in place and returns the rank.
pub fn rank(mut rows: Vec<Vec<BigRat>>) -> usize {
    let Some(ncols) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut r = 0;
    for c in 0..ncols {
        let Some(pivot) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot);
        let inv = BigRat::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..ncols {
                    let delta = &f * &rows[r][j];
                    rows[i][j] -= delta;
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Solves the square system `a·x = b`; `None` if singular.
pub fn solve(a: &[Vec<BigRat>], b: &[BigRat]) -> Option<Vec<BigRat>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for c in 0..n {
        let pivot = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, pivot);
        let inv = BigRat::one() / &m[c][c];
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=n {
                    let delta = &f * &m[c][j];
                    m[i][j] -= delta;
                }
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Outcome of [`maximize`].
#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal(BigRat),
}

/// Maximises `objective·x` subject to `le·x ≤ le_rhs`, `eq·x = eq_rhs` and
/// `x ≥ 0`.
pub fn maximize(
    objective: &[BigRat],
    le: &[Vec<BigRat>],
    le_rhs: &[BigRat],
    eq: &[Vec<BigRat>],
    eq_rhs: &[BigRat],
) -> LpOutcome {
    let n = objective.len();
    let n_slack = le.len();
    let rows = le.len() + eq.len();
    // Columns: x (n), slacks (n_slack), artificials (rows), then rhs.
    let width = n + n_slack + rows;
    let mut tab: Vec<Vec<BigRat>> = Vec::with_capacity(rows);
    for (i, (row, rhs)) in le
        .iter()
        .zip(le_rhs)
        .chain(eq.iter().zip(eq_rhs))
        .enumerate()
    {
        let mut t = vec![BigRat::zero(); width + 1];
        t[..n].clone_from_slice(row);
        if i < n_slack {
            t[n + i] = BigRat::one();
        }
        t[width] = rhs.clone();
        if rhs.is_negative() {
            for x in t.iter_mut() {
                *x = -x.clone();
            }
        }
        t[n + n_slack + i] = BigRat::one();
        tab.push(t);
    }
    let mut basis: Vec<usize> = (0..rows).map(|i| n + n_slack + i).collect();

    // Phase I: minimise the artificial sum, i.e. maximise its negation.
    let mut phase1 = vec![BigRat::zero(); width];
    for c in phase1[n + n_slack..].iter_mut() {
        *c = -BigRat::one();
    }
    if run_simplex(&mut tab, &mut basis, &phase1, width).is_none() {
        return LpOutcome::Unbounded;
    }
    let infeas: BigRat = basis
        .iter()
        .zip(&tab)
        .filter(|(&b, _)| b >= n + n_slack)
        .map(|(_, row)| row[width].clone())
        .sum();
    if !infeas.is_zero() {
        return LpOutcome::Infeasible;
    }
    // Drive degenerate artificials out of the basis where possible.
    for r in 0..rows {
        if basis[r] >= n + n_slack {
            if let Some(c) = (0..n + n_slack).find(|&c| !tab[r][c].is_zero()) {
                pivot(&mut tab, &mut basis, r, c, width);
            }
        }
    }

    let mut phase2 = vec![BigRat::zero(); width];
    phase2[..n].clone_from_slice(objective);
    // Artificials may not re-enter.
    let allowed = n + n_slack;
    match run_simplex_restricted(&mut tab, &mut basis, &phase2, width, allowed) {
        None => LpOutcome::Unbounded,
        Some(()) => {
            let mut value = BigRat::zero();
            for (r, &b) in basis.iter().enumerate() {
                if b < n {
                    value += &objective[b] * &tab[r][width];
                }
            }
            LpOutcome::Optimal(value)
        }
    }
}

fn run_simplex(tab: &mut [Vec<BigRat>], basis: &mut [usize], obj: &[BigRat], width: usize) -> Option<()> {
    run_simplex_restricted(tab, basis, obj, width, width)
}

fn run_simplex_restricted(
    tab: &mut [Vec<BigRat>],
    basis: &mut [usize],
    obj: &[BigRat],
    width: usize,
    allowed: usize,
) -> Option<()> {
    loop {
        // Reduced cost of column c: obj_c − Σ_r obj_{basis r} tab[r][c].
        let entering = (0..allowed).find(|&c| {
            if basis.contains(&c) {
                return false;
            }
            let mut rc = obj[c].clone();
            for (r, &b) in basis.iter().enumerate() {
                if !tab[r][c].is_zero() && !obj[b].is_zero() {
                    rc -= &obj[b] * &tab[r][c];
                }
            }
            rc.is_positive()
        });
        let Some(c) = entering else {
            return Some(());
        };
        let mut best: Option<(usize, BigRat)> = None;
        for r in 0..tab.len() {
            if tab[r][c].is_positive() {
                let ratio = &tab[r][width] / &tab[r][c];
                let better = match &best {
                    None => true,
                    Some((br, bv)) => ratio < *bv || (ratio == *bv && basis[r] < basis[*br]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
        }
        let (r, _) = best?;
        pivot(tab, basis, r, c, width);
    }
}

fn pivot(tab: &mut [Vec<BigRat>], basis: &mut [usize], r: usize, c: usize, width: usize) {
    let inv = BigRat::one() / &tab[r][c];
    for x in tab[r].iter_mut() {
        *x *= &inv;
    }
    let pivot_row = tab[r].clone();
    for (i, row) in tab.iter_mut().enumerate() {
        if i != r && !row[c].is_zero() {
            let f = row[c].clone();
            for j in 0..=width {
                if !pivot_row[j].is_zero() {
                    row[j] -= &f * &pivot_row[j];
                }
            }
        }
    }
    basis[r] = c;
}
