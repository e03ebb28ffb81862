//! Piecewise quasi-polynomials in isl's textual format.
//!
//! Supported grammar:
//!
//! ```text
//! file     := [ '$' INT ':=' ] qp [ ';' ]
//! qp       := '{' [ piece { ';' piece } ] '}'
//!           | '[' names ']' '->' '{' '[' ']' '->' body { ';' '[' ']' '->' body } '}'
//! piece    := '[' names ']' '->' body
//! body     := expr [ ':' conj ]
//! conj     := atom { 'and' atom }
//! atom     := 'exists' '(' name '=' floor { ',' name '=' floor } ':' conj ')'
//!           | side rel side { rel side }
//! side     := expr [ 'mod' INT ]
//! expr     := ['-'] term { ('+' | '-') term }
//! term     := unary { '*' unary | '/' INT | <adjacent identifier> }
//! unary    := '-' unary | atom [ '^' INT ]
//! atom     := INT | name | '(' expr ')' | 'floor' '(' expr ')'
//! ```
//!
//! `5e0` is read as `5 * e0`. Existential variables are bound to their
//! floor values (each has exactly one), not searched over. `A mod n`
//! applies to the whole affine `A`. Points outside every chamber evaluate
//! to zero.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::partition::BigRat;

/// An affine form `constant + Σ coeff·x_i` over rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Affine {
    pub constant: BigRat,
    pub coeffs: BTreeMap<usize, BigRat>,
}

impl Affine {
    pub fn constant(c: BigRat) -> Self {
        Self {
            constant: c,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn var(i: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(i, BigRat::one());
        Self {
            constant: BigRat::zero(),
            coeffs,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> BigRat {
        self.coeffs.get(&i).cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn add(&self, other: &Affine) -> Affine {
        let mut out = self.clone();
        out.constant += &other.constant;
        for (&i, c) in &other.coeffs {
            let e = out.coeffs.entry(i).or_insert_with(BigRat::zero);
            *e += c;
            if e.is_zero() {
                out.coeffs.remove(&i);
            }
        }
        out
    }

    pub fn scale(&self, f: &BigRat) -> Affine {
        if f.is_zero() {
            return Affine::constant(BigRat::zero());
        }
        Affine {
            constant: &self.constant * f,
            coeffs: self.coeffs.iter().map(|(&i, c)| (i, c * f)).collect(),
        }
    }

    /// Replaces variable `i` by `with`.
    pub fn substitute(&self, i: usize, with: &Affine) -> Affine {
        let Some(c) = self.coeffs.get(&i) else {
            return self.clone();
        };
        let mut rest = self.clone();
        rest.coeffs.remove(&i);
        rest.add(&with.scale(c))
    }

    pub fn eval(&self, values: &[BigInt]) -> BigRat {
        let mut v = self.constant.clone();
        for (&i, c) in &self.coeffs {
            v += c * BigRat::from_integer(values[i].clone());
        }
        v
    }

    /// Least common denominator of all coefficients.
    pub fn denominator(&self) -> BigInt {
        self.coeffs
            .values()
            .chain(std::iter::once(&self.constant))
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// `(numerator, denominator)` with an integral numerator form.
    fn integral(&self) -> (Affine, BigInt) {
        let den = self.denominator();
        (self.scale(&BigRat::from_integer(den.clone())), den)
    }

    /// Scales by a positive factor so that all coefficients are coprime
    /// integers.
    fn primitive(&self) -> Affine {
        let (num, _) = self.integral();
        let g = num
            .coeffs
            .values()
            .chain(std::iter::once(&num.constant))
            .fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()));
        if g.is_zero() || g.is_one() {
            num
        } else {
            num.scale(&BigRat::new(BigInt::one(), g))
        }
    }
}

/// Quasi-polynomial expression tree.
#[derive(Clone, Debug, PartialEq)]
pub enum QPExpr {
    Const(BigRat),
    Var(usize),
    Add(Vec<QPExpr>),
    Mul(Vec<QPExpr>),
    Neg(Box<QPExpr>),
    Pow(Box<QPExpr>, u32),
    Floor(Affine),
}

impl QPExpr {
    pub fn eval(&self, values: &[BigInt]) -> BigRat {
        match self {
            QPExpr::Const(c) => c.clone(),
            QPExpr::Var(i) => BigRat::from_integer(values[*i].clone()),
            QPExpr::Add(xs) => xs.iter().map(|x| x.eval(values)).sum(),
            QPExpr::Mul(xs) => xs.iter().map(|x| x.eval(values)).product(),
            QPExpr::Neg(x) => -x.eval(values),
            QPExpr::Pow(x, n) => num_traits::pow(x.eval(values), *n as usize),
            QPExpr::Floor(a) => BigRat::from_integer(a.eval(values).floor().to_integer()),
        }
    }

    /// The affine form of this expression, if it has one.
    pub fn to_affine(&self) -> Option<Affine> {
        match self {
            QPExpr::Const(c) => Some(Affine::constant(c.clone())),
            QPExpr::Var(i) => Some(Affine::var(*i)),
            QPExpr::Add(xs) => xs
                .iter()
                .try_fold(Affine::constant(BigRat::zero()), |acc, x| Some(acc.add(&x.to_affine()?))),
            QPExpr::Neg(x) => Some(x.to_affine()?.scale(&-BigRat::one())),
            QPExpr::Mul(xs) => {
                let mut acc = Affine::constant(BigRat::one());
                for x in xs {
                    let a = x.to_affine()?;
                    acc = if acc.is_constant() {
                        a.scale(&acc.constant)
                    } else if a.is_constant() {
                        acc.scale(&a.constant)
                    } else {
                        return None;
                    };
                }
                Some(acc)
            }
            QPExpr::Pow(x, n) => {
                let a = x.to_affine()?;
                match n {
                    0 => Some(Affine::constant(BigRat::one())),
                    1 => Some(a),
                    _ if a.is_constant() => Some(Affine::constant(num_traits::pow(a.constant, *n as usize))),
                    _ => None,
                }
            }
            QPExpr::Floor(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    /// `affine = 0`
    Eq,
    /// `affine ≥ 0`
    Ge,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constraint {
    Linear { affine: Affine, rel: Relation },
    /// `affine mod modulus ∈ residues`, with an integral affine.
    Modulus {
        affine: Affine,
        modulus: u64,
        residues: BTreeSet<u64>,
    },
}

impl Constraint {
    pub fn holds(&self, values: &[BigInt]) -> bool {
        match self {
            Constraint::Linear { affine, rel } => {
                let v = affine.eval(values);
                match rel {
                    Relation::Eq => v.is_zero(),
                    Relation::Ge => !v.is_negative(),
                }
            }
            Constraint::Modulus {
                affine,
                modulus,
                residues,
            } => {
                let v = affine.eval(values);
                if !v.is_integer() {
                    return false;
                }
                let r = v.to_integer().mod_floor(&BigInt::from(*modulus));
                residues.contains(&r.to_u64().expect("residue below modulus"))
            }
        }
    }

    fn affine(&self) -> &Affine {
        match self {
            Constraint::Linear { affine, .. } | Constraint::Modulus { affine, .. } => affine,
        }
    }

    fn map_affine(&self, f: impl Fn(&Affine) -> Affine) -> Constraint {
        match self {
            Constraint::Linear { affine, rel } => Constraint::Linear {
                affine: f(affine),
                rel: *rel,
            },
            Constraint::Modulus {
                affine,
                modulus,
                residues,
            } => Constraint::Modulus {
                affine: f(affine),
                modulus: *modulus,
                residues: residues.clone(),
            },
        }
    }

    fn normalized(&self) -> Constraint {
        match self {
            Constraint::Linear { affine, rel } => {
                let mut a = affine.primitive();
                if *rel == Relation::Eq {
                    let lead_negative = a.coeffs.values().next().is_some_and(|c| c.is_negative());
                    if lead_negative {
                        a = a.scale(&-BigRat::one());
                    }
                }
                Constraint::Linear { affine: a, rel: *rel }
            }
            other => other.clone(),
        }
    }
}

/// An existential variable bound to `floor(affine)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Binding {
    pub name: String,
    pub floor: Affine,
}

/// A chamber: existential bindings evaluated in order (variable indices
/// continue after the parameters), then a conjunction of constraints.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Chamber {
    pub bindings: Vec<Binding>,
    pub constraints: Vec<Constraint>,
}

impl Chamber {
    pub fn contains(&self, point: &[BigInt]) -> bool {
        let mut values = point.to_vec();
        for b in &self.bindings {
            let v = b.floor.eval(&values).floor().to_integer();
            values.push(v);
        }
        self.constraints.iter().all(|c| c.holds(&values))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Piece {
    pub chamber: Chamber,
    pub value: QPExpr,
}

/// A function `Z^params → Q` given by quasi-polynomials on chambers; zero
/// off all chambers.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PiecewiseQP {
    pub params: Vec<String>,
    pub pieces: Vec<Piece>,
}

impl PiecewiseQP {
    /// Evaluates at a named point. Extra names are ignored.
    pub fn evaluate(&self, point: &BTreeMap<String, BigInt>) -> Result<BigRat> {
        let values = self
            .params
            .iter()
            .map(|p| point.get(p).cloned().ok_or_else(|| Error::UnboundParameter(p.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.evaluate_values(&values))
    }

    /// Evaluates at a point given in parameter order.
    pub fn evaluate_at(&self, values: &[i64]) -> Result<BigRat> {
        if values.len() < self.params.len() {
            return Err(Error::UnboundParameter(self.params[values.len()].clone()));
        }
        if values.len() > self.params.len() {
            return Err(Error::Argument(format!(
                "{} values given for {} parameters",
                values.len(),
                self.params.len()
            )));
        }
        let values: Vec<BigInt> = values.iter().map(|&v| BigInt::from(v)).collect();
        Ok(self.evaluate_values(&values))
    }

    fn evaluate_values(&self, values: &[BigInt]) -> BigRat {
        self.pieces
            .iter()
            .find(|p| p.chamber.contains(values))
            .map_or_else(BigRat::zero, |p| p.value.eval(values))
    }

    /// The first sample point lying in two chambers, with their indices.
    pub fn find_overlap<I>(&self, points: I) -> Option<(Vec<BigInt>, usize, usize)>
    where
        I: IntoIterator<Item = Vec<BigInt>>,
    {
        for p in points {
            let hits: Vec<usize> = (0..self.pieces.len())
                .filter(|&i| self.pieces[i].chamber.contains(&p))
                .collect();
            if hits.len() > 1 {
                return Some((p, hits[0], hits[1]));
            }
        }
        None
    }

    /// Eliminates existential variables defined by floors of a single
    /// parameter, turning `n·e = affine` patterns and bounds on `e` into
    /// residue conditions, and drops redundant constraints. Pieces outside
    /// that pattern pass through unchanged.
    pub fn simplify(&self) -> PiecewiseQP {
        let mut pieces = Vec::new();
        for piece in &self.pieces {
            match simplify_chamber(&piece.chamber, self.params.len()) {
                Some(chambers) => pieces.extend(chambers.into_iter().map(|chamber| Piece {
                    chamber,
                    value: piece.value.clone(),
                })),
                None => pieces.push(piece.clone()),
            }
        }
        PiecewiseQP {
            params: self.params.clone(),
            pieces,
        }
    }
}

/// isl's rendering of an evaluation result: `{ n }`, or `{  }` for zero.
pub fn isl_value(v: &BigRat) -> String {
    if v.is_zero() {
        "{  }".to_string()
    } else {
        format!("{{ {v} }}")
    }
}

const MAX_PERIOD: u64 = 10_000;

fn simplify_chamber(ch: &Chamber, nparams: usize) -> Option<Vec<Chamber>> {
    // The single parameter carrying all periodic structure.
    let mut periodic: BTreeSet<usize> = BTreeSet::new();
    for b in &ch.bindings {
        if b.floor.coeffs.keys().any(|&i| i >= nparams) {
            return None;
        }
        periodic.extend(b.floor.coeffs.keys());
    }
    for c in &ch.constraints {
        if let Constraint::Modulus { affine, .. } = c {
            if affine.coeffs.keys().any(|&i| i >= nparams) {
                return None;
            }
            periodic.extend(affine.coeffs.keys());
        }
    }
    if periodic.len() > 1 {
        return None;
    }
    let v = periodic.into_iter().next();

    // Period L making every binding affine in t, where v = L·t + c.
    let mut period = BigInt::one();
    if let Some(v) = v {
        for b in &ch.bindings {
            period = period.lcm(b.floor.coeff(v).denom());
        }
        for c in &ch.constraints {
            if let Constraint::Modulus { affine, modulus, .. } = c {
                let m = BigInt::from(*modulus);
                let a = affine.coeff(v).to_integer();
                period = period.lcm(&(&m / m.gcd(&a)));
            }
        }
    }
    let period = period.to_u64().filter(|&p| p <= MAX_PERIOD)?;

    let mut groups: Vec<(Vec<Constraint>, BTreeSet<u64>)> = Vec::new();
    let mut infeasible_everywhere = true;
    for c in 0..period {
        let Some(remaining) = class_constraints(ch, nparams, v, period, c) else {
            continue;
        };
        infeasible_everywhere = false;
        match groups.iter_mut().find(|(g, _)| *g == remaining) {
            Some((_, set)) => {
                set.insert(c);
            }
            None => groups.push((remaining, BTreeSet::from([c]))),
        }
    }
    if infeasible_everywhere {
        return Some(Vec::new());
    }
    Some(
        groups
            .into_iter()
            .map(|(mut constraints, residues)| {
                if let Some(v) = v {
                    if let Some(m) = modulus_constraint(v, period, &residues) {
                        constraints.push(m);
                    }
                }
                Chamber {
                    bindings: Vec::new(),
                    constraints,
                }
            })
            .collect(),
    )
}

/// The constraints left on residue class `v ≡ c (mod L)` after eliminating
/// bindings, or `None` when the class is excluded.
fn class_constraints(ch: &Chamber, nparams: usize, v: Option<usize>, period: u64, c: u64) -> Option<Vec<Constraint>> {
    let l = BigRat::from_integer(BigInt::from(period));
    let cr = BigRat::from_integer(BigInt::from(c));
    // v = L·t + c, with t stored in v's slot.
    let forward = |a: &Affine| -> Affine {
        match v {
            Some(v) => a.substitute(v, &Affine::var(v).scale(&l).add(&Affine::constant(cr.clone()))),
            None => a.clone(),
        }
    };
    let backward = |a: &Affine| -> Affine {
        match v {
            Some(v) => {
                let inv = BigRat::one() / &l;
                a.substitute(v, &Affine::var(v).add(&Affine::constant(-cr.clone())).scale(&inv))
            }
            None => a.clone(),
        }
    };

    let mut locals: Vec<Affine> = Vec::new();
    for b in &ch.bindings {
        let a = forward(&b.floor);
        // a = q·t + r with q integral by choice of L.
        let slope = v.map(|v| a.coeff(v)).unwrap_or_else(BigRat::zero);
        let offset = a.constant.floor();
        let mut e = Affine::constant(offset);
        if let Some(v) = v {
            if !slope.is_zero() {
                e = e.add(&Affine::var(v).scale(&slope));
            }
        }
        locals.push(e);
    }

    let mut out: BTreeSet<Constraint> = BTreeSet::new();
    for con in &ch.constraints {
        let mut substituted = con.map_affine(|a| forward(a));
        for (j, e) in locals.iter().enumerate().rev() {
            substituted = substituted.map_affine(|a| a.substitute(nparams + j, e));
        }
        if let Constraint::Modulus { affine, modulus, .. } = &mut substituted {
            let m = BigInt::from(*modulus);
            affine.coeffs.retain(|_, c| !(c.is_integer() && c.to_integer().is_multiple_of(&m)));
        }
        if substituted.affine().is_constant() {
            if !substituted.holds(&[]) {
                return None;
            }
            continue;
        }
        out.insert(substituted.map_affine(|a| backward(a)).normalized());
    }
    Some(drop_redundant(out.into_iter().collect()))
}

/// Keeps the tightest of several lower bounds on the same linear part.
fn drop_redundant(constraints: Vec<Constraint>) -> Vec<Constraint> {
    let mut tightest: BTreeMap<BTreeMap<usize, BigRat>, BigRat> = BTreeMap::new();
    let mut rest = Vec::new();
    for c in constraints {
        match c {
            Constraint::Linear {
                affine,
                rel: Relation::Ge,
            } => {
                let e = tightest.entry(affine.coeffs).or_insert_with(|| affine.constant.clone());
                if affine.constant < *e {
                    *e = affine.constant;
                }
            }
            other => rest.push(other),
        }
    }
    let mut out: Vec<Constraint> = tightest
        .into_iter()
        .map(|(coeffs, constant)| Constraint::Linear {
            affine: Affine { constant, coeffs },
            rel: Relation::Ge,
        })
        .collect();
    out.extend(rest);
    out
}

/// `v mod m ∈ R` on the smallest modulus that expresses `residues`, or
/// `None` when every class is allowed.
fn modulus_constraint(v: usize, period: u64, residues: &BTreeSet<u64>) -> Option<Constraint> {
    for m in (1..=period).filter(|m| period.is_multiple_of(*m)) {
        let reduced: BTreeSet<u64> = residues.iter().map(|r| r % m).collect();
        let consistent = (0..period).all(|r| residues.contains(&r) == reduced.contains(&(r % m)));
        if consistent {
            if reduced.len() as u64 == m {
                return None;
            }
            return Some(Constraint::Modulus {
                affine: Affine::var(v),
                modulus: m,
                residues: reduced,
            });
        }
    }
    unreachable!("the full period always expresses its own residues")
}

// ---------------------------------------------------------------- printing

struct Names<'a> {
    params: &'a [String],
    locals: Vec<String>,
}

impl Names<'_> {
    fn get(&self, i: usize) -> &str {
        if i < self.params.len() {
            &self.params[i]
        } else {
            &self.locals[i - self.params.len()]
        }
    }
}

fn fmt_rat(c: &BigRat) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Integral affine rendered as `c + a*x + …`.
fn fmt_affine(a: &Affine, names: &Names) -> String {
    let mut out = String::new();
    let mut push = |coef: &BigRat, var: Option<&str>| {
        let neg = coef.is_negative();
        let mag = coef.abs();
        let body = match var {
            None => fmt_rat(&mag),
            Some(v) if mag.is_one() => v.to_string(),
            Some(v) => format!("{}*{v}", fmt_rat(&mag)),
        };
        if out.is_empty() {
            out = if neg { format!("-{body}") } else { body };
        } else {
            out.push_str(if neg { " - " } else { " + " });
            out.push_str(&body);
        }
    };
    if !a.constant.is_zero() {
        push(&a.constant, None);
    }
    for (&i, c) in &a.coeffs {
        push(c, Some(names.get(i)));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn fmt_floor(a: &Affine, names: &Names) -> String {
    let (num, den) = a.integral();
    if den.is_one() {
        format!("floor(({}))", fmt_affine(&num, names))
    } else {
        format!("floor(({})/{den})", fmt_affine(&num, names))
    }
}

// Precedence levels: 0 sum, 1 product, 2 unary minus, 3 power base.
fn fmt_expr(e: &QPExpr, names: &Names, prec: u8) -> String {
    let (text, own) = match e {
        QPExpr::Const(c) => {
            let own = if c.is_negative() {
                2
            } else if c.is_integer() {
                4
            } else {
                1
            };
            (fmt_rat(c), own)
        }
        QPExpr::Var(i) => (names.get(*i).to_string(), 4),
        QPExpr::Floor(a) => (fmt_floor(a, names), 4),
        QPExpr::Add(xs) if xs.is_empty() => ("0".to_string(), 4),
        QPExpr::Mul(xs) if xs.is_empty() => ("1".to_string(), 4),
        QPExpr::Add(xs) => {
            let mut s = fmt_expr(&xs[0], names, 0);
            for x in &xs[1..] {
                match x {
                    QPExpr::Neg(inner) => {
                        s.push_str(" - ");
                        s.push_str(&fmt_expr(inner, names, 1));
                    }
                    QPExpr::Const(c) if c.is_negative() => {
                        s.push_str(" - ");
                        s.push_str(&fmt_expr(&QPExpr::Const(-c), names, 1));
                    }
                    _ => {
                        s.push_str(" + ");
                        s.push_str(&fmt_expr(x, names, 1));
                    }
                }
            }
            (s, 0)
        }
        QPExpr::Mul(xs) => {
            // Later factors are parenthesised above sums so `a * 1/4` keeps
            // its meaning.
            let parts: Vec<String> = xs
                .iter()
                .enumerate()
                .map(|(i, x)| fmt_expr(x, names, if i == 0 { 1 } else { 2 }))
                .collect();
            (parts.join(" * "), 1)
        }
        QPExpr::Neg(x) => (format!("-{}", fmt_expr(x, names, 2)), 2),
        QPExpr::Pow(x, n) => (format!("{}^{n}", fmt_expr(x, names, 4)), 3),
    };
    if own < prec {
        format!("({text})")
    } else {
        text
    }
}

fn fmt_constraint(c: &Constraint, names: &Names) -> Vec<String> {
    match c {
        Constraint::Linear { affine, rel } => {
            let (num, _) = affine.integral();
            let lhs = Affine {
                constant: BigRat::zero(),
                coeffs: num.coeffs.clone(),
            };
            let op = match rel {
                Relation::Eq => "=",
                Relation::Ge => ">=",
            };
            vec![format!("{} {op} {}", fmt_affine(&lhs, names), fmt_rat(&-num.constant))]
        }
        Constraint::Modulus {
            affine,
            modulus,
            residues,
        } => {
            // Only contiguous residue sets print as one conjunction; the
            // piece printer splits the rest.
            let lo = *residues.iter().next().expect("nonempty residue set");
            let hi = *residues.iter().next_back().unwrap();
            let a = fmt_affine(affine, names);
            if lo == hi {
                vec![format!("{a} mod {modulus} = {lo}")]
            } else {
                let mut v = Vec::new();
                if lo > 0 {
                    v.push(format!("{a} mod {modulus} >= {lo}"));
                }
                if hi + 1 < *modulus {
                    v.push(format!("{a} mod {modulus} <= {hi}"));
                }
                v
            }
        }
    }
}

/// Splits non-contiguous residue sets into runs so that every chamber is a
/// plain conjunction.
fn split_runs(ch: &Chamber) -> Vec<Chamber> {
    let mut out = vec![Chamber {
        bindings: ch.bindings.clone(),
        constraints: Vec::new(),
    }];
    for c in &ch.constraints {
        let options: Vec<Constraint> = match c {
            Constraint::Modulus {
                affine,
                modulus,
                residues,
            } => runs(residues)
                .into_iter()
                .map(|run| Constraint::Modulus {
                    affine: affine.clone(),
                    modulus: *modulus,
                    residues: run,
                })
                .collect(),
            other => vec![other.clone()],
        };
        out = out
            .into_iter()
            .flat_map(|partial| {
                options.iter().map(move |o| {
                    let mut p = partial.clone();
                    p.constraints.push(o.clone());
                    p
                })
            })
            .collect();
    }
    out
}

fn runs(set: &BTreeSet<u64>) -> Vec<BTreeSet<u64>> {
    let mut out: Vec<BTreeSet<u64>> = Vec::new();
    let mut prev: Option<u64> = None;
    for &r in set {
        match (prev, out.last_mut()) {
            (Some(p), Some(last)) if p + 1 == r => {
                last.insert(r);
            }
            _ => out.push(BTreeSet::from([r])),
        }
        prev = Some(r);
    }
    out
}

impl fmt::Display for PiecewiseQP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head = format!("[{}]", self.params.join(", "));
        let mut pieces = Vec::new();
        for piece in &self.pieces {
            for ch in split_runs(&piece.chamber) {
                let names = Names {
                    params: &self.params,
                    locals: ch.bindings.iter().map(|b| b.name.clone()).collect(),
                };
                let value = fmt_expr(&piece.value, &names, 0);
                let conds: Vec<String> = ch.constraints.iter().flat_map(|c| fmt_constraint(c, &names)).collect();
                let mut body = conds.join(" and ");
                if !ch.bindings.is_empty() {
                    let binds: Vec<String> = ch
                        .bindings
                        .iter()
                        .enumerate()
                        .map(|(j, b)| {
                            let scope = Names {
                                params: &self.params,
                                locals: names.locals[..j].to_vec(),
                            };
                            format!("{} = {}", b.name, fmt_floor(&b.floor, &scope))
                        })
                        .collect();
                    if body.is_empty() {
                        body = "0 = 0".to_string();
                    }
                    body = format!("exists ({}: {body})", binds.join(", "));
                }
                if body.is_empty() {
                    pieces.push(format!("{head} -> ({value})"));
                } else {
                    pieces.push(format!("{head} -> ({value}) : {body}"));
                }
            }
        }
        if pieces.is_empty() {
            write!(f, "{{  }}")
        } else {
            write!(f, "{{ {} }}", pieces.join("; "))
        }
    }
}

// ----------------------------------------------------------------- parsing

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(&'static str),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
    start: usize,
    end: usize,
}

const SYMBOLS: [&str; 20] = [
    ":=", "->", "<=", ">=", "{", "}", "[", "]", "(", ")", ":", ";", ",", "+", "-", "*", "/", "^", "=", "$",
];
const STRICT: [&str; 2] = ["<", ">"];

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut toks = Vec::new();
    let bytes = text.as_bytes();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < bytes.len() {
        let ch = bytes[i];
        if ch == b'\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if ch.is_ascii_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = i;
        let tok = if ch.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            Tok::Int(text[start..i].parse().expect("digits"))
        } else if ch.is_ascii_alphabetic() || ch == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'') {
                i += 1;
            }
            Tok::Ident(text[start..i].to_string())
        } else if let Some(s) = SYMBOLS.iter().chain(&STRICT).find(|s| text[i..].starts_with(**s)) {
            i += s.len();
            Tok::Sym(s)
        } else {
            return Err(Error::Syntax {
                line,
                column: col,
                message: format!("unexpected character '{}'", text[i..].chars().next().unwrap()),
            });
        };
        toks.push(Token {
            tok,
            line,
            column: col,
            start,
            end: i,
        });
        col += i - start;
    }
    toks.push(Token {
        tok: Tok::End,
        line,
        column: col,
        start: i,
        end: i,
    });
    Ok(toks)
}

const KEYWORDS: [&str; 4] = ["and", "exists", "floor", "mod"];

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    /// Parameters followed by the current chamber's existential names.
    scope: Vec<String>,
}

enum Side {
    Affine(Affine),
    Mod(Affine, u64),
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let t = &self.toks[self.pos];
        Err(Error::Syntax {
            line: t.line,
            column: t.column,
            message: message.into(),
        })
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Int(n) => format!("'{n}'"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Sym(s) => format!("'{s}'"),
            Tok::End => "end of input".to_string(),
        }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn is_keyword(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == k)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> Result<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.error(format!("expected '{s}', found {}", self.describe()))
        }
    }

    fn name(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.pos += 1;
                Ok(s)
            }
            _ => self.error(format!("expected a name, found {}", self.describe())),
        }
    }

    fn int(&mut self) -> Result<BigInt> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.pos += 1;
                Ok(n)
            }
            _ => self.error(format!("expected an integer, found {}", self.describe())),
        }
    }

    fn file(&mut self) -> Result<PiecewiseQP> {
        if self.eat_sym("$") {
            self.int()?;
            self.expect_sym(":=")?;
        }
        let qp = if self.is_sym("[") {
            self.parametric_set()?
        } else {
            self.braced()?
        };
        self.eat_sym(";");
        if *self.peek() != Tok::End {
            return self.error(format!("unexpected {} after the closing brace", self.describe()));
        }
        Ok(qp)
    }

    fn names(&mut self) -> Result<Vec<String>> {
        self.expect_sym("[")?;
        let mut out = Vec::new();
        if !self.is_sym("]") {
            loop {
                out.push(self.name()?);
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        self.expect_sym("]")?;
        Ok(out)
    }

    fn braced(&mut self) -> Result<PiecewiseQP> {
        self.expect_sym("{")?;
        let mut qp = PiecewiseQP::default();
        let mut first = true;
        while !self.is_sym("}") {
            if !first {
                self.expect_sym(";")?;
            }
            let at = self.pos;
            let params = self.names()?;
            if first {
                qp.params = params;
            } else if params != qp.params {
                self.pos = at;
                return self.error(format!(
                    "piece parameters [{}] differ from [{}]",
                    params.join(", "),
                    qp.params.join(", ")
                ));
            }
            first = false;
            self.expect_sym("->")?;
            qp.pieces.push(self.body(&qp.params)?);
        }
        self.expect_sym("}")?;
        Ok(qp)
    }

    /// `[p] -> { [] -> (e) : … }`, normalised to `{ [p] -> (e) : … }`.
    fn parametric_set(&mut self) -> Result<PiecewiseQP> {
        let params = self.names()?;
        self.expect_sym("->")?;
        self.expect_sym("{")?;
        let mut qp = PiecewiseQP {
            params,
            pieces: Vec::new(),
        };
        let mut first = true;
        while !self.is_sym("}") {
            if !first {
                self.expect_sym(";")?;
            }
            first = false;
            if !self.names()?.is_empty() {
                return self.error("a parametric set of constants must have an empty tuple '[]'");
            }
            self.expect_sym("->")?;
            qp.pieces.push(self.body(&qp.params)?);
        }
        self.expect_sym("}")?;
        Ok(qp)
    }

    fn body(&mut self, params: &[String]) -> Result<Piece> {
        self.scope = params.to_vec();
        let value = self.expr()?;
        let mut chamber = Chamber::default();
        if self.eat_sym(":") {
            self.conj(&mut chamber)?;
        }
        Ok(Piece { chamber, value })
    }

    fn conj(&mut self, ch: &mut Chamber) -> Result<()> {
        loop {
            self.atom_constraint(ch)?;
            if self.is_keyword("and") {
                self.pos += 1;
            } else {
                return Ok(());
            }
        }
    }

    fn atom_constraint(&mut self, ch: &mut Chamber) -> Result<()> {
        if self.is_keyword("exists") {
            self.pos += 1;
            self.expect_sym("(")?;
            loop {
                let at = self.pos;
                let name = self.name()?;
                if self.scope.contains(&name) {
                    self.pos = at;
                    return self.error(format!("'{name}' is already bound"));
                }
                self.expect_sym("=")?;
                let floor = match self.unary()? {
                    QPExpr::Floor(a) => a,
                    _ => {
                        self.pos = at;
                        return self.error(format!("existential '{name}' must be defined by a floor"));
                    }
                };
                ch.bindings.push(Binding {
                    name: name.clone(),
                    floor,
                });
                self.scope.push(name);
                if !self.eat_sym(",") {
                    break;
                }
            }
            self.expect_sym(":")?;
            self.conj(ch)?;
            self.expect_sym(")")?;
            return Ok(());
        }
        let first = self.side()?;
        let mut sides = vec![first];
        let mut rels = Vec::new();
        while let Tok::Sym(s @ ("=" | "<=" | ">=" | "<" | ">")) = self.peek().clone() {
            self.pos += 1;
            rels.push(s);
            sides.push(self.side()?);
        }
        if rels.is_empty() {
            return self.error(format!("expected a comparison, found {}", self.describe()));
        }
        for (i, rel) in rels.iter().enumerate() {
            ch.constraints.push(self.comparison(&sides[i], rel, &sides[i + 1])?);
        }
        Ok(())
    }

    fn comparison(&self, lhs: &Side, rel: &str, rhs: &Side) -> Result<Constraint> {
        match (lhs, rhs) {
            (Side::Affine(a), Side::Affine(b)) => {
                let diff = a.add(&b.scale(&-BigRat::one()));
                let one = Affine::constant(BigRat::one());
                let neg = |x: &Affine| x.scale(&-BigRat::one());
                let (affine, rel) = match rel {
                    "=" => (diff, Relation::Eq),
                    ">=" => (diff, Relation::Ge),
                    "<=" => (neg(&diff), Relation::Ge),
                    // Strict comparisons of integers.
                    ">" => (diff.add(&neg(&one)), Relation::Ge),
                    _ => (neg(&diff).add(&neg(&one)), Relation::Ge),
                };
                Ok(Constraint::Linear { affine, rel })
            }
            (Side::Mod(a, m), Side::Affine(c)) | (Side::Affine(c), Side::Mod(a, m)) => {
                let flipped = matches!(lhs, Side::Affine(_));
                if !c.is_constant() || !c.constant.is_integer() {
                    return self.error("a 'mod' side must be compared with an integer");
                }
                let c = c.constant.to_integer();
                let rel = match (rel, flipped) {
                    (r, false) => r,
                    ("<=", true) => ">=",
                    (">=", true) => "<=",
                    ("<", true) => ">",
                    (">", true) => "<",
                    (r, true) => r,
                };
                let residues = (0..*m)
                    .filter(|&r| {
                        let r = BigInt::from(r);
                        match rel {
                            "=" => r == c,
                            "<=" => r <= c,
                            ">=" => r >= c,
                            "<" => r < c,
                            _ => r > c,
                        }
                    })
                    .collect();
                Ok(Constraint::Modulus {
                    affine: a.clone(),
                    modulus: *m,
                    residues,
                })
            }
            _ => self.error("cannot compare two 'mod' expressions"),
        }
    }

    fn side(&mut self) -> Result<Side> {
        let at = self.pos;
        let e = self.expr()?;
        let Some(a) = e.to_affine() else {
            self.pos = at;
            return Err(Error::NonAffine(self.render(&e)));
        };
        if self.is_keyword("mod") {
            self.pos += 1;
            let m = self.int()?;
            let m = m.to_u64().filter(|&m| m > 0).ok_or_else(|| Error::Syntax {
                line: self.toks[self.pos - 1].line,
                column: self.toks[self.pos - 1].column,
                message: "modulus must be a positive integer".into(),
            })?;
            if !a.denominator().is_one() {
                return Err(Error::NonAffine(format!("{} has fractional coefficients", self.render(&e))));
            }
            return Ok(Side::Mod(a, m));
        }
        Ok(Side::Affine(a))
    }

    fn render(&self, e: &QPExpr) -> String {
        let n = Names {
            params: &self.scope,
            locals: Vec::new(),
        };
        fmt_expr(e, &n, 0)
    }

    fn expr(&mut self) -> Result<QPExpr> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat_sym("+") {
                terms.push(self.term()?);
            } else if self.eat_sym("-") {
                terms.push(QPExpr::Neg(Box::new(self.term()?)));
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            QPExpr::Add(terms)
        })
    }

    fn term(&mut self) -> Result<QPExpr> {
        let mut factors = vec![self.unary()?];
        loop {
            if self.eat_sym("*") {
                factors.push(self.unary()?);
            } else if self.eat_sym("/") {
                let at = self.pos;
                let d = self.int()?;
                if d.is_zero() {
                    self.pos = at;
                    return self.error("division by zero");
                }
                factors.push(QPExpr::Const(BigRat::new(BigInt::one(), d)));
            } else if self.adjacent_name() {
                factors.push(self.unary()?);
            } else {
                break;
            }
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            fold_constants(factors)
        })
    }

    /// An integer literal immediately followed by a name, as in `5e0`.
    fn adjacent_name(&self) -> bool {
        let prev = &self.toks[self.pos - 1];
        let cur = &self.toks[self.pos];
        matches!(prev.tok, Tok::Int(_))
            && matches!(&cur.tok, Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()))
            && prev.end == cur.start
    }

    fn unary(&mut self) -> Result<QPExpr> {
        if self.eat_sym("-") {
            return Ok(match self.unary()? {
                QPExpr::Const(c) => QPExpr::Const(-c),
                e => QPExpr::Neg(Box::new(e)),
            });
        }
        let base = self.primary()?;
        if self.eat_sym("^") {
            let at = self.pos;
            let n = self.int()?;
            let Some(n) = n.to_u32() else {
                self.pos = at;
                return self.error("exponent too large");
            };
            return Ok(QPExpr::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<QPExpr> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.pos += 1;
                Ok(QPExpr::Const(BigRat::from_integer(n)))
            }
            Tok::Sym("(") => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            Tok::Ident(s) if s == "floor" => {
                self.pos += 1;
                self.expect_sym("(")?;
                let at = self.pos;
                let e = self.expr()?;
                let Some(a) = e.to_affine() else {
                    self.pos = at;
                    return Err(Error::NonAffine(format!("floor argument {}", self.render(&e))));
                };
                self.expect_sym(")")?;
                Ok(QPExpr::Floor(a))
            }
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                if matches!(self.peek_at(1), Tok::Sym("(")) {
                    return self.error(format!("unknown function '{s}'"));
                }
                match self.scope.iter().rposition(|x| *x == s) {
                    Some(i) => {
                        self.pos += 1;
                        Ok(QPExpr::Var(i))
                    }
                    None => Err(Error::UnboundParameter(s)),
                }
            }
            _ => self.error(format!("expected an expression, found {}", self.describe())),
        }
    }
}

/// Merges adjacent constant factors, so `1/4` stays a single rational.
fn fold_constants(factors: Vec<QPExpr>) -> QPExpr {
    let mut out: Vec<QPExpr> = Vec::new();
    for f in factors {
        if let (Some(QPExpr::Const(prev)), QPExpr::Const(c)) = (out.last_mut(), &f) {
            *prev *= c;
            continue;
        }
        out.push(f);
    }
    if out.len() == 1 {
        out.pop().unwrap()
    } else {
        QPExpr::Mul(out)
    }
}

/// Parses a piecewise quasi-polynomial.
pub fn parse(text: &str) -> Result<PiecewiseQP> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        scope: Vec::new(),
    };
    p.file()
}

impl std::str::FromStr for PiecewiseQP {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}
