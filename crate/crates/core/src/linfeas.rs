//! Affine expressions over rational unknowns and an exact feasibility test for
//! mixed systems of `= 0`, `≥ 0` and `> 0` constraints.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::logic::Event;
use crate::rational::{format_rational, Q};

/// One unknown of a constraint system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarId {
    Density1(usize),
    /// Stored with `i ≤ j`; construct through [`VarId::density2`].
    Density2(usize, usize),
    Measure(Event),
    Free(u32),
}

impl VarId {
    pub fn density2(i: usize, j: usize) -> VarId {
        VarId::Density2(i.min(j), i.max(j))
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::Density1(i) => write!(f, "f({i})"),
            VarId::Density2(i, j) => write!(f, "f({i},{j})"),
            VarId::Measure(e) => write!(f, "mu({e})"),
            VarId::Free(k) => write!(f, "x{k}"),
        }
    }
}

/// `Σ cᵥ·v + constant`, with no zero coefficients stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct LinExpr {
    coeffs: BTreeMap<VarId, Q>,
    constant: Q,
}

impl LinExpr {
    pub fn zero() -> Self {
        LinExpr::default()
    }

    pub fn constant(c: Q) -> Self {
        LinExpr { coeffs: BTreeMap::new(), constant: c }
    }

    pub fn var(v: VarId) -> Self {
        LinExpr::term(v, Q::one())
    }

    pub fn term(v: VarId, c: Q) -> Self {
        let mut e = LinExpr::zero();
        e.add_term(v, c);
        e
    }

    pub fn add_term(&mut self, v: VarId, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(v).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&v);
        }
    }

    pub fn coeff(&self, v: VarId) -> Q {
        self.coeffs.get(&v).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> &Q {
        &self.constant
    }

    pub fn terms(&self) -> impl Iterator<Item = (VarId, &Q)> {
        self.coeffs.iter().map(|(v, c)| (*v, c))
    }

    pub fn variables(&self) -> impl Iterator<Item = VarId> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.constant.is_zero()
    }

    pub fn scale(&self, c: &Q) -> LinExpr {
        if c.is_zero() {
            return LinExpr::zero();
        }
        LinExpr {
            coeffs: self.coeffs.iter().map(|(v, x)| (*v, x * c)).collect(),
            constant: &self.constant * c,
        }
    }

    /// Value at a point; unknowns missing from `point` count as 0.
    pub fn eval(&self, point: &Witness) -> Q {
        self.terms().fold(self.constant.clone(), |acc, (v, c)| acc + c * point.get(v))
    }

    pub fn substitute(&self, v: VarId, by: &LinExpr) -> LinExpr {
        match self.coeffs.get(&v) {
            None => self.clone(),
            Some(c) => {
                let mut out = self.clone();
                out.coeffs.remove(&v);
                out + by.scale(c)
            }
        }
    }

    /// Positive multiple with leading coefficient `±1`, plus the sign that was
    /// divided out (`-1` if the leading coefficient was negative).
    pub(crate) fn normalized(&self) -> (LinExpr, bool) {
        match self.coeffs.values().next() {
            None => match self.constant.is_negative() {
                true => (self.scale(&-Q::one()), true),
                false => (self.clone(), false),
            },
            Some(lead) => {
                let flip = lead.is_negative();
                let s = Q::one() / lead.abs();
                let s = if flip { -s } else { s };
                (self.scale(&s), flip)
            }
        }
    }
}

impl From<VarId> for LinExpr {
    fn from(v: VarId) -> Self {
        LinExpr::var(v)
    }
}

impl AddAssign<&LinExpr> for LinExpr {
    fn add_assign(&mut self, rhs: &LinExpr) {
        for (v, c) in &rhs.coeffs {
            self.add_term(*v, c.clone());
        }
        self.constant += &rhs.constant;
    }
}

impl SubAssign<&LinExpr> for LinExpr {
    fn sub_assign(&mut self, rhs: &LinExpr) {
        for (v, c) in &rhs.coeffs {
            self.add_term(*v, -c.clone());
        }
        self.constant -= &rhs.constant;
    }
}

impl Add for LinExpr {
    type Output = LinExpr;
    fn add(mut self, rhs: LinExpr) -> LinExpr {
        self += &rhs;
        self
    }
}

impl Add<&LinExpr> for &LinExpr {
    type Output = LinExpr;
    fn add(self, rhs: &LinExpr) -> LinExpr {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for LinExpr {
    type Output = LinExpr;
    fn sub(mut self, rhs: LinExpr) -> LinExpr {
        self -= &rhs;
        self
    }
}

impl Sub<&LinExpr> for &LinExpr {
    type Output = LinExpr;
    fn sub(self, rhs: &LinExpr) -> LinExpr {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for LinExpr {
    type Output = LinExpr;
    fn neg(self) -> LinExpr {
        self.scale(&-Q::one())
    }
}

impl Mul<&Q> for &LinExpr {
    type Output = LinExpr;
    fn mul(self, rhs: &Q) -> LinExpr {
        self.scale(rhs)
    }
}

impl fmt::Display for LinExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in &self.coeffs {
            let neg = c.is_negative();
            let mag = c.abs();
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            if !mag.is_one() {
                write!(f, "{}*", format_rational(&mag))?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        if first {
            return f.write_str(&format_rational(&self.constant));
        }
        if !self.constant.is_zero() {
            let sep = if self.constant.is_negative() { " - " } else { " + " };
            write!(f, "{sep}{}", format_rational(&self.constant.abs()))?;
        }
        Ok(())
    }
}

/// Relation of a constraint's expression to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Eq,
    Ge,
    Gt,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub expr: LinExpr,
    pub rel: Relation,
}

impl Constraint {
    pub fn eq(expr: LinExpr) -> Self {
        Constraint { expr, rel: Relation::Eq }
    }

    pub fn ge(expr: LinExpr) -> Self {
        Constraint { expr, rel: Relation::Ge }
    }

    pub fn gt(expr: LinExpr) -> Self {
        Constraint { expr, rel: Relation::Gt }
    }

    /// `lhs ⋈ rhs` for `⋈` one of `<, ≤, =, ≥, >`.
    pub fn compare(lhs: &LinExpr, cmp: Comparison, rhs: &LinExpr) -> Self {
        match cmp {
            Comparison::Lt => Constraint::gt(rhs - lhs),
            Comparison::Le => Constraint::ge(rhs - lhs),
            Comparison::Eq => Constraint::eq(lhs - rhs),
            Comparison::Ge => Constraint::ge(lhs - rhs),
            Comparison::Gt => Constraint::gt(lhs - rhs),
        }
    }

    pub fn holds_at(&self, point: &Witness) -> bool {
        let v = self.expr.eval(point);
        match self.rel {
            Relation::Eq => v.is_zero(),
            Relation::Ge => !v.is_negative(),
            Relation::Gt => v.is_positive(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Comparison {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Comparison {
    pub fn symbol(self) -> &'static str {
        match self {
            Comparison::Lt => "<",
            Comparison::Le => "<=",
            Comparison::Eq => "=",
            Comparison::Ge => ">=",
            Comparison::Gt => ">",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Comparison> {
        [Comparison::Lt, Comparison::Le, Comparison::Eq, Comparison::Ge, Comparison::Gt]
            .into_iter()
            .find(|c| c.symbol() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ConstraintSystem {
    constraints: Vec<Constraint>,
}

impl ConstraintSystem {
    pub fn new() -> Self {
        ConstraintSystem::default()
    }

    pub fn push(&mut self, c: Constraint) {
        self.constraints.push(c);
    }

    pub fn with(&self, c: Constraint) -> ConstraintSystem {
        let mut s = self.clone();
        s.push(c);
        s
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn variables(&self) -> BTreeSet<VarId> {
        self.constraints.iter().flat_map(|c| c.expr.variables()).collect()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.constraints.iter().all(|c| c.expr.constant_term().is_zero())
    }

    pub fn holds_at(&self, point: &Witness) -> bool {
        self.constraints.iter().all(|c| c.holds_at(point))
    }
}

impl FromIterator<Constraint> for ConstraintSystem {
    fn from_iter<I: IntoIterator<Item = Constraint>>(iter: I) -> Self {
        ConstraintSystem { constraints: iter.into_iter().collect() }
    }
}

impl Extend<Constraint> for ConstraintSystem {
    fn extend<I: IntoIterator<Item = Constraint>>(&mut self, iter: I) {
        self.constraints.extend(iter);
    }
}

/// An assignment of rationals to unknowns; absent unknowns are 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Witness(BTreeMap<VarId, Q>);

impl Witness {
    pub fn new() -> Self {
        Witness::default()
    }

    pub fn get(&self, v: VarId) -> Q {
        self.0.get(&v).cloned().unwrap_or_else(Q::zero)
    }

    pub fn set(&mut self, v: VarId, x: Q) {
        if x.is_zero() {
            self.0.remove(&v);
        } else {
            self.0.insert(v, x);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, &Q)> {
        self.0.iter().map(|(v, x)| (*v, x))
    }

    /// `self + λ (other − self)`.
    pub fn interpolate(&self, other: &Witness, lambda: &Q) -> Witness {
        let keys: BTreeSet<VarId> = self.0.keys().chain(other.0.keys()).copied().collect();
        let mut out = Witness::new();
        for v in keys {
            let a = self.get(v);
            let b = other.get(v);
            out.set(v, &a + lambda * (b - &a));
        }
        out
    }

    /// Positive rescaling to a primitive integer vector.
    pub fn primitive(&self) -> Witness {
        if self.0.is_empty() {
            return self.clone();
        }
        let lcm = self.0.values().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = self.0.values().map(|x| (x * Q::from_integer(lcm.clone())).to_integer()).collect();
        let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let mut out = Witness::new();
        for (v, x) in self.0.keys().zip(ints) {
            out.set(*v, Q::new(x, gcd.clone()));
        }
        out
    }
}

impl FromIterator<(VarId, Q)> for Witness {
    fn from_iter<I: IntoIterator<Item = (VarId, Q)>>(iter: I) -> Self {
        let mut w = Witness::new();
        for (v, x) in iter {
            w.set(v, x);
        }
        w
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Witness),
    Infeasible,
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Feasibility::Feasible(w) => Some(w),
            Feasibility::Infeasible => None,
        }
    }
}

/// Decides the system exactly. A returned witness satisfies every constraint,
/// strict ones strictly; witnesses of homogeneous systems are primitive
/// integer vectors.
pub fn feasible(system: &ConstraintSystem) -> Feasibility {
    let result = solve(system);
    if let Feasibility::Feasible(w) = &result {
        assert!(system.holds_at(w), "simplex witness failed exact re-check");
    }
    result
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ImpliedSign {
    Positive,
    Negative,
    Zero,
    Unknown,
}

/// What the system forces on the sign of `e`.
pub fn implied_sign(system: &ConstraintSystem, e: &LinExpr) -> ImpliedSign {
    if !feasible(&system.with(Constraint::ge(-e.clone()))).is_feasible() {
        return ImpliedSign::Positive;
    }
    if !feasible(&system.with(Constraint::ge(e.clone()))).is_feasible() {
        return ImpliedSign::Negative;
    }
    let below = feasible(&system.with(Constraint::gt(-e.clone()))).is_feasible();
    let above = feasible(&system.with(Constraint::gt(e.clone()))).is_feasible();
    if !below && !above {
        ImpliedSign::Zero
    } else {
        ImpliedSign::Unknown
    }
}

fn solve(system: &ConstraintSystem) -> Feasibility {
    // Eliminate equalities; each substitution is in terms of unknowns not yet eliminated.
    let mut subs: Vec<(VarId, LinExpr)> = Vec::new();
    let apply = |e: &LinExpr, subs: &[(VarId, LinExpr)]| subs.iter().fold(e.clone(), |acc, (v, by)| acc.substitute(*v, by));
    for c in system.constraints.iter().filter(|c| c.rel == Relation::Eq) {
        let e = apply(&c.expr, &subs);
        let lead = e.terms().next().map(|(v, c)| (v, c.clone()));
        match lead {
            None if e.constant_term().is_zero() => {}
            None => return Feasibility::Infeasible,
            Some((v, coef)) => {
                let mut rest = e;
                rest.coeffs.remove(&v);
                let by = rest.scale(&(-Q::one() / coef));
                subs.push((v, by));
            }
        }
    }
    let mut rows: Vec<(LinExpr, bool)> = Vec::new();
    for c in system.constraints.iter().filter(|c| c.rel != Relation::Eq) {
        let e = apply(&c.expr, &subs);
        let strict = c.rel == Relation::Gt;
        if e.is_constant() {
            let v = e.constant_term();
            if v.is_negative() || (strict && v.is_zero()) {
                return Feasibility::Infeasible;
            }
            continue;
        }
        rows.push((e, strict));
    }
    let free: Vec<VarId> = rows.iter().flat_map(|(e, _)| e.variables()).collect::<BTreeSet<_>>().into_iter().collect();
    let point = match simplex_point(&free, &rows) {
        Some(p) => p,
        None => return Feasibility::Infeasible,
    };
    let mut w: Witness = free.iter().copied().zip(point).collect();
    for (v, by) in subs.iter().rev() {
        let x = by.eval(&w);
        w.set(*v, x);
    }
    if system.is_homogeneous() {
        w = w.primitive();
    }
    Feasibility::Feasible(w)
}

/// Finds `x` with `e(x) ≥ 0` for every row, `> 0` for strict rows.
fn simplex_point(free: &[VarId], rows: &[(LinExpr, bool)]) -> Option<Vec<Q>> {
    let d = free.len();
    let any_strict = rows.iter().any(|(_, s)| *s);
    // Columns: p_1..p_d, q_1..q_d (x = p − q), then t if strict rows exist.
    let nstruct = 2 * d + usize::from(any_strict);
    let t_col = 2 * d;
    let mut a: Vec<Vec<Q>> = Vec::with_capacity(rows.len() + 1);
    let mut b: Vec<Q> = Vec::with_capacity(rows.len() + 1);
    for (e, strict) in rows {
        // e = c·x + k ≥ s·t  ⇔  −c·p + c·q + s·t ≤ k
        let mut row = vec![Q::zero(); nstruct];
        for (k, v) in free.iter().enumerate() {
            let c = e.coeff(*v);
            if !c.is_zero() {
                row[k] = -c.clone();
                row[d + k] = c;
            }
        }
        if *strict {
            row[t_col] = Q::one();
        }
        a.push(row);
        b.push(e.constant_term().clone());
    }
    if any_strict {
        let mut row = vec![Q::zero(); nstruct];
        row[t_col] = Q::one();
        a.push(row);
        b.push(Q::one());
    }
    let mut objective = vec![Q::zero(); nstruct];
    if any_strict {
        objective[t_col] = Q::one();
    }
    let z = Tableau::new(a, b).maximize(&objective)?;
    if any_strict && !z[t_col].is_positive() {
        return None;
    }
    Some((0..d).map(|k| &z[k] - &z[d + k]).collect())
}

/// Dense simplex tableau for `max c·z` s.t. `A z ≤ b`, `z ≥ 0`, with one
/// slack column per row. Pivoting follows Bland's rule throughout.
struct Tableau {
    rows: Vec<Vec<Q>>,
    rhs: Vec<Q>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn new(a: Vec<Vec<Q>>, b: Vec<Q>) -> Tableau {
        let m = a.len();
        let nstruct = a.first().map_or(0, |r| r.len());
        // Column layout: structural, slacks, artificial x0.
        let ncols = nstruct + m + 1;
        let mut rows = Vec::with_capacity(m);
        for (i, mut r) in a.into_iter().enumerate() {
            r.resize(ncols, Q::zero());
            r[nstruct + i] = Q::one();
            r[ncols - 1] = -Q::one();
            rows.push(r);
        }
        Tableau { rows, rhs: b, basis: (0..m).map(|i| nstruct + i).collect(), ncols }
    }

    fn pivot(&mut self, r: usize, e: usize, obj: &mut [Q], obj_val: &mut Q) {
        let p = self.rows[r][e].clone();
        if !p.is_one() {
            for x in self.rows[r].iter_mut() {
                *x /= &p;
            }
            self.rhs[r] /= &p;
        }
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][e].is_zero() {
                continue;
            }
            let f = self.rows[i][e].clone();
            for (x, y) in self.rows[i].iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        if !obj[e].is_zero() {
            let f = obj[e].clone();
            for (x, y) in obj.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            *obj_val += &f * &prhs;
        }
        self.basis[r] = e;
    }

    /// Runs Bland-rule iterations on `obj` over the allowed columns.
    /// Returns false if the objective is unbounded.
    fn optimize(&mut self, obj: &mut [Q], obj_val: &mut Q, allowed: usize) -> bool {
        loop {
            let Some(e) = (0..allowed).find(|&j| obj[j].is_positive()) else {
                return true;
            };
            let mut best: Option<(usize, Q)> = None;
            for i in 0..self.rows.len() {
                let c = &self.rows[i][e];
                if !c.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / c;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                None => return false,
                Some((r, _)) => self.pivot(r, e, obj, obj_val),
            }
        }
    }

    fn maximize(mut self, c: &[Q]) -> Option<Vec<Q>> {
        let x0 = self.ncols - 1;
        let m = self.rows.len();
        // Phase 1: drive the artificial x0 to zero.
        if let Some(r) = (0..m).filter(|&i| self.rhs[i].is_negative()).min_by(|&i, &j| self.rhs[i].cmp(&self.rhs[j]).then(i.cmp(&j))) {
            let mut obj = vec![Q::zero(); self.ncols];
            obj[x0] = -Q::one();
            let mut val = Q::zero();
            self.pivot(r, x0, &mut obj, &mut val);
            self.optimize(&mut obj, &mut val, self.ncols);
            if !val.is_zero() {
                return None;
            }
            if let Some(r) = self.basis.iter().position(|&v| v == x0) {
                let e = (0..x0).find(|&j| !self.rows[r][j].is_zero()).expect("x0 row has a nonzero entry");
                self.pivot(r, e, &mut obj, &mut val);
            }
        }
        for r in self.rows.iter_mut() {
            r[x0] = Q::zero();
        }
        // Phase 2.
        let mut obj = vec![Q::zero(); self.ncols];
        obj[..c.len()].clone_from_slice(c);
        let mut val = Q::zero();
        for i in 0..m {
            let bv = self.basis[i];
            if !obj[bv].is_zero() {
                let f = obj[bv].clone();
                for (x, y) in obj.iter_mut().zip(&self.rows[i]) {
                    *x -= &f * y;
                }
                val += &f * &self.rhs[i];
            }
        }
        self.optimize(&mut obj, &mut val, x0);
        let mut z = vec![Q::zero(); c.len()];
        for (i, &bv) in self.basis.iter().enumerate() {
            if bv < c.len() {
                z[bv] = self.rhs[i].clone();
            }
        }
        Some(z)
    }
}
