//! Decision procedures for the three reality filters (1-generation,
//! 2-generation, actualization), for a fixed q-measure or existentially over
//! all q-measures.
//!
//! The q-integral is affine on every cell of a weak ordering of its integrand
//! values, so the search walks those cells depth first, keeps the cell's
//! constraints in a [`BranchContext`] and asks [`crate::linfeas`] whether the
//! event equations remain satisfiable.

use std::collections::HashMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::integral::{
    density2_pairs, iterated_2gen, iterated_actualize, q_integral_over, Density, Density1, Density2, DensityFile,
};
use crate::linfeas::{feasible, Comparison, Constraint, ConstraintSystem, LinExpr, VarId, Witness};
use crate::logic::{Coevent, Event, LogicError, SampleSpace, TruthFunction};
use crate::measure::{is_preclusive, validate, MeasureFile, QMeasure};
use crate::rational::{int, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterMode {
    Gen1,
    Gen2,
    Actualize,
}

impl FilterMode {
    pub const ALL: [FilterMode; 3] = [FilterMode::Gen1, FilterMode::Gen2, FilterMode::Actualize];

    pub fn name(self) -> &'static str {
        match self {
            FilterMode::Gen1 => "gen1",
            FilterMode::Gen2 => "gen2",
            FilterMode::Actualize => "actualize",
        }
    }
}

impl fmt::Display for FilterMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for FilterMode {
    type Err = FilterError;

    fn from_str(s: &str) -> Result<FilterMode, FilterError> {
        FilterMode::ALL
            .into_iter()
            .find(|m| m.name() == s.trim())
            .ok_or_else(|| FilterError::UnknownMode(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MeasureSpec {
    Fixed(QMeasure),
    Existential,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationProblem {
    phi: Coevent,
    mode: FilterMode,
    measure: MeasureSpec,
}

impl GenerationProblem {
    pub fn new(phi: Coevent, mode: FilterMode, measure: MeasureSpec) -> Result<Self, FilterError> {
        if let MeasureSpec::Fixed(mu) = &measure {
            mu.space().check_same(phi.space())?;
        }
        Ok(GenerationProblem { phi, mode, measure })
    }

    pub fn existential(phi: Coevent, mode: FilterMode) -> Self {
        GenerationProblem { phi, mode, measure: MeasureSpec::Existential }
    }

    pub fn phi(&self) -> &Coevent {
        &self.phi
    }

    pub fn mode(&self) -> FilterMode {
        self.mode
    }

    pub fn measure(&self) -> &MeasureSpec {
        &self.measure
    }

    pub fn space(&self) -> SampleSpace {
        self.phi.space()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FilterError {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error("branch limit of {limit} exceeded")]
    BranchLimit { limit: u64 },
    #[error("criterion is defined for n = 3 only (got n = {0})")]
    NotThreeElements(usize),
    #[error("unknown filter mode {0:?}")]
    UnknownMode(String),
    #[error("verdict file: {0}")]
    Format(String),
}

/// How each comparison of two integrand values is split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BranchRule {
    /// Three relatively open arms `<`, `=`, `>`.
    #[default]
    WeakOrder,
    /// Two closed arms `≤`, `≥`; sound because the q-integral is continuous.
    ClosedCones,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub max_branches: u64,
    pub rule: BranchRule,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { max_branches: 20_000_000, rule: BranchRule::WeakOrder }
    }
}

/// One recorded comparison: `lhs relation rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry(pub String, pub String, pub String);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibleWitness {
    pub density: Density,
    /// Present for existential problems.
    pub measure: Option<QMeasure>,
    pub trace: Vec<TraceEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Feasible(FeasibleWitness),
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterVerdict {
    pub mode: FilterMode,
    pub outcome: Outcome,
    pub branches_explored: u64,
}

impl FilterVerdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self.outcome, Outcome::Feasible(_))
    }

    pub fn witness(&self) -> Option<&FeasibleWitness> {
        match &self.outcome {
            Outcome::Feasible(w) => Some(w),
            Outcome::Infeasible => None,
        }
    }
}

/// Constraints accumulated along one branch, a point strictly inside them,
/// and the comparisons decided so far.
#[derive(Debug, Clone)]
pub struct BranchContext {
    system: ConstraintSystem,
    point: Witness,
    trace: Vec<(LinExpr, LinExpr, Comparison)>,
    /// Normalized difference → decided relation to 0.
    memo: HashMap<LinExpr, Comparison>,
}

impl BranchContext {
    /// Context for a system with a known strictly feasible point, or `None`
    /// if the system is infeasible.
    pub fn new(system: ConstraintSystem) -> Option<Self> {
        let point = feasible(&system).witness()?.clone();
        let mut ctx = BranchContext { system, point, trace: Vec::new(), memo: HashMap::new() };
        let strict: Vec<LinExpr> = ctx
            .system
            .constraints()
            .iter()
            .filter(|c| c.rel == crate::linfeas::Relation::Gt)
            .map(|c| c.expr.clone())
            .collect();
        for e in strict {
            ctx.remember(&e, Comparison::Gt);
        }
        Some(ctx)
    }

    pub fn system(&self) -> &ConstraintSystem {
        &self.system
    }

    pub fn point(&self) -> &Witness {
        &self.point
    }

    pub fn trace(&self) -> impl Iterator<Item = TraceEntry> + '_ {
        self.trace.iter().map(|(a, b, c)| TraceEntry(a.to_string(), b.to_string(), c.symbol().to_string()))
    }

    fn remember(&mut self, d: &LinExpr, rel: Comparison) {
        let (n, flip) = d.normalized();
        self.memo.insert(n, if flip { flip_cmp(rel) } else { rel });
    }

    fn recall(&self, d: &LinExpr) -> Option<Comparison> {
        let (n, flip) = d.normalized();
        self.memo.get(&n).map(|&r| if flip { flip_cmp(r) } else { r })
    }

    /// Adds constraints, keeping the context only if they stay satisfiable.
    fn constrain(mut self, cs: Vec<Constraint>, ex: &mut Explorer) -> Option<Self> {
        let satisfied = cs.iter().all(|c| c.holds_at(&self.point));
        self.system.extend(cs);
        if !satisfied {
            self.point = ex.solve(&self.system)?;
        }
        Some(self)
    }
}

fn flip_cmp(c: Comparison) -> Comparison {
    match c {
        Comparison::Lt => Comparison::Gt,
        Comparison::Le => Comparison::Ge,
        Comparison::Eq => Comparison::Eq,
        Comparison::Ge => Comparison::Le,
        Comparison::Gt => Comparison::Lt,
    }
}

/// Does a decided relation of `d` to 0 settle the arm `arm`?
fn settles(known: Comparison, arm: Comparison) -> Option<bool> {
    use Comparison::*;
    match (known, arm) {
        (k, a) if k == a => Some(true),
        (Gt, Lt | Eq | Le) | (Lt, Gt | Eq | Ge) | (Eq, Lt | Gt) => Some(false),
        (Gt, Ge) | (Lt, Le) | (Eq, Le | Ge) => Some(true),
        (Ge, Lt) | (Le, Gt) => Some(false),
        _ => None,
    }
}

/// Search bookkeeping: branch count and its limit.
struct Explorer {
    explored: u64,
    limit: u64,
    rule: BranchRule,
}

impl Explorer {
    fn unlimited(rule: BranchRule) -> Self {
        Explorer { explored: 0, limit: u64::MAX, rule }
    }

    fn tick(&mut self) -> Result<(), FilterError> {
        self.explored += 1;
        if self.explored > self.limit {
            return Err(FilterError::BranchLimit { limit: self.limit });
        }
        Ok(())
    }

    fn solve(&mut self, system: &ConstraintSystem) -> Option<Witness> {
        feasible(system).witness().cloned()
    }

    /// Feasible arms of comparing `a` with `b`, in arm order.
    fn compare(
        &mut self,
        ctx: &BranchContext,
        a: &LinExpr,
        b: &LinExpr,
        nonneg: bool,
    ) -> Result<Vec<(Comparison, BranchContext)>, FilterError> {
        let d = a - b;
        let arms: &[Comparison] = match (self.rule, nonneg) {
            (BranchRule::WeakOrder, false) => &[Comparison::Lt, Comparison::Eq, Comparison::Gt],
            (BranchRule::WeakOrder, true) => &[Comparison::Eq, Comparison::Gt],
            (BranchRule::ClosedCones, _) => &[Comparison::Le, Comparison::Ge],
        };
        let known = if d.is_constant() {
            Some(match d.constant_term() {
                c if c.is_zero() => Comparison::Eq,
                c if c.is_positive() => Comparison::Gt,
                _ => Comparison::Lt,
            })
        } else {
            ctx.recall(&d)
        };
        let mut live: Vec<bool> = vec![true; arms.len()];
        if let Some(k) = known {
            if let Some(&arm) = arms.iter().find(|&&arm| settles(k, arm) == Some(true)) {
                return Ok(vec![(arm, ctx.clone())]);
            }
            for (slot, &arm) in arms.iter().enumerate() {
                live[slot] = settles(k, arm) != Some(false);
            }
        }
        let mut points: Vec<Option<Witness>> = vec![None; arms.len()];
        for (slot, &arm) in arms.iter().enumerate() {
            if live[slot] && arm_constraint(&d, arm).holds_at(&ctx.point) {
                points[slot] = Some(ctx.point.clone());
            }
        }
        // Solve the arms the current point does not witness; an `=` arm
        // between two strict witnesses is their interpolation.
        let eq_slot = arms.iter().position(|&a| a == Comparison::Eq);
        for (slot, &arm) in arms.iter().enumerate() {
            if !live[slot] || points[slot].is_some() || Some(slot) == eq_slot {
                continue;
            }
            points[slot] = self.solve(&ctx.system.with(arm_constraint(&d, arm)));
        }
        if let Some(es) = eq_slot.filter(|&es| live[es] && points[es].is_none()) {
            let lt = arms.iter().position(|&a| a == Comparison::Lt).and_then(|s| points[s].clone());
            let gt = arms.iter().position(|&a| a == Comparison::Gt).and_then(|s| points[s].clone());
            points[es] = match (lt, gt) {
                (Some(p), Some(q)) => Some(between(&d, &p, &q)),
                _ => self.solve(&ctx.system.with(arm_constraint(&d, Comparison::Eq))),
            };
        }
        let mut out = Vec::new();
        for (slot, &arm) in arms.iter().enumerate() {
            let Some(point) = points[slot].take() else { continue };
            self.tick()?;
            let mut child = ctx.clone();
            child.system.push(arm_constraint(&d, arm));
            child.point = point;
            child.trace.push((a.clone(), b.clone(), arm));
            child.remember(&d, arm);
            out.push((arm, child));
        }
        Ok(out)
    }
}

fn arm_constraint(d: &LinExpr, arm: Comparison) -> Constraint {
    Constraint::compare(d, arm, &LinExpr::zero())
}

/// The point on segment `[p, q]` where `d` vanishes.
fn between(d: &LinExpr, p: &Witness, q: &Witness) -> Witness {
    let dp = d.eval(p);
    let dq = d.eval(q);
    let lambda = &dp / (&dp - &dq);
    let w = p.interpolate(q, &lambda);
    debug_assert!(d.eval(&w).is_zero());
    w
}

/// Tie class of integrand values: representative and member elements.
#[derive(Debug, Clone)]
struct Class {
    rep: LinExpr,
    members: Event,
}

/// Symbolic q-integral of `Σ values` against `φ`: every weak ordering of the
/// value expressions consistent with `ctx`, with the integral's affine value
/// on that ordering. Value expressions must be nonnegative on `ctx`.
pub fn symbolic_q_integral<T: TruthFunction + ?Sized>(
    values: &[(LinExpr, usize)],
    phi: &T,
    ctx: &BranchContext,
    rule: BranchRule,
) -> Vec<(LinExpr, BranchContext)> {
    let mut ex = Explorer::unlimited(rule);
    sym_integral(values, phi, ctx, &mut ex).expect("unlimited search")
}

fn sym_integral<T: TruthFunction + ?Sized>(
    values: &[(LinExpr, usize)],
    phi: &T,
    ctx: &BranchContext,
    ex: &mut Explorer,
) -> Result<Vec<(LinExpr, BranchContext)>, FilterError> {
    let zero = Class { rep: LinExpr::zero(), members: Event::EMPTY };
    let mut partial = vec![(vec![zero], ctx.clone())];
    for (v, w) in values {
        let mut next = Vec::new();
        for (classes, c) in partial {
            insert_value(classes, c, v, *w, 0, ex, &mut next)?;
        }
        partial = next;
    }
    Ok(partial
        .into_iter()
        .map(|(classes, c)| (layered_value(&classes, phi), c))
        .collect())
}

fn insert_value(
    classes: Vec<Class>,
    ctx: BranchContext,
    v: &LinExpr,
    w: usize,
    at: usize,
    ex: &mut Explorer,
    out: &mut Vec<(Vec<Class>, BranchContext)>,
) -> Result<(), FilterError> {
    if ex.rule == BranchRule::ClosedCones && at == 0 {
        return insert_value(classes, ctx, v, w, 1, ex, out);
    }
    if at == classes.len() {
        let mut cl = classes;
        cl.push(Class { rep: v.clone(), members: Event::EMPTY.with(w) });
        out.push((cl, ctx));
        return Ok(());
    }
    let arms = ex.compare(&ctx, v, &classes[at].rep, at == 0)?;
    for (arm, child) in arms {
        match arm {
            Comparison::Lt | Comparison::Le => {
                let mut cl = classes.clone();
                cl.insert(at, Class { rep: v.clone(), members: Event::EMPTY.with(w) });
                out.push((cl, child));
            }
            Comparison::Eq => {
                let mut cl = classes.clone();
                cl[at].members = cl[at].members.with(w);
                out.push((cl, child));
            }
            Comparison::Gt | Comparison::Ge => insert_value(classes.clone(), child, v, w, at + 1, ex, out)?,
        }
    }
    Ok(())
}

/// `Σ_j (α_j − α_{j−1}) φ(L_j)` over the classes above the zero class.
fn layered_value<T: TruthFunction + ?Sized>(classes: &[Class], phi: &T) -> LinExpr {
    let mut total = LinExpr::zero();
    let mut above = classes.iter().skip(1).fold(Event::EMPTY, |e, c| e.union(c.members));
    for k in 1..classes.len() {
        if phi.value(above) {
            total += &(&classes[k].rep - &classes[k - 1].rep);
        }
        above = above.difference(classes[k].members);
    }
    total
}

fn density_var(mode: FilterMode, i: usize, j: usize) -> VarId {
    match mode {
        FilterMode::Gen1 => VarId::Density1(i),
        _ => VarId::density2(i, j),
    }
}

fn density_vars(mode: FilterMode, n: usize) -> Vec<VarId> {
    match mode {
        FilterMode::Gen1 => (1..=n).map(VarId::Density1).collect(),
        _ => density2_pairs(n).into_iter().map(|(i, j)| VarId::density2(i, j)).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stage {
    /// `g_A(ω') = ∫_A f(·, ω') dφ`.
    Inner(Event, usize),
    /// The event's integral from the integrand values gathered so far.
    Outer(Event),
    Constrain(Event),
}

fn stages(mode: FilterMode, space: SampleSpace) -> Vec<Stage> {
    let mut out = Vec::new();
    for a in space.events_by_size().into_iter().filter(|e| !e.is_empty()) {
        match mode {
            FilterMode::Gen1 => {}
            FilterMode::Gen2 => out.extend(a.members().map(|w| Stage::Inner(a, w))),
            FilterMode::Actualize => out.extend(space.elements().map(|w| Stage::Inner(a, w))),
        }
        out.push(Stage::Outer(a));
        out.push(Stage::Constrain(a));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Goal<'a> {
    Fixed(&'a QMeasure),
    Existential,
    Enumerate,
}

#[derive(Debug, Clone)]
struct Node {
    ctx: BranchContext,
    mu: Vec<LinExpr>,
    inner: Vec<(LinExpr, usize)>,
}

/// A cell of the case analysis: the region's constraints and the induced
/// measure's affine expression on every event (bitmask order).
#[derive(Debug, Clone)]
pub struct Leaf {
    pub system: ConstraintSystem,
    pub values: Vec<LinExpr>,
}

struct Search<'a> {
    phi: &'a Coevent,
    mode: FilterMode,
    goal: Goal<'a>,
    stages: Vec<Stage>,
    ex: Explorer,
    leaves: Vec<Leaf>,
}

impl Search<'_> {
    fn run(&mut self, node: Node, k: usize) -> Result<Option<Node>, FilterError> {
        let Some(&stage) = self.stages.get(k) else {
            if self.goal == Goal::Enumerate {
                self.leaves.push(Leaf { system: node.ctx.system.clone(), values: node.mu });
                return Ok(None);
            }
            return Ok(Some(node));
        };
        match stage {
            Stage::Inner(a, col) => {
                let items: Vec<(LinExpr, usize)> =
                    a.members().map(|w| (LinExpr::var(density_var(self.mode, w, col)), w)).collect();
                for (value, ctx) in sym_integral(&items, self.phi, &node.ctx, &mut self.ex)? {
                    let mut child = Node { ctx, mu: node.mu.clone(), inner: node.inner.clone() };
                    child.inner.push((value, col));
                    if let Some(found) = self.run(child, k + 1)? {
                        return Ok(Some(found));
                    }
                }
                Ok(None)
            }
            Stage::Outer(a) => {
                let items: Vec<(LinExpr, usize)> = match self.mode {
                    FilterMode::Gen1 => a.members().map(|w| (LinExpr::var(VarId::Density1(w)), w)).collect(),
                    _ => node.inner.clone(),
                };
                for (value, ctx) in sym_integral(&items, self.phi, &node.ctx, &mut self.ex)? {
                    let mut child = Node { ctx, mu: node.mu.clone(), inner: Vec::new() };
                    child.mu[a.index()] = value;
                    if let Some(found) = self.run(child, k + 1)? {
                        return Ok(Some(found));
                    }
                }
                Ok(None)
            }
            Stage::Constrain(a) => {
                let expr = node.mu[a.index()].clone();
                let cs = match self.goal {
                    Goal::Fixed(mu) => vec![Constraint::eq(&expr - &LinExpr::constant(mu.get(a).clone()))],
                    Goal::Existential => {
                        let mut cs = vec![Constraint::ge(expr.clone())];
                        if a.len() >= 3 {
                            let single = |i: usize| node.mu[Event::singleton(i).index()].clone();
                            let pair = |i: usize, j: usize| node.mu[Event::pair(i, j).index()].clone();
                            cs.push(Constraint::eq(&expr - &expansion_expr(a, single, pair)));
                        }
                        cs
                    }
                    Goal::Enumerate => Vec::new(),
                };
                let Node { ctx, mu, inner } = node;
                match ctx.constrain(cs, &mut self.ex) {
                    Some(ctx) => self.run(Node { ctx, mu, inner }, k + 1),
                    None => Ok(None),
                }
            }
        }
    }
}

/// Grade-2 expansion over affine expressions.
fn expansion_expr(a: Event, single: impl Fn(usize) -> LinExpr, pair: impl Fn(usize, usize) -> LinExpr) -> LinExpr {
    let members: Vec<usize> = a.members().collect();
    let mut total = LinExpr::zero();
    for (k, &i) in members.iter().enumerate() {
        for &j in &members[k + 1..] {
            total += &pair(i, j);
        }
    }
    let m = int(members.len() as i64 - 2);
    for &i in &members {
        total -= &single(i).scale(&m);
    }
    total
}

fn initial_context(mode: FilterMode, n: usize) -> BranchContext {
    let system: ConstraintSystem = density_vars(mode, n).into_iter().map(|v| Constraint::gt(LinExpr::var(v))).collect();
    BranchContext::new(system).expect("positive orthant is nonempty")
}

/// Decides a generation problem by exhaustive case analysis.
pub fn decide(problem: &GenerationProblem, options: &SearchOptions) -> Result<FilterVerdict, FilterError> {
    let space = problem.space();
    let goal = match &problem.measure {
        MeasureSpec::Fixed(mu) => Goal::Fixed(mu),
        MeasureSpec::Existential => Goal::Existential,
    };
    let mut search = Search {
        phi: &problem.phi,
        mode: problem.mode,
        goal,
        stages: stages(problem.mode, space),
        ex: Explorer { explored: 0, limit: options.max_branches, rule: options.rule },
        leaves: Vec::new(),
    };
    let root = Node { ctx: initial_context(problem.mode, space.n()), mu: vec![LinExpr::zero(); space.num_events()], inner: Vec::new() };
    let found = search.run(root, 0)?;
    let outcome = match found {
        None => Outcome::Infeasible,
        Some(node) => Outcome::Feasible(leaf_witness(problem, node)),
    };
    let verdict = FilterVerdict { mode: problem.mode, outcome, branches_explored: search.ex.explored };
    if verdict.is_feasible() {
        assert!(verify_witness(&verdict, problem), "solver produced a witness that fails re-verification");
    }
    Ok(verdict)
}

fn leaf_witness(problem: &GenerationProblem, node: Node) -> FeasibleWitness {
    let space = problem.space();
    let point = feasible(&node.ctx.system).witness().cloned().expect("leaf context is feasible");
    let density = match problem.mode {
        FilterMode::Gen1 => Density::One(
            Density1::new(space.elements().map(|w| point.get(VarId::Density1(w))).collect()).expect("positive density"),
        ),
        _ => Density::Two(
            Density2::from_fn(space.n(), |i, j| point.get(VarId::density2(i, j))).expect("positive density"),
        ),
    };
    let measure = match problem.measure {
        MeasureSpec::Fixed(_) => None,
        MeasureSpec::Existential => {
            let values = node.mu.iter().map(|e| e.eval(&point)).collect();
            Some(validate(space, values).expect("induced measure is a q-measure"))
        }
    };
    FeasibleWitness { density, measure, trace: node.ctx.trace().collect() }
}

/// Every cell of the case analysis for `φ` under `mode`, without measure
/// constraints.
pub fn enumerate_leaves(phi: &Coevent, mode: FilterMode, options: &SearchOptions) -> Result<Vec<Leaf>, FilterError> {
    let space = phi.space();
    let mut search = Search {
        phi,
        mode,
        goal: Goal::Enumerate,
        stages: stages(mode, space),
        ex: Explorer { explored: 0, limit: options.max_branches, rule: options.rule },
        leaves: Vec::new(),
    };
    let root = Node { ctx: initial_context(mode, space.n()), mu: vec![LinExpr::zero(); space.num_events()], inner: Vec::new() };
    search.run(root, 0)?;
    Ok(search.leaves)
}

pub fn check_1generated(phi: &Coevent, mu: &QMeasure) -> Result<FilterVerdict, FilterError> {
    decide(&GenerationProblem::new(*phi, FilterMode::Gen1, MeasureSpec::Fixed(mu.clone()))?, &SearchOptions::default())
}

pub fn check_1generated_existential(phi: &Coevent) -> Result<FilterVerdict, FilterError> {
    decide(&GenerationProblem::existential(*phi, FilterMode::Gen1), &SearchOptions::default())
}

pub fn check_2generated(phi: &Coevent, mu: &QMeasure) -> Result<FilterVerdict, FilterError> {
    decide(&GenerationProblem::new(*phi, FilterMode::Gen2, MeasureSpec::Fixed(mu.clone()))?, &SearchOptions::default())
}

pub fn check_2generated_existential(phi: &Coevent) -> Result<FilterVerdict, FilterError> {
    decide(&GenerationProblem::existential(*phi, FilterMode::Gen2), &SearchOptions::default())
}

pub fn check_actualized(phi: &Coevent, mu: &QMeasure) -> Result<FilterVerdict, FilterError> {
    decide(
        &GenerationProblem::new(*phi, FilterMode::Actualize, MeasureSpec::Fixed(mu.clone()))?,
        &SearchOptions::default(),
    )
}

pub fn check_actualized_existential(phi: &Coevent) -> Result<FilterVerdict, FilterError> {
    decide(&GenerationProblem::existential(*phi, FilterMode::Actualize), &SearchOptions::default())
}

/// The measure `A ↦ (filter integral of the density over A)`, evaluated
/// concretely.
pub fn induced_values(phi: &Coevent, mode: FilterMode, density: &Density) -> Option<Vec<Q>> {
    let space = phi.space();
    space
        .events()
        .map(|a| match (mode, density) {
            (FilterMode::Gen1, Density::One(f)) => q_integral_over(f, phi, a).ok(),
            (FilterMode::Gen2, Density::Two(f)) => iterated_2gen(f, phi, a).ok(),
            (FilterMode::Actualize, Density::Two(f)) => iterated_actualize(f, phi, a).ok(),
            _ => None,
        })
        .collect()
}

/// Re-checks a feasible verdict by direct integration.
pub fn verify_witness(verdict: &FilterVerdict, problem: &GenerationProblem) -> bool {
    let Some(w) = verdict.witness() else { return false };
    if verdict.mode != problem.mode {
        return false;
    }
    let positive = match &w.density {
        Density::One(f) => f.is_strictly_positive() && f.space() == problem.space(),
        Density::Two(f) => f.is_strictly_positive() && f.space() == problem.space(),
    };
    if !positive {
        return false;
    }
    let target = match (&problem.measure, &w.measure) {
        (MeasureSpec::Fixed(mu), None) => mu,
        (MeasureSpec::Fixed(mu), Some(m)) if m == mu => mu,
        (MeasureSpec::Existential, Some(m)) if m.space() == problem.space() => m,
        _ => return false,
    };
    match induced_values(&problem.phi, problem.mode, &w.density) {
        Some(values) => values.as_slice() == target.values(),
        None => false,
    }
}

/// Integer criterion at n = 3: some `b ∈ {1,2,3}` and `ω₀` with
/// `φ(Ω) + b·φ(ω₀) = Σ_{i<j} φ({i,j}) − Σ_i φ({i})`.
pub fn integer_gen1_criterion(phi: &Coevent) -> Result<bool, FilterError> {
    let space = phi.space();
    if space.n() != 3 {
        return Err(FilterError::NotThreeElements(space.n()));
    }
    let v = |e: Event| i64::from(phi.value(e));
    let singles: i64 = space.elements().map(|i| v(Event::singleton(i))).sum();
    let pairs: i64 = crate::logic::element_pairs(space).into_iter().map(|(i, j)| v(Event::pair(i, j))).sum();
    let rhs = pairs - singles;
    let full = v(space.full());
    Ok((1..=3).any(|b| space.elements().any(|w| full + b * v(Event::singleton(w)) == rhs)))
}

/// `g(ω, ω') = f(ω) f(ω') / μ(Ω)` from a 1-generation witness.
pub fn induced_actualizing_density(f: &Density1, total: &Q) -> Option<Density2> {
    if total.is_zero() {
        return None;
    }
    Density2::outer_product(f, total).ok()
}

/// Verdict file layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictFile {
    pub mode: FilterMode,
    pub outcome: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coevent: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<DensityFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<MeasureFile>,
    #[serde(default)]
    pub trace: Vec<TraceEntry>,
    #[serde(default)]
    pub branches_explored: u64,
}

impl VerdictFile {
    pub fn from_verdict(verdict: &FilterVerdict, phi: Option<&Coevent>) -> Self {
        let (outcome, density, measure, trace) = match &verdict.outcome {
            Outcome::Infeasible => ("infeasible", None, None, Vec::new()),
            Outcome::Feasible(w) => (
                "feasible",
                Some(match &w.density {
                    Density::One(f) => DensityFile::from_density1(f),
                    Density::Two(f) => DensityFile::from_density2(f),
                }),
                w.measure.as_ref().map(MeasureFile::from_measure),
                w.trace.clone(),
            ),
        };
        VerdictFile {
            mode: verdict.mode,
            outcome: outcome.to_string(),
            coevent: phi.map(|p| p.to_string()),
            n: phi.map(|p| p.space().n()),
            density,
            measure,
            trace,
            branches_explored: verdict.branches_explored,
        }
    }

    pub fn into_verdict(self) -> Result<FilterVerdict, FilterError> {
        let outcome = match self.outcome.as_str() {
            "infeasible" => Outcome::Infeasible,
            "feasible" => {
                let density = self
                    .density
                    .ok_or_else(|| FilterError::Format("feasible verdict without density".into()))?
                    .into_density()
                    .map_err(|e| FilterError::Format(e.to_string()))?;
                let measure = self
                    .measure
                    .map(|m| m.into_measure())
                    .transpose()
                    .map_err(|e| FilterError::Format(e.to_string()))?;
                Outcome::Feasible(FeasibleWitness { density, measure, trace: self.trace })
            }
            other => return Err(FilterError::Format(format!("unknown outcome {other:?}"))),
        };
        Ok(FilterVerdict { mode: self.mode, outcome, branches_explored: self.branches_explored })
    }
}

pub fn verdict_to_json(verdict: &FilterVerdict, phi: Option<&Coevent>) -> String {
    serde_json::to_string_pretty(&VerdictFile::from_verdict(verdict, phi)).expect("serializable")
}

pub fn verdict_from_json(text: &str) -> Result<FilterVerdict, FilterError> {
    let file: VerdictFile = serde_json::from_str(text).map_err(|e| FilterError::Format(e.to_string()))?;
    file.into_verdict()
}

/// Whether `φ` vanishes on every event the verdict's measure precludes.
pub fn witness_is_preclusive(problem: &GenerationProblem, verdict: &FilterVerdict) -> Option<bool> {
    let w = verdict.witness()?;
    let mu = match (&problem.measure, &w.measure) {
        (MeasureSpec::Fixed(mu), _) => mu,
        (MeasureSpec::Existential, Some(m)) => m,
        _ => return None,
    };
    is_preclusive(&problem.phi, mu).ok().map(|p| p.preclusive)
}
