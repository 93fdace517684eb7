//! Brute-force oracles that share no code path with the decision procedures
//! they check.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use qreality::linfeas::{Constraint, ConstraintSystem, LinExpr, Relation, VarId};
use qreality::logic::{Event, TruthFunction};
use qreality::rational::{int, Q};
use rand::Rng;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Row {
    a: Vec<Q>,
    b: Q,
    strict: bool,
}

fn normalize(mut r: Row) -> Row {
    if let Some(lead) = r.a.iter().find(|x| !x.is_zero()).cloned() {
        let s = lead.abs();
        r.a.iter_mut().for_each(|x| *x /= &s);
        r.b /= &s;
    }
    r
}

/// Fourier–Motzkin elimination with strictness tracking over the free
/// unknowns `x0 … x(d-1)`.
pub fn fm_feasible(d: usize, sys: &ConstraintSystem) -> bool {
    let to_row = |c: &Constraint| Row {
        a: (0..d).map(|k| c.expr.coeff(VarId::Free(k as u32))).collect(),
        b: c.expr.constant_term().clone(),
        strict: c.rel == Relation::Gt,
    };
    let mut eqs: Vec<Row> = sys.constraints().iter().filter(|c| c.rel == Relation::Eq).map(to_row).collect();
    let mut ineqs: Vec<Row> = sys.constraints().iter().filter(|c| c.rel != Relation::Eq).map(to_row).collect();
    while let Some(e) = eqs.pop() {
        let Some(k) = e.a.iter().position(|x| !x.is_zero()) else {
            if !e.b.is_zero() {
                return false;
            }
            continue;
        };
        let sub = |r: &Row| {
            let f = &r.a[k] / &e.a[k];
            Row { a: r.a.iter().zip(&e.a).map(|(x, y)| x - &f * y).collect(), b: &r.b - &f * &e.b, strict: r.strict }
        };
        eqs = eqs.iter().map(sub).collect();
        ineqs = ineqs.iter().map(sub).collect();
    }
    let mut rows: BTreeSet<Row> = ineqs.into_iter().map(normalize).collect();
    let mut live: Vec<usize> = (0..d).collect();
    while !live.is_empty() {
        let (pos, &k) = live
            .iter()
            .enumerate()
            .min_by_key(|(_, &k)| {
                let p = rows.iter().filter(|r| r.a[k].is_positive()).count();
                let n = rows.iter().filter(|r| r.a[k].is_negative()).count();
                p * n
            })
            .unwrap();
        live.remove(pos);
        let (p, rest): (Vec<Row>, Vec<Row>) = rows.into_iter().partition(|r| r.a[k].is_positive());
        let (n, z): (Vec<Row>, Vec<Row>) = rest.into_iter().partition(|r| r.a[k].is_negative());
        let mut next: BTreeSet<Row> = z.into_iter().collect();
        for rp in &p {
            for rn in &n {
                let fp = int(1) / &rp.a[k];
                let fneg = int(1) / -&rn.a[k];
                let a = rp.a.iter().zip(&rn.a).map(|(x, y)| x * &fp + y * &fneg).collect();
                next.insert(normalize(Row { a, b: &rp.b * &fp + &rn.b * &fneg, strict: rp.strict || rn.strict }));
            }
        }
        rows = next;
    }
    rows.iter().all(|r| if r.strict { r.b.is_positive() } else { !r.b.is_negative() })
}

/// A random mixed system over at most 12 unknowns with small integer data.
pub fn random_system(rng: &mut impl Rng) -> (usize, ConstraintSystem) {
    let d = rng.gen_range(1..=12);
    let m = rng.gen_range(1..=d + 4);
    let mut sys = ConstraintSystem::new();
    for _ in 0..m {
        let mut e = LinExpr::constant(int(rng.gen_range(-3..=3)));
        for _ in 0..rng.gen_range(1..=3) {
            e.add_term(VarId::Free(rng.gen_range(0..d) as u32), int(rng.gen_range(-3..=3)));
        }
        sys.push(match rng.gen_range(0..10) {
            0 | 1 => Constraint::eq(e),
            2..=5 => Constraint::ge(e),
            _ => Constraint::gt(e),
        });
    }
    (d, sys)
}

/// `∫₀^∞ φ({f > λ}) dλ`, sampling each gap between consecutive breakpoints
/// at its midpoint.
pub fn riemann<T: TruthFunction + ?Sized>(f: &[Q], phi: &T) -> Q {
    let mut cuts: Vec<Q> = f.to_vec();
    cuts.push(Q::zero());
    cuts.sort();
    cuts.dedup();
    let two = int(2);
    cuts.windows(2)
        .map(|w| {
            let mid = (&w[0] + &w[1]) / &two;
            let level = Event::from_members(&(1..=f.len()).filter(|&i| f[i - 1] > mid).collect::<Vec<_>>());
            if phi.value(level) {
                &w[1] - &w[0]
            } else {
                Q::zero()
            }
        })
        .sum()
}
