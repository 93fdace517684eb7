//! Quantum measures: grade-2 additive, nonnegative set functions on `2^Ω`.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{element_pairs, Event, LogicError, SampleSpace, TruthFunction};
use crate::rational::{format_rational, int, parse_rational, ParseRationalError, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeasureError {
    #[error("expected {expected} event values, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("μ(∅) must be 0")]
    NonzeroEmpty,
    #[error("negative value on event {0}")]
    NegativeValue(Event),
    #[error("grade-2 additivity fails on disjoint triple ({0}, {1}, {2})")]
    NotGrade2Additive(Event, Event, Event),
    #[error("grade-2 extension is negative on event {0}")]
    NegativeExtension(Event),
    #[error("Dirac weight must be positive")]
    NonPositiveWeight,
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error("measure file: {0}")]
    Format(String),
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
}

/// A validated q-measure; `values[A.index()] = μ(A)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QMeasure {
    space: SampleSpace,
    values: Vec<Q>,
}

impl QMeasure {
    pub fn zero(space: SampleSpace) -> Self {
        QMeasure { space, values: vec![Q::zero(); space.num_events()] }
    }

    pub fn space(&self) -> SampleSpace {
        self.space
    }

    pub fn get(&self, a: Event) -> &Q {
        &self.values[a.index()]
    }

    /// Values in bitmask order.
    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn total(&self) -> &Q {
        self.get(self.space.full())
    }

    /// Relabelled copy: `μ'(π(A)) = μ(A)`.
    pub fn permute(&self, perm: &[usize]) -> QMeasure {
        let mut values = vec![Q::zero(); self.values.len()];
        for e in self.space.events() {
            values[e.permute(perm).index()] = self.values[e.index()].clone();
        }
        QMeasure { space: self.space, values }
    }

    /// Restriction to singletons (in element order) and doubletons (in
    /// [`element_pairs`] order).
    pub fn pair_data(&self) -> (Vec<Q>, Vec<Q>) {
        let singles = self.space.elements().map(|i| self.get(Event::singleton(i)).clone()).collect();
        let pairs = element_pairs(self.space)
            .into_iter()
            .map(|(i, j)| self.get(Event::pair(i, j)).clone())
            .collect();
        (singles, pairs)
    }
}

/// Checks grade-2 additivity on every disjoint triple of nonempty events and
/// returns the first violation.
pub fn grade2_violation(space: SampleSpace, values: &[Q]) -> Option<(Event, Event, Event)> {
    let v = |e: Event| &values[e.index()];
    let full = space.full();
    for a in space.events().skip(1) {
        for b in space.events().skip(1).filter(|&b| b > a && a.is_disjoint(b)) {
            let rest = full.difference(a.union(b));
            for c in rest.subsets().filter(|&c| !c.is_empty() && c > b) {
                let lhs = v(a.union(b).union(c));
                let rhs = v(a.union(b)) + v(a.union(c)) + v(b.union(c)) - v(a) - v(b) - v(c);
                if *lhs != rhs {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

/// The grade-2 extension of singleton/doubleton data to an event with at
/// least three elements: `Σ_{i<j} μ({i,j}) − (m−2) Σ_i μ({i})`.
pub fn expansion_value(event: Event, single: impl Fn(usize) -> Q, pair: impl Fn(usize, usize) -> Q) -> Q {
    let members: Vec<usize> = event.members().collect();
    let m = members.len() as i64;
    let mut total = Q::zero();
    for (k, &i) in members.iter().enumerate() {
        for &j in &members[k + 1..] {
            total += pair(i, j);
        }
    }
    let singles: Q = members.iter().map(|&i| single(i)).sum();
    total - int(m - 2) * singles
}

/// Independent validator: every event with `m ≥ 3` elements must equal the
/// expansion of its singleton and doubleton values.
pub fn expansion_violation(space: SampleSpace, values: &[Q]) -> Option<Event> {
    let single = |i: usize| values[Event::singleton(i).index()].clone();
    let pair = |i: usize, j: usize| values[Event::pair(i, j).index()].clone();
    space
        .events()
        .filter(|e| e.len() >= 3)
        .find(|&e| values[e.index()] != expansion_value(e, single, pair))
}

/// Validates a full table of event values (bitmask order).
pub fn validate(space: SampleSpace, values: Vec<Q>) -> Result<QMeasure, MeasureError> {
    if values.len() != space.num_events() {
        return Err(MeasureError::WrongLength { expected: space.num_events(), found: values.len() });
    }
    if !values[0].is_zero() {
        return Err(MeasureError::NonzeroEmpty);
    }
    if let Some(e) = space.events().find(|e| values[e.index()].is_negative()) {
        return Err(MeasureError::NegativeValue(e));
    }
    if let Some((a, b, c)) = grade2_violation(space, &values) {
        return Err(MeasureError::NotGrade2Additive(a, b, c));
    }
    debug_assert!(expansion_violation(space, &values).is_none());
    Ok(QMeasure { space, values })
}

/// Unique grade-2 additive extension of singleton and doubleton values
/// (`pairs` in [`element_pairs`] order).
pub fn extend_from_pairs(space: SampleSpace, singletons: &[Q], pairs: &[Q]) -> Result<QMeasure, MeasureError> {
    let pair_list = element_pairs(space);
    if singletons.len() != space.n() {
        return Err(MeasureError::WrongLength { expected: space.n(), found: singletons.len() });
    }
    if pairs.len() != pair_list.len() {
        return Err(MeasureError::WrongLength { expected: pair_list.len(), found: pairs.len() });
    }
    let mut values = vec![Q::zero(); space.num_events()];
    for (i, v) in singletons.iter().enumerate() {
        let e = Event::singleton(i + 1);
        if v.is_negative() {
            return Err(MeasureError::NegativeValue(e));
        }
        values[e.index()] = v.clone();
    }
    for (&(i, j), v) in pair_list.iter().zip(pairs) {
        let e = Event::pair(i, j);
        if v.is_negative() {
            return Err(MeasureError::NegativeValue(e));
        }
        values[e.index()] = v.clone();
    }
    for e in space.events().filter(|e| e.len() >= 3) {
        let v = expansion_value(e, |i| singletons[i - 1].clone(), |i, j| {
            values[Event::pair(i, j).index()].clone()
        });
        if v.is_negative() {
            return Err(MeasureError::NegativeExtension(e));
        }
        values[e.index()] = v;
    }
    Ok(QMeasure { space, values })
}

/// `a·δ_ω`: equal to `a` on events containing `ω`, 0 elsewhere.
pub fn dirac(space: SampleSpace, a: Q, omega: usize) -> Result<QMeasure, MeasureError> {
    if !a.is_positive() {
        return Err(MeasureError::NonPositiveWeight);
    }
    space.singleton(omega)?;
    let values = space
        .events()
        .map(|e| if e.contains(omega) { a.clone() } else { Q::zero() })
        .collect();
    validate(space, values)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegularityReport {
    pub r1_holds: bool,
    pub r2_holds: bool,
    /// Disjoint `(A, B)` with `μ(A) = 0` but `μ(A ∪ B) ≠ μ(B)`.
    pub r1_witnesses: Vec<(Event, Event)>,
    /// Disjoint `(A, B)` with `μ(A ∪ B) = 0` but `μ(A) ≠ μ(B)`.
    pub r2_witnesses: Vec<(Event, Event)>,
}

pub fn is_regular(mu: &QMeasure) -> RegularityReport {
    let mut r1 = Vec::new();
    let mut r2 = Vec::new();
    for a in mu.space.events() {
        for b in mu.space.events().filter(|&b| a.is_disjoint(b)) {
            if mu.get(a).is_zero() && mu.get(a.union(b)) != mu.get(b) {
                r1.push((a, b));
            }
            if mu.get(a.union(b)).is_zero() && mu.get(a) != mu.get(b) && a < b {
                r2.push((a, b));
            }
        }
    }
    RegularityReport { r1_holds: r1.is_empty(), r2_holds: r2.is_empty(), r1_witnesses: r1, r2_witnesses: r2 }
}

/// Events with `μ(A) = 0` in bitmask order (`∅` included).
pub fn precluded_events(mu: &QMeasure) -> Vec<Event> {
    mu.space.events().filter(|&e| mu.get(e).is_zero()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Preclusivity {
    pub preclusive: bool,
    /// First precluded event on which `φ` is 1.
    pub witness: Option<Event>,
}

pub fn is_preclusive<T: TruthFunction + ?Sized>(phi: &T, mu: &QMeasure) -> Result<Preclusivity, LogicError> {
    mu.space.check_same(phi.space())?;
    let witness = precluded_events(mu).into_iter().find(|&e| phi.value(e));
    Ok(Preclusivity { preclusive: witness.is_none(), witness })
}

/// On-disk measure description: either every event value, or singleton and
/// pair values to be extended.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MeasureFile {
    Full {
        n: usize,
        values: BTreeMap<String, String>,
    },
    Partial {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        singletons: BTreeMap<String, String>,
        pairs: BTreeMap<String, String>,
    },
}

impl MeasureFile {
    pub fn from_measure(mu: &QMeasure) -> Self {
        MeasureFile::Full {
            n: mu.space.n(),
            values: mu
                .space
                .events()
                .map(|e| (e.to_string(), format_rational(mu.get(e))))
                .collect(),
        }
    }

    pub fn into_measure(self) -> Result<QMeasure, MeasureError> {
        let parse_event = |k: &str| -> Result<Event, MeasureError> {
            k.parse::<Event>().map_err(|e| MeasureError::Format(e.to_string()))
        };
        match self {
            MeasureFile::Full { n, values } => {
                let space = SampleSpace::new(n)?;
                let mut table: Vec<Option<Q>> = vec![None; space.num_events()];
                for (k, v) in &values {
                    let e = parse_event(k)?;
                    space.check_event(e)?;
                    if table[e.index()].replace(parse_rational(v)?).is_some() {
                        return Err(MeasureError::Format(format!("event {e} listed twice")));
                    }
                }
                table[0].get_or_insert_with(Q::zero);
                let values = space
                    .events()
                    .map(|e| table[e.index()].clone().ok_or_else(|| MeasureError::Format(format!("missing value for {e}"))))
                    .collect::<Result<Vec<_>, _>>()?;
                validate(space, values)
            }
            MeasureFile::Partial { n, singletons, pairs } => {
                let n = n.unwrap_or(singletons.len());
                let space = SampleSpace::new(n)?;
                let mut singles: Vec<Option<Q>> = vec![None; n];
                for (k, v) in &singletons {
                    let e = parse_event(k)?;
                    space.check_event(e)?;
                    if e.len() != 1 {
                        return Err(MeasureError::Format(format!("{e} is not a singleton")));
                    }
                    singles[e.members().next().unwrap() - 1] = Some(parse_rational(v)?);
                }
                let pair_list = element_pairs(space);
                let mut pvals: Vec<Option<Q>> = vec![None; pair_list.len()];
                for (k, v) in &pairs {
                    let e = parse_event(k)?;
                    space.check_event(e)?;
                    let pos = pair_list
                        .iter()
                        .position(|&(i, j)| Event::pair(i, j) == e)
                        .ok_or_else(|| MeasureError::Format(format!("{e} is not a pair")))?;
                    pvals[pos] = Some(parse_rational(v)?);
                }
                let singles = singles
                    .into_iter()
                    .enumerate()
                    .map(|(i, v)| v.ok_or_else(|| MeasureError::Format(format!("missing singleton {{{}}}", i + 1))))
                    .collect::<Result<Vec<_>, _>>()?;
                let pvals = pvals
                    .into_iter()
                    .zip(&pair_list)
                    .map(|(v, &(i, j))| v.ok_or_else(|| MeasureError::Format(format!("missing pair {{{i},{j}}}"))))
                    .collect::<Result<Vec<_>, _>>()?;
                extend_from_pairs(space, &singles, &pvals)
            }
        }
    }
}

pub fn measure_from_json(text: &str) -> Result<QMeasure, MeasureError> {
    let file: MeasureFile = serde_json::from_str(text).map_err(|e| MeasureError::Format(e.to_string()))?;
    file.into_measure()
}

pub fn measure_to_json(mu: &QMeasure) -> String {
    serde_json::to_string_pretty(&MeasureFile::from_measure(mu)).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Coevent;
    use crate::rational::ratio;

    fn sp(n: usize) -> SampleSpace {
        SampleSpace::new(n).unwrap()
    }

    fn table(n: usize, vals: &[(&str, i64)]) -> Vec<Q> {
        let mut v = vec![Q::zero(); 1 << n];
        for (k, x) in vals {
            v[k.parse::<Event>().unwrap().index()] = int(*x);
        }
        v
    }

    fn reference_measure(total: i64) -> Vec<Q> {
        table(3, &[("{1}", 5), ("{2}", 3), ("{3}", 6), ("{1,2}", 6), ("{1,3}", 9), ("{2,3}", 3), ("{1,2,3}", total)])
    }

    #[test]
    fn validate_examples() {
        let mu = validate(sp(3), reference_measure(4)).unwrap();
        assert_eq!(*mu.total(), int(4));
        assert!(validate(sp(3), vec![Q::zero(); 8]).is_ok());
        assert!(matches!(validate(sp(3), reference_measure(5)), Err(MeasureError::NotGrade2Additive(..))));
    }

    #[test]
    fn validate_errors() {
        let mut v = reference_measure(4);
        v[0] = int(1);
        assert_eq!(validate(sp(3), v), Err(MeasureError::NonzeroEmpty));
        let v = table(2, &[("{1}", -1)]);
        assert_eq!(validate(sp(2), v), Err(MeasureError::NegativeValue(Event::singleton(1))));
        assert!(matches!(validate(sp(2), vec![Q::zero(); 3]), Err(MeasureError::WrongLength { .. })));
    }

    #[test]
    fn extend_examples() {
        let mu = extend_from_pairs(sp(3), &[int(1), int(1), int(2)], &[int(2), int(1), int(1)]).unwrap();
        assert_eq!(*mu.total(), int(0));
        let a = ratio(3, 2);
        let two_a = &a * int(2);
        let mu = extend_from_pairs(sp(3), &[a.clone(), a.clone(), a.clone()], &[two_a.clone(), two_a.clone(), two_a])
            .unwrap();
        assert_eq!(*mu.total(), &a * int(3));
        assert_eq!(
            extend_from_pairs(sp(3), &[int(1), int(1), int(1)], &[int(0), int(0), int(0)]),
            Err(MeasureError::NegativeExtension(sp(3).full()))
        );
    }

    #[test]
    fn regularity_examples() {
        let mu = validate(sp(2), table(2, &[("{1,2}", 1)])).unwrap();
        let r = is_regular(&mu);
        assert!(!r.r1_holds);
        assert!(r.r1_witnesses.contains(&(Event::singleton(1), Event::singleton(2))));
        assert!(is_regular(&QMeasure::zero(sp(3))).r1_holds);
        let mu = validate(sp(2), table(2, &[("{1}", 1), ("{2}", 1), ("{1,2}", 4)])).unwrap();
        let r = is_regular(&mu);
        assert!(r.r1_holds && r.r2_holds);
    }

    #[test]
    fn preclusion_examples() {
        let phi = Coevent::parse(sp(2), "w1 + w2").unwrap();
        let d = dirac(sp(2), int(1), 1).unwrap();
        let p = is_preclusive(&phi, &d).unwrap();
        assert!(!p.preclusive);
        assert_eq!(p.witness, Some(Event::singleton(2)));
        let pos = extend_from_pairs(sp(2), &[int(1), int(2)], &[int(1)]).unwrap();
        assert!(is_preclusive(&phi, &pos).unwrap().preclusive);
        assert_eq!(precluded_events(&d), vec![Event::EMPTY, Event::singleton(2)]);
    }

    #[test]
    fn dirac_examples() {
        let d = dirac(sp(3), int(1), 1).unwrap();
        assert_eq!(*d.get(Event::from_members(&[1, 3])), int(1));
        let d = dirac(sp(3), int(2), 2).unwrap();
        assert_eq!(*d.get(Event::singleton(1)), int(0));
        for a in [ratio(1, 2), int(3), int(7)] {
            let d = dirac(sp(4), a, 3).unwrap();
            assert!(grade2_violation(sp(4), d.values()).is_none());
            let r = is_regular(&d);
            assert!(r.r1_holds && r.r2_holds);
        }
        assert_eq!(dirac(sp(2), int(0), 1), Err(MeasureError::NonPositiveWeight));
    }

    #[test]
    fn json_full_and_partial() {
        let mu = validate(sp(3), reference_measure(4)).unwrap();
        let text = measure_to_json(&mu);
        assert_eq!(measure_from_json(&text).unwrap(), mu);
        let partial = r#"{"singletons": {"{1}": "1", "{2}": "1", "{3}": "2"},
                          "pairs": {"{1,2}": "2", "{1,3}": "1", "{2,3}": "1"}}"#;
        let mu = measure_from_json(partial).unwrap();
        assert_eq!(*mu.total(), int(0));
        assert!(measure_from_json(r#"{"n": 2, "values": {"{1}": "1"}}"#).is_err());
        assert!(measure_from_json(r#"{"n": 2, "values": {"{1}": "1", "{2}": "1", "{1,2}": "-1"}}"#).is_err());
    }

    #[test]
    fn permutation_commutes_with_values() {
        let mu = validate(sp(3), reference_measure(4)).unwrap();
        let p = mu.permute(&[2, 3, 1]);
        assert_eq!(p.get(Event::singleton(2)), mu.get(Event::singleton(1)));
        assert!(grade2_violation(sp(3), p.values()).is_none());
    }
}
