//! Exact q-integrals of nonnegative rational functions against coevents.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{Event, LogicError, SampleSpace, TruthFunction};
use crate::rational::{format_rational, parse_rational, ParseRationalError, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntegralError {
    #[error("density is negative at {0}")]
    NegativeDensity(String),
    #[error("expected {expected} density values, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error("density file: {0}")]
    Format(String),
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
}

/// A nonnegative function on `Ω`; `values[i - 1] = f(ωᵢ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Density1 {
    values: Vec<Q>,
}

impl Density1 {
    pub fn new(values: Vec<Q>) -> Result<Self, IntegralError> {
        SampleSpace::new(values.len())?;
        if let Some(i) = values.iter().position(|v| v.is_negative()) {
            return Err(IntegralError::NegativeDensity(format!("{}", i + 1)));
        }
        Ok(Density1 { values })
    }

    pub fn space(&self) -> SampleSpace {
        SampleSpace::new(self.values.len()).expect("checked at construction")
    }

    pub fn get(&self, omega: usize) -> &Q {
        &self.values[omega - 1]
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.values.iter().all(|v| v.is_positive())
    }

    /// `f · χ_A`.
    pub fn restrict(&self, a: Event) -> Density1 {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| if a.contains(i + 1) { v.clone() } else { Q::zero() })
            .collect();
        Density1 { values }
    }

    pub fn scale(&self, alpha: &Q) -> Result<Density1, IntegralError> {
        Density1::new(self.values.iter().map(|v| v * alpha).collect())
    }
}

/// A nonnegative symmetric function on `Ω × Ω`, stored on unordered pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Density2 {
    n: usize,
    /// Row-major upper triangle: `(1,1), (1,2), …, (1,n), (2,2), …`.
    values: Vec<Q>,
}

pub(crate) fn pair_slot(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    let row = i - 1;
    row * n - row * row.saturating_sub(1) / 2 + (j - i)
}

/// Unordered pairs `(i, j)`, `i ≤ j`, in storage order.
pub fn density2_pairs(n: usize) -> Vec<(usize, usize)> {
    (1..=n).flat_map(|i| (i..=n).map(move |j| (i, j))).collect()
}

impl Density2 {
    /// `values` in [`density2_pairs`] order.
    pub fn new(n: usize, values: Vec<Q>) -> Result<Self, IntegralError> {
        SampleSpace::new(n)?;
        let pairs = density2_pairs(n);
        if values.len() != pairs.len() {
            return Err(IntegralError::WrongLength { expected: pairs.len(), found: values.len() });
        }
        if let Some(k) = values.iter().position(|v| v.is_negative()) {
            let (i, j) = pairs[k];
            return Err(IntegralError::NegativeDensity(format!("({i},{j})")));
        }
        Ok(Density2 { n, values })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Q) -> Result<Self, IntegralError> {
        Density2::new(n, density2_pairs(n).into_iter().map(|(i, j)| f(i, j)).collect())
    }

    /// `f(ω, ω') = g(ω) g(ω') / c`.
    pub fn outer_product(g: &Density1, c: &Q) -> Result<Self, IntegralError> {
        Density2::from_fn(g.values.len(), |i, j| g.get(i) * g.get(j) / c)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn space(&self) -> SampleSpace {
        SampleSpace::new(self.n).expect("checked at construction")
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.values[pair_slot(self.n, i, j)]
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.values.iter().all(|v| v.is_positive())
    }

    /// The slice `ω ↦ f(ω, ω')`.
    pub fn slice(&self, omega_prime: usize) -> Density1 {
        Density1 { values: (1..=self.n).map(|i| self.get(i, omega_prime).clone()).collect() }
    }

    /// Copy with one stored value replaced.
    pub fn with_value(&self, i: usize, j: usize, v: Q) -> Result<Self, IntegralError> {
        let mut values = self.values.clone();
        values[pair_slot(self.n, i, j)] = v;
        Density2::new(self.n, values)
    }
}

/// Layered sum over the distinct positive values of `values`: each value is
/// paired with the element it sits on.
fn layered<T: TruthFunction + ?Sized>(values: &[Q], phi: &T) -> Q {
    let mut levels: Vec<&Q> = values.iter().filter(|v| v.is_positive()).collect();
    levels.sort();
    levels.dedup();
    let mut total = Q::zero();
    let mut prev = Q::zero();
    for alpha in levels {
        let level_set = values
            .iter()
            .enumerate()
            .filter(|(_, v)| *v >= alpha)
            .fold(Event::EMPTY, |e, (i, _)| e.with(i + 1));
        if phi.value(level_set) {
            total += alpha - &prev;
        }
        prev = alpha.clone();
    }
    total
}

pub fn q_integral<T: TruthFunction + ?Sized>(f: &Density1, phi: &T) -> Result<Q, IntegralError> {
    f.space().check_same(phi.space())?;
    Ok(layered(&f.values, phi))
}

/// `∫_A f dφ = ∫ f χ_A dφ`.
pub fn q_integral_over<T: TruthFunction + ?Sized>(f: &Density1, phi: &T, a: Event) -> Result<Q, IntegralError> {
    f.space().check_same(phi.space())?;
    f.space().check_event(a)?;
    Ok(layered(&f.restrict(a).values, phi))
}

/// `g_A(ω') = ∫_A f(ω, ω') dφ(ω)` for every `ω'`.
pub fn inner_function<T: TruthFunction + ?Sized>(f: &Density2, phi: &T, a: Event) -> Result<Density1, IntegralError> {
    f.space().check_same(phi.space())?;
    f.space().check_event(a)?;
    let values = (1..=f.n).map(|w| layered(&f.slice(w).restrict(a).values, phi)).collect();
    Density1::new(values)
}

/// `∫_A [∫_A f(ω, ω') dφ(ω)] dφ(ω')`.
pub fn iterated_2gen<T: TruthFunction + ?Sized>(f: &Density2, phi: &T, a: Event) -> Result<Q, IntegralError> {
    let g = inner_function(f, phi, a)?;
    q_integral_over(&g, phi, a)
}

/// `∫ [∫_A f(ω, ω') dφ(ω)] dφ(ω')`.
pub fn iterated_actualize<T: TruthFunction + ?Sized>(f: &Density2, phi: &T, a: Event) -> Result<Q, IntegralError> {
    let g = inner_function(f, phi, a)?;
    q_integral(&g, phi)
}

/// On-disk density: `{"f": {"1": "5"}}` or `{"f2": {"(1,2)": "1"}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DensityFile {
    One { f: BTreeMap<String, String> },
    Two { f2: BTreeMap<String, String> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Density {
    One(Density1),
    Two(Density2),
}

impl DensityFile {
    pub fn from_density1(f: &Density1) -> Self {
        DensityFile::One {
            f: f.values.iter().enumerate().map(|(i, v)| ((i + 1).to_string(), format_rational(v))).collect(),
        }
    }

    pub fn from_density2(f: &Density2) -> Self {
        DensityFile::Two {
            f2: density2_pairs(f.n)
                .into_iter()
                .map(|(i, j)| (format!("({i},{j})"), format_rational(f.get(i, j))))
                .collect(),
        }
    }

    pub fn into_density(self) -> Result<Density, IntegralError> {
        match self {
            DensityFile::One { f } => {
                let mut slots: Vec<Option<Q>> = vec![None; f.len()];
                for (k, v) in &f {
                    let i: usize = k.trim().parse().map_err(|_| IntegralError::Format(format!("bad element key {k:?}")))?;
                    if i == 0 || i > slots.len() {
                        return Err(IntegralError::Format(format!("element key {k:?} out of range")));
                    }
                    slots[i - 1] = Some(parse_rational(v)?);
                }
                let values = slots
                    .into_iter()
                    .enumerate()
                    .map(|(i, v)| v.ok_or_else(|| IntegralError::Format(format!("missing f({})", i + 1))))
                    .collect::<Result<Vec<_>, _>>()?;
                Density1::new(values).map(Density::One)
            }
            DensityFile::Two { f2 } => {
                let mut entries = Vec::with_capacity(f2.len());
                for (k, v) in &f2 {
                    entries.push((parse_pair_key(k)?, parse_rational(v)?));
                }
                let n = entries.iter().map(|&((_, j), _)| j).max().unwrap_or(0);
                SampleSpace::new(n)?;
                let mut slots: Vec<Option<Q>> = vec![None; n * (n + 1) / 2];
                for ((i, j), v) in entries {
                    if slots[pair_slot(n, i, j)].replace(v).is_some() {
                        return Err(IntegralError::Format(format!("pair ({i},{j}) given twice")));
                    }
                }
                let values = slots
                    .into_iter()
                    .zip(density2_pairs(n))
                    .map(|(v, (i, j))| v.ok_or_else(|| IntegralError::Format(format!("missing f({i},{j})"))))
                    .collect::<Result<Vec<_>, _>>()?;
                Density2::new(n, values).map(Density::Two)
            }
        }
    }
}

/// Parses `"(i,j)"` into an ordered pair with `i ≤ j`.
fn parse_pair_key(k: &str) -> Result<(usize, usize), IntegralError> {
    let bad = || IntegralError::Format(format!("bad pair key {k:?}"));
    let inner = k.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
    let (a, b) = inner.split_once(',').ok_or_else(bad)?;
    let i: usize = a.trim().parse().map_err(|_| bad())?;
    let j: usize = b.trim().parse().map_err(|_| bad())?;
    if i == 0 || j == 0 {
        return Err(bad());
    }
    Ok((i.min(j), i.max(j)))
}
