//! Finite sample spaces, events and coevents.
//!
//! A coevent is a truth function `φ: 2^Ω → {0,1}` with `φ(∅) = 0`. Every
//! coevent is held both as a truth table (one bit per event, events in
//! bitmask order) and as its unique polynomial in the evaluation maps `ω*`
//! over GF(2). The two are related by the subset zeta transform, which is
//! its own inverse over GF(2).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported `|Ω|`; a truth table then fits in one `u64`.
pub const MAX_ELEMENTS: usize = 6;
/// Largest `|Ω|` for which the full coevent space is enumerated.
pub const MAX_ENUMERATION: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("sample space size {0} is outside 1..={MAX_ELEMENTS}")]
    BadCardinality(usize),
    #[error("dimension mismatch: expected |Ω| = {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("event {event} is not contained in a sample space of size {n}")]
    EventOutOfRange { event: Event, n: usize },
    #[error("element {0} is out of range")]
    ElementOutOfRange(usize),
    #[error("full enumeration of the coevents of a {0}-element space is too large")]
    EnumerationTooLarge(usize),
    #[error("expected {expected} values, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("truth table assigns 1 to the empty event")]
    EmptyEventTrue,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at offset {offset} in {input:?}")]
pub struct ParseError {
    pub input: String,
    pub offset: usize,
    pub message: String,
}

/// A finite sample space `Ω = {1, …, n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct SampleSpace {
    n: usize,
}

impl SampleSpace {
    pub fn new(n: usize) -> Result<Self, LogicError> {
        if (1..=MAX_ELEMENTS).contains(&n) {
            Ok(SampleSpace { n })
        } else {
            Err(LogicError::BadCardinality(n))
        }
    }

    pub fn n(self) -> usize {
        self.n
    }

    pub fn num_events(self) -> usize {
        1 << self.n
    }

    /// The event `Ω` itself.
    pub fn full(self) -> Event {
        Event((1u32 << self.n) - 1)
    }

    /// All `2^n` events in bitmask order (`∅` first).
    pub fn events(self) -> impl Iterator<Item = Event> {
        (0..(1u32 << self.n)).map(Event)
    }

    /// Nonempty events ordered by cardinality, then by bitmask.
    pub fn events_by_size(self) -> Vec<Event> {
        let mut evs: Vec<Event> = self.events().skip(1).collect();
        evs.sort_by_key(|e| (e.len(), e.mask()));
        evs
    }

    pub fn elements(self) -> std::ops::RangeInclusive<usize> {
        1..=self.n
    }

    pub fn singleton(self, omega: usize) -> Result<Event, LogicError> {
        if (1..=self.n).contains(&omega) {
            Ok(Event::singleton(omega))
        } else {
            Err(LogicError::ElementOutOfRange(omega))
        }
    }

    pub fn check_event(self, event: Event) -> Result<(), LogicError> {
        if event.0 >> self.n == 0 {
            Ok(())
        } else {
            Err(LogicError::EventOutOfRange { event, n: self.n })
        }
    }

    pub(crate) fn check_same(self, other: SampleSpace) -> Result<(), LogicError> {
        if self == other {
            Ok(())
        } else {
            Err(LogicError::DimensionMismatch { expected: self.n, found: other.n })
        }
    }
}

impl TryFrom<usize> for SampleSpace {
    type Error = LogicError;
    fn try_from(n: usize) -> Result<Self, LogicError> {
        SampleSpace::new(n)
    }
}

impl From<SampleSpace> for usize {
    fn from(s: SampleSpace) -> usize {
        s.n
    }
}

/// An event, i.e. a subset of `{1, …, n}`, stored as a bitmask where element
/// `i` occupies bit `i - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Event(u32);

impl Event {
    pub const EMPTY: Event = Event(0);

    pub const fn from_mask(mask: u32) -> Event {
        Event(mask)
    }

    pub fn from_members(members: &[usize]) -> Event {
        members.iter().fold(Event::EMPTY, |acc, &m| acc.with(m))
    }

    pub fn singleton(omega: usize) -> Event {
        Event(1 << (omega - 1))
    }

    pub fn pair(a: usize, b: usize) -> Event {
        Event::singleton(a).union(Event::singleton(b))
    }

    pub const fn mask(self) -> u32 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn contains(self, omega: usize) -> bool {
        omega >= 1 && self.0 >> (omega - 1) & 1 == 1
    }

    pub fn with(self, omega: usize) -> Event {
        Event(self.0 | 1 << (omega - 1))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Event) -> Event {
        Event(self.0 | other.0)
    }

    pub fn intersection(self, other: Event) -> Event {
        Event(self.0 & other.0)
    }

    pub fn difference(self, other: Event) -> Event {
        Event(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: Event) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: Event) -> bool {
        self.0 & !other.0 == 0
    }

    /// Members in increasing order, 1-based.
    pub fn members(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (1..=32).filter(move |&i| mask >> (i - 1) & 1 == 1)
    }

    /// Every subset of this event (including `∅` and the event itself).
    pub fn subsets(self) -> impl Iterator<Item = Event> {
        let full = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full { None } else { Some((cur.wrapping_sub(full)) & full) };
            Some(Event(cur))
        })
    }

    /// Image under a relabelling `i ↦ perm[i - 1]`.
    pub fn permute(self, perm: &[usize]) -> Event {
        self.members().fold(Event::EMPTY, |acc, m| acc.with(perm[m - 1]))
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, m) in self.members().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

impl FromStr for Event {
    type Err = ParseError;

    /// Accepts `{1,3}`, `{}` and the bare forms `1,3` / `(1,3)`.
    fn from_str(s: &str) -> Result<Event, ParseError> {
        let t = s.trim();
        let inner = t
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .or_else(|| t.strip_prefix('(').and_then(|r| r.strip_suffix(')')))
            .unwrap_or(t);
        let mut ev = Event::EMPTY;
        if inner.trim().is_empty() {
            return Ok(ev);
        }
        for part in inner.split(',') {
            let m: usize = part.trim().parse().map_err(|_| ParseError {
                input: s.to_string(),
                offset: 0,
                message: format!("bad element {part:?}"),
            })?;
            if !(1..=MAX_ELEMENTS).contains(&m) {
                return Err(ParseError {
                    input: s.to_string(),
                    offset: 0,
                    message: format!("element {m} out of range"),
                });
            }
            ev = ev.with(m);
        }
        Ok(ev)
    }
}

impl From<Event> for String {
    fn from(e: Event) -> String {
        e.to_string()
    }
}

impl TryFrom<String> for Event {
    type Error = ParseError;

    fn try_from(s: String) -> Result<Event, ParseError> {
        s.parse()
    }
}

/// Shared read access to anything that assigns a truth value to events.
pub trait TruthFunction {
    fn space(&self) -> SampleSpace;
    /// `φ(A)`; `a` must lie inside [`TruthFunction::space`].
    fn value(&self, a: Event) -> bool;
}

/// `φ(A)`, with a dimension check on `A`.
pub fn eval_coevent<T: TruthFunction + ?Sized>(phi: &T, a: Event) -> Result<bool, LogicError> {
    phi.space().check_event(a)?;
    Ok(phi.value(a))
}

/// Truth-table form: bit `A.mask()` of `bits` is `φ(A)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CoeventTable {
    space: SampleSpace,
    bits: u64,
}

impl CoeventTable {
    pub fn new(space: SampleSpace, bits: u64) -> Result<Self, LogicError> {
        if bits & 1 == 1 {
            return Err(LogicError::EmptyEventTrue);
        }
        Ok(CoeventTable { space, bits: bits & table_mask(space) })
    }

    pub fn from_fn(space: SampleSpace, mut f: impl FnMut(Event) -> bool) -> Self {
        let bits = space
            .events()
            .skip(1)
            .filter(|&e| f(e))
            .fold(0u64, |acc, e| acc | 1 << e.mask());
        CoeventTable { space, bits }
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    /// Table entries in bitmask order, `∅` first.
    pub fn to_vec(self) -> Vec<bool> {
        self.space.events().map(|e| self.value(e)).collect()
    }
}

impl TruthFunction for CoeventTable {
    fn space(&self) -> SampleSpace {
        self.space
    }
    fn value(&self, a: Event) -> bool {
        self.bits >> a.mask() & 1 == 1
    }
}

/// Polynomial form: bit `S.mask()` of `monomials` is set iff the monomial
/// `∏_{ω∈S} ω*` occurs. Bit 0 (the empty monomial) is never set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CoeventPoly {
    space: SampleSpace,
    monomials: u64,
}

impl CoeventPoly {
    pub fn zero(space: SampleSpace) -> Self {
        CoeventPoly { space, monomials: 0 }
    }

    pub fn from_monomials(
        space: SampleSpace,
        monomials: impl IntoIterator<Item = Event>,
    ) -> Result<Self, LogicError> {
        let mut bits = 0u64;
        for m in monomials {
            space.check_event(m)?;
            if !m.is_empty() {
                bits ^= 1 << m.mask();
            }
        }
        Ok(CoeventPoly { space, monomials: bits })
    }

    pub fn bits(self) -> u64 {
        self.monomials
    }

    /// Monomials sorted by (cardinality, lexicographic members).
    pub fn monomials(self) -> Vec<Event> {
        let mut ms: Vec<Event> = self
            .space
            .events()
            .filter(|e| self.monomials >> e.mask() & 1 == 1)
            .collect();
        ms.sort_by(|a, b| {
            a.len()
                .cmp(&b.len())
                .then_with(|| a.members().collect::<Vec<_>>().cmp(&b.members().collect::<Vec<_>>()))
        });
        ms
    }

    pub fn degree(self) -> usize {
        self.monomials().iter().map(|m| m.len()).max().unwrap_or(0)
    }

    pub fn xor(self, other: CoeventPoly) -> Result<Self, LogicError> {
        self.space.check_same(other.space)?;
        Ok(CoeventPoly { space: self.space, monomials: self.monomials ^ other.monomials })
    }
}

impl TruthFunction for CoeventPoly {
    fn space(&self) -> SampleSpace {
        self.space
    }
    fn value(&self, a: Event) -> bool {
        a.subsets().filter(|s| self.monomials >> s.mask() & 1 == 1).count() % 2 == 1
    }
}

impl fmt::Display for CoeventPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ms = self.monomials();
        if ms.is_empty() {
            return f.write_str("0");
        }
        for (k, m) in ms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let factors: Vec<String> = m.members().map(|i| format!("w{i}")).collect();
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

fn table_mask(space: SampleSpace) -> u64 {
    if space.num_events() == 64 {
        u64::MAX
    } else {
        (1u64 << space.num_events()) - 1
    }
}

/// Subset-sum (zeta) transform over GF(2) on a packed table; self-inverse.
fn gf2_zeta(space: SampleSpace, mut bits: u64) -> u64 {
    for i in 0..space.n() {
        let step = 1u32 << i;
        for mask in 0..space.num_events() as u32 {
            if mask & step != 0 && bits >> (mask ^ step) & 1 == 1 {
                bits ^= 1 << mask;
            }
        }
    }
    bits
}

/// Monomials `{S ≠ ∅ : ⊕_{T⊆S} φ(T) = 1}`.
pub fn table_to_poly(phi: CoeventTable) -> CoeventPoly {
    CoeventPoly { space: phi.space, monomials: gf2_zeta(phi.space, phi.bits) }
}

pub fn poly_to_table(phi: CoeventPoly) -> CoeventTable {
    CoeventTable { space: phi.space, bits: gf2_zeta(phi.space, phi.monomials) }
}

/// A coevent held in both truth-table and polynomial form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Coevent {
    table: CoeventTable,
    poly: CoeventPoly,
}

impl Coevent {
    pub fn zero(space: SampleSpace) -> Self {
        Coevent::from(CoeventTable { space, bits: 0 })
    }

    /// The coevent equal to 1 on every nonempty event.
    pub fn one(space: SampleSpace) -> Self {
        Coevent::from(CoeventTable { space, bits: table_mask(space) & !1 })
    }

    /// The evaluation map `ω*`.
    pub fn evaluation(space: SampleSpace, omega: usize) -> Result<Self, LogicError> {
        let s = space.singleton(omega)?;
        Ok(Coevent::from(CoeventPoly { space, monomials: 1 << s.mask() }))
    }

    /// `∏_{ω∈S} ω*`.
    pub fn monomial(space: SampleSpace, s: Event) -> Result<Self, LogicError> {
        Ok(Coevent::from(CoeventPoly::from_monomials(space, [s])?))
    }

    pub fn from_table_bits(space: SampleSpace, bits: u64) -> Result<Self, LogicError> {
        Ok(Coevent::from(CoeventTable::new(space, bits)?))
    }

    pub fn from_monomials(
        space: SampleSpace,
        monomials: impl IntoIterator<Item = Event>,
    ) -> Result<Self, LogicError> {
        Ok(Coevent::from(CoeventPoly::from_monomials(space, monomials)?))
    }

    /// Position in the canonical enumeration (truth table without the `∅` bit).
    pub fn index(&self) -> u64 {
        self.table.bits >> 1
    }

    pub fn from_index(space: SampleSpace, index: u64) -> Result<Self, LogicError> {
        let bits = index.checked_shl(1).unwrap_or(u64::MAX);
        if bits & !table_mask(space) != 0 {
            return Err(LogicError::EnumerationTooLarge(space.n()));
        }
        Coevent::from_table_bits(space, bits)
    }

    pub fn table(&self) -> CoeventTable {
        self.table
    }

    pub fn poly(&self) -> CoeventPoly {
        self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.table.bits == 0
    }

    pub fn xor(&self, other: &Coevent) -> Result<Coevent, LogicError> {
        self.table.space.check_same(other.table.space)?;
        Ok(Coevent::from(CoeventTable {
            space: self.table.space,
            bits: self.table.bits ^ other.table.bits,
        }))
    }

    pub fn and(&self, other: &Coevent) -> Result<Coevent, LogicError> {
        self.table.space.check_same(other.table.space)?;
        Ok(Coevent::from(CoeventTable {
            space: self.table.space,
            bits: self.table.bits & other.table.bits,
        }))
    }

    pub fn permute(&self, perm: &[usize]) -> Coevent {
        let space = self.space();
        Coevent::from(CoeventTable::from_fn(space, |e| {
            // φ'(π(A)) = φ(A)
            let mut inv = vec![0; perm.len()];
            for (i, &p) in perm.iter().enumerate() {
                inv[p - 1] = i + 1;
            }
            self.value(e.permute(&inv))
        }))
    }

    /// Parses the `w1 + w2*w3` expression dialect (`+` is GF(2) addition).
    pub fn parse(space: SampleSpace, expr: &str) -> Result<Coevent, ParseError> {
        let terms = parse_expression(expr)?;
        let mut acc = Coevent::zero(space);
        for term in terms {
            let mut prod = Coevent::one(space);
            for factor in term {
                let c = match factor {
                    Factor::Zero => Coevent::zero(space),
                    Factor::One => Coevent::one(space),
                    Factor::Eval(i) => Coevent::evaluation(space, i).map_err(|_| ParseError {
                        input: expr.to_string(),
                        offset: 0,
                        message: format!("w{i} is outside a {}-element space", space.n()),
                    })?,
                };
                prod = prod.and(&c).expect("same space");
            }
            acc = acc.xor(&prod).expect("same space");
        }
        Ok(acc)
    }
}

impl From<CoeventTable> for Coevent {
    fn from(table: CoeventTable) -> Self {
        Coevent { table, poly: table_to_poly(table) }
    }
}

impl From<CoeventPoly> for Coevent {
    fn from(poly: CoeventPoly) -> Self {
        Coevent { table: poly_to_table(poly), poly }
    }
}

impl TruthFunction for Coevent {
    fn space(&self) -> SampleSpace {
        self.table.space
    }
    fn value(&self, a: Event) -> bool {
        self.table.value(a)
    }
}

impl fmt::Display for Coevent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    Zero,
    One,
    /// `w<i>`, 1-based.
    Eval(usize),
}

/// Parses an expression into a sum of products of factors.
pub fn parse_expression(expr: &str) -> Result<Vec<Vec<Factor>>, ParseError> {
    let bytes = expr.as_bytes();
    let err = |offset: usize, message: &str| ParseError {
        input: expr.to_string(),
        offset,
        message: message.to_string(),
    };
    let mut pos = 0;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let mut terms = Vec::new();
    loop {
        let mut term = Vec::new();
        loop {
            skip_ws(&mut pos);
            let start = pos;
            match bytes.get(pos) {
                Some(b'0') | Some(b'1') => {
                    term.push(if bytes[pos] == b'0' { Factor::Zero } else { Factor::One });
                    pos += 1;
                    if bytes.get(pos).is_some_and(u8::is_ascii_digit) {
                        return Err(err(start, "numeric literals other than 0 and 1 are not allowed"));
                    }
                }
                Some(b'w') | Some(b'W') => {
                    pos += 1;
                    let digits = pos;
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    let i: usize = expr[digits..pos]
                        .parse()
                        .map_err(|_| err(start, "expected an index after 'w'"))?;
                    if i == 0 {
                        return Err(err(start, "evaluation maps are indexed from 1"));
                    }
                    term.push(Factor::Eval(i));
                }
                Some(_) => return Err(err(start, "expected 'w<i>', '0' or '1'")),
                None => return Err(err(start, "unexpected end of expression")),
            }
            skip_ws(&mut pos);
            if bytes.get(pos) == Some(&b'*') {
                pos += 1;
            } else {
                break;
            }
        }
        terms.push(term);
        skip_ws(&mut pos);
        match bytes.get(pos) {
            Some(b'+') => pos += 1,
            None => break,
            Some(_) => return Err(err(pos, "expected '+', '*' or end of expression")),
        }
    }
    Ok(terms)
}

/// Largest `w<i>` index used by an expression (0 if none).
pub fn max_index(expr: &str) -> Result<usize, ParseError> {
    Ok(parse_expression(expr)?
        .iter()
        .flatten()
        .filter_map(|f| match f {
            Factor::Eval(i) => Some(*i),
            _ => None,
        })
        .max()
        .unwrap_or(0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct CoeventClass {
    pub classical: bool,
    pub unital: bool,
    pub additive: bool,
    pub multiplicative: bool,
    pub quadratic: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassFilter {
    Classical,
    Unital,
    Additive,
    Multiplicative,
    Quadratic,
}

impl ClassFilter {
    pub fn matches(self, class: &CoeventClass) -> bool {
        match self {
            ClassFilter::Classical => class.classical,
            ClassFilter::Unital => class.unital,
            ClassFilter::Additive => class.additive,
            ClassFilter::Multiplicative => class.multiplicative,
            ClassFilter::Quadratic => class.quadratic,
        }
    }
}

/// Structural classification from the polynomial form. The zero coevent is
/// quadratic but neither additive nor multiplicative.
pub fn classify(phi: &Coevent) -> CoeventClass {
    let ms = phi.poly().monomials();
    let additive = !ms.is_empty() && ms.iter().all(|m| m.len() == 1);
    let multiplicative = ms.len() == 1;
    CoeventClass {
        classical: ms.len() == 1 && ms[0].len() == 1,
        unital: phi.value(phi.space().full()),
        additive,
        multiplicative,
        quadratic: ms.iter().all(|m| m.len() <= 2),
    }
}

/// Classification by checking (H1)–(H3) and (Q4) against every event pair or
/// disjoint triple. Agrees with [`classify`].
pub fn classify_direct(phi: &Coevent) -> CoeventClass {
    let space = phi.space();
    let evs: Vec<Event> = space.events().collect();
    let v = |e: Event| phi.value(e);
    let mut h2 = true;
    let mut h3 = true;
    for &a in &evs {
        for &b in &evs {
            if a.is_disjoint(b) && v(a.union(b)) != (v(a) ^ v(b)) {
                h2 = false;
            }
            if v(a.intersection(b)) != (v(a) & v(b)) {
                h3 = false;
            }
        }
    }
    let unital = v(space.full());
    let nonzero = !phi.is_zero();
    CoeventClass {
        classical: unital && h2 && h3,
        unital,
        additive: h2 && nonzero,
        multiplicative: h3 && nonzero,
        quadratic: satisfies_q4(phi),
    }
}

fn satisfies_q4(phi: &Coevent) -> bool {
    let space = phi.space();
    let v = |e: Event| phi.value(e);
    for a in space.events() {
        let rest = space.full().difference(a);
        for b in rest.subsets() {
            for c in rest.difference(b).subsets() {
                let lhs = v(a.union(b).union(c));
                let rhs = v(a.union(b)) ^ v(a.union(c)) ^ v(b.union(c)) ^ v(a) ^ v(b) ^ v(c);
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}

/// All unordered partitions of `event` into nonempty blocks.
pub fn set_partitions(event: Event) -> Vec<Vec<Event>> {
    fn go(rest: Event, blocks: &mut Vec<Event>, out: &mut Vec<Vec<Event>>) {
        let Some(first) = rest.members().next() else {
            out.push(blocks.clone());
            return;
        };
        let rest = rest.difference(Event::singleton(first));
        for i in 0..blocks.len() {
            blocks[i] = blocks[i].with(first);
            go(rest, blocks, out);
            blocks[i] = blocks[i].difference(Event::singleton(first));
        }
        blocks.push(Event::singleton(first));
        go(rest, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    go(event, &mut Vec::new(), &mut out);
    out
}

/// Checks the m-block quadratic identity
/// `φ(A₁ ∪ ⋯ ∪ A_m) = ⊕_{i<j} φ(A_i ∪ A_j) ⊕ [m odd] ⊕_i φ(A_i)`
/// over every partition of every event into `m ≥ 3` nonempty blocks.
pub fn check_block_identity(phi: &Coevent) -> bool {
    let v = |e: Event| phi.value(e);
    phi.space().events().all(|event| {
        set_partitions(event).into_iter().filter(|p| p.len() >= 3).all(|blocks| {
            let mut rhs = false;
            for i in 0..blocks.len() {
                for j in i + 1..blocks.len() {
                    rhs ^= v(blocks[i].union(blocks[j]));
                }
            }
            if blocks.len() % 2 == 1 {
                rhs ^= blocks.iter().fold(false, |acc, &b| acc ^ v(b));
            }
            v(event) == rhs
        })
    })
}

/// Unordered pairs `(i, j)`, `i < j`, in lexicographic order.
pub fn element_pairs(space: SampleSpace) -> Vec<(usize, usize)> {
    let n = space.n();
    (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect()
}

/// The unique quadratic coevent with the given singleton values and doubleton
/// values (`doubletons` follows [`element_pairs`] order).
pub fn quadratic_from_values(
    space: SampleSpace,
    singletons: &[bool],
    doubletons: &[bool],
) -> Result<Coevent, LogicError> {
    let pairs = element_pairs(space);
    if singletons.len() != space.n() {
        return Err(LogicError::WrongLength { expected: space.n(), found: singletons.len() });
    }
    if doubletons.len() != pairs.len() {
        return Err(LogicError::WrongLength { expected: pairs.len(), found: doubletons.len() });
    }
    let mut monos = Vec::new();
    for (i, &b) in singletons.iter().enumerate() {
        if b {
            monos.push(Event::singleton(i + 1));
        }
    }
    for (k, &(i, j)) in pairs.iter().enumerate() {
        if doubletons[k] ^ singletons[i - 1] ^ singletons[j - 1] {
            monos.push(Event::pair(i, j));
        }
    }
    let phi = Coevent::from_monomials(space, monos)?;
    debug_assert!(space.elements().all(|i| phi.value(Event::singleton(i)) == singletons[i - 1]));
    debug_assert!(pairs
        .iter()
        .zip(doubletons)
        .all(|(&(i, j), &b)| phi.value(Event::pair(i, j)) == b));
    Ok(phi)
}

/// Streams coevents of an `n`-element space. Unfiltered streams are limited
/// to `n ≤ MAX_ENUMERATION`; class-filtered streams are generated directly in
/// polynomial space.
pub fn enumerate_coevents(
    space: SampleSpace,
    filter: Option<ClassFilter>,
) -> Result<Box<dyn Iterator<Item = Coevent>>, LogicError> {
    let singles: Vec<Event> = space.elements().map(Event::singleton).collect();
    let nonempty: Vec<Event> = space.events().skip(1).collect();
    match filter {
        None | Some(ClassFilter::Unital) => {
            if space.n() > MAX_ENUMERATION {
                return Err(LogicError::EnumerationTooLarge(space.n()));
            }
            let count = 1u64 << (space.num_events() - 1);
            let all = (0..count).map(move |k| Coevent::from_index(space, k).expect("in range"));
            Ok(match filter {
                None => Box::new(all),
                _ => Box::new(all.filter(move |c| c.value(space.full()))),
            })
        }
        Some(ClassFilter::Classical) => Ok(Box::new(
            singles.into_iter().map(move |s| Coevent::monomial(space, s).expect("in range")),
        )),
        Some(ClassFilter::Multiplicative) => Ok(Box::new(
            nonempty.into_iter().map(move |s| Coevent::monomial(space, s).expect("in range")),
        )),
        Some(ClassFilter::Additive) => Ok(Box::new(
            subsets_of(singles).filter(|m| !m.is_empty()).map(move |m| {
                Coevent::from_monomials(space, m).expect("in range")
            }),
        )),
        Some(ClassFilter::Quadratic) => {
            let low: Vec<Event> = nonempty.into_iter().filter(|e| e.len() <= 2).collect();
            Ok(Box::new(
                subsets_of(low).map(move |m| Coevent::from_monomials(space, m).expect("in range")),
            ))
        }
    }
}

fn subsets_of(items: Vec<Event>) -> impl Iterator<Item = Vec<Event>> {
    let k = items.len();
    (0..1u64 << k).map(move |sel| {
        (0..k).filter(|i| sel >> i & 1 == 1).map(|i| items[i]).collect()
    })
}

/// All permutations of `1..=n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i + 1);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}
