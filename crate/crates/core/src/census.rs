//! Exhaustive per-coevent classification and filter verdicts, plus the
//! quadratic-uniqueness experiment over grids of q-measures.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::filters::{decide, FilterError, FilterMode, GenerationProblem, MeasureSpec, SearchOptions, VerdictFile};
use crate::logic::{classify, element_pairs, enumerate_coevents, permutations, ClassFilter, Coevent, LogicError, SampleSpace};
use crate::measure::{extend_from_pairs, MeasureFile, QMeasure};
use crate::rational::Q;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error("resource guard: {0}")]
    Guard(String),
    #[error("unknown census mode {0:?}")]
    UnknownMode(String),
    #[error("unknown report format {0:?}")]
    UnknownFormat(String),
    #[error("thread pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CensusMode {
    Classify,
    Gen1,
    Gen2,
    Actualize,
}

impl CensusMode {
    pub fn filter(self) -> Option<FilterMode> {
        match self {
            CensusMode::Classify => None,
            CensusMode::Gen1 => Some(FilterMode::Gen1),
            CensusMode::Gen2 => Some(FilterMode::Gen2),
            CensusMode::Actualize => Some(FilterMode::Actualize),
        }
    }
}

impl std::str::FromStr for CensusMode {
    type Err = CensusError;

    fn from_str(s: &str) -> Result<CensusMode, CensusError> {
        match s.trim() {
            "classify" => Ok(CensusMode::Classify),
            "gen1" => Ok(CensusMode::Gen1),
            "gen2" => Ok(CensusMode::Gen2),
            "actualize" => Ok(CensusMode::Actualize),
            other => Err(CensusError::UnknownMode(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowVerdict {
    pub feasible: bool,
    pub branches_explored: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<VerdictFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusRow {
    pub index: u64,
    pub coevent: String,
    pub classical: bool,
    pub unital: bool,
    pub additive: bool,
    pub multiplicative: bool,
    pub quadratic: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gen1: Option<RowVerdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gen2: Option<RowVerdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actualized: Option<RowVerdict>,
}

impl CensusRow {
    pub fn verdict(&self, mode: FilterMode) -> Option<&RowVerdict> {
        match mode {
            FilterMode::Gen1 => self.gen1.as_ref(),
            FilterMode::Gen2 => self.gen2.as_ref(),
            FilterMode::Actualize => self.actualized.as_ref(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Aggregates {
    pub total: usize,
    pub classical: usize,
    pub unital: usize,
    pub additive: usize,
    pub multiplicative: usize,
    pub quadratic: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gen1: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gen2: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actualized: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Environment {
    pub generator: String,
    pub branch_rule: String,
    pub max_branches: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub schema_version: u32,
    pub n: usize,
    pub modes: Vec<CensusMode>,
    pub environment: Environment,
    pub aggregates: Aggregates,
    /// `inclusion[a][b]`: rows feasible under both `a` and `b`.
    pub inclusion: BTreeMap<FilterMode, BTreeMap<FilterMode, usize>>,
    /// Rows feasible under the first filter but not actualized.
    pub not_actualized: BTreeMap<FilterMode, Vec<String>>,
    pub rows: Vec<CensusRow>,
}

impl CensusReport {
    pub fn recompute_aggregates(rows: &[CensusRow]) -> Aggregates {
        let count = |p: &dyn Fn(&CensusRow) -> bool| rows.iter().filter(|r| p(r)).count();
        let filt = |m: FilterMode| {
            rows.first()
                .and_then(|r| r.verdict(m))
                .map(|_| rows.iter().filter(|r| r.verdict(m).is_some_and(|v| v.feasible)).count())
        };
        Aggregates {
            total: rows.len(),
            classical: count(&|r| r.classical),
            unital: count(&|r| r.unital),
            additive: count(&|r| r.additive),
            multiplicative: count(&|r| r.multiplicative),
            quadratic: count(&|r| r.quadratic),
            gen1: filt(FilterMode::Gen1),
            gen2: filt(FilterMode::Gen2),
            actualized: filt(FilterMode::Actualize),
        }
    }
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, CensusError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CensusError::Pool(e.to_string()))
}

fn row_verdict(phi: &Coevent, mode: FilterMode, options: &SearchOptions) -> Result<RowVerdict, CensusError> {
    let v = decide(&GenerationProblem::existential(*phi, mode), options)?;
    let witness = v.is_feasible().then(|| {
        let mut f = VerdictFile::from_verdict(&v, Some(phi));
        f.trace.clear();
        f
    });
    Ok(RowVerdict { feasible: v.is_feasible(), branches_explored: v.branches_explored, witness })
}

/// One row per coevent of `2^Ω`, in coevent index order.
pub fn run_census(n: usize, modes: &[CensusMode], options: &SearchOptions, jobs: usize) -> Result<CensusReport, CensusError> {
    let space = SampleSpace::new(n)?;
    let heavy = modes.iter().any(|m| matches!(m, CensusMode::Gen2 | CensusMode::Actualize));
    if n >= 4 && heavy {
        return Err(CensusError::Guard(format!("gen2/actualize census at n = {n} exceeds the desk-scale budget")));
    }
    let coevents: Vec<Coevent> = enumerate_coevents(space, None)?.collect();
    let filters: BTreeSet<FilterMode> = modes.iter().filter_map(|m| m.filter()).collect();
    let rows = pool(jobs)?.install(|| {
        coevents
            .par_iter()
            .map(|phi| -> Result<CensusRow, CensusError> {
                let class = classify(phi);
                let mut row = CensusRow {
                    index: phi.index(),
                    coevent: phi.to_string(),
                    classical: class.classical,
                    unital: class.unital,
                    additive: class.additive,
                    multiplicative: class.multiplicative,
                    quadratic: class.quadratic,
                    gen1: None,
                    gen2: None,
                    actualized: None,
                };
                for &mode in &filters {
                    let v = Some(row_verdict(phi, mode, options)?);
                    match mode {
                        FilterMode::Gen1 => row.gen1 = v,
                        FilterMode::Gen2 => row.gen2 = v,
                        FilterMode::Actualize => row.actualized = v,
                    }
                }
                Ok(row)
            })
            .collect::<Result<Vec<_>, _>>()
    })?;
    let mut inclusion = BTreeMap::new();
    for &a in &filters {
        let mut inner = BTreeMap::new();
        for &b in &filters {
            let both = rows
                .iter()
                .filter(|r| r.verdict(a).is_some_and(|v| v.feasible) && r.verdict(b).is_some_and(|v| v.feasible))
                .count();
            inner.insert(b, both);
        }
        inclusion.insert(a, inner);
    }
    let mut not_actualized = BTreeMap::new();
    if filters.contains(&FilterMode::Actualize) {
        for &m in filters.iter().filter(|&&m| m != FilterMode::Actualize) {
            let missing = rows
                .iter()
                .filter(|r| r.verdict(m).is_some_and(|v| v.feasible) && !r.actualized.as_ref().is_some_and(|v| v.feasible))
                .map(|r| r.coevent.clone())
                .collect();
            not_actualized.insert(m, missing);
        }
    }
    let mut modes: Vec<CensusMode> = modes.to_vec();
    modes.sort();
    modes.dedup();
    Ok(CensusReport {
        schema_version: SCHEMA_VERSION,
        n,
        modes,
        environment: Environment {
            generator: format!("qreality {}", env!("CARGO_PKG_VERSION")),
            branch_rule: format!("{:?}", options.rule),
            max_branches: options.max_branches,
        },
        aggregates: CensusReport::recompute_aggregates(&rows),
        inclusion,
        not_actualized,
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Markdown,
}

impl std::str::FromStr for ReportFormat {
    type Err = CensusError;

    fn from_str(s: &str) -> Result<ReportFormat, CensusError> {
        match s.trim() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            other => Err(CensusError::UnknownFormat(other.to_string())),
        }
    }
}

fn cell(v: Option<&RowVerdict>) -> &'static str {
    match v {
        None => "",
        Some(r) if r.feasible => "true",
        Some(_) => "false",
    }
}

pub fn emit_report(report: &CensusReport, format: ReportFormat) -> Vec<u8> {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("serializable");
            s.push('\n');
            s.into_bytes()
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["coevent", "classical", "unital", "additive", "multiplicative", "quadratic", "gen1", "gen2", "actualized"])
                .expect("in-memory write");
            for r in &report.rows {
                let flags = [r.classical, r.unital, r.additive, r.multiplicative, r.quadratic].map(|b| b.to_string());
                let mut rec: Vec<String> = vec![r.coevent.clone()];
                rec.extend(flags);
                rec.extend([cell(r.gen1.as_ref()), cell(r.gen2.as_ref()), cell(r.actualized.as_ref())].map(String::from));
                w.write_record(&rec).expect("in-memory write");
            }
            w.into_inner().expect("in-memory flush")
        }
        ReportFormat::Markdown => markdown(report).into_bytes(),
    }
}

fn markdown(report: &CensusReport) -> String {
    let a = &report.aggregates;
    let opt = |v: Option<usize>| v.map_or("-".to_string(), |x| x.to_string());
    let mut s = String::new();
    let _ = writeln!(s, "# Coevent census, n = {}\n", report.n);
    let _ = writeln!(s, "| total | classical | unital | additive | multiplicative | quadratic | gen1 | gen2 | actualized |");
    let _ = writeln!(s, "|---|---|---|---|---|---|---|---|---|");
    let _ = writeln!(
        s,
        "| {} | {} | {} | {} | {} | {} | {} | {} | {} |\n",
        a.total,
        a.classical,
        a.unital,
        a.additive,
        a.multiplicative,
        a.quadratic,
        opt(a.gen1),
        opt(a.gen2),
        opt(a.actualized)
    );
    if !report.inclusion.is_empty() {
        let keys: Vec<FilterMode> = report.inclusion.keys().copied().collect();
        let _ = write!(s, "| both feasible |");
        for k in &keys {
            let _ = write!(s, " {k} |");
        }
        let _ = writeln!(s, "\n|---|{}", "---|".repeat(keys.len()));
        for a in &keys {
            let _ = write!(s, "| {a} |");
            for b in &keys {
                let _ = write!(s, " {} |", report.inclusion[a][b]);
            }
            let _ = writeln!(s);
        }
        let _ = writeln!(s);
    }
    let _ = writeln!(s, "| coevent | classical | unital | additive | multiplicative | quadratic | gen1 | gen2 | actualized |");
    let _ = writeln!(s, "|---|---|---|---|---|---|---|---|---|");
    let mark = |b: bool| if b { "yes" } else { "" };
    let verdict = |v: Option<&RowVerdict>| match v {
        None => "-",
        Some(r) if r.feasible => "yes",
        Some(_) => "no",
    };
    for r in &report.rows {
        let _ = writeln!(
            s,
            "| `{}` | {} | {} | {} | {} | {} | {} | {} | {} |",
            r.coevent,
            mark(r.classical),
            mark(r.unital),
            mark(r.additive),
            mark(r.multiplicative),
            mark(r.quadratic),
            verdict(r.gen1.as_ref()),
            verdict(r.gen2.as_ref()),
            verdict(r.actualized.as_ref())
        );
    }
    s
}

/// Every q-measure whose singleton and doubleton values are drawn from
/// `values` (at `n = 2` the doubleton is `Ω`). With `up_to_relabelling`, one
/// representative per orbit of the symmetric group on `Ω` is kept.
pub fn measure_grid(n: usize, values: &[Q], up_to_relabelling: bool) -> Result<Vec<QMeasure>, CensusError> {
    let space = SampleSpace::new(n)?;
    let npairs = element_pairs(space).len();
    let slots = n + npairs;
    let perms = permutations(n);
    let mut seen: BTreeSet<Vec<Q>> = BTreeSet::new();
    let mut out = Vec::new();
    let mut digits = vec![0usize; slots];
    loop {
        let picked: Vec<Q> = digits.iter().map(|&d| values[d].clone()).collect();
        if let Ok(mu) = extend_from_pairs(space, &picked[..n], &picked[n..]) {
            let keep = if up_to_relabelling {
                let canon = perms.iter().map(|p| mu.permute(p).values().to_vec()).min().expect("identity permutation");
                seen.insert(canon)
            } else {
                seen.insert(mu.values().to_vec())
            };
            if keep {
                out.push(mu);
            }
        }
        let mut k = slots;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < values.len() {
                break;
            }
            digits[k] = 0;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniquenessEntry {
    pub measure: MeasureFile,
    /// Quadratic coevents the measure generates, per filter.
    pub found: BTreeMap<FilterMode, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniquenessReport {
    pub n: usize,
    pub modes: Vec<FilterMode>,
    pub entries: Vec<UniquenessEntry>,
    /// Entries with two or more quadratic coevents under gen1 or gen2.
    pub flagged: Vec<usize>,
    pub feasible_verdicts: usize,
    pub branches_explored: u64,
}

/// For each measure, every quadratic coevent it 1-generates, 2-generates or
/// actualizes (per `modes`).
pub fn uniqueness_experiment(
    measures: &[QMeasure],
    modes: &[FilterMode],
    options: &SearchOptions,
    jobs: usize,
) -> Result<UniquenessReport, CensusError> {
    let Some(first) = measures.first() else {
        return Ok(UniquenessReport {
            n: 0,
            modes: modes.to_vec(),
            entries: Vec::new(),
            flagged: Vec::new(),
            feasible_verdicts: 0,
            branches_explored: 0,
        });
    };
    let space = first.space();
    let quadratics: Vec<Coevent> = enumerate_coevents(space, Some(ClassFilter::Quadratic))?.collect();
    let results = pool(jobs)?.install(|| {
        measures
            .par_iter()
            .map(|mu| -> Result<(UniquenessEntry, usize, u64), CensusError> {
                let mut found = BTreeMap::new();
                let mut feasible = 0;
                let mut branches = 0;
                for &mode in modes {
                    let mut list = Vec::new();
                    for phi in &quadratics {
                        let p = GenerationProblem::new(*phi, mode, MeasureSpec::Fixed(mu.clone()))?;
                        let v = decide(&p, options)?;
                        branches += v.branches_explored;
                        if v.is_feasible() {
                            feasible += 1;
                            list.push(phi.to_string());
                        }
                    }
                    found.insert(mode, list);
                }
                Ok((UniquenessEntry { measure: MeasureFile::from_measure(mu), found }, feasible, branches))
            })
            .collect::<Result<Vec<_>, _>>()
    })?;
    let mut entries = Vec::with_capacity(results.len());
    let mut feasible_verdicts = 0;
    let mut branches_explored = 0;
    for (e, f, b) in results {
        entries.push(e);
        feasible_verdicts += f;
        branches_explored += b;
    }
    let flagged = entries
        .iter()
        .enumerate()
        .filter(|(_, e)| {
            [FilterMode::Gen1, FilterMode::Gen2].iter().any(|m| e.found.get(m).is_some_and(|l| l.len() >= 2))
        })
        .map(|(i, _)| i)
        .collect();
    Ok(UniquenessReport { n: space.n(), modes: modes.to_vec(), entries, flagged, feasible_verdicts, branches_explored })
}
