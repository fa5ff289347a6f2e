//! Reports and commands behind the `koszul` binary: analyze, verify, sweep
//! and diagram.
//!
//! Exit codes: 0 success, 1 invalid input or I/O failure, 2 a verification
//! failed.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::ainf::{CategoryDocument, MorphismId, SignedTerm};
use crate::combinatorics::{
    check_dagger_bound, check_inversion, d_dagger, d_map, sequence_shape_violations,
    ExtendedVertex, Flavor,
};
use crate::diagram::{check_chain_bijection, relation_polygon, render_svg, validate_polygon};
use crate::dual::{
    adjudicate_sign, build_dual, compare_quadratic, compare_with_closed_form, DualCategory,
    DualError, SignAdjudication, SignConvention,
};
use crate::ext::{ext_table, oracle_agreement, ExtEntry, ExtError};
use crate::pattern::{
    enumerate_patterns, PatternDocument, PatternError, Relation, RelationPattern, Vertex,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("invalid input: {0}")]
    Input(#[from] PatternError),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("sweep bound {n_max} exceeds the configured ceiling {ceiling}")]
    SweepCeiling { n_max: usize, ceiling: usize },
    #[error("{0}")]
    Dual(#[from] DualError),
    #[error("invalid thread count {0}")]
    Threads(String),
    #[error("ext oracle: {0}")]
    Ext(#[from] ExtError),
}

impl ServiceError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ServiceError::Dual(DualError::NoConsistentConvention) | ServiceError::Ext(_) => {
                EXIT_VERIFY
            }
            _ => EXIT_INPUT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConventionChoice {
    #[default]
    Default,
    Fixed(SignConvention),
    /// Adjudicate over all patterns up to the given size and use the winner.
    Auto,
}

impl std::str::FromStr for ConventionChoice {
    type Err = DualError;
    fn from_str(s: &str) -> Result<Self, DualError> {
        if s == "auto" {
            Ok(ConventionChoice::Auto)
        } else {
            s.parse().map(ConventionChoice::Fixed)
        }
    }
}

#[derive(Debug, Clone)]
pub struct Options {
    pub convention: ConventionChoice,
    /// Pattern bound for sweeps and for `auto` adjudication.
    pub n_max: Option<usize>,
    pub sweep_ceiling: usize,
    /// Worker threads for sweeps; `None` uses the global pool.
    pub threads: Option<usize>,
    pub timings: bool,
    /// Flip one μ entry before verifying (for exercising the failure path).
    pub corrupt_mu: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            convention: ConventionChoice::Default,
            n_max: None,
            sweep_ceiling: 8,
            threads: None,
            timings: false,
            corrupt_mu: false,
        }
    }
}

const AUTO_N_MAX: usize = 4;

fn resolve_convention(
    opts: &Options,
) -> Result<(SignConvention, Option<SignAdjudication>), ServiceError> {
    match opts.convention {
        ConventionChoice::Default => Ok((SignConvention::default(), None)),
        ConventionChoice::Fixed(c) => Ok((c, None)),
        ConventionChoice::Auto => {
            let a = adjudicate_sign(opts.n_max.unwrap_or(AUTO_N_MAX).max(3))?;
            Ok((a.default_convention()?, Some(a)))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

const TOOL: ToolInfo = ToolInfo {
    name: env!("CARGO_PKG_NAME"),
    version: env!("CARGO_PKG_VERSION"),
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PatternEcho {
    pub n: usize,
    pub relations: Vec<[Vertex; 2]>,
    pub discarded: Vec<[Vertex; 2]>,
}

fn pairs(rels: &[Relation]) -> Vec<[Vertex; 2]> {
    rels.iter().map(|r| [r.source, r.target]).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequenceBlock {
    pub plain: Vec<Vec<Vertex>>,
    pub dagger: Vec<Vec<Vertex>>,
    pub d: Vec<ExtendedVertex>,
    pub d_dagger: Vec<ExtendedVertex>,
}

impl SequenceBlock {
    pub fn of(p: &RelationPattern) -> Self {
        let t = p.sequences();
        SequenceBlock {
            plain: t.plain.iter().map(|s| s.values.clone()).collect(),
            dagger: t.dagger.iter().map(|s| s.values.clone()).collect(),
            d: p.vertices().map(|v| d_map(p, v)).collect(),
            d_dagger: p.vertices().map(|v| d_dagger(p, v)).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HomRow {
    pub source: Vertex,
    pub target: Vertex,
    pub degree: i64,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

impl Verdict {
    fn new(check: &str, passed: bool, detail: impl Into<String>) -> Self {
        Verdict {
            check: check.to_owned(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Timing {
    pub stage: String,
    pub micros: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepFailure {
    pub pattern: String,
    pub failed_checks: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub n_max: usize,
    /// Number of patterns for each `n = 0..=n_max`.
    pub patterns_per_n: Vec<usize>,
    /// Counts from the brute-force enumerator, for `n <= 5`.
    pub brute_force_counts: Vec<usize>,
    pub patterns_checked: usize,
    pub failures: Vec<SweepFailure>,
    /// The failing pattern with the smallest `(n, relations)`.
    pub minimal_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub tool: ToolInfo,
    pub command: String,
    pub convention: SignConvention,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pattern: Option<PatternEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sequences: Option<SequenceBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hom_table: Option<Vec<HomRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_table: Option<CategoryDocument>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ext_table: Option<Vec<ExtEntry>>,
    pub verdicts: Vec<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adjudication: Option<SignAdjudication>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Vec<Timing>>,
    pub passed: bool,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            EXIT_OK
        } else {
            EXIT_VERIFY
        }
    }
}

struct Clock {
    enabled: bool,
    stages: Vec<Timing>,
}

impl Clock {
    fn new(enabled: bool) -> Self {
        Clock {
            enabled,
            stages: Vec::new(),
        }
    }

    fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if self.enabled {
            self.stages.push(Timing {
                stage: stage.to_owned(),
                micros: start.elapsed().as_micros(),
            });
        }
        out
    }

    fn finish(self) -> Option<Vec<Timing>> {
        self.enabled.then_some(self.stages)
    }
}

pub fn read_input(path: &Path) -> Result<String, ServiceError> {
    std::fs::read_to_string(path).map_err(|source| ServiceError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn write_output(path: &Path, bytes: &[u8]) -> Result<(), ServiceError> {
    std::fs::write(path, bytes).map_err(|source| ServiceError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Parse and normalize a pattern document.
pub fn load_pattern(text: &str) -> Result<(RelationPattern, PatternEcho), ServiceError> {
    let normalized = PatternDocument::parse(text)?.normalize()?;
    let echo = PatternEcho {
        n: normalized.pattern.n(),
        relations: pairs(normalized.pattern.relations()),
        discarded: pairs(&normalized.discarded),
    };
    Ok((normalized.pattern, echo))
}

fn hom_rows(dual: &DualCategory) -> Vec<HomRow> {
    dual.hom_table()
        .rows()
        .into_iter()
        .map(|(source, target, degree, dim)| HomRow {
            source,
            target,
            degree,
            dim,
        })
        .collect()
}

fn base_report(command: &str, convention: SignConvention) -> RunReport {
    RunReport {
        tool: TOOL,
        command: command.to_owned(),
        convention,
        pattern: None,
        sequences: None,
        hom_table: None,
        mu_table: None,
        ext_table: None,
        verdicts: Vec::new(),
        sweep: None,
        adjudication: None,
        timings: None,
        passed: true,
    }
}

pub fn cmd_analyze(text: &str, opts: &Options) -> Result<RunReport, ServiceError> {
    let mut clock = Clock::new(opts.timings);
    let (pattern, echo) = clock.time("parse", || load_pattern(text))?;
    let (convention, adjudication) = resolve_convention(opts)?;
    let sequences = clock.time("sequences", || SequenceBlock::of(&pattern));
    let dual = clock.time("build", || build_dual(&pattern, convention));
    let mut report = base_report("analyze", convention);
    report.pattern = Some(echo);
    report.sequences = Some(sequences);
    report.hom_table = Some(hom_rows(&dual));
    report.mu_table = Some(dual.category().to_document());
    report.adjudication = adjudication;
    report.timings = clock.finish();
    Ok(report)
}

/// Flip the sign of the first μ entry whose flip the verifier can see, or
/// failing that drop the first entry whose removal it can see. Some tables
/// (a single higher product, say) admit no detectable corruption; then the
/// category is returned unchanged with `None`.
pub fn corrupt_mu(dual: &DualCategory) -> (crate::ainf::GradedBasisCategory, Option<String>) {
    let cat = dual.category();
    let max_chain = dual.pattern().n() + 1;
    let entries: Vec<(Vec<MorphismId>, SignedTerm)> = cat
        .mu_entries()
        .into_iter()
        .map(|(k, v)| (k.to_vec(), v.clone()))
        .collect();
    let describe = |k: &[MorphismId]| -> String {
        let labels: Vec<&str> = k.iter().map(|&m| cat.label(m)).collect();
        labels.join(", ")
    };
    for (args, term) in &entries {
        let flipped = cat.with_mu(args, term.negated()).expect("same support");
        if !flipped.verify_ainfty(max_chain).passed() {
            return (flipped, Some(format!("negated μ({})", describe(args))));
        }
    }
    for (args, _) in &entries {
        let dropped = cat
            .with_mu(args, SignedTerm::zero())
            .expect("removal is valid");
        if !dropped.verify_ainfty(max_chain).passed() {
            return (dropped, Some(format!("removed μ({})", describe(args))));
        }
    }
    (cat.clone(), None)
}

/// The per-pattern verification suite.
fn verify_suite(
    pattern: &RelationPattern,
    dual: &DualCategory,
    corrupted: Option<&crate::ainf::GradedBasisCategory>,
    clock: &mut Clock,
    ainfty: Option<Verdict>,
) -> Result<(Vec<Verdict>, Vec<ExtEntry>), ServiceError> {
    let mut v = Vec::new();
    let n = pattern.n();
    let ainfty = match ainfty {
        Some(verdict) => verdict,
        None => {
            let cat = corrupted.unwrap_or(dual.category());
            let r = clock.time("a-infinity", || cat.verify_ainfty(n + 1));
            let detail = match r.failures.first() {
                None => format!(
                    "{} chains up to length {} satisfy the relations",
                    r.chains_checked,
                    n + 1
                ),
                Some(f) => format!("{} failing chains; first: {f}", r.failures.len()),
            };
            Verdict::new("a-infinity", r.passed(), detail)
        }
    };
    v.push(ainfty);

    let shape = sequence_shape_violations(pattern);
    v.push(Verdict::new(
        "sequence-shape",
        shape.is_empty(),
        if shape.is_empty() {
            "plain sequences decrease, dagger sequences increase".to_owned()
        } else {
            format!("violations at {shape:?}")
        },
    ));
    let inv = check_inversion(pattern);
    v.push(Verdict::new(
        "inversion",
        inv.passed(),
        format!(
            "{} plain and {} dagger terms, {} counterexamples",
            inv.checked_plain,
            inv.checked_dagger,
            inv.counterexamples.len()
        ),
    ));
    let bound = check_dagger_bound(pattern);
    v.push(Verdict::new(
        "dagger-bound",
        bound.passed(),
        format!(
            "{} vertices checked, counterexamples {:?}",
            bound.checked, bound.counterexamples
        ),
    ));
    let table = pattern.sequences();
    let (lp, ld) = (
        table.total_length(Flavor::Plain),
        table.total_length(Flavor::Dagger),
    );
    v.push(Verdict::new(
        "counting-duality",
        lp == ld,
        format!("sum of plain lengths {lp}, sum of dagger lengths {ld}"),
    ));

    let ext = clock.time("ext-oracle", || oracle_agreement(dual))?;
    let detail = if ext.passed() {
        format!("Ext dimensions match hom dimensions up to degree {}", n + 1)
    } else {
        format!(
            "mismatches {:?}, length mismatches {:?}, non-terminating {:?}, integral {}",
            ext.mismatches, ext.length_mismatches, ext.non_terminating, ext.integral
        )
    };
    v.push(Verdict::new("oracle-agreement", ext.passed(), detail));
    let entries = ext_table(pattern)?;

    let bij = clock.time("chains", || check_chain_bijection(pattern, dual));
    v.push(Verdict::new(
        "chain-bijection",
        bij.passed(),
        format!(
            "{} admissible chains, {} nonzero products, zero chains {:?}, unmatched {:?}",
            bij.chains, bij.products, bij.zero_chains, bij.unmatched_products
        ),
    ));

    let mut problems = Vec::new();
    for j in 1..=pattern.m() {
        problems.extend(validate_polygon(pattern, &relation_polygon(pattern, j)?));
    }
    v.push(Verdict::new(
        "relation-polygons",
        problems.is_empty(),
        if problems.is_empty() {
            format!("{} polygons consistent with the marked orders", pattern.m())
        } else {
            problems.join("; ")
        },
    ));

    if pattern.is_quadratic() {
        let q = clock.time("quadratic", || {
            compare_quadratic(pattern, dual.convention())
        })?;
        v.push(Verdict::new(
            "quadratic-duality",
            q.passed,
            format!(
                "complement {:?}, isomorphic {}, exchange violations {:?}, binary only {}",
                q.complement, q.isomorphic, q.exchange_violations, q.only_binary_products
            ),
        ));
    }
    if let Some(k) = pattern.as_bnk() {
        let c = compare_with_closed_form(n, k, dual.convention())?;
        let chains: Vec<String> = c
            .chains
            .iter()
            .map(|ch| format!("{:?} -> {}", ch.chain, ch.value))
            .collect();
        v.push(Verdict::new(
            "closed-form",
            c.passed,
            format!(
                "k = {k}, hom mismatches {:?}, chains {}",
                c.hom_mismatches,
                chains.join(", ")
            ),
        ));
    }
    Ok((v, entries.entries))
}

pub fn cmd_verify(text: &str, opts: &Options) -> Result<RunReport, ServiceError> {
    let mut clock = Clock::new(opts.timings);
    let (pattern, echo) = clock.time("parse", || load_pattern(text))?;
    let (convention, adjudication) = resolve_convention(opts)?;
    let dual = clock.time("build", || build_dual(&pattern, convention));
    let mut report = base_report("verify", convention);
    let corrupted = if opts.corrupt_mu {
        let (cat, what) = corrupt_mu(&dual);
        report.verdicts.push(Verdict::new(
            "corruption",
            true,
            what.unwrap_or_else(|| "no corruption of this table is detectable".to_owned()),
        ));
        Some(cat)
    } else {
        None
    };
    let (verdicts, ext) = verify_suite(&pattern, &dual, corrupted.as_ref(), &mut clock, None)?;
    report.verdicts.extend(verdicts);
    report.passed = report.verdicts.iter().all(|v| v.passed);
    report.pattern = Some(echo);
    report.sequences = Some(SequenceBlock::of(&pattern));
    report.hom_table = Some(hom_rows(&dual));
    report.mu_table = Some(corrupted.as_ref().unwrap_or(dual.category()).to_document());
    report.ext_table = Some(ext);
    report.adjudication = adjudication;
    report.timings = clock.finish();
    Ok(report)
}

/// Count patterns on `[0, n]` by filtering all subsets of intervals.
pub fn brute_force_pattern_count(n: usize) -> usize {
    let intervals: Vec<(usize, usize)> = (0..=n)
        .flat_map(|s| (s + 2..=n).map(move |t| (s, t)))
        .collect();
    assert!(intervals.len() < 31, "brute force is for small n");
    (0u32..1 << intervals.len())
        .filter(|mask| {
            let chosen: Vec<(usize, usize)> = (0..intervals.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| intervals[i])
                .collect();
            chosen.iter().all(|a| {
                chosen
                    .iter()
                    .all(|b| a == b || !((b.0 <= a.0 && a.1 <= b.1) || (a.0 <= b.0 && b.1 <= a.1)))
            })
        })
        .count()
}

pub fn cmd_sweep(opts: &Options) -> Result<RunReport, ServiceError> {
    let n_max = opts.n_max.unwrap_or(opts.sweep_ceiling);
    if n_max > opts.sweep_ceiling {
        return Err(ServiceError::SweepCeiling {
            n_max,
            ceiling: opts.sweep_ceiling,
        });
    }
    let run = || sweep_inner(n_max, opts);
    match opts.threads {
        None => run(),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| ServiceError::Threads(e.to_string()))?
            .install(run),
    }
}

fn sweep_inner(n_max: usize, opts: &Options) -> Result<RunReport, ServiceError> {
    use rayon::prelude::*;

    let mut clock = Clock::new(opts.timings);
    let adjudication = if n_max >= 3 {
        Some(clock.time("adjudication", || adjudicate_sign(n_max))?)
    } else {
        None
    };
    let convention = match opts.convention {
        ConventionChoice::Fixed(c) => c,
        ConventionChoice::Default => SignConvention::default(),
        ConventionChoice::Auto => match &adjudication {
            Some(a) => a.default_convention()?,
            None => SignConvention::default(),
        },
    };
    let per_n: Vec<Vec<RelationPattern>> = (0..=n_max).map(enumerate_patterns).collect();
    let patterns: Vec<&RelationPattern> = per_n.iter().flatten().collect();
    let results: Vec<Result<Option<SweepFailure>, ServiceError>> = clock.time("suite", || {
        patterns
            .par_iter()
            .map(|&p| {
                let dual = build_dual(p, convention);
                let known = adjudication.as_ref().map(|a| {
                    let failed = a
                        .verdict(convention)
                        .failures
                        .iter()
                        .find(|f| f.pattern == p.to_string());
                    match failed {
                        None => Verdict::new("a-infinity", true, ""),
                        Some(f) => Verdict::new("a-infinity", false, f.first_failure.to_string()),
                    }
                });
                let mut quiet = Clock::new(false);
                let (verdicts, _) = verify_suite(p, &dual, None, &mut quiet, known)?;
                let failed: Vec<String> = verdicts
                    .iter()
                    .filter(|v| !v.passed)
                    .map(|v| v.check.clone())
                    .collect();
                Ok((!failed.is_empty()).then(|| SweepFailure {
                    pattern: p.to_string(),
                    failed_checks: failed,
                }))
            })
            .collect()
    });
    let mut failures = Vec::new();
    for r in results {
        if let Some(f) = r? {
            failures.push(f);
        }
    }
    let patterns_per_n: Vec<usize> = per_n.iter().map(Vec::len).collect();
    let brute_force_counts: Vec<usize> =
        (0..=n_max.min(5)).map(brute_force_pattern_count).collect();
    let counts_agree = brute_force_counts
        .iter()
        .zip(&patterns_per_n)
        .all(|(a, b)| a == b);
    let adjudicated = adjudication.as_ref().is_none_or(|a| a.chosen.is_some());

    let mut report = base_report("sweep", convention);
    report.verdicts.push(Verdict::new(
        "enumeration",
        counts_agree,
        format!("counts {patterns_per_n:?}, brute force {brute_force_counts:?}"),
    ));
    if let Some(a) = &adjudication {
        let summary: Vec<String> = a
            .verdicts
            .iter()
            .map(|v| format!("{}: {} failing patterns", v.convention, v.failures.len()))
            .collect();
        report.verdicts.push(Verdict::new(
            "sign-adjudication",
            adjudicated,
            summary.join(", "),
        ));
    }
    report.verdicts.push(Verdict::new(
        "suite",
        failures.is_empty(),
        format!("{} patterns, {} failing", patterns.len(), failures.len()),
    ));
    report.passed = report.verdicts.iter().all(|v| v.passed);
    report.sweep = Some(SweepSummary {
        n_max,
        patterns_per_n,
        brute_force_counts,
        patterns_checked: patterns.len(),
        minimal_failure: failures.first().map(|f| f.pattern.clone()),
        failures,
    });
    report.adjudication = adjudication;
    report.timings = clock.finish();
    Ok(report)
}

pub fn cmd_diagram(text: &str) -> Result<Vec<u8>, ServiceError> {
    let (pattern, _) = load_pattern(text)?;
    Ok(render_svg(&pattern))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Human,
    Machine,
}

pub fn render(report: &RunReport, format: Format) -> String {
    match format {
        Format::Machine => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Human => render_human(report),
    }
}

fn render_human(r: &RunReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {} {}", r.tool.name, r.tool.version, r.command);
    let _ = writeln!(s, "convention: {}", r.convention);
    if let Some(p) = &r.pattern {
        let _ = writeln!(s, "pattern: n={} relations={:?}", p.n, p.relations);
        if !p.discarded.is_empty() {
            let _ = writeln!(s, "discarded (contain another relation): {:?}", p.discarded);
        }
    }
    if let Some(q) = &r.sequences {
        let _ = writeln!(s, "sequences:");
        for (p, (a, b)) in q.plain.iter().zip(&q.dagger).enumerate() {
            let _ = writeln!(
                s,
                "  p={p}  d={}  d†={}  a={a:?}  a†={b:?}",
                q.d[p], q.d_dagger[p]
            );
        }
    }
    if let Some(h) = &r.hom_table {
        let _ = writeln!(s, "hom table (source, target, degree, dim):");
        for row in h {
            let _ = writeln!(
                s,
                "  B({}) -> B({})  degree {}  dim {}",
                row.source, row.target, row.degree, row.dim
            );
        }
    }
    if let Some(m) = &r.mu_table {
        let _ = writeln!(s, "objects: {}", m.objects.join(" < "));
        let _ = writeln!(s, "morphisms:");
        for e in &m.morphisms {
            let _ = writeln!(
                s,
                "  {}: {} -> {}  degree {}",
                e.label, e.source, e.target, e.degree
            );
        }
        let _ = writeln!(s, "products (arguments last-applied first):");
        for e in &m.mu {
            let _ = writeln!(
                s,
                "  mu^{}({}) = {} {}",
                e.arity,
                e.arguments.join(", "),
                e.sign,
                e.result
            );
        }
    }
    if let Some(e) = &r.ext_table {
        let _ = writeln!(s, "ext table (p, q, degree, dim):");
        for x in e {
            let _ = writeln!(s, "  Ext^{}(S({}), S({})) = {}", x.degree, x.p, x.q, x.dim);
        }
    }
    if let Some(w) = &r.sweep {
        let _ = writeln!(
            s,
            "sweep: n <= {}, {} patterns, per n {:?}, brute force {:?}",
            w.n_max, w.patterns_checked, w.patterns_per_n, w.brute_force_counts
        );
        for f in &w.failures {
            let _ = writeln!(s, "  FAIL {}: {}", f.pattern, f.failed_checks.join(", "));
        }
        if let Some(m) = &w.minimal_failure {
            let _ = writeln!(s, "  minimal failing pattern: {m}");
        }
    }
    if let Some(a) = &r.adjudication {
        let _ = writeln!(s, "sign adjudication over n <= {}:", a.n_max);
        for v in &a.verdicts {
            let _ = writeln!(
                s,
                "  {}: {} patterns, {} failing",
                v.convention,
                v.patterns_checked,
                v.failures.len()
            );
            for f in v.failures.iter().take(3) {
                let _ = writeln!(
                    s,
                    "    {} ({} chains): {}",
                    f.pattern, f.failing_chains, f.first_failure
                );
            }
        }
        match a.chosen {
            Some(c) => {
                let _ = writeln!(s, "  chosen: {c}");
            }
            None => {
                let _ = writeln!(s, "  chosen: none");
            }
        }
    }
    for v in &r.verdicts {
        let _ = writeln!(
            s,
            "[{}] {}: {}",
            if v.passed { "pass" } else { "FAIL" },
            v.check,
            v.detail
        );
    }
    if let Some(t) = &r.timings {
        for x in t {
            let _ = writeln!(s, "time {}: {} us", x.stage, x.micros);
        }
    }
    let _ = writeln!(s, "result: {}", if r.passed { "pass" } else { "FAIL" });
    s
}
