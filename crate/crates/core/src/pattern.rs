//! Relation patterns `(n, S, T)` over the linear quiver `0 -> 1 -> ... -> n`
//! and the monomial path algebra they present.
//!
//! A relation `(s, t)` kills the path from vertex `s` to vertex `t`. The
//! basis of the quotient algebra is the set of surviving paths `(i, j)`,
//! `i <= j`, i.e. those whose vertex interval contains no relation interval.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinatorics::SequenceTable;

/// A vertex of the quiver, `0..=n`.
pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("relation ({s}, {t}) has an endpoint outside [0, {n}]")]
    EndpointOutOfRange { s: i64, t: i64, n: usize },
    #[error("relation ({s}, {t}) has length {len}; relations must have length at least 2")]
    TooShort { s: i64, t: i64, len: i64 },
    #[error("relation ({s}, {t}) is listed more than once")]
    Duplicate { s: usize, t: usize },
    #[error("negative quiver size {0}")]
    NegativeSize(i64),
    #[error("relations are not normalized: {0}")]
    NotNormalized(String),
    #[error("vertex {vertex} is outside [0, {n}]")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("relation ({s}, {t}) is not quadratic")]
    NotQuadratic { s: usize, t: usize },
    #[error("relation index {index} is outside 1..={m}")]
    RelationIndex { index: usize, m: usize },
    #[error("invalid closed-form parameters n = {n}, k = {k}; need 2 <= k <= n")]
    InvalidBnk { n: usize, k: usize },
    #[error("malformed pattern document: {0}")]
    Document(String),
}

/// One monomial relation: the path from `source` to `target` is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Relation {
    pub source: Vertex,
    pub target: Vertex,
}

impl Relation {
    pub fn new(source: Vertex, target: Vertex) -> Self {
        Relation { source, target }
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.target - self.source
    }

    /// `[self] ⊆ [other]` as vertex intervals.
    pub fn inside(&self, other: &Relation) -> bool {
        other.source <= self.source && self.target <= other.target
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.source, self.target)
    }
}

/// A normalized relation pattern. Relations are sorted, pairwise
/// non-nested, and have length at least two; sources and targets are then
/// both strictly increasing.
///
/// The derived sequence table is computed at most once and shared by every
/// consumer of the pattern.
#[derive(Clone)]
pub struct RelationPattern {
    n: usize,
    relations: Vec<Relation>,
    sequences: OnceLock<SequenceTable>,
}

impl PartialEq for RelationPattern {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.relations == other.relations
    }
}

impl Eq for RelationPattern {}

impl std::hash::Hash for RelationPattern {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.relations.hash(state);
    }
}

impl PartialOrd for RelationPattern {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RelationPattern {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.n, &self.relations).cmp(&(other.n, &other.relations))
    }
}

impl fmt::Debug for RelationPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RelationPattern")
            .field("n", &self.n)
            .field("relations", &self.relations)
            .finish()
    }
}

impl fmt::Display for RelationPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} [", self.n)?;
        for (i, r) in self.relations.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "]")
    }
}

/// Result of [`normalize`]: the pattern plus the relations that were
/// discarded because they contain another relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized {
    pub pattern: RelationPattern,
    pub discarded: Vec<Relation>,
}

/// Validate raw relation pairs and bring them into normal form.
///
/// Relations whose interval contains another relation's interval are
/// dropped (the quotient algebra does not change) and reported in
/// [`Normalized::discarded`].
pub fn normalize(n: usize, raw: &[(i64, i64)]) -> Result<Normalized, PatternError> {
    let mut rels = Vec::with_capacity(raw.len());
    for &(s, t) in raw {
        if s < 0 || t < 0 || s > n as i64 || t > n as i64 {
            return Err(PatternError::EndpointOutOfRange { s, t, n });
        }
        if t - s < 2 {
            return Err(PatternError::TooShort { s, t, len: t - s });
        }
        rels.push(Relation::new(s as usize, t as usize));
    }
    rels.sort();
    if let Some(w) = rels.windows(2).find(|w| w[0] == w[1]) {
        return Err(PatternError::Duplicate {
            s: w[0].source,
            t: w[0].target,
        });
    }
    let (kept, discarded): (Vec<Relation>, Vec<Relation>) = rels
        .iter()
        .partition(|r| !rels.iter().any(|o| o != *r && o.inside(r)));
    let pattern = RelationPattern::new(n, kept)?;
    Ok(Normalized { pattern, discarded })
}

impl RelationPattern {
    /// Build a pattern from relations that are already in normal form.
    pub fn new(n: usize, relations: Vec<Relation>) -> Result<Self, PatternError> {
        for r in &relations {
            if r.target > n || r.source > r.target {
                return Err(PatternError::EndpointOutOfRange {
                    s: r.source as i64,
                    t: r.target as i64,
                    n,
                });
            }
            if r.len() < 2 {
                return Err(PatternError::TooShort {
                    s: r.source as i64,
                    t: r.target as i64,
                    len: r.len() as i64,
                });
            }
        }
        for w in relations.windows(2) {
            if !(w[0].source < w[1].source && w[0].target < w[1].target) {
                return Err(PatternError::NotNormalized(format!(
                    "{} must precede {} in both endpoints",
                    w[0], w[1]
                )));
            }
        }
        for (i, a) in relations.iter().enumerate() {
            for b in &relations[i + 1..] {
                if a.inside(b) || b.inside(a) {
                    return Err(PatternError::NotNormalized(format!(
                        "{a} and {b} are nested"
                    )));
                }
            }
        }
        Ok(RelationPattern {
            n,
            relations,
            sequences: OnceLock::new(),
        })
    }

    /// Convenience constructor from `(s, t)` pairs, normalizing and
    /// discarding redundant relations.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self, PatternError> {
        let raw: Vec<(i64, i64)> = pairs.iter().map(|&(s, t)| (s as i64, t as i64)).collect();
        normalize(n, &raw).map(|x| x.pattern)
    }

    /// The pattern with no relations (the full path algebra).
    pub fn free(n: usize) -> Self {
        RelationPattern {
            n,
            relations: Vec::new(),
            sequences: OnceLock::new(),
        }
    }

    /// `S_{n,k} = {0, ..., n-k}`, `T_{n,k} = {k, ..., n}`.
    pub fn bnk(n: usize, k: usize) -> Result<Self, PatternError> {
        if k < 2 || k > n {
            return Err(PatternError::InvalidBnk { n, k });
        }
        let rels = (0..=n - k).map(|s| Relation::new(s, s + k)).collect();
        RelationPattern::new(n, rels)
    }

    /// If the pattern equals `S_{n,k}, T_{n,k}` for some `k`, return `k`.
    pub fn as_bnk(&self) -> Option<usize> {
        let k = self.relations.first()?.len();
        RelationPattern::bnk(self.n, k)
            .ok()
            .filter(|b| b == self)
            .map(|_| k)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn m(&self) -> usize {
        self.relations.len()
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<Vertex> {
        0..=self.n
    }

    pub fn sources(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.relations.iter().map(|r| r.source)
    }

    pub fn targets(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.relations.iter().map(|r| r.target)
    }

    pub fn is_target(&self, p: Vertex) -> bool {
        self.relations.iter().any(|r| r.target == p)
    }

    pub fn has_relation(&self, s: Vertex, t: Vertex) -> bool {
        self.relations.contains(&Relation::new(s, t))
    }

    /// 1-based relation lookup, matching the usual `ρ_1, ..., ρ_m` numbering.
    pub fn relation(&self, index: usize) -> Result<Relation, PatternError> {
        if index == 0 || index > self.m() {
            return Err(PatternError::RelationIndex { index, m: self.m() });
        }
        Ok(self.relations[index - 1])
    }

    pub fn is_quadratic(&self) -> bool {
        self.relations.iter().all(|r| r.len() == 2)
    }

    fn check_vertex(&self, v: Vertex) -> Result<(), PatternError> {
        if v > self.n {
            Err(PatternError::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }

    /// Whether the path from `i` to `j` is a nonzero basis element.
    pub fn path_survives(&self, i: Vertex, j: Vertex) -> Result<bool, PatternError> {
        self.check_vertex(i)?;
        self.check_vertex(j)?;
        Ok(self.survives(i, j))
    }

    pub(crate) fn survives(&self, i: Vertex, j: Vertex) -> bool {
        i <= j
            && !self
                .relations
                .iter()
                .any(|r| i <= r.source && r.target <= j)
    }

    /// All surviving paths `(i, j)`, sorted.
    pub fn path_basis(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for i in self.vertices() {
            for j in i..=self.n {
                if self.survives(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Product of basis paths: `(j, k) · (i, j) = (i, k)` if that path
    /// survives. Non-composable or killed products are `None`.
    pub fn compose_paths(
        &self,
        second: (Vertex, Vertex),
        first: (Vertex, Vertex),
    ) -> Option<(Vertex, Vertex)> {
        (first.1 == second.0 && self.survives(first.0, second.1)).then_some((first.0, second.1))
    }

    /// Complement of a quadratic pattern: starts `{0..n-2} \ S`.
    pub fn quadratic_complement(&self) -> Result<RelationPattern, PatternError> {
        if let Some(r) = self.relations.iter().find(|r| r.len() != 2) {
            return Err(PatternError::NotQuadratic {
                s: r.source,
                t: r.target,
            });
        }
        let rels = (0..=self.n.saturating_sub(2))
            .filter(|&s| s + 2 <= self.n && !self.relations.iter().any(|r| r.source == s))
            .map(|s| Relation::new(s, s + 2))
            .collect();
        RelationPattern::new(self.n, rels)
    }

    /// The (lazily computed, write-once) sequence table of this pattern.
    pub fn sequences(&self) -> &SequenceTable {
        self.sequences.get_or_init(|| SequenceTable::compute(self))
    }
}

/// Input document: `{"n": 6, "relations": [[0, 3], [2, 4], [3, 6]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternDocument {
    pub n: i64,
    #[serde(default)]
    pub relations: Vec<[i64; 2]>,
}

impl PatternDocument {
    pub fn parse(text: &str) -> Result<Self, PatternError> {
        serde_json::from_str(text).map_err(|e| PatternError::Document(e.to_string()))
    }

    pub fn normalize(&self) -> Result<Normalized, PatternError> {
        if self.n < 0 {
            return Err(PatternError::NegativeSize(self.n));
        }
        let raw: Vec<(i64, i64)> = self.relations.iter().map(|r| (r[0], r[1])).collect();
        normalize(self.n as usize, &raw)
    }

    pub fn from_pattern(p: &RelationPattern) -> Self {
        PatternDocument {
            n: p.n() as i64,
            relations: p
                .relations()
                .iter()
                .map(|r| [r.source as i64, r.target as i64])
                .collect(),
        }
    }
}

/// Every normalized pattern on `[0, n]`, in canonical order.
///
/// Patterns are chains of intervals of length at least two with strictly
/// increasing sources and targets.
pub fn enumerate_patterns(n: usize) -> Vec<RelationPattern> {
    let intervals: Vec<Relation> = (0..=n)
        .flat_map(|s| (s + 2..=n).map(move |t| Relation::new(s, t)))
        .collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn walk(
        n: usize,
        intervals: &[Relation],
        start: usize,
        current: &mut Vec<Relation>,
        out: &mut Vec<RelationPattern>,
    ) {
        out.push(RelationPattern {
            n,
            relations: current.clone(),
            sequences: OnceLock::new(),
        });
        for (k, r) in intervals.iter().enumerate().skip(start) {
            if let Some(last) = current.last() {
                if !(r.source > last.source && r.target > last.target) {
                    continue;
                }
            }
            current.push(*r);
            walk(n, intervals, k + 1, current, out);
            current.pop();
        }
    }
    walk(n, &intervals, 0, &mut current, &mut out);
    out.sort();
    out
}

/// Every normalized pattern with `n <= n_max`.
pub fn enumerate_patterns_up_to(n_max: usize) -> Vec<RelationPattern> {
    (0..=n_max).flat_map(enumerate_patterns).collect()
}

/// The worked examples used throughout the tests and the example programs.
pub mod fixtures {
    use super::{Relation, RelationPattern};

    fn make(n: usize, rels: &[(usize, usize)]) -> RelationPattern {
        RelationPattern::new(n, rels.iter().map(|&(s, t)| Relation::new(s, t)).collect())
            .expect("fixture patterns are normalized")
    }

    /// `Δ_3` with the single relation `α_3 α_2 α_1`.
    pub fn a1() -> RelationPattern {
        make(3, &[(0, 3)])
    }

    /// `Δ_6` with `α_3 α_2 α_1` and `α_6 α_5 α_4`.
    pub fn a2() -> RelationPattern {
        make(6, &[(0, 3), (3, 6)])
    }

    /// `Δ_6` with `α_3 α_2 α_1`, `α_4 α_3` and `α_6 α_5 α_4`.
    pub fn a3() -> RelationPattern {
        make(6, &[(0, 3), (2, 4), (3, 6)])
    }
}
