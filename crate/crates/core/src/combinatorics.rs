//! The maps `d`, `d†` and the index sequences that carry the degree
//! structure of the Koszul dual.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::pattern::{RelationPattern, Vertex};

/// A vertex value extended by `-∞` (the empty maximum of `d`) and `+∞`
/// (the empty minimum of `d†`). Ordered `-∞ < 0 < ... < n < +∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtendedVertex {
    NegInf,
    Finite(Vertex),
    PosInf,
}

impl ExtendedVertex {
    pub fn finite(self) -> Option<Vertex> {
        match self {
            ExtendedVertex::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedVertex::Finite(_))
    }
}

impl fmt::Display for ExtendedVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedVertex::NegInf => f.write_str("-inf"),
            ExtendedVertex::Finite(v) => write!(f, "{v}"),
            ExtendedVertex::PosInf => f.write_str("+inf"),
        }
    }
}

impl Serialize for ExtendedVertex {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtendedVertex::Finite(v) => serializer.serialize_u64(*v as u64),
            other => serializer.serialize_str(&other.to_string()),
        }
    }
}

/// `d(p) = max { s_j | t_j <= p }`.
pub fn d_map(pattern: &RelationPattern, p: Vertex) -> ExtendedVertex {
    pattern
        .relations()
        .iter()
        .filter(|r| r.target <= p)
        .map(|r| r.source)
        .max()
        .map_or(ExtendedVertex::NegInf, ExtendedVertex::Finite)
}

/// `d†(p) = min { t_j | s_j >= p }`.
pub fn d_dagger(pattern: &RelationPattern, p: Vertex) -> ExtendedVertex {
    pattern
        .relations()
        .iter()
        .filter(|r| r.source >= p)
        .map(|r| r.target)
        .min()
        .map_or(ExtendedVertex::PosInf, ExtendedVertex::Finite)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    /// Built from `d`, strictly decreasing.
    Plain,
    /// Built from `d†`, strictly increasing.
    Dagger,
}

impl Flavor {
    pub fn opposite(self) -> Flavor {
        match self {
            Flavor::Plain => Flavor::Dagger,
            Flavor::Dagger => Flavor::Plain,
        }
    }
}

/// `a_0, a_1, ..., a_l` for one base vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtIndexSequence {
    pub base: Vertex,
    pub flavor: Flavor,
    pub values: Vec<Vertex>,
}

impl ExtIndexSequence {
    /// `l_p` (or `l_p†`): the last valid index.
    pub fn length(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, i: usize) -> Option<Vertex> {
        self.values.get(i).copied()
    }

    /// The index `i` with `a_i = q`, if `q` occurs.
    pub fn index_of(&self, q: Vertex) -> Option<usize> {
        self.values.iter().position(|&v| v == q)
    }
}

/// Run the shared recursion: `a_0 = p`, `a_1 = start`, then
/// `a_i = f(a_{i-2})` as long as `f(a_{i-2}) != f(a_{i-1})`.
fn recurse(
    base: Vertex,
    start: Option<Vertex>,
    flavor: Flavor,
    f: impl Fn(Vertex) -> ExtendedVertex,
) -> ExtIndexSequence {
    let mut values = vec![base];
    if let Some(first) = start {
        values.push(first);
        loop {
            let k = values.len();
            let prev2 = f(values[k - 2]);
            let prev1 = f(values[k - 1]);
            if prev2 == prev1 {
                break;
            }
            // f is non-decreasing and a_{i-2}, a_{i-1} are distinct, so the
            // larger argument's image cannot be infinite here.
            let next = prev2
                .finite()
                .expect("sequence recursion produced an infinite term");
            values.push(next);
        }
    }
    ExtIndexSequence {
        base,
        flavor,
        values,
    }
}

/// The plain sequence `{a_i^(p)}`.
pub fn ext_sequence(pattern: &RelationPattern, p: Vertex) -> ExtIndexSequence {
    assert!(p <= pattern.n(), "vertex {p} outside [0, {}]", pattern.n());
    recurse(p, p.checked_sub(1), Flavor::Plain, |v| d_map(pattern, v))
}

/// The dagger sequence `{a_i^(p)†}`; for `p = n` it is just `(n)`.
pub fn ext_sequence_dual(pattern: &RelationPattern, p: Vertex) -> ExtIndexSequence {
    assert!(p <= pattern.n(), "vertex {p} outside [0, {}]", pattern.n());
    let start = (p < pattern.n()).then_some(p + 1);
    recurse(p, start, Flavor::Dagger, |v| d_dagger(pattern, v))
}

/// All sequences of one pattern, both flavors, indexed by base vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequenceTable {
    pub plain: Vec<ExtIndexSequence>,
    pub dagger: Vec<ExtIndexSequence>,
}

impl SequenceTable {
    pub fn compute(pattern: &RelationPattern) -> Self {
        SequenceTable {
            plain: pattern
                .vertices()
                .map(|p| ext_sequence(pattern, p))
                .collect(),
            dagger: pattern
                .vertices()
                .map(|p| ext_sequence_dual(pattern, p))
                .collect(),
        }
    }

    pub fn get(&self, flavor: Flavor, p: Vertex) -> &ExtIndexSequence {
        match flavor {
            Flavor::Plain => &self.plain[p],
            Flavor::Dagger => &self.dagger[p],
        }
    }

    /// `Σ_p l_p` or `Σ_p l_p†`.
    pub fn total_length(&self, flavor: Flavor) -> usize {
        let seqs = match flavor {
            Flavor::Plain => &self.plain,
            Flavor::Dagger => &self.dagger,
        };
        seqs.iter().map(ExtIndexSequence::length).sum()
    }

    /// Degree of the dual morphism `B(p) -> B(q)`, i.e. the `i` with
    /// `a_i^(p) = q`.
    pub fn degree(&self, p: Vertex, q: Vertex) -> Option<usize> {
        self.plain.get(p)?.index_of(q)
    }
}

/// Which reading of the inversion formula to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InversionReading {
    /// Round trip through the opposite flavor: `a_j^(a_j^(p))† = p` and
    /// `a_j^(a_j^(p)†) = p`.
    Symmetric,
    /// The formula with the dagger doubled on the first identity, as the
    /// source typesets it: `a_j^(a_j^(p)†)† = p`.
    Literal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InversionCounterexample {
    pub flavor: Flavor,
    pub p: Vertex,
    pub j: usize,
    /// `a_j^(p)` in the given flavor.
    pub through: Vertex,
    /// What index `j` of the round-trip sequence holds, if it is long enough.
    pub landed: Option<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InversionReport {
    pub reading: InversionReading,
    pub checked_plain: usize,
    pub checked_dagger: usize,
    pub counterexamples: Vec<InversionCounterexample>,
}

impl InversionReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Check the inversion formula under the symmetric reading.
pub fn check_inversion(pattern: &RelationPattern) -> InversionReport {
    check_inversion_with(pattern, InversionReading::Symmetric)
}

pub fn check_inversion_with(
    pattern: &RelationPattern,
    reading: InversionReading,
) -> InversionReport {
    let table = pattern.sequences();
    let mut report = InversionReport {
        reading,
        checked_plain: 0,
        checked_dagger: 0,
        counterexamples: Vec::new(),
    };
    for flavor in [Flavor::Plain, Flavor::Dagger] {
        let back = match (reading, flavor) {
            (InversionReading::Symmetric, f) => f.opposite(),
            (InversionReading::Literal, Flavor::Dagger) => Flavor::Dagger,
            (InversionReading::Literal, Flavor::Plain) => Flavor::Dagger,
        };
        for p in pattern.vertices() {
            let seq = table.get(flavor, p);
            for (j, &q) in seq.values.iter().enumerate() {
                match flavor {
                    Flavor::Plain => report.checked_plain += 1,
                    Flavor::Dagger => report.checked_dagger += 1,
                }
                let landed = table.get(back, q).get(j);
                if landed != Some(p) {
                    report.counterexamples.push(InversionCounterexample {
                        flavor,
                        p,
                        j,
                        through: q,
                        landed,
                    });
                }
            }
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DaggerBoundReport {
    pub checked: usize,
    /// Vertices `p` with `d(d†(p) - 1) > p - 1`.
    pub counterexamples: Vec<Vertex>,
}

impl DaggerBoundReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Check `d(d†(p) - 1) <= p - 1` wherever `d†(p)` is finite.
pub fn check_dagger_bound(pattern: &RelationPattern) -> DaggerBoundReport {
    let mut report = DaggerBoundReport {
        checked: 0,
        counterexamples: Vec::new(),
    };
    for p in pattern.vertices() {
        let Some(t) = d_dagger(pattern, p).finite() else {
            continue;
        };
        report.checked += 1;
        // A finite d† value is a relation target, hence >= 2.
        let lhs = d_map(pattern, t - 1);
        let ok = match (lhs, p.checked_sub(1)) {
            (ExtendedVertex::NegInf, _) => true,
            (ExtendedVertex::Finite(v), Some(bound)) => v <= bound,
            _ => false,
        };
        if !ok {
            report.counterexamples.push(p);
        }
    }
    report
}

/// Shape violations of the sequences: plain ones must strictly decrease,
/// dagger ones strictly increase, all terms in `[0, n]`, with the fixed
/// first two terms.
pub fn sequence_shape_violations(pattern: &RelationPattern) -> Vec<(Flavor, Vertex)> {
    let table = pattern.sequences();
    let n = pattern.n();
    let mut bad = Vec::new();
    for p in pattern.vertices() {
        let plain = &table.plain[p];
        let ok = plain.values[0] == p
            && (p == 0 || plain.get(1) == Some(p - 1))
            && plain.values.windows(2).all(|w| w[1] < w[0]);
        if !ok {
            bad.push((Flavor::Plain, p));
        }
        let dagger = &table.dagger[p];
        let ok = dagger.values[0] == p
            && (p == n || dagger.get(1) == Some(p + 1))
            && dagger.values.windows(2).all(|w| w[1] > w[0])
            && dagger.values.iter().all(|&v| v <= n);
        if !ok {
            bad.push((Flavor::Dagger, p));
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::{enumerate_patterns, fixtures, RelationPattern};
    use ExtendedVertex::*;

    #[test]
    fn d_values() {
        let a3 = fixtures::a3();
        assert_eq!(d_map(&a3, 5), Finite(2));
        assert_eq!(d_map(&a3, 3), Finite(0));
        assert_eq!(d_map(&a3, 2), NegInf);
        let free = RelationPattern::free(4);
        assert!((0..=4).all(|p| d_map(&free, p) == NegInf));
        assert!((0..=4).all(|p| d_dagger(&free, p) == PosInf));
        assert_eq!(d_dagger(&fixtures::a1(), 0), Finite(3));
        assert_eq!(d_dagger(&a3, 1), Finite(4));
        assert_eq!(d_dagger(&a3, 4), PosInf);
    }

    #[test]
    fn extended_order() {
        assert!(NegInf < Finite(0));
        assert!(Finite(100) < PosInf);
        assert_eq!(serde_json::to_string(&NegInf).unwrap(), "\"-inf\"");
        assert_eq!(serde_json::to_string(&Finite(3)).unwrap(), "3");
    }

    #[test]
    fn worked_sequences() {
        let a3 = fixtures::a3();
        assert_eq!(ext_sequence(&a3, 6).values, vec![6, 5, 3, 2, 0]);
        assert_eq!(ext_sequence(&a3, 6).length(), 4);
        assert_eq!(ext_sequence(&a3, 4).values, vec![4, 3, 2, 0]);
        assert_eq!(ext_sequence(&a3, 0).values, vec![0]);
        assert_eq!(ext_sequence(&a3, 0).length(), 0);
        assert_eq!(ext_sequence_dual(&fixtures::a1(), 0).values, vec![0, 1, 3]);
        assert_eq!(ext_sequence_dual(&a3, 2).values, vec![2, 3, 4, 6]);
        assert_eq!(ext_sequence_dual(&a3, 6).values, vec![6]);
    }

    #[test]
    fn inversion_on_fixtures() {
        let a3 = fixtures::a3();
        let r = check_inversion(&a3);
        assert!(r.passed(), "{r:?}");
        // Seven plain sequences of total length 12 plus the a_0 entries.
        assert_eq!(a3.sequences().total_length(Flavor::Plain), 12);
        assert_eq!(a3.sequences().total_length(Flavor::Dagger), 12);
        assert_eq!(r.checked_plain, 12 + 7);
        assert_eq!(r.checked_dagger, 12 + 7);

        let a1 = fixtures::a1();
        let t = a1.sequences();
        assert_eq!(t.plain[3].get(2), Some(0));
        assert_eq!(t.dagger[0].get(2), Some(3));
        assert!(check_inversion(&a1).passed());
        assert!(check_inversion(&RelationPattern::free(5)).passed());
    }

    #[test]
    fn literal_reading_fails() {
        // The doubled dagger moves strictly upward twice, so it can only
        // close at j = 0.
        let r = check_inversion_with(&fixtures::a1(), InversionReading::Literal);
        assert!(!r.passed());
        assert!(r.counterexamples.iter().all(|c| c.j >= 1));
    }

    #[test]
    fn dagger_bound_fixtures() {
        let a3 = fixtures::a3();
        assert_eq!(d_dagger(&a3, 0), Finite(3));
        assert_eq!(d_map(&a3, 2), NegInf);
        assert_eq!(d_dagger(&a3, 3), Finite(6));
        assert_eq!(d_map(&a3, 5), Finite(2));
        let r = check_dagger_bound(&a3);
        assert!(r.passed());
        let r = check_dagger_bound(&RelationPattern::free(4));
        assert!(r.passed());
        assert_eq!(r.checked, 0);
    }

    #[test]
    fn exhaustive_small_lemmas() {
        for n in 0..=7 {
            for p in enumerate_patterns(n) {
                assert!(sequence_shape_violations(&p).is_empty(), "{p}");
                assert!(check_inversion(&p).passed(), "{p}");
                assert!(check_dagger_bound(&p).passed(), "{p}");
                let t = p.sequences();
                assert_eq!(
                    t.total_length(Flavor::Plain),
                    t.total_length(Flavor::Dagger)
                );
                for q in p.vertices() {
                    let seq = &t.plain[q];
                    assert_eq!(seq.length() >= 2, p.is_target(q), "{p} at {q}");
                    if seq.length() >= 2 {
                        assert!(p.has_relation(seq.values[2], q), "{p} at {q}");
                    }
                }
            }
        }
    }

    #[test]
    fn monotone_maps() {
        for p in enumerate_patterns(7) {
            for a in 0..7 {
                assert!(d_map(&p, a) <= d_map(&p, a + 1));
                assert!(d_dagger(&p, a) <= d_dagger(&p, a + 1));
                if let Finite(v) = d_map(&p, a) {
                    assert!(v + 1 < a);
                }
            }
        }
    }
}
