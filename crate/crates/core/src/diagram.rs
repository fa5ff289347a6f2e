//! The combinatorial core of the twisted curve system: the order of marked
//! points along each curve, the relation polygons, the admissible chains, and
//! a schematic SVG rendering.
//!
//! Curve `p` meets curve `i < p` in one point `q_{p,i}`. Along curve `p` the
//! marked points are the root `q_p`, then the dagger side (points `q_{j,p}`
//! with `j > p`), then the plain side (points `q_{p,i}` with `i < p`).

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::ainf::{format_coefficient, SignedTerm};
use crate::combinatorics::ExtIndexSequence;
use crate::dual::DualCategory;
use crate::pattern::{PatternError, RelationPattern, Vertex};

/// The intersection point `q_{upper,lower}` of curves `upper > lower`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MarkedPoint {
    pub upper: Vertex,
    pub lower: Vertex,
}

impl MarkedPoint {
    pub fn new(upper: Vertex, lower: Vertex) -> Self {
        assert!(upper > lower, "q_{{{upper},{lower}}} needs upper > lower");
        MarkedPoint { upper, lower }
    }

    /// The point where curves `a` and `b` meet.
    pub fn between(a: Vertex, b: Vertex) -> Self {
        MarkedPoint::new(a.max(b), a.min(b))
    }

    pub fn lies_on(&self, curve: Vertex) -> bool {
        self.upper == curve || self.lower == curve
    }
}

impl fmt::Display for MarkedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q_{{{},{}}}", self.upper, self.lower)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mark {
    Root(Vertex),
    Point(MarkedPoint),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MarkedCurve {
    pub index: Vertex,
    /// Root first, then `dagger_len` dagger-side points, then the plain side.
    pub marks: Vec<Mark>,
    pub dagger_len: usize,
}

impl MarkedCurve {
    fn points(&self, range: std::ops::Range<usize>) -> Vec<MarkedPoint> {
        self.marks[range]
            .iter()
            .map(|m| match m {
                Mark::Point(q) => *q,
                Mark::Root(_) => unreachable!("root is only at position 0"),
            })
            .collect()
    }

    pub fn dagger_side(&self) -> Vec<MarkedPoint> {
        self.points(1..1 + self.dagger_len)
    }

    pub fn plain_side(&self) -> Vec<MarkedPoint> {
        self.points(1 + self.dagger_len..self.marks.len())
    }

    /// All marked points after the root, in order.
    pub fn core_points(&self) -> Vec<MarkedPoint> {
        self.points(1..self.marks.len())
    }

    pub fn position(&self, q: MarkedPoint) -> Option<usize> {
        self.marks.iter().position(|m| *m == Mark::Point(q))
    }
}

/// Odd indices ascending, then even indices descending, over `1..=l`.
fn turnaround(seq: &ExtIndexSequence, odd_first: bool) -> Vec<Vertex> {
    let l = seq.length();
    let (first, second) = if odd_first { (1, 2) } else { (2, 1) };
    let mut out: Vec<Vertex> = (first..=l).step_by(2).map(|i| seq.values[i]).collect();
    let back: Vec<Vertex> = (second..=l).step_by(2).map(|i| seq.values[i]).collect();
    out.extend(back.into_iter().rev());
    out
}

pub fn marked_order(pattern: &RelationPattern, p: Vertex) -> MarkedCurve {
    let table = pattern.sequences();
    let dagger: Vec<MarkedPoint> = turnaround(&table.dagger[p], true)
        .into_iter()
        .map(|j| MarkedPoint::new(j, p))
        .collect();
    let plain: Vec<MarkedPoint> = turnaround(&table.plain[p], false)
        .into_iter()
        .map(|i| MarkedPoint::new(p, i))
        .collect();
    let mut marks = vec![Mark::Root(p)];
    let dagger_len = dagger.len();
    marks.extend(dagger.into_iter().map(Mark::Point));
    marks.extend(plain.into_iter().map(Mark::Point));
    MarkedCurve {
        index: p,
        marks,
        dagger_len,
    }
}

/// All intersection points, read once from the plain sequences (curves
/// meeting from below) and once from the dagger sequences (from above).
pub fn intersection_sets(
    pattern: &RelationPattern,
) -> (BTreeSet<MarkedPoint>, BTreeSet<MarkedPoint>) {
    let table = pattern.sequences();
    let mut below = BTreeSet::new();
    let mut above = BTreeSet::new();
    for p in pattern.vertices() {
        for &i in &table.plain[p].values[1..] {
            below.insert(MarkedPoint::new(p, i));
        }
        for &j in &table.dagger[p].values[1..] {
            above.insert(MarkedPoint::new(j, p));
        }
    }
    (below, above)
}

/// The interval `[from, to]` on `curve` between two of its marked points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PolygonEdge {
    pub curve: Vertex,
    pub from: MarkedPoint,
    pub to: MarkedPoint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolygonWord {
    /// 1-based relation index.
    pub relation: usize,
    pub edges: Vec<PolygonEdge>,
}

impl PolygonWord {
    pub fn vertices(&self) -> Vec<MarkedPoint> {
        self.edges.iter().map(|e| e.to).collect()
    }

    pub fn sides(&self) -> usize {
        self.edges.len()
    }

    pub fn curves(&self) -> Vec<Vertex> {
        self.edges.iter().map(|e| e.curve).collect()
    }

    /// Each edge ends where the next one starts, cyclically.
    pub fn is_closed(&self) -> bool {
        !self.edges.is_empty()
            && (0..self.edges.len())
                .all(|k| self.edges[k].to == self.edges[(k + 1) % self.edges.len()].from)
    }
}

impl fmt::Display for PolygonWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .edges
            .iter()
            .map(|e| {
                let other = |q: MarkedPoint| if q.upper == e.curve { q.lower } else { q.upper };
                format!("[{}, {}]_{}", other(e.from), other(e.to), e.curve)
            })
            .collect();
        f.write_str(&parts.join(", "))
    }
}

/// The polygon bounded by curves `s..=t` for the `j`-th relation `(s, t)`.
pub fn relation_polygon(pattern: &RelationPattern, j: usize) -> Result<PolygonWord, PatternError> {
    let r = pattern.relation(j)?;
    let (s, t) = (r.source, r.target);
    let mut edges = vec![PolygonEdge {
        curve: s,
        from: MarkedPoint::new(t, s),
        to: MarkedPoint::new(s + 1, s),
    }];
    for c in s + 1..t {
        edges.push(PolygonEdge {
            curve: c,
            from: MarkedPoint::new(c, c - 1),
            to: MarkedPoint::new(c + 1, c),
        });
    }
    edges.push(PolygonEdge {
        curve: t,
        from: MarkedPoint::new(t, t - 1),
        to: MarkedPoint::new(t, s),
    });
    Ok(PolygonWord { relation: j, edges })
}

/// Check a relation polygon against the marked orders. Returns a list of
/// problems, empty when the word is consistent.
///
/// Each edge must join two marked points of its curve. An inner curve's edge
/// runs between the first and last marked points after the root, the first
/// curve's edge spans its dagger side and the last curve's edge spans its
/// plain side.
pub fn validate_polygon(pattern: &RelationPattern, word: &PolygonWord) -> Vec<String> {
    let mut problems = Vec::new();
    if !word.is_closed() {
        problems.push(format!("polygon {} is not closed", word.relation));
    }
    let last = word.edges.len().saturating_sub(1);
    for (k, e) in word.edges.iter().enumerate() {
        let curve = marked_order(pattern, e.curve);
        for q in [e.from, e.to] {
            if !q.lies_on(e.curve) || curve.position(q).is_none() {
                problems.push(format!("{q} is not a marked point of curve {}", e.curve));
            }
        }
        let span = if k == 0 {
            curve.dagger_side()
        } else if k == last {
            curve.plain_side()
        } else {
            curve.core_points()
        };
        let ends = [e.from, e.to];
        let expected = match (span.first(), span.last()) {
            (Some(&a), Some(&b)) => [a, b],
            _ => {
                problems.push(format!(
                    "curve {} has no marked points for edge {k}",
                    e.curve
                ));
                continue;
            }
        };
        let mut sorted_ends = ends;
        let mut sorted_expected = expected;
        sorted_ends.sort();
        sorted_expected.sort();
        if sorted_ends != sorted_expected {
            problems.push(format!(
                "edge on curve {} joins {} and {}, expected {} and {}",
                e.curve, ends[0], ends[1], expected[0], expected[1]
            ));
        }
    }
    problems
}

/// A tuple `i_0 < ... < i_l` and the product the dual assigns to it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibleChain {
    pub vertices: Vec<Vertex>,
    pub value: String,
    #[serde(skip)]
    pub term: SignedTerm,
}

impl AdmissibleChain {
    /// Polygon corners, following the chain from `i_l` down to `i_0`.
    pub fn corners(&self) -> Vec<MarkedPoint> {
        let v = &self.vertices;
        let l = v.len() - 1;
        let mut out = vec![MarkedPoint::new(v[l], v[0])];
        out.extend((1..=l).rev().map(|k| MarkedPoint::new(v[k], v[k - 1])));
        out
    }

    pub fn id(&self) -> String {
        let parts: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        format!("poly-chain-{}", parts.join("-"))
    }
}

/// All admissible tuples of length `l >= 2`, found from the sequence data
/// alone, each tagged with the dual's product along it.
pub fn admissible_chains(pattern: &RelationPattern, dual: &DualCategory) -> Vec<AdmissibleChain> {
    let table = pattern.sequences();
    let n = pattern.n();
    // Degree of the morphism B(upper) -> B(lower), read off a^(upper).
    let deg = |upper: Vertex, lower: Vertex| table.plain[upper].index_of(lower).filter(|&i| i > 0);
    let mut found: Vec<Vec<Vertex>> = Vec::new();
    // Grow chains upward from i_0 keeping the degree sum.
    let mut stack: Vec<(Vec<Vertex>, usize)> = (0..=n).map(|i| (vec![i], 0)).collect();
    while let Some((chain, sum)) = stack.pop() {
        let top = *chain.last().unwrap();
        for next in top + 1..=n {
            let Some(step) = deg(next, top) else { continue };
            let mut longer = chain.clone();
            longer.push(next);
            let l = longer.len() - 1;
            if l >= 2 {
                if let Some(out) = deg(next, longer[0]) {
                    if (sum + step + 2) as i64 - l as i64 == out as i64 {
                        found.push(longer.clone());
                    }
                }
            }
            stack.push((longer, sum + step));
        }
    }
    found.sort();
    found
        .into_iter()
        .map(|vertices| {
            let down: Vec<Vertex> = vertices.iter().rev().copied().collect();
            let term = dual.mu_along(&down).unwrap_or_default();
            let value = match term.basis() {
                Some(b) => format!(
                    "{} {}",
                    format_coefficient(term.coefficient()),
                    dual.category().label(b)
                ),
                None => "0".to_owned(),
            };
            AdmissibleChain {
                vertices,
                value,
                term,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainBijection {
    pub chains: usize,
    pub products: usize,
    /// Chains whose product vanishes.
    pub zero_chains: Vec<Vec<Vertex>>,
    /// Nonzero products not matched by any chain, as `i_0 < ... < i_l`.
    pub unmatched_products: Vec<Vec<Vertex>>,
}

impl ChainBijection {
    pub fn passed(&self) -> bool {
        self.chains == self.products
            && self.zero_chains.is_empty()
            && self.unmatched_products.is_empty()
    }
}

pub fn check_chain_bijection(pattern: &RelationPattern, dual: &DualCategory) -> ChainBijection {
    let chains = admissible_chains(pattern, dual);
    let chain_set: BTreeSet<Vec<Vertex>> = chains.iter().map(|c| c.vertices.clone()).collect();
    let products: Vec<Vec<Vertex>> = dual
        .nontrivial_products()
        .into_iter()
        .map(|(mut c, _)| {
            c.reverse();
            c
        })
        .collect();
    ChainBijection {
        chains: chains.len(),
        products: products.len(),
        zero_chains: chains
            .iter()
            .filter(|c| c.term.is_zero())
            .map(|c| c.vertices.clone())
            .collect(),
        unmatched_products: products
            .into_iter()
            .filter(|c| !chain_set.contains(c))
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LayoutConfig {
    pub strand_pitch: u32,
    pub point_pitch: u32,
    pub margin: u32,
}

impl Default for LayoutConfig {
    fn default() -> Self {
        LayoutConfig {
            strand_pitch: 40,
            point_pitch: 24,
            margin: 30,
        }
    }
}

impl LayoutConfig {
    /// `q_{j,i}` sits midway between strands `i` and `j`, lower for
    /// farther-apart curves; the root of curve `p` sits on top of strand `p`.
    fn place(&self, upper: Vertex, lower: Vertex) -> (u32, u32) {
        let x = self.margin * 2 + (upper + lower) as u32 * self.strand_pitch / 2;
        let y = self.margin * 2 + (upper - lower) as u32 * self.point_pitch;
        (x, y)
    }

    fn mark(&self, m: Mark) -> (u32, u32) {
        match m {
            Mark::Root(p) => self.place(p, p),
            Mark::Point(q) => self.place(q.upper, q.lower),
        }
    }
}

fn path_through(points: &[(u32, u32)], close: bool) -> String {
    let mut d = String::new();
    for (k, (x, y)) in points.iter().enumerate() {
        let _ = write!(d, "{}{x},{y}", if k == 0 { "M" } else { " L" });
    }
    if close {
        d.push_str(" Z");
    }
    d
}

pub fn render_svg(pattern: &RelationPattern) -> Vec<u8> {
    render_svg_with(pattern, &LayoutConfig::default())
}

pub fn render_svg_with(pattern: &RelationPattern, layout: &LayoutConfig) -> Vec<u8> {
    let n = pattern.n();
    let curves: Vec<MarkedCurve> = pattern
        .vertices()
        .map(|p| marked_order(pattern, p))
        .collect();
    let width = layout.margin * 4 + n as u32 * layout.strand_pitch;
    let height = layout.margin * 4 + n as u32 * layout.point_pitch;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(s, "  <title>core diagram, {pattern}</title>");
    let _ = writeln!(
        s,
        r##"  <rect width="{width}" height="{height}" fill="#ffffff"/>"##
    );

    let _ = writeln!(s, r#"  <g id="relation-polygons">"#);
    for j in 1..=pattern.m() {
        let word = relation_polygon(pattern, j).expect("index in range");
        let pts: Vec<(u32, u32)> = word
            .vertices()
            .iter()
            .map(|q| layout.place(q.upper, q.lower))
            .collect();
        let _ = writeln!(
            s,
            r##"    <path id="poly-rel-{j}" d="{}" fill="#9ecae1" fill-opacity="0.6" stroke="none"/>"##,
            path_through(&pts, true)
        );
    }
    let _ = writeln!(s, "  </g>");

    let dual = crate::dual::build_dual(pattern, Default::default());
    let _ = writeln!(s, r#"  <g id="chain-polygons">"#);
    for chain in admissible_chains(pattern, &dual) {
        let pts: Vec<(u32, u32)> = chain
            .corners()
            .iter()
            .map(|q| layout.place(q.upper, q.lower))
            .collect();
        let _ = writeln!(
            s,
            r##"    <path id="{}" d="{}" fill="none" stroke="#e6550d" stroke-width="1.5" stroke-dasharray="4 2"/>"##,
            chain.id(),
            path_through(&pts, true)
        );
    }
    let _ = writeln!(s, "  </g>");

    let _ = writeln!(s, r#"  <g id="curves">"#);
    for c in &curves {
        let pts: Vec<(u32, u32)> = c.marks.iter().map(|&m| layout.mark(m)).collect();
        let _ = writeln!(
            s,
            r##"    <path id="curve-{}" d="{}" fill="none" stroke="#252525" stroke-width="1"/>"##,
            c.index,
            path_through(&pts, false)
        );
    }
    let _ = writeln!(s, "  </g>");

    let _ = writeln!(s, r#"  <g id="points">"#);
    for c in &curves {
        let (x, y) = layout.mark(Mark::Root(c.index));
        let _ = writeln!(
            s,
            r##"    <circle id="root-{}" cx="{x}" cy="{y}" r="3" fill="#ffffff" stroke="#252525"/>"##,
            c.index
        );
        let _ = writeln!(
            s,
            r#"    <text x="{x}" y="{}" font-size="10" text-anchor="middle">S{}</text>"#,
            y - 8,
            c.index
        );
    }
    let points: BTreeSet<MarkedPoint> = curves.iter().flat_map(|c| c.plain_side()).collect();
    for q in points {
        let (x, y) = layout.place(q.upper, q.lower);
        let _ = writeln!(
            s,
            r##"    <circle id="pt-{}-{}" cx="{x}" cy="{y}" r="2.5" fill="#252525"/>"##,
            q.upper, q.lower
        );
    }
    let _ = writeln!(s, "  </g>");
    s.push_str("</svg>\n");
    s.into_bytes()
}
