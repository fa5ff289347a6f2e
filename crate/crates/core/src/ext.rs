//! Ext groups between simple modules over `R_{S,T}`, computed from minimal
//! projective resolutions with exact rational linear algebra.
//!
//! Modules are right modules: the arrow `α_j` acts from the component at `j`
//! to the component at `j - 1`, so a path from `s` to `t` carries the
//! component at `t` down to the component at `s`.

use num::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::dual::DualCategory;
use crate::linalg::{Matrix, Scalar};
use crate::pattern::{RelationPattern, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtError {
    #[error("vertex {vertex} out of range 0..={n}")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("representation has {got} components, expected {expected}")]
    ShapeMismatch { got: usize, expected: usize },
    #[error("action of arrow {arrow} has shape {rows}x{cols}, expected {want_rows}x{want_cols}")]
    ActionShape {
        arrow: usize,
        rows: usize,
        cols: usize,
        want_rows: usize,
        want_cols: usize,
    },
    #[error("relation ({s}, {t}) does not act by zero")]
    RelationViolated { s: Vertex, t: Vertex },
}

/// A finite-dimensional right module. `actions[j - 1]` is the matrix of
/// `α_j`, of shape `dims[j - 1] x dims[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuiverRep {
    pub dims: Vec<usize>,
    pub actions: Vec<Matrix>,
}

impl QuiverRep {
    pub fn zero(n: usize) -> Self {
        QuiverRep {
            dims: vec![0; n + 1],
            actions: (0..n).map(|_| Matrix::zeros(0, 0)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    /// Matrix of `α_j`, from component `j` to component `j - 1`.
    pub fn action(&self, j: usize) -> &Matrix {
        &self.actions[j - 1]
    }

    /// Action of the path from `s` to `t`: component `t` to component `s`.
    pub fn path_action(&self, s: Vertex, t: Vertex) -> Matrix {
        let mut m = Matrix::identity(self.dims[t]);
        for j in (s + 1..=t).rev() {
            m = self.action(j).mul(&m);
        }
        m
    }

    /// Shapes agree with `pattern` and every relation acts by zero.
    pub fn check(&self, pattern: &RelationPattern) -> Result<(), ExtError> {
        let n = pattern.n();
        if self.dims.len() != n + 1 || self.actions.len() != n {
            return Err(ExtError::ShapeMismatch {
                got: self.dims.len(),
                expected: n + 1,
            });
        }
        for j in 1..=n {
            let a = self.action(j);
            if (a.rows(), a.cols()) != (self.dims[j - 1], self.dims[j]) {
                return Err(ExtError::ActionShape {
                    arrow: j,
                    rows: a.rows(),
                    cols: a.cols(),
                    want_rows: self.dims[j - 1],
                    want_cols: self.dims[j],
                });
            }
        }
        for r in pattern.relations() {
            if !self.path_action(r.source, r.target).is_zero() {
                return Err(ExtError::RelationViolated {
                    s: r.source,
                    t: r.target,
                });
            }
        }
        Ok(())
    }

    pub fn is_integral(&self) -> bool {
        self.actions.iter().all(Matrix::is_integral)
    }
}

fn check_vertex(pattern: &RelationPattern, v: Vertex) -> Result<(), ExtError> {
    if v > pattern.n() {
        Err(ExtError::VertexOutOfRange {
            vertex: v,
            n: pattern.n(),
        })
    } else {
        Ok(())
    }
}

/// The indecomposable projective `P(i) = e_i R`: one dimension at each `j`
/// whose path to `i` survives.
pub fn projective(pattern: &RelationPattern, i: Vertex) -> Result<QuiverRep, ExtError> {
    check_vertex(pattern, i)?;
    let n = pattern.n();
    let dims: Vec<usize> = (0..=n)
        .map(|j| usize::from(j <= i && pattern.survives(j, i)))
        .collect();
    let actions = (1..=n)
        .map(|j| {
            let mut m = Matrix::zeros(dims[j - 1], dims[j]);
            if dims[j - 1] == 1 && dims[j] == 1 {
                m[(0, 0)] = Scalar::one();
            }
            m
        })
        .collect();
    Ok(QuiverRep { dims, actions })
}

pub fn simple(pattern: &RelationPattern, j: Vertex) -> Result<QuiverRep, ExtError> {
    check_vertex(pattern, j)?;
    let n = pattern.n();
    let dims: Vec<usize> = (0..=n).map(|v| usize::from(v == j)).collect();
    let actions = (1..=n)
        .map(|a| Matrix::zeros(dims[a - 1], dims[a]))
        .collect();
    Ok(QuiverRep { dims, actions })
}

/// One projective cover `⊕ P(i)^{m_i} -> M`. `generators[k]` is the vertex
/// and the image vector in `M` of the `k`-th generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionStep {
    pub multiplicities: Vec<usize>,
    pub generators: Vec<(Vertex, Vec<Scalar>)>,
}

/// Projective cover of `rep` and its kernel.
#[allow(clippy::needless_range_loop)]
pub fn syzygy(
    pattern: &RelationPattern,
    rep: &QuiverRep,
) -> Result<(ResolutionStep, QuiverRep), ExtError> {
    rep.check(pattern)?;
    let n = pattern.n();

    // Lift a basis of the top at each vertex: complete the image of α_{v+1}
    // with standard basis vectors.
    let mut generators: Vec<(Vertex, Vec<Scalar>)> = Vec::new();
    let mut multiplicities = vec![0; n + 1];
    for v in 0..=n {
        let dim = rep.dims[v];
        if dim == 0 {
            continue;
        }
        let mut cols: Vec<Vec<Scalar>> = Vec::new();
        let image_cols = if v < n { rep.dims[v + 1] } else { 0 };
        if v < n {
            let a = rep.action(v + 1);
            cols.extend((0..a.cols()).map(|c| a.column(c)));
        }
        let id = Matrix::identity(dim);
        cols.extend((0..dim).map(|c| id.column(c)));
        for c in Matrix::from_columns(dim, &cols).pivot_columns() {
            if c >= image_cols {
                generators.push((v, id.column(c - image_cols)));
                multiplicities[v] += 1;
            }
        }
    }

    // At vertex j the cover has one basis vector per generator (i, x) with
    // i >= j and the path (j, i) surviving; it maps to path(j, i) · x.
    let basis_at: Vec<Vec<usize>> = (0..=n)
        .map(|j| {
            (0..generators.len())
                .filter(|&g| {
                    let i = generators[g].0;
                    i >= j && pattern.survives(j, i)
                })
                .collect()
        })
        .collect();
    let mut kernels: Vec<Matrix> = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let cols: Vec<Vec<Scalar>> = basis_at[j]
            .iter()
            .map(|&g| {
                let (i, x) = &generators[g];
                rep.path_action(j, *i).apply(x)
            })
            .collect();
        let phi = Matrix::from_columns(rep.dims[j], &cols);
        assert_eq!(
            phi.rank(),
            rep.dims[j],
            "cover is not surjective at vertex {j}"
        );
        let k = phi.kernel();
        kernels.push(Matrix::from_columns(basis_at[j].len(), &k));
    }

    let dims: Vec<usize> = kernels.iter().map(Matrix::cols).collect();
    let mut actions = Vec::with_capacity(n);
    for j in 1..=n {
        // Cover action: generator g at j goes to g at j-1 if it survives.
        let from = &basis_at[j];
        let to = &basis_at[j - 1];
        let mut cover_action = Matrix::zeros(to.len(), from.len());
        for (c, g) in from.iter().enumerate() {
            if let Some(r) = to.iter().position(|h| h == g) {
                cover_action[(r, c)] = Scalar::one();
            }
        }
        let mut action = Matrix::zeros(dims[j - 1], dims[j]);
        for c in 0..dims[j] {
            let image = cover_action.apply(&kernels[j].column(c));
            let coords = if dims[j - 1] == 0 {
                assert!(image.iter().all(Zero::is_zero));
                Vec::new()
            } else {
                kernels[j - 1].solve(&image).expect("kernel is a submodule")
            };
            for (r, x) in coords.into_iter().enumerate() {
                action[(r, c)] = x;
            }
        }
        actions.push(action);
    }
    let kernel = QuiverRep { dims, actions };
    kernel.check(pattern)?;
    Ok((
        ResolutionStep {
            multiplicities,
            generators,
        },
        kernel,
    ))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    pub base: Vertex,
    pub steps: Vec<ResolutionStep>,
    /// Whether a syzygy vanished within the step budget.
    pub terminated: bool,
    /// Whether every syzygy had integer action matrices.
    pub integral: bool,
}

impl Resolution {
    /// Index of the last nonzero term.
    pub fn length(&self) -> usize {
        self.steps.len().saturating_sub(1)
    }
}

/// Minimal projective resolution of `S(p)`, computing terms `0..=d_max`.
pub fn minimal_resolution(
    pattern: &RelationPattern,
    p: Vertex,
    d_max: usize,
) -> Result<Resolution, ExtError> {
    let mut current = simple(pattern, p)?;
    let mut steps = Vec::new();
    let mut integral = true;
    for _ in 0..=d_max {
        let (step, kernel) = syzygy(pattern, &current)?;
        integral &= kernel.is_integral()
            && step
                .generators
                .iter()
                .all(|(_, x)| x.iter().all(|v| v.is_integer()));
        steps.push(step);
        if kernel.is_zero() {
            return Ok(Resolution {
                base: p,
                steps,
                terminated: true,
                integral,
            });
        }
        current = kernel;
    }
    Ok(Resolution {
        base: p,
        steps,
        terminated: false,
        integral,
    })
}

pub fn default_d_max(pattern: &RelationPattern) -> usize {
    pattern.n() + 2
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtDims {
    /// `dims[d] = dim Ext^d(S(p), S(q))` for each computed term.
    pub dims: Vec<usize>,
    pub terminated: bool,
}

pub fn ext_dims(
    pattern: &RelationPattern,
    p: Vertex,
    q: Vertex,
    d_max: usize,
) -> Result<ExtDims, ExtError> {
    check_vertex(pattern, q)?;
    let r = minimal_resolution(pattern, p, d_max)?;
    Ok(ExtDims {
        dims: r.steps.iter().map(|s| s.multiplicities[q]).collect(),
        terminated: r.terminated,
    })
}

pub fn resolution_length(pattern: &RelationPattern, p: Vertex) -> Result<usize, ExtError> {
    Ok(minimal_resolution(pattern, p, default_d_max(pattern))?.length())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ExtEntry {
    pub p: Vertex,
    pub q: Vertex,
    pub degree: usize,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtTable {
    /// Nonzero entries, sorted.
    pub entries: Vec<ExtEntry>,
    pub lengths: Vec<usize>,
    pub non_terminating: Vec<Vertex>,
    pub integral: bool,
}

/// Ext between all pairs of simples, from one resolution per `p`.
pub fn ext_table(pattern: &RelationPattern) -> Result<ExtTable, ExtError> {
    let mut entries = Vec::new();
    let mut lengths = Vec::new();
    let mut non_terminating = Vec::new();
    let mut integral = true;
    for p in pattern.vertices() {
        let r = minimal_resolution(pattern, p, default_d_max(pattern))?;
        for (degree, step) in r.steps.iter().enumerate() {
            for (q, &dim) in step.multiplicities.iter().enumerate() {
                if dim > 0 {
                    entries.push(ExtEntry { p, q, degree, dim });
                }
            }
        }
        if !r.terminated {
            non_terminating.push(p);
        }
        integral &= r.integral;
        lengths.push(r.length());
    }
    entries.sort();
    Ok(ExtTable {
        entries,
        lengths,
        non_terminating,
        integral,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DimensionMismatch {
    pub p: Vertex,
    pub q: Vertex,
    pub degree: usize,
    pub ext: usize,
    pub hom: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AgreementReport {
    pub mismatches: Vec<DimensionMismatch>,
    /// `(p, resolution length, l_p)` where the two differ.
    pub length_mismatches: Vec<(Vertex, usize, usize)>,
    pub non_terminating: Vec<Vertex>,
    pub integral: bool,
}

impl AgreementReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
            && self.length_mismatches.is_empty()
            && self.non_terminating.is_empty()
            && self.integral
    }
}

/// Compare Ext dimensions with the hom dimensions of the dual for all
/// `p, q` and degrees `0..=n+1`.
#[allow(clippy::needless_range_loop)]
pub fn oracle_agreement(dual: &DualCategory) -> Result<AgreementReport, ExtError> {
    let pattern = dual.pattern();
    let n = pattern.n();
    let table = ext_table(pattern)?;
    let homs = dual.hom_table();
    let mut ext = vec![vec![vec![0usize; n + 2]; n + 1]; n + 1];
    for e in &table.entries {
        if e.degree <= n + 1 {
            ext[e.p][e.q][e.degree] = e.dim;
        }
    }
    let mut mismatches = Vec::new();
    for p in 0..=n {
        for q in 0..=n {
            for degree in 0..=n + 1 {
                let hom = homs.dim(p, q, degree as i64);
                let e = ext[p][q][degree];
                if e != hom {
                    mismatches.push(DimensionMismatch {
                        p,
                        q,
                        degree,
                        ext: e,
                        hom,
                    });
                }
            }
        }
    }
    let length_mismatches = table
        .lengths
        .iter()
        .enumerate()
        .filter_map(|(p, &len)| {
            let l = pattern.sequences().plain[p].length();
            (len != l).then_some((p, len, l))
        })
        .collect();
    Ok(AgreementReport {
        mismatches,
        length_mismatches,
        non_terminating: table.non_terminating,
        integral: table.integral,
    })
}
