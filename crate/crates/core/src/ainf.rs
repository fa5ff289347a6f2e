//! Finite directed A∞-categories given by a basis and a signed composition
//! table, together with a checker for the A∞ (Stasheff) relations.
//!
//! Argument order everywhere follows `μ^d(a_d, ..., a_1)`: the slice passed
//! to [`GradedBasisCategory::mu_eval`] lists the *last* applied morphism
//! first, and `a_1` (the source-most morphism) last.
//!
//! Identities are strict units: `μ^2(a, 1) = a`, `μ^2(1, a) = (-1)^{|a|} a`,
//! and every other `μ^d` with an identity argument vanishes. These values
//! are built in and cannot be overridden by table entries.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num::rational::Rational64;
use num::{CheckedAdd, CheckedMul, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

/// Ground-field scalars of the kernel.
pub type Coefficient = Rational64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ObjectId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MorphismId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("unknown object {0}")]
    UnknownObject(String),
    #[error("unknown morphism id {0}")]
    UnknownMorphism(usize),
    #[error("duplicate label {0}")]
    DuplicateLabel(String),
    #[error("morphism {label} goes from {source_obj} to {target_obj}, which is not upward in the object order")]
    NotDirected {
        label: String,
        source_obj: String,
        target_obj: String,
    },
    #[error("μ needs at least one argument")]
    EmptyArguments,
    #[error("arguments at positions {0} and {1} are not composable")]
    NotComposable(usize, usize),
    #[error("identity {0} may only appear in μ^2, whose values are fixed by unitality")]
    IdentityInTable(String),
    #[error("μ^{arity} entry with result {result} violates the degree law: expected degree {expected}, got {actual}")]
    DegreeLaw {
        arity: usize,
        result: String,
        expected: i64,
        actual: i64,
    },
    #[error("μ entry result {result} does not go from the source of a_1 to the target of a_d")]
    WrongEndpoints { result: String },
    #[error("object {0} listed twice")]
    DuplicateObject(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisMorphism {
    pub label: String,
    pub source: ObjectId,
    pub target: ObjectId,
    pub degree: i64,
    pub is_identity: bool,
}

/// A scalar multiple of a basis morphism; zero is always `basis == None`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedTerm {
    coefficient: Coefficient,
    basis: Option<MorphismId>,
}

impl SignedTerm {
    pub fn zero() -> Self {
        SignedTerm {
            coefficient: Coefficient::zero(),
            basis: None,
        }
    }

    pub fn new(coefficient: Coefficient, basis: MorphismId) -> Self {
        if coefficient.is_zero() {
            SignedTerm::zero()
        } else {
            SignedTerm {
                coefficient,
                basis: Some(basis),
            }
        }
    }

    /// `±basis` according to the parity of `exponent`.
    pub fn signed(exponent: i64, basis: MorphismId) -> Self {
        let c = if exponent.rem_euclid(2) == 0 { 1 } else { -1 };
        SignedTerm::new(Coefficient::from_integer(c), basis)
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_none()
    }

    pub fn coefficient(&self) -> Coefficient {
        self.coefficient
    }

    pub fn basis(&self) -> Option<MorphismId> {
        self.basis
    }

    pub fn negated(&self) -> Self {
        SignedTerm {
            coefficient: -self.coefficient,
            basis: self.basis,
        }
    }
}

/// Incrementally assemble a [`GradedBasisCategory`]; objects are ordered by
/// insertion.
#[derive(Debug, Clone, Default)]
pub struct CategoryBuilder {
    objects: Vec<String>,
    morphisms: Vec<BasisMorphism>,
    identities: Vec<MorphismId>,
    labels: HashMap<String, MorphismId>,
    mu: BTreeMap<Vec<MorphismId>, SignedTerm>,
}

impl CategoryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Append an object (greater than all previous ones) and its identity.
    pub fn add_object(
        &mut self,
        name: impl Into<String>,
        identity_label: impl Into<String>,
    ) -> Result<ObjectId, KernelError> {
        let name = name.into();
        if self.objects.contains(&name) {
            return Err(KernelError::DuplicateObject(name));
        }
        let obj = ObjectId(self.objects.len());
        self.objects.push(name);
        let id = self.push_morphism(BasisMorphism {
            label: identity_label.into(),
            source: obj,
            target: obj,
            degree: 0,
            is_identity: true,
        })?;
        self.identities.push(id);
        Ok(obj)
    }

    fn push_morphism(&mut self, m: BasisMorphism) -> Result<MorphismId, KernelError> {
        if self.labels.contains_key(&m.label) {
            return Err(KernelError::DuplicateLabel(m.label));
        }
        let id = MorphismId(self.morphisms.len());
        self.labels.insert(m.label.clone(), id);
        self.morphisms.push(m);
        Ok(id)
    }

    pub fn add_morphism(
        &mut self,
        label: impl Into<String>,
        source: ObjectId,
        target: ObjectId,
        degree: i64,
    ) -> Result<MorphismId, KernelError> {
        let label = label.into();
        for o in [source, target] {
            if o.0 >= self.objects.len() {
                return Err(KernelError::UnknownObject(format!("#{}", o.0)));
            }
        }
        if source >= target {
            return Err(KernelError::NotDirected {
                label,
                source_obj: self.objects[source.0].clone(),
                target_obj: self.objects[target.0].clone(),
            });
        }
        self.push_morphism(BasisMorphism {
            label,
            source,
            target,
            degree,
            is_identity: false,
        })
    }

    pub fn morphism_by_label(&self, label: &str) -> Option<MorphismId> {
        self.labels.get(label).copied()
    }

    /// Set `μ^d(args) = term`, with `args = [a_d, ..., a_1]`. A zero term
    /// removes the entry.
    pub fn set_mu(&mut self, args: &[MorphismId], term: SignedTerm) -> Result<(), KernelError> {
        validate_entry(&self.morphisms, args, &term)?;
        if term.is_zero() {
            self.mu.remove(args);
        } else {
            self.mu.insert(args.to_vec(), term);
        }
        Ok(())
    }

    pub fn build(self) -> GradedBasisCategory {
        GradedBasisCategory::assemble(self.objects, self.morphisms, self.identities, self.mu)
    }
}

fn validate_entry(
    morphisms: &[BasisMorphism],
    args: &[MorphismId],
    term: &SignedTerm,
) -> Result<(), KernelError> {
    if args.is_empty() {
        return Err(KernelError::EmptyArguments);
    }
    let get = |id: MorphismId| {
        morphisms
            .get(id.0)
            .ok_or(KernelError::UnknownMorphism(id.0))
    };
    for &a in args {
        let m = get(a)?;
        if m.is_identity {
            return Err(KernelError::IdentityInTable(m.label.clone()));
        }
    }
    for k in 0..args.len() - 1 {
        if get(args[k])?.source != get(args[k + 1])?.target {
            return Err(KernelError::NotComposable(k, k + 1));
        }
    }
    if let Some(r) = term.basis() {
        let res = get(r)?;
        let first = get(*args.last().expect("nonempty"))?;
        let last = get(args[0])?;
        if res.source != first.source || res.target != last.target {
            return Err(KernelError::WrongEndpoints {
                result: res.label.clone(),
            });
        }
        let expected: i64 =
            args.iter().map(|&a| morphisms[a.0].degree).sum::<i64>() + 2 - args.len() as i64;
        if res.degree != expected {
            return Err(KernelError::DegreeLaw {
                arity: args.len(),
                result: res.label.clone(),
                expected,
                actual: res.degree,
            });
        }
    }
    Ok(())
}

/// An immutable finite directed A∞-category with a basis-indexed μ table.
#[derive(Debug, Clone)]
pub struct GradedBasisCategory {
    objects: Vec<String>,
    morphisms: Vec<BasisMorphism>,
    identities: Vec<MorphismId>,
    mu: HashMap<Vec<MorphismId>, SignedTerm>,
    outgoing: Vec<Vec<MorphismId>>,
    labels: HashMap<String, MorphismId>,
}

/// One `(i, j, l)` term of the A∞ relation for `d` arguments: the inner
/// `μ^j` eats `a_{i+1}, ..., a_{i+j}` and the outer map has arity
/// `l = d - j + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Splitting {
    pub prefix: usize,
    pub inner: usize,
    pub outer: usize,
}

/// All splittings of the `d`-th relation, inner arity major.
pub fn stasheff_splittings(d: usize) -> Vec<Splitting> {
    (1..=d)
        .flat_map(|j| {
            (0..=d - j).map(move |i| Splitting {
                prefix: i,
                inner: j,
                outer: d - j + 1,
            })
        })
        .collect()
}

impl Splitting {
    /// Range of `[a_d, ..., a_1]` positions fed to the inner map.
    pub fn inner_positions(&self, d: usize) -> std::ops::Range<usize> {
        d - self.prefix - self.inner..d - self.prefix
    }
}

impl GradedBasisCategory {
    fn assemble(
        objects: Vec<String>,
        morphisms: Vec<BasisMorphism>,
        identities: Vec<MorphismId>,
        mu: BTreeMap<Vec<MorphismId>, SignedTerm>,
    ) -> Self {
        let mut outgoing = vec![Vec::new(); objects.len()];
        for (i, m) in morphisms.iter().enumerate() {
            outgoing[m.source.0].push(MorphismId(i));
        }
        let labels = morphisms
            .iter()
            .enumerate()
            .map(|(i, m)| (m.label.clone(), MorphismId(i)))
            .collect();
        GradedBasisCategory {
            objects,
            morphisms,
            identities,
            mu: mu.into_iter().collect(),
            outgoing,
            labels,
        }
    }

    pub fn to_builder(&self) -> CategoryBuilder {
        CategoryBuilder {
            objects: self.objects.clone(),
            morphisms: self.morphisms.clone(),
            identities: self.identities.clone(),
            labels: self.labels.clone(),
            mu: self
                .mu
                .iter()
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// A copy with one table entry replaced (used for mutation probes).
    pub fn with_mu(&self, args: &[MorphismId], term: SignedTerm) -> Result<Self, KernelError> {
        let mut b = self.to_builder();
        b.set_mu(args, term)?;
        Ok(b.build())
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn object_by_name(&self, name: &str) -> Option<ObjectId> {
        self.objects.iter().position(|o| o == name).map(ObjectId)
    }

    pub fn morphisms(&self) -> &[BasisMorphism] {
        &self.morphisms
    }

    pub fn morphism(&self, id: MorphismId) -> &BasisMorphism {
        &self.morphisms[id.0]
    }

    pub fn label(&self, id: MorphismId) -> &str {
        &self.morphisms[id.0].label
    }

    pub fn degree(&self, id: MorphismId) -> i64 {
        self.morphisms[id.0].degree
    }

    pub fn morphism_by_label(&self, label: &str) -> Option<MorphismId> {
        self.labels.get(label).copied()
    }

    pub fn identity(&self, obj: ObjectId) -> MorphismId {
        self.identities[obj.0]
    }

    /// Basis of `hom(source, target)`.
    pub fn hom(&self, source: ObjectId, target: ObjectId) -> Vec<MorphismId> {
        self.outgoing[source.0]
            .iter()
            .copied()
            .filter(|&m| self.morphisms[m.0].target == target)
            .collect()
    }

    pub fn outgoing(&self, source: ObjectId) -> &[MorphismId] {
        &self.outgoing[source.0]
    }

    pub fn non_identity_morphisms(&self) -> impl Iterator<Item = MorphismId> + '_ {
        (0..self.morphisms.len())
            .map(MorphismId)
            .filter(|&m| !self.morphisms[m.0].is_identity)
    }

    /// Stored (non-unital) table entries, sorted by key.
    pub fn mu_entries(&self) -> Vec<(&[MorphismId], &SignedTerm)> {
        let mut v: Vec<_> = self.mu.iter().map(|(k, t)| (k.as_slice(), t)).collect();
        v.sort_by(|a, b| (a.0.len(), a.0).cmp(&(b.0.len(), b.0)));
        v
    }

    /// `μ^d(args)` with `args = [a_d, ..., a_1]`.
    ///
    /// A non-composable argument list is a caller error, not a zero.
    pub fn mu_eval(&self, args: &[MorphismId]) -> Result<SignedTerm, KernelError> {
        if args.is_empty() {
            return Err(KernelError::EmptyArguments);
        }
        for &a in args {
            if a.0 >= self.morphisms.len() {
                return Err(KernelError::UnknownMorphism(a.0));
            }
        }
        for k in 0..args.len() - 1 {
            if self.morphisms[args[k].0].source != self.morphisms[args[k + 1].0].target {
                return Err(KernelError::NotComposable(k, k + 1));
            }
        }
        Ok(self.mu_composable(args))
    }

    fn mu_composable(&self, args: &[MorphismId]) -> SignedTerm {
        let is_id = |m: MorphismId| self.morphisms[m.0].is_identity;
        if args.iter().any(|&a| is_id(a)) {
            if args.len() != 2 {
                return SignedTerm::zero();
            }
            let (second, first) = (args[0], args[1]);
            return if is_id(first) {
                // μ^2(a, 1) = a; also covers μ^2(1, 1) = 1.
                SignedTerm::signed(0, second)
            } else {
                SignedTerm::signed(self.degree(first), first)
            };
        }
        self.mu.get(args).cloned().unwrap_or_else(SignedTerm::zero)
    }

    /// The A∞ relation evaluated on one composable chain
    /// `args = [a_d, ..., a_1]`, as a map from basis morphisms to nonzero
    /// coefficients.
    pub fn stasheff_residue(&self, args: &[MorphismId]) -> BTreeMap<MorphismId, Coefficient> {
        let d = args.len();
        let mut acc: BTreeMap<MorphismId, Coefficient> = BTreeMap::new();
        let mut outer = Vec::with_capacity(d);
        for s in stasheff_splittings(d) {
            let range = s.inner_positions(d);
            let inner = self.mu_composable(&args[range.clone()]);
            let Some(b) = inner.basis() else { continue };
            outer.clear();
            outer.extend_from_slice(&args[..range.start]);
            outer.push(b);
            outer.extend_from_slice(&args[range.end..]);
            let value = self.mu_composable(&outer);
            let Some(r) = value.basis() else { continue };
            // ⋆_i = Σ_{k <= i} (|a_k| - 1) over the i first-applied arguments.
            let star: i64 = args[range.end..].iter().map(|&a| self.degree(a) - 1).sum();
            let sign = Coefficient::from_integer(if star.rem_euclid(2) == 0 { 1 } else { -1 });
            let term = sign
                .checked_mul(&inner.coefficient())
                .and_then(|x| x.checked_mul(&value.coefficient()))
                .expect("coefficient overflow");
            let slot = acc.entry(r).or_insert_with(Coefficient::zero);
            *slot = slot.checked_add(&term).expect("coefficient overflow");
        }
        acc.retain(|_, c| !c.is_zero());
        acc
    }

    /// Every composable chain `[a_d, ..., a_1]` with `1 <= d <= max_chain`,
    /// identities included, in canonical order.
    pub fn composable_chains(&self, max_chain: usize) -> Vec<Vec<MorphismId>> {
        let mut out = Vec::new();
        let mut applied = Vec::new();
        fn walk(
            cat: &GradedBasisCategory,
            max_chain: usize,
            applied: &mut Vec<MorphismId>,
            out: &mut Vec<Vec<MorphismId>>,
        ) {
            out.push(applied.iter().rev().copied().collect());
            if applied.len() == max_chain {
                return;
            }
            let last = *applied.last().expect("nonempty");
            let next_obj = cat.morphisms[last.0].target;
            for &m in &cat.outgoing[next_obj.0] {
                applied.push(m);
                walk(cat, max_chain, applied, out);
                applied.pop();
            }
        }
        if max_chain == 0 {
            return out;
        }
        for m in 0..self.morphisms.len() {
            applied.push(MorphismId(m));
            walk(self, max_chain, &mut applied, &mut out);
            applied.pop();
        }
        out
    }

    /// Check the A∞ relations on every composable basis chain of length at
    /// most `max_chain`.
    pub fn verify_ainfty(&self, max_chain: usize) -> StasheffReport {
        let chains = self.composable_chains(max_chain);
        let failures: Vec<StasheffFailure> = chains
            .par_iter()
            .filter_map(|chain| {
                let residue = self.stasheff_residue(chain);
                (!residue.is_empty()).then(|| StasheffFailure {
                    chain: chain.iter().map(|&m| self.label(m).to_owned()).collect(),
                    residue: residue
                        .into_iter()
                        .map(|(m, c)| (self.label(m).to_owned(), c.to_string()))
                        .collect(),
                })
            })
            .collect();
        StasheffReport {
            max_chain,
            chains_checked: chains.len(),
            failures,
        }
    }

    /// The directed subcategory on `objects`, ordered as listed.
    pub fn restrict_directed(&self, objects: &[ObjectId]) -> Result<Self, KernelError> {
        let mut position = vec![None; self.objects.len()];
        for (i, &o) in objects.iter().enumerate() {
            let slot = position
                .get_mut(o.0)
                .ok_or_else(|| KernelError::UnknownObject(format!("#{}", o.0)))?;
            if slot.is_some() {
                return Err(KernelError::DuplicateObject(self.objects[o.0].clone()));
            }
            *slot = Some(i);
        }
        let mut b = CategoryBuilder::new();
        for &o in objects {
            b.add_object(
                self.objects[o.0].clone(),
                self.label(self.identity(o)).to_owned(),
            )?;
        }
        let mut map = vec![None; self.morphisms.len()];
        for (i, m) in self.morphisms.iter().enumerate() {
            if m.is_identity {
                continue;
            }
            if let (Some(s), Some(t)) = (position[m.source.0], position[m.target.0]) {
                if s < t {
                    map[i] = Some(b.add_morphism(
                        m.label.clone(),
                        ObjectId(s),
                        ObjectId(t),
                        m.degree,
                    )?);
                }
            }
        }
        for (args, term) in self.mu_entries() {
            let new_args: Option<Vec<MorphismId>> = args.iter().map(|a| map[a.0]).collect();
            let result = term.basis().and_then(|r| map[r.0]);
            if let (Some(new_args), Some(r)) = (new_args, result) {
                b.set_mu(&new_args, SignedTerm::new(term.coefficient(), r))?;
            }
        }
        Ok(b.build())
    }

    pub fn to_document(&self) -> CategoryDocument {
        CategoryDocument {
            objects: self.objects.clone(),
            morphisms: self
                .morphisms
                .iter()
                .map(|m| MorphismEntry {
                    label: m.label.clone(),
                    source: self.objects[m.source.0].clone(),
                    target: self.objects[m.target.0].clone(),
                    degree: m.degree,
                })
                .collect(),
            mu: self
                .mu_entries()
                .into_iter()
                .map(|(args, term)| MuEntry {
                    arity: args.len(),
                    arguments: args.iter().map(|&a| self.label(a).to_owned()).collect(),
                    sign: format_coefficient(term.coefficient()),
                    result: self
                        .label(term.basis().expect("stored entries are nonzero"))
                        .to_owned(),
                })
                .collect(),
        }
    }
}

/// `+1`, `-1`, `+3/2`, ...
pub fn format_coefficient(c: Coefficient) -> String {
    if c.is_negative() {
        c.to_string()
    } else {
        format!("+{c}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StasheffFailure {
    /// Labels in `a_d, ..., a_1` order.
    pub chain: Vec<String>,
    /// Surviving `(basis label, coefficient)` pairs of the relation.
    pub residue: Vec<(String, String)>,
}

impl fmt::Display for StasheffFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "μ-relation on ({}) leaves", self.chain.join(", "))?;
        for (l, c) in &self.residue {
            write!(f, " {c}·{l}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StasheffReport {
    pub max_chain: usize,
    pub chains_checked: usize,
    pub failures: Vec<StasheffFailure>,
}

impl StasheffReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Machine-readable form of a category.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CategoryDocument {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismEntry>,
    pub mu: Vec<MuEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorphismEntry {
    pub label: String,
    pub source: String,
    pub target: String,
    pub degree: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MuEntry {
    pub arity: usize,
    /// Labels in `a_d, ..., a_1` order.
    pub arguments: Vec<String>,
    pub sign: String,
    pub result: String,
}

/// An isomorphism found by [`find_isomorphism`]: `a`'s morphism `i` maps to
/// `sign[i] · morphism_map[i]` in `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    pub morphism_map: Vec<MorphismId>,
    pub signs: Vec<i8>,
}

/// Search for an order-preserving isomorphism that matches μ tables up to
/// rescaling each basis morphism by `±1`.
pub fn find_isomorphism(a: &GradedBasisCategory, b: &GradedBasisCategory) -> Option<Isomorphism> {
    if a.object_count() != b.object_count() || a.morphisms.len() != b.morphisms.len() {
        return None;
    }
    if a.mu.len() != b.mu.len() {
        return None;
    }
    type Bucket = (ObjectId, ObjectId, i64, bool);
    let key = |m: &BasisMorphism| -> Bucket { (m.source, m.target, m.degree, m.is_identity) };
    let mut buckets_a: BTreeMap<Bucket, Vec<MorphismId>> = BTreeMap::new();
    let mut buckets_b: BTreeMap<Bucket, Vec<MorphismId>> = BTreeMap::new();
    for (i, m) in a.morphisms.iter().enumerate() {
        buckets_a.entry(key(m)).or_default().push(MorphismId(i));
    }
    for (i, m) in b.morphisms.iter().enumerate() {
        buckets_b.entry(key(m)).or_default().push(MorphismId(i));
    }
    if buckets_a.len() != buckets_b.len()
        || buckets_a
            .iter()
            .zip(&buckets_b)
            .any(|((ka, va), (kb, vb))| ka != kb || va.len() != vb.len())
    {
        return None;
    }
    let groups: Vec<(Vec<MorphismId>, Vec<MorphismId>)> = buckets_a
        .into_values()
        .zip(buckets_b.into_values())
        .collect();
    let mut map = vec![MorphismId(usize::MAX); a.morphisms.len()];
    search_bijection(a, b, &groups, 0, &mut map)
}

fn search_bijection(
    a: &GradedBasisCategory,
    b: &GradedBasisCategory,
    groups: &[(Vec<MorphismId>, Vec<MorphismId>)],
    g: usize,
    map: &mut Vec<MorphismId>,
) -> Option<Isomorphism> {
    if g == groups.len() {
        return solve_signs(a, b, map).map(|signs| Isomorphism {
            morphism_map: map.clone(),
            signs,
        });
    }
    let (src, dst) = &groups[g];
    let mut perm: Vec<usize> = (0..dst.len()).collect();
    loop {
        for (i, &m) in src.iter().enumerate() {
            map[m.0] = dst[perm[i]];
        }
        if let Some(iso) = search_bijection(a, b, groups, g + 1, map) {
            return Some(iso);
        }
        if !next_permutation(&mut perm) {
            return None;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len())
        .rev()
        .find(|&j| p[j] > p[i - 1])
        .expect("pivot exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Given a fixed morphism bijection, find `±1` rescalings making it a
/// μ-table isomorphism, by elimination over GF(2).
fn solve_signs(
    a: &GradedBasisCategory,
    b: &GradedBasisCategory,
    map: &[MorphismId],
) -> Option<Vec<i8>> {
    let vars = a.morphisms.len();
    let mut rows: Vec<(Vec<bool>, bool)> = Vec::new();
    for (args, term) in &a.mu {
        let mapped: Vec<MorphismId> = args.iter().map(|m| map[m.0]).collect();
        let other = b.mu.get(&mapped)?;
        let r = term.basis().expect("stored entries are nonzero");
        if other.basis() != Some(map[r.0]) {
            return None;
        }
        let flip = if other.coefficient() == term.coefficient() {
            false
        } else if other.coefficient() == -term.coefficient() {
            true
        } else {
            return None;
        };
        let mut row = vec![false; vars];
        for m in args.iter().chain(std::iter::once(&r)) {
            row[m.0] ^= true;
        }
        rows.push((row, flip));
    }
    // Identities keep their sign.
    for &id in &a.identities {
        let mut row = vec![false; vars];
        row[id.0] = true;
        rows.push((row, false));
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..vars {
        let Some(p) = (r..rows.len()).find(|&i| rows[i].0[c]) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i].0[c] {
                let (pivot_row, pivot_rhs) = rows[r].clone();
                for (x, y) in rows[i].0.iter_mut().zip(&pivot_row) {
                    *x ^= *y;
                }
                rows[i].1 ^= pivot_rhs;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|(_, rhs)| *rhs) {
        return None;
    }
    let mut signs = vec![1i8; vars];
    for (i, &c) in pivots.iter().enumerate() {
        if rows[i].1 {
            signs[c] = -1;
        }
    }
    Some(signs)
}

pub fn categories_isomorphic(a: &GradedBasisCategory, b: &GradedBasisCategory) -> bool {
    find_isomorphism(a, b).is_some()
}

/// Convenience: `±1` as a coefficient.
pub fn unit(sign: i64) -> Coefficient {
    Coefficient::from_integer(sign)
}

impl Default for SignedTerm {
    fn default() -> Self {
        SignedTerm::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splittings_match_hand_expansion() {
        let tuples = |d| -> Vec<(usize, usize, usize)> {
            stasheff_splittings(d)
                .into_iter()
                .map(|s| (s.prefix, s.inner, s.outer))
                .collect()
        };
        // d = 1: μ^1 μ^1.
        assert_eq!(tuples(1), vec![(0, 1, 1)]);
        // d = 2: μ^2(a2, μ^1 a1), μ^2(μ^1 a2, a1), μ^1 μ^2(a2, a1).
        assert_eq!(tuples(2), vec![(0, 1, 2), (1, 1, 2), (0, 2, 1)]);
        // d = 3: three μ^1 insertions, two μ^2 insertions, μ^1 μ^3.
        assert_eq!(
            tuples(3),
            vec![
                (0, 1, 3),
                (1, 1, 3),
                (2, 1, 3),
                (0, 2, 2),
                (1, 2, 2),
                (0, 3, 1)
            ]
        );
        // Inner slot of (i=1, j=2) among [a3, a2, a1] is [a3, a2].
        let s = Splitting {
            prefix: 1,
            inner: 2,
            outer: 2,
        };
        assert_eq!(s.inner_positions(3), 0..2);
        let s = Splitting {
            prefix: 0,
            inner: 1,
            outer: 3,
        };
        assert_eq!(s.inner_positions(3), 2..3);
    }

    /// X0 -> X1 -> X2 with one arrow each and their composite.
    fn three_object(composite: bool) -> (GradedBasisCategory, [MorphismId; 3]) {
        let mut b = CategoryBuilder::new();
        let x: Vec<ObjectId> = (0..3)
            .map(|i| b.add_object(format!("X{i}"), format!("1_{i}")).unwrap())
            .collect();
        let f = b.add_morphism("f", x[0], x[1], 0).unwrap();
        let g = b.add_morphism("g", x[1], x[2], 0).unwrap();
        let gf = b.add_morphism("gf", x[0], x[2], 0).unwrap();
        if composite {
            b.set_mu(&[g, f], SignedTerm::signed(0, gf)).unwrap();
        }
        (b.build(), [f, g, gf])
    }

    #[test]
    fn dg_category_passes() {
        let (cat, [f, g, gf]) = three_object(true);
        assert_eq!(cat.mu_eval(&[g, f]).unwrap(), SignedTerm::signed(0, gf));
        let r = cat.verify_ainfty(4);
        assert!(r.passed(), "{:?}", r.failures);
        assert!(r.chains_checked > 0);
    }

    /// A genuine dg example: μ^1 from a degree 0 to a degree 1 basis
    /// element, checked against d² = 0, Leibniz and associativity.
    #[test]
    fn differential_example() {
        let build = |leibniz_ok: bool| {
            let mut b = CategoryBuilder::new();
            let x0 = b.add_object("X0", "1_0").unwrap();
            let x1 = b.add_object("X1", "1_1").unwrap();
            let x2 = b.add_object("X2", "1_2").unwrap();
            let u = b.add_morphism("u", x0, x1, 0).unwrap();
            let v = b.add_morphism("v", x0, x1, 1).unwrap();
            let w = b.add_morphism("w", x1, x2, 0).unwrap();
            let wu = b.add_morphism("wu", x0, x2, 0).unwrap();
            let wv = b.add_morphism("wv", x0, x2, 1).unwrap();
            b.set_mu(&[u], SignedTerm::signed(0, v)).unwrap();
            b.set_mu(&[wu], SignedTerm::signed(0, wv)).unwrap();
            b.set_mu(&[w, u], SignedTerm::signed(0, wu)).unwrap();
            // Leibniz: μ^1 μ^2(w,u) + μ^2(w, μ^1 u) = 0 (μ^1 w = 0, |u| - 1 odd
            // kills nothing else), so μ^2(w, v) must be -wv.
            let s = if leibniz_ok { 1 } else { 0 };
            b.set_mu(&[w, v], SignedTerm::signed(s, wv)).unwrap();
            b.build()
        };
        assert!(build(true).verify_ainfty(3).passed());
        let bad = build(false).verify_ainfty(3);
        assert!(!bad.passed());
        assert!(bad.failures.iter().any(|f| f.chain == vec!["w", "u"]));
    }

    #[test]
    fn non_associative_product_fails() {
        // Four objects in a row where (hg)f is nonzero but h(gf) is zero.
        let mut b = CategoryBuilder::new();
        let x: Vec<ObjectId> = (0..4)
            .map(|i| b.add_object(format!("X{i}"), format!("1_{i}")).unwrap())
            .collect();
        let f = b.add_morphism("f", x[0], x[1], 0).unwrap();
        let g = b.add_morphism("g", x[1], x[2], 0).unwrap();
        let h = b.add_morphism("h", x[2], x[3], 0).unwrap();
        let hg = b.add_morphism("hg", x[1], x[3], 0).unwrap();
        let hgf = b.add_morphism("hgf", x[0], x[3], 0).unwrap();
        b.set_mu(&[h, g], SignedTerm::signed(0, hg)).unwrap();
        b.set_mu(&[hg, f], SignedTerm::signed(0, hgf)).unwrap();
        let cat = b.build();
        let r = cat.verify_ainfty(3);
        assert_eq!(r.failures.len(), 1);
        assert_eq!(r.failures[0].chain, vec!["h", "g", "f"]);
    }

    #[test]
    fn table_validation() {
        let mut b = CategoryBuilder::new();
        let x0 = b.add_object("X0", "1_0").unwrap();
        let x1 = b.add_object("X1", "1_1").unwrap();
        assert!(matches!(
            b.add_morphism("back", x1, x0, 0),
            Err(KernelError::NotDirected { .. })
        ));
        assert!(matches!(
            b.add_morphism("loop", x0, x0, 1),
            Err(KernelError::NotDirected { .. })
        ));
        let f = b.add_morphism("f", x0, x1, 1).unwrap();
        let id0 = b.morphism_by_label("1_0").unwrap();
        assert!(matches!(
            b.set_mu(&[f, id0, id0], SignedTerm::signed(0, f)),
            Err(KernelError::IdentityInTable(_))
        ));
        assert!(matches!(
            b.set_mu(&[f, f], SignedTerm::zero()),
            Err(KernelError::NotComposable(0, 1))
        ));
        assert!(matches!(
            b.set_mu(&[f], SignedTerm::signed(0, f)),
            Err(KernelError::WrongEndpoints { .. }) | Err(KernelError::DegreeLaw { .. })
        ));
        assert!(matches!(
            b.set_mu(&[], SignedTerm::zero()),
            Err(KernelError::EmptyArguments)
        ));
        assert!(b.add_morphism("f", x0, x1, 1).is_err());
        let cat = b.build();
        assert!(matches!(
            cat.mu_eval(&[f, f]),
            Err(KernelError::NotComposable(0, 1))
        ));
    }

    #[test]
    fn unit_values() {
        let (cat, [f, g, _]) = three_object(true);
        let id1 = cat.identity(ObjectId(1));
        assert_eq!(
            cat.mu_eval(&[f, cat.identity(ObjectId(0))]).unwrap(),
            SignedTerm::signed(0, f)
        );
        assert_eq!(cat.mu_eval(&[id1, f]).unwrap(), SignedTerm::signed(0, f));
        assert!(cat.mu_eval(&[g, id1, f]).unwrap().is_zero());
        assert!(cat.mu_eval(&[f]).unwrap().is_zero());
    }

    #[test]
    fn restriction() {
        let (cat, _) = three_object(true);
        let all: Vec<ObjectId> = (0..3).map(ObjectId).collect();
        let same = cat.restrict_directed(&all).unwrap();
        assert!(categories_isomorphic(&cat, &same));
        assert_eq!(same.to_document(), cat.to_document());
        let ends = cat.restrict_directed(&[ObjectId(0), ObjectId(2)]).unwrap();
        assert_eq!(ends.non_identity_morphisms().count(), 1);
        assert!(ends.mu_entries().is_empty());
        let reversed = cat.restrict_directed(&[ObjectId(2), ObjectId(0)]).unwrap();
        assert_eq!(reversed.non_identity_morphisms().count(), 0);
        let single = cat.restrict_directed(&[ObjectId(1)]).unwrap();
        assert_eq!(single.morphisms().len(), 1);
        assert!(cat.restrict_directed(&[ObjectId(7)]).is_err());
        assert!(cat.restrict_directed(&[ObjectId(1), ObjectId(1)]).is_err());
    }

    #[test]
    fn isomorphism_up_to_signs() {
        let (a, [f, g, gf]) = three_object(true);
        let flipped = a.with_mu(&[g, f], SignedTerm::signed(1, gf)).unwrap();
        let iso = find_isomorphism(&a, &flipped).unwrap();
        assert_eq!(iso.signs.iter().filter(|&&s| s == -1).count() % 2, 1);
        let (no_comp, _) = three_object(false);
        assert!(!categories_isomorphic(&a, &no_comp));
        assert!(categories_isomorphic(&a, &a));
    }

    #[test]
    fn permuted_basis_is_found() {
        // Two parallel degree-0 morphisms; only one composes.
        let build = |swap: bool| {
            let mut b = CategoryBuilder::new();
            let x0 = b.add_object("X0", "1_0").unwrap();
            let x1 = b.add_object("X1", "1_1").unwrap();
            let x2 = b.add_object("X2", "1_2").unwrap();
            let p = b.add_morphism("p", x0, x1, 0).unwrap();
            let q = b.add_morphism("q", x0, x1, 0).unwrap();
            let g = b.add_morphism("g", x1, x2, 0).unwrap();
            let r = b.add_morphism("r", x0, x2, 0).unwrap();
            let first = if swap { q } else { p };
            b.set_mu(&[g, first], SignedTerm::signed(0, r)).unwrap();
            b.build()
        };
        let iso = find_isomorphism(&build(false), &build(true)).unwrap();
        assert_eq!(iso.morphism_map[3], MorphismId(4));
    }

    #[test]
    fn document_shape() {
        let (cat, _) = three_object(true);
        let doc = cat.to_document();
        assert_eq!(doc.objects, vec!["X0", "X1", "X2"]);
        assert_eq!(doc.mu.len(), 1);
        assert_eq!(doc.mu[0].arguments, vec!["g", "f"]);
        assert_eq!(doc.mu[0].sign, "+1");
        let json = serde_json::to_string(&doc).unwrap();
        assert!(json.contains("\"arity\":2"));
    }
}
