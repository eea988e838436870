//! Structure constants of the centers of ℤ[GA_n(q)] and ℤ[GL_n(q)] in the
//! class-sum basis.
//!
//! A constant `p^c_{a,b}(n)` counts pairs `(P, Q)` with `P` in class `a`, `Q`
//! in class `b` and `PQ = C` for the fixed representative `C` of `c`. Single
//! constants are obtained by scanning the smaller of the two classes;
//! complete tables by one sweep over the whole group.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::classify::{
    enumerate_group, ClassMatcher, Classifier, GroupId, GroupKind, OrbitExplorer,
};
use crate::error::{Budget, Error, Result};
use crate::field::Field;
use crate::matrix::MatFq;
use crate::types::{
    enumerate_ga_types, enumerate_gl_labels, ga_class_rep, gl_class_rep, gl_min_n, Flavor, GAType,
    GLType,
};

/// Version tag of the table cache files.
pub const TABLE_SCHEMA_VERSION: u32 = 1;

/// Index of a conjugacy class: a GL modified type or a modified GA pair.
/// Both are independent of `n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassLabel {
    GL(GLType),
    GA(GAType),
}

impl fmt::Debug for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLabel::GL(t) => write!(f, "{t}"),
            ClassLabel::GA(t) => write!(f, "{t}"),
        }
    }
}

impl ClassLabel {
    /// Wraps a GA pair, converting plain pairs to their modified form.
    pub fn ga(t: GAType) -> Self {
        ClassLabel::GA(t.to_modified())
    }

    pub fn kind(&self) -> GroupKind {
        match self {
            ClassLabel::GL(_) => GroupKind::GL,
            ClassLabel::GA(_) => GroupKind::GA,
        }
    }

    /// `‖λ‖` for GL, the affine degree for GA.
    pub fn degree(&self) -> usize {
        match self {
            ClassLabel::GL(t) => t.degree(),
            ClassLabel::GA(t) => t.degree(),
        }
    }

    /// Least `n` at which the class is nonempty.
    pub fn min_n(&self) -> usize {
        match self {
            ClassLabel::GL(t) => gl_min_n(t).max(1),
            ClassLabel::GA(t) => t.min_n(),
        }
    }

    /// Canonical representative in the group of size `n`.
    pub fn rep_at(&self, n: usize) -> Result<MatFq> {
        match self {
            ClassLabel::GL(t) => gl_class_rep(t, n),
            ClassLabel::GA(t) => ga_class_rep(t, n),
        }
    }

    fn check_defined(&self, gid: &GroupId) -> Result<()> {
        if self.kind() != gid.kind {
            return Err(Error::Parse(format!(
                "label {self} does not index classes of {gid}"
            )));
        }
        if gid.n < self.min_n() {
            return Err(Error::UndefinedAtN {
                label: self.to_string(),
                n: gid.n,
                min_n: self.min_n(),
            });
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        match self {
            ClassLabel::GL(t) => t.to_json(),
            ClassLabel::GA(t) => t.to_json(),
        }
    }

    pub fn from_json(kind: GroupKind, field: &Field, v: &Value) -> Result<Self> {
        Ok(match kind {
            GroupKind::GL => ClassLabel::GL(GLType::from_json(field, v)?),
            GroupKind::GA => ClassLabel::ga(GAType::from_json(field, v)?),
        })
    }
}

/// All class labels of the group, by degree and then in enumeration order
/// (so the identity class comes first).
pub fn class_labels(gid: &GroupId) -> Vec<ClassLabel> {
    let mut labels: Vec<ClassLabel> = match gid.kind {
        GroupKind::GL => enumerate_gl_labels(gid.n, &gid.field)
            .into_iter()
            .map(ClassLabel::GL)
            .collect(),
        GroupKind::GA => enumerate_ga_types(gid.n, &gid.field, Flavor::Modified)
            .into_iter()
            .map(ClassLabel::GA)
            .collect(),
    };
    labels.sort_by_key(ClassLabel::degree);
    labels
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanMethod {
    /// Read off a full multiplication table.
    PairScan,
    /// Scan of a single class against a fixed product.
    ClassScan,
}

#[derive(Clone, Debug)]
pub struct StructConstReport {
    pub kind: GroupKind,
    pub n: usize,
    pub q: u32,
    pub lhs: (ClassLabel, ClassLabel),
    pub rhs: ClassLabel,
    pub value: u64,
    pub method: ScanMethod,
    /// Size of the class that was scanned.
    pub scanned: usize,
    pub elapsed: Duration,
    /// Whether `‖rhs‖ = ‖lhs.0‖ + ‖lhs.1‖`.
    pub graded: bool,
}

impl StructConstReport {
    pub fn to_json(&self) -> Value {
        json!({
            "group": self.kind,
            "n": self.n,
            "q": self.q,
            "lhs": [self.lhs.0.to_json(), self.lhs.1.to_json()],
            "rhs": self.rhs.to_json(),
            "value": self.value,
            "method": self.method,
            "scanned": self.scanned,
            "elapsed_ms": self.elapsed.as_millis() as u64,
            "graded": self.graded,
        })
    }
}

type ClassKey = (GroupKind, usize, ClassLabel);

/// Caches conjugacy classes and generating sets across structure-constant
/// computations over one field. The time limit applies to each query
/// separately.
pub struct Engine {
    field: Field,
    budget: Budget,
    classes: Mutex<HashMap<ClassKey, Arc<Vec<MatFq>>>>,
    gens: Mutex<HashMap<(GroupKind, usize), Arc<Vec<(MatFq, MatFq)>>>>,
}

impl Engine {
    pub fn new(field: &Field, budget: Budget) -> Self {
        Engine {
            field: field.clone(),
            budget,
            classes: Mutex::default(),
            gens: Mutex::default(),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    fn generator_pairs(&self, gid: &GroupId) -> Arc<Vec<(MatFq, MatFq)>> {
        self.gens
            .lock()
            .expect("generator cache poisoned")
            .entry((gid.kind, gid.n))
            .or_insert_with(|| OrbitExplorer::generator_pairs(gid))
            .clone()
    }

    fn cached(&self, gid: &GroupId, label: &ClassLabel) -> Option<Arc<Vec<MatFq>>> {
        self.classes
            .lock()
            .expect("class cache poisoned")
            .get(&(gid.kind, gid.n, label.clone()))
            .cloned()
    }

    fn store(&self, gid: &GroupId, label: &ClassLabel, elems: Vec<MatFq>) -> Arc<Vec<MatFq>> {
        let arc = Arc::new(elems);
        self.classes
            .lock()
            .expect("class cache poisoned")
            .insert((gid.kind, gid.n, label.clone()), arc.clone());
        arc
    }

    /// All elements of the class, memoized.
    pub fn class_elements(&self, gid: &GroupId, label: &ClassLabel) -> Result<Arc<Vec<MatFq>>> {
        self.class_elements_within(gid, label, &self.budget.restarted())
    }

    fn class_elements_within(
        &self,
        gid: &GroupId,
        label: &ClassLabel,
        budget: &Budget,
    ) -> Result<Arc<Vec<MatFq>>> {
        label.check_defined(gid)?;
        if let Some(c) = self.cached(gid, label) {
            return Ok(c);
        }
        let mut bfs = OrbitExplorer::new(&label.rep_at(gid.n)?, self.generator_pairs(gid));
        bfs.run(&format!("class {label} of {gid}"), budget)?;
        Ok(self.store(gid, label, bfs.into_elements()))
    }

    /// Whichever of the two classes closes first under interleaved orbit
    /// exploration; `true` means class `a` was returned.
    fn smaller_class(
        &self,
        gid: &GroupId,
        a: &ClassLabel,
        b: &ClassLabel,
        budget: &Budget,
    ) -> Result<(bool, Arc<Vec<MatFq>>)> {
        if a == b {
            return Ok((true, self.class_elements_within(gid, a, budget)?));
        }
        let known = [self.cached(gid, a), self.cached(gid, b)];
        if let [Some(x), Some(y)] = &known {
            return Ok(if x.len() <= y.len() {
                (true, x.clone())
            } else {
                (false, y.clone())
            });
        }
        let cap = known.iter().flatten().map(|c| c.len()).min();
        let labels = [a, b];
        let mut explorers: Vec<Option<OrbitExplorer>> = labels
            .iter()
            .zip(&known)
            .map(|(l, k)| match k {
                Some(_) => Ok(None),
                None => Ok(Some(OrbitExplorer::new(
                    &l.rep_at(gid.n)?,
                    self.generator_pairs(gid),
                ))),
            })
            .collect::<Result<_>>()?;
        let mut last_err = None;
        loop {
            let mut alive = false;
            for side in 0..2 {
                let Some(bfs) = explorers[side].as_mut() else {
                    continue;
                };
                match bfs.advance(256, &format!("class {} of {gid}", labels[side]), budget) {
                    Ok(true) => {
                        let elems = explorers[side].take().unwrap().into_elements();
                        return Ok((side == 0, self.store(gid, labels[side], elems)));
                    }
                    Ok(false) => {
                        if let Some(cap) = cap {
                            if bfs.len() > cap {
                                let other = known[1 - side].clone().unwrap();
                                return Ok((side == 1, other));
                            }
                        }
                        alive = true;
                    }
                    Err(e) if e.is_budget() => {
                        explorers[side] = None;
                        last_err = Some(e);
                    }
                    Err(e) => return Err(e),
                }
            }
            if !alive {
                if let Some(side) = (0..2).find(|&s| known[s].is_some()) {
                    return Ok((side == 0, known[side].clone().unwrap()));
                }
                return Err(last_err.expect("both explorations stopped"));
            }
        }
    }

    /// `p^c_{a,b}` in `gid`, counted against the canonical representative of `c`.
    pub fn struct_const(
        &self,
        gid: &GroupId,
        a: &ClassLabel,
        b: &ClassLabel,
        c: &ClassLabel,
    ) -> Result<StructConstReport> {
        c.check_defined(gid)?;
        let rep = c.rep_at(gid.n)?;
        self.struct_const_at(gid, a, b, c, &rep)
    }

    /// As [`Engine::struct_const`], with an arbitrary representative of `c`.
    pub fn struct_const_at(
        &self,
        gid: &GroupId,
        a: &ClassLabel,
        b: &ClassLabel,
        c: &ClassLabel,
        c_rep: &MatFq,
    ) -> Result<StructConstReport> {
        let start = Instant::now();
        for l in [a, b, c] {
            l.check_defined(gid)?;
        }
        let budget = &self.budget.restarted();
        let (scan_a, class) = self.smaller_class(gid, a, b, budget)?;
        let other = if scan_a { b } else { a };
        let matcher = ClassMatcher::new(gid.kind, &other.rep_at(gid.n)?)?;
        let value = class
            .par_chunks(1024)
            .map(|chunk| -> Result<u64> {
                budget.check_time()?;
                Ok(chunk
                    .iter()
                    .filter(|x| {
                        let inv = x.inverse().expect("group element");
                        let partner = if scan_a {
                            inv.mul_unchecked(c_rep)
                        } else {
                            c_rep.mul_unchecked(&inv)
                        };
                        matcher.matches(&partner)
                    })
                    .count() as u64)
            })
            .try_reduce(|| 0, |x, y| Ok(x + y))?;
        Ok(StructConstReport {
            kind: gid.kind,
            n: gid.n,
            q: gid.field.q(),
            lhs: (a.clone(), b.clone()),
            rhs: c.clone(),
            value,
            method: ScanMethod::ClassScan,
            scanned: class.len(),
            elapsed: start.elapsed(),
            graded: c.degree() == a.degree() + b.degree(),
        })
    }

    pub fn struct_const_ga(
        &self,
        a: &GAType,
        b: &GAType,
        c: &GAType,
        n: usize,
    ) -> Result<StructConstReport> {
        let gid = GroupId::ga(n, &self.field)?;
        self.struct_const(
            &gid,
            &ClassLabel::ga(a.clone()),
            &ClassLabel::ga(b.clone()),
            &ClassLabel::ga(c.clone()),
        )
    }

    pub fn struct_const_gl(
        &self,
        a: &GLType,
        b: &GLType,
        c: &GLType,
        n: usize,
    ) -> Result<StructConstReport> {
        let gid = GroupId::gl(n, &self.field)?;
        self.struct_const(
            &gid,
            &ClassLabel::GL(a.clone()),
            &ClassLabel::GL(b.clone()),
            &ClassLabel::GL(c.clone()),
        )
    }

    /// Top-degree slice of `K_a K_b`: the nonzero coefficients of classes
    /// `c` with `‖c‖ = ‖a‖ + ‖b‖` that are nonempty in `gid`.
    pub fn graded_product(
        &self,
        gid: &GroupId,
        a: &ClassLabel,
        b: &ClassLabel,
    ) -> Result<BTreeMap<ClassLabel, u64>> {
        a.check_defined(gid)?;
        b.check_defined(gid)?;
        let target = a.degree() + b.degree();
        let mut out = BTreeMap::new();
        for c in class_labels(gid)
            .into_iter()
            .filter(|c| c.degree() == target)
        {
            let v = self.struct_const(gid, a, b, &c)?.value;
            if v != 0 {
                out.insert(c, v);
            }
        }
        Ok(out)
    }
}

/// One-shot `p^c_{a,b}(n)` in GA_n(q) with the default budget.
pub fn struct_const_ga(
    a: &GAType,
    b: &GAType,
    c: &GAType,
    n: usize,
    field: &Field,
) -> Result<StructConstReport> {
    Engine::new(field, Budget::default()).struct_const_ga(a, b, c, n)
}

/// One-shot `a^ν_{λμ}(n)` in GL_n(q) with the default budget.
pub fn struct_const_gl(
    a: &GLType,
    b: &GLType,
    c: &GLType,
    n: usize,
    field: &Field,
) -> Result<StructConstReport> {
    Engine::new(field, Budget::default()).struct_const_gl(a, b, c, n)
}

/// One-shot graded product in GA_n(q), keyed by modified pairs.
pub fn graded_product(
    a: &GAType,
    b: &GAType,
    n: usize,
    field: &Field,
) -> Result<BTreeMap<GAType, u64>> {
    let gid = GroupId::ga(n, field)?;
    let engine = Engine::new(field, Budget::default());
    let prod =
        engine.graded_product(&gid, &ClassLabel::ga(a.clone()), &ClassLabel::ga(b.clone()))?;
    Ok(prod
        .into_iter()
        .map(|(c, v)| match c {
            ClassLabel::GA(t) => (t, v),
            ClassLabel::GL(_) => unreachable!("GA labels only"),
        })
        .collect())
}

#[derive(Clone, Debug)]
pub struct ClassInfo {
    pub label: ClassLabel,
    pub size: u64,
    pub rep: MatFq,
}

/// Complete expansion of every product of two class sums.
#[derive(Clone, Debug)]
pub struct MultiplicationTable {
    pub group: GroupId,
    pub classes: Vec<ClassInfo>,
    /// `coeffs[(a * m + b) * m + c]` with `m` classes.
    coeffs: Vec<u64>,
}

/// Class index lookup keyed by the free entries of an element.
enum ClassIndexMap {
    Dense { shift: u128, ids: Vec<u16> },
    Sparse { ids: HashMap<u128, u16> },
}

const DENSE_LIMIT: u128 = 1 << 26;

impl ClassIndexMap {
    fn new(gid: &GroupId) -> Self {
        let q = gid.field.q() as u128;
        let (shift, free) = match gid.kind {
            GroupKind::GL => (1, gid.n * gid.n),
            GroupKind::GA => (q.pow(gid.n as u32), gid.n * (gid.n - 1)),
        };
        match q.checked_pow(free as u32) {
            Some(size) if size <= DENSE_LIMIT => ClassIndexMap::Dense {
                shift,
                ids: vec![u16::MAX; size as usize],
            },
            _ => ClassIndexMap::Sparse {
                ids: HashMap::new(),
            },
        }
    }

    fn insert(&mut self, key: u128, id: u16) {
        match self {
            ClassIndexMap::Dense { shift, ids } => ids[(key / *shift) as usize] = id,
            ClassIndexMap::Sparse { ids } => {
                ids.insert(key, id);
            }
        }
    }

    fn get(&self, key: u128) -> usize {
        let id = match self {
            ClassIndexMap::Dense { shift, ids } => ids[(key / *shift) as usize],
            ClassIndexMap::Sparse { ids } => ids[&key],
        };
        debug_assert_ne!(id, u16::MAX);
        id as usize
    }
}

/// Full table by one sweep: with `M` ranging over the group, `P = M^{-1}`
/// and `Q = M C` run over all factorizations `PQ = C`.
pub fn multiplication_table(gid: &GroupId, budget: &Budget) -> Result<MultiplicationTable> {
    let labels = class_labels(gid);
    let m = labels.len();
    if m >= u16::MAX as usize {
        return Err(Error::TooLarge {
            what: format!("class list of {gid}"),
            size: m as u128,
            budget: u16::MAX as u64,
        });
    }
    let index: HashMap<&ClassLabel, usize> =
        labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let elements = enumerate_group(gid, budget)?;
    let classifier = Classifier::new(&gid.field);
    let ids: Vec<usize> = elements
        .par_iter()
        .map(|x| -> Result<usize> {
            let label = match gid.kind {
                GroupKind::GL => {
                    ClassLabel::GL(crate::types::modify_type(&classifier.type_of_gl(x)?))
                }
                GroupKind::GA => ClassLabel::GA(classifier.type_of_ga(x, Flavor::Modified)?),
            };
            index
                .get(&label)
                .copied()
                .ok_or_else(|| Error::ClassificationBug(format!("unlisted class {label}")))
        })
        .collect::<Result<_>>()?;
    budget.check_time()?;

    let mut lookup = ClassIndexMap::new(gid);
    let mut sizes = vec![0u64; m];
    for (x, &id) in elements.iter().zip(&ids) {
        lookup.insert(x.key(), id as u16);
        sizes[id] += 1;
    }
    let reps: Vec<MatFq> = labels
        .iter()
        .map(|l| l.rep_at(gid.n))
        .collect::<Result<_>>()?;
    let inv_class: Vec<usize> = reps
        .iter()
        .map(|r| Ok(lookup.get(r.inverse()?.key())))
        .collect::<Result<_>>()?;

    let coeffs = elements
        .par_iter()
        .zip(ids.par_iter())
        .fold(
            || vec![0u64; m * m * m],
            |mut acc, (x, &id)| {
                let a = inv_class[id];
                for (c, rep) in reps.iter().enumerate() {
                    let b = lookup.get(x.mul_unchecked(rep).key());
                    acc[(a * m + b) * m + c] += 1;
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; m * m * m],
            |mut x, y| {
                x.iter_mut().zip(y).for_each(|(s, v)| *s += v);
                x
            },
        );
    budget.check_time()?;

    let classes = labels
        .into_iter()
        .zip(sizes)
        .zip(reps)
        .map(|((label, size), rep)| ClassInfo { label, size, rep })
        .collect();
    Ok(MultiplicationTable {
        group: gid.clone(),
        classes,
        coeffs,
    })
}

impl MultiplicationTable {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn coeff(&self, a: usize, b: usize, c: usize) -> u64 {
        let m = self.len();
        self.coeffs[(a * m + b) * m + c]
    }

    pub fn index_of(&self, label: &ClassLabel) -> Option<usize> {
        self.classes.iter().position(|c| &c.label == label)
    }

    /// Coefficient by label; `None` when a class is absent at this `n`.
    pub fn coeff_by_label(&self, a: &ClassLabel, b: &ClassLabel, c: &ClassLabel) -> Option<u64> {
        Some(self.coeff(self.index_of(a)?, self.index_of(b)?, self.index_of(c)?))
    }

    /// Nonzero terms of `K_a K_b`.
    pub fn terms(&self, a: usize, b: usize) -> BTreeMap<usize, u64> {
        (0..self.len())
            .map(|c| (c, self.coeff(a, b, c)))
            .filter(|&(_, v)| v != 0)
            .collect()
    }

    /// Rows `(a, b)` violating `Σ_c coeff·|K_c| = |K_a||K_b|`.
    pub fn row_mass_failures(&self) -> Vec<(usize, usize)> {
        let m = self.len();
        let mut bad = Vec::new();
        for a in 0..m {
            for b in 0..m {
                let mass: u128 = (0..m)
                    .map(|c| self.coeff(a, b, c) as u128 * self.classes[c].size as u128)
                    .sum();
                if mass != self.classes[a].size as u128 * self.classes[b].size as u128 {
                    bad.push((a, b));
                }
            }
        }
        bad
    }

    /// Pairs `(a, b)` whose rows differ from `(b, a)`.
    pub fn commutativity_failures(&self) -> Vec<(usize, usize)> {
        let m = self.len();
        (0..m)
            .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
            .filter(|&(a, b)| (0..m).any(|c| self.coeff(a, b, c) != self.coeff(b, a, c)))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let classes: Vec<Value> = self
            .classes
            .iter()
            .enumerate()
            .map(|(i, c)| {
                json!({
                    "index": i,
                    "label": c.label.to_json(),
                    "degree": c.label.degree(),
                    "size": c.size,
                    "representative": c.rep.to_json(),
                })
            })
            .collect();
        let m = self.len();
        let products: Vec<Value> = (0..m)
            .flat_map(|a| (0..m).map(move |b| (a, b)))
            .map(|(a, b)| {
                let terms: serde_json::Map<String, Value> = self
                    .terms(a, b)
                    .into_iter()
                    .map(|(c, v)| (c.to_string(), json!(v)))
                    .collect();
                json!({ "a": a, "b": b, "terms": terms })
            })
            .collect();
        json!({
            "schema": TABLE_SCHEMA_VERSION,
            "group": self.group.kind,
            "n": self.group.n,
            "q": self.group.field.q(),
            "field": self.group.field.to_json(),
            "classes": classes,
            "products": products,
        })
    }

    pub fn from_json(field: &Field, v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("table JSON: {m}"));
        if v.get("schema").and_then(Value::as_u64) != Some(TABLE_SCHEMA_VERSION as u64) {
            return Err(bad("unsupported schema version"));
        }
        let kind: GroupKind = serde_json::from_value(
            v.get("group")
                .cloned()
                .ok_or_else(|| bad("missing group"))?,
        )
        .map_err(|e| bad(&e.to_string()))?;
        let n = v
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("missing n"))? as usize;
        let group = GroupId::new(kind, n, field)?;
        let classes = v
            .get("classes")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing classes"))?
            .iter()
            .map(|c| {
                Ok(ClassInfo {
                    label: ClassLabel::from_json(
                        kind,
                        field,
                        c.get("label").ok_or_else(|| bad("label"))?,
                    )?,
                    size: c
                        .get("size")
                        .and_then(Value::as_u64)
                        .ok_or_else(|| bad("size"))?,
                    rep: MatFq::from_json(
                        field,
                        c.get("representative")
                            .ok_or_else(|| bad("representative"))?,
                    )?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let m = classes.len();
        let mut coeffs = vec![0u64; m * m * m];
        for p in v
            .get("products")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing products"))?
        {
            let a = p.get("a").and_then(Value::as_u64).ok_or_else(|| bad("a"))? as usize;
            let b = p.get("b").and_then(Value::as_u64).ok_or_else(|| bad("b"))? as usize;
            for (c, val) in p
                .get("terms")
                .and_then(Value::as_object)
                .ok_or_else(|| bad("terms"))?
            {
                let c: usize = c.parse().map_err(|_| bad("term index"))?;
                if a >= m || b >= m || c >= m {
                    return Err(bad("index out of range"));
                }
                coeffs[(a * m + b) * m + c] = val.as_u64().ok_or_else(|| bad("coefficient"))?;
            }
        }
        Ok(MultiplicationTable {
            group,
            classes,
            coeffs,
        })
    }

    /// `a,b,c,coeff` lines for the nonzero coefficients, after a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("a,b,c,coeff\n");
        let m = self.len();
        for a in 0..m {
            for b in 0..m {
                for (c, v) in self.terms(a, b) {
                    out.push_str(&format!("{a},{b},{c},{v}\n"));
                }
            }
        }
        out
    }
}

/// Cache file name for a table of `gid`.
pub fn table_cache_path(dir: &Path, gid: &GroupId) -> PathBuf {
    dir.join(format!(
        "table-{}-{}-{}-v{}.json",
        gid.kind,
        gid.n,
        gid.field.q(),
        TABLE_SCHEMA_VERSION
    ))
}

/// [`multiplication_table`] backed by an on-disk cache directory.
pub fn multiplication_table_cached(
    gid: &GroupId,
    budget: &Budget,
    dir: &Path,
) -> Result<MultiplicationTable> {
    let path = table_cache_path(dir, gid);
    if let Ok(text) = fs::read_to_string(&path) {
        if let Ok(v) = serde_json::from_str::<Value>(&text) {
            if let Ok(t) = MultiplicationTable::from_json(&gid.field, &v) {
                if t.group == *gid {
                    return Ok(t);
                }
            }
        }
    }
    let table = multiplication_table(gid, budget)?;
    let io = |e: std::io::Error| Error::Parse(format!("cache {}: {e}", path.display()));
    fs::create_dir_all(dir).map_err(io)?;
    fs::write(&path, table.to_json().to_string()).map_err(io)?;
    Ok(table)
}
