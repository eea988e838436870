//! Partition-valued types on Φ_q, affine types `(λ, k)`, the modified-type
//! transformations, and the canonical block representatives `J_λ`,
//! `J_(λ,k)`.
//!
//! An affine pair comes in two flavors. A *plain* pair `(λ, k)` has
//! `‖λ‖ = n - 1` and, when `k ≥ 1`, `k` is a part of `λ(t-1)`. A *modified*
//! pair `(λ̊, k)` is the image under [`modify_type`] of a plain one and is
//! independent of `n`; class-algebra indices are always modified.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::{jordan_block, MatFq};
use crate::partition::{partitions_of, Partition};
use crate::poly::{irreducibles_up_to, is_irreducible, PolyFq};

/// `t - 1` over the given field.
pub fn t_minus_one(field: &Field) -> PolyFq {
    PolyFq::linear(field, 1)
}

/// A partition-valued function `λ: Φ_q → 𝒫` with finite support.
#[derive(Clone)]
pub struct GLType {
    field: Field,
    map: BTreeMap<PolyFq, Partition>,
}

impl PartialEq for GLType {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map
    }
}

impl Eq for GLType {}

impl Hash for GLType {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.map.hash(state);
    }
}

impl Ord for GLType {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.map.iter().cmp(other.map.iter())
    }
}

impl PartialOrd for GLType {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for GLType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GLType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.map.is_empty() {
            return f.write_str("∅");
        }
        let items: Vec<String> = self.map.iter().map(|(p, l)| format!("{p}:{l}")).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

impl GLType {
    pub fn empty(field: &Field) -> Self {
        GLType {
            field: field.clone(),
            map: BTreeMap::new(),
        }
    }

    /// Validates keys (monic irreducible, not `t`) and drops empty partitions.
    pub fn new(
        field: &Field,
        entries: impl IntoIterator<Item = (PolyFq, Partition)>,
    ) -> Result<Self> {
        let mut t = GLType::empty(field);
        for (f, part) in entries {
            if f.field() != field {
                return Err(Error::FieldMismatch);
            }
            if !f.is_monic() || !is_irreducible(&f) || f == PolyFq::t(field) {
                return Err(Error::BadPolynomial(format!("{f} is not in Φ_q")));
            }
            if part.is_empty() {
                continue;
            }
            let merged = t.get(&f).union(&part);
            t.map.insert(f, merged);
        }
        Ok(t)
    }

    /// Single entry `f ↦ parts`.
    pub fn single(f: &PolyFq, parts: &[u32]) -> Result<Self> {
        GLType::new(f.field(), [(f.clone(), Partition::new(parts.to_vec())?)])
    }

    /// `λ(t-1) = parts` and nothing else.
    pub fn unipotent(field: &Field, parts: &[u32]) -> Result<Self> {
        GLType::single(&t_minus_one(field), parts)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, f: &PolyFq) -> Partition {
        self.map.get(f).cloned().unwrap_or_default()
    }

    /// `λ(t-1)`.
    pub fn unipotent_part(&self) -> Partition {
        self.get(&t_minus_one(&self.field))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&PolyFq, &Partition)> {
        self.map.iter()
    }

    fn with_unipotent(&self, part: Partition) -> GLType {
        let mut t = self.clone();
        let key = t_minus_one(&self.field);
        if part.is_empty() {
            t.map.remove(&key);
        } else {
            t.map.insert(key, part);
        }
        t
    }

    /// Pointwise union `λ ∪ μ`.
    pub fn union(&self, other: &GLType) -> Result<GLType> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let mut t = self.clone();
        for (f, part) in &other.map {
            let merged = t.get(f).union(part);
            t.map.insert(f.clone(), merged);
        }
        Ok(t)
    }

    /// `‖λ‖ = Σ_f d(f)|λ(f)|`.
    pub fn degree(&self) -> usize {
        gl_degree(self)
    }

    pub fn to_json(&self) -> Value {
        let m: Map<String, Value> = self
            .map
            .iter()
            .map(|(f, p)| (f.to_string(), Value::from(p.parts().to_vec())))
            .collect();
        Value::Object(m)
    }

    pub fn from_json(field: &Field, v: &Value) -> Result<GLType> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("type JSON must be an object".into()))?;
        let mut entries = Vec::new();
        for (k, parts) in obj {
            let f = PolyFq::parse(field, k)?;
            let parts: Vec<u32> = serde_json::from_value(parts.clone())
                .map_err(|e| Error::Parse(format!("parts of {k}: {e}")))?;
            entries.push((f, Partition::new(parts)?));
        }
        GLType::new(field, entries)
    }

    /// Shorthand `part:poly,part:poly,...`, e.g. `2:t-1,1:t-1,1:t^2+t+1`.
    /// The empty string and `-` denote the empty type.
    pub fn parse_shorthand(field: &Field, s: &str) -> Result<GLType> {
        let s = s.trim();
        if s.is_empty() || s == "-" || s == "∅" {
            return Ok(GLType::empty(field));
        }
        let mut entries = Vec::new();
        for item in s.split(',') {
            let (part, poly) = item
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("'{item}' is not of the form part:poly")))?;
            let part: u32 = part
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad part '{part}'")))?;
            entries.push((PolyFq::parse(field, poly)?, Partition::new(vec![part])?));
        }
        GLType::new(field, entries)
    }
}

pub fn gl_degree(t: &GLType) -> usize {
    t.map.iter().map(|(f, p)| f.deg() * p.size()).sum()
}

/// `λ̊`: every part of `λ(t-1)` lowered by one, zero parts dropped.
pub fn modify_type(t: &GLType) -> GLType {
    let lowered = Partition::from_parts_lossy(t.unipotent_part().parts().iter().map(|&p| p - 1));
    t.with_unipotent(lowered)
}

/// Least `m` for which `μ^{↑m}` exists: `‖μ‖ + ℓ(μ(t-1))`.
pub fn inflation_min(t: &GLType) -> usize {
    t.degree() + t.unipotent_part().len()
}

/// `μ^{↑m}`: parts of `μ(t-1)` raised by one, then padded with 1's up to
/// total degree `m`.
pub fn inflate_type(t: &GLType, m: usize) -> Result<GLType> {
    let min = inflation_min(t);
    if m < min {
        return Err(Error::NotInflatable { target: m, min });
    }
    let u = t.unipotent_part();
    let raised = u.parts().iter().map(|&p| p + 1);
    let padded = Partition::from_parts_lossy(raised.chain(std::iter::repeat_n(1, m - min)));
    Ok(t.with_unipotent(padded))
}

/// `λ̃_(k)`: for `k ≥ 1` one part `k` of `λ(t-1)` becomes `k + 1`; for
/// `k = 0` a part 1 is adjoined.
pub fn tilde_type(t: &GLType, k: u32) -> Result<GLType> {
    let u = t.unipotent_part();
    let next = if k == 0 {
        u.union(&Partition::from_parts_lossy([1]))
    } else {
        u.replace_part(k, k + 1).ok_or(Error::InvalidShift(k))?
    };
    Ok(t.with_unipotent(next))
}

/// Marks which convention an affine pair uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Plain,
    Modified,
}

/// An affine pair `(λ, k)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GAType {
    pub base: GLType,
    pub k: u32,
    pub flavor: Flavor,
}

impl fmt::Debug for GAType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GAType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.base, self.k)
    }
}

impl GAType {
    /// Checked constructor.
    pub fn new(base: GLType, k: u32, flavor: Flavor) -> Result<Self> {
        let t = GAType { base, k, flavor };
        t.validate()?;
        Ok(t)
    }

    pub fn modified(base: GLType, k: u32) -> Result<Self> {
        GAType::new(base, k, Flavor::Modified)
    }

    pub fn plain(base: GLType, k: u32) -> Result<Self> {
        GAType::new(base, k, Flavor::Plain)
    }

    pub fn validate(&self) -> Result<()> {
        let u = self.base.unipotent_part();
        let ok = match (self.flavor, self.k) {
            (_, 0) => true,
            (Flavor::Plain, k) => u.multiplicity(k) > 0,
            (Flavor::Modified, 1) => true,
            (Flavor::Modified, k) => u.multiplicity(k - 1) > 0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidShift(self.k))
        }
    }

    /// Affine degree: `‖λ‖`, plus one when `k ≥ 1`.
    pub fn degree(&self) -> usize {
        self.base.degree() + usize::from(self.k >= 1)
    }

    /// `(λ̊, k)` of a plain pair; modified pairs are returned unchanged.
    pub fn to_modified(&self) -> GAType {
        match self.flavor {
            Flavor::Modified => self.clone(),
            Flavor::Plain => GAType {
                base: modify_type(&self.base),
                k: self.k,
                flavor: Flavor::Modified,
            },
        }
    }

    /// Least `n` at which the modified class `(μ, l)` of GA_n(q) is nonempty:
    /// `‖μ‖ + ℓ(μ(t-1)) ≤ n - 1`, or `≤ n - 2` when `l = 1`.
    pub fn min_n(&self) -> usize {
        match self.flavor {
            Flavor::Plain => self.base.degree() + 1,
            Flavor::Modified => inflation_min(&self.base) + 1 + usize::from(self.k == 1),
        }
    }

    /// The plain pair in GA_n(q) whose modified type is `self`.
    pub fn plain_at(&self, n: usize) -> Result<GAType> {
        if self.flavor == Flavor::Plain {
            if self.base.degree() + 1 != n {
                return Err(Error::UndefinedAtN {
                    label: self.to_string(),
                    n,
                    min_n: self.min_n(),
                });
            }
            return Ok(self.clone());
        }
        if n < self.min_n() {
            return Err(Error::UndefinedAtN {
                label: self.to_string(),
                n,
                min_n: self.min_n(),
            });
        }
        GAType::plain(inflate_type(&self.base, n - 1)?, self.k)
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "base": self.base.to_json(),
            "k": self.k,
            "flavor": self.flavor,
        })
    }

    pub fn from_json(field: &Field, v: &Value) -> Result<GAType> {
        let base = GLType::from_json(
            field,
            v.get("base")
                .ok_or_else(|| Error::Parse("missing base".into()))?,
        )?;
        let k = v
            .get("k")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("missing k".into()))? as u32;
        let flavor = match v.get("flavor") {
            None => Flavor::Modified,
            Some(f) => serde_json::from_value(f.clone())
                .map_err(|e| Error::Parse(format!("flavor: {e}")))?,
        };
        GAType::new(base, k, flavor)
    }

    /// Shorthand `<gl shorthand>;<k>` for a modified pair, e.g. `;1` is
    /// `(∅, 1)` and `1:t-1;0` is `((1)_{t-1}, 0)`. Without `;` the shift is 0.
    pub fn parse_shorthand(field: &Field, s: &str) -> Result<GAType> {
        let (base, k) = match s.rsplit_once(';') {
            Some((b, k)) => (
                b,
                k.trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad shift '{k}'")))?,
            ),
            None => (s, 0),
        };
        GAType::modified(GLType::parse_shorthand(field, base)?, k)
    }
}

/// `λ̂_(k)`: the GL modified type of an affine element of modified type
/// `(λ, k)`; `λ` for `k = 0` and `λ̃_(k-1)` otherwise.
pub fn hat_type(pair: &GAType) -> Result<GLType> {
    if pair.flavor != Flavor::Modified {
        return Err(Error::InvalidShift(pair.k));
    }
    pair.validate()?;
    match pair.k {
        0 => Ok(pair.base.clone()),
        k => tilde_type(&pair.base, k - 1),
    }
}

/// Least `n` at which the GL_n(q) class with modified type `λ` is nonempty.
pub fn gl_min_n(modified: &GLType) -> usize {
    inflation_min(modified)
}

fn unipotent_blocks(field: &Field, u: &Partition) -> Vec<(u32, Vec<MatFq>)> {
    let tm1 = t_minus_one(field);
    u.multiplicities()
        .into_iter()
        .map(|(size, mult)| (size, vec![jordan_block(&tm1, size as usize); mult]))
        .collect()
}

fn non_unipotent_blocks(t: &GLType) -> Vec<MatFq> {
    let tm1 = t_minus_one(&t.field);
    t.map
        .iter()
        .filter(|(f, _)| **f != tm1)
        .flat_map(|(f, part)| {
            part.parts()
                .iter()
                .map(move |&m| jordan_block(f, m as usize))
        })
        .collect()
}

/// `J_λ`: unipotent super-blocks by ascending part size, then the other
/// blocks in canonical Φ_q order with parts descending.
pub fn canonical_rep_gl(t: &GLType) -> MatFq {
    let mut blocks: Vec<MatFq> = unipotent_blocks(&t.field, &t.unipotent_part())
        .into_iter()
        .flat_map(|(_, b)| b)
        .collect();
    blocks.extend(non_unipotent_blocks(t));
    MatFq::block_diag(&t.field, &blocks)
}

/// `J_(λ,k)` for a plain pair with `‖λ‖ = n - 1`: `1 ⊕ J_λ`, plus for `k ≥ 1`
/// a 1 below the corner at the last coordinate of the super-block of
/// `J_k(t-1)` blocks.
pub fn canonical_rep_ga(pair: &GAType, n: usize) -> Result<MatFq> {
    let invalid = |msg: String| Error::InvalidRepresentative(msg);
    if pair.flavor != Flavor::Plain {
        return Err(invalid(format!(
            "{pair} is a modified pair; inflate it first"
        )));
    }
    if pair.base.degree() + 1 != n {
        return Err(invalid(format!("‖λ‖ = {} but n = {n}", pair.base.degree())));
    }
    pair.validate()
        .map_err(|_| invalid(format!("k = {} is not a part of λ(t-1)", pair.k)))?;
    let mut g = canonical_rep_gl(&pair.base);
    let mut alpha = vec![0u32; n - 1];
    if pair.k >= 1 {
        let mut end = 0;
        for (size, blocks) in unipotent_blocks(&pair.base.field, &pair.base.unipotent_part()) {
            end += size as usize * blocks.len();
            if size == pair.k {
                break;
            }
        }
        alpha[end - 1] = 1;
    }
    if n == 1 {
        g = MatFq::zeros(&pair.base.field, 0, 0);
    }
    MatFq::affine_from_parts(&g, &alpha)
}

/// Representative of the modified GA class `label` inside GA_n(q).
pub fn ga_class_rep(label: &GAType, n: usize) -> Result<MatFq> {
    canonical_rep_ga(&label.plain_at(n)?, n)
}

/// Representative of the GL_n(q) class with modified type `label`.
pub fn gl_class_rep(label: &GLType, n: usize) -> Result<MatFq> {
    let min_n = gl_min_n(label);
    if n < min_n {
        return Err(Error::UndefinedAtN {
            label: label.to_string(),
            n,
            min_n,
        });
    }
    Ok(canonical_rep_gl(&inflate_type(label, n)?))
}

/// All `λ` with `‖λ‖ = n`.
pub fn enumerate_gl_types(n: usize, field: &Field) -> Vec<GLType> {
    let irr = if n == 0 {
        Vec::new()
    } else {
        irreducibles_up_to(field, n)
    };
    let mut out = Vec::new();
    fn rec(
        irr: &[PolyFq],
        i: usize,
        remaining: usize,
        acc: &mut Vec<(PolyFq, Partition)>,
        out: &mut Vec<GLType>,
        field: &Field,
    ) {
        if remaining == 0 {
            out.push(GLType {
                field: field.clone(),
                map: acc.iter().cloned().collect(),
            });
            return;
        }
        if i == irr.len() {
            return;
        }
        let d = irr[i].deg();
        if d > remaining {
            return;
        }
        for w in (0..=remaining / d).rev() {
            if w == 0 {
                rec(irr, i + 1, remaining, acc, out, field);
                continue;
            }
            for p in partitions_of(w) {
                acc.push((irr[i].clone(), p));
                rec(irr, i + 1, remaining - d * w, acc, out, field);
                acc.pop();
            }
        }
    }
    rec(&irr, 0, n, &mut Vec::new(), &mut out, field);
    out
}

/// All affine pairs of GA_n(q) in the requested flavor, one per class.
pub fn enumerate_ga_types(n: usize, field: &Field, flavor: Flavor) -> Vec<GAType> {
    assert!(n >= 1, "GA_n needs n >= 1");
    let mut out = Vec::new();
    for base in enumerate_gl_types(n - 1, field) {
        let mut shifts: Vec<u32> = base.unipotent_part().multiplicities().into_keys().collect();
        shifts.insert(0, 0);
        for k in shifts {
            let plain = GAType {
                base: base.clone(),
                k,
                flavor: Flavor::Plain,
            };
            out.push(match flavor {
                Flavor::Plain => plain,
                Flavor::Modified => plain.to_modified(),
            });
        }
    }
    out
}

/// Modified GL labels of GL_n(q), one per class.
pub fn enumerate_gl_labels(n: usize, field: &Field) -> Vec<GLType> {
    enumerate_gl_types(n, field)
        .iter()
        .map(modify_type)
        .collect()
}
