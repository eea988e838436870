//! Classification of elements of GL_n(q) and GA_n(q) by type, reflection
//! lengths, and enumeration utilities (whole groups, generating sets,
//! conjugation orbits).

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Budget, Error, Result};
use crate::field::Field;
use crate::matrix::MatFq;
use crate::partition::Partition;
use crate::poly::{poly_factor, PolyFq};
use crate::types::{tilde_type, Flavor, GAType, GLType};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupKind {
    GL,
    GA,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupKind::GL => "GL",
            GroupKind::GA => "GA",
        })
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct GroupId {
    pub kind: GroupKind,
    pub n: usize,
    pub field: Field,
}

impl fmt::Debug for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}({})", self.kind, self.n, self.field.q())
    }
}

/// `|GL_n(q)| = Π_{i<n} (q^n - q^i)`, saturating.
pub fn gl_order(n: usize, q: u32) -> u128 {
    let q = q as u128;
    let qn = q.saturating_pow(n as u32);
    (0..n as u32).fold(1u128, |acc, i| acc.saturating_mul(qn - q.pow(i)))
}

/// `|GA_n(q)| = q^(n-1) |GL_{n-1}(q)|`, saturating.
pub fn ga_order(n: usize, q: u32) -> u128 {
    (q as u128)
        .saturating_pow(n as u32 - 1)
        .saturating_mul(gl_order(n - 1, q))
}

impl GroupId {
    pub fn new(kind: GroupKind, n: usize, field: &Field) -> Result<Self> {
        if n == 0 {
            return Err(Error::ShapeMismatch("groups need n >= 1".into()));
        }
        if !MatFq::key_fits(field, n * n) {
            return Err(Error::TooLarge {
                what: format!("{kind}_{n}({}) element keys", field.q()),
                size: u128::MAX,
                budget: 0,
            });
        }
        Ok(GroupId {
            kind,
            n,
            field: field.clone(),
        })
    }

    pub fn ga(n: usize, field: &Field) -> Result<Self> {
        GroupId::new(GroupKind::GA, n, field)
    }

    pub fn gl(n: usize, field: &Field) -> Result<Self> {
        GroupId::new(GroupKind::GL, n, field)
    }

    pub fn order(&self) -> u128 {
        match self.kind {
            GroupKind::GL => gl_order(self.n, self.field.q()),
            GroupKind::GA => ga_order(self.n, self.field.q()),
        }
    }

    pub fn contains(&self, m: &MatFq) -> bool {
        m.field() == &self.field
            && m.rows() == self.n
            && match self.kind {
                GroupKind::GL => m.is_invertible(),
                GroupKind::GA => m.is_affine(),
            }
    }

    pub fn identity(&self) -> MatFq {
        MatFq::identity(&self.field, self.n)
    }
}

type Factors = Arc<Vec<(PolyFq, u32)>>;

/// Type computation with a shared cache of characteristic-polynomial
/// factorizations, so that classifying a whole group factors each
/// characteristic polynomial only once.
pub struct Classifier {
    field: Field,
    factors: RwLock<HashMap<Vec<u32>, Factors>>,
}

impl Classifier {
    pub fn new(field: &Field) -> Self {
        Classifier {
            field: field.clone(),
            factors: RwLock::new(HashMap::new()),
        }
    }

    fn factor(&self, cp: &PolyFq) -> Result<Factors> {
        if let Some(f) = self
            .factors
            .read()
            .expect("factor cache poisoned")
            .get(cp.coeffs())
        {
            return Ok(f.clone());
        }
        let fz: Factors = Arc::new(poly_factor(cp)?.factors);
        self.factors
            .write()
            .expect("factor cache poisoned")
            .insert(cp.coeffs().to_vec(), fz.clone());
        Ok(fz)
    }

    pub fn type_of_gl(&self, g: &MatFq) -> Result<GLType> {
        if g.field() != &self.field {
            return Err(Error::FieldMismatch);
        }
        if !g.is_square() {
            return Err(Error::ShapeMismatch("type of a non-square matrix".into()));
        }
        if g.rows() == 0 {
            return Ok(GLType::empty(&self.field));
        }
        if !g.is_invertible() {
            return Err(Error::NotInvertible);
        }
        let cp = g.char_poly()?;
        let mut entries = Vec::new();
        for (f, e) in self.factor(&cp)?.iter() {
            let d = f.deg();
            let tower = g.nullity_tower_unchecked(f, *e as usize);
            let mut conj = Vec::new();
            let mut prev = 0;
            for &nj in &tower {
                let diff = nj - prev;
                if diff % d != 0 {
                    return Err(Error::ClassificationBug(format!(
                        "nullity jump {diff} not divisible by deg {f}"
                    )));
                }
                if diff > 0 {
                    conj.push((diff / d) as u32);
                }
                prev = nj;
            }
            let part = Partition::new(conj).expect("positive parts").conjugate();
            if part.size() != *e as usize {
                return Err(Error::ClassificationBug(format!(
                    "{f}: partition {part} has wrong size {e}"
                )));
            }
            entries.push((f.clone(), part));
        }
        let t = GLType::new(&self.field, entries)?;
        debug_assert_eq!(t.degree(), g.rows());
        Ok(t)
    }

    pub fn type_of_ga(&self, a: &MatFq, flavor: Flavor) -> Result<GAType> {
        let (g, alpha) = a.affine_parts()?;
        let lambda = self.type_of_gl(&g)?;
        let image = MatFq::identity(&self.field, g.rows()).sub(&g)?;
        let k = if image.column_space_contains(&alpha)? {
            0
        } else {
            let whole = self.type_of_gl(a)?;
            let shifts = lambda.unipotent_part().multiplicities().into_keys();
            let mut found = None;
            for k in shifts {
                if tilde_type(&lambda, k)? == whole {
                    found = Some(k);
                    break;
                }
            }
            found.ok_or_else(|| {
                Error::ClassificationBug(format!("no shift matches {whole} over {lambda}"))
            })?
        };
        let plain = GAType::plain(lambda, k)?;
        Ok(match flavor {
            Flavor::Plain => plain,
            Flavor::Modified => plain.to_modified(),
        })
    }
}

/// Type `λ` of `g ∈ GL_n(q)`.
pub fn type_of_gl(g: &MatFq) -> Result<GLType> {
    Classifier::new(g.field()).type_of_gl(g)
}

/// Type `(λ, k)` (or modified type `(λ̊, k)`) of `A ∈ GA_n(q)`.
pub fn type_of_ga(a: &MatFq, flavor: Flavor) -> Result<GAType> {
    Classifier::new(a.field()).type_of_ga(a, flavor)
}

/// Conjugacy test against one fixed class. Two elements are conjugate
/// iff their characteristic polynomials and nullity towers agree (for GA
/// also those of the linear part), so the target's invariants are
/// computed once and candidates are compared against them, with the cheap
/// rank of `X - I` checked first.
#[derive(Clone)]
pub struct ClassMatcher {
    kind: GroupKind,
    rank: usize,
    char_poly: PolyFq,
    whole: Vec<(PolyFq, Vec<usize>)>,
    linear: Vec<(PolyFq, Vec<usize>)>,
}

impl ClassMatcher {
    pub fn new(kind: GroupKind, rep: &MatFq) -> Result<Self> {
        let classifier = Classifier::new(rep.field());
        let char_poly = rep.char_poly()?;
        let factors = classifier.factor(&char_poly)?;
        let whole = factors
            .iter()
            .map(|(f, e)| (f.clone(), rep.nullity_tower_unchecked(f, *e as usize)))
            .collect();
        let linear = match kind {
            GroupKind::GL => Vec::new(),
            GroupKind::GA => {
                let (g, _) = rep.affine_parts()?;
                factors
                    .iter()
                    .filter_map(|(f, e)| {
                        let e = *e as usize - usize::from(f == &PolyFq::linear(rep.field(), 1));
                        (e > 0).then(|| (f.clone(), g.nullity_tower_unchecked(f, e)))
                    })
                    .collect()
            }
        };
        Ok(ClassMatcher {
            kind,
            rank: rep.minus_scalar(1).rank(),
            char_poly,
            whole,
            linear,
        })
    }

    /// `rank(X - I)` for members of the class.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matches(&self, x: &MatFq) -> bool {
        if x.minus_scalar(1).rank() != self.rank {
            return false;
        }
        if x.char_poly().ok().as_ref() != Some(&self.char_poly) {
            return false;
        }
        if !self
            .whole
            .iter()
            .all(|(f, tower)| &x.nullity_tower_unchecked(f, tower.len()) == tower)
        {
            return false;
        }
        match self.kind {
            GroupKind::GL => true,
            GroupKind::GA => {
                let Ok((g, _)) = x.affine_parts() else {
                    return false;
                };
                self.linear
                    .iter()
                    .all(|(f, tower)| &g.nullity_tower_unchecked(f, tower.len()) == tower)
            }
        }
    }
}

/// `ℓ(h) = rank(h - I)`.
pub fn reflection_length(h: &MatFq) -> Result<usize> {
    if !h.is_invertible() {
        return Err(Error::NotInvertible);
    }
    Ok(h.minus_scalar(1).rank())
}

/// `ℓᵃ(A)`, equal to `ℓ(A)` for affine `A`.
pub fn affine_length(a: &MatFq) -> Result<usize> {
    if !a.is_affine() {
        return Err(Error::NotAffine);
    }
    Ok(a.minus_scalar(1).rank())
}

/// Whether `A` is a nonzero pure translation, i.e. of modified type `(∅, 1)`.
pub fn is_hyperbolic(a: &MatFq) -> Result<bool> {
    if !a.is_affine() {
        return Err(Error::NotAffine);
    }
    let (g, alpha) = a.affine_parts()?;
    Ok(g == MatFq::identity(a.field(), g.rows()) && alpha.iter().any(|&c| c != 0))
}

/// `ℓℓᵃ(A)`: `ℓᵃ(A) + 1` on hyperbolic elements, `ℓᵃ(A)` otherwise.
///
/// This closed form matches breadth-first word lengths over the affine
/// reflections of GA_3(q) for q = 3, 4, 5, but not over F_2.
pub fn affine_reflection_length(a: &MatFq) -> Result<usize> {
    Ok(affine_length(a)? + usize::from(is_hyperbolic(a)?))
}

/// Invertible `n×n` matrices in row-major base-q counting order (entry
/// (0,0) most significant), built row by row with independence pruning.
fn for_each_gl(field: &Field, n: usize, visit: &mut dyn FnMut(&MatFq) -> Result<()>) -> Result<()> {
    let q = field.q() as u64;
    let rows: Vec<Vec<u32>> = (0..q.pow(n as u32))
        .map(|code| {
            (0..n)
                .map(|j| ((code / q.pow((n - 1 - j) as u32)) % q) as u32)
                .collect()
        })
        .collect();

    fn reduce(field: &Field, basis: &[(usize, Vec<u32>)], v: &[u32]) -> Vec<u32> {
        let mut v = v.to_vec();
        for (pivot, b) in basis {
            let c = v[*pivot];
            if c != 0 {
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = field.sub(*x, field.mul(c, y));
                }
            }
        }
        v
    }

    fn rec(
        field: &Field,
        n: usize,
        rows: &[Vec<u32>],
        chosen: &mut Vec<u32>,
        basis: &mut Vec<(usize, Vec<u32>)>,
        visit: &mut dyn FnMut(&MatFq) -> Result<()>,
    ) -> Result<()> {
        if basis.len() == n {
            return visit(&MatFq::new(field, n, n, chosen.clone())?);
        }
        for r in rows {
            let red = reduce(field, basis, r);
            let Some(pivot) = red.iter().position(|&c| c != 0) else {
                continue;
            };
            let inv = field.inv(red[pivot]).unwrap();
            let normalized: Vec<u32> = red.iter().map(|&c| field.mul(c, inv)).collect();
            // keep the basis fully reduced so `reduce` needs one pass
            let saved = basis.clone();
            for (_, b) in basis.iter_mut() {
                let c = b[pivot];
                if c != 0 {
                    for (x, &y) in b.iter_mut().zip(&normalized) {
                        *x = field.sub(*x, field.mul(c, y));
                    }
                }
            }
            basis.push((pivot, normalized));
            chosen.extend_from_slice(r);
            rec(field, n, rows, chosen, basis, visit)?;
            chosen.truncate(chosen.len() - n);
            *basis = saved;
        }
        Ok(())
    }

    rec(
        field,
        n,
        &rows,
        &mut Vec::with_capacity(n * n),
        &mut Vec::new(),
        visit,
    )
}

/// Calls `visit` on every element in the deterministic enumeration order:
/// for GL, row-major counting order; for GA, linear parts in GL order and,
/// for each, translations in counting order.
pub fn for_each_element(
    gid: &GroupId,
    budget: &Budget,
    visit: &mut dyn FnMut(&MatFq) -> Result<()>,
) -> Result<()> {
    budget.check_size(&gid.to_string(), gid.order())?;
    let field = &gid.field;
    let mut count = 0u64;
    let mut tick = |visit: &mut dyn FnMut(&MatFq) -> Result<()>, m: &MatFq| -> Result<()> {
        count += 1;
        if count.is_multiple_of(65536) {
            budget.check_time()?;
        }
        visit(m)
    };
    match gid.kind {
        GroupKind::GL => for_each_gl(field, gid.n, &mut |m| tick(visit, m)),
        GroupKind::GA => {
            let m = gid.n - 1;
            let q = field.q() as u64;
            let translations: Vec<Vec<u32>> = (0..q.pow(m as u32))
                .map(|code| {
                    (0..m)
                        .map(|j| ((code / q.pow((m - 1 - j) as u32)) % q) as u32)
                        .collect()
                })
                .collect();
            if m == 0 {
                return tick(visit, &MatFq::identity(field, 1));
            }
            for_each_gl(field, m, &mut |g| {
                for alpha in &translations {
                    tick(visit, &MatFq::affine_from_parts(g, alpha)?)?;
                }
                Ok(())
            })
        }
    }
}

/// All elements, materialized.
pub fn enumerate_group(gid: &GroupId, budget: &Budget) -> Result<Vec<MatFq>> {
    let mut out = Vec::with_capacity(gid.order().min(budget.max_elements as u128) as usize);
    for_each_element(gid, budget, &mut |m| {
        out.push(m.clone());
        Ok(())
    })?;
    Ok(out)
}

/// A small generating set made of reflections: elementary transvections
/// `I + cE_ij` with `c` running over an F_p-basis of F_q, the dilation
/// `diag(ω, 1, ..., 1)` for a primitive `ω`, and for GA the translation by
/// `e_1` together with the GL_{n-1} generators acting on the linear part.
pub fn generators(gid: &GroupId) -> Vec<MatFq> {
    let field = &gid.field;
    let gl_gens = |n: usize| -> Vec<MatFq> {
        let mut gens = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                for &c in &field.prime_basis() {
                    let mut m = MatFq::identity(field, n);
                    m.set(i, j, c);
                    gens.push(m);
                }
            }
        }
        let omega = field.primitive_element();
        if omega != 1 && n > 0 {
            let mut m = MatFq::identity(field, n);
            m.set(0, 0, omega);
            gens.push(m);
        }
        gens
    };
    match gid.kind {
        GroupKind::GL => gl_gens(gid.n),
        GroupKind::GA => {
            let m = gid.n - 1;
            if m == 0 {
                return Vec::new();
            }
            let mut gens: Vec<MatFq> = gl_gens(m)
                .iter()
                .map(|g| MatFq::affine_from_parts(g, &vec![0; m]).expect("square"))
                .collect();
            let mut e1 = vec![0; m];
            e1[0] = 1;
            gens.push(MatFq::affine_from_parts(&MatFq::identity(field, m), &e1).expect("square"));
            gens
        }
    }
}

/// Every reflection of the group (`rank(h - I) = 1`): 𝓡_n for GL and
/// 𝒯_n for GA.
pub fn reflections(gid: &GroupId, budget: &Budget) -> Result<Vec<MatFq>> {
    let mut out = Vec::new();
    for_each_element(gid, budget, &mut |m| {
        if m.minus_scalar(1).rank() == 1 {
            out.push(m.clone());
        }
        Ok(())
    })?;
    Ok(out)
}

/// Breadth-first closure of a conjugation orbit under a generating set.
/// Exploration proceeds in increments so two orbits can be grown side by
/// side until the smaller one closes.
pub struct OrbitExplorer {
    gens: Arc<Vec<(MatFq, MatFq)>>,
    seen: HashSet<u128>,
    elements: Vec<MatFq>,
    queue: VecDeque<usize>,
}

impl OrbitExplorer {
    pub fn new(rep: &MatFq, gens: Arc<Vec<(MatFq, MatFq)>>) -> Self {
        let mut seen = HashSet::new();
        seen.insert(rep.key());
        OrbitExplorer {
            gens,
            seen,
            elements: vec![rep.clone()],
            queue: VecDeque::from([0]),
        }
    }

    /// Pairs `(s, s^{-1})` for the group's generators.
    pub fn generator_pairs(gid: &GroupId) -> Arc<Vec<(MatFq, MatFq)>> {
        Arc::new(
            generators(gid)
                .into_iter()
                .map(|s| {
                    let inv = s.inverse().expect("generators are invertible");
                    (s, inv)
                })
                .collect(),
        )
    }

    pub fn is_closed(&self) -> bool {
        self.queue.is_empty()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Processes up to `steps` queued elements; true once the orbit is closed.
    pub fn advance(&mut self, steps: usize, what: &str, budget: &Budget) -> Result<bool> {
        for _ in 0..steps {
            let Some(i) = self.queue.pop_front() else {
                return Ok(true);
            };
            let x = self.elements[i].clone();
            for (s, s_inv) in self.gens.iter() {
                let y = s.mul_unchecked(&x).mul_unchecked(s_inv);
                if self.seen.insert(y.key()) {
                    self.elements.push(y);
                    self.queue.push_back(self.elements.len() - 1);
                }
            }
            budget.check_size(what, self.elements.len() as u128)?;
        }
        budget.check_time()?;
        Ok(self.queue.is_empty())
    }

    pub fn run(&mut self, what: &str, budget: &Budget) -> Result<()> {
        while !self.advance(4096, what, budget)? {}
        Ok(())
    }

    pub fn into_elements(self) -> Vec<MatFq> {
        self.elements
    }
}

/// The conjugacy class of `rep`, in discovery order.
pub fn conjugacy_class_of(rep: &MatFq, gid: &GroupId, budget: &Budget) -> Result<Vec<MatFq>> {
    if !gid.contains(rep) {
        return Err(match gid.kind {
            GroupKind::GL => Error::NotInvertible,
            GroupKind::GA => Error::NotAffine,
        });
    }
    let mut bfs = OrbitExplorer::new(rep, OrbitExplorer::generator_pairs(gid));
    bfs.run(&format!("conjugacy class in {gid}"), budget)?;
    Ok(bfs.into_elements())
}
