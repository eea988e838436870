//! Finite fields F_q, q = p^k.
//!
//! Elements are encoded as integers in `[0, q)`: the base-p digits of the
//! code are the coefficients of the element as a polynomial in the
//! generator of F_q over F_p (least significant digit = constant term).
//! For `k > 1` the defining modulus is the smallest monic irreducible of
//! degree `k` over F_p, ordering polynomials by their ascending coefficient
//! vector read as a base-p integer.

use std::fmt;
use std::sync::{Arc, Mutex};

use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Fields up to this size get full addition/multiplication tables.
const TABLE_LIMIT: u32 = 256;

pub struct FieldSpec {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus over F_p, ascending coefficients, length `k + 1`.
    modulus: Option<Vec<u32>>,
    tables: Option<Tables>,
    /// Sieved monic irreducibles (excluding `t`), grown on demand.
    pub(crate) irreducibles: Mutex<IrreducibleCache>,
}

struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

#[derive(Default)]
pub(crate) struct IrreducibleCache {
    pub(crate) max_degree: usize,
    pub(crate) polys: Vec<Vec<u32>>,
}

/// Shared handle to a [`FieldSpec`]. Cloning is cheap.
#[derive(Clone)]
pub struct Field(Arc<FieldSpec>);

impl std::ops::Deref for Field {
    type Target = FieldSpec;

    fn deref(&self) -> &FieldSpec {
        &self.0
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.p == other.p && self.k == other.k)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Builds F_{p^k}.
pub fn field_make(p: u64, k: u32) -> Result<Field> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k < 1 {
        return Err(Error::BadDegree);
    }
    let q = (p as u128)
        .checked_pow(k)
        .filter(|&q| q <= u32::MAX as u128);
    let Some(q) = q else {
        return Err(Error::FieldTooLarge { p, k });
    };
    // products of two digits must fit in u64 comfortably
    if p > u16::MAX as u64 {
        return Err(Error::FieldTooLarge { p, k });
    }
    let p = p as u32;
    let q = q as u32;
    let modulus = if k > 1 {
        Some(smallest_irreducible(p, k as usize))
    } else {
        None
    };
    let mut spec = FieldSpec {
        p,
        k,
        q,
        modulus,
        tables: None,
        irreducibles: Mutex::new(IrreducibleCache::default()),
    };
    if q <= TABLE_LIMIT {
        spec.tables = Some(spec.build_tables());
    }
    Ok(Field(Arc::new(spec)))
}

impl FieldSpec {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Defining modulus over F_p (ascending coefficients), `None` for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        self.modulus.as_deref()
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if let Some(t) = &self.tables {
            return t.add[(a * self.q + b) as usize];
        }
        self.add_slow(a, b)
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if let Some(t) = &self.tables {
            return t.neg[a as usize];
        }
        self.neg_slow(a)
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if let Some(t) = &self.tables {
            return t.mul[(a * self.q + b) as usize];
        }
        self.mul_slow(a, b)
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        if let Some(t) = &self.tables {
            return Some(t.inv[a as usize]);
        }
        Some(self.inv_slow(a))
    }

    pub fn div(&self, a: u32, b: u32) -> Option<u32> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, mut a: u32, mut e: u64) -> u32 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn minus_one(&self) -> u32 {
        self.neg(1)
    }

    /// Image of an integer under Z -> F_p ⊂ F_q.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    /// Codes of 1, x, x^2, ..., x^(k-1): an F_p-basis of F_q.
    pub fn prime_basis(&self) -> Vec<u32> {
        (0..self.k).map(|i| self.p.pow(i)).collect()
    }

    /// Smallest code generating the multiplicative group.
    pub fn primitive_element(&self) -> u32 {
        let order = (self.q - 1) as u64;
        let prime_factors: Vec<u64> = {
            let mut fs = Vec::new();
            let mut m = order;
            let mut d = 2;
            while d * d <= m {
                if m.is_multiple_of(d) {
                    fs.push(d);
                    while m.is_multiple_of(d) {
                        m /= d;
                    }
                }
                d += 1;
            }
            if m > 1 {
                fs.push(m);
            }
            fs
        };
        (1..self.q)
            .find(|&a| prime_factors.iter().all(|&f| self.pow(a, order / f) != 1))
            .expect("multiplicative group of a finite field is cyclic")
    }

    pub fn to_json(&self) -> Value {
        let modulus = self
            .modulus
            .as_ref()
            .map(|m| crate::poly::coeffs_to_string(m));
        json!({ "p": self.p, "k": self.k, "modulus": modulus })
    }

    fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut d = vec![0; self.k as usize];
        for slot in d.iter_mut() {
            *slot = a % self.p;
            a /= self.p;
        }
        d
    }

    fn undigits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &x| acc * self.p + x)
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return ((a as u64 + b as u64) % self.p as u64) as u32;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.undigits(&s)
    }

    fn neg_slow(&self, a: u32) -> u32 {
        if self.k == 1 {
            return (self.p - a % self.p) % self.p;
        }
        let d: Vec<u32> = self
            .digits(a)
            .iter()
            .map(|&x| (self.p - x) % self.p)
            .collect();
        self.undigits(&d)
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        let prod = fp_mul(&self.digits(a), &self.digits(b), self.p);
        let modulus = self
            .modulus
            .as_ref()
            .expect("extension field has a modulus");
        let mut r = fp_rem(&prod, modulus, self.p);
        r.resize(self.k as usize, 0);
        self.undigits(&r)
    }

    fn inv_slow(&self, a: u32) -> u32 {
        if self.k == 1 {
            // extended Euclid over the integers
            let (mut r0, mut r1) = (self.p as i64, a as i64);
            let (mut s0, mut s1) = (0i64, 1i64);
            while r1 != 0 {
                let quo = r0 / r1;
                (r0, r1) = (r1, r0 - quo * r1);
                (s0, s1) = (s1, s0 - quo * s1);
            }
            return s0.rem_euclid(self.p as i64) as u32;
        }
        let modulus = self
            .modulus
            .as_ref()
            .expect("extension field has a modulus");
        let mut inv = fp_inverse_mod(&self.digits(a), modulus, self.p);
        inv.resize(self.k as usize, 0);
        self.undigits(&inv)
    }

    fn build_tables(&self) -> Tables {
        let q = self.q as usize;
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..self.q {
            for b in 0..self.q {
                add[a as usize * q + b as usize] = self.add_slow(a, b);
                mul[a as usize * q + b as usize] = self.mul_slow(a, b);
            }
        }
        let neg = (0..self.q).map(|a| self.neg_slow(a)).collect();
        let inv = (0..self.q)
            .map(|a| if a == 0 { 0 } else { self.inv_slow(a) })
            .collect();
        Tables { add, mul, neg, inv }
    }
}

/// An element of F_q together with its field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    code: u32,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{:?}", self.code, self.field)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    Inv,
    Neg,
}

impl FieldElement {
    pub fn new(field: &Field, code: u32) -> Result<Self> {
        if code >= field.q() {
            return Err(Error::Parse(format!(
                "code {code} out of range for {field:?}"
            )));
        }
        Ok(FieldElement {
            field: field.clone(),
            code,
        })
    }

    pub fn code(&self) -> u32 {
        self.code
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    fn same_field(&self, other: &FieldElement) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    fn with(&self, code: u32) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            code,
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.with(self.field.add(self.code, other.code)))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.with(self.field.sub(self.code, other.code)))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.with(self.field.mul(self.code, other.code)))
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        let c = self
            .field
            .div(self.code, other.code)
            .ok_or(Error::ZeroDivisor)?;
        Ok(self.with(c))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        let c = self.field.inv(self.code).ok_or(Error::ZeroDivisor)?;
        Ok(self.with(c))
    }

    pub fn neg(&self) -> FieldElement {
        self.with(self.field.neg(self.code))
    }
}

/// Dispatching form of the element operations; unary ops ignore `b`.
pub fn field_arith(a: &FieldElement, b: &FieldElement, op: FieldOp) -> Result<FieldElement> {
    match op {
        FieldOp::Add => a.add(b),
        FieldOp::Sub => a.sub(b),
        FieldOp::Mul => a.mul(b),
        FieldOp::Div => a.div(b),
        FieldOp::Inv => {
            a.same_field(b)?;
            a.inv()
        }
        FieldOp::Neg => {
            a.same_field(b)?;
            Ok(a.neg())
        }
    }
}

// Polynomials over the prime field, used only to construct F_{p^k}.

fn fp_trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn fp_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    fp_trim(out.into_iter().map(|x| x as u32).collect())
}

fn fp_inv_scalar(a: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let (mut base, mut e) = (a as u64 % p as u64, p as u64 - 2);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

fn fp_divmod(a: &[u32], b: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
    let b = fp_trim(b.to_vec());
    let mut r = fp_trim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead_inv = fp_inv_scalar(*b.last().unwrap(), p) as u64;
    let mut quo = vec![0u32; r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = (*r.last().unwrap() as u64 * lead_inv % p as u64) as u32;
        quo[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            let sub = (c as u64 * bi as u64) % p as u64;
            r[shift + i] = ((r[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        r = fp_trim(r);
    }
    (fp_trim(quo), r)
}

fn fp_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    fp_divmod(a, b, p).1
}

fn fp_sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    fp_trim(out)
}

/// Inverse of `a` modulo the irreducible `m` by extended Euclid in F_p[t].
fn fp_inverse_mod(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let (mut r0, mut r1) = (m.to_vec(), fp_trim(a.to_vec()));
    let (mut s0, mut s1) = (Vec::new(), vec![1u32]);
    while !r1.is_empty() {
        let (quo, rem) = fp_divmod(&r0, &r1, p);
        let s2 = fp_sub(&s0, &fp_mul(&quo, &s1, p), p);
        (r0, r1) = (r1, rem);
        (s0, s1) = (s1, s2);
    }
    // r0 is a nonzero constant; normalize
    let c = fp_inv_scalar(r0[0], p) as u64;
    let out: Vec<u32> = s0
        .iter()
        .map(|&x| (x as u64 * c % p as u64) as u32)
        .collect();
    fp_rem(&out, m, p)
}

fn fp_is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    // any factor has a monic factor of degree <= deg/2
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                g.push((c % p as u64) as u32);
                c /= p as u64;
            }
            g.push(1);
            if fp_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, k: usize) -> Vec<u32> {
    let count = (p as u64).pow(k as u32);
    for code in 0..count {
        let mut f = Vec::with_capacity(k + 1);
        let mut c = code;
        for _ in 0..k {
            f.push((c % p as u64) as u32);
            c /= p as u64;
        }
        f.push(1);
        if fp_is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}
