//! Polynomials over F_q, the set Φ_q of monic irreducibles other than `t`,
//! and factorization by sieved trial division.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::field::Field;

/// Polynomial over F_q with ascending coefficients and no trailing zeros.
#[derive(Clone)]
pub struct PolyFq {
    field: Field,
    coeffs: Vec<u32>,
}

impl PartialEq for PolyFq {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.field == other.field
    }
}

impl Eq for PolyFq {}

impl Hash for PolyFq {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

/// Canonical order: degree first, then the coefficient vector read as a
/// base-q integer (constant term least significant).
impl Ord for PolyFq {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for PolyFq {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for PolyFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Canonical text form `c0+c1*t+c2*t^2+...`; the zero polynomial is `0`.
impl fmt::Display for PolyFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&coeffs_to_string(&self.coeffs))
    }
}

pub(crate) fn coeffs_to_string(coeffs: &[u32]) -> String {
    if coeffs.is_empty() {
        return "0".to_string();
    }
    coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| match i {
            0 => c.to_string(),
            1 => format!("{c}*t"),
            _ => format!("{c}*t^{i}"),
        })
        .collect::<Vec<_>>()
        .join("+")
}

fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

impl PolyFq {
    pub fn new(field: &Field, coeffs: Vec<u32>) -> Self {
        debug_assert!(coeffs.iter().all(|&c| c < field.q()));
        PolyFq {
            field: field.clone(),
            coeffs: trim(coeffs),
        }
    }

    pub fn zero(field: &Field) -> Self {
        PolyFq {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &Field) -> Self {
        PolyFq {
            field: field.clone(),
            coeffs: vec![1],
        }
    }

    /// The polynomial `t`.
    pub fn t(field: &Field) -> Self {
        PolyFq {
            field: field.clone(),
            coeffs: vec![0, 1],
        }
    }

    /// `t - root`.
    pub fn linear(field: &Field, root: u32) -> Self {
        PolyFq::new(field, vec![field.neg(root), 1])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<u32> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(1)
    }

    /// Degree as used by types: `d(f)`. Panics on zero.
    pub(crate) fn deg(&self) -> usize {
        self.degree().expect("nonzero polynomial")
    }

    fn check(&self, other: &PolyFq) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &PolyFq) -> Result<PolyFq> {
        self.check(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| self.field.add(self.coeff(i), other.coeff(i)))
            .collect();
        Ok(PolyFq::new(&self.field, c))
    }

    pub fn sub(&self, other: &PolyFq) -> Result<PolyFq> {
        self.check(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| self.field.sub(self.coeff(i), other.coeff(i)))
            .collect();
        Ok(PolyFq::new(&self.field, c))
    }

    pub fn mul(&self, other: &PolyFq) -> Result<PolyFq> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &PolyFq) -> PolyFq {
        if self.is_zero() || other.is_zero() {
            return PolyFq::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        PolyFq::new(f, out)
    }

    pub fn scale(&self, c: u32) -> PolyFq {
        let c = self.coeffs.iter().map(|&a| self.field.mul(a, c)).collect();
        PolyFq::new(&self.field, c)
    }

    /// Divides out the leading coefficient; zero stays zero.
    pub fn monic(&self) -> PolyFq {
        match self.leading() {
            Some(l) => self.scale(self.field.inv(l).expect("leading coefficient is nonzero")),
            None => self.clone(),
        }
    }

    pub fn pow(&self, mut e: u32) -> PolyFq {
        let mut acc = PolyFq::one(&self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    /// Quotient and remainder.
    pub fn divmod(&self, divisor: &PolyFq) -> Result<(PolyFq, PolyFq)> {
        self.check(divisor)?;
        let Some(dlead) = divisor.leading() else {
            return Err(Error::ZeroDivisor);
        };
        let f = &self.field;
        let dinv = f.inv(dlead).expect("nonzero");
        let dl = divisor.coeffs.len();
        let mut rem = self.coeffs.clone();
        if rem.len() < dl {
            return Ok((PolyFq::zero(f), self.clone()));
        }
        let mut quo = vec![0u32; rem.len() - dl + 1];
        for shift in (0..quo.len()).rev() {
            let top = rem[shift + dl - 1];
            if top == 0 {
                continue;
            }
            let c = f.mul(top, dinv);
            quo[shift] = c;
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] = f.sub(rem[shift + i], f.mul(c, d));
            }
        }
        Ok((PolyFq::new(f, quo), PolyFq::new(f, rem)))
    }

    pub fn rem(&self, divisor: &PolyFq) -> Result<PolyFq> {
        Ok(self.divmod(divisor)?.1)
    }

    /// Monic greatest common divisor (zero iff both are zero).
    pub fn gcd(&self, other: &PolyFq) -> Result<PolyFq> {
        self.check(other)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u64, modulus: &PolyFq) -> Result<PolyFq> {
        self.check(modulus)?;
        let mut acc = PolyFq::one(&self.field).rem(modulus)?;
        let mut base = self.rem(modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base).rem(modulus)?;
            }
            base = base.mul_unchecked(&base).rem(modulus)?;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn divides(&self, other: &PolyFq) -> Result<bool> {
        Ok(other.rem(self)?.is_zero())
    }

    /// Parses the canonical form as well as shorthand such as `t-1`,
    /// `t^2+t+1` or `2*t+1`. Numbers are element codes; `-c` is the
    /// additive inverse of code `c`.
    pub fn parse(field: &Field, s: &str) -> Result<PolyFq> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let bad = |msg: &str| Error::Parse(format!("polynomial '{s}': {msg}"));
        let mut coeffs: Vec<u32> = Vec::new();
        let mut rest = s.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let mut negative = false;
            if let Some(r) = rest.strip_prefix('+') {
                if first {
                    return Err(bad("leading '+'"));
                }
                rest = r;
            } else if let Some(r) = rest.strip_prefix('-') {
                negative = true;
                rest = r;
            } else if !first {
                return Err(bad("expected '+' or '-'"));
            }
            first = false;
            let end = rest.find(['+', '-']).unwrap_or(rest.len());
            let term = &rest[..end];
            rest = &rest[end..];
            let (coef, power) = parse_term(term).ok_or_else(|| bad("malformed term"))?;
            if coef >= field.q() as u64 {
                return Err(bad("coefficient code out of range"));
            }
            let mut c = coef as u32;
            if negative {
                c = field.neg(c);
            }
            if coeffs.len() <= power {
                coeffs.resize(power + 1, 0);
            }
            coeffs[power] = field.add(coeffs[power], c);
        }
        Ok(PolyFq::new(field, coeffs))
    }
}

fn parse_term(term: &str) -> Option<(u64, usize)> {
    if term.is_empty() {
        return None;
    }
    let Some(tpos) = term.find('t') else {
        return term.parse().ok().map(|c| (c, 0));
    };
    let coef = match term[..tpos].strip_suffix('*').unwrap_or(&term[..tpos]) {
        "" => 1,
        c => c.parse().ok()?,
    };
    let power = match &term[tpos + 1..] {
        "" => 1,
        p => p.strip_prefix('^')?.parse().ok()?,
    };
    Some((coef, power))
}

/// Counting iterator over monic polynomials of degree `d` with nonzero
/// constant term, in canonical order.
fn monic_with_unit_constant(field: &Field, d: usize) -> impl Iterator<Item = Vec<u32>> + '_ {
    let q = field.q() as u64;
    let count = q.pow(d as u32);
    (0..count).filter_map(move |code| {
        let mut v = Vec::with_capacity(d + 1);
        let mut c = code;
        for _ in 0..d {
            v.push((c % q) as u32);
            c /= q;
        }
        v.push(1);
        (v[0] != 0).then_some(v)
    })
}

/// All members of Φ_q of degree `<= d`, in canonical order.
pub fn irreducibles_up_to(field: &Field, d: usize) -> Vec<PolyFq> {
    let mut cache = field
        .irreducibles
        .lock()
        .expect("irreducible cache poisoned");
    if cache.max_degree < d {
        for e in (cache.max_degree + 1)..=d {
            let found: Vec<Vec<u32>> = monic_with_unit_constant(field, e)
                .filter(|cand| {
                    let cand = PolyFq::new(field, cand.clone());
                    cache
                        .polys
                        .iter()
                        .take_while(|g| 2 * (g.len() - 1) <= e)
                        .all(|g| !cand.rem(&PolyFq::new(field, g.clone())).unwrap().is_zero())
                })
                .collect();
            cache.polys.extend(found);
        }
        cache.max_degree = d;
    }
    cache
        .polys
        .iter()
        .take_while(|g| g.len() - 1 <= d)
        .map(|g| PolyFq::new(field, g.clone()))
        .collect()
}

pub fn is_irreducible(f: &PolyFq) -> bool {
    match f.degree() {
        None | Some(0) => false,
        Some(1) => true,
        Some(d) => {
            if f.coeff(0) == 0 {
                return false;
            }
            irreducibles_up_to(f.field(), d / 2)
                .iter()
                .all(|g| !f.rem(g).unwrap().is_zero())
        }
    }
}

/// `unit * Π factor^exp`, factors monic irreducible in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: u32,
    pub factors: Vec<(PolyFq, u32)>,
}

impl Factorization {
    pub fn product(&self, field: &Field) -> PolyFq {
        self.factors
            .iter()
            .fold(PolyFq::new(field, vec![self.unit]), |acc, (f, e)| {
                acc.mul_unchecked(&f.pow(*e))
            })
    }
}

/// Complete factorization by trial division against the sieved irreducibles
/// (plus `t`, which lies outside Φ_q but can divide arbitrary input).
pub fn poly_factor(f: &PolyFq) -> Result<Factorization> {
    let Some(deg) = f.degree() else {
        return Err(Error::ZeroPolynomial);
    };
    let field = f.field().clone();
    let unit = f.leading().unwrap();
    let mut rest = f.monic();
    let mut factors = Vec::new();

    let zeros = rest.coeffs.iter().take_while(|&&c| c == 0).count();
    if zeros > 0 {
        rest = PolyFq::new(&field, rest.coeffs[zeros..].to_vec());
    }
    let mut tail = Vec::new();
    for g in irreducibles_up_to(&field, deg / 2) {
        let gd = g.deg();
        let rd = rest.deg();
        if rd == 0 {
            break;
        }
        if 2 * gd > rd {
            // what remains has no factor of degree <= rd/2, so it is irreducible
            tail.push((rest.clone(), 1));
            rest = PolyFq::one(&field);
            break;
        }
        let mut e = 0;
        loop {
            let (quo, rem) = rest.divmod(&g)?;
            if !rem.is_zero() {
                break;
            }
            rest = quo;
            e += 1;
        }
        if e > 0 {
            factors.push((g, e));
        }
    }
    if rest.deg() > 0 {
        factors.push((rest, 1));
    }
    factors.extend(tail);
    if zeros > 0 {
        factors.push((PolyFq::t(&field), zeros as u32));
    }
    factors.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(Factorization { unit, factors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::field_make;

    fn p(field: &Field, c: &[u32]) -> PolyFq {
        PolyFq::new(field, c.to_vec())
    }

    #[test]
    fn arithmetic_examples() {
        let f2 = field_make(2, 1).unwrap();
        let t2p1 = p(&f2, &[1, 0, 1]);
        let tp1 = p(&f2, &[1, 1]);
        assert_eq!(t2p1.gcd(&tp1).unwrap(), tp1);
        assert_eq!(tp1.mul(&tp1).unwrap(), t2p1);
        let (quo, rem) = p(&f2, &[0, 0, 0, 1]).divmod(&p(&f2, &[1, 1, 1])).unwrap();
        assert_eq!(quo, tp1);
        assert_eq!(rem, PolyFq::one(&f2));
        assert_eq!(
            tp1.divmod(&PolyFq::zero(&f2)).unwrap_err(),
            Error::ZeroDivisor
        );
    }

    #[test]
    fn zero_degree_is_sentinel() {
        let f2 = field_make(2, 1).unwrap();
        assert_eq!(PolyFq::zero(&f2).degree(), None);
        assert_eq!(PolyFq::one(&f2).degree(), Some(0));
        assert_eq!(p(&f2, &[1, 0, 0]).coeffs(), &[1]);
    }

    #[test]
    fn pow_mod_matches_repeated_multiplication() {
        let f3 = field_make(3, 1).unwrap();
        let m = p(&f3, &[1, 0, 1]);
        let x = p(&f3, &[2, 1]);
        let slow = x.pow(7).rem(&m).unwrap();
        assert_eq!(x.pow_mod(7, &m).unwrap(), slow);
    }

    #[test]
    fn canonical_text_and_parse() {
        let f3 = field_make(3, 1).unwrap();
        let f = p(&f3, &[1, 0, 1]);
        assert_eq!(f.to_string(), "1+0*t+1*t^2");
        assert_eq!(PolyFq::parse(&f3, "1+0*t+1*t^2").unwrap(), f);
        assert_eq!(PolyFq::parse(&f3, "t^2+1").unwrap(), f);
        assert_eq!(PolyFq::parse(&f3, "t-1").unwrap(), p(&f3, &[2, 1]));
        assert_eq!(PolyFq::parse(&f3, "-1+t").unwrap(), p(&f3, &[2, 1]));
        assert_eq!(PolyFq::parse(&f3, "2*t+t").unwrap(), PolyFq::zero(&f3));
        assert!(PolyFq::parse(&f3, "t+3").is_err());
        assert!(PolyFq::parse(&f3, "t++1").is_err());
        assert!(PolyFq::parse(&f3, "").is_err());
        assert_eq!(PolyFq::zero(&f3).to_string(), "0");
    }

    #[test]
    fn irreducible_lists() {
        let f2 = field_make(2, 1).unwrap();
        assert_eq!(irreducibles_up_to(&f2, 1), vec![p(&f2, &[1, 1])]);
        assert_eq!(
            irreducibles_up_to(&f2, 2),
            vec![p(&f2, &[1, 1]), p(&f2, &[1, 1, 1])]
        );
        let deg3 = irreducibles_up_to(&f2, 3)
            .into_iter()
            .filter(|g| g.deg() == 3)
            .count();
        assert_eq!(deg3, 2);
        // the cache answers smaller requests after a larger one
        assert_eq!(irreducibles_up_to(&f2, 1).len(), 1);
    }

    #[test]
    fn factor_examples() {
        let f2 = field_make(2, 1).unwrap();
        let fz = poly_factor(&p(&f2, &[1, 0, 1, 0, 1])).unwrap();
        assert_eq!(fz.factors, vec![(p(&f2, &[1, 1, 1]), 2)]);
        let fz = poly_factor(&p(&f2, &[1, 1, 0, 1])).unwrap();
        assert_eq!(fz.factors, vec![(p(&f2, &[1, 1, 0, 1]), 1)]);

        let f3 = field_make(3, 1).unwrap();
        let fz = poly_factor(&p(&f3, &[2, 0, 1])).unwrap();
        assert_eq!(fz.factors, vec![(p(&f3, &[1, 1]), 1), (p(&f3, &[2, 1]), 1)]);

        assert_eq!(
            poly_factor(&PolyFq::zero(&f3)).unwrap_err(),
            Error::ZeroPolynomial
        );
    }

    #[test]
    fn factor_handles_t_and_units() {
        let f3 = field_make(3, 1).unwrap();
        // 2 t^2 (t+1)
        let f = p(&f3, &[0, 0, 2, 2]);
        let fz = poly_factor(&f).unwrap();
        assert_eq!(fz.unit, 2);
        assert_eq!(fz.factors, vec![(PolyFq::t(&f3), 2), (p(&f3, &[1, 1]), 1)]);
        assert_eq!(fz.product(&f3), f);
    }

    #[test]
    fn irreducibility_predicate() {
        let f2 = field_make(2, 1).unwrap();
        assert!(is_irreducible(&p(&f2, &[1, 1, 1])));
        assert!(!is_irreducible(&p(&f2, &[1, 0, 1])));
        assert!(!is_irreducible(&p(&f2, &[0, 1, 1])));
        assert!(is_irreducible(&PolyFq::t(&f2)));
    }
}
