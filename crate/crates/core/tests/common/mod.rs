//! Brute-force oracles shared by the integration and acceptance tests.
//! Nothing here calls the classification or structure-constant code.

#![allow(dead_code)]

use std::collections::HashMap;

use gaclass::classify::{enumerate_group, GroupId};
use gaclass::error::Budget;
use gaclass::field::Field;
use gaclass::matrix::MatFq;

/// Product of two field codes by schoolbook polynomial multiplication over
/// Z/p followed by reduction modulo the defining polynomial.
pub fn naive_mul(field: &Field, a: u32, b: u32) -> u32 {
    let p = field.p();
    let digits = |mut x: u32| {
        let mut d = Vec::new();
        for _ in 0..field.k() {
            d.push(x % p);
            x /= p;
        }
        d
    };
    let (da, db) = (digits(a), digits(b));
    let mut prod = vec![0u32; 2 * field.k() as usize];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    if let Some(m) = field.modulus() {
        let k = field.k() as usize;
        for top in (k..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            for (i, &mi) in m.iter().enumerate() {
                let idx = top - k + i;
                prod[idx] = (prod[idx] + (p - c) * mi) % p;
            }
        }
    }
    prod.iter()
        .take(field.k() as usize)
        .rev()
        .fold(0, |acc, &d| acc * p + d)
}

/// Digit-wise sum modulo p.
pub fn naive_add(field: &Field, a: u32, b: u32) -> u32 {
    let p = field.p();
    let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
    for _ in 0..field.k() {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

/// Monic polynomials of exact degree `d`, ascending coefficient vectors.
pub fn monic_polys(q: u32, d: usize) -> Vec<Vec<u32>> {
    let count = (q as u64).pow(d as u32);
    (0..count)
        .map(|mut code| {
            let mut v = Vec::with_capacity(d + 1);
            for _ in 0..d {
                v.push((code % q as u64) as u32);
                code /= q as u64;
            }
            v.push(1);
            v
        })
        .collect()
}

/// Remainder of `f` by monic `g`, both ascending.
pub fn naive_rem(field: &Field, f: &[u32], g: &[u32]) -> Vec<u32> {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - dg;
        for (i, &gi) in g.iter().enumerate() {
            r[shift + i] = field.sub(r[shift + i], field.mul(c, gi));
        }
        r.pop();
        while r.last() == Some(&0) {
            r.pop();
        }
    }
    r
}

/// Irreducibility by trial division with every monic polynomial of degree
/// at most half.
pub fn naive_irreducible(field: &Field, f: &[u32]) -> bool {
    let d = f.len() - 1;
    (1..=d / 2).all(|e| {
        monic_polys(field.q(), e)
            .iter()
            .all(|g| !naive_rem(field, f, g).is_empty())
    })
}

/// Number of monic irreducibles of degree `e` over F_q, `t` excluded.
pub fn necklace_count(q: u64, e: u64) -> u64 {
    fn mobius(mut n: u64) -> i64 {
        let mut result = 1;
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                n /= d;
                if n.is_multiple_of(d) {
                    return 0;
                }
                result = -result;
            }
            d += 1;
        }
        if n > 1 {
            result = -result;
        }
        result
    }
    let sum: i64 = (1..=e)
        .filter(|d| e.is_multiple_of(*d))
        .map(|d| mobius(d) * (q as i64).pow((e / d) as u32))
        .sum();
    let count = (sum / e as i64) as u64;
    if e == 1 {
        count - 1
    } else {
        count
    }
}

/// Conjugacy classes of a small group by conjugating with every element.
pub struct NaiveClasses {
    pub elements: Vec<MatFq>,
    /// Class index of each element, keyed by matrix key.
    pub class_of: HashMap<u128, usize>,
    pub classes: Vec<Vec<usize>>,
}

pub fn naive_classes(gid: &GroupId) -> NaiveClasses {
    let elements = enumerate_group(gid, &Budget::unlimited()).unwrap();
    let index: HashMap<u128, usize> = elements
        .iter()
        .enumerate()
        .map(|(i, m)| (m.key(), i))
        .collect();
    let inverses: Vec<MatFq> = elements.iter().map(|g| g.inverse().unwrap()).collect();
    let mut class_of = HashMap::new();
    let mut classes = Vec::new();
    for x in &elements {
        if class_of.contains_key(&x.key()) {
            continue;
        }
        let id = classes.len();
        let mut members = Vec::new();
        for (g, gi) in elements.iter().zip(&inverses) {
            let y = g.mul(x).unwrap().mul(gi).unwrap();
            if class_of.insert(y.key(), id).is_none() {
                members.push(index[&y.key()]);
            }
        }
        classes.push(members);
    }
    NaiveClasses {
        elements,
        class_of,
        classes,
    }
}

impl NaiveClasses {
    /// `#{(x, y) : x ∈ C_a, y ∈ C_b, xy = z}` for `z` a member of `C_c`.
    pub fn struct_const(&self, a: usize, b: usize, c: usize) -> u64 {
        let z = &self.elements[self.classes[c][0]];
        self.classes[a]
            .iter()
            .filter(|&&i| {
                let y = self.elements[i].inverse().unwrap().mul(z).unwrap();
                self.class_of[&y.key()] == b
            })
            .count() as u64
    }

    pub fn class_index(&self, m: &MatFq) -> usize {
        self.class_of[&m.key()]
    }
}
