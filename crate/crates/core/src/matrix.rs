//! Dense matrices over F_q.
//!
//! Entries are element codes stored row-major. Everything here is exact;
//! the one elimination routine ([`MatFq::echelon`]) backs rank, inverse and
//! column-space membership.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{is_irreducible, PolyFq};

#[derive(Clone)]
pub struct MatFq {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl PartialEq for MatFq {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
            && self.field == other.field
    }
}

impl Eq for MatFq {}

impl fmt::Debug for MatFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_rows())
    }
}

impl fmt::Display for MatFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.to_rows().iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            write!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

impl MatFq {
    pub fn new(field: &Field, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|&&c| c >= field.q()) {
            return Err(Error::Parse(format!(
                "entry code {bad} is not an element of F_{}",
                field.q()
            )));
        }
        Ok(MatFq {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        MatFq {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = MatFq::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(field: &Field, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        MatFq::new(field, rows.len(), cols, rows.concat())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        debug_assert!(v < self.field.q());
        self.data[i * self.cols + j] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        if self.cols == 0 {
            return vec![Vec::new(); self.rows];
        }
        self.data.chunks(self.cols).map(<[u32]>::to_vec).collect()
    }

    fn check_field(&self, other: &MatFq) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    fn check_square(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} is not square",
                self.rows, self.cols
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &MatFq) -> Result<MatFq> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul_unchecked(other))
    }

    /// Product without shape or field checks; callers guarantee conformity.
    pub(crate) fn mul_unchecked(&self, other: &MatFq) -> MatFq {
        let f = &self.field;
        let (n, m, p) = (self.rows, self.cols, other.cols);
        let mut out = vec![0u32; n * p];
        for i in 0..n {
            let row = &mut out[i * p..(i + 1) * p];
            for k in 0..m {
                let a = self.data[i * m + k];
                if a == 0 {
                    continue;
                }
                let orow = &other.data[k * p..(k + 1) * p];
                for (dst, &b) in row.iter_mut().zip(orow) {
                    if b != 0 {
                        *dst = f.add(*dst, f.mul(a, b));
                    }
                }
            }
        }
        MatFq {
            field: f.clone(),
            rows: n,
            cols: p,
            data: out,
        }
    }

    fn zip_with(&self, other: &MatFq, op: impl Fn(u32, u32) -> u32) -> Result<MatFq> {
        self.check_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| op(a, b))
            .collect();
        Ok(MatFq {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn add(&self, other: &MatFq) -> Result<MatFq> {
        self.zip_with(other, |a, b| self.field.add(a, b))
    }

    pub fn sub(&self, other: &MatFq) -> Result<MatFq> {
        self.zip_with(other, |a, b| self.field.sub(a, b))
    }

    pub fn scale(&self, c: u32) -> MatFq {
        let data = self.data.iter().map(|&a| self.field.mul(a, c)).collect();
        MatFq {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// `self - c·I` (square matrices).
    pub fn minus_scalar(&self, c: u32) -> MatFq {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            let idx = i * self.cols + i;
            m.data[idx] = self.field.sub(m.data[idx], c);
        }
        m
    }

    pub fn transpose(&self) -> MatFq {
        let mut t = MatFq::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn echelon(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let (n, m) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m {
            if r == n {
                break;
            }
            let Some(p) = (r..n).find(|&i| self.data[i * m + c] != 0) else {
                continue;
            };
            if p != r {
                for j in 0..m {
                    self.data.swap(p * m + j, r * m + j);
                }
            }
            let inv = f.inv(self.data[r * m + c]).expect("pivot is nonzero");
            for j in c..m {
                self.data[r * m + j] = f.mul(self.data[r * m + j], inv);
            }
            for i in 0..n {
                let factor = self.data[i * m + c];
                if i == r || factor == 0 {
                    continue;
                }
                for j in c..m {
                    let v = f.mul(factor, self.data[r * m + j]);
                    self.data[i * m + j] = f.sub(self.data[i * m + j], v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().echelon().len()
    }

    /// Dimension of the (right) kernel.
    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Gauss–Jordan inverse.
    pub fn inverse(&self) -> Result<MatFq> {
        self.check_square()?;
        let n = self.rows;
        let mut aug = MatFq::zeros(&self.field, n, 2 * n);
        for i in 0..n {
            aug.data[i * 2 * n..i * 2 * n + n].copy_from_slice(&self.data[i * n..(i + 1) * n]);
            aug.data[i * 2 * n + n + i] = 1;
        }
        let pivots = aug.echelon();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        let mut inv = MatFq::zeros(&self.field, n, n);
        for i in 0..n {
            inv.data[i * n..(i + 1) * n].copy_from_slice(&aug.data[i * 2 * n + n..(i + 1) * 2 * n]);
        }
        Ok(inv)
    }

    /// Determinant by elimination.
    pub fn det(&self) -> Result<u32> {
        self.check_square()?;
        let f = self.field.clone();
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = 1;
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| a[i * n + c] != 0) else {
                return Ok(0);
            };
            if p != c {
                for j in 0..n {
                    a.swap(p * n + j, c * n + j);
                }
                det = f.neg(det);
            }
            let piv = a[c * n + c];
            det = f.mul(det, piv);
            let inv = f.inv(piv).unwrap();
            for i in c + 1..n {
                let factor = f.mul(a[i * n + c], inv);
                if factor == 0 {
                    continue;
                }
                for j in c..n {
                    a[i * n + j] = f.sub(a[i * n + j], f.mul(factor, a[c * n + j]));
                }
            }
        }
        Ok(det)
    }

    /// Whether the column vector `v` lies in the column space.
    pub fn column_space_contains(&self, v: &[u32]) -> Result<bool> {
        if v.len() != self.rows {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} vs {} rows",
                v.len(),
                self.rows
            )));
        }
        let mut aug = MatFq::zeros(&self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            let w = self.cols + 1;
            aug.data[i * w..i * w + self.cols]
                .copy_from_slice(&self.data[i * self.cols..(i + 1) * self.cols]);
            aug.data[i * w + self.cols] = v[i];
        }
        Ok(aug.rank() == self.rank())
    }

    /// Monic characteristic polynomial det(tI - self), via reduction to
    /// upper Hessenberg form by similarity transforms.
    pub fn char_poly(&self) -> Result<PolyFq> {
        self.check_square()?;
        let f = self.field.clone();
        let n = self.rows;
        let mut h = self.data.clone();
        let at = |i: usize, j: usize| i * n + j;

        for j in 0..n.saturating_sub(2) {
            let Some(p) = (j + 1..n).find(|&i| h[at(i, j)] != 0) else {
                continue;
            };
            if p != j + 1 {
                for c in 0..n {
                    h.swap(at(p, c), at(j + 1, c));
                }
                for r in 0..n {
                    h.swap(at(r, p), at(r, j + 1));
                }
            }
            let inv = f.inv(h[at(j + 1, j)]).unwrap();
            for i in j + 2..n {
                let u = f.mul(h[at(i, j)], inv);
                if u == 0 {
                    continue;
                }
                for c in 0..n {
                    h[at(i, c)] = f.sub(h[at(i, c)], f.mul(u, h[at(j + 1, c)]));
                }
                for r in 0..n {
                    h[at(r, j + 1)] = f.add(h[at(r, j + 1)], f.mul(u, h[at(r, i)]));
                }
            }
        }

        // p_m = (t - h_mm) p_{m-1} - sum_{i<m} h_im (prod_{i<j<=m} h_{j,j-1}) p_{i-1}
        let mut ps: Vec<PolyFq> = vec![PolyFq::one(&f)];
        for m in 0..n {
            let mut pm = PolyFq::linear(&f, h[at(m, m)]).mul(&ps[m])?;
            let mut prod = 1u32;
            for i in (0..m).rev() {
                prod = f.mul(prod, h[at(i + 1, i)]);
                if prod == 0 {
                    break;
                }
                let c = f.mul(h[at(i, m)], prod);
                if c != 0 {
                    pm = pm.sub(&ps[i].scale(c))?;
                }
            }
            ps.push(pm);
        }
        Ok(ps.pop().unwrap())
    }

    /// `poly(self)` by Horner's rule.
    pub fn eval_poly(&self, poly: &PolyFq) -> Result<MatFq> {
        self.check_square()?;
        if poly.field() != &self.field {
            return Err(Error::FieldMismatch);
        }
        let mut acc = MatFq::zeros(&self.field, self.rows, self.cols);
        for &c in poly.coeffs().iter().rev() {
            acc = acc.mul_unchecked(self);
            for i in 0..self.rows {
                let idx = i * self.cols + i;
                acc.data[idx] = self.field.add(acc.data[idx], c);
            }
        }
        Ok(acc)
    }

    /// `N_j = dim ker f(self)^j` for `j = 1..=jmax`; `f` must be monic irreducible.
    pub fn nullity_tower(&self, f: &PolyFq, jmax: usize) -> Result<Vec<usize>> {
        if !f.is_monic() || !is_irreducible(f) {
            return Err(Error::BadPolynomial(format!(
                "{f} is not monic irreducible"
            )));
        }
        Ok(self.nullity_tower_unchecked(f, jmax))
    }

    /// Nullity tower without the irreducibility check, stopping early once
    /// the sequence stabilizes (the remaining entries repeat the last one).
    pub(crate) fn nullity_tower_unchecked(&self, f: &PolyFq, jmax: usize) -> Vec<usize> {
        let base = self.eval_poly(f).expect("square, same field");
        let mut power = base.clone();
        let mut out = Vec::with_capacity(jmax);
        for j in 0..jmax {
            let nj = power.nullity();
            if out.last() == Some(&nj) {
                out.resize(jmax, nj);
                break;
            }
            out.push(nj);
            if j + 1 < jmax {
                power = power.mul_unchecked(&base);
            }
        }
        out
    }

    pub fn block_diag(field: &Field, blocks: &[MatFq]) -> MatFq {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = MatFq::zeros(field, n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.data[(r0 + i) * m + c0 + j] = b.get(i, j);
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// `diag(self, 1)`.
    pub fn embed(&self) -> MatFq {
        MatFq::block_diag(
            &self.field,
            &[self.clone(), MatFq::identity(&self.field, 1)],
        )
    }

    /// Whether `self` has the affine shape `[[1, 0], [alpha, g]]` with `g`
    /// invertible.
    pub fn is_affine(&self) -> bool {
        self.is_square()
            && self.rows >= 1
            && self.data[0] == 1
            && self.data[1..self.cols].iter().all(|&c| c == 0)
            && self.is_invertible()
    }

    /// Splits an affine matrix into its linear part `g` and translation `alpha`.
    pub fn affine_parts(&self) -> Result<(MatFq, Vec<u32>)> {
        if !self.is_square()
            || self.rows == 0
            || self.data[0] != 1
            || self.data[1..self.cols].iter().any(|&c| c != 0)
        {
            return Err(Error::NotAffine);
        }
        let n = self.rows - 1;
        let mut g = MatFq::zeros(&self.field, n, n);
        let mut alpha = Vec::with_capacity(n);
        for i in 0..n {
            alpha.push(self.get(i + 1, 0));
            for j in 0..n {
                g.data[i * n + j] = self.get(i + 1, j + 1);
            }
        }
        Ok((g, alpha))
    }

    /// `[[1, 0], [alpha, g]]`.
    pub fn affine_from_parts(g: &MatFq, alpha: &[u32]) -> Result<MatFq> {
        g.check_square()?;
        if alpha.len() != g.rows {
            return Err(Error::ShapeMismatch("translation length".into()));
        }
        let n = g.rows + 1;
        let mut m = MatFq::zeros(&g.field, n, n);
        m.data[0] = 1;
        for i in 0..g.rows {
            m.data[(i + 1) * n] = alpha[i];
            m.data[(i + 1) * n + 1..(i + 2) * n]
                .copy_from_slice(&g.data[i * g.rows..(i + 1) * g.rows]);
        }
        Ok(m)
    }

    /// Base-q packing of all entries (entry (0,0) least significant).
    /// Callers check that `q^(rows*cols)` fits in 128 bits.
    #[inline]
    pub fn key(&self) -> u128 {
        let q = self.field.q() as u128;
        self.data
            .iter()
            .rev()
            .fold(0u128, |acc, &c| acc * q + c as u128)
    }

    pub fn from_key(field: &Field, rows: usize, cols: usize, mut key: u128) -> MatFq {
        let q = field.q() as u128;
        let data = (0..rows * cols)
            .map(|_| {
                let c = (key % q) as u32;
                key /= q;
                c
            })
            .collect();
        MatFq {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    /// Whether `q^(entries)` fits into the 128-bit key.
    pub fn key_fits(field: &Field, entries: usize) -> bool {
        let bits = (field.q() as f64).log2() * entries as f64;
        bits < 127.0
    }

    pub fn to_json(&self) -> Value {
        json!({ "rows": self.rows, "cols": self.cols, "entries": self.data })
    }

    pub fn from_json(field: &Field, v: &Value) -> Result<MatFq> {
        let bad = || Error::Parse("matrix JSON needs rows, cols and entries".into());
        let rows = v.get("rows").and_then(Value::as_u64).ok_or_else(bad)? as usize;
        let cols = v.get("cols").and_then(Value::as_u64).ok_or_else(bad)? as usize;
        let entries = v
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(bad)?
            .iter()
            .map(|e| e.as_u64().map(|c| c as u32).ok_or_else(bad))
            .collect::<Result<Vec<u32>>>()?;
        MatFq::new(field, rows, cols, entries)
    }
}

/// Companion matrix `J(f)` of a monic `f = t^d - a_d t^(d-1) - ... - a_1`:
/// ones on the superdiagonal, last row `(a_1, ..., a_d)`.
pub fn companion(f: &PolyFq) -> MatFq {
    let field = f.field();
    let d = f.deg();
    let mut m = MatFq::zeros(field, d, d);
    for i in 0..d.saturating_sub(1) {
        m.set(i, i + 1, 1);
    }
    for j in 0..d {
        m.set(d - 1, j, field.neg(f.coeff(j)));
    }
    m
}

/// `J_m(f)`: `m` diagonal copies of `J(f)` with identity blocks on the
/// block superdiagonal.
pub fn jordan_block(f: &PolyFq, m: usize) -> MatFq {
    let field = f.field();
    let d = f.deg();
    let c = companion(f);
    let n = d * m;
    let mut out = MatFq::zeros(field, n, n);
    for b in 0..m {
        for i in 0..d {
            for j in 0..d {
                out.set(b * d + i, b * d + j, c.get(i, j));
            }
            if b + 1 < m {
                out.set(b * d + i, (b + 1) * d + i, 1);
            }
        }
    }
    out
}
