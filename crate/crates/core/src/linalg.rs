//! Exact integer matrices: Hermite and Smith forms with transforms, left
//! kernels, cokernel structure and the unimodular-minor diagonalization.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows_with_cols(rows, cols)
    }

    /// Like [`Self::from_rows`] but fixes the column count, so zero-row matrices keep their width.
    pub fn from_rows_with_cols<T: Into<BigInt> + Clone>(rows: &[Vec<T>], cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Parse(format!("row {} has length {} instead of {cols}", i + 1, r.len())));
            }
            data.extend(r.iter().cloned().map(Into::into));
        }
        Ok(IntegerMatrix { rows: rows.len(), cols, data })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntegerMatrix) -> Result<IntegerMatrix> {
        if self.cols != other.rows {
            return Err(Error::DegreeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o += vi * a;
                }
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        IntegerMatrix { rows: idx.len(), cols: self.cols, data }
    }

    pub fn stack(&self, below: &IntegerMatrix) -> Result<Self> {
        if self.cols != below.cols {
            return Err(Error::DegreeMismatch("column counts differ".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&below.data);
        Ok(IntegerMatrix { rows: self.rows + below.rows, cols: self.cols, data })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] -= q * row[src]`.
    fn row_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if !s.is_zero() {
                let t = s * q;
                self.data[dst * self.cols + j] -= t;
            }
        }
    }

    /// `col[dst] -= q * col[src]`.
    fn col_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src];
            if !s.is_zero() {
                let t = s * q;
                self.data[i * self.cols + dst] -= t;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = -v;
        }
    }

    pub fn rank(&self) -> usize {
        hermite(self).rank
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|c| c.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for IntegerMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            let row: Vec<serde_json::Value> = self.row(i).iter().map(big_to_json).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

fn big_to_json(b: &BigInt) -> serde_json::Value {
    use num_traits::ToPrimitive;
    match b.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(b.to_string()),
    }
}

impl<'de> Deserialize<'de> for IntegerMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<serde_json::Value>> = Vec::deserialize(d)?;
        let parsed: std::result::Result<Vec<Vec<BigInt>>, String> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|v| match v {
                        serde_json::Value::Number(n) => n.to_string().parse::<BigInt>().map_err(|e| e.to_string()),
                        serde_json::Value::String(s) => s.parse::<BigInt>().map_err(|e| e.to_string()),
                        _ => Err("matrix entries must be integers".to_string()),
                    })
                    .collect()
            })
            .collect();
        let parsed = parsed.map_err(serde::de::Error::custom)?;
        IntegerMatrix::from_rows(&parsed).map_err(serde::de::Error::custom)
    }
}

/// `U * M = H` with `U` unimodular and `H` in row Hermite form.
#[derive(Debug, Clone)]
pub struct HermiteResult {
    pub h: IntegerMatrix,
    pub u: IntegerMatrix,
    pub rank: usize,
    /// Pivot column of each nonzero row of `h`.
    pub pivots: Vec<usize>,
}

/// Nearest-integer quotient, ties toward negative infinity.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    let (q, r) = a.div_mod_floor(b);
    if (&r * &two).abs() > b.abs() || ((&r * &two).abs() == b.abs() && b.is_negative()) {
        q + 1
    } else {
        q
    }
}

pub fn hermite(m: &IntegerMatrix) -> HermiteResult {
    let mut h = m.clone();
    let mut u = IntegerMatrix::identity(m.rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        loop {
            // smallest nonzero |entry| in column c at or below row r
            let mut best: Option<usize> = None;
            for i in r..m.rows {
                let v = h.get(i, c);
                if !v.is_zero() && best.is_none_or(|b| v.abs() < h.get(b, c).abs()) {
                    best = Some(i);
                }
            }
            let Some(p) = best else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..m.rows {
                if h.get(i, c).is_zero() {
                    continue;
                }
                let q = round_div(h.get(i, c), h.get(r, c));
                h.row_axpy(i, r, &q);
                u.row_axpy(i, r, &q);
                if !h.get(i, c).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        let p = h.get(r, c).clone();
        for i in 0..r {
            let q = h.get(i, c).div_floor(&p);
            h.row_axpy(i, r, &q);
            u.row_axpy(i, r, &q);
        }
        pivots.push(c);
        r += 1;
    }
    HermiteResult { h, u, rank: r, pivots }
}

/// Basis of `{v : v^T M = 0}`, saturated, in Hermite form.
pub fn kernel_basis(m: &IntegerMatrix) -> Vec<Vec<BigInt>> {
    let hr = hermite(m);
    let kernel = hr.u.select_rows(&(hr.rank..m.rows).collect::<Vec<_>>());
    let reduced = hermite(&kernel);
    (0..reduced.rank).map(|i| reduced.h.row(i).to_vec()).collect()
}

/// `x` with `x * basis = v`, if one exists.
pub fn solve_left(basis: &IntegerMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let hr = hermite(basis);
    let mut rest = v.to_vec();
    let mut y = vec![BigInt::zero(); basis.rows];
    for (k, &c) in hr.pivots.iter().enumerate() {
        let p = hr.h.get(k, c);
        if rest[c].is_zero() {
            continue;
        }
        let (q, r) = rest[c].div_rem(p);
        if !r.is_zero() {
            return None;
        }
        for (j, x) in rest.iter_mut().enumerate().take(basis.cols) {
            let t = hr.h.get(k, j);
            if !t.is_zero() {
                *x -= &q * t;
            }
        }
        y[k] = q;
    }
    if rest.iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(hr.u.left_apply(&y))
}

/// `P * M * Q = D` with `D` diagonal, `d_1 | d_2 | ...`, all nonnegative.
#[derive(Debug, Clone)]
pub struct SmithResult {
    pub p: IntegerMatrix,
    pub q: IntegerMatrix,
    pub d: IntegerMatrix,
    /// The nonzero diagonal entries.
    pub invariants: Vec<BigInt>,
}

pub fn smith(m: &IntegerMatrix) -> SmithResult {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut p = IntegerMatrix::identity(rows);
    let mut q = IntegerMatrix::identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // minimal |entry| in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let v = d.get(i, j);
                if !v.is_zero() && best.is_none_or(|(a, b)| v.abs() < d.get(a, b).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        d.swap_rows(t, bi);
        p.swap_rows(t, bi);
        d.swap_cols(t, bj);
        q.swap_cols(t, bj);
        let mut clean = true;
        for i in t + 1..rows {
            if !d.get(i, t).is_zero() {
                let k = round_div(d.get(i, t), d.get(t, t));
                d.row_axpy(i, t, &k);
                p.row_axpy(i, t, &k);
                if !d.get(i, t).is_zero() {
                    clean = false;
                }
            }
        }
        for j in t + 1..cols {
            if !d.get(t, j).is_zero() {
                let k = round_div(d.get(t, j), d.get(t, t));
                d.col_axpy(j, t, &k);
                q.col_axpy(j, t, &k);
                if !d.get(t, j).is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            continue;
        }
        // enforce divisibility by folding an offending row into row t
        let piv = d.get(t, t).clone();
        let mut offender = None;
        'outer: for i in t + 1..rows {
            for j in t + 1..cols {
                if !d.get(i, j).is_multiple_of(&piv) {
                    offender = Some(i);
                    break 'outer;
                }
            }
        }
        if let Some(i) = offender {
            let minus_one = BigInt::from(-1);
            d.row_axpy(t, i, &minus_one);
            p.row_axpy(t, i, &minus_one);
            continue;
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            p.negate_row(t);
        }
        t += 1;
    }
    let invariants = (0..rows.min(cols)).map(|i| d.get(i, i).clone()).filter(|x| !x.is_zero()).collect();
    SmithResult { p, q, d, invariants }
}

/// Finitely generated abelian group `Z^rank + sum Z/d_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroupStructure {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroupStructure {
    pub fn trivial() -> Self {
        AbelianGroupStructure { free_rank: 0, torsion: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroupStructure { free_rank: rank, torsion: Vec::new() }
    }

    pub fn cyclic(n: u64) -> Self {
        if n == 1 {
            Self::trivial()
        } else if n == 0 {
            Self::free(1)
        } else {
            AbelianGroupStructure { free_rank: 0, torsion: vec![BigInt::from(n)] }
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for AbelianGroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `Z^cols / (row space of M)`.
pub fn cokernel_structure(m: &IntegerMatrix) -> AbelianGroupStructure {
    let s = smith(m);
    AbelianGroupStructure {
        free_rank: m.cols - s.invariants.len(),
        torsion: s.invariants.into_iter().filter(|d| !d.is_one()).collect(),
    }
}

/// Exact determinant by fraction-free elimination.
pub fn determinant(m: &IntegerMatrix) -> Result<BigInt> {
    if m.rows != m.cols {
        return Err(Error::DegreeMismatch("determinant of a non-square matrix".into()));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a.get(k, k).is_zero() {
            match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                a.set(i, j, v);
            }
        }
        prev = a.get(k, k).clone();
    }
    Ok(sign * a.get(n - 1, n - 1))
}

/// `P * M * Q = [I; C]`.
#[derive(Debug, Clone)]
pub struct DiagonalizationResult {
    pub p: IntegerMatrix,
    pub q: IntegerMatrix,
    pub d: IntegerMatrix,
    /// Rows of `M` whose square block is unimodular, in increasing order.
    pub unit_rows: Vec<usize>,
}

/// True when `rows` of `m` are independent and span a saturated lattice.
fn is_primitive(m: &IntegerMatrix, rows: &[usize]) -> bool {
    let s = smith(&m.select_rows(rows));
    s.invariants.len() == rows.len() && s.invariants.iter().all(|d| d.is_one())
}

/// The lexicographically first set of `cols` rows with a `+-1` minor.
fn first_unit_minor(m: &IntegerMatrix) -> Option<Vec<usize>> {
    let need = m.cols;
    if need == 0 {
        return Some(Vec::new());
    }
    let mut budget: usize = 200_000;
    let mut chosen = Vec::new();
    fn rec(m: &IntegerMatrix, start: usize, need: usize, chosen: &mut Vec<usize>, budget: &mut usize) -> bool {
        if chosen.len() == need {
            return true;
        }
        for i in start..m.rows {
            if m.rows - i < need - chosen.len() || *budget == 0 {
                return false;
            }
            *budget -= 1;
            chosen.push(i);
            if is_primitive(m, chosen) && rec(m, i + 1, need, chosen, budget) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    rec(m, 0, need, &mut chosen, &mut budget).then_some(chosen)
}

/// Requires a `cols x cols` minor equal to `+-1`; `degree` only labels the error.
pub fn diagonalize_with_unit_minor(m: &IntegerMatrix, degree: usize) -> Result<DiagonalizationResult> {
    let (b, beta) = (m.rows, m.cols);
    let r = first_unit_minor(m).ok_or(Error::NoUnitMinor { degree })?;
    let rest: Vec<usize> = (0..b).filter(|i| !r.contains(i)).collect();
    let mr = m.select_rows(&r);
    let hr = hermite(&mr);
    // unimodular square block: its Hermite form is the identity
    let inv = hr.u;
    let m_rest = m.select_rows(&rest);
    let corr = m_rest.mul(&inv)?;
    let mut p = IntegerMatrix::zeros(b, b);
    for i in 0..beta {
        for (k, &ri) in r.iter().enumerate() {
            p.set(i, ri, inv.get(i, k).clone());
        }
    }
    for (t, &ri) in rest.iter().enumerate() {
        let row = beta + t;
        p.set(row, ri, BigInt::one());
        for (k, &rk) in r.iter().enumerate() {
            p.set(row, rk, -corr.get(t, k).clone());
        }
    }
    let q = IntegerMatrix::identity(beta);
    let d = p.mul(m)?;
    Ok(DiagonalizationResult { p, q, d, unit_rows: r })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[Vec<i64>]) -> IntegerMatrix {
        IntegerMatrix::from_rows(rows).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&IntegerMatrix::identity(3)).is_empty());
        assert_eq!(kernel_basis(&IntegerMatrix::zeros(2, 2)).len(), 2);
        let k = kernel_basis(&mat(&[vec![2], vec![1]]));
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert!(v == &big(&[1, -2]) || v == &big(&[-1, 2]));
    }

    #[test]
    fn kernel_is_saturated() {
        // rows 2a, 2b: kernel over Q spanned by (1, -1, 0); saturation keeps it primitive
        let m = mat(&[vec![2, 4], vec![2, 4], vec![1, 3]]);
        let k = kernel_basis(&m);
        assert_eq!(k, vec![big(&[1, -1, 0])]);
    }

    #[test]
    fn smith_examples() {
        let s = cokernel_structure(&mat(&[vec![2]]));
        assert_eq!(s, AbelianGroupStructure { free_rank: 0, torsion: vec![BigInt::from(2)] });
        let m = mat(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let r = smith(&m);
        assert_eq!(r.invariants, big(&[2, 6, 12]));
        assert_eq!(r.p.mul(&m).unwrap().mul(&r.q).unwrap(), r.d);
        assert_eq!(determinant(&r.p).unwrap().abs(), BigInt::one());
        assert_eq!(determinant(&r.q).unwrap().abs(), BigInt::one());
        assert_eq!(cokernel_structure(&IntegerMatrix::zeros(0, 3)).free_rank, 3);
        assert_eq!(cokernel_structure(&IntegerMatrix::zeros(3, 0)), AbelianGroupStructure::trivial());
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&mat(&[vec![2, 1], vec![7, 4]])).unwrap(), BigInt::from(1));
        assert_eq!(determinant(&mat(&[vec![0, 1], vec![1, 0]])).unwrap(), BigInt::from(-1));
        assert_eq!(
            determinant(&mat(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]])).unwrap(),
            BigInt::from(-3)
        );
        assert_eq!(determinant(&mat(&[vec![1, 2], vec![2, 4]])).unwrap(), BigInt::zero());
    }

    #[test]
    fn diagonalization_examples() {
        let id = IntegerMatrix::identity(2);
        let r = diagonalize_with_unit_minor(&id, 1).unwrap();
        assert_eq!(r.p, id);
        assert_eq!(r.q, id);
        let m = mat(&[vec![1, 0], vec![0, 1], vec![2, 3]]);
        let r = diagonalize_with_unit_minor(&m, 2).unwrap();
        assert_eq!(r.p.mul(&m).unwrap().mul(&r.q).unwrap(), r.d);
        assert_eq!(r.d.select_rows(&[0, 1]), id);
        let neg = mat(&[vec![-1]]);
        let r = diagonalize_with_unit_minor(&neg, 1).unwrap();
        assert_eq!(r.d, IntegerMatrix::identity(1));
        // rows (2) and (3) generate Z but neither is a unit
        assert!(matches!(
            diagonalize_with_unit_minor(&mat(&[vec![2], vec![3]]), 7),
            Err(Error::NoUnitMinor { degree: 7 })
        ));
    }

    #[test]
    fn lex_first_rows() {
        let m = mat(&[vec![2, 0], vec![1, 1], vec![0, 1], vec![1, 0]]);
        let r = diagonalize_with_unit_minor(&m, 1).unwrap();
        assert_eq!(r.unit_rows, vec![1, 2]);
    }

    #[test]
    fn solve_left_works() {
        let basis = mat(&[vec![1, 2, 0], vec![0, 3, 1]]);
        let v = big(&[2, 1, -1]);
        let x = solve_left(&basis, &v).unwrap();
        assert_eq!(basis.left_apply(&x), v);
        assert!(solve_left(&basis, &big(&[0, 1, 0])).is_none());
    }

    #[test]
    fn json_round_trip() {
        let m = mat(&[vec![1, -2], vec![3, 4]]);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, "[[1,-2],[3,4]]");
        let back: IntegerMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }
}
