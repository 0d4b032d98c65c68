//! The triangular operator `T_A` on degree-`m` polynomials in `x_1..x_m`.
//!
//! `T_A(x_1) = 1`; a term without `x_m` vanishes; `h * x_m^r` becomes
//! `h * (a_{1m} x_1 + ... + a_{m-1,m} x_{m-1})^{r-1}` over the matrix with
//! its last row and column removed.

use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::cartan::CartanMatrix;
use crate::error::{Error, Result};
use crate::poly::IntPolynomial;

/// Strictly upper triangular integer matrix; only `i < j` entries are stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StrictUpperMatrix {
    m: usize,
    /// Column-major upper part: column `j` holds `a_{0j}..a_{j-1,j}`.
    cols: Vec<Vec<i64>>,
}

impl StrictUpperMatrix {
    pub fn zero(m: usize) -> Self {
        StrictUpperMatrix { m, cols: (0..m).map(|j| vec![0; j]).collect() }
    }

    /// From a full square matrix; entries on or below the diagonal must be zero.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let m = rows.len();
        let mut a = Self::zero(m);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::Parse("matrix is not square".into()));
            }
            for (j, &x) in row.iter().enumerate() {
                if j <= i {
                    if x != 0 {
                        return Err(Error::Parse(format!("entry ({},{}) is not above the diagonal", i + 1, j + 1)));
                    }
                } else {
                    a.cols[j][i] = x;
                }
            }
        }
        Ok(a)
    }

    pub fn size(&self) -> usize {
        self.m
    }

    /// Zero-based; zero when `i >= j`.
    pub fn get(&self, i: usize, j: usize) -> i64 {
        if i < j {
            self.cols[j][i]
        } else {
            0
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        assert!(i < j && j < self.m, "only strictly upper entries are stored");
        self.cols[j][i] = v;
    }

    pub fn column(&self, j: usize) -> &[i64] {
        &self.cols[j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.m).map(|i| (0..self.m).map(|j| self.get(i, j)).collect()).collect()
    }
}

/// `A_w[i][j] = -C[w_j][w_i]` for `i < j`, one-based letters.
pub fn cartan_matrix_of_word(c: &CartanMatrix, word: &[usize]) -> Result<StrictUpperMatrix> {
    let n = c.rank();
    for &l in word {
        if l == 0 || l > n {
            return Err(Error::IndexOutOfRange { index: l, rank: n });
        }
    }
    let m = word.len();
    let mut a = StrictUpperMatrix::zero(m);
    for j in 0..m {
        for i in 0..j {
            a.cols[j][i] = -c.get(word[j] - 1, word[i] - 1);
        }
    }
    Ok(a)
}

/// Evaluates `T_A(h)`; `h` must be homogeneous of degree `m` in exactly `m` degree-one variables.
pub fn evaluate(a: &StrictUpperMatrix, h: &IntPolynomial) -> Result<BigInt> {
    let m = a.size();
    let vars = h.vars();
    if vars.len() != m || vars.degrees().iter().any(|&d| d != 1) {
        return Err(Error::DegreeMismatch(format!(
            "expected {m} variables of degree one, got {}",
            vars.len()
        )));
    }
    if !h.is_homogeneous() {
        return Err(Error::DegreeMismatch("input is not homogeneous".into()));
    }
    if let Some(d) = h.degree() {
        if d as usize != m {
            return Err(Error::DegreeMismatch(format!("degree {d} differs from size {m}")));
        }
    }
    if m == 0 {
        return Ok(h.coefficient(&crate::poly::Monomial::one(0)));
    }
    let terms: Vec<(XMonomial, BigInt)> = h
        .terms()
        .map(|(mon, c)| {
            let mut v = XMonomial::new();
            for (i, &e) in mon.exponents().iter().enumerate() {
                for _ in 0..e {
                    v.push(i as u8);
                }
            }
            (v, c.clone())
        })
        .collect();
    Ok(evaluate_multisets(a, &terms))
}

/// Sorted multiset of zero-based variable indices.
pub(crate) type XMonomial = SmallVec<[u8; 24]>;

/// Integer coefficient ring used by the sparse routines: `i128` with
/// overflow detection, or `BigInt`.
pub(crate) trait Coef: Clone + Send + Sync {
    fn nil() -> Self;
    fn is_nil(&self) -> bool;
    fn from_i64(x: i64) -> Self;
    fn checked_add(&self, o: &Self) -> Option<Self>;
    fn checked_mul(&self, o: &Self) -> Option<Self>;
}

impl Coef for i128 {
    fn nil() -> Self {
        0
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn from_i64(x: i64) -> Self {
        x as i128
    }
    fn checked_add(&self, o: &Self) -> Option<Self> {
        i128::checked_add(*self, *o)
    }
    fn checked_mul(&self, o: &Self) -> Option<Self> {
        i128::checked_mul(*self, *o)
    }
}

impl Coef for BigInt {
    fn nil() -> Self {
        Zero::zero()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_i64(x: i64) -> Self {
        BigInt::from(x)
    }
    fn checked_add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn checked_mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
}

pub(crate) type XPoly<C> = FxHashMap<XMonomial, C>;

pub(crate) fn accumulate<C: Coef, K: Eq + Hash>(map: &mut FxHashMap<K, C>, key: K, c: C) -> Option<()> {
    if c.is_nil() {
        return Some(());
    }
    match map.entry(key) {
        std::collections::hash_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::hash_map::Entry::Occupied(mut e) => {
            let s = e.get().checked_add(&c)?;
            if s.is_nil() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
    Some(())
}

/// A monomial can survive elimination only if its `t`-th smallest index is at least `t`.
#[inline]
pub(crate) fn admissible(m: &[u8]) -> bool {
    m.iter().enumerate().all(|(t, &x)| x as usize >= t)
}

fn merge_sorted(a: &[u8], b: &[u8]) -> XMonomial {
    let mut out = XMonomial::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Product of sparse polynomials, dropping monomials that cannot survive.
pub(crate) fn multiply_pruned<C: Coef>(p: &XPoly<C>, q: &XPoly<C>) -> Option<XPoly<C>> {
    let mut out = XPoly::default();
    for (m1, c1) in p {
        for (m2, c2) in q {
            let m = merge_sorted(m1, m2);
            if admissible(&m) {
                accumulate(&mut out, m, c1.checked_mul(c2)?)?;
            }
        }
    }
    Some(out)
}

/// Expansions of `L_j^e`, `L_j = sum_{k<j} a_{kj} x_k`, built on demand.
struct PowerCache<'a, C> {
    a: &'a StrictUpperMatrix,
    powers: FxHashMap<(usize, usize), Vec<(XMonomial, C)>>,
}

impl<'a, C: Coef> PowerCache<'a, C> {
    fn new(a: &'a StrictUpperMatrix) -> Self {
        PowerCache { a, powers: FxHashMap::default() }
    }

    fn get(&mut self, j: usize, e: usize) -> Option<&[(XMonomial, C)]> {
        if !self.powers.contains_key(&(j, e)) {
            let v = if e == 0 {
                vec![(XMonomial::new(), C::from_i64(1))]
            } else {
                let prev = self.get(j, e - 1)?.to_vec();
                let col = self.a.column(j);
                let mut acc: FxHashMap<XMonomial, C> = FxHashMap::default();
                for (m, c) in &prev {
                    for (k, &ak) in col.iter().enumerate() {
                        if ak == 0 {
                            continue;
                        }
                        let m2 = merge_sorted(m, &[k as u8]);
                        accumulate(&mut acc, m2, c.checked_mul(&C::from_i64(ak))?)?;
                    }
                }
                let mut out: Vec<(XMonomial, C)> = acc.into_iter().collect();
                out.sort_by(|x, y| x.0.cmp(&y.0));
                out
            };
            self.powers.insert((j, e), v);
        }
        self.powers.get(&(j, e)).map(|v| v.as_slice())
    }
}

/// Runs the elimination from `x_m` down to `x_1`. Every input monomial must have degree `m`.
pub(crate) fn eliminate<C: Coef>(a: &StrictUpperMatrix, mut cur: XPoly<C>) -> Option<C> {
    let m = a.size();
    let mut cache = PowerCache::<C>::new(a);
    for j in (1..m).rev() {
        let mut next: XPoly<C> = XPoly::default();
        for (mon, c) in cur {
            let r = mon.iter().rev().take_while(|&&x| x as usize == j).count();
            if r == 0 {
                continue;
            }
            let rest = &mon[..mon.len() - r];
            for (pm, pc) in cache.get(j, r - 1)? {
                let merged = merge_sorted(rest, pm);
                if admissible(&merged) {
                    accumulate(&mut next, merged, c.checked_mul(pc)?)?;
                }
            }
        }
        cur = next;
        if cur.is_empty() {
            return Some(C::nil());
        }
    }
    let base: XMonomial = SmallVec::from_slice(&[0u8]);
    Some(cur.remove(&base).unwrap_or_else(C::nil))
}

/// Evaluates on a list of multiset monomials, trying `i128` before `BigInt`.
pub(crate) fn evaluate_multisets(a: &StrictUpperMatrix, terms: &[(XMonomial, BigInt)]) -> BigInt {
    let m = a.size();
    let small: Option<XPoly<i128>> = (|| {
        let mut p = XPoly::default();
        for (mon, c) in terms {
            if mon.len() == m && admissible(mon) {
                accumulate(&mut p, mon.clone(), c.to_i128()?)?;
            }
        }
        Some(p)
    })();
    if let Some(p) = small {
        if let Some(v) = eliminate::<i128>(a, p) {
            return BigInt::from(v);
        }
    }
    let mut p: XPoly<BigInt> = XPoly::default();
    for (mon, c) in terms {
        if mon.len() == m && admissible(mon) {
            accumulate(&mut p, mon.clone(), c.clone());
        }
    }
    eliminate::<BigInt>(a, p).expect("BigInt arithmetic does not overflow")
}
