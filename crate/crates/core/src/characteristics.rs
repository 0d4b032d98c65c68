//! Structure constants of Schubert classes and product expansions.
//!
//! `a^w_{w_1..w_k} = T_{A_w}( prod_i sum_{I : s_I = w_i} x_I )`, where `I`
//! runs over position sets in the minimized word of `w` with `|I| = l(w_i)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::cartan::CartanMatrix;
use crate::error::{Error, Result};
use crate::poly::IntPolynomial;
use crate::triangular::{self, admissible, cartan_matrix_of_word, Coef, XMonomial, XPoly};
use crate::weyl::{CosetTable, SchubertClass, WeylElement};

/// Coefficients of a class expansion; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SchubertExpansion {
    coeffs: BTreeMap<SchubertClass, BigInt>,
}

impl SchubertExpansion {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(c: SchubertClass) -> Self {
        let mut e = Self::new();
        e.add(c, BigInt::one());
        e
    }

    pub fn add(&mut self, c: SchubertClass, v: BigInt) {
        if v.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(c).or_default();
        *entry += v;
        if entry.is_zero() {
            self.coeffs.remove(&c);
        }
    }

    pub fn coefficient(&self, c: SchubertClass) -> BigInt {
        self.coeffs.get(&c).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SchubertClass, &BigInt)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Common length of the classes present; `None` if zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.keys().next().map(|c| c.r)
    }
}

impl fmt::Display for SchubertExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (k, (c, v)) in self.coeffs.iter().enumerate() {
            let neg = v.is_negative();
            let a = v.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if a.is_one() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{a}*{c}")?;
            }
        }
        Ok(())
    }
}

/// Position sets (bitmasks over word positions) whose subword is a reduced
/// word of the element carried from `target` down to `base`.
///
/// `target` and `base` are points of one Weyl orbit; a letter `a` may be
/// taken when it is a left descent of the remaining element, i.e. the
/// point's `a`-th coordinate is negative.
fn subword_masks(c: &CartanMatrix, word: &[usize], target: &[i16], base: &[i16], need: usize) -> Vec<u128> {
    assert!(word.len() <= 128, "words longer than 128 letters are not supported");
    let mut out = Vec::new();
    let mut point = target.to_vec();
    dfs(c, word, 0, need, 0, &mut point, base, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    c: &CartanMatrix,
    word: &[usize],
    pos: usize,
    need: usize,
    mask: u128,
    point: &mut Vec<i16>,
    base: &[i16],
    out: &mut Vec<u128>,
) {
    if need == 0 {
        if point.as_slice() == base {
            out.push(mask);
        }
        return;
    }
    if word.len() - pos < need {
        return;
    }
    let a = word[pos] - 1;
    if point[a] < 0 {
        c.reflect_small_in_place(a, point);
        dfs(c, word, pos + 1, need - 1, mask | (1u128 << pos), point, base, out);
        c.reflect_small_in_place(a, point);
    }
    dfs(c, word, pos + 1, need, mask, point, base, out);
}

fn masks_to_sets(masks: &[u128]) -> Vec<Vec<usize>> {
    masks
        .iter()
        .map(|&m| (0..128).filter(|&p| m >> p & 1 == 1).map(|p| p + 1).collect())
        .collect()
}

/// All `I` with `|I| = l(u)` and `s_I = u`, as one-based position lists in increasing order.
pub fn subwords_equal_to(word: &[usize], target: &WeylElement) -> Result<Vec<Vec<usize>>> {
    let lie = target.lie_type();
    let c = lie.cartan_matrix();
    for &l in word {
        if l == 0 || l > lie.rank() {
            return Err(Error::IndexOutOfRange { index: l, rank: lie.rank() });
        }
    }
    let point: Vec<i16> = target.rho_image().iter().map(|&x| x as i16).collect();
    let base = vec![1i16; lie.rank()];
    let masks = subword_masks(&c, word, &point, &base, target.length());
    let mut sets = masks_to_sets(&masks);
    sets.sort();
    Ok(sets)
}

/// `sum_I x_I` for the subwords of `word` equal to `u`.
fn factor_poly(table: &CosetTable, word: &[usize], u: SchubertClass) -> XPoly<i128> {
    let masks = subword_masks(table.cartan(), word, table.point(u), table.lambda(), u.r);
    let mut p = XPoly::default();
    for m in masks {
        let mon: XMonomial = (0..word.len() as u8).filter(|&t| m >> t & 1 == 1).collect();
        p.insert(mon, 1i128);
    }
    p
}

fn to_big(p: &XPoly<i128>) -> XPoly<BigInt> {
    p.iter().map(|(m, &c)| (m.clone(), BigInt::from(c))).collect()
}

fn product_then_eliminate<C: Coef>(a: &triangular::StrictUpperMatrix, mut factors: Vec<XPoly<C>>) -> Option<C> {
    if factors.iter().any(|f| f.is_empty()) {
        return Some(C::nil());
    }
    factors.sort_by_key(|f| std::cmp::Reverse(f.len()));
    let mut acc = factors.pop()?;
    while let Some(next) = factors.pop() {
        acc = triangular::multiply_pruned(&acc, &next)?;
        if acc.is_empty() {
            return Some(C::nil());
        }
    }
    acc.retain(|m, _| admissible(m));
    triangular::eliminate(a, acc)
}

fn characteristic_unchecked(table: &CosetTable, word: &[usize], factors: &[SchubertClass]) -> BigInt {
    let a = cartan_matrix_of_word(table.cartan(), word).expect("table words are valid");
    let polys: Vec<XPoly<i128>> = factors.iter().map(|&u| factor_poly(table, word, u)).collect();
    if let Some(v) = product_then_eliminate::<i128>(&a, polys.clone()) {
        return BigInt::from(v);
    }
    let big: Vec<XPoly<BigInt>> = polys.iter().map(to_big).collect();
    product_then_eliminate::<BigInt>(&a, big).expect("BigInt arithmetic does not overflow")
}

fn check_classes(table: &CosetTable, classes: &[SchubertClass]) -> Result<()> {
    classes.iter().try_for_each(|&c| table.check(c))
}

/// `a^w_{w_1..w_k}` through the minimized word of `w`.
pub fn characteristic(table: &CosetTable, w: SchubertClass, factors: &[SchubertClass]) -> Result<BigInt> {
    characteristic_with_word(table, w, factors, &table.word(w))
}

/// Same as [`characteristic`] but through an arbitrary reduced word of `w`.
pub fn characteristic_with_word(
    table: &CosetTable,
    w: SchubertClass,
    factors: &[SchubertClass],
    word: &[usize],
) -> Result<BigInt> {
    table.check(w)?;
    check_classes(table, factors)?;
    let total: usize = factors.iter().map(|c| c.r).sum();
    if total != w.r {
        return Err(Error::DegreeMismatch(format!(
            "factor lengths sum to {total} but the target has length {}",
            w.r
        )));
    }
    if word.len() != w.r || table.find_word(word)? != w {
        return Err(Error::UnknownClass(format!("{word:?} is not a reduced word of {w}")));
    }
    let nontrivial: Vec<SchubertClass> = factors.iter().copied().filter(|c| c.r > 0).collect();
    match nontrivial.len() {
        0 => Ok(BigInt::one()),
        1 => Ok(if nontrivial[0] == w { BigInt::one() } else { BigInt::zero() }),
        _ => Ok(characteristic_unchecked(table, word, &nontrivial)),
    }
}

/// Full expansion of `s_{w_1} ... s_{w_k}`; targets are evaluated in parallel.
pub fn expand_product(table: &CosetTable, factors: &[SchubertClass]) -> Result<SchubertExpansion> {
    check_classes(table, factors)?;
    let total: usize = factors.iter().map(|c| c.r).sum();
    let nontrivial: Vec<SchubertClass> = factors.iter().copied().filter(|c| c.r > 0).collect();
    if total > table.top() {
        if table.is_truncated() {
            return Err(Error::DegreeMismatch(format!(
                "length {total} lies beyond the enumerated part of the table"
            )));
        }
        return Ok(SchubertExpansion::new());
    }
    match nontrivial.len() {
        0 => return Ok(SchubertExpansion::single(SchubertClass::new(0, 1))),
        1 => return Ok(SchubertExpansion::single(nontrivial[0])),
        _ => {}
    }
    let targets = match nontrivial[..] {
        [a, b] => candidate_targets(table, a, b),
        _ => table.classes(total).collect(),
    };
    let values: Vec<(SchubertClass, BigInt)> = targets
        .into_par_iter()
        .map(|w| (w, characteristic_unchecked(table, &table.word(w), &nontrivial)))
        .collect();
    let mut out = SchubertExpansion::new();
    for (w, v) in values {
        out.add(w, v);
    }
    Ok(out)
}

// A product with a length-one class lives on the Bruhat covers of the other factor.
fn candidate_targets(t: &CosetTable, a: SchubertClass, b: SchubertClass) -> Vec<SchubertClass> {
    match (a.r, b.r) {
        (1, _) => t.covers(b),
        (_, 1) => t.covers(a),
        _ => t.classes(a.r + b.r).collect(),
    }
}

/// Sparse expansion keyed by flat table index.
pub type FlatExpansion = BTreeMap<usize, BigInt>;

// (generator classes, exponents) -> expansion
type MonomialCache = FxHashMap<(Vec<usize>, Vec<u16>), Arc<FlatExpansion>>;

/// Products built from cached pairwise structure constants.
///
/// `s_v * s_g` is computed once per unordered pair; monomials in a fixed
/// list of generator classes are expanded by peeling off the last factor.
pub struct ProductEngine<'t> {
    table: &'t CosetTable,
    pairs: RwLock<FxHashMap<(usize, usize), Arc<FlatExpansion>>>,
    monomials: RwLock<MonomialCache>,
}

impl<'t> ProductEngine<'t> {
    pub fn new(table: &'t CosetTable) -> Self {
        ProductEngine { table, pairs: RwLock::default(), monomials: RwLock::default() }
    }

    pub fn table(&self) -> &'t CosetTable {
        self.table
    }

    /// Expansion of `s_a * s_b`.
    pub fn pair(&self, a: SchubertClass, b: SchubertClass) -> Result<Arc<FlatExpansion>> {
        self.table.check(a)?;
        self.table.check(b)?;
        let (ga, gb) = (self.table.global_index(a), self.table.global_index(b));
        let key = (ga.min(gb), ga.max(gb));
        if let Some(e) = self.pairs.read().expect("cache lock").get(&key) {
            return Ok(e.clone());
        }
        let e = Arc::new(self.compute_pair(a, b)?);
        self.pairs.write().expect("cache lock").insert(key, e.clone());
        Ok(e)
    }

    fn compute_pair(&self, a: SchubertClass, b: SchubertClass) -> Result<FlatExpansion> {
        let t = self.table;
        let total = a.r + b.r;
        let mut out = FlatExpansion::new();
        if a.r == 0 || b.r == 0 {
            let c = if a.r == 0 { b } else { a };
            out.insert(t.global_index(c), BigInt::one());
            return Ok(out);
        }
        if total > t.top() {
            if t.is_truncated() {
                return Err(Error::DegreeMismatch(format!(
                    "length {total} lies beyond the enumerated part of the table"
                )));
            }
            return Ok(out);
        }
        let targets = candidate_targets(t, a, b);
        let values: Vec<(usize, BigInt)> = targets
            .into_par_iter()
            .filter_map(|w| {
                let v = characteristic_unchecked(t, &t.word(w), &[a, b]);
                (!v.is_zero()).then(|| (t.global_index(w), v))
            })
            .collect();
        out.extend(values);
        Ok(out)
    }

    /// `e * s_g` for a flat expansion `e`.
    pub fn times_class(&self, e: &FlatExpansion, g: SchubertClass) -> Result<FlatExpansion> {
        let mut out = FlatExpansion::new();
        for (&idx, c) in e {
            let p = self.pair(self.table.class_at(idx), g)?;
            for (&k, v) in p.iter() {
                let entry = out.entry(k).or_default();
                *entry += c * v;
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    /// Expansion of `prod gens[i]^exps[i]`.
    pub fn monomial(&self, gens: &[SchubertClass], exps: &[u16]) -> Result<Arc<FlatExpansion>> {
        assert_eq!(gens.len(), exps.len());
        let gidx: Vec<usize> = gens.iter().map(|&g| self.table.global_index(g)).collect();
        let key = (gidx, exps.to_vec());
        if let Some(e) = self.monomials.read().expect("cache lock").get(&key) {
            return Ok(e.clone());
        }
        // peel off a shortest generator: length-one steps only touch Bruhat covers
        let last = (0..exps.len()).filter(|&i| exps[i] > 0).min_by_key(|&i| (gens[i].r, std::cmp::Reverse(i)));
        let e = match last {
            None => {
                let mut one = FlatExpansion::new();
                one.insert(0, BigInt::one());
                one
            }
            Some(j) => {
                let degree: usize = gens.iter().zip(exps).map(|(g, &e)| g.r * e as usize).sum();
                if degree > self.table.top() && !self.table.is_truncated() {
                    FlatExpansion::new()
                } else {
                    let mut lower = exps.to_vec();
                    lower[j] -= 1;
                    let base = self.monomial(gens, &lower)?;
                    self.times_class(&base, gens[j])?
                }
            }
        };
        let e = Arc::new(e);
        self.monomials.write().expect("cache lock").insert(key, e.clone());
        Ok(e)
    }

    /// Expansion of a polynomial whose `i`-th variable stands for `gens[i]`.
    pub fn polynomial(&self, p: &IntPolynomial, gens: &[SchubertClass]) -> Result<FlatExpansion> {
        if p.vars().len() != gens.len() {
            return Err(Error::VariableMismatch);
        }
        let mut out = FlatExpansion::new();
        for (m, c) in p.terms() {
            let e = self.monomial(gens, m.exponents())?;
            for (&k, v) in e.iter() {
                *out.entry(k).or_default() += c * v;
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    pub fn to_expansion(&self, e: &FlatExpansion) -> SchubertExpansion {
        let mut out = SchubertExpansion::new();
        for (&k, v) in e {
            out.add(self.table.class_at(k), v.clone());
        }
        out
    }
}
