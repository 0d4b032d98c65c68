//! Sparse graded polynomials with exact integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Named variables with positive weighted degrees.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarSet {
    names: Vec<String>,
    degrees: Vec<u32>,
}

impl VarSet {
    pub fn new<S: Into<String>>(vars: impl IntoIterator<Item = (S, u32)>) -> Result<Arc<Self>> {
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        for (name, d) in vars {
            let name = name.into();
            if d == 0 {
                return Err(Error::Parse(format!("variable {name} must have positive degree")));
            }
            if !valid_name(&name) {
                return Err(Error::Parse(format!("invalid variable name {name:?}")));
            }
            if names.contains(&name) {
                return Err(Error::Parse(format!("duplicate variable {name}")));
            }
            names.push(name);
            degrees.push(d);
        }
        Ok(Arc::new(VarSet { names, degrees }))
    }

    /// `x1..xm`, all of degree one.
    pub fn linear(m: usize) -> Arc<Self> {
        VarSet::new((1..=m).map(|i| (format!("x{i}"), 1))).expect("names are distinct")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

fn valid_name(s: &str) -> bool {
    let mut ch = s.chars();
    matches!(ch.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && ch.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Exponent vector, one entry per variable of the owning set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub SmallVec<[u16; 8]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn degree(&self, vars: &VarSet) -> u32 {
        self.0.iter().zip(&vars.degrees).map(|(&e, &d)| e as u32 * d).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(Monomial(out))
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn render(&self, vars: &VarSet) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(vars.names[i].clone()),
                _ => parts.push(format!("{}^{}", vars.names[i], e)),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// All monomials of weighted degree `m`, ascending in lexicographic order of exponent tuples.
pub fn monomial_basis(vars: &VarSet, m: u32) -> Vec<Monomial> {
    let n = vars.len();
    let mut out = Vec::new();
    let mut cur: SmallVec<[u16; 8]> = SmallVec::from_elem(0, n);
    fn rec(i: usize, rem: u32, degs: &[u32], cur: &mut SmallVec<[u16; 8]>, out: &mut Vec<Monomial>) {
        if i == degs.len() {
            if rem == 0 {
                out.push(Monomial(cur.clone()));
            }
            return;
        }
        let d = degs[i];
        for e in 0..=rem / d {
            cur[i] = e as u16;
            rec(i + 1, rem - e * d, degs, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, m, &vars.degrees, &mut cur, &mut out);
    out
}

/// Number of monomials of weighted degree `m`.
pub fn basis_size(vars: &VarSet, m: u32) -> usize {
    let mut ways = vec![0usize; m as usize + 1];
    ways[0] = 1;
    for &d in &vars.degrees {
        for t in d as usize..=m as usize {
            ways[t] += ways[t - d as usize];
        }
    }
    ways[m as usize]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    vars: Arc<VarSet>,
    terms: BTreeMap<Monomial, BigInt>,
}

impl IntPolynomial {
    pub fn zero(vars: &Arc<VarSet>) -> Self {
        IntPolynomial { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &Arc<VarSet>, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(Monomial::one(vars.len()), c.into());
        p
    }

    pub fn one(vars: &Arc<VarSet>) -> Self {
        Self::constant(vars, 1)
    }

    pub fn var(vars: &Arc<VarSet>, i: usize) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(Monomial::var(vars.len(), i), BigInt::one());
        p
    }

    pub fn var_named(vars: &Arc<VarSet>, name: &str) -> Result<Self> {
        let i = vars.index_of(name).ok_or_else(|| Error::Parse(format!("unknown variable {name}")))?;
        Ok(Self::var(vars, i))
    }

    pub fn monomial(vars: &Arc<VarSet>, m: Monomial, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(m, c.into());
        p
    }

    pub fn from_terms(vars: &Arc<VarSet>, terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.0.len(), self.vars.len());
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn same_vars(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.vars, &other.vars) || *self.vars == *other.vars {
            Ok(())
        } else {
            Err(Error::VariableMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&BigInt::from(-1))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(&self.vars);
        }
        IntPolynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_vars(other)?;
        let mut out = Self::zero(&self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(&self.vars);
        for _ in 0..e {
            out = out.mul(self).expect("same variables");
        }
        out
    }

    /// Weighted degree of the leading part; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree(&self.vars)).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|m| m.degree(&self.vars));
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn graded_piece(&self, m: u32) -> Self {
        IntPolynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(mon, _)| mon.degree(&self.vars) == m)
                .map(|(a, b)| (a.clone(), b.clone()))
                .collect(),
        }
    }

    /// Ring homomorphism replacing variable `i` by `value`.
    pub fn substitute(&self, i: usize, value: &Self) -> Result<Self> {
        self.same_vars(value)?;
        let mut out = Self::zero(&self.vars);
        let mut powers: Vec<Self> = vec![Self::one(&self.vars)];
        for (m, c) in &self.terms {
            let e = m.0[i] as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap().mul(value)?;
                powers.push(next);
            }
            let mut rest = m.clone();
            rest.0[i] = 0;
            for (m2, c2) in &powers[e].terms {
                out.add_term(rest.mul(m2), c * c2);
            }
        }
        Ok(out)
    }

    /// Sets the named variables to zero.
    pub fn kill(&self, names: &[&str]) -> Self {
        let idx: Vec<usize> = names.iter().filter_map(|n| self.vars.index_of(n)).collect();
        IntPolynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| idx.iter().all(|&i| m.0[i] == 0))
                .map(|(a, b)| (a.clone(), b.clone()))
                .collect(),
        }
    }

    /// Re-expresses over `target`, where `map[i]` is the target index of variable `i`.
    pub fn embed(&self, target: &Arc<VarSet>, map: &[usize]) -> Self {
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut e = Monomial::one(target.len());
            for (i, &x) in m.0.iter().enumerate() {
                e.0[map[i]] += x;
            }
            out.add_term(e, c.clone());
        }
        out
    }

    /// Re-expresses over `target` matching variables by name.
    ///
    /// Variables absent from `target` are allowed only if they do not occur.
    pub fn embed_by_name(&self, target: &Arc<VarSet>) -> Result<Self> {
        let used = self.used_variables();
        let map: Vec<usize> = self
            .vars
            .names
            .iter()
            .enumerate()
            .map(|(i, n)| match target.index_of(n) {
                Some(j) => Ok(j),
                None if !used.contains(&i) => Ok(0),
                None => Err(Error::VariableMismatch),
            })
            .collect::<Result<_>>()?;
        Ok(self.embed(target, &map))
    }

    /// Indices of variables occurring with positive exponent.
    pub fn used_variables(&self) -> Vec<usize> {
        (0..self.vars.len()).filter(|&i| self.terms.keys().any(|m| m.0[i] > 0)).collect()
    }

    /// `self` or `-self`, whichever has a positive leading term in display order.
    pub fn normalize_sign(&self) -> Self {
        match self.display_order().first() {
            Some((_, c)) if c.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    /// Coefficient vector against `basis`; fails if a term lies outside it.
    pub fn coordinates(&self, basis: &[Monomial]) -> Result<Vec<BigInt>> {
        let mut out = vec![BigInt::zero(); basis.len()];
        for (m, c) in &self.terms {
            let i = basis
                .binary_search(m)
                .map_err(|_| Error::DegreeMismatch(format!("monomial {} outside the basis", m.render(&self.vars))))?;
            out[i] = c.clone();
        }
        Ok(out)
    }

    pub fn from_coordinates(vars: &Arc<VarSet>, basis: &[Monomial], coords: &[BigInt]) -> Self {
        Self::from_terms(vars, basis.iter().cloned().zip(coords.iter().cloned()))
    }

    /// Content: gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        use num_integer::Integer;
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn parse(vars: &Arc<VarSet>, s: &str) -> Result<Self> {
        Parser { s: s.as_bytes(), pos: 0, vars }.polynomial()
    }

    pub fn to_json_terms(&self) -> Vec<JsonTerm> {
        self.display_order()
            .into_iter()
            .map(|(m, c)| JsonTerm {
                coef: c.to_string(),
                monomial: m
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| (self.vars.names[i].clone(), e as u32))
                    .collect(),
            })
            .collect()
    }

    pub fn from_json_terms(vars: &Arc<VarSet>, terms: &[JsonTerm]) -> Result<Self> {
        let mut p = Self::zero(vars);
        for t in terms {
            let c: BigInt = t.coef.parse().map_err(|_| Error::Parse(format!("bad coefficient {:?}", t.coef)))?;
            let mut m = Monomial::one(vars.len());
            for (name, e) in &t.monomial {
                let i = vars.index_of(name).ok_or_else(|| Error::Parse(format!("unknown variable {name}")))?;
                m.0[i] += *e as u16;
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    /// Terms by descending degree, then with later variables leading.
    fn display_order(&self) -> Vec<(&Monomial, &BigInt)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| {
            let da = a.0.degree(&self.vars);
            let db = b.0.degree(&self.vars);
            db.cmp(&da).then_with(|| b.0 .0.iter().rev().cmp(a.0 .0.iter().rev()))
        });
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub coef: String,
    pub monomial: BTreeMap<String, u32>,
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.display_order().into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", m.render(&self.vars))?;
            } else {
                write!(f, "{a}*{}", m.render(&self.vars))?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    vars: &'a Arc<VarSet>,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {}", self.pos))
    }

    fn number(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.s[start..self.pos]).ok()?.parse().ok()
    }

    fn name(&mut self) -> Option<&str> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphabetic() || self.s[self.pos] == b'_') {
            self.pos += 1;
            while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
                self.pos += 1;
            }
            std::str::from_utf8(&self.s[start..self.pos]).ok()
        } else {
            None
        }
    }

    fn polynomial(mut self) -> Result<IntPolynomial> {
        let mut out = IntPolynomial::zero(self.vars);
        let mut first = true;
        loop {
            let sign = match self.peek() {
                None if !first => break,
                None => return Err(self.err("empty polynomial")),
                Some(b'+') => {
                    self.pos += 1;
                    1
                }
                Some(b'-') => {
                    self.pos += 1;
                    -1
                }
                Some(_) if first => 1,
                Some(_) => return Err(self.err("expected + or -")),
            };
            first = false;
            let (m, c) = self.term()?;
            out.add_term(m, c * sign);
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Monomial, BigInt)> {
        let mut coef = BigInt::one();
        let mut mon = Monomial::one(self.vars.len());
        loop {
            if let Some(n) = self.number() {
                coef *= n;
            } else if let Some(name) = self.name() {
                let name = name.to_string();
                let i = self
                    .vars
                    .index_of(&name)
                    .ok_or_else(|| Error::Parse(format!("unknown variable {name}")))?;
                let mut e = 1u16;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    e = self
                        .number()
                        .and_then(|n| u16::try_from(n).ok())
                        .ok_or_else(|| self.err("expected exponent"))?;
                }
                mon.0[i] += e;
            } else {
                return Err(self.err("expected number or variable"));
            }
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                }
                Some(c) if c.is_ascii_alphanumeric() || c == b'_' => {}
                _ => break,
            }
        }
        Ok((mon, coef))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs() -> Arc<VarSet> {
        VarSet::new([("w1", 2), ("y3", 6), ("y4", 8), ("y6", 12)]).unwrap()
    }

    #[test]
    fn basis_examples() {
        let one = VarSet::new([("y", 2)]).unwrap();
        let b = monomial_basis(&one, 4);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].0.as_slice(), &[2]);
        let two = VarSet::new([("y1", 2), ("y2", 4)]).unwrap();
        let b = monomial_basis(&two, 8);
        let e: Vec<Vec<u16>> = b.iter().map(|m| m.0.to_vec()).collect();
        assert_eq!(e, vec![vec![0, 2], vec![2, 1], vec![4, 0]]);
        assert_eq!(monomial_basis(&two, 0), vec![Monomial::one(2)]);
        assert!(monomial_basis(&two, 3).is_empty());
        for m in 0..30 {
            assert_eq!(monomial_basis(&vs(), m).len(), basis_size(&vs(), m));
        }
    }

    #[test]
    fn arithmetic_and_render() {
        let v = VarSet::new([("x", 1), ("y", 1)]).unwrap();
        let x = IntPolynomial::var(&v, 0);
        let y = IntPolynomial::var(&v, 1);
        let s = x.add(&y).unwrap().pow(2);
        assert_eq!(s.to_string(), "y^2 + 2*x*y + x^2");
        let g = x.pow(2).add(&x).unwrap().graded_piece(2);
        assert_eq!(g, x.pow(2));
        assert!(x.sub(&x).unwrap().is_zero());
    }

    #[test]
    fn parse_round_trip() {
        let v = vs();
        let p = IntPolynomial::parse(&v, "2*y3 - w1^3").unwrap();
        assert_eq!(p.to_string(), "2*y3 - w1^3");
        let q = IntPolynomial::parse(&v, "2y6 + y3^2 - 3 w1^2 y4").unwrap();
        assert_eq!(IntPolynomial::parse(&v, &q.to_string()).unwrap(), q);
        assert_eq!(q.degree(), Some(12));
        assert!(q.is_homogeneous());
        let j = q.to_json_terms();
        assert_eq!(IntPolynomial::from_json_terms(&v, &j).unwrap(), q);
        assert!(IntPolynomial::parse(&v, "2*z").is_err());
        assert!(IntPolynomial::parse(&v, "").is_err());
        assert!(IntPolynomial::parse(&v, "y3 y4 +").is_err());
        assert_eq!(IntPolynomial::parse(&v, "-y3 + y3").unwrap().to_string(), "0");
        assert_eq!(IntPolynomial::parse(&v, "-1").unwrap().to_string(), "-1");
    }

    #[test]
    fn substitute_and_kill() {
        let v = vs();
        let p = IntPolynomial::parse(&v, "3*y4 + 2*w1*y3").unwrap();
        assert_eq!(p.kill(&["w1"]).to_string(), "3*y4");
        let zero = IntPolynomial::zero(&v);
        assert_eq!(p.substitute(0, &zero).unwrap().to_string(), "3*y4");
        let w = IntPolynomial::parse(&v, "w1^3").unwrap();
        let r = IntPolynomial::parse(&v, "y3^2").unwrap().substitute(1, &w).unwrap();
        assert_eq!(r.to_string(), "w1^6");
    }

    #[test]
    fn mismatched_sets() {
        let a = IntPolynomial::var(&vs(), 0);
        let b = IntPolynomial::var(&VarSet::linear(2), 0);
        assert!(matches!(a.add(&b), Err(Error::VariableMismatch)));
        assert!(a.mul(&b).is_err());
    }

    #[test]
    fn embed_by_name() {
        let small = VarSet::new([("y3", 6), ("w1", 2)]).unwrap();
        let p = IntPolynomial::parse(&small, "2*y3 - w1^3").unwrap();
        let big = p.embed_by_name(&vs()).unwrap();
        assert_eq!(big.to_string(), "2*y3 - w1^3");
        assert!(p.embed_by_name(&VarSet::linear(2)).is_err());
    }
}
