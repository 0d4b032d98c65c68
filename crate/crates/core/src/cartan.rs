//! Simple Lie types, Cartan matrices and root systems.
//!
//! Simple roots are numbered in Bourbaki order. Roots live in simple-root
//! coordinates and weights in fundamental-weight coordinates; nothing here
//! touches real inner products.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LieType {
    family: Family,
    rank: usize,
}

impl LieType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(LieType { family, rank })
        } else {
            Err(Error::InvalidLieType(format!("{}{}", family.letter(), rank)))
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan_matrix(&self) -> CartanMatrix {
        cartan_matrix(*self)
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for LieType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let letter = chars
            .next()
            .ok_or_else(|| Error::InvalidLieType(s.to_string()))?;
        let family = match letter.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return Err(Error::InvalidLieType(s.to_string())),
        };
        let digits = chars.as_str();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::InvalidLieType(s.to_string()));
        }
        let rank: usize = digits
            .parse()
            .map_err(|_| Error::InvalidLieType(s.to_string()))?;
        LieType::new(family, rank)
    }
}

/// Integer Cartan matrix, `C[i][j] = 2(b_i, b_j) / (b_j, b_j)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CartanMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl CartanMatrix {
    /// Validates diagonal 2, off-diagonal in {0,-1,-2,-3}, and symmetric zero pattern.
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidCartan("empty matrix".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidCartan(format!("row {} has length {}", i + 1, row.len())));
            }
            entries.extend_from_slice(row);
        }
        for i in 0..n {
            for j in 0..n {
                let c = entries[i * n + j];
                if i == j {
                    if c != 2 {
                        return Err(Error::InvalidCartan(format!("diagonal entry ({0},{0}) is {c}", i + 1)));
                    }
                } else {
                    if !(-3..=0).contains(&c) {
                        return Err(Error::InvalidCartan(format!(
                            "entry ({},{}) = {c} outside {{0,-1,-2,-3}}",
                            i + 1,
                            j + 1
                        )));
                    }
                    if (c == 0) != (entries[j * n + i] == 0) {
                        return Err(Error::InvalidCartan(format!(
                            "zero pattern not symmetric at ({},{})",
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
        }
        Ok(CartanMatrix { n, entries })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    /// Zero-based entry access.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> CartanMatrix {
        let n = self.n;
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.entries[i * n + j];
            }
        }
        CartanMatrix { n, entries }
    }

    fn check_index(&self, i: usize) -> Result<usize> {
        if i == 0 || i > self.n {
            Err(Error::IndexOutOfRange { index: i, rank: self.n })
        } else {
            Ok(i - 1)
        }
    }

    /// `sigma_i(v) = v - v[i] * (row i)`, with `i` one-based.
    pub fn reflect_weight(&self, i: usize, v: &WeightVector) -> Result<WeightVector> {
        let k = self.check_index(i)?;
        let mut out = v.0.clone();
        self.reflect_weight_in_place(k, &mut out);
        Ok(WeightVector(out))
    }

    /// Zero-based, unchecked variant.
    #[inline]
    pub fn reflect_weight_in_place(&self, k: usize, v: &mut [i64]) {
        let c = v[k];
        if c == 0 {
            return;
        }
        let row = &self.entries[k * self.n..(k + 1) * self.n];
        for (x, &a) in v.iter_mut().zip(row) {
            *x -= c * a;
        }
    }

    /// Same as [`Self::reflect_weight_in_place`] on the compact orbit-point storage.
    #[inline]
    pub fn reflect_small_in_place(&self, k: usize, v: &mut [i16]) {
        let c = v[k];
        if c == 0 {
            return;
        }
        let row = &self.entries[k * self.n..(k + 1) * self.n];
        for (x, &a) in v.iter_mut().zip(row) {
            *x -= c * a as i16;
        }
    }

    /// `sigma_i(r) = r - (sum_k r[k] C[k][i]) e_i`, with `i` one-based.
    pub fn reflect_root(&self, i: usize, r: &RootVector) -> Result<RootVector> {
        let k = self.check_index(i)?;
        let mut out = r.0.clone();
        self.reflect_root_in_place(k, &mut out);
        Ok(RootVector(out))
    }

    #[inline]
    pub fn reflect_root_in_place(&self, k: usize, r: &mut [i64]) {
        let pairing: i64 = (0..self.n).map(|j| r[j] * self.get(j, k)).sum();
        r[k] -= pairing;
    }
}

impl fmt::Display for CartanMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.entries.chunks(self.n) {
            let cells: Vec<String> = row.iter().map(|c| format!("{c:>2}")).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootVector(pub Vec<i64>);

impl RootVector {
    pub fn simple(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i - 1] = 1;
        RootVector(v)
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&c| c >= 0) && self.0.iter().any(|&c| c > 0)
    }

    pub fn is_negative(&self) -> bool {
        self.0.iter().all(|&c| c <= 0) && self.0.iter().any(|&c| c < 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightVector(pub Vec<i64>);

impl WeightVector {
    pub fn zero(n: usize) -> Self {
        WeightVector(vec![0; n])
    }

    /// The fundamental weight `omega_i`, one-based.
    pub fn fundamental(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i - 1] = 1;
        WeightVector(v)
    }

    /// `rho = omega_1 + ... + omega_n`.
    pub fn rho(n: usize) -> Self {
        WeightVector(vec![1; n])
    }
}

/// Bourbaki Cartan matrix of a simple type.
pub fn cartan_matrix(t: LieType) -> CartanMatrix {
    let n = t.rank;
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize, cij: i64, cji: i64| {
        c[i - 1][j - 1] = cij;
        c[j - 1][i - 1] = cji;
    };
    match t.family {
        Family::A => {
            for i in 1..n {
                link(i, i + 1, -1, -1);
            }
        }
        Family::B => {
            for i in 1..n - 1 {
                link(i, i + 1, -1, -1);
            }
            link(n - 1, n, -2, -1);
        }
        Family::C => {
            for i in 1..n - 1 {
                link(i, i + 1, -1, -1);
            }
            link(n - 1, n, -1, -2);
        }
        Family::D => {
            for i in 1..n - 1 {
                link(i, i + 1, -1, -1);
            }
            // the last node hangs off n-2, not n-1
            c[n - 2][n - 1] = 0;
            c[n - 1][n - 2] = 0;
            c[n - 3][n - 1] = -1;
            c[n - 1][n - 3] = -1;
        }
        Family::E => {
            link(1, 3, -1, -1);
            link(2, 4, -1, -1);
            for i in 3..n {
                link(i, i + 1, -1, -1);
            }
        }
        Family::F => {
            link(1, 2, -1, -1);
            link(2, 3, -2, -1);
            link(3, 4, -1, -1);
        }
        Family::G => {
            link(1, 2, -1, -3);
        }
    }
    CartanMatrix::from_rows(c).expect("built-in Cartan matrices are valid")
}

pub fn simple_reflection_on_weight(c: &CartanMatrix, i: usize, v: &WeightVector) -> Result<WeightVector> {
    c.reflect_weight(i, v)
}

pub fn simple_reflection_on_root(c: &CartanMatrix, i: usize, r: &RootVector) -> Result<RootVector> {
    c.reflect_root(i, r)
}

/// All roots of a Cartan matrix, closed under simple reflections.
#[derive(Debug, Clone)]
pub struct RootSystem {
    cartan: CartanMatrix,
    positive: Vec<RootVector>,
    /// Positive coroots in simple-coroot coordinates (roots of the transpose).
    positive_coroots: Vec<RootVector>,
    reflections: Vec<Vec<usize>>,
}

impl RootSystem {
    pub fn new(cartan: CartanMatrix) -> Self {
        let positive = positive_closure(&cartan);
        let positive_coroots = positive_closure(&cartan.transpose());
        let reflections = reflection_words(&cartan, &positive);
        RootSystem { cartan, positive, positive_coroots, reflections }
    }

    pub fn of(t: LieType) -> Arc<RootSystem> {
        use std::collections::HashMap;
        use std::sync::{Mutex, OnceLock};
        static CACHE: OnceLock<Mutex<HashMap<LieType, Arc<RootSystem>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("root system cache poisoned");
        guard
            .entry(t)
            .or_insert_with(|| Arc::new(RootSystem::new(cartan_matrix(t))))
            .clone()
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.cartan
    }

    pub fn positive_roots(&self) -> &[RootVector] {
        &self.positive
    }

    pub fn positive_coroots(&self) -> &[RootVector] {
        &self.positive_coroots
    }

    /// A palindromic word of the reflection `s_beta`, for each positive root in order.
    pub fn reflection_words(&self) -> &[Vec<usize>] {
        &self.reflections
    }

    pub fn len(&self) -> usize {
        2 * self.positive.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn all_roots(&self) -> Vec<RootVector> {
        let mut out = self.positive.clone();
        out.extend(self.positive.iter().map(|r| RootVector(r.0.iter().map(|c| -c).collect())));
        out
    }
}

fn positive_closure(c: &CartanMatrix) -> Vec<RootVector> {
    let n = c.rank();
    let mut seen: FxHashSet<Vec<i64>> = FxHashSet::default();
    let mut queue: Vec<Vec<i64>> = (1..=n).map(|i| RootVector::simple(n, i).0).collect();
    for r in &queue {
        seen.insert(r.clone());
    }
    let mut head = 0;
    while head < queue.len() {
        let r = queue[head].clone();
        head += 1;
        for k in 0..n {
            let mut s = r.clone();
            c.reflect_root_in_place(k, &mut s);
            if s.iter().all(|&x| x >= 0) && seen.insert(s.clone()) {
                queue.push(s);
            }
        }
    }
    let mut out: Vec<RootVector> = queue.into_iter().map(RootVector).collect();
    out.sort_by(|a, b| {
        let ha: i64 = a.0.iter().sum();
        let hb: i64 = b.0.iter().sum();
        ha.cmp(&hb).then_with(|| a.cmp(b))
    });
    out
}

// s_{s_k(beta)} = s_k s_beta s_k, starting from the simple reflections.
fn reflection_words(c: &CartanMatrix, positive: &[RootVector]) -> Vec<Vec<usize>> {
    let n = c.rank();
    let mut words: FxHashMap<Vec<i64>, Vec<usize>> = FxHashMap::default();
    let mut queue: Vec<Vec<i64>> = Vec::new();
    for i in 1..=n {
        let r = RootVector::simple(n, i).0;
        words.insert(r.clone(), vec![i]);
        queue.push(r);
    }
    let mut head = 0;
    while head < queue.len() {
        let r = queue[head].clone();
        head += 1;
        for k in 0..n {
            let mut s = r.clone();
            c.reflect_root_in_place(k, &mut s);
            if s.iter().all(|&x| x >= 0) && !words.contains_key(&s) {
                let mut w = Vec::with_capacity(words[&r].len() + 2);
                w.push(k + 1);
                w.extend_from_slice(&words[&r]);
                w.push(k + 1);
                words.insert(s.clone(), w);
                queue.push(s);
            }
        }
    }
    positive.iter().map(|r| words.remove(&r.0).expect("same closure")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> LieType {
        s.parse().unwrap()
    }

    #[test]
    fn parses_types() {
        assert_eq!(t("A3"), LieType::new(Family::A, 3).unwrap());
        assert_eq!(t("f4").to_string(), "F4");
        assert!("E9".parse::<LieType>().is_err());
        assert!("B1".parse::<LieType>().is_err());
        assert!("G3".parse::<LieType>().is_err());
        assert!("X2".parse::<LieType>().is_err());
        assert!("A".parse::<LieType>().is_err());
        assert!("A-1".parse::<LieType>().is_err());
    }

    #[test]
    fn small_cartan_matrices() {
        assert_eq!(t("A1").cartan_matrix().rows(), vec![vec![2]]);
        assert_eq!(t("A2").cartan_matrix().rows(), vec![vec![2, -1], vec![-1, 2]]);
        assert_eq!(t("G2").cartan_matrix().rows(), vec![vec![2, -1], vec![-3, 2]]);
        assert_eq!(
            t("F4").cartan_matrix().rows(),
            vec![vec![2, -1, 0, 0], vec![-1, 2, -2, 0], vec![0, -1, 2, -1], vec![0, 0, -1, 2]]
        );
        let b3 = t("B3").cartan_matrix();
        assert_eq!((b3.get(1, 2), b3.get(2, 1)), (-2, -1));
        let c3 = t("C3").cartan_matrix();
        assert_eq!((c3.get(1, 2), c3.get(2, 1)), (-1, -2));
        let d4 = t("D4").cartan_matrix();
        assert_eq!(d4.get(1, 3), -1);
        assert_eq!(d4.get(2, 3), 0);
        let e6 = t("E6").cartan_matrix();
        assert_eq!(e6.get(1, 3), -1);
        assert_eq!(e6.get(0, 2), -1);
        assert_eq!(e6.get(1, 2), 0);
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(CartanMatrix::from_rows(vec![vec![2, -1], vec![0, 2]]).is_err());
        assert!(CartanMatrix::from_rows(vec![vec![2, -4], vec![-1, 2]]).is_err());
        assert!(CartanMatrix::from_rows(vec![vec![1]]).is_err());
        assert!(CartanMatrix::from_rows(vec![vec![2, 0]]).is_err());
    }

    #[test]
    fn weight_reflections() {
        let a2 = t("A2").cartan_matrix();
        let w = a2.reflect_weight(1, &WeightVector(vec![1, 0])).unwrap();
        assert_eq!(w.0, vec![-1, 1]);
        let w = a2.reflect_weight(2, &WeightVector(vec![0, 1])).unwrap();
        assert_eq!(w.0, vec![1, -1]);
        let fixed = WeightVector(vec![0, 5]);
        assert_eq!(a2.reflect_weight(1, &fixed).unwrap(), fixed);
        assert!(a2.reflect_weight(3, &fixed).is_err());
        assert!(a2.reflect_weight(0, &fixed).is_err());
    }

    #[test]
    fn root_reflections() {
        let a2 = t("A2").cartan_matrix();
        assert_eq!(a2.reflect_root(1, &RootVector(vec![1, 0])).unwrap().0, vec![-1, 0]);
        assert_eq!(a2.reflect_root(1, &RootVector(vec![0, 1])).unwrap().0, vec![1, 1]);
        assert_eq!(a2.reflect_root(2, &RootVector(vec![1, 1])).unwrap().0, vec![1, 0]);
    }

    #[test]
    fn root_counts() {
        for (s, n) in [("A2", 6), ("B2", 8), ("G2", 12), ("A3", 12), ("F4", 48), ("E6", 72), ("E7", 126), ("E8", 240), ("D4", 24)] {
            assert_eq!(RootSystem::of(t(s)).len(), n, "{s}");
        }
    }

    #[test]
    fn reflections_permute_positive_roots() {
        for s in ["A3", "B3", "C3", "D4", "G2", "F4", "B4", "C4"] {
            let rs = RootSystem::of(t(s));
            let c = rs.cartan();
            let pos: FxHashSet<_> = rs.positive_roots().iter().cloned().collect();
            for i in 1..=c.rank() {
                let simple = RootVector::simple(c.rank(), i);
                for r in rs.positive_roots() {
                    let img = c.reflect_root(i, r).unwrap();
                    if *r == simple {
                        assert!(img.is_negative());
                    } else {
                        assert!(pos.contains(&img), "{s}: {r:?} -> {img:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn reflections_are_involutions() {
        for s in ["A3", "B3", "C3", "D5", "G2", "F4", "E6"] {
            let c = t(s).cartan_matrix();
            let n = c.rank();
            let v = WeightVector((0..n as i64).map(|k| 3 * k - 4).collect());
            let r = RootVector((0..n as i64).map(|k| k * k - 2).collect());
            for i in 1..=n {
                let back = c.reflect_weight(i, &c.reflect_weight(i, &v).unwrap()).unwrap();
                assert_eq!(back, v);
                let back = c.reflect_root(i, &c.reflect_root(i, &r).unwrap()).unwrap();
                assert_eq!(back, r);
            }
        }
    }
}
