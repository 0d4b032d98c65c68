//! Weyl group elements, reduced words and minimal coset representatives.
//!
//! An element `w` is stored through `w(rho)` in fundamental-weight
//! coordinates. The stabiliser of `rho` is trivial, so this is a faithful
//! canonical form; left descents are exactly the negative coordinates.

use std::fmt;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::cartan::{CartanMatrix, LieType, RootSystem, WeightVector};
use crate::error::{Error, Result};

/// A sequence of one-based simple reflection indices.
pub type ReducedWord = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    lie: LieType,
    rho: Vec<i64>,
}

impl WeylElement {
    pub fn identity(lie: LieType) -> Self {
        WeylElement { lie, rho: vec![1; lie.rank()] }
    }

    pub fn simple(lie: LieType, i: usize) -> Result<Self> {
        Self::from_word(lie, &[i])
    }

    /// Longest element; it sends `rho` to `-rho`.
    pub fn longest(lie: LieType) -> Self {
        WeylElement { lie, rho: vec![-1; lie.rank()] }
    }

    /// Product `s_{i_1} ... s_{i_m}`; the word need not be reduced.
    pub fn from_word(lie: LieType, word: &[usize]) -> Result<Self> {
        let c = lie.cartan_matrix();
        let n = lie.rank();
        let mut v = vec![1i64; n];
        for &i in word.iter().rev() {
            if i == 0 || i > n {
                return Err(Error::IndexOutOfRange { index: i, rank: n });
            }
            c.reflect_weight_in_place(i - 1, &mut v);
        }
        Ok(WeylElement { lie, rho: v })
    }

    /// Rebuilds an element from its `rho` image; checks regularity by descent.
    pub fn from_rho_image(lie: LieType, rho: Vec<i64>) -> Result<Self> {
        if rho.len() != lie.rank() {
            return Err(Error::InvalidCartan(format!(
                "weight of length {} for rank {}",
                rho.len(),
                lie.rank()
            )));
        }
        let c = lie.cartan_matrix();
        let mut v = rho.clone();
        let bound = RootSystem::of(lie).positive_roots().len();
        for _ in 0..=bound {
            match v.iter().position(|&x| x < 0) {
                Some(k) => c.reflect_weight_in_place(k, &mut v),
                None => break,
            }
        }
        if v.iter().all(|&x| x == 1) {
            Ok(WeylElement { lie, rho })
        } else {
            Err(Error::Parse(format!("{rho:?} is not in the Weyl orbit of rho")))
        }
    }

    pub fn lie_type(&self) -> LieType {
        self.lie
    }

    pub fn rho_image(&self) -> &[i64] {
        &self.rho
    }

    /// Images of the fundamental weights, the column form of the element.
    pub fn weight_images(&self) -> Vec<WeightVector> {
        let c = self.lie.cartan_matrix();
        let word = self.minimized_word();
        (1..=self.lie.rank())
            .map(|k| {
                let mut v = WeightVector::fundamental(self.lie.rank(), k).0;
                for &i in word.iter().rev() {
                    c.reflect_weight_in_place(i - 1, &mut v);
                }
                WeightVector(v)
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rho.iter().all(|&x| x == 1)
    }

    /// Number of positive coroots made negative by pairing with `w(rho)`.
    pub fn length(&self) -> usize {
        let rs = RootSystem::of(self.lie);
        rs.positive_coroots()
            .iter()
            .filter(|b| b.0.iter().zip(&self.rho).map(|(x, y)| x * y).sum::<i64>() < 0)
            .count()
    }

    /// One-based indices `i` with `l(s_i w) < l(w)`.
    pub fn left_descents(&self) -> Vec<usize> {
        (0..self.rho.len()).filter(|&k| self.rho[k] < 0).map(|k| k + 1).collect()
    }

    /// One-based indices `j` with `l(w s_j) < l(w)`.
    pub fn right_descents(&self) -> Vec<usize> {
        self.inverse().left_descents()
    }

    /// `s_i w`.
    pub fn left_multiply(&self, i: usize) -> Result<Self> {
        let c = self.lie.cartan_matrix();
        let v = c.reflect_weight(i, &WeightVector(self.rho.clone()))?;
        Ok(WeylElement { lie: self.lie, rho: v.0 })
    }

    /// A reduced word obtained by repeatedly stripping a left descent.
    pub fn reduced_word(&self) -> ReducedWord {
        self.minimized_word()
    }

    /// The lexicographically least reduced word: strip the smallest left descent each time.
    pub fn minimized_word(&self) -> ReducedWord {
        let c = self.lie.cartan_matrix();
        let mut v = self.rho.clone();
        let mut word = Vec::new();
        while let Some(k) = v.iter().position(|&x| x < 0) {
            word.push(k + 1);
            c.reflect_weight_in_place(k, &mut v);
        }
        word
    }

    /// Every reduced word; exponential, meant for small elements.
    pub fn all_reduced_words(&self) -> Vec<ReducedWord> {
        let c = self.lie.cartan_matrix();
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        all_words_rec(&c, &self.rho, &mut prefix, &mut out);
        out
    }

    pub fn inverse(&self) -> Self {
        let mut w = self.minimized_word();
        w.reverse();
        WeylElement::from_word(self.lie, &w).expect("letters in range")
    }

    /// Group product `self * other`.
    pub fn multiply(&self, other: &WeylElement) -> Result<Self> {
        if self.lie != other.lie {
            return Err(Error::TypeMismatch);
        }
        let c = self.lie.cartan_matrix();
        let mut v = other.rho.clone();
        for &i in self.minimized_word().iter().rev() {
            c.reflect_weight_in_place(i - 1, &mut v);
        }
        Ok(WeylElement { lie: self.lie, rho: v })
    }

    /// Acts on a weight.
    pub fn apply(&self, v: &WeightVector) -> WeightVector {
        let c = self.lie.cartan_matrix();
        let mut out = v.0.clone();
        for &i in self.minimized_word().iter().rev() {
            c.reflect_weight_in_place(i - 1, &mut out);
        }
        WeightVector(out)
    }

    /// True iff `l(w s_j) > l(w)` for every one-based `j` outside `k`.
    pub fn is_minimal_rep(&self, k: &[usize]) -> bool {
        let descents = self.right_descents();
        descents.iter().all(|j| k.contains(j))
    }
}

fn all_words_rec(c: &CartanMatrix, v: &[i64], prefix: &mut Vec<usize>, out: &mut Vec<ReducedWord>) {
    let mut any = false;
    for k in 0..v.len() {
        if v[k] < 0 {
            any = true;
            let mut u = v.to_vec();
            c.reflect_weight_in_place(k, &mut u);
            prefix.push(k + 1);
            all_words_rec(c, &u, prefix, out);
            prefix.pop();
        }
    }
    if !any {
        out.push(prefix.clone());
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.minimized_word();
        if w.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = w.iter().map(|i| i.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

pub fn length(w: &WeylElement) -> usize {
    w.length()
}

pub fn reduced_word(w: &WeylElement) -> ReducedWord {
    w.reduced_word()
}

pub fn minimized_word(w: &WeylElement) -> ReducedWord {
    w.minimized_word()
}

pub fn multiply(u: &WeylElement, v: &WeylElement) -> Result<WeylElement> {
    u.multiply(v)
}

pub fn is_minimal_rep(w: &WeylElement, k: &[usize]) -> bool {
    w.is_minimal_rep(k)
}

/// A Schubert class `s_{r,i}`: length `r`, one-based position `i` within its level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, serde::Deserialize)]
pub struct SchubertClass {
    pub r: usize,
    pub i: usize,
}

impl SchubertClass {
    pub fn new(r: usize, i: usize) -> Self {
        SchubertClass { r, i }
    }
}

impl fmt::Display for SchubertClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}.{}", self.r, self.i)
    }
}

pub const DEFAULT_ELEMENT_CAP: usize = 5_000_000;

#[derive(Debug, Clone, Copy)]
pub struct EnumerateOptions {
    /// Abort once the table would exceed this many elements.
    pub cap: usize,
    /// Stop after this length; the table is then marked truncated.
    pub max_length: Option<usize>,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions { cap: DEFAULT_ELEMENT_CAP, max_length: None }
    }
}

/// Minimal coset representatives `W^K` for `W(P) = <s_j : j not in K>`,
/// grouped by length and ordered lexicographically by minimized word.
///
/// Each element is the orbit point `w(lambda_K)` with
/// `lambda_K = sum_{k in K} omega_k`; the minimized word is recovered
/// from a parent pointer and the first letter.
#[derive(Debug, Clone)]
pub struct CosetTable {
    lie: LieType,
    cartan: CartanMatrix,
    k: Vec<usize>,
    n: usize,
    points: Vec<i16>,
    parent: Vec<u32>,
    first: Vec<u8>,
    level_start: Vec<usize>,
    by_point: Vec<u32>,
    truncated: bool,
}

impl CosetTable {
    pub fn build(lie: LieType, k: &[usize], opts: &EnumerateOptions) -> Result<Self> {
        let n = lie.rank();
        let mut ks: Vec<usize> = k.to_vec();
        ks.sort_unstable();
        ks.dedup();
        for &i in &ks {
            if i == 0 || i > n {
                return Err(Error::IndexOutOfRange { index: i, rank: n });
            }
        }
        let cartan = lie.cartan_matrix();
        let mut lambda = vec![0i16; n];
        for &i in &ks {
            lambda[i - 1] = 1;
        }
        let mut table = CosetTable {
            lie,
            cartan,
            k: ks,
            n,
            points: lambda,
            parent: vec![u32::MAX],
            first: vec![u8::MAX],
            level_start: vec![0, 1],
            by_point: vec![0],
            truncated: false,
        };
        if opts.cap == 0 {
            return Err(Error::ElementCap { cap: 0 });
        }
        loop {
            let r = table.level_start.len() - 2;
            if let Some(m) = opts.max_length {
                if r >= m {
                    table.truncated = table.has_successors(r);
                    break;
                }
            }
            if !table.extend_level(opts.cap)? {
                break;
            }
        }
        Ok(table)
    }

    fn has_successors(&self, r: usize) -> bool {
        (self.level_start[r]..self.level_start[r + 1]).any(|g| self.point_of(g).iter().any(|&x| x > 0))
    }

    /// Appends level `r+1`. Returns false when level `r` was the top.
    fn extend_level(&mut self, cap: usize) -> Result<bool> {
        let n = self.n;
        let r = self.level_start.len() - 2;
        let (lo, hi) = (self.level_start[r], self.level_start[r + 1]);
        // (point, letter, parent); sorting makes the first entry per point the
        // one with smallest first letter, then smallest parent.
        let mut cand: Vec<(Vec<i16>, u8, u32)> = Vec::new();
        for g in lo..hi {
            let p = self.point_of(g);
            for k in 0..n {
                if p[k] > 0 {
                    let mut q = p.to_vec();
                    self.cartan.reflect_small_in_place(k, &mut q);
                    cand.push((q, k as u8, g as u32));
                }
            }
        }
        if cand.is_empty() {
            return Ok(false);
        }
        cand.sort_unstable();
        cand.dedup_by(|b, a| a.0 == b.0);
        if self.parent.len() + cand.len() > cap {
            return Err(Error::ElementCap { cap });
        }
        cand.sort_unstable_by_key(|c| (c.1, c.2));
        let base = self.parent.len();
        for (q, letter, par) in &cand {
            self.points.extend_from_slice(q);
            self.parent.push(*par);
            self.first.push(*letter);
        }
        let mut order: Vec<u32> = (base as u32..(base + cand.len()) as u32).collect();
        order.sort_unstable_by(|&a, &b| self.point_of(a as usize).cmp(self.point_of(b as usize)));
        self.by_point.extend(order);
        self.level_start.push(self.parent.len());
        Ok(true)
    }

    #[inline]
    fn point_of(&self, g: usize) -> &[i16] {
        &self.points[g * self.n..(g + 1) * self.n]
    }

    pub fn lie_type(&self) -> LieType {
        self.lie
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.cartan
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    /// One-based indices in `K`.
    pub fn k(&self) -> &[usize] {
        &self.k
    }

    pub fn is_full_flag(&self) -> bool {
        self.k.len() == self.n
    }

    /// Whether enumeration stopped at a length cap before reaching the top.
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Highest length present.
    pub fn top(&self) -> usize {
        self.level_start.len() - 2
    }

    /// `beta(r) = |W^r(P,G)|`, zero beyond the table.
    pub fn beta(&self, r: usize) -> usize {
        if r + 1 < self.level_start.len() {
            self.level_start[r + 1] - self.level_start[r]
        } else {
            0
        }
    }

    pub fn betas(&self) -> Vec<usize> {
        (0..=self.top()).map(|r| self.beta(r)).collect()
    }

    pub fn classes(&self, r: usize) -> impl Iterator<Item = SchubertClass> {
        (1..=self.beta(r)).map(move |i| SchubertClass { r, i })
    }

    pub fn check(&self, c: SchubertClass) -> Result<()> {
        if c.i == 0 || c.i > self.beta(c.r) {
            Err(Error::UnknownClass(c.to_string()))
        } else {
            Ok(())
        }
    }

    /// Position in the flat table (level-major).
    pub fn global_index(&self, c: SchubertClass) -> usize {
        self.level_start[c.r] + c.i - 1
    }

    pub fn class_at(&self, g: usize) -> SchubertClass {
        let r = self.level_start.partition_point(|&s| s <= g) - 1;
        SchubertClass { r, i: g - self.level_start[r] + 1 }
    }

    /// `w(lambda_K)` for the class.
    pub fn point(&self, c: SchubertClass) -> &[i16] {
        self.point_of(self.global_index(c))
    }

    pub fn lambda(&self) -> &[i16] {
        self.point_of(0)
    }

    /// Minimized word, one-based letters.
    pub fn word(&self, c: SchubertClass) -> ReducedWord {
        self.word_at(self.global_index(c))
    }

    fn word_at(&self, mut g: usize) -> ReducedWord {
        let mut w = Vec::new();
        while g != 0 {
            w.push(self.first[g] as usize + 1);
            g = self.parent[g] as usize;
        }
        w
    }

    pub fn element(&self, c: SchubertClass) -> WeylElement {
        WeylElement::from_word(self.lie, &self.word(c)).expect("stored words are valid")
    }

    /// Bruhat covers of `c` inside the table: classes of length `c.r + 1`
    /// whose point is `s_beta` of the point of `c` for a positive root `beta`.
    pub fn covers(&self, c: SchubertClass) -> Vec<SchubertClass> {
        let rs = RootSystem::of(self.lie);
        let p = self.point(c);
        let mut out: Vec<SchubertClass> = rs
            .reflection_words()
            .iter()
            .filter_map(|w| {
                let mut q = p.to_vec();
                for &i in w {
                    self.cartan.reflect_small_in_place(i - 1, &mut q);
                }
                self.find_point(&q).filter(|d| d.r == c.r + 1)
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Locates the class with the given orbit point.
    pub fn find_point(&self, p: &[i16]) -> Option<SchubertClass> {
        if p.len() != self.n {
            return None;
        }
        let r = self.orbit_length(p)?;
        if r > self.top() {
            return None;
        }
        let slice = &self.by_point[self.level_start[r]..self.level_start[r + 1]];
        slice
            .binary_search_by(|&g| self.point_of(g as usize).cmp(p))
            .ok()
            .map(|pos| self.class_at(slice[pos] as usize))
    }

    /// Length of the representative with orbit point `p`, by descent.
    fn orbit_length(&self, p: &[i16]) -> Option<usize> {
        let mut q = p.to_vec();
        let mut r = 0;
        let limit = 4 * RootSystem::of(self.lie).positive_roots().len() + 4;
        while let Some(k) = q.iter().position(|&x| x < 0) {
            self.cartan.reflect_small_in_place(k, &mut q);
            r += 1;
            if r > limit {
                return None;
            }
        }
        if q == self.lambda() {
            Some(r)
        } else {
            None
        }
    }

    /// Resolves an arbitrary word to its coset's class; errors if the word
    /// is not a reduced word of a minimal representative.
    pub fn find_word(&self, word: &[usize]) -> Result<SchubertClass> {
        let mut q = self.lambda().to_vec();
        for &i in word.iter().rev() {
            if i == 0 || i > self.n {
                return Err(Error::IndexOutOfRange { index: i, rank: self.n });
            }
            if q[i - 1] <= 0 {
                return Err(Error::UnknownClass(format!(
                    "{word:?} is not a reduced word of a minimal coset representative"
                )));
            }
            self.cartan.reflect_small_in_place(i - 1, &mut q);
        }
        self.find_point(&q).ok_or_else(|| Error::UnknownClass(format!("{word:?} lies beyond the enumerated lengths")))
    }

    /// Class of the coset `w W(P)`, whatever representative `w` is.
    pub fn find_coset(&self, w: &WeylElement) -> Option<SchubertClass> {
        let v = w.apply(&WeightVector(self.lambda().iter().map(|&x| x as i64).collect()));
        let p: Vec<i16> = v.0.iter().map(|&x| x as i16).collect();
        self.find_point(&p)
    }

    /// JSON listing of every `w_{r,i}` with its minimized word.
    pub fn export_json(&self) -> String {
        #[derive(Serialize)]
        struct Entry {
            r: usize,
            i: usize,
            word: ReducedWord,
        }
        let entries: Vec<Entry> = (0..self.len())
            .map(|g| {
                let c = self.class_at(g);
                Entry { r: c.r, i: c.i, word: self.word_at(g) }
            })
            .collect();
        serde_json::to_string(&entries).expect("plain data serializes")
    }

    /// Cache file name keyed by type, `K` and length cap.
    pub fn cache_file_name(lie: LieType, k: &[usize], max_length: Option<usize>) -> String {
        let mut ks: Vec<usize> = k.to_vec();
        ks.sort_unstable();
        ks.dedup();
        let kpart: Vec<String> = ks.iter().map(|x| x.to_string()).collect();
        match max_length {
            Some(m) => format!("{lie}_K{}_L{m}.sct", kpart.join("-")),
            None => format!("{lie}_K{}.sct", kpart.join("-")),
        }
    }

    pub fn write_cache<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(CACHE_MAGIC)?;
        out.write_all(&CACHE_VERSION.to_le_bytes())?;
        let name = self.lie.to_string();
        out.write_all(&[name.len() as u8])?;
        out.write_all(name.as_bytes())?;
        out.write_all(&[self.k.len() as u8])?;
        for &k in &self.k {
            out.write_all(&[k as u8])?;
        }
        out.write_all(&[self.truncated as u8])?;
        out.write_all(&(self.level_start.len() as u64).to_le_bytes())?;
        for &s in &self.level_start {
            out.write_all(&(s as u64).to_le_bytes())?;
        }
        let mut buf = Vec::with_capacity(self.len() * 5);
        for g in 0..self.len() {
            buf.extend_from_slice(&self.parent[g].to_le_bytes());
            buf.push(self.first[g]);
        }
        out.write_all(&buf)?;
        Ok(())
    }

    pub fn read_cache<R: Read>(mut input: R) -> Result<Self> {
        let bad = |m: &str| Error::Cache(m.to_string());
        let mut magic = [0u8; 8];
        input.read_exact(&mut magic)?;
        if &magic != CACHE_MAGIC {
            return Err(bad("bad magic"));
        }
        let mut v = [0u8; 4];
        input.read_exact(&mut v)?;
        if u32::from_le_bytes(v) != CACHE_VERSION {
            return Err(bad("unsupported version"));
        }
        let mut b = [0u8; 1];
        input.read_exact(&mut b)?;
        let mut name = vec![0u8; b[0] as usize];
        input.read_exact(&mut name)?;
        let lie: LieType = String::from_utf8(name).map_err(|_| bad("bad type name"))?.parse()?;
        input.read_exact(&mut b)?;
        let mut kb = vec![0u8; b[0] as usize];
        input.read_exact(&mut kb)?;
        let k: Vec<usize> = kb.iter().map(|&x| x as usize).collect();
        input.read_exact(&mut b)?;
        let truncated = b[0] != 0;
        let mut u = [0u8; 8];
        input.read_exact(&mut u)?;
        let nl = u64::from_le_bytes(u) as usize;
        if nl < 2 {
            return Err(bad("too few levels"));
        }
        let mut level_start = Vec::with_capacity(nl);
        for _ in 0..nl {
            input.read_exact(&mut u)?;
            level_start.push(u64::from_le_bytes(u) as usize);
        }
        let total = *level_start.last().unwrap();
        let mut buf = vec![0u8; total * 5];
        input.read_exact(&mut buf)?;
        let n = lie.rank();
        let cartan = lie.cartan_matrix();
        let mut lambda = vec![0i16; n];
        for &i in &k {
            if i == 0 || i > n {
                return Err(bad("K out of range"));
            }
            lambda[i - 1] = 1;
        }
        let mut points = Vec::with_capacity(total * n);
        points.extend_from_slice(&lambda);
        let mut parent = vec![u32::MAX];
        let mut first = vec![u8::MAX];
        for g in 1..total {
            let par = u32::from_le_bytes(buf[g * 5..g * 5 + 4].try_into().unwrap());
            let letter = buf[g * 5 + 4];
            if par as usize >= g || letter as usize >= n {
                return Err(bad("corrupt parent array"));
            }
            let mut q = points[par as usize * n..(par as usize + 1) * n].to_vec();
            cartan.reflect_small_in_place(letter as usize, &mut q);
            points.extend_from_slice(&q);
            parent.push(par);
            first.push(letter);
        }
        let mut table = CosetTable {
            lie,
            cartan,
            k,
            n,
            points,
            parent,
            first,
            level_start,
            by_point: Vec::new(),
            truncated,
        };
        let mut by_point = Vec::with_capacity(total);
        for r in 0..table.level_start.len() - 1 {
            let mut order: Vec<u32> = (table.level_start[r] as u32..table.level_start[r + 1] as u32).collect();
            order.sort_unstable_by(|&a, &b| table.point_of(a as usize).cmp(table.point_of(b as usize)));
            by_point.extend(order);
        }
        table.by_point = by_point;
        Ok(table)
    }

    /// Loads `(lie, K, max_length)` from `dir` if cached, otherwise builds and stores it.
    pub fn load_or_build(dir: Option<&Path>, lie: LieType, k: &[usize], opts: &EnumerateOptions) -> Result<Self> {
        let Some(dir) = dir else {
            return Self::build(lie, k, opts);
        };
        let path: PathBuf = dir.join(Self::cache_file_name(lie, k, opts.max_length));
        if let Ok(f) = std::fs::File::open(&path) {
            if let Ok(t) = Self::read_cache(std::io::BufReader::new(f)) {
                if t.len() <= opts.cap {
                    return Ok(t);
                }
                return Err(Error::ElementCap { cap: opts.cap });
            }
        }
        let t = Self::build(lie, k, opts)?;
        std::fs::create_dir_all(dir)?;
        let tmp = path.with_extension("tmp");
        {
            let f = std::fs::File::create(&tmp)?;
            let mut w = std::io::BufWriter::new(f);
            t.write_cache(&mut w)?;
            w.flush()?;
        }
        std::fs::rename(&tmp, &path)?;
        Ok(t)
    }
}

const CACHE_MAGIC: &[u8; 8] = b"SCHUBCT\0";
const CACHE_VERSION: u32 = 1;

pub fn enumerate_cosets(lie: LieType, k: &[usize]) -> Result<CosetTable> {
    CosetTable::build(lie, k, &EnumerateOptions::default())
}
