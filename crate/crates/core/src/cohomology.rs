//! Presentations of `H*(G/P)` by Schubert generators and relations.
//!
//! Degrees of polynomial variables are cohomological (`deg w_i = 2`); the
//! `m` arguments below are half-degrees, i.e. Schubert lengths.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::json;

use crate::cartan::{LieType, WeightVector};
use crate::characteristics::{FlatExpansion, ProductEngine};
use crate::error::{Error, Result};
use crate::linalg::{
    cokernel_structure, diagonalize_with_unit_minor, hermite, kernel_basis, smith, solve_left, AbelianGroupStructure,
    IntegerMatrix,
};
use crate::poly::{monomial_basis, IntPolynomial, Monomial, VarSet};
use crate::weyl::{CosetTable, ReducedWord, SchubertClass};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub class: SchubertClass,
    /// Cohomological degree `2r`.
    pub degree: u32,
}

/// Named Schubert classes, ascending by degree, with a matching variable set.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    gens: Vec<Generator>,
    vars: Arc<VarSet>,
}

impl GeneratorSet {
    pub fn new<S: Into<String>>(table: &CosetTable, list: impl IntoIterator<Item = (S, SchubertClass)>) -> Result<Self> {
        let mut gens = Vec::new();
        for (name, class) in list {
            table.check(class)?;
            if class.r == 0 {
                return Err(Error::DegreeMismatch("a generator cannot be the unit class".into()));
            }
            gens.push(Generator { name: name.into(), class, degree: 2 * class.r as u32 });
        }
        gens.sort_by_key(|g| g.degree);
        let vars = VarSet::new(gens.iter().map(|g| (g.name.clone(), g.degree)))?;
        Ok(GeneratorSet { gens, vars })
    }

    /// Generators given by minimized words, e.g. `("y3", [3, 2, 1])`.
    pub fn from_words(table: &CosetTable, list: &[(&str, &[usize])]) -> Result<Self> {
        let resolved: Vec<(String, SchubertClass)> = list
            .iter()
            .map(|(n, w)| Ok((n.to_string(), table.find_word(w)?)))
            .collect::<Result<_>>()?;
        Self::new(table, resolved)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn classes(&self) -> Vec<SchubertClass> {
        self.gens.iter().map(|g| g.class).collect()
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&Generator> {
        self.gens.iter().find(|g| g.name == name)
    }
}

/// Schubert expansions of all monomials of one degree.
#[derive(Debug, Clone)]
pub struct StructureMatrixBundle {
    /// Half-degree `m`.
    pub degree: usize,
    pub vars: Arc<VarSet>,
    /// Monomials of degree `2m`, ascending lexicographically.
    pub basis: Vec<Monomial>,
    /// `basis.len() x beta(m)`; row `a` expands `basis[a]`.
    pub matrix: IntegerMatrix,
}

impl StructureMatrixBundle {
    pub fn row_polynomial(&self, coords: &[BigInt]) -> IntPolynomial {
        IntPolynomial::from_coordinates(&self.vars, &self.basis, coords)
    }

    pub fn is_surjective(&self) -> bool {
        cokernel_structure(&self.matrix).is_trivial()
    }
}

/// Expansion of `p`, whose variables are matched to `gens` by name.
pub fn expand_in_generators(engine: &ProductEngine<'_>, gens: &GeneratorSet, p: &IntPolynomial) -> Result<FlatExpansion> {
    let q = p.embed_by_name(gens.vars())?;
    engine.polynomial(&q, &gens.classes())
}

fn level_row(table: &CosetTable, e: &FlatExpansion, m: usize) -> Result<Vec<BigInt>> {
    let beta = table.beta(m);
    let mut row = vec![BigInt::zero(); beta];
    if beta == 0 {
        return Ok(row);
    }
    let offset = table.global_index(SchubertClass::new(m, 1));
    for (&g, v) in e {
        if g < offset || g >= offset + beta {
            return Err(Error::DegreeMismatch(format!("expansion has terms outside length {m}")));
        }
        row[g - offset] = v.clone();
    }
    Ok(row)
}

pub fn structure_matrix(engine: &ProductEngine<'_>, gens: &GeneratorSet, m: usize) -> Result<StructureMatrixBundle> {
    let table = engine.table();
    let basis = monomial_basis(gens.vars(), 2 * m as u32);
    let classes = gens.classes();
    let rows: Vec<Vec<BigInt>> = basis
        .par_iter()
        .map(|mono| {
            let e = engine.monomial(&classes, mono.exponents())?;
            level_row(table, &e, m)
        })
        .collect::<Result<_>>()?;
    let matrix = IntegerMatrix::from_rows_with_cols(&rows, table.beta(m))?;
    Ok(StructureMatrixBundle { degree: m, vars: gens.vars().clone(), basis, matrix })
}

fn generator_name(table: &CosetTable, c: SchubertClass, taken: &[(String, SchubertClass)]) -> String {
    let base = if c.r == 1 { format!("w{}", table.word(c)[0]) } else { format!("y{}", c.r) };
    let mut name = base.clone();
    let mut k = 2;
    while taken.iter().any(|(n, _)| *n == name) {
        name = format!("{base}_{k}");
        k += 1;
    }
    name
}

/// Lexicographically first `size`-subset `s` of columns with `coker([m; e_s]) = 0`.
fn first_completing_subset(m: &IntegerMatrix, size: usize) -> Option<Vec<usize>> {
    let beta = m.ncols();
    let mut budget: usize = 100_000;
    fn rec(
        m: &IntegerMatrix,
        start: usize,
        size: usize,
        chosen: &mut Vec<usize>,
        budget: &mut usize,
    ) -> bool {
        if chosen.len() == size {
            let beta = m.ncols();
            let rows: Vec<Vec<BigInt>> = chosen
                .iter()
                .map(|&j| (0..beta).map(|k| if k == j { BigInt::one() } else { BigInt::zero() }).collect())
                .collect();
            let extra = IntegerMatrix::from_rows_with_cols(&rows, beta).expect("square rows");
            return cokernel_structure(&m.stack(&extra).expect("same width")).is_trivial();
        }
        for j in start..m.ncols() {
            if *budget == 0 || m.ncols() - j < size - chosen.len() {
                return false;
            }
            *budget -= 1;
            chosen.push(j);
            if rec(m, j + 1, size, chosen, budget) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    (size <= beta && rec(m, 0, size, &mut chosen, &mut budget)).then_some(chosen)
}

/// Minimal Schubert generators through length `top`.
pub fn minimal_generators(engine: &ProductEngine<'_>) -> Result<GeneratorSet> {
    minimal_generators_up_to(engine, engine.table().top())
}

/// Minimal Schubert generators of length at most `up_to`.
///
/// In each length the classes needed to span the cokernel of the decomposables
/// are taken as the lexicographically first sufficient subset of `W^m`.
pub fn minimal_generators_up_to(engine: &ProductEngine<'_>, up_to: usize) -> Result<GeneratorSet> {
    let table = engine.table();
    let up_to = up_to.min(table.top());
    let mut chosen: Vec<(String, SchubertClass)> = Vec::new();
    for m in 1..=up_to {
        if table.beta(m) == 0 {
            continue;
        }
        let gens = GeneratorSet::new(table, chosen.clone())?;
        let bundle = structure_matrix(engine, &gens, m)?;
        let coker = cokernel_structure(&bundle.matrix);
        let need = coker.free_rank + coker.torsion.len();
        if need == 0 {
            continue;
        }
        let pick = (need..=table.beta(m))
            .find_map(|s| first_completing_subset(&bundle.matrix, s))
            .ok_or(Error::NotSurjective { degree: m })?;
        for j in pick {
            let c = SchubertClass::new(m, j + 1);
            let name = generator_name(table, c, &chosen);
            chosen.push((name, c));
        }
    }
    GeneratorSet::new(table, chosen)
}

/// Basis of the relations of degree `2m` among `gens`.
pub fn relation_kernel(engine: &ProductEngine<'_>, gens: &GeneratorSet, m: usize) -> Result<Vec<IntPolynomial>> {
    let bundle = structure_matrix(engine, gens, m)?;
    if !bundle.is_surjective() {
        return Err(Error::NotSurjective { degree: m });
    }
    Ok(kernel_basis(&bundle.matrix).iter().map(|v| bundle.row_polynomial(v)).collect())
}

/// Rows spanning the degree-`deg` part of the ideal generated by `relations`.
pub fn ideal_piece(vars: &Arc<VarSet>, relations: &[IntPolynomial], deg: u32) -> Result<(Vec<Monomial>, IntegerMatrix)> {
    let basis = monomial_basis(vars, deg);
    let mut rows = Vec::new();
    for f in relations {
        let Some(d) = f.degree() else { continue };
        if d > deg || !f.is_homogeneous() {
            if !f.is_homogeneous() {
                return Err(Error::DegreeMismatch("relation is not homogeneous".into()));
            }
            continue;
        }
        for mult in monomial_basis(vars, deg - d) {
            let g = f.mul(&IntPolynomial::monomial(vars, mult, 1))?;
            rows.push(g.coordinates(&basis)?);
        }
    }
    let m = IntegerMatrix::from_rows_with_cols(&rows, basis.len())?;
    Ok((basis, m))
}

/// Reduces `v` modulo the row lattice of a Hermite form.
fn reduce_mod(h: &IntegerMatrix, pivots: &[usize], v: &mut [BigInt]) {
    for (k, &c) in pivots.iter().enumerate() {
        let p = h.get(k, c);
        let q = v[c].div_floor(p);
        if q.is_zero() {
            continue;
        }
        for (j, x) in v.iter_mut().enumerate() {
            let t = h.get(k, j);
            if !t.is_zero() {
                *x -= &q * t;
            }
        }
    }
}

/// `Z[gens] / <relations>`.
#[derive(Debug, Clone)]
pub struct Presentation {
    pub vars: Arc<VarSet>,
    pub relations: Vec<IntPolynomial>,
    pub title: Option<String>,
}

impl Presentation {
    pub fn new(vars: &Arc<VarSet>, relations: Vec<IntPolynomial>) -> Result<Self> {
        let relations = relations.iter().map(|r| r.embed_by_name(vars)).collect::<Result<Vec<_>>>()?;
        Ok(Presentation { vars: vars.clone(), relations, title: None })
    }

    pub fn with_title(mut self, title: impl Into<String>) -> Self {
        self.title = Some(title.into());
        self
    }

    pub fn generators(&self) -> Vec<(String, u32)> {
        self.vars.names().iter().cloned().zip(self.vars.degrees().iter().copied()).collect()
    }

    /// Half-degrees of the relations, in order.
    pub fn relation_degrees(&self) -> Vec<u32> {
        self.relations.iter().map(|r| r.degree().unwrap_or(0) / 2).collect()
    }

    /// Labels `r{d}`, with `_2`, `_3`, ... on repeated degrees.
    pub fn relation_labels(&self) -> Vec<String> {
        let mut seen: BTreeMap<u32, usize> = BTreeMap::new();
        self.relation_degrees()
            .into_iter()
            .map(|d| {
                let k = seen.entry(d).or_insert(0);
                *k += 1;
                if *k == 1 {
                    format!("r{d}")
                } else {
                    format!("r{d}_{k}")
                }
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "title": self.title,
            "generators": self.generators().iter().map(|(n, d)| json!({"name": n, "degree": d})).collect::<Vec<_>>(),
            "relations": self.relations.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        })
    }

    /// Per-degree ideal comparison with `other`, through half-degree `up_to`.
    pub fn same_ideal_through(&self, other: &Presentation, up_to: u32) -> Result<bool> {
        let theirs = other.relations.iter().map(|r| r.embed_by_name(&self.vars)).collect::<Result<Vec<_>>>()?;
        for d in 1..=up_to {
            let (_, a) = ideal_piece(&self.vars, &self.relations, 2 * d)?;
            let (_, b) = ideal_piece(&self.vars, &theirs, 2 * d)?;
            let (ha, hb) = (hermite(&a), hermite(&b));
            let ra: Vec<_> = (0..ha.rank).map(|i| ha.h.row(i).to_vec()).collect();
            let rb: Vec<_> = (0..hb.rank).map(|i| hb.h.row(i).to_vec()).collect();
            if ra != rb {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = self.relation_labels();
        let lhs = self.title.clone().unwrap_or_else(|| "H*".into());
        writeln!(f, "{lhs} = Z[{}] / <{}>", self.vars.names().join(", "), labels.join(", "))?;
        for (l, r) in labels.iter().zip(&self.relations) {
            writeln!(f, "  {l} = {r}")?;
        }
        Ok(())
    }
}

/// Relations among `gens`, degree by degree through half-degree `up_to`.
///
/// A kernel element is kept only when it is not already in the span of
/// monomial multiples of relations kept earlier.
pub fn minimal_relations(engine: &ProductEngine<'_>, gens: &GeneratorSet, up_to: usize) -> Result<Presentation> {
    let vars = gens.vars();
    let mut kept: Vec<IntPolynomial> = Vec::new();
    for m in 1..=up_to {
        let bundle = structure_matrix(engine, gens, m)?;
        if !bundle.is_surjective() {
            return Err(Error::NotSurjective { degree: m });
        }
        let kernel = kernel_basis(&bundle.matrix);
        if kernel.is_empty() {
            continue;
        }
        let kmat = IntegerMatrix::from_rows_with_cols(&kernel, bundle.basis.len())?;
        let (_, ideal) = ideal_piece(vars, &kept, 2 * m as u32)?;
        let fresh: Vec<Vec<BigInt>> = if ideal.nrows() == 0 {
            kernel.clone()
        } else {
            let x: Vec<Vec<BigInt>> = (0..ideal.nrows())
                .map(|i| {
                    solve_left(&kmat, ideal.row(i)).ok_or_else(|| {
                        Error::DegreeMismatch(format!("a multiple of a relation fails to vanish in degree {m}"))
                    })
                })
                .collect::<Result<_>>()?;
            let xm = IntegerMatrix::from_rows_with_cols(&x, kernel.len())?;
            let s = smith(&xm);
            let q_inv = hermite(&s.q).u;
            let adapted = q_inv.mul(&kmat)?;
            let ih = hermite(&ideal);
            (0..kernel.len())
                .filter(|&i| i >= s.invariants.len() || !s.invariants[i].is_one())
                .map(|i| {
                    let mut v = adapted.row(i).to_vec();
                    reduce_mod(&ih.h, &ih.pivots, &mut v);
                    v
                })
                .collect()
        };
        for v in fresh {
            kept.push(bundle.row_polynomial(&v).normalize_sign());
        }
    }
    Presentation::new(vars, kept)
}

/// Polynomials `G_{m,j}` in `gens` with `G_{m,j} = s_{m,j}`, for `j = 1..beta(m)`.
pub fn giambelli(engine: &ProductEngine<'_>, gens: &GeneratorSet, m: usize) -> Result<Vec<IntPolynomial>> {
    let bundle = structure_matrix(engine, gens, m)?;
    let beta = bundle.matrix.ncols();
    if beta == 0 {
        return Ok(Vec::new());
    }
    match diagonalize_with_unit_minor(&bundle.matrix, m) {
        // Q is the identity here, so the first beta rows of P are the answer
        Ok(d) => Ok((0..beta).map(|j| bundle.row_polynomial(d.p.row(j))).collect()),
        Err(Error::NoUnitMinor { .. }) => giambelli_via_smith(&bundle, m),
        Err(e) => Err(e),
    }
}

// No single unit minor: P X Q = [I; 0] still gives the left inverse Q * P_top.
fn giambelli_via_smith(bundle: &StructureMatrixBundle, m: usize) -> Result<Vec<IntPolynomial>> {
    let beta = bundle.matrix.ncols();
    let s = smith(&bundle.matrix);
    if s.invariants.len() != beta || s.invariants.iter().any(|d| !d.is_one()) {
        return Err(Error::NotSurjective { degree: m });
    }
    let top = s.p.select_rows(&(0..beta).collect::<Vec<_>>());
    let left = s.q.mul(&top)?;
    Ok((0..beta).map(|j| bundle.row_polynomial(left.row(j))).collect())
}

/// Rewrites a length-`m` expansion as a polynomial in `gens`.
pub fn rewrite_in_generators(
    engine: &ProductEngine<'_>,
    gens: &GeneratorSet,
    m: usize,
    e: &FlatExpansion,
) -> Result<IntPolynomial> {
    let row = level_row(engine.table(), e, m)?;
    let g = giambelli(engine, gens, m)?;
    let mut out = IntPolynomial::zero(gens.vars());
    for (c, p) in row.iter().zip(&g) {
        if !c.is_zero() {
            out = out.add(&p.scale(c))?;
        }
    }
    Ok(out)
}

/// One step of the circle-bundle Gysin sequence.
#[derive(Debug, Clone)]
pub struct GysinStep {
    pub r: usize,
    /// `beta(r-1) x beta(r)`; row `j` expands `w * s_{r-1,j}`.
    pub a: IntegerMatrix,
    /// `H^{2r}(G/P^s)`.
    pub even: AbelianGroupStructure,
    /// `H^{2r-1}(G/P^s)`.
    pub odd: AbelianGroupStructure,
    /// Kernel of `a` in the basis `s_{r-1,j}`.
    pub odd_kernel: Vec<Vec<BigInt>>,
}

#[derive(Debug, Clone)]
pub struct GysinTable {
    pub weight: usize,
    pub steps: Vec<GysinStep>,
}

impl GysinTable {
    /// The group in cohomological `degree`, if it was computed.
    pub fn group(&self, degree: usize) -> Option<&AbelianGroupStructure> {
        let r = degree.div_ceil(2);
        let s = self.steps.iter().find(|s| s.r == r)?;
        Some(if degree.is_multiple_of(2) { &s.even } else { &s.odd })
    }

    /// Nonzero groups in positive degrees, ascending.
    pub fn nontrivial(&self) -> Vec<(usize, AbelianGroupStructure)> {
        let mut out = Vec::new();
        for s in &self.steps {
            if s.r > 0 && !s.odd.is_trivial() {
                out.push((2 * s.r - 1, s.odd.clone()));
            }
            if s.r > 0 && !s.even.is_trivial() {
                out.push((2 * s.r, s.even.clone()));
            }
        }
        out
    }

    /// Alternating sum of free ranks.
    pub fn euler_characteristic(&self) -> i64 {
        self.steps
            .iter()
            .map(|s| s.even.free_rank as i64 - if s.r > 0 { s.odd.free_rank as i64 } else { 0 })
            .sum()
    }
}

/// Gysin groups of `G/P^s` from cup product with `w_i` on `G/P`, through `r = up_to`.
pub fn gysin_analysis(engine: &ProductEngine<'_>, i: usize, up_to: usize) -> Result<GysinTable> {
    let table = engine.table();
    let omega = table.find_word(&[i])?;
    let last = up_to.min(table.top() + 1);
    let mut steps = vec![GysinStep {
        r: 0,
        a: IntegerMatrix::zeros(0, 1),
        even: AbelianGroupStructure::free(1),
        odd: AbelianGroupStructure::trivial(),
        odd_kernel: Vec::new(),
    }];
    for r in 1..=last {
        let prev: Vec<SchubertClass> = table.classes(r - 1).collect();
        let rows: Vec<Vec<BigInt>> = prev
            .iter()
            .map(|&c| level_row(table, engine.pair(c, omega)?.as_ref(), r))
            .collect::<Result<_>>()?;
        let a = IntegerMatrix::from_rows_with_cols(&rows, table.beta(r))?;
        let even = cokernel_structure(&a);
        let odd_kernel = kernel_basis(&a);
        let odd = AbelianGroupStructure::free(odd_kernel.len());
        steps.push(GysinStep { r, a, even, odd, odd_kernel });
    }
    Ok(GysinTable { weight: i, steps })
}

/// Variables `w1..wn` of degree 2.
pub fn weight_vars(n: usize) -> Arc<VarSet> {
    VarSet::new((1..=n).map(|i| (format!("w{i}"), 2))).expect("distinct names")
}

pub const DEFAULT_ORBIT_CAP: usize = 1_000_000;

/// Orbit of `w_seed` under the reflections `s_j`, `j` not in `k`, in breadth-first order.
pub fn weyl_orbit(lie: LieType, k: &[usize], seed: usize, cap: usize) -> Result<Vec<WeightVector>> {
    let n = lie.rank();
    let c = lie.cartan_matrix();
    if seed == 0 || seed > n {
        return Err(Error::IndexOutOfRange { index: seed, rank: n });
    }
    let start = WeightVector::fundamental(n, seed);
    let gens: Vec<usize> = (1..=n).filter(|j| !k.contains(j)).collect();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    seen.insert(start.0.clone());
    let mut out = vec![start];
    let mut head = 0;
    while head < out.len() {
        let v = out[head].clone();
        head += 1;
        for &j in &gens {
            let u = c.reflect_weight(j, &v)?;
            if seen.insert(u.0.clone()) {
                if out.len() >= cap {
                    return Err(Error::OrbitCap { cap });
                }
                out.push(u);
            }
        }
    }
    Ok(out)
}

/// The weight sets whose symmetric functions generate the invariants for `SU(n+1)` and `Sp(n)`.
pub fn classical_weight_set(lie: LieType) -> Result<Vec<WeightVector>> {
    let n = lie.rank();
    let unit = |i: usize| WeightVector::fundamental(n, i);
    let mut base = vec![unit(1)];
    for k in 2..=n {
        let mut v = unit(k);
        v.0[k - 2] -= 1;
        base.push(v);
    }
    match lie.family() {
        crate::cartan::Family::A => {
            let mut last = unit(n);
            last.0[n - 1] = -1;
            base.push(last);
            Ok(base)
        }
        crate::cartan::Family::C => {
            let neg: Vec<WeightVector> = base.iter().map(|v| WeightVector(v.0.iter().map(|x| -x).collect())).collect();
            Ok(base.into_iter().chain(neg).collect())
        }
        _ => Err(Error::InvalidLieType(format!("no classical weight set for {lie}"))),
    }
}

pub fn linear_form(vars: &Arc<VarSet>, v: &WeightVector) -> IntPolynomial {
    let mut p = IntPolynomial::zero(vars);
    for (i, &x) in v.0.iter().enumerate() {
        p.add_term(Monomial::var(vars.len(), i), BigInt::from(x));
    }
    p
}

/// `[e_1, ..., e_N]` of the linear forms, over `vars`.
pub fn elementary_symmetric(vars: &Arc<VarSet>, forms: &[WeightVector]) -> Vec<IntPolynomial> {
    let mut e = vec![IntPolynomial::one(vars)];
    for v in forms {
        let l = linear_form(vars, v);
        e.push(IntPolynomial::zero(vars));
        for r in (1..e.len()).rev() {
            let t = e[r - 1].mul(&l).expect("same variables");
            e[r] = e[r].add(&t).expect("same variables");
        }
    }
    e.remove(0);
    e
}

/// Elementary symmetric functions of the `W(P)`-orbit of `w_seed`, over `w1..wn`.
pub fn weyl_orbit_invariants(lie: LieType, k: &[usize], seed: usize) -> Result<Vec<IntPolynomial>> {
    let orbit = weyl_orbit(lie, k, seed, DEFAULT_ORBIT_CAP)?;
    Ok(elementary_symmetric(&weight_vars(lie.rank()), &orbit))
}

/// Schubert expansions of `e_1..e_top` of the forms on a full flag table.
pub fn symmetric_expansions(flag: &ProductEngine<'_>, forms: &[WeightVector], top: usize) -> Result<Vec<FlatExpansion>> {
    let table = flag.table();
    if !table.is_full_flag() {
        return Err(Error::DegreeMismatch("symmetric expansions need a full flag table".into()));
    }
    let omegas: Vec<SchubertClass> = (1..=table.rank()).map(|i| table.find_word(&[i])).collect::<Result<_>>()?;
    let mut one = FlatExpansion::new();
    one.insert(0, BigInt::one());
    let mut e = vec![one];
    for v in forms {
        e.push(FlatExpansion::new());
        for r in (1..e.len()).rev() {
            if r > top {
                continue;
            }
            let mut t = FlatExpansion::new();
            for (i, x) in v.0.iter().enumerate() {
                if *x == 0 {
                    continue;
                }
                for (kk, c) in flag.times_class(&e[r - 1], omegas[i])? {
                    *t.entry(kk).or_default() += c * x;
                }
            }
            for (kk, c) in t {
                *e[r].entry(kk).or_default() += c;
            }
            e[r].retain(|_, c| !c.is_zero());
        }
    }
    e.remove(0);
    e.truncate(top);
    Ok(e)
}

/// Pulls a full-flag expansion back to `G/P`; fails off the minimal representatives.
pub fn restrict_to_base(flag: &CosetTable, base: &CosetTable, e: &FlatExpansion) -> Result<FlatExpansion> {
    let mut out = FlatExpansion::new();
    for (&g, c) in e {
        let w = flag.element(flag.class_at(g));
        if !w.is_minimal_rep(base.k()) {
            return Err(Error::GlueConstraint(format!("class {w} is not pulled back from G/P")));
        }
        let target = base
            .find_coset(&w)
            .ok_or_else(|| Error::GlueConstraint("missing coset".into()))?;
        out.insert(base.global_index(target), c.clone());
    }
    Ok(out)
}

/// `rho_r = c_r(P) - g_r`, with `c_r(P)` written both in weights and in `gens`.
#[derive(Debug, Clone)]
pub struct GlueRelation {
    /// Half-degree `r`.
    pub degree: usize,
    /// `c_r(P)` over `w1..wn`.
    pub invariant: IntPolynomial,
    /// `g_r` over the base generators.
    pub value: IntPolynomial,
}

/// Glue data for the given degrees from the orbit of `w_seed` under `W(P)`.
pub fn glue_relations(
    base: &ProductEngine<'_>,
    gens: &GeneratorSet,
    flag: &ProductEngine<'_>,
    seed: usize,
    degrees: &[usize],
) -> Result<Vec<GlueRelation>> {
    let bt = base.table();
    let lie = bt.lie_type();
    let orbit = weyl_orbit(lie, bt.k(), seed, DEFAULT_ORBIT_CAP)?;
    let polys = elementary_symmetric(&weight_vars(lie.rank()), &orbit);
    let top = degrees.iter().copied().max().unwrap_or(0);
    let exps = symmetric_expansions(flag, &orbit, top)?;
    degrees
        .iter()
        .map(|&r| {
            if r == 0 || r > orbit.len() {
                return Err(Error::DegreeMismatch(format!("no invariant of degree {r}")));
            }
            let on_base = restrict_to_base(flag.table(), bt, &exps[r - 1])?;
            let value = rewrite_in_generators(base, gens, r, &on_base)?;
            Ok(GlueRelation { degree: r, invariant: polys[r - 1].clone(), value })
        })
        .collect()
}

/// `H*(P/T)` over the weights `w_j`, `j` not in `K`, with relations the nonzero restrictions of `c_r(P)`.
pub fn fiber_presentation(lie: LieType, k: &[usize], seed: usize) -> Result<Presentation> {
    let n = lie.rank();
    let all = weight_vars(n);
    let fiber_vars = VarSet::new((1..=n).filter(|j| !k.contains(j)).map(|j| (format!("w{j}"), 2)))?;
    let killed: Vec<String> = k.iter().map(|j| format!("w{j}")).collect();
    let killed: Vec<&str> = killed.iter().map(String::as_str).collect();
    let orbit = weyl_orbit(lie, k, seed, DEFAULT_ORBIT_CAP)?;
    let rels = elementary_symmetric(&all, &orbit)
        .into_iter()
        .map(|c| c.kill(&killed))
        .filter(|c| !c.is_zero())
        .collect();
    Presentation::new(&fiber_vars, rels)
}

/// Default bound on monomial-basis size for the per-degree reduction pass.
pub const DEFAULT_REDUCTION_CAP: usize = 1_000;

fn merged_vars(a: &VarSet, b: &VarSet) -> Result<Arc<VarSet>> {
    let mut all: Vec<(String, u32)> = Vec::new();
    for v in [a, b] {
        for (n, &d) in v.names().iter().zip(v.degrees()) {
            if !all.iter().any(|(m, _)| m == n) {
                all.push((n.clone(), d));
            }
        }
    }
    all.sort_by(|x, y| x.1.cmp(&y.1).then_with(|| name_key(&x.0).cmp(&name_key(&y.0))));
    VarSet::new(all)
}

fn name_key(s: &str) -> (String, u64, String) {
    let alpha: String = s.chars().take_while(|c| !c.is_ascii_digit()).collect();
    let rest = &s[alpha.len()..];
    let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
    let num = digits.parse().unwrap_or(0);
    (alpha, num, rest[digits.len()..].to_string())
}

/// A variable occurring only as a bare `+-v` term, if any (the latest such).
fn unit_variable(f: &IntPolynomial) -> Option<(usize, BigInt)> {
    let n = f.vars().len();
    (0..n).rev().find_map(|i| {
        let bare = Monomial::var(n, i);
        let c = f.coefficient(&bare);
        let only_there = f.terms().all(|(m, _)| *m == bare || m.exponents()[i] == 0);
        (c.abs().is_one() && only_there).then_some((i, c))
    })
}

fn drop_variable(vars: &Arc<VarSet>, i: usize) -> Result<Arc<VarSet>> {
    VarSet::new(
        vars.names()
            .iter()
            .zip(vars.degrees())
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, (n, &d))| (n.clone(), d)),
    )
}

/// Eliminates generators occurring with unit coefficient in one of the first `glued` relations.
fn eliminate_unit_generators(mut vars: Arc<VarSet>, mut rels: Vec<IntPolynomial>, mut glued: usize) -> Result<(Arc<VarSet>, Vec<IntPolynomial>)> {
    loop {
        let Some((pos, (i, c))) = rels[..glued].iter().enumerate().find_map(|(p, f)| unit_variable(f).map(|u| (p, u))) else {
            return Ok((vars, rels));
        };
        let f = rels.remove(pos);
        glued -= 1;
        let n = vars.len();
        // v = -(f - c v) / c
        let rest = f.sub(&IntPolynomial::monomial(&vars, Monomial::var(n, i), c.clone()))?;
        let value = rest.scale(&(-c));
        let smaller = drop_variable(&vars, i)?;
        rels = rels
            .iter()
            .map(|g| g.substitute(i, &value)?.embed_by_name(&smaller))
            .collect::<Result<_>>()?;
        rels.retain(|g| !g.is_zero());
        vars = smaller;
    }
}

/// Reduces each relation modulo the ideal of the earlier ones, degree by degree.
fn reduce_relations(vars: &Arc<VarSet>, rels: Vec<IntPolynomial>, cap: usize) -> Result<Vec<IntPolynomial>> {
    let mut sorted = rels;
    sorted.sort_by_key(|r| r.degree().unwrap_or(0));
    let mut out: Vec<IntPolynomial> = Vec::new();
    for f in sorted {
        let d = f.degree().unwrap_or(0);
        if crate::poly::basis_size(vars, d) > cap {
            out.push(f.normalize_sign());
            continue;
        }
        let (basis, ideal) = ideal_piece(vars, &out, d)?;
        let mut v = f.coordinates(&basis)?;
        if ideal.nrows() > 0 {
            let h = hermite(&ideal);
            reduce_mod(&h.h, &h.pivots, &mut v);
        }
        let g = IntPolynomial::from_coordinates(vars, &basis, &v);
        if !g.is_zero() {
            out.push(g.normalize_sign());
        }
    }
    Ok(out)
}

/// `H*(G/T)` from the fiber `P/T`, the base `G/P` and the glue `rho_r = c_r(P) - g_r`.
pub fn assemble_full_flag(fiber: &Presentation, base: &Presentation, glue: &[GlueRelation]) -> Result<Presentation> {
    assemble_full_flag_with_cap(fiber, base, glue, DEFAULT_REDUCTION_CAP)
}

pub fn assemble_full_flag_with_cap(
    fiber: &Presentation,
    base: &Presentation,
    glue: &[GlueRelation],
    cap: usize,
) -> Result<Presentation> {
    let vars = merged_vars(&base.vars, &fiber.vars)?;
    let base_names: Vec<&str> = base.vars.names().iter().map(String::as_str).collect();
    let fiber_rels: Vec<IntPolynomial> =
        fiber.relations.iter().map(|r| r.embed_by_name(&vars)).collect::<Result<_>>()?;
    let mut matched = vec![false; fiber_rels.len()];
    let mut rhos = Vec::new();
    for g in glue {
        let rho = g.invariant.embed_by_name(&vars)?.sub(&g.value.embed_by_name(&vars)?)?;
        let h = rho.kill(&base_names);
        if h.is_zero() {
            rhos.push(rho);
            continue;
        }
        let hit = fiber_rels.iter().position(|f| *f == h || f.neg() == h);
        match hit {
            Some(k) => matched[k] = true,
            None => {
                return Err(Error::GlueConstraint(format!(
                    "rho_{} restricts to {h}, which is not a fiber relation",
                    g.degree
                )))
            }
        }
        rhos.push(rho);
    }
    if let Some(k) = matched.iter().position(|m| !m) {
        return Err(Error::GlueConstraint(format!("fiber relation {} has no glue", fiber_rels[k])));
    }
    let glued = rhos.len();
    let mut rels = rhos;
    for r in &base.relations {
        rels.push(r.embed_by_name(&vars)?);
    }
    let (vars, rels) = eliminate_unit_generators(vars, rels, glued)?;
    let rels = reduce_relations(&vars, rels, cap)?;
    Presentation::new(&vars, rels)
}

/// Half-degrees at which some relation fails to vanish, checked through length `top` of the table.
pub fn nonvanishing_relations(
    engine: &ProductEngine<'_>,
    gens: &GeneratorSet,
    relations: &[IntPolynomial],
) -> Result<Vec<usize>> {
    let top = engine.table().top();
    let mut bad = Vec::new();
    for (k, r) in relations.iter().enumerate() {
        if r.degree().unwrap_or(0) as usize / 2 > top && !engine.table().is_truncated() {
            continue;
        }
        if !expand_in_generators(engine, gens, r)?.is_empty() {
            bad.push(k);
        }
    }
    Ok(bad)
}

/// Words of the generators, for display.
pub fn generator_words(table: &CosetTable, gens: &GeneratorSet) -> Vec<(String, ReducedWord)> {
    gens.generators().iter().map(|g| (g.name.clone(), table.word(g.class))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::enumerate_cosets;

    fn t(s: &str) -> LieType {
        s.parse().unwrap()
    }

    fn names(g: &GeneratorSet) -> Vec<String> {
        g.generators().iter().map(|x| x.name.clone()).collect()
    }

    #[test]
    fn f4_generators_and_relations() {
        let table = enumerate_cosets(t("F4"), &[1]).unwrap();
        let eng = ProductEngine::new(&table);
        let gens = minimal_generators(&eng).unwrap();
        assert_eq!(names(&gens), ["w1", "y3", "y4", "y6"]);
        assert_eq!(table.word(gens.get("y3").unwrap().class), vec![3, 2, 1]);
        let pres = minimal_relations(&eng, &gens, table.top()).unwrap();
        assert_eq!(pres.relation_degrees(), vec![3, 6, 8, 12]);
        assert_eq!(pres.relations[0].to_string(), "2*y3 - w1^3");
        for r in &pres.relations {
            assert!(expand_in_generators(&eng, &gens, r).unwrap().is_empty());
        }
    }

    #[test]
    fn structure_matrix_small_degrees() {
        let table = enumerate_cosets(t("F4"), &[1]).unwrap();
        let eng = ProductEngine::new(&table);
        let gens = minimal_generators(&eng).unwrap();
        let b0 = structure_matrix(&eng, &gens, 0).unwrap();
        assert_eq!(b0.matrix, IntegerMatrix::identity(1));
        let b3 = structure_matrix(&eng, &gens, 3).unwrap();
        assert_eq!(b3.basis.len(), 2);
        // rows: y3 then w1^3 = 2 y3
        assert_eq!(b3.matrix.row(1), &[BigInt::from(2)][..]);
        let k = relation_kernel(&eng, &gens, 3).unwrap();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].normalize_sign().to_string(), "2*y3 - w1^3");
        assert!(relation_kernel(&eng, &gens, 1).unwrap().is_empty());
    }

    #[test]
    fn not_surjective_is_reported() {
        let table = enumerate_cosets(t("F4"), &[1]).unwrap();
        let eng = ProductEngine::new(&table);
        let only_w = GeneratorSet::new(&table, [("w1", SchubertClass::new(1, 1))]).unwrap();
        assert!(matches!(relation_kernel(&eng, &only_w, 3), Err(Error::NotSurjective { degree: 3 })));
    }

    #[test]
    fn giambelli_round_trip() {
        let table = enumerate_cosets(t("F4"), &[1]).unwrap();
        let eng = ProductEngine::new(&table);
        let gens = minimal_generators(&eng).unwrap();
        for m in 1..=table.top() {
            let g = giambelli(&eng, &gens, m).unwrap();
            assert_eq!(g.len(), table.beta(m));
            for (j, p) in g.iter().enumerate() {
                let e = expand_in_generators(&eng, &gens, p).unwrap();
                let mut want = FlatExpansion::new();
                want.insert(table.global_index(SchubertClass::new(m, j + 1)), BigInt::one());
                assert_eq!(e, want, "G_{m},{}", j + 1);
            }
        }
        assert_eq!(giambelli(&eng, &gens, 3).unwrap()[0].to_string(), "y3");
    }

    #[test]
    fn f4_gysin_groups() {
        let table = enumerate_cosets(t("F4"), &[1]).unwrap();
        let eng = ProductEngine::new(&table);
        let gy = gysin_analysis(&eng, 1, table.top() + 1).unwrap();
        let show = |d: usize| gy.group(d).unwrap().to_string();
        assert_eq!(show(2), "0");
        assert_eq!(show(6), "Z/2");
        assert_eq!(show(8), "Z");
        assert_eq!(show(12), "Z/4");
        assert_eq!(show(16), "Z/3");
        assert_eq!(show(23), "Z");
        assert_eq!(gy.euler_characteristic(), 0);
        for s in &gy.steps[1..] {
            assert_eq!(s.a.nrows(), table.beta(s.r - 1));
            assert_eq!(s.a.ncols(), table.beta(s.r));
        }
    }

    #[test]
    fn orbits() {
        let o = weyl_orbit(t("F4"), &[1], 4, 100).unwrap();
        let got: HashSet<Vec<i64>> = o.iter().map(|v| v.0.clone()).collect();
        let want: HashSet<Vec<i64>> = [
            vec![0, 0, 0, 1],
            vec![0, 0, 1, -1],
            vec![0, 1, -1, 0],
            vec![1, -1, 1, 0],
            vec![1, 0, -1, 1],
            vec![1, 0, 0, -1],
        ]
        .into_iter()
        .collect();
        assert_eq!(got, want);
        assert!(matches!(weyl_orbit(t("F4"), &[], 4, 10), Err(Error::OrbitCap { cap: 10 })));
        let sp = classical_weight_set(t("C3")).unwrap();
        let e = elementary_symmetric(&weight_vars(3), &sp);
        assert!(e[0].is_zero() && e[2].is_zero() && e[4].is_zero());
        assert!(classical_weight_set(t("E6")).is_err());
    }

    #[test]
    fn a2_full_flag() {
        let table = enumerate_cosets(t("A2"), &[1, 2]).unwrap();
        let eng = ProductEngine::new(&table);
        let gens = minimal_generators(&eng).unwrap();
        assert_eq!(names(&gens), ["w1", "w2"]);
        let pres = minimal_relations(&eng, &gens, table.top() + 1).unwrap();
        assert_eq!(pres.relation_degrees(), vec![2, 3]);
        let c = elementary_symmetric(&weight_vars(2), &classical_weight_set(t("A2")).unwrap());
        let borel = Presentation::new(gens.vars(), c[1..].to_vec()).unwrap();
        assert!(pres.same_ideal_through(&borel, 4).unwrap());
    }

    #[test]
    fn f4_glue_and_assembly() {
        let f4 = t("F4");
        let table = enumerate_cosets(f4, &[1]).unwrap();
        let eng = ProductEngine::new(&table);
        let gens = minimal_generators(&eng).unwrap();
        let base = minimal_relations(&eng, &gens, table.top()).unwrap();
        let fiber = fiber_presentation(f4, &[1], 4).unwrap();
        assert_eq!(fiber.relation_degrees(), vec![2, 4, 6]);
        let flag = CosetTable::build(f4, &[1, 2, 3, 4], &crate::weyl::EnumerateOptions {
            max_length: Some(6),
            ..Default::default()
        })
        .unwrap();
        let feng = ProductEngine::new(&flag);
        let glue = glue_relations(&eng, &gens, &feng, 4, &[2, 4, 6]).unwrap();
        let shown: Vec<String> = glue.iter().map(|g| g.value.to_string()).collect();
        assert_eq!(shown, ["4*w1^2", "3*y4 + 2*w1*y3", "y6"]);
        let full = assemble_full_flag(&fiber, &base, &glue).unwrap();
        let mut degs = full.relation_degrees();
        degs.sort();
        assert_eq!(degs, vec![2, 3, 4, 6, 8, 12]);
        assert!(full.vars.index_of("y6").is_none());
        // an empty fiber leaves the base untouched
        let empty = Presentation::new(&VarSet::new(Vec::<(String, u32)>::new()).unwrap(), vec![]).unwrap();
        let same = assemble_full_flag(&empty, &base, &[]).unwrap();
        assert!(same.same_ideal_through(&base, 12).unwrap());
    }

    #[test]
    fn glue_constraint_violation() {
        let f4 = t("F4");
        let table = enumerate_cosets(f4, &[1]).unwrap();
        let eng = ProductEngine::new(&table);
        let gens = minimal_generators(&eng).unwrap();
        let base = minimal_relations(&eng, &gens, table.top()).unwrap();
        let fiber = fiber_presentation(f4, &[1], 4).unwrap();
        assert!(matches!(assemble_full_flag(&fiber, &base, &[]), Err(Error::GlueConstraint(_))));
    }

    #[test]
    fn presentation_json() {
        let vars = VarSet::new([("w1", 2), ("y3", 6)]).unwrap();
        let r = IntPolynomial::parse(&vars, "2*y3 - w1^3").unwrap();
        let p = Presentation::new(&vars, vec![r]).unwrap();
        let j = p.to_json();
        assert_eq!(j["generators"][1]["degree"], 6);
        assert_eq!(j["relations"][0], "2*y3 - w1^3");
        assert!(p.to_string().contains("r3 = 2*y3 - w1^3"));
    }
}
