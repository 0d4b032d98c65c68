//! Independent reference implementations used by the integration and
//! acceptance tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use rand::Rng;
use schubert_core::{CosetTable, LieType, SchubertClass, StrictUpperMatrix, WeightVector, WeylElement};

pub type Partition = Vec<usize>;

pub fn lie(s: &str) -> LieType {
    s.parse().unwrap()
}

/// Random strictly upper-triangular matrix with entries in `lo..=hi`.
pub fn random_strict_upper<R: Rng>(rng: &mut R, m: usize, lo: i64, hi: i64) -> StrictUpperMatrix {
    let rows: Vec<Vec<i64>> = (0..m)
        .map(|i| (0..m).map(|j| if j > i { rng.gen_range(lo..=hi) } else { 0 }).collect())
        .collect();
    StrictUpperMatrix::from_rows(&rows).unwrap()
}

// ---------------------------------------------------------------------------
// Littlewood-Richardson rule by counting LR tableaux.

/// `c^nu_{lambda,mu}`: semistandard fillings of `nu/lambda` with content `mu`
/// whose reverse row reading word is a lattice word.
pub fn lr_coefficient(lambda: &[usize], mu: &[usize], nu: &[usize]) -> u64 {
    let size = |p: &[usize]| p.iter().sum::<usize>();
    if size(lambda) + size(mu) != size(nu) || lambda.len() > nu.len() {
        return 0;
    }
    if lambda.iter().zip(nu).any(|(a, b)| a > b) {
        return 0;
    }
    let lam = |i: usize| lambda.get(i).copied().unwrap_or(0);
    let mut cells = Vec::new();
    // reading order: rows top to bottom, each right to left
    for (i, &n) in nu.iter().enumerate() {
        for j in (lam(i)..n).rev() {
            cells.push((i, j));
        }
    }
    let mut fill: HashMap<(usize, usize), usize> = HashMap::new();
    let mut count = vec![0usize; mu.len()];
    lr_fill(&cells, 0, lambda, &mut fill, &mut count, mu)
}

fn lr_fill(
    cells: &[(usize, usize)],
    k: usize,
    lambda: &[usize],
    fill: &mut HashMap<(usize, usize), usize>,
    count: &mut Vec<usize>,
    mu: &[usize],
) -> u64 {
    if k == cells.len() {
        return u64::from(count.iter().zip(mu).all(|(a, b)| a == b));
    }
    let (i, j) = cells[k];
    let lam = |r: usize| lambda.get(r).copied().unwrap_or(0);
    let mut total = 0;
    for v in 0..mu.len() {
        if count[v] == mu[v] {
            continue;
        }
        // lattice condition on the reading word
        if v > 0 && count[v] + 1 > count[v - 1] {
            continue;
        }
        // weakly increasing along rows: the right neighbour is already filled
        if let Some(&r) = fill.get(&(i, j + 1)) {
            if v > r {
                continue;
            }
        }
        // strictly increasing down columns
        if i > 0 && j >= lam(i - 1) {
            if let Some(&above) = fill.get(&(i - 1, j)) {
                if v <= above {
                    continue;
                }
            }
        }
        fill.insert((i, j), v);
        count[v] += 1;
        total += lr_fill(cells, k + 1, lambda, fill, count, mu);
        count[v] -= 1;
        fill.remove(&(i, j));
    }
    total
}

/// Partition of a Grassmannian class in `A_{n-1}/P_k`, read off from the
/// `epsilon` coordinates of `w(omega_k)`.
pub fn grassmannian_partition(table: &CosetTable, c: SchubertClass) -> Partition {
    let a = table.point(c);
    let n = a.len() + 1;
    let mut x = vec![0i64; n];
    for j in (0..n - 1).rev() {
        x[j] = x[j + 1] + a[j] as i64;
    }
    let lo = *x.iter().min().unwrap();
    let ones: Vec<usize> = (0..n).filter(|&j| x[j] > lo).map(|j| j + 1).collect();
    let k = ones.len();
    let mut p: Partition = (0..k).map(|t| ones[k - 1 - t] - (k - t)).collect();
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

// ---------------------------------------------------------------------------
// Chevalley formula: s_{omega_i} * s_w = sum <omega_i, beta^vee> s_{w s_beta}.

pub struct PositiveRoot {
    /// Reflections `i_1, .., i_k` (outermost first) with `beta = s_{i_1}..s_{i_k}(alpha_j)`.
    pub path: Vec<usize>,
    pub simple: usize,
    /// `beta` in fundamental-weight coordinates.
    pub weight: Vec<i64>,
}

fn reflect(lie: LieType, i: usize, v: &[i64]) -> Vec<i64> {
    lie.cartan_matrix().reflect_weight(i, &WeightVector(v.to_vec())).unwrap().0
}

pub fn simple_root_weight(lie: LieType, j: usize) -> Vec<i64> {
    let w = WeightVector::fundamental(lie.rank(), j).0;
    let s = reflect(lie, j, &w);
    w.iter().zip(&s).map(|(a, b)| a - b).collect()
}

/// Positive roots by closing the simple roots under simple reflections.
pub fn positive_roots(lie: LieType) -> Vec<PositiveRoot> {
    let n = lie.rank();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut out = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    for j in 1..=n {
        let r = simple_root_weight(lie, j);
        seen.insert(r.clone());
        queue.push_back(PositiveRoot { path: vec![], simple: j, weight: r });
    }
    while let Some(r) = queue.pop_front() {
        for i in 1..=n {
            // s_i permutes the positive roots other than alpha_i
            if r.path.is_empty() && r.simple == i {
                continue;
            }
            let s = reflect(lie, i, &r.weight);
            if !seen.contains(&s) {
                seen.insert(s.clone());
                let mut path = vec![i];
                path.extend(&r.path);
                queue.push_back(PositiveRoot { path, simple: r.simple, weight: s });
            }
        }
        out.push(r);
    }
    out
}

/// `<mu, beta^vee>` computed as the `j`-th coordinate of `u^{-1}(mu)`.
pub fn pairing_with_coroot(lie: LieType, beta: &PositiveRoot, mu: &[i64]) -> i64 {
    let mut v = mu.to_vec();
    for &i in &beta.path {
        v = reflect(lie, i, &v);
    }
    v[beta.simple - 1]
}

pub fn reflect_in(lie: LieType, beta: &PositiveRoot, mu: &[i64]) -> Vec<i64> {
    let c = pairing_with_coroot(lie, beta, mu);
    mu.iter().zip(&beta.weight).map(|(a, b)| a - c * b).collect()
}

/// `s_{omega_i} * s_w` on `G/P` by the Chevalley formula.
pub fn chevalley(table: &CosetTable, roots: &[PositiveRoot], i: usize, c: SchubertClass) -> BTreeMap<SchubertClass, i64> {
    let lie = table.lie_type();
    let w = table.element(c);
    let rho = WeightVector::rho(lie.rank()).0;
    let omega = WeightVector::fundamental(lie.rank(), i).0;
    let mut out = BTreeMap::new();
    for beta in roots {
        let coeff = pairing_with_coroot(lie, beta, &omega);
        if coeff == 0 {
            continue;
        }
        let img = w.apply(&WeightVector(reflect_in(lie, beta, &rho)));
        let v = WeylElement::from_rho_image(lie, img.0).unwrap();
        if v.length() != c.r + 1 || !v.is_minimal_rep(table.k()) {
            continue;
        }
        let target = table.find_coset(&v).unwrap();
        *out.entry(target).or_insert(0) += coeff;
    }
    out.retain(|_, v| *v != 0);
    out
}

// ---------------------------------------------------------------------------
// Poincare polynomials of full flag manifolds from the degrees of W.

pub fn degrees_of_invariants(lie: LieType) -> Vec<usize> {
    let n = lie.rank();
    match lie.to_string().chars().next().unwrap() {
        'A' => (2..=n + 1).collect(),
        'B' | 'C' => (1..=n).map(|i| 2 * i).collect(),
        'D' => {
            let mut d: Vec<usize> = (1..n).map(|i| 2 * i).collect();
            d.push(n);
            d
        }
        'G' => vec![2, 6],
        'F' => vec![2, 6, 8, 12],
        'E' => match n {
            6 => vec![2, 5, 6, 8, 9, 12],
            7 => vec![2, 6, 8, 10, 12, 14, 18],
            _ => vec![2, 8, 12, 14, 18, 20, 24, 30],
        },
        _ => unreachable!(),
    }
}

/// Coefficients of `prod (1 + t + .. + t^{d-1})`.
pub fn poincare_full_flag(lie: LieType) -> Vec<BigInt> {
    let mut p = vec![BigInt::from(1)];
    for d in degrees_of_invariants(lie) {
        let mut q = vec![BigInt::from(0); p.len() + d - 1];
        for (i, c) in p.iter().enumerate() {
            for k in 0..d {
                q[i + k] += c;
            }
        }
        p = q;
    }
    p
}

/// Lengths of all Weyl group elements by breadth-first search on rho-images.
pub fn bfs_lengths(lie: LieType) -> Vec<usize> {
    let n = lie.rank();
    let start = WeightVector::rho(n).0;
    let mut seen: HashSet<Vec<i64>> = HashSet::from([start.clone()]);
    let mut level = vec![start];
    let mut counts = Vec::new();
    while !level.is_empty() {
        counts.push(level.len());
        let mut next = Vec::new();
        for v in &level {
            for i in 1..=n {
                if v[i - 1] > 0 {
                    let s = reflect(lie, i, v);
                    if seen.insert(s.clone()) {
                        next.push(s);
                    }
                }
            }
        }
        level = next;
    }
    counts
}
