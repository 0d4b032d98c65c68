//! Fixtures shared by the benchmarks.

use schubert_core::{CosetTable, EnumerateOptions, LieType, StrictUpperMatrix};

pub fn lie(s: &str) -> LieType {
    s.parse().expect("valid type")
}

pub fn full_flag(t: LieType, max_length: Option<usize>) -> CosetTable {
    let k: Vec<usize> = (1..=t.rank()).collect();
    CosetTable::build(t, &k, &EnumerateOptions { max_length, ..Default::default() }).expect("table builds")
}

/// Deterministic strictly upper-triangular matrix with entries in `-3..=3`.
pub fn sample_matrix(m: usize) -> StrictUpperMatrix {
    let rows: Vec<Vec<i64>> = (0..m)
        .map(|i| (0..m).map(|j| if j > i { ((i * 5 + j * 3 + i * j) % 7) as i64 - 3 } else { 0 }).collect())
        .collect();
    StrictUpperMatrix::from_rows(&rows).expect("strictly upper")
}
