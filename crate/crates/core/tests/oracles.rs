mod common;

use common::*;
use num_bigint::BigInt;
use schubert_core::{enumerate_cosets, expand_product, CosetTable, EnumerateOptions, SchubertClass};

#[test]
fn grassmannian_products_follow_littlewood_richardson() {
    for n in 2..=5 {
        for k in 1..n {
            let t = enumerate_cosets(lie(&format!("A{}", n - 1)), &[k]).unwrap();
            let all: Vec<SchubertClass> = (0..t.len()).map(|g| t.class_at(g)).collect();
            for &a in &all {
                for &b in &all {
                    let e = expand_product(&t, &[a, b]).unwrap();
                    for c in t.classes(a.r + b.r) {
                        let want = lr_coefficient(
                            &grassmannian_partition(&t, a),
                            &grassmannian_partition(&t, b),
                            &grassmannian_partition(&t, c),
                        );
                        assert_eq!(e.coefficient(c), BigInt::from(want), "G({n},{k}) {a} * {b} at {c}");
                    }
                }
            }
        }
    }
}

#[test]
fn lr_oracle_sanity() {
    // s_1 * s_1 = s_2 + s_11; s_21 * s_21 contains s_321 twice
    assert_eq!(lr_coefficient(&[1], &[1], &[2]), 1);
    assert_eq!(lr_coefficient(&[1], &[1], &[1, 1]), 1);
    assert_eq!(lr_coefficient(&[2, 1], &[2, 1], &[3, 2, 1]), 2);
    assert_eq!(lr_coefficient(&[2], &[2], &[2, 1, 1]), 0);
}

fn check_chevalley(t: &CosetTable) {
    let roots = positive_roots(t.lie_type());
    for &i in t.k() {
        let w = t.find_word(&[i]).unwrap();
        for g in 0..t.len() {
            let c = t.class_at(g);
            if c.r + 1 > t.top() {
                continue;
            }
            let got = expand_product(t, &[w, c]).unwrap();
            let want = chevalley(t, &roots, i, c);
            for (cl, v) in got.iter() {
                assert_eq!(*v, BigInt::from(*want.get(cl).unwrap_or(&0)), "{} w{i} * {c} at {cl}", t.lie_type());
            }
            assert_eq!(got.len(), want.len(), "{} w{i} * {c}", t.lie_type());
        }
    }
}

#[test]
fn chevalley_formula_full_flags() {
    for s in ["A3", "B3", "C3", "G2", "D4", "B2"] {
        let l = lie(s);
        let k: Vec<usize> = (1..=l.rank()).collect();
        check_chevalley(&enumerate_cosets(l, &k).unwrap());
    }
}

#[test]
fn chevalley_formula_partial_flags() {
    check_chevalley(&enumerate_cosets(lie("F4"), &[1]).unwrap());
    check_chevalley(&enumerate_cosets(lie("F4"), &[4]).unwrap());
    check_chevalley(&enumerate_cosets(lie("E6"), &[2]).unwrap());
    check_chevalley(&enumerate_cosets(lie("B4"), &[2, 4]).unwrap());
    check_chevalley(&enumerate_cosets(lie("C4"), &[1, 3]).unwrap());
}

#[test]
fn betti_numbers_match_poincare_polynomials() {
    for s in ["A1", "A4", "B3", "C4", "D4", "D5", "G2", "F4", "E6"] {
        let l = lie(s);
        let k: Vec<usize> = (1..=l.rank()).collect();
        let t = enumerate_cosets(l, &k).unwrap();
        let betas: Vec<BigInt> = t.betas().into_iter().map(BigInt::from).collect();
        assert_eq!(betas, poincare_full_flag(l), "{s}");
        let bfs: Vec<usize> = bfs_lengths(l);
        assert_eq!(bfs, t.betas(), "{s}");
    }
}

#[test]
fn parabolic_quotient_sizes() {
    for (s, k, size) in [("F4", vec![1], 24), ("F4", vec![4], 24), ("E6", vec![2], 72), ("E7", vec![2], 576), ("E6", vec![1], 27), ("E7", vec![7], 56), ("A4", vec![2], 10), ("D5", vec![5], 16)] {
        assert_eq!(enumerate_cosets(lie(s), &k).unwrap().len(), size, "{s}/{k:?}");
    }
    let e8 = CosetTable::build(lie("E8"), &[8], &EnumerateOptions::default()).unwrap();
    assert_eq!(e8.len(), 240);
}

#[test]
fn e8_full_flag_hits_the_cap() {
    let opts = EnumerateOptions { cap: 100_000, max_length: None };
    assert!(matches!(
        CosetTable::build(lie("E8"), &[1, 2, 3, 4, 5, 6, 7, 8], &opts),
        Err(schubert_core::Error::ElementCap { cap: 100_000 })
    ));
}
