mod common;

use common::*;
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use schubert_core::linalg::{hermite, smith};
use schubert_core::triangular::evaluate;
use schubert_core::{cokernel_structure, IntPolynomial, IntegerMatrix, Monomial, VarSet, WeylElement};

fn poly_strategy(nvars: usize) -> impl Strategy<Value = Vec<(Vec<u16>, i64)>> {
    prop::collection::vec((prop::collection::vec(0u16..3, nvars), -5i64..=5), 0..5)
}

fn build(vars: &std::sync::Arc<VarSet>, terms: &[(Vec<u16>, i64)]) -> IntPolynomial {
    IntPolynomial::from_terms(
        vars,
        terms.iter().map(|(e, c)| (Monomial(e.iter().copied().collect()), BigInt::from(*c))),
    )
}

fn vars3() -> std::sync::Arc<VarSet> {
    VarSet::new([("a", 2), ("b", 4), ("c", 6)]).unwrap()
}

proptest! {
    #[test]
    fn polynomial_ring_axioms(p in poly_strategy(3), q in poly_strategy(3), r in poly_strategy(3)) {
        let v = vars3();
        let (p, q, r) = (build(&v, &p), build(&v, &q), build(&v, &r));
        prop_assert_eq!(p.mul(&q).unwrap(), q.mul(&p).unwrap());
        prop_assert_eq!(p.mul(&q).unwrap().mul(&r).unwrap(), p.mul(&q.mul(&r).unwrap()).unwrap());
        prop_assert_eq!(p.mul(&q.add(&r).unwrap()).unwrap(), p.mul(&q).unwrap().add(&p.mul(&r).unwrap()).unwrap());
        prop_assert!(p.sub(&p).unwrap().is_zero());
        prop_assert_eq!(p.mul(&IntPolynomial::one(&v)).unwrap(), p.clone());
        let shown = p.to_string();
        prop_assert_eq!(IntPolynomial::parse(&v, &shown).unwrap(), p);
    }

    #[test]
    fn triangular_operator_is_linear(seed in any::<u64>(), m in 1usize..6, p in poly_strategy(5), q in poly_strategy(5)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_strict_upper(&mut rng, m, -3, 3);
        let v = VarSet::linear(m);
        // keep only degree-m terms over the first m variables
        let homog = |terms: &[(Vec<u16>, i64)]| {
            let t: Vec<(Vec<u16>, i64)> = terms.iter().filter_map(|(e, c)| {
                let e: Vec<u16> = e[..m].to_vec();
                (e.iter().map(|&x| x as usize).sum::<usize>() == m).then_some((e, *c))
            }).collect();
            build(&v, &t)
        };
        let (p, q) = (homog(&p), homog(&q));
        let lhs = evaluate(&a, &p.add(&q).unwrap()).unwrap();
        prop_assert_eq!(lhs, evaluate(&a, &p).unwrap() + evaluate(&a, &q).unwrap());
        let mut x = IntPolynomial::one(&v);
        for i in 0..m {
            x = x.mul(&IntPolynomial::var(&v, i)).unwrap();
        }
        prop_assert_eq!(evaluate(&a, &x).unwrap(), BigInt::from(1));
    }

    #[test]
    fn weyl_group_laws(word in prop::collection::vec(1usize..=4, 0..12), other in prop::collection::vec(1usize..=4, 0..12)) {
        let f4 = lie("F4");
        let w = WeylElement::from_word(f4, &word).unwrap();
        let u = WeylElement::from_word(f4, &other).unwrap();
        prop_assert!(w.multiply(&w.inverse()).unwrap().is_identity());
        prop_assert_eq!(w.inverse().inverse(), w.clone());
        prop_assert_eq!(w.inverse().length(), w.length());
        prop_assert_eq!(w.reduced_word().len(), w.length());
        prop_assert_eq!(WeylElement::from_word(f4, &w.reduced_word()).unwrap(), w.clone());
        let wu = w.multiply(&u).unwrap();
        prop_assert!(wu.length() <= w.length() + u.length());
        prop_assert_eq!((wu.length() + w.length() + u.length()) % 2, 0);
        for i in 1..=4 {
            let s = WeylElement::simple(f4, i).unwrap();
            prop_assert!(s.multiply(&s).unwrap().is_identity());
        }
    }

    #[test]
    fn cokernel_invariant_under_unimodular_changes(
        entries in prop::collection::vec(-6i64..=6, 12),
        ops in prop::collection::vec((0usize..4, 0usize..4, -3i64..=3, any::<bool>()), 0..10),
    ) {
        let rows: Vec<Vec<i64>> = entries.chunks(3).map(|c| c.to_vec()).collect();
        let m = IntegerMatrix::from_rows(&rows).unwrap();
        let mut rows2 = rows.clone();
        for (i, j, k, on_rows) in ops {
            if on_rows {
                if i != j {
                    let src = rows2[j].clone();
                    for (x, y) in rows2[i].iter_mut().zip(src) {
                        *x += k * y;
                    }
                }
            } else {
                let (i, j) = (i % 3, j % 3);
                if i != j {
                    for row in rows2.iter_mut() {
                        row[i] += k * row[j];
                    }
                }
            }
        }
        let m2 = IntegerMatrix::from_rows(&rows2).unwrap();
        prop_assert_eq!(cokernel_structure(&m), cokernel_structure(&m2));

        let s = smith(&m);
        prop_assert_eq!(s.p.mul(&m).unwrap().mul(&s.q).unwrap(), s.d.clone());
        for w in s.invariants.windows(2) {
            prop_assert!((&w[1] % &w[0]) == BigInt::from(0));
        }
        let h = hermite(&m);
        prop_assert_eq!(h.u.mul(&m).unwrap(), h.h.clone());
        prop_assert_eq!(h.rank, m.rank());
    }
}
