use mzv_shuffle::shuffle::{lemma2_check, lemma3_sides, shuffle_argument_sequences};
use mzv_shuffle::{gen_binom, shuffle, shuffle_poly, t_sum, Letter, Parity, Word, WordPolynomial};
use num_bigint::BigInt;
use proptest::prelude::*;

fn word_strategy(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(prop::bool::ANY, 0..=max_len).prop_map(|bits| {
        Word::new(
            bits.into_iter()
                .map(|b| if b { Letter::B } else { Letter::A })
                .collect(),
        )
    })
}

proptest! {
    #[test]
    fn shuffle_is_commutative(u in word_strategy(5), v in word_strategy(5)) {
        prop_assert_eq!(shuffle(&u, &v), shuffle(&v, &u));
    }

    #[test]
    fn shuffle_is_associative(u in word_strategy(3), v in word_strategy(3), w in word_strategy(3)) {
        let left = shuffle_poly(&shuffle(&u, &v), &WordPolynomial::from_word(w.clone()));
        let right = shuffle_poly(&WordPolynomial::from_word(u.clone()), &shuffle(&v, &w));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn shuffle_mass_is_binomial(u in word_strategy(6), v in word_strategy(6)) {
        let p = shuffle(&u, &v);
        let total = (u.len() + v.len()) as i64;
        prop_assert_eq!(p.mass(), gen_binom(total, u.len() as i64));
        for (w, c) in p.terms() {
            prop_assert!(c > &BigInt::from(0));
            prop_assert_eq!(w.len(), u.len() + v.len());
            prop_assert_eq!(w.count_b(), u.count_b() + v.count_b());
        }
    }

    #[test]
    fn shuffle_run_bound(u in word_strategy(6), v in word_strategy(6)) {
        for letter in [Letter::A, Letter::B] {
            let bound = u.max_run(letter) + v.max_run(letter);
            for w in shuffle(&u, &v).words() {
                prop_assert!(w.max_run(letter) <= bound);
            }
        }
    }

    #[test]
    fn empty_word_is_the_unit(u in word_strategy(8)) {
        prop_assert_eq!(shuffle(&u, &Word::empty()), WordPolynomial::from_word(u));
    }
}

#[test]
fn t_classes_partition_the_support() {
    let one = BigInt::from(1);
    for p in 0..=4 {
        for q in 0..=4 {
            let support = shuffle(&Word::ab_power(p), &Word::ab_power(q)).support();
            let mut union = WordPolynomial::zero();
            for j in 0..=p.min(q) {
                let t = t_sum(p, q, j).unwrap();
                for (w, c) in t.terms() {
                    assert_eq!(c, &one);
                    assert_eq!(w.count_double_a(), j);
                    assert!(union.coeff(w) == BigInt::from(0), "{w} in two classes");
                }
                union.add_scaled(&t, &one);
            }
            assert_eq!(union, support, "p={p} q={q}");
        }
    }
}

#[test]
fn t_sum_depends_only_on_total() {
    for total in 0..=8usize {
        let (p0, q0) = (total / 2, total - total / 2);
        for p in 0..=total {
            let q = total - p;
            for j in 0..=p.min(q) {
                assert_eq!(
                    t_sum(p, q, j).unwrap(),
                    t_sum(p0, q0, j).unwrap(),
                    "p={p} q={q} j={j}"
                );
            }
        }
    }
}

#[test]
fn lemma2_grid() {
    for p in 0..=4 {
        for q in 0..=4 {
            assert!(lemma2_check(p, q).passed, "p={p} q={q}");
        }
    }
}

#[test]
fn lemma3_both_parities_up_to_four() {
    for parity in Parity::BOTH {
        for n in 1..=4 {
            for m in 1..=n {
                let (lhs, rhs) = lemma3_sides(parity, m, n).unwrap();
                assert_eq!(lhs.first_difference(&rhs), None, "{parity} m={m} n={n}");
            }
        }
    }
}

#[test]
fn argument_shuffle_of_single_blocks() {
    // (2) ⧢ (3,1) interleaves arguments: (2,3,1) + (3,2,1) + (3,1,2).
    let p = shuffle_argument_sequences(&[2], &[3, 1]);
    let expected: Vec<&str> = vec!["ABAABB", "AABABB", "AABBAB"];
    assert_eq!(p.len(), 3);
    for w in expected {
        assert_eq!(p.coeff(&w.parse().unwrap()), BigInt::from(1), "{w}");
    }
}
