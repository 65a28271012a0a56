use mzv_shuffle::{composition_from_word, word_from_composition, Composition, Letter, Word};
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

fn composition_strategy() -> impl Strategy<Value = Composition> {
    prop::collection::vec(1u32..=5, 1..=5).prop_map(|parts| Composition::new(parts).unwrap())
}

proptest! {
    #[test]
    fn composition_round_trip(c in composition_strategy()) {
        let w = word_from_composition(&c);
        prop_assert_eq!(w.len() as u32, c.weight());
        prop_assert_eq!(w.count_b(), c.depth());
        prop_assert_eq!(w.is_admissible(), c.is_admissible());
        prop_assert_eq!(composition_from_word(&w).unwrap(), c);
    }

    #[test]
    fn word_text_round_trip(w in word_strategy(12)) {
        let text = w.to_string();
        prop_assert_eq!(text.parse::<Word>().unwrap(), w);
    }

    #[test]
    fn tau_reverse_is_an_involution(w in word_strategy(12)) {
        prop_assert_eq!(w.tau_reverse().tau_reverse(), w.clone());
        prop_assert_eq!(w.tau_reverse().len(), w.len());
        prop_assert_eq!(w.tau_reverse().count_b(), w.len() - w.count_b());
    }

    #[test]
    fn order_is_length_first(u in word_strategy(8), v in word_strategy(8)) {
        if u.len() != v.len() {
            prop_assert_eq!(u.cmp(&v), u.len().cmp(&v.len()));
        } else {
            prop_assert_eq!(u.cmp(&v), u.letters().cmp(v.letters()));
        }
    }

    #[test]
    fn prefix_suffix_split(w in word_strategy(12), cut in 0usize..=12) {
        let cut = cut.min(w.len());
        prop_assert_eq!(w.prefix(cut).concat(&w.suffix_from(cut)), w);
    }
}

#[test]
fn compositions_of_weight_are_all_distinct_words() {
    for weight in 1..=8 {
        let all = Composition::all_of_weight(weight);
        assert_eq!(all.len(), 1 << (weight - 1));
        let mut words: Vec<Word> = all.iter().map(word_from_composition).collect();
        words.sort();
        words.dedup();
        assert_eq!(words.len(), all.len());
    }
}
