//! Property tests for the structural invariants: round trips, equivalence
//! laws, and closure behavior on randomized inputs.

use std::collections::BTreeSet;

use proptest::prelude::*;

use sequitur::engines::pattern::{adjective_close, Pattern};
use sequitur::engines::perfect::{strong_close, PerfectLanguage};
use sequitur::formula::{self, Formula};
use sequitur::vset::{transitive_closure, VSet};
use sequitur::word::{encode, equivalent, word_of, Alphabet, Code, PartialSequence, Word};

fn small_alphabet() -> Alphabet {
    Alphabet::new(["a", "b", "|||"], "|||").unwrap()
}

fn word_strategy(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(prop::sample::select(vec!["a", "b", "|||"]), 1..=max_len)
        .prop_map(|glyphs| Word::new(glyphs).unwrap())
}

/// A random segmentation of a word, as the partial sequence that spells it.
fn segmentation_strategy(w: Word) -> impl Strategy<Value = PartialSequence> {
    let len = w.len();
    prop::collection::vec(any::<bool>(), len.saturating_sub(1))
        .prop_map(move |cuts| {
            let alphabet = small_alphabet();
            let mut parts = Vec::new();
            let mut start = 0;
            for (i, cut) in cuts.iter().enumerate() {
                if *cut {
                    parts.push(w.subword(start, i + 1).unwrap());
                    start = i + 1;
                }
            }
            parts.push(w.subword(start, len).unwrap());
            let entries: Vec<Code> = parts
                .iter()
                .rev()
                .map(|p| encode(p, &alphabet).unwrap())
                .collect();
            PartialSequence::new(entries).unwrap()
        })
}

fn formula_strategy() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        (0u32..6).prop_map(formula::prim),
        Just(formula::very()),
        Just(formula::perfect()),
        prop::sample::select(vec!["bold", "kind", "just"]).prop_map(formula::term),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| formula::implies(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| formula::iff(a, b)),
        ]
    })
}

fn vset_strategy() -> impl Strategy<Value = VSet> {
    let leaf = prop_oneof![
        prop::sample::select(vec!["a", "b", "c"]).prop_map(VSet::atom),
        Just(VSet::empty()),
    ];
    leaf.prop_recursive(3, 16, 3, |inner| {
        prop::collection::btree_set(inner, 0..3).prop_map(VSet::Set)
    })
}

proptest! {
    #[test]
    fn codes_round_trip(w in word_strategy(10)) {
        let alphabet = small_alphabet();
        let code = encode(&w, &alphabet).unwrap();
        prop_assert_eq!(sequitur::word::decode(code, &alphabet).unwrap(), w);
    }

    #[test]
    fn reconstruction_joins_in_inverse_index_order(
        w in word_strategy(8).prop_flat_map(|w| (Just(w.clone()), segmentation_strategy(w)))
    ) {
        let (word, seq) = w;
        let alphabet = small_alphabet();
        // Oracle: concatenate decoded entries from the top index down.
        let mut oracle = String::new();
        for i in (0..=seq.dom_upper()).rev() {
            oracle.push_str(&sequitur::word::decode(seq.get(i).unwrap(), &alphabet)
                .unwrap()
                .to_string());
        }
        prop_assert_eq!(word_of(&seq, &alphabet).unwrap().to_string(), oracle);
        prop_assert_eq!(word_of(&seq, &alphabet).unwrap(), word);
    }

    #[test]
    fn segment_equivalence_is_an_equivalence(
        trio in word_strategy(6).prop_flat_map(|w| (
            segmentation_strategy(w.clone()),
            segmentation_strategy(w.clone()),
            segmentation_strategy(w),
        )),
        other in word_strategy(6).prop_flat_map(segmentation_strategy),
    ) {
        let alphabet = small_alphabet();
        let (f, g, h) = trio;
        prop_assert!(equivalent(&f, &f, &alphabet).unwrap());
        prop_assert_eq!(
            equivalent(&f, &g, &alphabet).unwrap(),
            equivalent(&g, &f, &alphabet).unwrap()
        );
        // Same source word: transitivity closes the triangle.
        prop_assert!(equivalent(&f, &g, &alphabet).unwrap());
        prop_assert!(equivalent(&g, &h, &alphabet).unwrap());
        prop_assert!(equivalent(&f, &h, &alphabet).unwrap());
        // Against an unrelated sequence, equivalence matches word identity.
        let same = word_of(&f, &alphabet).unwrap() == word_of(&other, &alphabet).unwrap();
        prop_assert_eq!(equivalent(&f, &other, &alphabet).unwrap(), same);
    }

    #[test]
    fn formula_text_round_trips(f in formula_strategy()) {
        let parsed: Formula = f.to_string().parse().unwrap();
        prop_assert_eq!(parsed, f);
    }

    #[test]
    fn adjective_close_is_a_closure(
        patterns in prop::collection::btree_set(
            (prop::sample::select(vec!["bold", "kind"]), 0u32..5)
                .prop_map(|(b, k)| Pattern::new(b, k)),
            0..6
        ),
        extra in (prop::sample::select(vec!["bold", "kind"]), 0u32..5)
            .prop_map(|(b, k)| Pattern::new(b, k)),
    ) {
        let closed = adjective_close(&patterns);
        prop_assert!(patterns.is_subset(&closed));
        prop_assert_eq!(adjective_close(&closed).len(), closed.len());
        let mut grown = patterns.clone();
        grown.insert(extra);
        prop_assert!(closed.is_subset(&adjective_close(&grown)));
    }

    #[test]
    fn strong_close_is_a_closure(
        picks in prop::collection::vec(0usize..17, 0..6)
    ) {
        let lang = PerfectLanguage::new(["b", "k"], 3);
        let all: Vec<Formula> = lang.all().into_iter().collect();
        let premises: BTreeSet<Formula> = picks.iter().map(|&i| all[i].clone()).collect();
        let closed = strong_close(&lang, &premises).unwrap();
        prop_assert!(premises.is_subset(&closed));
        prop_assert_eq!(strong_close(&lang, &closed).unwrap(), closed);
    }

    #[test]
    fn transitive_closure_laws(v in vset_strategy()) {
        let tc = transitive_closure(&v);
        for x in &tc {
            if let Some(members) = x.members() {
                for y in members {
                    prop_assert!(tc.contains(y));
                }
            }
        }
        prop_assert_eq!(transitive_closure(&VSet::Set(tc.clone())), tc.clone());
        // Monotone under adding a member.
        if let Some(members) = v.members() {
            let mut grown = members.clone();
            grown.insert(VSet::set([VSet::atom("zz")]));
            prop_assert!(tc.is_subset(&transitive_closure(&VSet::Set(grown))));
        }
    }
}
