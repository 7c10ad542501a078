//! Property tests over seeded random instances: language preservation of
//! the automaton algebra, canonical minimization, mask semantics, closure
//! laws, and the defining properties of the infimal constructions.

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use common::closure_then_uncontrollable_loop;
use infobs::alphabet::Word;
use infobs::closure::{is_prefix_closed_dfa, prefix_closure, supremal_prefix_closed};
use infobs::inf::{inf_c, inf_o, is_observable_bounded};
use infobs::io::{parse_dfa, parse_nfa, serialize_dfa, serialize_nfa};
use infobs::random::InstanceRng;
use infobs::Dfa;

const ENUM_LEN: usize = 5;

fn words(d: &Dfa, len: usize) -> BTreeSet<Word> {
    d.enumerate(len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn determinize_preserves_the_language(seed in 0u64..1 << 40) {
        let mut rng = InstanceRng::new(seed);
        let alphabet = rng.alphabet(3);
        let n = rng.nfa_all_marked(5, &alphabet, 0.7);
        let d = n.determinize();
        prop_assert_eq!(n.enumerate(ENUM_LEN), d.enumerate(ENUM_LEN));
    }

    #[test]
    fn minimize_preserves_and_is_canonical(seed in 0u64..1 << 40) {
        let mut rng = InstanceRng::new(seed);
        let alphabet = rng.alphabet(3);
        let d = rng.dfa(6, &alphabet, 0.7);
        let m = d.minimize();
        prop_assert_eq!(words(&d, ENUM_LEN), words(&m, ENUM_LEN));
        prop_assert!(m.num_states() <= d.num_states());
        // A second pass changes nothing, including state names.
        prop_assert_eq!(&m.minimize(), &m);
    }

    #[test]
    fn equivalent_languages_minimize_to_identical_automata(seed in 0u64..1 << 40) {
        let mut rng = InstanceRng::new(seed);
        let alphabet = rng.alphabet(3);
        let d = rng.dfa(6, &alphabet, 0.7);
        // The same language presented through a nondeterministic detour.
        let other = d.to_nfa().determinize();
        prop_assert_eq!(d.minimize(), other.minimize());
    }

    #[test]
    fn product_intersects_languages(seed in 0u64..1 << 40) {
        let mut rng = InstanceRng::new(seed);
        let alphabet = rng.alphabet(3);
        let a = rng.dfa(5, &alphabet, 0.7);
        let b = rng.dfa(5, &alphabet, 0.7);
        let p = a.product_intersection(&b).unwrap();
        let expect: BTreeSet<Word> = words(&a, ENUM_LEN)
            .intersection(&words(&b, ENUM_LEN))
            .cloned()
            .collect();
        prop_assert_eq!(words(&p, ENUM_LEN), expect);
    }

    #[test]
    fn closure_is_closed_and_contains_the_language(seed in 0u64..1 << 40) {
        let mut rng = InstanceRng::new(seed);
        let alphabet = rng.alphabet(3);
        let d = rng.dfa(6, &alphabet, 0.7);
        let c = prefix_closure(&d);
        prop_assert!(is_prefix_closed_dfa(&c));
        prop_assert!(words(&d, ENUM_LEN).is_subset(&words(&c, ENUM_LEN)));
        // Every prefix of an accepted word is accepted.
        for w in words(&c, ENUM_LEN) {
            let mut prefix = Word::empty();
            for tok in w.tokens() {
                prop_assert!(c.accepts(&prefix).unwrap());
                prefix.push(tok);
            }
        }
    }

    #[test]
    fn supremal_keeps_exactly_all_prefix_covered_words(seed in 0u64..1 << 40) {
        let mut rng = InstanceRng::new(seed);
        let alphabet = rng.alphabet(3);
        let d = rng.dfa(6, &alphabet, 0.7);
        let s = supremal_prefix_closed(&d);
        let lang = words(&d, ENUM_LEN);
        let expect: BTreeSet<Word> = lang
            .iter()
            .filter(|w| {
                let mut prefix = Word::empty();
                let mut all_in = lang.contains(&prefix);
                for tok in w.tokens() {
                    prefix.push(tok);
                    all_in = all_in && d.accepts(&prefix).unwrap();
                }
                all_in
            })
            .cloned()
            .collect();
        prop_assert_eq!(words(&s, ENUM_LEN), expect);
    }

    #[test]
    fn mask_image_and_inverse_agree_with_word_mapping(seed in 0u64..1 << 40) {
        let mut rng = InstanceRng::new(seed);
        let alphabet = rng.alphabet(3);
        let d = rng.dfa(5, &alphabet, 0.7);
        let m = rng.mask(&alphabet);
        let img = m.image(&d.to_nfa()).unwrap();
        // Erasing masks can shorten long words into the horizon, so only
        // the inclusion direction is sound on bounded enumerations.
        for w in words(&d, ENUM_LEN) {
            prop_assert!(img.accepts(&m.mask_word(&w).unwrap()).unwrap());
        }

        let inv = m.inverse(&img, &[]).unwrap().determinize();
        // Inverse membership is exactly image membership of the masked word.
        for w in inv.enumerate(ENUM_LEN) {
            prop_assert!(img.accepts(&m.mask_word(&w).unwrap()).unwrap());
        }
        for w in words(&d, ENUM_LEN) {
            prop_assert!(inv.accepts(&w).unwrap());
        }
    }

    #[test]
    fn inf_o_output_satisfies_its_defining_properties(seed in 0u64..1 << 40) {
        let mut rng = InstanceRng::new(seed);
        let alphabet = rng.alphabet(3);
        let k = rng.dfa(5, &alphabet, 0.7);
        let m = rng.mask(&alphabet);
        let r = inf_o(&k, &m).unwrap();
        let kbar = prefix_closure(&k);
        prop_assert!(is_prefix_closed_dfa(&r.dfa));
        prop_assert!(words(&kbar, ENUM_LEN).is_subset(&words(&r.dfa, ENUM_LEN)));
        if kbar.num_states() > 0 {
            prop_assert!(r.dfa.accepts(&Word::empty()).unwrap());
        }
        prop_assert!(is_observable_bounded(&r.dfa, &m, ENUM_LEN).unwrap());
        prop_assert!(r.dfa.num_states() <= (1 << kbar.num_states()) + 1);
    }

    #[test]
    fn inf_c_matches_generic_concatenation(seed in 0u64..1 << 40) {
        let mut rng = InstanceRng::new(seed);
        let alphabet = rng.alphabet(3);
        let k = rng.dfa(5, &alphabet, 0.7);
        let u = rng.uncontrollable(&alphabet);
        let ours = inf_c(&k, &u).unwrap();
        let generic = closure_then_uncontrollable_loop(&k, &u);
        prop_assert!(ours.equivalent(&generic).unwrap());
        // Closed under uncontrollable extension.
        for w in words(&ours, ENUM_LEN) {
            for &e in u.events() {
                let mut wu = w.clone();
                wu.push(alphabet.event(e));
                prop_assert!(ours.accepts(&wu).unwrap());
            }
        }
    }

    #[test]
    fn automaton_files_round_trip(seed in 0u64..1 << 40) {
        let mut rng = InstanceRng::new(seed);
        let alphabet = rng.alphabet(4);
        let d = rng.dfa(6, &alphabet, 0.7);
        prop_assert_eq!(&parse_dfa(&serialize_dfa(&d)).unwrap(), &d);
        let n = rng.nfa_all_marked(6, &alphabet, 0.7);
        prop_assert_eq!(&parse_nfa(&serialize_nfa(&n)).unwrap(), &n);
    }
}
