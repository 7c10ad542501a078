//! Shared helpers for integration tests: a generic concatenation oracle for
//! the controllable case and small construction conveniences.

use infobs::closure::prefix_closure;
use infobs::dfa::Dfa;
use infobs::inf::UncontrollableSet;
use infobs::nfa::Nfa;
use infobs::Alphabet;

/// Generic automaton for closure(K) followed by any sequence of
/// uncontrollable events: plain NFA concatenation of the all-marked closure
/// automaton with a one-state loop, independent of the structural tail
/// construction used by the library.
pub fn closure_then_uncontrollable_loop(k: &Dfa, u: &UncontrollableSet) -> Dfa {
    let kbar = prefix_closure(k);
    let n = kbar.num_states();
    if n == 0 {
        return Dfa::empty(k.alphabet().clone());
    }
    let alphabet = k.alphabet().clone();
    let mut b = Nfa::builder(alphabet.clone());
    for s in 0..n {
        b.add_state(format!("g{s}")).unwrap();
    }
    let loop_state = b.add_state("loop".to_string()).unwrap();
    if let Some(start) = kbar.initial() {
        b.set_initial(start).unwrap();
    }
    b.set_marked(loop_state).unwrap();
    for s in 0..n {
        for e in alphabet.ids() {
            if let Some(t) = kbar.successor(s, e) {
                b.add_transition_id(s, Some(e), t).unwrap();
            }
        }
        // Every closure state is marked, so every state concatenates into
        // the loop.
        b.add_transition_id(s, None, loop_state).unwrap();
    }
    for &e in u.events() {
        b.add_transition_id(loop_state, Some(e), loop_state).unwrap();
    }
    b.build().determinize().minimize()
}

/// One-state DFA accepting every word over the alphabet. Not every test
/// target uses every helper here.
#[allow(dead_code)]
pub fn universal_dfa(alphabet: &Alphabet) -> Dfa {
    let mut b = Dfa::builder(alphabet.clone());
    b.add_state("u".to_string()).unwrap();
    b.set_initial(0).unwrap();
    b.set_marked(0).unwrap();
    for e in alphabet.ids() {
        b.add_transition(0, alphabet.event(e), 0).unwrap();
    }
    b.build()
}
