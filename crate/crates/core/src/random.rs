//! Seeded random instances for cross-validation runs.
//!
//! Everything here is deterministic in the seed, so a failing instance can be
//! replayed by rerunning with the reported seed. Sizes stay small on purpose:
//! the instances feed equivalence checks against reference constructions and
//! bounded word-set oracles, not benchmarks.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::alphabet::Alphabet;
use crate::dfa::Dfa;
use crate::inf::{generated_language_dfa, UncontrollableSet};
use crate::mask::{Mask, PRIME_MARKER};
use crate::nfa::Nfa;

/// Event tokens drawn for random domain alphabets.
const DOMAIN_POOL: [&str; 4] = ["a", "b", "c", "d"];
/// Image tokens for random non-projection masks, disjoint from the domain
/// pool so masks that merge or rename events are clearly visible in output.
const IMAGE_POOL: [&str; 4] = ["w", "x", "y", "z"];

pub struct InstanceRng {
    rng: ChaCha8Rng,
}

impl InstanceRng {
    pub fn new(seed: u64) -> Self {
        InstanceRng {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Alphabet of 1..=max_events tokens from the domain pool.
    pub fn alphabet(&mut self, max_events: usize) -> Alphabet {
        let k = self.rng.gen_range(1..=max_events.min(DOMAIN_POOL.len()));
        Alphabet::new(DOMAIN_POOL[..k].iter().copied()).expect("pool tokens are valid")
    }

    /// Partial DFA with 1..=max_states states; each (state, event) slot is
    /// filled with the given probability, each state is marked with
    /// probability one half, and the initial state is state 0.
    pub fn dfa(&mut self, max_states: usize, alphabet: &Alphabet, density: f64) -> Dfa {
        let n = self.rng.gen_range(1..=max_states.max(1));
        let mut b = Dfa::builder(alphabet.clone());
        for s in 0..n {
            b.add_state(s.to_string()).expect("fresh numeral names");
        }
        b.set_initial(0).expect("state 0 exists");
        let mut any_marked = false;
        for s in 0..n {
            if self.rng.gen_bool(0.5) {
                b.set_marked(s).expect("state exists");
                any_marked = true;
            }
        }
        if !any_marked {
            let s = self.rng.gen_range(0..n);
            b.set_marked(s).expect("state exists");
        }
        for s in 0..n {
            for e in alphabet.ids() {
                if self.rng.gen_bool(density) {
                    let t = self.rng.gen_range(0..n);
                    b.add_transition(s, alphabet.event(e), t)
                        .expect("one target per slot");
                }
            }
        }
        b.build()
    }

    /// Nonempty prefix-closed DFA: a random DFA with every reachable state
    /// marked. At least the empty word is in the language.
    pub fn prefix_closed_dfa(&mut self, max_states: usize, alphabet: &Alphabet, density: f64) -> Dfa {
        let d = self.dfa(max_states, alphabet, density);
        generated_language_dfa(&d)
    }

    /// NFA with every state marked, a sprinkling of epsilon transitions, and
    /// up to two successors per (state, event) slot.
    pub fn nfa_all_marked(&mut self, max_states: usize, alphabet: &Alphabet, density: f64) -> Nfa {
        let n = self.rng.gen_range(1..=max_states.max(1));
        let mut b = Nfa::builder(alphabet.clone());
        for s in 0..n {
            b.add_state(s.to_string()).expect("fresh numeral names");
        }
        b.set_initial(0).expect("state 0 exists");
        for s in 0..n {
            b.set_marked(s).expect("state exists");
            for e in alphabet.ids() {
                if self.rng.gen_bool(density) {
                    let fan = if self.rng.gen_bool(0.5) { 1 } else { 2 };
                    for _ in 0..fan {
                        let t = self.rng.gen_range(0..n);
                        b.add_transition_id(s, Some(e), t).expect("state exists");
                    }
                }
            }
            if n > 1 && self.rng.gen_bool(0.1) {
                let t = self.rng.gen_range(0..n);
                if t != s {
                    b.add_transition_id(s, None, t).expect("state exists");
                }
            }
        }
        b.build()
    }

    /// Random mask over the domain: half the time a projection (each event
    /// kept with probability 0.6), otherwise a general mask into the image
    /// pool with roughly a quarter of the events erased. General masks merge
    /// events whenever two domain events draw the same image token.
    pub fn mask(&mut self, domain: &Alphabet) -> Mask {
        debug_assert!(domain.iter().all(|t| !t.contains(PRIME_MARKER)));
        if self.rng.gen_bool(0.5) {
            let observable: Vec<&str> = domain
                .iter()
                .filter(|_| self.rng.gen_bool(0.6))
                .collect();
            return Mask::projection(domain, &observable).expect("tokens from the domain");
        }
        let pool_size = self.rng.gen_range(1..=IMAGE_POOL.len());
        let mut pairs: Vec<(&str, Option<&str>)> = Vec::new();
        let mut used: Vec<&str> = Vec::new();
        for tok in domain.iter() {
            if self.rng.gen_bool(0.25) {
                pairs.push((tok, None));
            } else {
                let img = IMAGE_POOL[self.rng.gen_range(0..pool_size)];
                if !used.contains(&img) {
                    used.push(img);
                }
                pairs.push((tok, Some(img)));
            }
        }
        used.sort_unstable();
        let codomain = Alphabet::new(used).expect("pool tokens are valid");
        Mask::new(domain.clone(), codomain, &pairs).expect("total by construction")
    }

    /// Random uncontrollable subset: each event uncontrollable with
    /// probability 0.4.
    pub fn uncontrollable(&mut self, alphabet: &Alphabet) -> UncontrollableSet {
        let events: Vec<&str> = alphabet
            .iter()
            .filter(|_| self.rng.gen_bool(0.4))
            .collect();
        UncontrollableSet::new(alphabet, events).expect("tokens from the alphabet")
    }

    /// Uniform choice of one event token from the alphabet.
    pub fn event<'a>(&mut self, alphabet: &'a Alphabet) -> &'a str {
        let e = self.rng.gen_range(0..alphabet.len());
        alphabet.event(e)
    }
}
