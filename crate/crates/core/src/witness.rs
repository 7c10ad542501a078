//! Parameterized automaton families with known extremal behavior, plus the
//! fooling-set lower-bound check for nondeterministic state complexity.

use crate::alphabet::{Alphabet, Word};
use crate::dfa::Dfa;
use crate::error::{Error, Result};
use crate::nfa::Nfa;

/// Family showing the quotient-union bound n+1 is tight: a two-letter chain
/// 0 -> 1 -> ... -> n-1 under both letters, an a-loop on the last state,
/// every state marked. Requires n >= 2.
pub fn quotient_tight(n: usize) -> Result<Dfa> {
    if n < 2 {
        return Err(Error::input("quotient family needs at least 2 states"));
    }
    let mut b = Dfa::builder(Alphabet::new(["a", "b"])?);
    for i in 0..n {
        b.add_state(i.to_string())?;
    }
    for i in 0..n - 1 {
        b.add_transition(i, "a", i + 1)?;
        b.add_transition(i, "b", i + 1)?;
    }
    b.add_transition(n - 1, "a", n - 1)?;
    b.set_initial(0)?;
    for i in 0..n {
        b.set_marked(i)?;
    }
    Ok(b.build())
}

/// Family over {a, b, c} whose infimal observable superlanguage under the
/// projection erasing c needs at least 3/4 * 2^n - 1 states: an a-cycle
/// through all n states, b-loops on 0 and n-1 with a shifted b-chain in
/// between, one c-edge from n-1 back to 0, state 0 initial and marked.
/// The defining rules are a union; for n = 2 they coincide without conflict.
/// Requires n >= 2.
pub fn lower_bound(n: usize) -> Result<Dfa> {
    if n < 2 {
        return Err(Error::input("lower-bound family needs at least 2 states"));
    }
    let mut b = Dfa::builder(Alphabet::new(["a", "b", "c"])?);
    for i in 0..n {
        b.add_state(i.to_string())?;
    }
    for i in 0..n {
        b.add_transition(i, "a", (i + 1) % n)?;
    }
    b.add_transition(0, "b", 0)?;
    b.add_transition(n - 1, "b", n - 1)?;
    for i in 1..=n.saturating_sub(3) {
        b.add_transition(i, "b", i + 1)?;
    }
    b.add_transition(n - 2, "b", 0)?;
    b.add_transition(n - 1, "c", 0)?;
    b.set_initial(0)?;
    b.set_marked(0)?;
    Ok(b.build())
}

/// The first eight primes, indexable by the family parameter.
pub const PRIMES: [usize; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Product of the first n primes.
pub fn primorial(n: usize) -> Result<usize> {
    if n == 0 || n > PRIMES.len() {
        return Err(Error::input(format!(
            "prime family parameter must be between 1 and {}",
            PRIMES.len()
        )));
    }
    Ok(PRIMES[..n].iter().product())
}

/// Nondeterministic union of a one-state part marking only the empty word
/// and, for each of the first n primes p, a p-cycle under a marking the
/// counts not divisible by p. The union marks a* minus the positive
/// multiples of the primorial; 1 + sum of the first n primes states total.
/// Requires 1 <= n <= 8.
pub fn prime_nfa(n: usize) -> Result<Nfa> {
    primorial(n)?;
    let alphabet = Alphabet::new(["a"])?;
    let mut parts: Vec<Nfa> = Vec::new();
    let mut single = Nfa::builder(alphabet.clone());
    let s = single.add_state("0")?;
    single.set_initial(s)?;
    single.set_marked(s)?;
    parts.push(single.build());
    for &p in &PRIMES[..n] {
        let mut b = Nfa::builder(alphabet.clone());
        for i in 0..p {
            b.add_state(i.to_string())?;
        }
        for i in 0..p {
            b.add_transition(i, Some("a"), (i + 1) % p)?;
        }
        b.set_initial(0)?;
        for i in 1..p {
            b.set_marked(i)?;
        }
        parts.push(b.build());
    }
    Nfa::union_all(&parts)
}

/// Two-state worked example for the quotient construction: edges 0 -> 1
/// under a and b, 1 -> 0 under c, an a-loop on 1; state 1 is marked.
pub fn quotient_example() -> Dfa {
    let mut b = Dfa::builder(Alphabet::new(["a", "b", "c"]).expect("fixed alphabet"));
    let s0 = b.add_state("0").expect("fresh");
    let s1 = b.add_state("1").expect("fresh");
    b.add_transition(s0, "a", s1).expect("valid");
    b.add_transition(s0, "b", s1).expect("valid");
    b.add_transition(s1, "a", s1).expect("valid");
    b.add_transition(s1, "c", s0).expect("valid");
    b.set_initial(s0).expect("valid");
    b.set_marked(s1).expect("valid");
    b.build()
}

/// Three-state nondeterministic example marking the prefix closure of {ab}
/// without marking every state: two a-successors from the initial state and
/// a b-edge between them; states 0 and 2 are marked.
pub fn closure_example() -> Nfa {
    let mut b = Nfa::builder(Alphabet::new(["a", "b"]).expect("fixed alphabet"));
    let s0 = b.add_state("0").expect("fresh");
    let s1 = b.add_state("1").expect("fresh");
    let s2 = b.add_state("2").expect("fresh");
    b.add_transition(s0, Some("a"), s1).expect("valid");
    b.add_transition(s0, Some("a"), s2).expect("valid");
    b.add_transition(s1, Some("b"), s2).expect("valid");
    b.set_initial(s0).expect("valid");
    b.set_marked(s0).expect("valid");
    b.set_marked(s2).expect("valid");
    b.build()
}

/// A nonempty family of word pairs for the fooling-set technique.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FoolingSet {
    pairs: Vec<(Word, Word)>,
}

impl FoolingSet {
    pub fn new(pairs: Vec<(Word, Word)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::input("a fooling set needs at least one pair"));
        }
        Ok(FoolingSet { pairs })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn pairs(&self) -> &[(Word, Word)] {
        &self.pairs
    }
}

/// Fooling set of size primorial(n) for the prime family's supremal
/// language: the pairs (a^i, a^{primorial - i - 1}).
pub fn prime_fooling_set(n: usize) -> Result<FoolingSet> {
    let p = primorial(n)?;
    FoolingSet::new(
        (0..p)
            .map(|i| (Word::repeat("a", i), Word::repeat("a", p - i - 1)))
            .collect(),
    )
}

/// Checks the fooling-set conditions against a membership predicate: every
/// concatenated pair x_i y_i must lie in the language, and for distinct
/// i and j at least one of x_i y_j, x_j y_i must not. When both conditions
/// hold, every NFA for the language has at least as many states as pairs.
pub fn fooling_set_check<F>(member: F, set: &FoolingSet) -> bool
where
    F: Fn(&Word) -> bool,
{
    let pairs = set.pairs();
    for (x, y) in pairs {
        if !member(&x.concat(y)) {
            return false;
        }
    }
    for i in 0..pairs.len() {
        for j in (i + 1)..pairs.len() {
            let cross_ij = member(&pairs[i].0.concat(&pairs[j].1));
            let cross_ji = member(&pairs[j].0.concat(&pairs[i].1));
            if cross_ij && cross_ji {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::{is_prefix_closed_nfa, prefix_closure};

    #[test]
    fn quotient_tight_shape() {
        let d = quotient_tight(4).unwrap();
        assert_eq!(d.num_states(), 4);
        assert_eq!(d.marked().len(), 4);
        assert!(d.accepts(&Word::of(&["a", "b", "a"])).unwrap());
        assert!(d.accepts(&Word::of(&["a", "b", "b", "a", "a"])).unwrap());
        assert!(!d.accepts(&Word::of(&["a", "b", "b", "b"])).unwrap());
        assert!(quotient_tight(1).is_err());
        // Already prefix-closed and minimal: distinguishable by b-run length.
        assert_eq!(d.minimize().num_states(), 4);
    }

    #[test]
    fn lower_bound_matches_rule_table_for_n4() {
        let d = lower_bound(4).unwrap();
        let a = |i: usize| d.successor(i, 0);
        let b = |i: usize| d.successor(i, 1);
        let c = |i: usize| d.successor(i, 2);
        assert_eq!((a(0), a(1), a(2), a(3)), (Some(1), Some(2), Some(3), Some(0)));
        assert_eq!((b(0), b(1), b(2), b(3)), (Some(0), Some(2), Some(0), Some(3)));
        assert_eq!((c(0), c(1), c(2), c(3)), (None, None, None, Some(0)));
        assert_eq!(d.initial(), Some(0));
        assert_eq!(d.marked(), &[0]);
    }

    #[test]
    fn lower_bound_accepts_coinciding_rules_at_n2() {
        let d = lower_bound(2).unwrap();
        assert_eq!(d.successor(0, 1), Some(0));
        assert_eq!(d.successor(1, 1), Some(1));
        assert_eq!(d.successor(1, 2), Some(0));
        assert!(lower_bound(1).is_err());
    }

    #[test]
    fn lower_bound_family_is_minimal() {
        for n in 2..=8 {
            let d = lower_bound(n).unwrap();
            assert_eq!(d.minimize().num_states(), n, "n = {n}");
        }
    }

    #[test]
    fn prime_nfa_marks_counts_not_divisible_by_primorial() {
        let a1 = prime_nfa(1).unwrap();
        assert_eq!(a1.num_states(), 3);
        let words: Vec<String> = a1.enumerate(4).iter().map(|w| w.to_string()).collect();
        assert_eq!(words, vec!["eps", "a", "a a a"]);

        let a2 = prime_nfa(2).unwrap();
        assert_eq!(a2.num_states(), 6);
        for j in 0..=13usize {
            let expected = j == 0 || j % 6 != 0;
            assert_eq!(
                a2.accepts(&Word::repeat("a", j)).unwrap(),
                expected,
                "length {j}"
            );
        }
        assert!(prime_nfa(0).is_err());
        assert!(prime_nfa(9).is_err());
    }

    #[test]
    fn prime_nfa_states_follow_primorial_sums() {
        for n in 1..=8 {
            let states = 1 + PRIMES[..n].iter().sum::<usize>();
            assert_eq!(prime_nfa(n).unwrap().num_states(), states);
        }
    }

    #[test]
    fn quotient_example_shape() {
        let d = quotient_example();
        assert_eq!(d.num_states(), 2);
        assert!(!is_prefix_closed_nfa(&d.to_nfa(), None).unwrap());
        assert!(d.accepts(&Word::of(&["a"])).unwrap());
        assert!(d.accepts(&Word::of(&["b", "a", "c", "a"])).unwrap());
        assert!(!d.accepts(&Word::of(&["a", "c"])).unwrap());
    }

    #[test]
    fn closure_example_is_prefix_closed_without_all_marked() {
        let n = closure_example();
        assert_eq!(n.marked().len(), 2);
        assert!(is_prefix_closed_nfa(&n, None).unwrap());
        let closed = prefix_closure(&n.determinize()).minimize();
        assert!(n.determinize().equivalent(&closed).unwrap());
        assert!(!n.accepts(&Word::of(&["b"])).unwrap());
    }

    #[test]
    fn fooling_set_rejects_compatible_pairs() {
        // closure({a}): both cross products stay in the language.
        let lang = |w: &Word| w.len() <= 1 && w.tokens().all(|t| t == "a");
        let set = FoolingSet::new(vec![
            (Word::empty(), Word::empty()),
            (Word::of(&["a"]), Word::empty()),
        ])
        .unwrap();
        assert!(!fooling_set_check(lang, &set));
        assert!(FoolingSet::new(vec![]).is_err());
    }

    #[test]
    fn fooling_set_accepts_prime_family_witness() {
        let p = primorial(2).unwrap();
        let member = |w: &Word| w.len() <= p - 1 && w.tokens().all(|t| t == "a");
        let set = prime_fooling_set(2).unwrap();
        assert_eq!(set.len(), p);
        assert!(fooling_set_check(member, &set));
    }
}
