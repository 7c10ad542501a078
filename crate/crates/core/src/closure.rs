//! Prefix closures, right quotients by an event, and the primed
//! quotient-union construction.
//!
//! The quotient union packs every right quotient of a prefix-closed language
//! into one automaton: a single fresh marked sink is entered from state q
//! under the primed event e' exactly when the input moves from q under e
//! into a marked state. The marked language is then the union over events e
//! of (L/e)·e', using at most one state more than the input.

use crate::alphabet::{Alphabet, EventId};
use crate::dfa::{fresh_name, Dfa};
use crate::error::{Error, Result};
use crate::mask::PrimedAlphabet;
use crate::nfa::{Nfa, StateId};

/// A DFA over a combined base-and-primed alphabet whose only marked state is
/// a sink without outgoing transitions, entered only by primed events.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuotientUnionDfa {
    pub dfa: Dfa,
    pub sink: StateId,
}

/// Automaton for the prefix closure of the marked language: co-reachable and
/// unreachable states are dropped first, then every remaining state is
/// marked. Yields the zero-state automaton for the empty language.
pub fn prefix_closure(a: &Dfa) -> Dfa {
    let trimmed = a.trim();
    let all: Vec<StateId> = (0..trimmed.num_states()).collect();
    let delta = (0..trimmed.num_states())
        .map(|s| {
            a.alphabet()
                .ids()
                .map(|e| trimmed.successor(s, e))
                .collect()
        })
        .collect();
    Dfa::from_parts(
        a.alphabet().clone(),
        trimmed.names().to_vec(),
        delta,
        trimmed.initial(),
        all,
    )
}

/// Automaton for L/e = { w : we in L }: same structure, marking exactly the
/// states whose e-successor is marked.
pub fn right_quotient_event(a: &Dfa, event: &str) -> Result<Dfa> {
    let e = a.alphabet().require(event)?;
    let marked = quotient_marking(a, e);
    let delta = (0..a.num_states())
        .map(|s| a.alphabet().ids().map(|x| a.successor(s, x)).collect())
        .collect();
    Ok(Dfa::from_parts(
        a.alphabet().clone(),
        a.names().to_vec(),
        delta,
        a.initial(),
        marked,
    ))
}

fn quotient_marking(a: &Dfa, e: EventId) -> Vec<StateId> {
    (0..a.num_states())
        .filter(|&s| a.successor(s, e).is_some_and(|d| a.is_marked(d)))
        .collect()
}

/// The quotient-union construction over the primed copy of the input
/// alphabet. The input must be over `primed.base()`; the output marks
/// the union over events e of (L_m/e)·e' and always contains the sink, even
/// when every quotient is empty.
pub fn quotient_union_primed(a: &Dfa, primed: &PrimedAlphabet) -> Result<QuotientUnionDfa> {
    if a.alphabet() != primed.base() {
        return Err(Error::input(
            "quotient union requires the automaton alphabet to equal the base alphabet",
        ));
    }
    let combined = primed.combined().clone();
    let n = a.num_states();
    let sink = n;
    let mut names = a.names().to_vec();
    names.push(fresh_name(&names, n));
    let mut delta: Vec<Vec<Option<StateId>>> = vec![vec![None; combined.len()]; n + 1];
    for s in 0..n {
        for e in a.alphabet().ids() {
            if let Some(d) = a.successor(s, e) {
                let tok = a.alphabet().event(e);
                let base_id = combined.index_of(tok).expect("base is in combined");
                delta[s][base_id] = Some(d);
                if a.is_marked(d) {
                    let primed_id = combined
                        .index_of(&primed.primed_token(tok))
                        .expect("primed partner is in combined");
                    delta[s][primed_id] = Some(sink);
                }
            }
        }
    }
    let dfa = Dfa::from_parts(combined, names, delta, a.initial(), vec![sink]);
    Ok(QuotientUnionDfa { dfa, sink })
}

/// Automaton for the supremal prefix-closed sublanguage of the marked
/// language: unmarked states and their incident transitions are removed,
/// then the remainder is trimmed to its reachable part. A word survives
/// exactly when all of its prefixes were marked.
pub fn supremal_prefix_closed(a: &Dfa) -> Dfa {
    let keep: Vec<bool> = (0..a.num_states()).map(|s| a.is_marked(s)).collect();
    let marked_only = a.restrict(&keep);
    let reach = marked_only.reachable();
    marked_only.restrict(&reach)
}

/// True iff the marked language equals its prefix closure: after trimming,
/// every state on a path to a marked state must itself be marked.
pub fn is_prefix_closed_dfa(a: &Dfa) -> bool {
    let trimmed = a.trim();
    (0..trimmed.num_states()).all(|s| trimmed.is_marked(s))
}

/// Prefix-closedness of an NFA language via determinization, bounded by
/// `budget` subset states (default 2^20); exceeding it is a budget error.
pub fn is_prefix_closed_nfa(a: &Nfa, budget: Option<usize>) -> Result<bool> {
    let max = budget.unwrap_or(1 << 20);
    let (dfa, _) = a.determinize_budgeted(Some(max))?;
    Ok(is_prefix_closed_dfa(&dfa))
}

/// Convenience wrapper building the primed copy of the automaton alphabet.
pub fn primed_for(alphabet: &Alphabet) -> Result<PrimedAlphabet> {
    PrimedAlphabet::new(alphabet)
}
