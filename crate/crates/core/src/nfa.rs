//! Nondeterministic finite automata with epsilon transitions.
//!
//! States are dense indices `0..num_states` with unique display names kept
//! alongside; names are what file formats and DOT export show. The marked
//! language of an automaton is the set of words labeling a path from an
//! initial state to a marked state.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::alphabet::{Alphabet, EventId, Word};
use crate::dfa::Dfa;
use crate::error::{Error, Result};

pub type StateId = usize;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Nfa {
    alphabet: Alphabet,
    names: Vec<String>,
    /// delta[state][event] = sorted targets.
    delta: Vec<Vec<Vec<StateId>>>,
    /// eps[state] = sorted epsilon targets.
    eps: Vec<Vec<StateId>>,
    initial: Vec<StateId>,
    marked: Vec<StateId>,
}

/// Incremental constructor for [`Nfa`]. States are created with unique
/// names; transitions may be added in any order and duplicates collapse.
pub struct NfaBuilder {
    alphabet: Alphabet,
    names: Vec<String>,
    name_index: HashMap<String, StateId>,
    edges: BTreeSet<(StateId, Option<EventId>, StateId)>,
    initial: BTreeSet<StateId>,
    marked: BTreeSet<StateId>,
}

impl NfaBuilder {
    pub fn new(alphabet: Alphabet) -> Self {
        NfaBuilder {
            alphabet,
            names: Vec::new(),
            name_index: HashMap::new(),
            edges: BTreeSet::new(),
            initial: BTreeSet::new(),
            marked: BTreeSet::new(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    /// Adds a fresh state; duplicate names are an input error.
    pub fn add_state(&mut self, name: impl Into<String>) -> Result<StateId> {
        let name = name.into();
        if self.name_index.contains_key(&name) {
            return Err(Error::input(format!("duplicate state name '{name}'")));
        }
        let id = self.names.len();
        self.name_index.insert(name.clone(), id);
        self.names.push(name);
        Ok(id)
    }

    /// Returns the state with `name`, creating it if absent.
    pub fn state(&mut self, name: &str) -> StateId {
        match self.name_index.get(name) {
            Some(&id) => id,
            None => self.add_state(name).expect("name checked absent"),
        }
    }

    pub fn lookup(&self, name: &str) -> Option<StateId> {
        self.name_index.get(name).copied()
    }

    /// Adds a transition; `label` of `None` is an epsilon transition.
    pub fn add_transition(&mut self, src: StateId, label: Option<&str>, dst: StateId) -> Result<()> {
        let event = match label {
            Some(tok) => Some(self.alphabet.require(tok)?),
            None => None,
        };
        self.add_transition_id(src, event, dst)
    }

    pub fn add_transition_id(
        &mut self,
        src: StateId,
        event: Option<EventId>,
        dst: StateId,
    ) -> Result<()> {
        self.check_state(src)?;
        self.check_state(dst)?;
        if let Some(e) = event {
            if e >= self.alphabet.len() {
                return Err(Error::input(format!("event id {e} out of range")));
            }
        }
        self.edges.insert((src, event, dst));
        Ok(())
    }

    pub fn set_initial(&mut self, s: StateId) -> Result<()> {
        self.check_state(s)?;
        self.initial.insert(s);
        Ok(())
    }

    pub fn set_marked(&mut self, s: StateId) -> Result<()> {
        self.check_state(s)?;
        self.marked.insert(s);
        Ok(())
    }

    fn check_state(&self, s: StateId) -> Result<()> {
        if s >= self.names.len() {
            return Err(Error::input(format!("state id {s} out of range")));
        }
        Ok(())
    }

    pub fn build(self) -> Nfa {
        let n = self.names.len();
        let k = self.alphabet.len();
        let mut delta = vec![vec![Vec::new(); k]; n];
        let mut eps = vec![Vec::new(); n];
        for (src, event, dst) in self.edges {
            match event {
                Some(e) => delta[src][e].push(dst),
                None => eps[src].push(dst),
            }
        }
        Nfa {
            alphabet: self.alphabet,
            names: self.names,
            delta,
            eps,
            initial: self.initial.into_iter().collect(),
            marked: self.marked.into_iter().collect(),
        }
    }
}

impl Nfa {
    pub fn builder(alphabet: Alphabet) -> NfaBuilder {
        NfaBuilder::new(alphabet)
    }

    /// Assembles an automaton from parts already in internal form. Targets
    /// must be sorted and in range; callers inside the crate uphold this.
    pub(crate) fn from_parts(
        alphabet: Alphabet,
        names: Vec<String>,
        delta: Vec<Vec<Vec<StateId>>>,
        eps: Vec<Vec<StateId>>,
        initial: Vec<StateId>,
        marked: Vec<StateId>,
    ) -> Nfa {
        debug_assert_eq!(names.len(), delta.len());
        debug_assert_eq!(names.len(), eps.len());
        debug_assert!(delta.iter().all(|row| row.len() == alphabet.len()));
        Nfa {
            alphabet,
            names,
            delta,
            eps,
            initial,
            marked,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.names[s]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn marked(&self) -> &[StateId] {
        &self.marked
    }

    pub fn is_marked(&self, s: StateId) -> bool {
        self.marked.binary_search(&s).is_ok()
    }

    pub fn successors(&self, s: StateId, event: EventId) -> &[StateId] {
        &self.delta[s][event]
    }

    pub fn eps_successors(&self, s: StateId) -> &[StateId] {
        &self.eps[s]
    }

    /// All transitions in deterministic order; `None` labels are epsilon.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, Option<EventId>, StateId)> + '_ {
        (0..self.num_states()).flat_map(move |s| {
            self.eps[s]
                .iter()
                .map(move |&d| (s, None, d))
                .chain(self.alphabet.ids().flat_map(move |e| {
                    self.delta[s][e].iter().map(move |&d| (s, Some(e), d))
                }))
        })
    }

    /// States reachable from `set` by epsilon transitions alone, including
    /// `set` itself, as a sorted list. Unknown state ids are input errors.
    pub fn epsilon_closure(&self, set: &[StateId]) -> Result<Vec<StateId>> {
        for &s in set {
            if s >= self.num_states() {
                return Err(Error::input(format!("state id {s} out of range")));
            }
        }
        let mut seen = vec![false; self.num_states()];
        let mut queue: VecDeque<StateId> = VecDeque::new();
        for &s in set {
            if !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(s) = queue.pop_front() {
            for &d in &self.eps[s] {
                if !seen[d] {
                    seen[d] = true;
                    queue.push_back(d);
                }
            }
        }
        Ok((0..self.num_states()).filter(|&s| seen[s]).collect())
    }

    /// True when the automaton marks `word`. A token outside the alphabet is
    /// an input error.
    pub fn accepts(&self, word: &Word) -> Result<bool> {
        let ids = word.ids(&self.alphabet)?;
        let mut current = self.epsilon_closure(&self.initial)?;
        for e in ids {
            let mut next: BTreeSet<StateId> = BTreeSet::new();
            for &s in &current {
                next.extend(self.delta[s][e].iter().copied());
            }
            let next: Vec<StateId> = next.into_iter().collect();
            current = self.epsilon_closure(&next)?;
            if current.is_empty() {
                return Ok(false);
            }
        }
        Ok(current.iter().any(|&s| self.is_marked(s)))
    }

    /// All marked words of length at most `maxlen`, depth-first over state
    /// sets so only viable prefixes are explored.
    pub fn enumerate(&self, maxlen: usize) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        let start = self
            .epsilon_closure(&self.initial)
            .expect("initial states are in range");
        if start.is_empty() {
            return out;
        }
        let mut prefix: Vec<&str> = Vec::new();
        self.enumerate_from(&start, maxlen, &mut prefix, &mut out);
        out
    }

    fn enumerate_from<'a>(
        &'a self,
        current: &[StateId],
        remaining: usize,
        prefix: &mut Vec<&'a str>,
        out: &mut BTreeSet<Word>,
    ) {
        if current.iter().any(|&s| self.is_marked(s)) {
            out.insert(Word(prefix.iter().map(|t| t.to_string()).collect()));
        }
        if remaining == 0 {
            return;
        }
        for e in self.alphabet.ids() {
            let mut next: BTreeSet<StateId> = BTreeSet::new();
            for &s in current {
                next.extend(self.delta[s][e].iter().copied());
            }
            if next.is_empty() {
                continue;
            }
            let next: Vec<StateId> = next.into_iter().collect();
            let next = self
                .epsilon_closure(&next)
                .expect("transition targets are in range");
            prefix.push(self.alphabet.event(e));
            self.enumerate_from(&next, remaining - 1, prefix, out);
            prefix.pop();
        }
    }

    /// Subset construction. Returns the reachable part of the subset
    /// automaton as a partial DFA; a subset is marked iff it intersects the
    /// marked set. Subset states are named by their sorted member names.
    pub fn determinize(&self) -> Dfa {
        self.determinize_budgeted(None)
            .expect("unbounded determinization cannot exceed a budget")
            .0
    }

    /// Subset construction that also reports, per subset state, the sorted
    /// member states of the input automaton.
    pub fn determinize_mapped(&self) -> (Dfa, Vec<Vec<StateId>>) {
        self.determinize_budgeted(None)
            .expect("unbounded determinization cannot exceed a budget")
    }

    /// Subset construction aborting with a budget error once more than
    /// `max_subsets` subset states are created.
    pub fn determinize_budgeted(
        &self,
        max_subsets: Option<usize>,
    ) -> Result<(Dfa, Vec<Vec<StateId>>)> {
        let blocks = self.num_states().div_ceil(64).max(1);
        let to_key = |set: &[StateId]| -> Box<[u64]> {
            let mut key = vec![0u64; blocks].into_boxed_slice();
            for &s in set {
                key[s / 64] |= 1 << (s % 64);
            }
            key
        };

        let start = self.epsilon_closure(&self.initial)?;
        let mut subsets: Vec<Vec<StateId>> = Vec::new();
        let mut index: HashMap<Box<[u64]>, StateId> = HashMap::new();
        let mut delta_rows: Vec<Vec<Option<StateId>>> = Vec::new();
        let mut queue: VecDeque<StateId> = VecDeque::new();

        if !start.is_empty() {
            if max_subsets == Some(0) {
                return Err(Error::budget("subset construction exceeded 0 states"));
            }
            index.insert(to_key(&start), 0);
            subsets.push(start);
            delta_rows.push(vec![None; self.alphabet.len()]);
            queue.push_back(0);
        }

        while let Some(id) = queue.pop_front() {
            for e in self.alphabet.ids() {
                let mut step: BTreeSet<StateId> = BTreeSet::new();
                for &s in &subsets[id] {
                    step.extend(self.delta[s][e].iter().copied());
                }
                if step.is_empty() {
                    continue;
                }
                let step: Vec<StateId> = step.into_iter().collect();
                let closed = self.epsilon_closure(&step)?;
                let key = to_key(&closed);
                let target = match index.get(&key) {
                    Some(&t) => t,
                    None => {
                        let t = subsets.len();
                        if let Some(max) = max_subsets {
                            if t >= max {
                                return Err(Error::budget(format!(
                                    "subset construction exceeded {max} states"
                                )));
                            }
                        }
                        index.insert(key, t);
                        subsets.push(closed);
                        delta_rows.push(vec![None; self.alphabet.len()]);
                        queue.push_back(t);
                        t
                    }
                };
                delta_rows[id][e] = Some(target);
            }
        }

        let names: Vec<String> = subsets.iter().map(|set| self.subset_name(set)).collect();
        let marked: Vec<StateId> = (0..subsets.len())
            .filter(|&i| subsets[i].iter().any(|&s| self.is_marked(s)))
            .collect();
        let initial = if subsets.is_empty() { None } else { Some(0) };
        let dfa = Dfa::from_parts(self.alphabet.clone(), names, delta_rows, initial, marked);
        Ok((dfa, subsets))
    }

    fn subset_name(&self, set: &[StateId]) -> String {
        let members: Vec<&str> = set.iter().map(|&s| self.names[s].as_str()).collect();
        format!("{{{}}}", members.join(","))
    }

    /// Nondeterministic union of automata over one alphabet: disjoint union
    /// of the state sets keeping every initial and marked state. When state
    /// names collide across parts, every state is renamed to `name_k` with
    /// `k` the part index.
    pub fn union_all(parts: &[Nfa]) -> Result<Nfa> {
        let first = parts
            .first()
            .ok_or_else(|| Error::input("union of zero automata"))?;
        for p in parts {
            if p.alphabet != first.alphabet {
                return Err(Error::input("union requires identical alphabets"));
            }
        }
        let mut all_names: BTreeSet<&str> = BTreeSet::new();
        let mut collision = false;
        for p in parts {
            for name in &p.names {
                if !all_names.insert(name) {
                    collision = true;
                }
            }
        }

        let mut builder = NfaBuilder::new(first.alphabet.clone());
        let mut offsets = Vec::with_capacity(parts.len());
        for (k, p) in parts.iter().enumerate() {
            offsets.push(builder.num_states());
            for name in &p.names {
                let name = if collision {
                    format!("{name}_{k}")
                } else {
                    name.clone()
                };
                builder.add_state(name)?;
            }
        }
        for (k, p) in parts.iter().enumerate() {
            let off = offsets[k];
            for (src, event, dst) in p.transitions() {
                builder.add_transition_id(off + src, event, off + dst)?;
            }
            for &s in &p.initial {
                builder.set_initial(off + s)?;
            }
            for &s in &p.marked {
                builder.set_marked(off + s)?;
            }
        }
        Ok(builder.build())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    /// Three states with an epsilon edge 1 -> 2; marks closure({ab}) spread
    /// over nondeterministic a-edges.
    fn sample() -> Nfa {
        let mut b = Nfa::builder(ab());
        let s0 = b.add_state("0").unwrap();
        let s1 = b.add_state("1").unwrap();
        let s2 = b.add_state("2").unwrap();
        b.add_transition(s0, Some("a"), s1).unwrap();
        b.add_transition(s0, Some("a"), s2).unwrap();
        b.add_transition(s1, Some("b"), s2).unwrap();
        b.set_initial(s0).unwrap();
        b.set_marked(s0).unwrap();
        b.set_marked(s2).unwrap();
        b.build()
    }

    #[test]
    fn epsilon_closure_follows_chains() {
        let mut b = Nfa::builder(ab());
        let s0 = b.add_state("0").unwrap();
        let s1 = b.add_state("1").unwrap();
        let s2 = b.add_state("2").unwrap();
        b.add_transition(s0, None, s1).unwrap();
        b.add_transition(s1, None, s2).unwrap();
        b.set_initial(s0).unwrap();
        let nfa = b.build();
        assert_eq!(nfa.epsilon_closure(&[s0]).unwrap(), vec![s0, s1, s2]);
        assert_eq!(nfa.epsilon_closure(&[s2]).unwrap(), vec![s2]);
        assert!(nfa.epsilon_closure(&[7]).is_err());
    }

    #[test]
    fn accepts_walks_state_sets() {
        let nfa = sample();
        assert!(nfa.accepts(&Word::empty()).unwrap());
        assert!(nfa.accepts(&Word::of(&["a"])).unwrap());
        assert!(nfa.accepts(&Word::of(&["a", "b"])).unwrap());
        assert!(!nfa.accepts(&Word::of(&["b"])).unwrap());
        assert!(!nfa.accepts(&Word::of(&["a", "b", "a"])).unwrap());
        assert!(nfa.accepts(&Word::of(&["a", "z"])).is_err());
    }

    #[test]
    fn accepts_is_false_without_initial_states() {
        let mut b = Nfa::builder(ab());
        let s0 = b.add_state("0").unwrap();
        b.set_marked(s0).unwrap();
        let nfa = b.build();
        assert!(!nfa.accepts(&Word::empty()).unwrap());
    }

    #[test]
    fn enumerate_collects_bounded_language() {
        let nfa = sample();
        let words = nfa.enumerate(4);
        let expected: BTreeSet<Word> =
            [Word::empty(), Word::of(&["a"]), Word::of(&["a", "b"])].into();
        assert_eq!(words, expected);
    }

    #[test]
    fn determinize_merges_nondeterministic_branches() {
        let nfa = sample();
        let (dfa, subsets) = nfa.determinize_mapped();
        assert_eq!(dfa.num_states(), 3);
        assert_eq!(subsets[0], vec![0]);
        // After `a` both targets are live.
        assert_eq!(subsets[1], vec![1, 2]);
        for len in 0..=4 {
            assert_eq!(nfa.enumerate(len), dfa.enumerate(len));
        }
        assert_eq!(dfa.state_name(1), "{1,2}");
    }

    #[test]
    fn determinize_empty_initial_yields_empty_dfa() {
        let mut b = Nfa::builder(ab());
        let s0 = b.add_state("0").unwrap();
        b.set_marked(s0).unwrap();
        let nfa = b.build();
        let dfa = nfa.determinize();
        assert_eq!(dfa.num_states(), 0);
        assert_eq!(dfa.enumerate(3).len(), 0);
    }

    #[test]
    fn determinize_budget_trips() {
        let nfa = sample();
        let err = nfa.determinize_budgeted(Some(1)).unwrap_err();
        assert!(matches!(err, Error::Budget(_)));
    }

    #[test]
    fn union_renames_on_collision() {
        let mut b1 = Nfa::builder(ab());
        let s0 = b1.add_state("0").unwrap();
        b1.set_initial(s0).unwrap();
        b1.set_marked(s0).unwrap();
        let p1 = b1.build();

        let mut b2 = Nfa::builder(ab());
        let t0 = b2.add_state("0").unwrap();
        let t1 = b2.add_state("1").unwrap();
        b2.add_transition(t0, Some("a"), t1).unwrap();
        b2.set_initial(t0).unwrap();
        b2.set_marked(t1).unwrap();
        let p2 = b2.build();

        let u = Nfa::union_all(&[p1, p2]).unwrap();
        assert_eq!(u.num_states(), 3);
        assert_eq!(u.names(), &["0_0", "0_1", "1_1"]);
        assert!(u.accepts(&Word::empty()).unwrap());
        assert!(u.accepts(&Word::of(&["a"])).unwrap());
        assert!(!u.accepts(&Word::of(&["a", "a"])).unwrap());
    }

    #[test]
    fn union_requires_same_alphabet() {
        let p1 = Nfa::builder(ab()).build();
        let p2 = Nfa::builder(Alphabet::new(["a"]).unwrap()).build();
        assert!(Nfa::union_all(&[p1, p2]).is_err());
    }
}
