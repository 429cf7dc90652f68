//! Word interleavings, and the reduction from interleaving membership to
//! acceptance by a two-copy distributed system.
//!
//! The reduction takes two final-state machines and produces one combined
//! empty-stack machine. Two copies of it, run as a distributed system on a
//! transformed input, empirically accept exactly when the original word
//! splits into one word per source machine. The transformed input prefixes a
//! separator and a role marker and then alternates separators with the
//! original symbols, and the combined machine is built so that the copy
//! playing the first role can step aside at a separator while the other copy
//! works: every state gets a silent twin that consumes a separator to return.

use std::collections::{BTreeSet, HashMap};

use indexmap::IndexSet;
use thiserror::Error;

use crate::dpas::DpasSystem;
use crate::pda::{AcceptanceMode, InputError, Move, Pda, PdaParts};
use crate::symbol::{fresh_name, StateId, Symbol};
use crate::verdict::{Budget, DifferentialEntry, DifferentialReport, VerdictKind};

/// All interleavings of two words that keep the relative order within each.
pub fn shuffle_words(first: &[Symbol], second: &[Symbol]) -> BTreeSet<Vec<Symbol>> {
    if first.is_empty() {
        return BTreeSet::from([second.to_vec()]);
    }
    if second.is_empty() {
        return BTreeSet::from([first.to_vec()]);
    }
    let mut out = BTreeSet::new();
    for mut tail in shuffle_words(&first[1..], second) {
        tail.insert(0, first[0].clone());
        out.insert(tail);
    }
    for mut tail in shuffle_words(first, &second[1..]) {
        tail.insert(0, second[0].clone());
        out.insert(tail);
    }
    out
}

/// How a word relates to the interleaving of two machine languages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShuffleDecision {
    /// The first split found, as the two extracted subsequences.
    Member {
        first: Vec<Symbol>,
        second: Vec<Symbol>,
    },
    NonMember,
    Inconclusive,
}

impl ShuffleDecision {
    pub fn as_verdict_kind(&self) -> VerdictKind {
        match self {
            ShuffleDecision::Member { .. } => VerdictKind::Accepted,
            ShuffleDecision::NonMember => VerdictKind::Rejected,
            ShuffleDecision::Inconclusive => VerdictKind::BudgetExhausted,
        }
    }
}

/// Decides whether `word` interleaves one word accepted by `first` with one
/// accepted by `second`, by trying every bipartition of its positions. Each
/// machine is widened to the pooled input alphabet first, so a subsequence
/// holding the other machine's symbols is merely rejected. Subsequence
/// verdicts are cached per machine.
pub fn shuffle_member2(
    word: &[Symbol],
    first: &Pda,
    second: &Pda,
    budget: &Budget,
) -> Result<ShuffleDecision, InputError> {
    assert!(word.len() < usize::BITS as usize, "word too long to split");
    let pooled: Vec<Symbol> = first
        .input_alphabet()
        .chain(second.input_alphabet())
        .cloned()
        .collect::<IndexSet<_>>()
        .into_iter()
        .collect();
    let widened_first = first
        .with_input_alphabet(pooled.clone())
        .expect("pooled alphabet is a superset");
    let widened_second = second
        .with_input_alphabet(pooled.clone())
        .expect("pooled alphabet is a superset");
    widened_first.check_word(word)?;

    let mut caches: [HashMap<Vec<Symbol>, VerdictKind>; 2] = [HashMap::new(), HashMap::new()];
    let machines = [&widened_first, &widened_second];
    let mut check = |side: usize, sub: Vec<Symbol>| -> VerdictKind {
        if let Some(kind) = caches[side].get(&sub) {
            return *kind;
        }
        let kind = machines[side]
            .accepts(&sub, budget)
            .expect("subsequence symbols were validated")
            .kind;
        caches[side].insert(sub, kind);
        kind
    };

    let mut saw_inconclusive = false;
    for mask in 0u64..(1u64 << word.len()) {
        let mut parts: [Vec<Symbol>; 2] = [Vec::new(), Vec::new()];
        for (pos, symbol) in word.iter().enumerate() {
            parts[((mask >> pos) & 1) as usize].push(symbol.clone());
        }
        let verdicts = [check(0, parts[0].clone()), check(1, parts[1].clone())];
        if verdicts.iter().all(|k| *k == VerdictKind::Accepted) {
            let [first, second] = parts;
            return Ok(ShuffleDecision::Member { first, second });
        }
        if verdicts.iter().any(|k| *k == VerdictKind::BudgetExhausted)
            && !verdicts.iter().any(|k| *k == VerdictKind::Rejected)
        {
            saw_inconclusive = true;
        }
    }
    Ok(if saw_inconclusive {
        ShuffleDecision::Inconclusive
    } else {
        ShuffleDecision::NonMember
    })
}

/// Adds a self-loop on `pause` at every state for every stack top, leaving
/// the stack unchanged, and widens the input alphabet by `pause`.
pub fn add_pause_loops(machine: &Pda, pause: &Symbol) -> Pda {
    let mut input_alphabet: Vec<Symbol> = machine.input_alphabet().cloned().collect();
    if !input_alphabet.contains(pause) {
        input_alphabet.push(pause.clone());
    }
    let mut moves = machine.moves().to_vec();
    for state in machine.states() {
        for top in machine.stack_alphabet() {
            moves.push(Move::new(
                state.clone(),
                Some(pause.clone()),
                top.clone(),
                state.clone(),
                vec![top.clone()],
            ));
        }
    }
    PdaParts {
        states: machine.states().cloned().collect(),
        input_alphabet,
        stack_alphabet: machine.stack_alphabet().cloned().collect(),
        moves,
        initial_state: machine.initial_state().clone(),
        bottom_symbol: machine.bottom_symbol().clone(),
        final_states: machine.final_states().cloned().collect(),
        acceptance_mode: machine.acceptance_mode(),
    }
    .build()
    .expect("adding loops preserves validity")
}

fn twin_names(machine: &Pda) -> HashMap<StateId, StateId> {
    let mut taken: Vec<String> = machine.states().map(|s| s.as_str().to_owned()).collect();
    let mut map = HashMap::new();
    for state in machine.states() {
        let name = fresh_name(
            &format!("{}^", state.as_str()),
            taken.iter().map(String::as_str),
        );
        taken.push(name.clone());
        map.insert(state.clone(), StateId::new(name));
    }
    map
}

/// Doubles the machine for the stepping-aside role: every state `q` gets a
/// twin that can be entered silently from `q` at any time and that carries
/// copies of all of `q`'s moves with untwinned targets. A run can thus duck
/// into a twin, stay while nothing it holds applies, and continue. Finals
/// and the initial state stay on the originals.
pub fn double_for_first_role(machine: &Pda) -> Pda {
    let twins = twin_names(machine);
    let mut states: Vec<StateId> = machine.states().cloned().collect();
    states.extend(machine.states().map(|s| twins[s].clone()));

    let mut moves = machine.moves().to_vec();
    for mv in machine.moves() {
        moves.push(Move {
            from: twins[&mv.from].clone(),
            input: mv.input.clone(),
            top: mv.top.clone(),
            to: mv.to.clone(),
            push: mv.push.clone(),
        });
    }
    for state in machine.states() {
        for top in machine.stack_alphabet() {
            moves.push(Move::new(
                state.clone(),
                None,
                top.clone(),
                twins[state].clone(),
                vec![top.clone()],
            ));
        }
    }

    PdaParts {
        states,
        input_alphabet: machine.input_alphabet().cloned().collect(),
        stack_alphabet: machine.stack_alphabet().cloned().collect(),
        moves,
        initial_state: machine.initial_state().clone(),
        bottom_symbol: machine.bottom_symbol().clone(),
        final_states: machine.final_states().cloned().collect(),
        acceptance_mode: machine.acceptance_mode(),
    }
    .build()
    .expect("doubling preserves validity")
}

/// Doubles the machine for the other role: twins exist but are inert except
/// for one move that consumes `pause` and returns to the original state.
pub fn double_for_second_role(machine: &Pda, pause: &Symbol) -> Pda {
    let twins = twin_names(machine);
    let mut states: Vec<StateId> = machine.states().cloned().collect();
    states.extend(machine.states().map(|s| twins[s].clone()));

    let mut input_alphabet: Vec<Symbol> = machine.input_alphabet().cloned().collect();
    if !input_alphabet.contains(pause) {
        input_alphabet.push(pause.clone());
    }

    let mut moves = machine.moves().to_vec();
    for state in machine.states() {
        for top in machine.stack_alphabet() {
            moves.push(Move::new(
                twins[state].clone(),
                Some(pause.clone()),
                top.clone(),
                state.clone(),
                vec![top.clone()],
            ));
        }
    }

    PdaParts {
        states,
        input_alphabet,
        stack_alphabet: machine.stack_alphabet().cloned().collect(),
        moves,
        initial_state: machine.initial_state().clone(),
        bottom_symbol: machine.bottom_symbol().clone(),
        final_states: machine.final_states().cloned().collect(),
        acceptance_mode: machine.acceptance_mode(),
    }
    .build()
    .expect("doubling preserves validity")
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error("the {which} source machine must accept by final state")]
    NotFinalState { which: &'static str },
}

/// Everything the reduction produces, including the intermediate machines,
/// so each stage can be inspected and tested separately.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionBundle {
    pub source_first: Pda,
    pub source_second: Pda,
    /// Sources with disjoint stack names, converted to empty-stack
    /// acceptance with a shared bottom, over the pooled input alphabet.
    pub first_empty: Pda,
    pub second_empty: Pda,
    /// With separator self-loops added.
    pub first_padded: Pda,
    pub second_padded: Pda,
    pub first_doubled: Pda,
    pub second_doubled: Pda,
    /// The machine whose two-copy distributed system decides the transformed
    /// words.
    pub combined: Pda,
    pub separator: Symbol,
    pub role_marker: Symbol,
}

impl ReductionBundle {
    /// The input the distributed system runs on: separator and role marker,
    /// then the word with a separator before every symbol.
    pub fn transform_input(&self, word: &[Symbol]) -> Vec<Symbol> {
        let mut out = vec![self.separator.clone(), self.role_marker.clone()];
        for sym in word {
            out.push(self.separator.clone());
            out.push(sym.clone());
        }
        out
    }
}

pub fn build_reduction(first: &Pda, second: &Pda) -> Result<ReductionBundle, ReductionError> {
    if first.acceptance_mode() != AcceptanceMode::FinalState {
        return Err(ReductionError::NotFinalState { which: "first" });
    }
    if second.acceptance_mode() != AcceptanceMode::FinalState {
        return Err(ReductionError::NotFinalState { which: "second" });
    }

    let first_apart =
        first.rename_stack_symbols(|s| Symbol::new(format!("A.{}", s.as_str())));
    let second_apart =
        second.rename_stack_symbols(|s| Symbol::new(format!("B.{}", s.as_str())));

    let first_converted = first_apart.to_empty_stack();
    let mut second_converted = second_apart.to_empty_stack();
    if second_converted.bottom_symbol() != first_converted.bottom_symbol() {
        let shared = first_converted.bottom_symbol().clone();
        let old = second_converted.bottom_symbol().clone();
        second_converted = second_converted
            .rename_stack_symbols(|s| if *s == old { shared.clone() } else { s.clone() });
    }

    let pooled: Vec<Symbol> = first_converted
        .input_alphabet()
        .chain(second_converted.input_alphabet())
        .cloned()
        .collect::<IndexSet<_>>()
        .into_iter()
        .collect();
    let first_empty = first_converted
        .with_input_alphabet(pooled.clone())
        .expect("pooled alphabet is a superset");
    let second_empty = second_converted
        .with_input_alphabet(pooled.clone())
        .expect("pooled alphabet is a superset");

    let mut taken: Vec<String> = pooled.iter().map(|s| s.as_str().to_owned()).collect();
    let separator = Symbol::new(fresh_name("#", taken.iter().map(String::as_str)));
    taken.push(separator.as_str().to_owned());
    let role_marker = Symbol::new(fresh_name("$", taken.iter().map(String::as_str)));

    let first_padded = add_pause_loops(&first_empty, &separator);
    let second_padded = add_pause_loops(&second_empty, &separator);

    let first_doubled = double_for_first_role(&first_padded);
    let second_doubled = double_for_second_role(&second_padded, &separator);

    let first_renamed = first_doubled.rename_states(|s| StateId::new(format!("A:{}", s.as_str())));
    let second_renamed =
        second_doubled.rename_states(|s| StateId::new(format!("B:{}", s.as_str())));

    let state_names: Vec<String> = first_renamed
        .states()
        .chain(second_renamed.states())
        .map(|s| s.as_str().to_owned())
        .collect();
    let start = StateId::new(fresh_name("start", state_names.iter().map(String::as_str)));

    let mut states = vec![start.clone()];
    states.extend(first_renamed.states().cloned());
    states.extend(second_renamed.states().cloned());

    let stack_alphabet: Vec<Symbol> = first_renamed
        .stack_alphabet()
        .chain(second_renamed.stack_alphabet())
        .cloned()
        .collect::<IndexSet<_>>()
        .into_iter()
        .collect();
    let input_alphabet: Vec<Symbol> = first_renamed
        .input_alphabet()
        .chain(second_renamed.input_alphabet())
        .cloned()
        .chain(std::iter::once(role_marker.clone()))
        .collect::<IndexSet<_>>()
        .into_iter()
        .collect();

    let mut moves = Vec::new();
    for top in &stack_alphabet {
        moves.push(Move::new(
            start.clone(),
            Some(separator.clone()),
            top.clone(),
            first_renamed.initial_state().clone(),
            vec![top.clone()],
        ));
    }
    for top in &stack_alphabet {
        moves.push(Move::new(
            start.clone(),
            Some(role_marker.clone()),
            top.clone(),
            second_renamed.initial_state().clone(),
            vec![top.clone()],
        ));
    }
    moves.extend(first_renamed.moves().iter().cloned());
    moves.extend(second_renamed.moves().iter().cloned());

    let combined = PdaParts {
        states,
        input_alphabet,
        stack_alphabet,
        moves,
        initial_state: start,
        bottom_symbol: first_renamed.bottom_symbol().clone(),
        final_states: first_renamed
            .final_states()
            .chain(second_renamed.final_states())
            .cloned()
            .collect(),
        acceptance_mode: AcceptanceMode::EmptyStack,
    }
    .build()
    .expect("combined machine is valid by construction");

    Ok(ReductionBundle {
        source_first: first.clone(),
        source_second: second.clone(),
        first_empty,
        second_empty,
        first_padded,
        second_padded,
        first_doubled,
        second_doubled,
        combined,
        separator,
        role_marker,
    })
}

/// Compares, word by word, the two-copy distributed system on the
/// transformed input against direct interleaving membership in the source
/// languages.
pub fn verify_reduction(
    bundle: &ReductionBundle,
    words: &[Vec<Symbol>],
    budget: &Budget,
) -> Result<DifferentialReport, InputError> {
    let system = DpasSystem::uniform(&bundle.combined, 2).expect("two copies");
    let mut entries = Vec::with_capacity(words.len());
    for word in words {
        let transformed = bundle.transform_input(word);
        let left = system.accepts(&transformed, budget)?.kind;
        let right = shuffle_member2(word, &bundle.source_first, &bundle.source_second, budget)?
            .as_verdict_kind();
        entries.push(DifferentialEntry::new(word.clone(), left, right));
    }
    Ok(DifferentialReport::new(entries))
}
