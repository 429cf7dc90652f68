//! Nondeterministic pushdown automata: model, validation, bounded search.
//!
//! Stacks are sequences of symbols with the topmost symbol first, so
//! `[A, Z]` means `A` is on top of `Z`. Push strings use the same order:
//! applying a move with push `[A, Z]` to a stack whose top it replaces yields
//! `A` as the new top. A move always consumes the current top and pushes its
//! (possibly empty) push string in place of it.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use indexmap::IndexSet;
use thiserror::Error;

use crate::symbol::{fresh_name, StateId, Symbol};
use crate::verdict::{Budget, SearchStats, Verdict};

/// How a machine accepts: by final state or by empty stack. Both require the
/// whole input to be consumed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum AcceptanceMode {
    #[serde(rename = "final")]
    FinalState,
    #[serde(rename = "empty")]
    EmptyStack,
}

impl fmt::Display for AcceptanceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AcceptanceMode::FinalState => "final state",
            AcceptanceMode::EmptyStack => "empty stack",
        })
    }
}

/// One transition. `input: None` is an ε-move that does not consume input.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Move {
    pub from: StateId,
    pub input: Option<Symbol>,
    pub top: Symbol,
    pub to: StateId,
    /// Replacement for the consumed top, topmost first.
    pub push: Vec<Symbol>,
}

impl Move {
    pub fn new(
        from: impl Into<StateId>,
        input: Option<Symbol>,
        top: impl Into<Symbol>,
        to: impl Into<StateId>,
        push: Vec<Symbol>,
    ) -> Self {
        Move {
            from: from.into(),
            input,
            top: top.into(),
            to: to.into(),
            push,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = self.input.as_ref().map_or("ε", Symbol::as_str);
        let push = if self.push.is_empty() {
            String::from("ε")
        } else {
            self.push
                .iter()
                .map(Symbol::as_str)
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(
            f,
            "({}, {}, {}) -> ({}, [{}])",
            self.from, label, self.top, self.to, push
        )
    }
}

/// A single machine's configuration: control state, how much input was read,
/// and the stack (topmost first).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PdaConfig {
    pub state: StateId,
    pub input_pos: usize,
    pub stack: Vec<Symbol>,
}

impl PdaConfig {
    pub fn top(&self) -> Option<&Symbol> {
        self.stack.first()
    }
}

impl fmt::Display for PdaConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let stack = self
            .stack
            .iter()
            .map(Symbol::as_str)
            .collect::<Vec<_>>()
            .join(" ");
        write!(f, "({}, {}, [{}])", self.state, self.input_pos, stack)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ValidationError {
    #[error("duplicate state `{name}`")]
    DuplicateState { name: StateId },
    #[error("duplicate symbol `{name}` in {alphabet} alphabet")]
    DuplicateSymbol { alphabet: &'static str, name: Symbol },
    #[error("empty name in {context}")]
    EmptyName { context: String },
    #[error("initial state `{name}` is not a declared state")]
    UnknownInitialState { name: StateId },
    #[error("bottom symbol `{name}` is not in the stack alphabet")]
    BottomNotInStackAlphabet { name: Symbol },
    #[error("final state `{name}` is not a declared state")]
    UnknownFinalState { name: StateId },
    #[error("unknown state `{name}` in {context}")]
    UnknownState { context: String, name: StateId },
    #[error("unknown input symbol `{name}` in {context}")]
    UnknownInputSymbol { context: String, name: Symbol },
    #[error("unknown stack symbol `{name}` in {context}")]
    UnknownStackSymbol { context: String, name: Symbol },
}

/// Raw pieces of a machine, before validation.
#[derive(Clone, Debug)]
pub struct PdaParts {
    pub states: Vec<StateId>,
    pub input_alphabet: Vec<Symbol>,
    pub stack_alphabet: Vec<Symbol>,
    pub moves: Vec<Move>,
    pub initial_state: StateId,
    pub bottom_symbol: Symbol,
    pub final_states: Vec<StateId>,
    pub acceptance_mode: AcceptanceMode,
}

/// A validated pushdown automaton. All constructors go through validation,
/// so a `Pda` value always satisfies its declared invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pda {
    states: IndexSet<StateId>,
    input_alphabet: IndexSet<Symbol>,
    stack_alphabet: IndexSet<Symbol>,
    moves: Vec<Move>,
    initial_state: StateId,
    bottom_symbol: Symbol,
    final_states: IndexSet<StateId>,
    acceptance_mode: AcceptanceMode,
    /// (state, stack top) -> indices into `moves`, in declaration order.
    move_index: HashMap<(StateId, Symbol), Vec<usize>>,
}

impl PdaParts {
    pub fn build(self) -> Result<Pda, Vec<ValidationError>> {
        let mut errors = Vec::new();

        let mut states = IndexSet::new();
        for s in &self.states {
            if s.as_str().is_empty() {
                errors.push(ValidationError::EmptyName {
                    context: String::from("state list"),
                });
            } else if !states.insert(s.clone()) {
                errors.push(ValidationError::DuplicateState { name: s.clone() });
            }
        }

        let mut collect_alphabet = |raw: &[Symbol], which: &'static str| {
            let mut set = IndexSet::new();
            for sym in raw {
                if sym.as_str().is_empty() {
                    errors.push(ValidationError::EmptyName {
                        context: format!("{which} alphabet"),
                    });
                } else if !set.insert(sym.clone()) {
                    errors.push(ValidationError::DuplicateSymbol {
                        alphabet: which,
                        name: sym.clone(),
                    });
                }
            }
            set
        };
        let input_alphabet = collect_alphabet(&self.input_alphabet, "input");
        let stack_alphabet = collect_alphabet(&self.stack_alphabet, "stack");

        if !states.contains(&self.initial_state) {
            errors.push(ValidationError::UnknownInitialState {
                name: self.initial_state.clone(),
            });
        }
        if !stack_alphabet.contains(&self.bottom_symbol) {
            errors.push(ValidationError::BottomNotInStackAlphabet {
                name: self.bottom_symbol.clone(),
            });
        }

        let mut final_states = IndexSet::new();
        for s in &self.final_states {
            if !states.contains(s) {
                errors.push(ValidationError::UnknownFinalState { name: s.clone() });
            } else {
                final_states.insert(s.clone());
            }
        }

        for (i, mv) in self.moves.iter().enumerate() {
            let context = |part: &str| format!("transition {i} {part}");
            if !states.contains(&mv.from) {
                errors.push(ValidationError::UnknownState {
                    context: context("source"),
                    name: mv.from.clone(),
                });
            }
            if !states.contains(&mv.to) {
                errors.push(ValidationError::UnknownState {
                    context: context("target"),
                    name: mv.to.clone(),
                });
            }
            if let Some(sym) = &mv.input {
                if !input_alphabet.contains(sym) {
                    errors.push(ValidationError::UnknownInputSymbol {
                        context: context("label"),
                        name: sym.clone(),
                    });
                }
            }
            if !stack_alphabet.contains(&mv.top) {
                errors.push(ValidationError::UnknownStackSymbol {
                    context: context("top"),
                    name: mv.top.clone(),
                });
            }
            for sym in &mv.push {
                if !stack_alphabet.contains(sym) {
                    errors.push(ValidationError::UnknownStackSymbol {
                        context: context("push string"),
                        name: sym.clone(),
                    });
                }
            }
        }

        if !errors.is_empty() {
            return Err(errors);
        }

        let mut move_index: HashMap<(StateId, Symbol), Vec<usize>> = HashMap::new();
        for (i, mv) in self.moves.iter().enumerate() {
            move_index
                .entry((mv.from.clone(), mv.top.clone()))
                .or_default()
                .push(i);
        }

        Ok(Pda {
            states,
            input_alphabet,
            stack_alphabet,
            moves: self.moves,
            initial_state: self.initial_state,
            bottom_symbol: self.bottom_symbol,
            final_states,
            acceptance_mode: self.acceptance_mode,
            move_index,
        })
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum InputError {
    #[error("word symbol `{symbol}` at position {position} is not in the input alphabet")]
    SymbolNotInAlphabet { symbol: Symbol, position: usize },
    #[error("word symbol `{symbol}` at position {position} is reserved for communication and may not occur in input")]
    ReservedSymbol { symbol: Symbol, position: usize },
}

/// A witness that a machine is not deterministic: two moves that can compete
/// from the same (state, stack top).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterminismConflict {
    pub first: Move,
    pub second: Move,
}

impl fmt::Display for DeterminismConflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} clashes with {}", self.first, self.second)
    }
}

impl Pda {
    pub fn states(&self) -> impl Iterator<Item = &StateId> {
        self.states.iter()
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn input_alphabet(&self) -> impl Iterator<Item = &Symbol> {
        self.input_alphabet.iter()
    }

    pub fn stack_alphabet(&self) -> impl Iterator<Item = &Symbol> {
        self.stack_alphabet.iter()
    }

    pub fn has_input_symbol(&self, sym: &Symbol) -> bool {
        self.input_alphabet.contains(sym)
    }

    pub fn has_stack_symbol(&self, sym: &Symbol) -> bool {
        self.stack_alphabet.contains(sym)
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn initial_state(&self) -> &StateId {
        &self.initial_state
    }

    pub fn bottom_symbol(&self) -> &Symbol {
        &self.bottom_symbol
    }

    pub fn final_states(&self) -> impl Iterator<Item = &StateId> {
        self.final_states.iter()
    }

    pub fn is_final(&self, state: &StateId) -> bool {
        self.final_states.contains(state)
    }

    pub fn acceptance_mode(&self) -> AcceptanceMode {
        self.acceptance_mode
    }

    /// The configuration every run starts from: initial state, nothing read,
    /// the bottom symbol alone on the stack.
    pub fn initial_config(&self) -> PdaConfig {
        PdaConfig {
            state: self.initial_state.clone(),
            input_pos: 0,
            stack: vec![self.bottom_symbol.clone()],
        }
    }

    /// Indices of the moves applicable in `cfg` against `word`, in declaration
    /// order. Empty when the stack is empty. At the end of the input only
    /// ε-moves remain applicable.
    pub fn applicable_moves(&self, cfg: &PdaConfig, word: &[Symbol]) -> Vec<usize> {
        let Some(top) = cfg.top() else {
            return Vec::new();
        };
        let Some(indices) = self.move_index.get(&(cfg.state.clone(), top.clone())) else {
            return Vec::new();
        };
        indices
            .iter()
            .copied()
            .filter(|&i| match &self.moves[i].input {
                None => true,
                Some(sym) => cfg.input_pos < word.len() && &word[cfg.input_pos] == sym,
            })
            .collect()
    }

    /// Applies the move at `move_idx` to `cfg`. Panics if the move is not
    /// applicable in `cfg`; callers must pick indices from
    /// [`applicable_moves`](Self::applicable_moves).
    pub fn apply_move(&self, cfg: &PdaConfig, move_idx: usize) -> PdaConfig {
        let mv = &self.moves[move_idx];
        assert_eq!(
            cfg.top(),
            Some(&mv.top),
            "move {mv} is not applicable in {cfg}: stack top mismatch"
        );
        assert_eq!(mv.from, cfg.state, "move {mv} is not applicable in {cfg}");
        let mut stack = Vec::with_capacity(mv.push.len() + cfg.stack.len() - 1);
        stack.extend(mv.push.iter().cloned());
        stack.extend(cfg.stack[1..].iter().cloned());
        PdaConfig {
            state: mv.to.clone(),
            input_pos: cfg.input_pos + usize::from(mv.input.is_some()),
            stack,
        }
    }

    pub fn is_accepting_config(&self, cfg: &PdaConfig, word: &[Symbol]) -> bool {
        cfg.input_pos == word.len()
            && match self.acceptance_mode {
                AcceptanceMode::FinalState => self.final_states.contains(&cfg.state),
                AcceptanceMode::EmptyStack => cfg.stack.is_empty(),
            }
    }

    pub fn check_word(&self, word: &[Symbol]) -> Result<(), InputError> {
        for (position, symbol) in word.iter().enumerate() {
            if !self.input_alphabet.contains(symbol) {
                return Err(InputError::SymbolNotInAlphabet {
                    symbol: symbol.clone(),
                    position,
                });
            }
        }
        Ok(())
    }

    /// Breadth-first bounded search for an accepting run. Duplicate
    /// configurations are visited once; the frontier is explored first-in
    /// first-out with moves in declaration order, so the verdict and witness
    /// are a pure function of (machine, word, budget).
    pub fn accepts(&self, word: &[Symbol], budget: &Budget) -> Result<Verdict<Vec<Move>>, InputError> {
        self.check_word(word)?;
        let mut stats = SearchStats::default();
        let mut parents: HashMap<PdaConfig, Option<(PdaConfig, usize)>> = HashMap::new();
        let mut queue = VecDeque::new();

        let init = self.initial_config();
        parents.insert(init.clone(), None);
        stats.configurations = 1;
        if self.is_accepting_config(&init, word) {
            return Ok(Verdict::accepted(Vec::new(), stats));
        }
        queue.push_back(init);

        while let Some(cfg) = queue.pop_front() {
            stats.steps += 1;
            if stats.steps > budget.max_steps {
                return Ok(Verdict::budget_exhausted(stats));
            }
            for idx in self.applicable_moves(&cfg, word) {
                let succ = self.apply_move(&cfg, idx);
                if parents.contains_key(&succ) {
                    continue;
                }
                stats.configurations += 1;
                if stats.configurations > budget.max_configurations {
                    return Ok(Verdict::budget_exhausted(stats));
                }
                parents.insert(succ.clone(), Some((cfg.clone(), idx)));
                if self.is_accepting_config(&succ, word) {
                    let witness = self.reconstruct(&parents, succ);
                    return Ok(Verdict::accepted(witness, stats));
                }
                queue.push_back(succ);
            }
        }
        Ok(Verdict::rejected(stats))
    }

    fn reconstruct(
        &self,
        parents: &HashMap<PdaConfig, Option<(PdaConfig, usize)>>,
        end: PdaConfig,
    ) -> Vec<Move> {
        let mut trace = Vec::new();
        let mut cur = end;
        while let Some(Some((prev, idx))) = parents.get(&cur) {
            trace.push(self.moves[*idx].clone());
            cur = prev.clone();
        }
        trace.reverse();
        trace
    }

    /// Checks the usual syntactic determinism condition: per (state, stack
    /// top) at most one ε-move, at most one move per input symbol, and an
    /// ε-move rules out any labelled move.
    pub fn check_determinism(&self) -> Result<(), DeterminismConflict> {
        for indices in self.move_index.values() {
            for (k, &i) in indices.iter().enumerate() {
                for &j in &indices[k + 1..] {
                    let a = &self.moves[i];
                    let b = &self.moves[j];
                    let clash = match (&a.input, &b.input) {
                        (None, None) => true,
                        (None, Some(_)) | (Some(_), None) => true,
                        (Some(x), Some(y)) => x == y,
                    };
                    if clash {
                        return Err(DeterminismConflict {
                            first: a.clone(),
                            second: b.clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_deterministic(&self) -> bool {
        self.check_determinism().is_ok()
    }

    /// Converts a final-state acceptor into an empty-stack acceptor for the
    /// same words. A fresh bottom symbol is pushed under the old bottom via a
    /// fresh initial state; every final state gets ε-moves into a drain state
    /// that pops everything, the fresh bottom included. Chosen fresh names are
    /// uniquified against the existing ones.
    pub fn to_empty_stack(&self) -> Pda {
        assert_eq!(
            self.acceptance_mode,
            AcceptanceMode::FinalState,
            "to_empty_stack expects a final-state acceptor"
        );
        let new_bottom = Symbol::new(fresh_name(
            "Z0",
            self.stack_alphabet.iter().map(Symbol::as_str),
        ));
        let taken: Vec<&str> = self.states.iter().map(StateId::as_str).collect();
        let new_init = StateId::new(fresh_name("init", taken.iter().copied()));
        let drain = StateId::new(fresh_name("drain", taken.iter().copied()));

        let mut states = vec![new_init.clone()];
        states.extend(self.states.iter().cloned());
        states.push(drain.clone());

        let mut stack_alphabet: Vec<Symbol> = self.stack_alphabet.iter().cloned().collect();
        stack_alphabet.push(new_bottom.clone());

        let mut moves = vec![Move::new(
            new_init.clone(),
            None,
            new_bottom.clone(),
            self.initial_state.clone(),
            vec![self.bottom_symbol.clone(), new_bottom.clone()],
        )];
        moves.extend(self.moves.iter().cloned());
        for f in &self.final_states {
            for d in &stack_alphabet {
                moves.push(Move::new(f.clone(), None, d.clone(), drain.clone(), vec![]));
            }
        }
        for d in &stack_alphabet {
            moves.push(Move::new(drain.clone(), None, d.clone(), drain.clone(), vec![]));
        }

        PdaParts {
            states,
            input_alphabet: self.input_alphabet.iter().cloned().collect(),
            stack_alphabet,
            moves,
            initial_state: new_init,
            bottom_symbol: new_bottom,
            final_states: self.final_states.iter().cloned().collect(),
            acceptance_mode: AcceptanceMode::EmptyStack,
        }
        .build()
        .expect("empty-stack conversion preserves validity")
    }

    /// Same machine with the input alphabet extended to `alphabet`, which
    /// must be a superset of the current one.
    pub(crate) fn with_input_alphabet(&self, alphabet: Vec<Symbol>) -> Result<Pda, Vec<ValidationError>> {
        PdaParts {
            states: self.states.iter().cloned().collect(),
            input_alphabet: alphabet,
            stack_alphabet: self.stack_alphabet.iter().cloned().collect(),
            moves: self.moves.clone(),
            initial_state: self.initial_state.clone(),
            bottom_symbol: self.bottom_symbol.clone(),
            final_states: self.final_states.iter().cloned().collect(),
            acceptance_mode: self.acceptance_mode,
        }
        .build()
    }

    /// Same machine with every stack symbol renamed through `f`. The renaming
    /// must stay injective on the alphabet.
    pub(crate) fn rename_stack_symbols(&self, f: impl Fn(&Symbol) -> Symbol) -> Pda {
        let map = |s: &Symbol| f(s);
        PdaParts {
            states: self.states.iter().cloned().collect(),
            input_alphabet: self.input_alphabet.iter().cloned().collect(),
            stack_alphabet: self.stack_alphabet.iter().map(&map).collect(),
            moves: self
                .moves
                .iter()
                .map(|m| Move {
                    from: m.from.clone(),
                    input: m.input.clone(),
                    top: map(&m.top),
                    to: m.to.clone(),
                    push: m.push.iter().map(&map).collect(),
                })
                .collect(),
            initial_state: self.initial_state.clone(),
            bottom_symbol: map(&self.bottom_symbol),
            final_states: self.final_states.iter().cloned().collect(),
            acceptance_mode: self.acceptance_mode,
        }
        .build()
        .expect("injective stack renaming preserves validity")
    }

    /// Replays a move sequence from the initial configuration, checking each
    /// move is applicable where it is taken. Returns the final configuration.
    pub fn replay(&self, word: &[Symbol], trace: &[Move]) -> Option<PdaConfig> {
        let mut cfg = self.initial_config();
        for mv in trace {
            let idx = self
                .applicable_moves(&cfg, word)
                .into_iter()
                .find(|&i| &self.moves[i] == mv)?;
            cfg = self.apply_move(&cfg, idx);
        }
        Some(cfg)
    }

    /// Same machine with every state renamed through `f`. The renaming must
    /// stay injective on the state set.
    pub(crate) fn rename_states(&self, f: impl Fn(&StateId) -> StateId) -> Pda {
        PdaParts {
            states: self.states.iter().map(&f).collect(),
            input_alphabet: self.input_alphabet.iter().cloned().collect(),
            stack_alphabet: self.stack_alphabet.iter().cloned().collect(),
            moves: self
                .moves
                .iter()
                .map(|m| Move {
                    from: f(&m.from),
                    input: m.input.clone(),
                    top: m.top.clone(),
                    to: f(&m.to),
                    push: m.push.clone(),
                })
                .collect(),
            initial_state: f(&self.initial_state),
            bottom_symbol: self.bottom_symbol.clone(),
            final_states: self.final_states.iter().map(&f).collect(),
            acceptance_mode: self.acceptance_mode,
        }
        .build()
        .expect("injective state renaming preserves validity")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{pda_ab, pda_palindrome};
    use crate::symbol::{word_from_chars, words_up_to};
    use crate::verdict::{Budget, VerdictKind};

    fn word(s: &str) -> Vec<Symbol> {
        word_from_chars(s)
    }

    #[test]
    fn validation_collects_every_error() {
        let parts = PdaParts {
            states: vec![StateId::new("q0"), StateId::new("q0")],
            input_alphabet: vec![Symbol::new("a")],
            stack_alphabet: vec![Symbol::new("Z")],
            moves: vec![Move::new(
                "ghost",
                Some(Symbol::new("x")),
                "Y",
                "q0",
                vec![Symbol::new("W")],
            )],
            initial_state: StateId::new("elsewhere"),
            bottom_symbol: Symbol::new("B"),
            final_states: vec![StateId::new("nowhere")],
            acceptance_mode: AcceptanceMode::FinalState,
        };
        let errors = parts.build().unwrap_err();
        assert!(errors.contains(&ValidationError::DuplicateState {
            name: StateId::new("q0")
        }));
        assert!(errors.contains(&ValidationError::UnknownInitialState {
            name: StateId::new("elsewhere")
        }));
        assert!(errors.contains(&ValidationError::BottomNotInStackAlphabet {
            name: Symbol::new("B")
        }));
        assert!(errors.contains(&ValidationError::UnknownFinalState {
            name: StateId::new("nowhere")
        }));
        assert!(errors.iter().any(|e| matches!(
            e,
            ValidationError::UnknownState { name, .. } if name.as_str() == "ghost"
        )));
        assert!(errors.iter().any(|e| matches!(
            e,
            ValidationError::UnknownInputSymbol { name, .. } if name.as_str() == "x"
        )));
        assert!(errors.iter().any(|e| matches!(
            e,
            ValidationError::UnknownStackSymbol { name, .. } if name.as_str() == "Y"
        )));
        assert!(errors.iter().any(|e| matches!(
            e,
            ValidationError::UnknownStackSymbol { name, .. } if name.as_str() == "W"
        )));
        assert_eq!(errors.len(), 8);
    }

    #[test]
    fn labeled_and_silent_moves_are_both_applicable() {
        let pda = pda_palindrome();
        let w = word("aa");
        let cfg = pda.initial_config();
        let moves: Vec<&Move> = pda
            .applicable_moves(&cfg, &w)
            .into_iter()
            .map(|i| &pda.moves()[i])
            .collect();
        // reading `a` (push or center guess) and the silent middle guess all apply
        assert!(moves
            .iter()
            .any(|m| m.input.as_ref().map(Symbol::as_str) == Some("a") && m.to.as_str() == "s0"));
        assert!(moves
            .iter()
            .any(|m| m.input.as_ref().map(Symbol::as_str) == Some("a") && m.to.as_str() == "s1"));
        assert!(moves.iter().any(|m| m.input.is_none() && m.to.as_str() == "s1"));
        assert_eq!(moves.len(), 3);
    }

    #[test]
    fn labeled_moves_need_remaining_input() {
        let pda = pda_palindrome();
        let w = word("a");
        // after reading the single letter only silent moves remain
        let cfg = PdaConfig {
            state: StateId::new("s0"),
            input_pos: 1,
            stack: vec![Symbol::new("A"), Symbol::new("Z")],
        };
        let moves: Vec<&Move> = pda
            .applicable_moves(&cfg, &w)
            .into_iter()
            .map(|i| &pda.moves()[i])
            .collect();
        assert!(moves.iter().all(|m| m.input.is_none()));
        assert!(!moves.is_empty());
    }

    #[test]
    fn empty_stack_blocks_every_move() {
        let pda = pda_palindrome();
        let cfg = PdaConfig {
            state: StateId::new("s0"),
            input_pos: 0,
            stack: Vec::new(),
        };
        assert!(pda.applicable_moves(&cfg, &word("a")).is_empty());
    }

    #[test]
    fn apply_move_rewrites_the_top() {
        let pda = pda_ab();
        let w = word("ab");
        let cfg = pda.initial_config();
        let idx = pda.applicable_moves(&cfg, &w)[0];
        let next = pda.apply_move(&cfg, idx);
        assert_eq!(next.state, StateId::new("q1"));
        assert_eq!(next.input_pos, 1);
        assert_eq!(next.stack, vec![Symbol::new("A"), Symbol::new("Z")]);
    }

    #[test]
    fn block_language_membership() {
        let pda = pda_ab();
        let budget = Budget::default();
        for w in ["", "ab", "aabb", "aaabbb"] {
            assert_eq!(
                pda.accepts(&word(w), &budget).unwrap().kind,
                VerdictKind::Accepted,
                "expected {w:?} accepted"
            );
        }
        for w in ["a", "b", "ba", "abb", "aab", "abab"] {
            assert_eq!(
                pda.accepts(&word(w), &budget).unwrap().kind,
                VerdictKind::Rejected,
                "expected {w:?} rejected"
            );
        }
    }

    #[test]
    fn palindrome_membership() {
        let pda = pda_palindrome();
        let budget = Budget::default();
        for w in words_up_to(&[Symbol::new("a"), Symbol::new("b")], 5) {
            let expected: Vec<&Symbol> = w.iter().rev().collect();
            let is_palindrome = w.iter().collect::<Vec<_>>() == expected;
            let got = pda.accepts(&w, &budget).unwrap().kind;
            let label = if is_palindrome {
                VerdictKind::Accepted
            } else {
                VerdictKind::Rejected
            };
            assert_eq!(got, label, "word {w:?}");
        }
    }

    #[test]
    fn witnesses_replay_to_an_accepting_configuration() {
        let pda = pda_palindrome();
        let budget = Budget::default();
        let w = word("abba");
        let verdict = pda.accepts(&w, &budget).unwrap();
        assert_eq!(verdict.kind, VerdictKind::Accepted);
        let trace = verdict.witness.expect("accepting run has a witness");
        let end = pda.replay(&w, &trace).expect("witness must replay");
        assert!(pda.is_accepting_config(&end, &w));
    }

    #[test]
    fn rejected_words_carry_no_witness() {
        let pda = pda_ab();
        let verdict = pda.accepts(&word("ba"), &Budget::default()).unwrap();
        assert_eq!(verdict.kind, VerdictKind::Rejected);
        assert!(verdict.witness.is_none());
    }

    #[test]
    fn step_budget_exhaustion_is_reported() {
        let pda = pda_ab();
        let budget = Budget::new(100_000, 1).unwrap();
        let verdict = pda.accepts(&word("aabb"), &budget).unwrap();
        assert_eq!(verdict.kind, VerdictKind::BudgetExhausted);
    }

    #[test]
    fn configuration_budget_exhaustion_is_reported() {
        let pda = pda_palindrome();
        let budget = Budget::new(2, 100_000).unwrap();
        let verdict = pda.accepts(&word("abba"), &budget).unwrap();
        assert_eq!(verdict.kind, VerdictKind::BudgetExhausted);
    }

    #[test]
    fn foreign_input_symbols_are_rejected_up_front() {
        let pda = pda_ab();
        let err = pda.check_word(&word("axb")).unwrap_err();
        assert_eq!(
            err,
            InputError::SymbolNotInAlphabet {
                symbol: Symbol::new("x"),
                position: 1
            }
        );
    }

    #[test]
    fn block_machine_is_deterministic() {
        assert!(pda_ab().is_deterministic());
    }

    #[test]
    fn palindrome_machine_is_not_deterministic() {
        let pda = pda_palindrome();
        let conflict = pda.check_determinism().unwrap_err();
        // a labeled push move clashes with the silent middle guess
        assert!(conflict.first.input.is_some() ^ conflict.second.input.is_some());
        assert_eq!(conflict.first.from, conflict.second.from);
        assert_eq!(conflict.first.top, conflict.second.top);
    }

    #[test]
    fn empty_stack_conversion_preserves_the_language() {
        let pda = pda_ab();
        let converted = pda.to_empty_stack();
        assert_eq!(converted.acceptance_mode(), AcceptanceMode::EmptyStack);
        let budget = Budget::default();
        for w in words_up_to(&[Symbol::new("a"), Symbol::new("b")], 4) {
            assert_eq!(
                pda.accepts(&w, &budget).unwrap().kind,
                converted.accepts(&w, &budget).unwrap().kind,
                "word {w:?}"
            );
        }
    }

    #[test]
    fn empty_stack_conversion_avoids_name_collisions() {
        let pda = PdaParts {
            states: vec![StateId::new("init"), StateId::new("drain")],
            input_alphabet: vec![Symbol::new("a")],
            stack_alphabet: vec![Symbol::new("Z0")],
            moves: vec![Move::new(
                "init",
                Some(Symbol::new("a")),
                "Z0",
                "drain",
                vec![Symbol::new("Z0")],
            )],
            initial_state: StateId::new("init"),
            bottom_symbol: Symbol::new("Z0"),
            final_states: vec![StateId::new("drain")],
            acceptance_mode: AcceptanceMode::FinalState,
        }
        .build()
        .unwrap();
        let converted = pda.to_empty_stack();
        assert!(converted.states().any(|s| s == &StateId::new("init'")));
        assert!(converted.states().any(|s| s == &StateId::new("drain'")));
        assert!(converted.has_stack_symbol(&Symbol::new("Z0'")));
        assert_eq!(converted.bottom_symbol(), &Symbol::new("Z0'"));
        let budget = Budget::default();
        assert_eq!(
            converted.accepts(&word("a"), &budget).unwrap().kind,
            VerdictKind::Accepted
        );
        assert_eq!(
            converted.accepts(&word(""), &budget).unwrap().kind,
            VerdictKind::Rejected
        );
    }
}
