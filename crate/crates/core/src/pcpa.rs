//! Systems of pushdown automata running in parallel on the same input and
//! communicating through their stacks, in returning mode.
//!
//! Each component reads its own copy of the input word. A step is either a
//! communication step or an internal step, and communication has priority.
//!
//! Communication uses two kinds of reserved stack symbols. A component whose
//! stack top is the query symbol of another component is asking that
//! component for its stack. A component whose stack top is the response
//! symbol has finished preparing an answer. When a querying component's
//! request is matched by a responding source, the source's stack contents
//! below the response marker are copied on top of the querier's stack in
//! place of the query symbol, and the source resets to its initial bottom
//! symbol. All matched pairs transfer in the same step, reading from the
//! stacks as they were before the step.
//!
//! An internal step moves every component synchronously. Components whose
//! stack top is a communication symbol are stalled and keep their
//! configuration. For the rest, strict stepping requires every component to
//! move and drops the configuration otherwise; relaxed stepping lets a
//! component with no applicable move idle instead.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use indexmap::IndexSet;
use thiserror::Error;

use crate::pda::{
    AcceptanceMode, DeterminismConflict, InputError, Move, Pda, PdaConfig, PdaParts,
    ValidationError,
};
use crate::symbol::{StateId, Symbol};
use crate::verdict::{Budget, SearchStats, Verdict};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AcceptanceQuantifier {
    /// Every component must sit in a final state.
    #[default]
    All,
    /// At least one component must sit in a final state.
    Some,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StepMode {
    /// An internal step exists only if every non-stalled component can move.
    #[default]
    Strict,
    /// Components with no applicable move idle through the step.
    Relaxed,
}

/// One member machine of a system. The wrapped automaton shares the system's
/// input and stack alphabets; its acceptance mode is unused.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcpaComponent {
    pub name: String,
    machine: Pda,
}

impl PcpaComponent {
    pub fn machine(&self) -> &Pda {
        &self.machine
    }
}

#[derive(Clone, Debug)]
pub struct ComponentParts {
    pub name: String,
    pub states: Vec<StateId>,
    pub moves: Vec<Move>,
    pub initial_state: StateId,
    pub bottom_symbol: Symbol,
    pub final_states: Vec<StateId>,
}

#[derive(Clone, Debug)]
pub struct PcpaParts {
    pub input_alphabet: Vec<Symbol>,
    pub stack_alphabet: Vec<Symbol>,
    /// `query_symbols[i]` is the symbol that addresses a query to component `i`.
    pub query_symbols: Vec<Symbol>,
    pub response_symbol: Symbol,
    pub quantifier: AcceptanceQuantifier,
    pub components: Vec<ComponentParts>,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SystemValidationError {
    #[error("system has no components")]
    NoComponents,
    #[error("declared degree {declared} does not match {found} components")]
    DegreeMismatch { declared: usize, found: usize },
    #[error("system declares {declared} query symbols for {components} components")]
    QueryCountMismatch { declared: usize, components: usize },
    #[error("duplicate query symbol `{name}`")]
    DuplicateQuerySymbol { name: Symbol },
    #[error("query symbol `{name}` is not in the stack alphabet")]
    QuerySymbolNotInStackAlphabet { name: Symbol },
    #[error("response symbol `{name}` is not in the stack alphabet")]
    ResponseNotInStackAlphabet { name: Symbol },
    #[error("response symbol `{name}` is also a query symbol")]
    ResponseIsQuerySymbol { name: Symbol },
    #[error("duplicate {alphabet} symbol `{name}`")]
    DuplicateAlphabetSymbol { alphabet: &'static str, name: Symbol },
    #[error("duplicate component name `{name}`")]
    DuplicateComponentName { name: String },
    #[error("component `{component}`: bottom symbol `{name}` is a communication symbol")]
    BottomIsCommunicationSymbol { component: String, name: Symbol },
    #[error(
        "component `{component}`: transition {index} is indexed on communication symbol `{name}`"
    )]
    MoveOnCommunicationSymbol {
        component: String,
        index: usize,
        name: Symbol,
    },
    #[error("component `{component}`: {error}")]
    InComponent {
        component: String,
        error: ValidationError,
    },
}

/// A validated parallel system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcpaSystem {
    input_alphabet: IndexSet<Symbol>,
    stack_alphabet: IndexSet<Symbol>,
    query_symbols: Vec<Symbol>,
    response_symbol: Symbol,
    quantifier: AcceptanceQuantifier,
    components: Vec<PcpaComponent>,
}

impl PcpaParts {
    pub fn build(self) -> Result<PcpaSystem, Vec<SystemValidationError>> {
        let mut errors = Vec::new();

        let mut dedup = |raw: &[Symbol], which: &'static str| {
            let mut set = IndexSet::new();
            for sym in raw {
                if !set.insert(sym.clone()) {
                    errors.push(SystemValidationError::DuplicateAlphabetSymbol {
                        alphabet: which,
                        name: sym.clone(),
                    });
                }
            }
            set
        };
        let input_alphabet = dedup(&self.input_alphabet, "input");
        let stack_alphabet = dedup(&self.stack_alphabet, "stack");

        if self.components.is_empty() {
            errors.push(SystemValidationError::NoComponents);
        }
        if self.query_symbols.len() != self.components.len() {
            errors.push(SystemValidationError::QueryCountMismatch {
                declared: self.query_symbols.len(),
                components: self.components.len(),
            });
        }
        let mut queries = IndexSet::new();
        for q in &self.query_symbols {
            if !queries.insert(q.clone()) {
                errors.push(SystemValidationError::DuplicateQuerySymbol { name: q.clone() });
            }
            if !stack_alphabet.contains(q) {
                errors.push(SystemValidationError::QuerySymbolNotInStackAlphabet {
                    name: q.clone(),
                });
            }
        }
        if !stack_alphabet.contains(&self.response_symbol) {
            errors.push(SystemValidationError::ResponseNotInStackAlphabet {
                name: self.response_symbol.clone(),
            });
        }
        if queries.contains(&self.response_symbol) {
            errors.push(SystemValidationError::ResponseIsQuerySymbol {
                name: self.response_symbol.clone(),
            });
        }

        let is_communication =
            |sym: &Symbol| queries.contains(sym) || *sym == self.response_symbol;

        let mut seen_names = IndexSet::new();
        let mut components = Vec::new();
        for part in self.components {
            if !seen_names.insert(part.name.clone()) {
                errors.push(SystemValidationError::DuplicateComponentName {
                    name: part.name.clone(),
                });
            }
            if is_communication(&part.bottom_symbol) {
                errors.push(SystemValidationError::BottomIsCommunicationSymbol {
                    component: part.name.clone(),
                    name: part.bottom_symbol.clone(),
                });
            }
            for (index, mv) in part.moves.iter().enumerate() {
                if is_communication(&mv.top) {
                    errors.push(SystemValidationError::MoveOnCommunicationSymbol {
                        component: part.name.clone(),
                        index,
                        name: mv.top.clone(),
                    });
                }
            }
            let built = PdaParts {
                states: part.states,
                input_alphabet: input_alphabet.iter().cloned().collect(),
                stack_alphabet: stack_alphabet.iter().cloned().collect(),
                moves: part.moves,
                initial_state: part.initial_state,
                bottom_symbol: part.bottom_symbol,
                final_states: part.final_states,
                acceptance_mode: AcceptanceMode::FinalState,
            }
            .build();
            match built {
                Ok(machine) => components.push(PcpaComponent {
                    name: part.name,
                    machine,
                }),
                Err(inner) => errors.extend(inner.into_iter().map(|error| {
                    SystemValidationError::InComponent {
                        component: part.name.clone(),
                        error,
                    }
                })),
            }
        }

        if !errors.is_empty() {
            return Err(errors);
        }
        Ok(PcpaSystem {
            input_alphabet,
            stack_alphabet,
            query_symbols: self.query_symbols,
            response_symbol: self.response_symbol,
            quantifier: self.quantifier,
            components,
        })
    }
}

/// Global state of a system: one configuration per component, in component
/// order. Every component tracks its own input position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PcpaConfig {
    pub components: Vec<PdaConfig>,
}

impl fmt::Display for PcpaConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self
            .components
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" | ");
        write!(f, "({parts})")
    }
}

/// What a system step did, for traces and witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SystemAction {
    /// `(target, source)` pairs served in this step, zero-based indices.
    Communication { pairs: Vec<(usize, usize)> },
    /// Per component, the move it took or `None` if it stalled or idled.
    Internal { moves: Vec<Option<Move>> },
}

impl fmt::Display for SystemAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemAction::Communication { pairs } => {
                let parts = pairs
                    .iter()
                    .map(|(t, s)| format!("{} <- {}", t + 1, s + 1))
                    .collect::<Vec<_>>()
                    .join(", ");
                write!(f, "communicate {parts}")
            }
            SystemAction::Internal { moves } => {
                let parts = moves
                    .iter()
                    .enumerate()
                    .map(|(i, m)| match m {
                        Some(mv) => format!("{}: {mv}", i + 1),
                        None => format!("{}: idle", i + 1),
                    })
                    .collect::<Vec<_>>()
                    .join("; ");
                write!(f, "internal {parts}")
            }
        }
    }
}

/// Structural traits of a system that are worth reporting: whether any
/// component ever raises a query, and whether only the first one does.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub degree: usize,
    pub has_queries: bool,
    pub centralized: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceOutcome {
    Accepted,
    /// No successor steps and the configuration is not accepting.
    Stuck,
    StepLimit,
    /// More than one successor step was available.
    Nondeterministic { at_step: u64, successor_count: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub action: SystemAction,
    pub config: PcpaConfig,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceResult {
    pub initial: PcpaConfig,
    pub steps: Vec<TraceStep>,
    pub outcome: TraceOutcome,
}

impl PcpaSystem {
    pub fn degree(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[PcpaComponent] {
        &self.components
    }

    pub fn input_alphabet(&self) -> impl Iterator<Item = &Symbol> {
        self.input_alphabet.iter()
    }

    pub fn stack_alphabet(&self) -> impl Iterator<Item = &Symbol> {
        self.stack_alphabet.iter()
    }

    pub fn query_symbols(&self) -> &[Symbol] {
        &self.query_symbols
    }

    pub fn response_symbol(&self) -> &Symbol {
        &self.response_symbol
    }

    pub fn quantifier(&self) -> AcceptanceQuantifier {
        self.quantifier
    }

    pub fn initial_config(&self) -> PcpaConfig {
        PcpaConfig {
            components: self
                .components
                .iter()
                .map(|c| c.machine.initial_config())
                .collect(),
        }
    }

    fn is_communication_symbol(&self, sym: &Symbol) -> bool {
        *sym == self.response_symbol || self.query_symbols.contains(sym)
    }

    /// Queries matched by a ready response: `(target, source)` pairs such
    /// that the target's top addresses the source and the source's top is
    /// the response symbol. Sorted by target index.
    pub fn matched_pairs(&self, cfg: &PcpaConfig) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for (target, tcfg) in cfg.components.iter().enumerate() {
            let Some(top) = tcfg.top() else { continue };
            let Some(source) = self.query_symbols.iter().position(|q| q == top) else {
                continue;
            };
            if source == target {
                continue;
            }
            if cfg.components[source].top() == Some(&self.response_symbol) {
                pairs.push((target, source));
            }
        }
        pairs
    }

    fn communicate(&self, cfg: &PcpaConfig, pairs: &[(usize, usize)]) -> PcpaConfig {
        let mut next = cfg.clone();
        for &(target, source) in pairs {
            let payload = &cfg.components[source].stack[1..];
            let mut stack = Vec::with_capacity(payload.len() + cfg.components[target].stack.len());
            stack.extend(payload.iter().cloned());
            stack.extend(cfg.components[target].stack[1..].iter().cloned());
            next.components[target].stack = stack;
        }
        for &(_, source) in pairs {
            next.components[source].stack =
                vec![self.components[source].machine.bottom_symbol().clone()];
        }
        next
    }

    /// All successor configurations of `cfg`, with the action that produced
    /// each. Communication preempts internal stepping. Internal successors
    /// enumerate per-component choices in declaration order, first component
    /// varying slowest.
    pub fn step(
        &self,
        cfg: &PcpaConfig,
        word: &[Symbol],
        mode: StepMode,
    ) -> Vec<(SystemAction, PcpaConfig)> {
        let pairs = self.matched_pairs(cfg);
        if !pairs.is_empty() {
            let next = self.communicate(cfg, &pairs);
            return vec![(SystemAction::Communication { pairs }, next)];
        }

        // None = stalled or idling; Some(indices) = must pick one of these.
        let mut choices: Vec<Option<Vec<usize>>> = Vec::with_capacity(self.components.len());
        for (comp, ccfg) in self.components.iter().zip(&cfg.components) {
            let stalled = ccfg.top().is_some_and(|t| self.is_communication_symbol(t));
            if stalled {
                choices.push(None);
                continue;
            }
            let moves = comp.machine.applicable_moves(ccfg, word);
            if moves.is_empty() {
                match mode {
                    StepMode::Strict => return Vec::new(),
                    StepMode::Relaxed => choices.push(None),
                }
            } else {
                choices.push(Some(moves));
            }
        }

        let mut successors = Vec::new();
        let mut picks: Vec<usize> = vec![0; self.components.len()];
        loop {
            let mut moves = Vec::with_capacity(self.components.len());
            let mut components = Vec::with_capacity(self.components.len());
            for (i, choice) in choices.iter().enumerate() {
                match choice {
                    None => {
                        moves.push(None);
                        components.push(cfg.components[i].clone());
                    }
                    Some(indices) => {
                        let idx = indices[picks[i]];
                        moves.push(Some(self.components[i].machine.moves()[idx].clone()));
                        components.push(self.components[i].machine.apply_move(&cfg.components[i], idx));
                    }
                }
            }
            successors.push((SystemAction::Internal { moves }, PcpaConfig { components }));

            // Odometer over the per-component choice lists, last index fastest.
            let mut pos = self.components.len();
            loop {
                if pos == 0 {
                    return successors;
                }
                pos -= 1;
                if let Some(indices) = &choices[pos] {
                    picks[pos] += 1;
                    if picks[pos] < indices.len() {
                        break;
                    }
                    picks[pos] = 0;
                }
            }
        }
    }

    pub fn is_accepting_config(&self, cfg: &PcpaConfig, word: &[Symbol]) -> bool {
        if cfg
            .components
            .iter()
            .any(|c| c.input_pos != word.len())
        {
            return false;
        }
        let final_here =
            |(comp, ccfg): (&PcpaComponent, &PdaConfig)| comp.machine.is_final(&ccfg.state);
        match self.quantifier {
            AcceptanceQuantifier::All => self
                .components
                .iter()
                .zip(&cfg.components)
                .all(final_here),
            AcceptanceQuantifier::Some => self
                .components
                .iter()
                .zip(&cfg.components)
                .any(final_here),
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

    /// Bounded breadth-first search for an accepting run of the whole system.
    pub fn accepts(
        &self,
        word: &[Symbol],
        mode: StepMode,
        budget: &Budget,
    ) -> Result<Verdict<Vec<SystemAction>>, InputError> {
        self.check_word(word)?;
        let mut stats = SearchStats::default();
        let mut parents: HashMap<PcpaConfig, Option<(PcpaConfig, SystemAction)>> = HashMap::new();
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
            for (action, succ) in self.step(&cfg, word, mode) {
                if parents.contains_key(&succ) {
                    continue;
                }
                stats.configurations += 1;
                if stats.configurations > budget.max_configurations {
                    return Ok(Verdict::budget_exhausted(stats));
                }
                parents.insert(succ.clone(), Some((cfg.clone(), action)));
                if self.is_accepting_config(&succ, word) {
                    let mut witness = Vec::new();
                    let mut cur = succ;
                    while let Some(Some((prev, act))) = parents.get(&cur) {
                        witness.push(act.clone());
                        cur = prev.clone();
                    }
                    witness.reverse();
                    return Ok(Verdict::accepted(witness, stats));
                }
                queue.push_back(succ);
            }
        }
        Ok(Verdict::rejected(stats))
    }

    /// Follows the unique run from the initial configuration, recording each
    /// step, and reports how it ended. Branching stops the trace and is
    /// reported as [`TraceOutcome::Nondeterministic`].
    pub fn run_trace(
        &self,
        word: &[Symbol],
        mode: StepMode,
        max_steps: u64,
    ) -> Result<TraceResult, InputError> {
        self.check_word(word)?;
        let initial = self.initial_config();
        let mut steps = Vec::new();
        let mut cfg = initial.clone();
        let mut taken = 0u64;
        let outcome = loop {
            if self.is_accepting_config(&cfg, word) {
                break TraceOutcome::Accepted;
            }
            if taken >= max_steps {
                break TraceOutcome::StepLimit;
            }
            let mut successors = self.step(&cfg, word, mode);
            match successors.len() {
                0 => break TraceOutcome::Stuck,
                1 => {
                    let (action, next) = successors.pop().expect("length checked");
                    steps.push(TraceStep {
                        action,
                        config: next.clone(),
                    });
                    cfg = next;
                    taken += 1;
                }
                n => {
                    break TraceOutcome::Nondeterministic {
                        at_step: taken,
                        successor_count: n,
                    }
                }
            }
        };
        Ok(TraceResult {
            initial,
            steps,
            outcome,
        })
    }

    /// Reports whether each component machine satisfies the syntactic
    /// determinism condition, naming the first offender.
    pub fn check_component_determinism(&self) -> Result<(), (String, DeterminismConflict)> {
        for comp in &self.components {
            if let Err(conflict) = comp.machine.check_determinism() {
                return Err((comp.name.clone(), conflict));
            }
        }
        Ok(())
    }

    pub fn classify(&self) -> Classification {
        let mut queriers = Vec::new();
        for (i, comp) in self.components.iter().enumerate() {
            let mentions_query = comp.machine.moves().iter().any(|m| {
                m.push.iter().any(|s| self.query_symbols.contains(s))
            });
            if mentions_query {
                queriers.push(i);
            }
        }
        Classification {
            degree: self.components.len(),
            has_queries: !queriers.is_empty(),
            centralized: !queriers.is_empty() && queriers.iter().all(|&i| i == 0),
        }
    }
}
