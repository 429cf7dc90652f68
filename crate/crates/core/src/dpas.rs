//! Distributed systems of pushdown automata that share one input word.
//!
//! Exactly one component is active at a time and reads from the shared input
//! head. The active component takes ordinary moves as long as it has any; the
//! turn passes only when it is completely blocked, and then any component
//! that could move may take over. Handing over the turn is a step of its own
//! and moves nothing.
//!
//! The whole system accepts once the input is consumed and every component
//! satisfies the common acceptance mode, final state or empty stack. Since an
//! empty stack permanently blocks a component, empty-stack systems in effect
//! require every component to finish its share of the input for good.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use indexmap::IndexSet;
use thiserror::Error;

use crate::pda::{AcceptanceMode, InputError, Pda, PdaConfig};
use crate::symbol::{StateId, Symbol};
use crate::verdict::{Budget, SearchStats, Verdict, VerdictKind};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum DpasValidationError {
    #[error("system has no components")]
    NoComponents,
    #[error("component {index} accepts by {found} but component 0 accepts by {expected}")]
    MixedAcceptanceModes {
        index: usize,
        expected: AcceptanceMode,
        found: AcceptanceMode,
    },
}

/// A validated distributed system. All components agree on the acceptance
/// mode; their input alphabets may differ and are pooled for word checking.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpasSystem {
    components: Vec<Pda>,
    acceptance_mode: AcceptanceMode,
    pooled_alphabet: IndexSet<Symbol>,
}

/// Per-component state and stack; the input position lives in [`DpasConfig`]
/// because the head is shared.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DpasLocal {
    pub state: StateId,
    pub stack: Vec<Symbol>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DpasConfig {
    pub active: usize,
    pub input_pos: usize,
    pub locals: Vec<DpasLocal>,
}

impl fmt::Display for DpasConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self
            .locals
            .iter()
            .enumerate()
            .map(|(i, local)| {
                let stack = local
                    .stack
                    .iter()
                    .map(Symbol::as_str)
                    .collect::<Vec<_>>()
                    .join(" ");
                let marker = if i == self.active { "*" } else { "" };
                format!("{marker}{} [{stack}]", local.state)
            })
            .collect::<Vec<_>>()
            .join(" | ");
        write!(f, "(pos {}: {parts})", self.input_pos)
    }
}

impl DpasSystem {
    pub fn new(components: Vec<Pda>) -> Result<Self, DpasValidationError> {
        let Some(first) = components.first() else {
            return Err(DpasValidationError::NoComponents);
        };
        let acceptance_mode = first.acceptance_mode();
        for (index, comp) in components.iter().enumerate() {
            if comp.acceptance_mode() != acceptance_mode {
                return Err(DpasValidationError::MixedAcceptanceModes {
                    index,
                    expected: acceptance_mode,
                    found: comp.acceptance_mode(),
                });
            }
        }
        let pooled_alphabet = components
            .iter()
            .flat_map(|c| c.input_alphabet().cloned())
            .collect();
        Ok(DpasSystem {
            components,
            acceptance_mode,
            pooled_alphabet,
        })
    }

    /// A system of `copies` identical components.
    pub fn uniform(machine: &Pda, copies: usize) -> Result<Self, DpasValidationError> {
        Self::new(vec![machine.clone(); copies])
    }

    pub fn components(&self) -> &[Pda] {
        &self.components
    }

    pub fn acceptance_mode(&self) -> AcceptanceMode {
        self.acceptance_mode
    }

    fn local_as_pda_config(&self, cfg: &DpasConfig, index: usize) -> PdaConfig {
        PdaConfig {
            state: cfg.locals[index].state.clone(),
            input_pos: cfg.input_pos,
            stack: cfg.locals[index].stack.clone(),
        }
    }

    /// Initial configurations, one per choice of the initially active
    /// component.
    pub fn initial_configs(&self) -> Vec<DpasConfig> {
        let locals: Vec<DpasLocal> = self
            .components
            .iter()
            .map(|c| DpasLocal {
                state: c.initial_state().clone(),
                stack: vec![c.bottom_symbol().clone()],
            })
            .collect();
        (0..self.components.len())
            .map(|active| DpasConfig {
                active,
                input_pos: 0,
                locals: locals.clone(),
            })
            .collect()
    }

    /// Successors of `cfg`: all moves of the active component if it has any,
    /// otherwise one turn handover per other component that could move.
    pub fn step(&self, cfg: &DpasConfig, word: &[Symbol]) -> Vec<DpasConfig> {
        let active = cfg.active;
        let acfg = self.local_as_pda_config(cfg, active);
        let moves = self.components[active].applicable_moves(&acfg, word);
        if !moves.is_empty() {
            return moves
                .into_iter()
                .map(|idx| {
                    let next = self.components[active].apply_move(&acfg, idx);
                    let mut locals = cfg.locals.clone();
                    locals[active] = DpasLocal {
                        state: next.state,
                        stack: next.stack,
                    };
                    DpasConfig {
                        active,
                        input_pos: next.input_pos,
                        locals,
                    }
                })
                .collect();
        }
        let mut successors = Vec::new();
        for j in 0..self.components.len() {
            if j == active {
                continue;
            }
            let jcfg = self.local_as_pda_config(cfg, j);
            if !self.components[j].applicable_moves(&jcfg, word).is_empty() {
                successors.push(DpasConfig {
                    active: j,
                    input_pos: cfg.input_pos,
                    locals: cfg.locals.clone(),
                });
            }
        }
        successors
    }

    pub fn is_accepting_config(&self, cfg: &DpasConfig, word: &[Symbol]) -> bool {
        if cfg.input_pos != word.len() {
            return false;
        }
        match self.acceptance_mode {
            AcceptanceMode::FinalState => self
                .components
                .iter()
                .zip(&cfg.locals)
                .all(|(c, l)| c.is_final(&l.state)),
            AcceptanceMode::EmptyStack => cfg.locals.iter().all(|l| l.stack.is_empty()),
        }
    }

    pub fn check_word(&self, word: &[Symbol]) -> Result<(), InputError> {
        for (position, symbol) in word.iter().enumerate() {
            if !self.pooled_alphabet.contains(symbol) {
                return Err(InputError::SymbolNotInAlphabet {
                    symbol: symbol.clone(),
                    position,
                });
            }
        }
        Ok(())
    }

    /// Bounded breadth-first search over system configurations, starting
    /// from every choice of initially active component.
    pub fn accepts(&self, word: &[Symbol], budget: &Budget) -> Result<Verdict<()>, InputError> {
        self.check_word(word)?;
        let mut stats = SearchStats::default();
        let mut visited: HashMap<DpasConfig, ()> = HashMap::new();
        let mut queue = VecDeque::new();
        for init in self.initial_configs() {
            if visited.contains_key(&init) {
                continue;
            }
            stats.configurations += 1;
            if stats.configurations > budget.max_configurations {
                return Ok(Verdict::budget_exhausted(stats));
            }
            visited.insert(init.clone(), ());
            if self.is_accepting_config(&init, word) {
                return Ok(Verdict::accepted((), stats));
            }
            queue.push_back(init);
        }
        while let Some(cfg) = queue.pop_front() {
            stats.steps += 1;
            if stats.steps > budget.max_steps {
                return Ok(Verdict::budget_exhausted(stats));
            }
            for succ in self.step(&cfg, word) {
                if visited.contains_key(&succ) {
                    continue;
                }
                stats.configurations += 1;
                if stats.configurations > budget.max_configurations {
                    return Ok(Verdict::budget_exhausted(stats));
                }
                visited.insert(succ.clone(), ());
                if self.is_accepting_config(&succ, word) {
                    return Ok(Verdict::accepted((), stats));
                }
                queue.push_back(succ);
            }
        }
        Ok(Verdict::rejected(stats))
    }
}

/// How a word relates to the n-fold interleaving of a machine's language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MembershipDecision {
    /// `assignment[p]` says which copy reads position `p`; this is the
    /// lexicographically first assignment that works.
    Member { assignment: Vec<usize> },
    NonMember,
    /// Some assignments could not be settled within the budget and none of
    /// the settled ones worked.
    Inconclusive,
}

/// Decides by exhaustive certificate search whether `word` splits into
/// `copies` interleaved subsequences that the machine accepts individually.
/// Every candidate assignment of positions to copies is tried in
/// lexicographic order; per-subsequence verdicts are cached, since many
/// assignments share subsequences.
pub fn udpas_member_np(
    machine: &Pda,
    copies: usize,
    word: &[Symbol],
    budget: &Budget,
) -> Result<MembershipDecision, InputError> {
    assert!(copies > 0, "need at least one copy");
    machine.check_word(word)?;

    let mut cache: HashMap<Vec<Symbol>, VerdictKind> = HashMap::new();
    let mut check = |sub: Vec<Symbol>| -> VerdictKind {
        if let Some(kind) = cache.get(&sub) {
            return *kind;
        }
        let kind = machine
            .accepts(&sub, budget)
            .expect("subsequence symbols were validated")
            .kind;
        cache.insert(sub, kind);
        kind
    };

    let mut assignment = vec![0usize; word.len()];
    let mut saw_inconclusive = false;
    loop {
        let mut parts: Vec<Vec<Symbol>> = vec![Vec::new(); copies];
        for (pos, &copy) in assignment.iter().enumerate() {
            parts[copy].push(word[pos].clone());
        }
        let mut failed = false;
        let mut unsettled = false;
        for part in parts {
            match check(part) {
                VerdictKind::Accepted => {}
                VerdictKind::Rejected => {
                    failed = true;
                    break;
                }
                VerdictKind::BudgetExhausted => unsettled = true,
            }
        }
        if !failed && !unsettled {
            return Ok(MembershipDecision::Member { assignment });
        }
        if !failed && unsettled {
            saw_inconclusive = true;
        }

        // Next assignment in lexicographic order, rightmost digit fastest.
        let mut pos = assignment.len();
        loop {
            if pos == 0 {
                return Ok(if saw_inconclusive {
                    MembershipDecision::Inconclusive
                } else {
                    MembershipDecision::NonMember
                });
            }
            pos -= 1;
            assignment[pos] += 1;
            if assignment[pos] < copies {
                break;
            }
            assignment[pos] = 0;
        }
    }
}
