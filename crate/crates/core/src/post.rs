//! Deterministic queue machines with a single FIFO store.
//!
//! A machine works on a queue of symbols over its alphabet plus the reserved
//! blank symbol `#`. Every step either tests the queue (dequeueing the front
//! symbol and branching on it, with a separate branch for the empty queue) or
//! appends one symbol at the back, so the queue length changes by at most one
//! per step. Dedicated accept and reject instructions halt the machine.
//!
//! The text format lists the alphabet, then one labelled instruction per
//! line; the first instruction is the entry point:
//!
//! ```text
//! alphabet: a b
//! L0:  TEST empty -> ACC, a -> L1, b -> REJ, '#' -> REJ
//! L1:  ASSIGN a -> L0
//! ACC: ACCEPT
//! REJ: REJECT
//! ```
//!
//! The blank symbol is always written quoted as `'#'`; other symbols may be
//! bare or quoted.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use indexmap::{IndexMap, IndexSet};
use thiserror::Error;

use crate::pda::InputError;
use crate::symbol::Symbol;
use crate::verdict::{SearchStats, Verdict};

pub const BLANK: &str = "#";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instruction {
    Test {
        label: String,
        on_empty: usize,
        /// Branch per dequeued symbol; covers the whole alphabet plus blank.
        branches: IndexMap<Symbol, usize>,
    },
    Assign {
        label: String,
        symbol: Symbol,
        next: usize,
    },
    Accept {
        label: String,
    },
    Reject {
        label: String,
    },
}

impl Instruction {
    pub fn label(&self) -> &str {
        match self {
            Instruction::Test { label, .. }
            | Instruction::Assign { label, .. }
            | Instruction::Accept { label }
            | Instruction::Reject { label } => label,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PostMachine {
    alphabet: IndexSet<Symbol>,
    blank: Symbol,
    instructions: Vec<Instruction>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PostConfig {
    pub instruction: usize,
    pub queue: VecDeque<Symbol>,
}

impl fmt::Display for PostConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let queue = self
            .queue
            .iter()
            .map(Symbol::as_str)
            .collect::<Vec<_>>()
            .join(" ");
        write!(f, "(#{}, [{queue}])", self.instruction)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PostStep {
    Next(PostConfig),
    Accepted,
    Rejected,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PostTrace {
    /// Visited configurations, starting with the initial one.
    pub configs: Vec<PostConfig>,
    pub verdict: Verdict<()>,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PostParseError {
    #[error("line {line}: expected an `alphabet:` declaration first")]
    MissingAlphabet { line: usize },
    #[error("line {line}: the blank symbol `#` is implicit and may not be declared")]
    ReservedAlphabetSymbol { line: usize },
    #[error("line {line}: duplicate alphabet symbol `{name}`")]
    DuplicateAlphabetSymbol { name: String, line: usize },
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: duplicate label `{label}`")]
    DuplicateLabel { label: String, line: usize },
    #[error("line {line}: unknown target label `{target}`")]
    UnknownTarget { target: String, line: usize },
    #[error("line {line}: branch symbol `{name}` is not in the alphabet")]
    UnknownBranchSymbol { name: String, line: usize },
    #[error("line {line}: duplicate branch for `{key}`")]
    DuplicateBranch { key: String, line: usize },
    #[error("line {line}: missing branch for `{key}`")]
    MissingBranch { key: String, line: usize },
    #[error("program has no instructions")]
    NoInstructions,
}

/// A symbol token: bare, or wrapped in single quotes. The blank must be
/// quoted; `None` means the token is not a valid symbol here.
fn parse_symbol_token(token: &str) -> Option<(String, bool)> {
    let quoted = token.len() >= 2 && token.starts_with('\'') && token.ends_with('\'');
    if quoted {
        let inner = &token[1..token.len() - 1];
        if inner.is_empty() || inner.contains('\'') {
            return None;
        }
        return Some((inner.to_owned(), true));
    }
    if token.is_empty() || token.contains('\'') {
        return None;
    }
    Some((token.to_owned(), false))
}

pub fn parse_post(text: &str) -> Result<PostMachine, Vec<PostParseError>> {
    let mut errors = Vec::new();
    let mut alphabet: IndexSet<Symbol> = IndexSet::new();
    let blank = Symbol::new(BLANK);
    let mut saw_alphabet = false;

    // (label, body, line number)
    let mut raw: Vec<(String, String, usize)> = Vec::new();
    let mut labels: HashMap<String, usize> = HashMap::new();

    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if !saw_alphabet {
            let Some(rest) = line.strip_prefix("alphabet:") else {
                errors.push(PostParseError::MissingAlphabet { line: line_no });
                return Err(errors);
            };
            saw_alphabet = true;
            for token in rest.split_whitespace() {
                match parse_symbol_token(token) {
                    Some((name, _)) if name == BLANK => {
                        errors.push(PostParseError::ReservedAlphabetSymbol { line: line_no });
                    }
                    Some((name, _)) => {
                        if !alphabet.insert(Symbol::new(&name)) {
                            errors.push(PostParseError::DuplicateAlphabetSymbol {
                                name,
                                line: line_no,
                            });
                        }
                    }
                    None => errors.push(PostParseError::Malformed {
                        line: line_no,
                        reason: format!("bad alphabet token `{token}`"),
                    }),
                }
            }
            continue;
        }
        let Some((label, body)) = line.split_once(':') else {
            errors.push(PostParseError::Malformed {
                line: line_no,
                reason: String::from("expected `LABEL: INSTRUCTION`"),
            });
            continue;
        };
        let label = label.trim().to_owned();
        if label.is_empty() || label.split_whitespace().count() != 1 {
            errors.push(PostParseError::Malformed {
                line: line_no,
                reason: format!("bad label `{label}`"),
            });
            continue;
        }
        match labels.entry(label.clone()) {
            std::collections::hash_map::Entry::Occupied(_) => {
                errors.push(PostParseError::DuplicateLabel {
                    label,
                    line: line_no,
                });
                continue;
            }
            std::collections::hash_map::Entry::Vacant(slot) => {
                slot.insert(raw.len());
            }
        }
        raw.push((label, body.trim().to_owned(), line_no));
    }

    if !saw_alphabet {
        errors.push(PostParseError::MissingAlphabet { line: 1 });
        return Err(errors);
    }
    if raw.is_empty() {
        errors.push(PostParseError::NoInstructions);
        return Err(errors);
    }

    let resolve = |target: &str, line: usize, errors: &mut Vec<PostParseError>| -> usize {
        match labels.get(target) {
            Some(&i) => i,
            None => {
                errors.push(PostParseError::UnknownTarget {
                    target: target.to_owned(),
                    line,
                });
                0
            }
        }
    };

    let mut instructions = Vec::with_capacity(raw.len());
    for (label, body, line) in &raw {
        let line = *line;
        if body == "ACCEPT" {
            instructions.push(Instruction::Accept {
                label: label.clone(),
            });
            continue;
        }
        if body == "REJECT" {
            instructions.push(Instruction::Reject {
                label: label.clone(),
            });
            continue;
        }
        if let Some(rest) = body.strip_prefix("TEST") {
            let mut on_empty = None;
            let mut branches: IndexMap<Symbol, usize> = IndexMap::new();
            for part in rest.split(',') {
                let part = part.trim();
                let Some((key, target)) = part.split_once("->") else {
                    errors.push(PostParseError::Malformed {
                        line,
                        reason: format!("bad branch `{part}`, expected `SYMBOL -> LABEL`"),
                    });
                    continue;
                };
                let key = key.trim();
                let target = resolve(target.trim(), line, &mut errors);
                if key == "empty" {
                    if on_empty.replace(target).is_some() {
                        errors.push(PostParseError::DuplicateBranch {
                            key: String::from("empty"),
                            line,
                        });
                    }
                    continue;
                }
                let sym = match parse_symbol_token(key) {
                    Some((name, quoted)) => {
                        if name == BLANK && !quoted {
                            errors.push(PostParseError::Malformed {
                                line,
                                reason: String::from("the blank symbol must be written '#'"),
                            });
                            continue;
                        }
                        if name != BLANK && !alphabet.contains(&Symbol::new(&name)) {
                            errors.push(PostParseError::UnknownBranchSymbol { name, line });
                            continue;
                        }
                        Symbol::new(&name)
                    }
                    None => {
                        errors.push(PostParseError::Malformed {
                            line,
                            reason: format!("bad branch symbol `{key}`"),
                        });
                        continue;
                    }
                };
                if branches.insert(sym.clone(), target).is_some() {
                    errors.push(PostParseError::DuplicateBranch {
                        key: sym.as_str().to_owned(),
                        line,
                    });
                }
            }
            if on_empty.is_none() {
                errors.push(PostParseError::MissingBranch {
                    key: String::from("empty"),
                    line,
                });
            }
            for sym in alphabet.iter().chain(std::iter::once(&blank)) {
                if !branches.contains_key(sym) {
                    errors.push(PostParseError::MissingBranch {
                        key: sym.as_str().to_owned(),
                        line,
                    });
                }
            }
            instructions.push(Instruction::Test {
                label: label.clone(),
                on_empty: on_empty.unwrap_or(0),
                branches,
            });
            continue;
        }
        if let Some(rest) = body.strip_prefix("ASSIGN") {
            let Some((sym_token, target)) = rest.split_once("->") else {
                errors.push(PostParseError::Malformed {
                    line,
                    reason: String::from("expected `ASSIGN SYMBOL -> LABEL`"),
                });
                continue;
            };
            let target = resolve(target.trim(), line, &mut errors);
            let sym_token = sym_token.trim();
            let symbol = match parse_symbol_token(sym_token) {
                Some((name, quoted)) => {
                    if name == BLANK && !quoted {
                        errors.push(PostParseError::Malformed {
                            line,
                            reason: String::from("the blank symbol must be written '#'"),
                        });
                        continue;
                    }
                    if name != BLANK && !alphabet.contains(&Symbol::new(&name)) {
                        errors.push(PostParseError::UnknownBranchSymbol {
                            name,
                            line,
                        });
                        continue;
                    }
                    Symbol::new(&name)
                }
                None => {
                    errors.push(PostParseError::Malformed {
                        line,
                        reason: format!("bad symbol `{sym_token}`"),
                    });
                    continue;
                }
            };
            instructions.push(Instruction::Assign {
                label: label.clone(),
                symbol,
                next: target,
            });
            continue;
        }
        errors.push(PostParseError::Malformed {
            line,
            reason: format!("unknown instruction `{body}`"),
        });
    }

    if !errors.is_empty() {
        return Err(errors);
    }
    Ok(PostMachine {
        alphabet,
        blank,
        instructions,
    })
}

impl PostMachine {
    pub fn alphabet(&self) -> impl Iterator<Item = &Symbol> {
        self.alphabet.iter()
    }

    pub fn blank(&self) -> &Symbol {
        &self.blank
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn initial_config(&self, word: &[Symbol]) -> PostConfig {
        PostConfig {
            instruction: 0,
            queue: word.iter().cloned().collect(),
        }
    }

    pub fn check_word(&self, word: &[Symbol]) -> Result<(), InputError> {
        for (position, symbol) in word.iter().enumerate() {
            if *symbol == self.blank {
                return Err(InputError::ReservedSymbol {
                    symbol: symbol.clone(),
                    position,
                });
            }
            if !self.alphabet.contains(symbol) {
                return Err(InputError::SymbolNotInAlphabet {
                    symbol: symbol.clone(),
                    position,
                });
            }
        }
        Ok(())
    }

    pub fn step(&self, cfg: &PostConfig) -> PostStep {
        match &self.instructions[cfg.instruction] {
            Instruction::Accept { .. } => PostStep::Accepted,
            Instruction::Reject { .. } => PostStep::Rejected,
            Instruction::Test {
                on_empty, branches, ..
            } => {
                let mut queue = cfg.queue.clone();
                match queue.pop_front() {
                    None => PostStep::Next(PostConfig {
                        instruction: *on_empty,
                        queue,
                    }),
                    Some(front) => {
                        let target = branches[&front];
                        PostStep::Next(PostConfig {
                            instruction: target,
                            queue,
                        })
                    }
                }
            }
            Instruction::Assign { symbol, next, .. } => {
                let mut queue = cfg.queue.clone();
                queue.push_back(symbol.clone());
                PostStep::Next(PostConfig {
                    instruction: *next,
                    queue,
                })
            }
        }
    }

    pub fn run(&self, word: &[Symbol], max_steps: u64) -> Result<Verdict<()>, InputError> {
        Ok(self.run_trace_impl(word, max_steps, false)?.verdict)
    }

    /// Like [`run`](Self::run) but also returns every visited configuration.
    pub fn run_trace(&self, word: &[Symbol], max_steps: u64) -> Result<PostTrace, InputError> {
        self.run_trace_impl(word, max_steps, true)
    }

    fn run_trace_impl(
        &self,
        word: &[Symbol],
        max_steps: u64,
        keep: bool,
    ) -> Result<PostTrace, InputError> {
        self.check_word(word)?;
        let mut stats = SearchStats {
            configurations: 1,
            steps: 0,
        };
        let mut cfg = self.initial_config(word);
        let mut configs = vec![cfg.clone()];
        loop {
            match self.step(&cfg) {
                PostStep::Accepted => {
                    return Ok(PostTrace {
                        configs,
                        verdict: Verdict::accepted((), stats),
                    })
                }
                PostStep::Rejected => {
                    return Ok(PostTrace {
                        configs,
                        verdict: Verdict::rejected(stats),
                    })
                }
                PostStep::Next(next) => {
                    stats.steps += 1;
                    if stats.steps > max_steps {
                        return Ok(PostTrace {
                            configs,
                            verdict: Verdict::budget_exhausted(stats),
                        });
                    }
                    stats.configurations += 1;
                    if keep {
                        configs.push(next.clone());
                    }
                    cfg = next;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{pm_anbn_source, pm_even_source};
    use crate::symbol::{word_from_chars, words_up_to};
    use crate::verdict::VerdictKind;

    #[test]
    fn parses_the_even_length_program() {
        let machine = parse_post(pm_even_source()).unwrap();
        assert_eq!(machine.alphabet().count(), 1);
        let labels: Vec<&str> = machine.instructions().iter().map(Instruction::label).collect();
        assert_eq!(labels, vec!["L0", "L1", "ACC", "REJ"]);
        match &machine.instructions()[0] {
            Instruction::Test {
                on_empty, branches, ..
            } => {
                assert_eq!(*on_empty, 2);
                assert_eq!(branches[&Symbol::new("a")], 1);
                assert_eq!(branches[&Symbol::new(BLANK)], 3);
            }
            other => panic!("expected a test instruction, got {other:?}"),
        }
        assert!(matches!(machine.instructions()[2], Instruction::Accept { .. }));
        assert!(matches!(machine.instructions()[3], Instruction::Reject { .. }));
    }

    #[test]
    fn even_machine_accepts_exactly_even_lengths() {
        let machine = parse_post(pm_even_source()).unwrap();
        for n in 0..=8 {
            let word = word_from_chars(&"a".repeat(n));
            let verdict = machine.run(&word, 10_000).unwrap();
            let expected = if n % 2 == 0 {
                VerdictKind::Accepted
            } else {
                VerdictKind::Rejected
            };
            assert_eq!(verdict.kind, expected, "length {n}");
        }
    }

    #[test]
    fn block_program_matches_the_reference_predicate() {
        let machine = parse_post(pm_anbn_source()).unwrap();
        let alphabet = [Symbol::new("a"), Symbol::new("b")];
        for word in words_up_to(&alphabet, 6) {
            let n = word.len() / 2;
            let in_language = word.len() % 2 == 0
                && word[..n].iter().all(|s| s.as_str() == "a")
                && word[n..].iter().all(|s| s.as_str() == "b");
            let verdict = machine.run(&word, 10_000).unwrap();
            let expected = if in_language {
                VerdictKind::Accepted
            } else {
                VerdictKind::Rejected
            };
            assert_eq!(verdict.kind, expected, "word {word:?}");
        }
    }

    #[test]
    fn traces_record_every_configuration() {
        let machine = parse_post(pm_even_source()).unwrap();
        let trace = machine.run_trace(&word_from_chars("aa"), 10_000).unwrap();
        assert_eq!(trace.verdict.kind, VerdictKind::Accepted);
        let queues: Vec<usize> = trace.configs.iter().map(|c| c.queue.len()).collect();
        assert_eq!(queues, vec![2, 1, 0, 0]);
        for pair in trace.configs.windows(2) {
            let delta = pair[1].queue.len() as i64 - pair[0].queue.len() as i64;
            assert!((-1..=1).contains(&delta), "queue delta {delta}");
        }
    }

    #[test]
    fn runaway_programs_hit_the_step_budget() {
        let machine = parse_post("alphabet: a\nL: ASSIGN a -> L\n").unwrap();
        let verdict = machine.run(&[], 10).unwrap();
        assert_eq!(verdict.kind, VerdictKind::BudgetExhausted);
        assert_eq!(verdict.stats.steps, 11);
    }

    #[test]
    fn input_validation_guards_blank_and_alphabet() {
        let machine = parse_post(pm_even_source()).unwrap();
        let err = machine.check_word(&[Symbol::new("#")]).unwrap_err();
        assert!(matches!(err, InputError::ReservedSymbol { position: 0, .. }));
        let err = machine
            .check_word(&[Symbol::new("a"), Symbol::new("b")])
            .unwrap_err();
        assert!(matches!(
            err,
            InputError::SymbolNotInAlphabet { position: 1, .. }
        ));
    }

    #[test]
    fn parse_reports_every_defect() {
        let text = "\
alphabet: a a
L0: TEST empty -> L0, a -> NOWHERE
L0: ACCEPT
A1: ASSIGN b -> L0
A2: ASSIGN '#' -> MISSING
X:  FROB
";
        let errors = parse_post(text).unwrap_err();
        assert!(errors.contains(&PostParseError::DuplicateAlphabetSymbol {
            name: String::from("a"),
            line: 1
        }));
        assert!(errors.contains(&PostParseError::UnknownTarget {
            target: String::from("NOWHERE"),
            line: 2
        }));
        assert!(errors.contains(&PostParseError::MissingBranch {
            key: String::from("#"),
            line: 2
        }));
        assert!(errors.contains(&PostParseError::DuplicateLabel {
            label: String::from("L0"),
            line: 3
        }));
        assert!(errors.contains(&PostParseError::UnknownBranchSymbol {
            name: String::from("b"),
            line: 4
        }));
        assert!(errors.contains(&PostParseError::UnknownTarget {
            target: String::from("MISSING"),
            line: 5
        }));
        assert!(errors.iter().any(|e| matches!(
            e,
            PostParseError::Malformed { line: 6, .. }
        )));
        assert_eq!(errors.len(), 7);
    }

    #[test]
    fn unquoted_blank_is_malformed() {
        let text = "\
alphabet: a
L0: TEST empty -> L0, a -> L0, # -> L0
";
        let errors = parse_post(text).unwrap_err();
        assert!(errors.iter().any(|e| matches!(
            e,
            PostParseError::Malformed { line: 2, reason } if reason.contains("'#'")
        )));
    }

    #[test]
    fn incomplete_test_branches_are_rejected() {
        let text = "\
alphabet: a b
L0: TEST a -> L0, '#' -> L0
";
        let errors = parse_post(text).unwrap_err();
        assert!(errors.contains(&PostParseError::MissingBranch {
            key: String::from("empty"),
            line: 2
        }));
        assert!(errors.contains(&PostParseError::MissingBranch {
            key: String::from("b"),
            line: 2
        }));
        assert_eq!(errors.len(), 2);
    }

    #[test]
    fn reserved_blank_cannot_be_declared() {
        let errors = parse_post("alphabet: a '#'\nL0: ACCEPT\n").unwrap_err();
        assert_eq!(
            errors,
            vec![PostParseError::ReservedAlphabetSymbol { line: 1 }]
        );
    }
}
