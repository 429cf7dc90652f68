//! Translates a queue machine into an equivalent two-component parallel
//! system of pushdown automata.
//!
//! The main component keeps the queue on its stack, front on top, above a
//! marker symbol and its own bottom. The helper component owns no data; it
//! alternates forever between querying the main component and answering it.
//! Every queue operation is a round trip: the main component pushes the
//! response symbol over its whole stack and lets the helper take it, then
//! queries the helper to get the contents back, prepending them over
//! whatever it kept. Appending a symbol means keeping that symbol below the
//! returning contents; rotating the queue when the marker surfaces means
//! keeping a fresh marker below them. Each round trip buries the two bottom
//! symbols of the travelling stack as garbage, which the scanning states pop
//! and ignore.
//!
//! In endmarker mode the input must be the reversed queue word followed by a
//! reserved endmarker symbol, and both components are deterministic. In
//! faithful mode the input is just the reversed word and both components
//! guess where it ends, giving a nondeterministic but endmarker-free system.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::pcpa::{
    AcceptanceQuantifier, ComponentParts, PcpaParts, PcpaSystem, StepMode,
};
use crate::pda::{InputError, Move};
use crate::post::{Instruction, PostMachine};
use crate::symbol::{fresh_name, StateId, Symbol};
use crate::verdict::{Budget, DifferentialEntry, DifferentialReport};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CompilationMode {
    /// Input is the reversed queue word plus an endmarker; the system is
    /// deterministic.
    #[default]
    Endmarker,
    /// Input is exactly the reversed queue word; the load phase is guessed.
    Faithful,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompilationOptions {
    pub mode: CompilationMode,
    /// Prepended to every generated symbol name before uniquification.
    pub symbol_prefix: String,
}

/// Everything a caller needs to interpret the compiled system: which
/// generated name plays which role, and where each source instruction entered
/// the main component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompilationContract {
    pub mode: CompilationMode,
    /// `None` in faithful mode.
    pub endmarker: Option<Symbol>,
    pub blank: Symbol,
    /// Marks the rotation point of the queue on the main stack.
    pub marker: Symbol,
    pub bottom_main: Symbol,
    pub bottom_helper: Symbol,
    pub query_main: Symbol,
    pub query_helper: Symbol,
    pub response: Symbol,
    /// Source instruction label -> entry state of the main component.
    pub entry_states: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompiledSystem {
    pub system: PcpaSystem,
    pub contract: CompilationContract,
}

impl CompiledSystem {
    /// Input word for the system that corresponds to a queue word: the word
    /// reversed, plus the endmarker when the mode uses one.
    pub fn encode_word(&self, word: &[Symbol]) -> Result<Vec<Symbol>, InputError> {
        for (position, symbol) in word.iter().enumerate() {
            let reserved = *symbol == self.contract.blank
                || Some(symbol) == self.contract.endmarker.as_ref();
            if reserved {
                return Err(InputError::ReservedSymbol {
                    symbol: symbol.clone(),
                    position,
                });
            }
        }
        let mut encoded: Vec<Symbol> = word.iter().rev().cloned().collect();
        if let Some(end) = &self.contract.endmarker {
            encoded.push(end.clone());
        }
        // The system validates alphabet membership itself, but catching bad
        // symbols here points at the original word, not the reversed one.
        for (position, symbol) in word.iter().enumerate() {
            if !self.system.input_alphabet().any(|s| s == symbol) {
                return Err(InputError::SymbolNotInAlphabet {
                    symbol: symbol.clone(),
                    position,
                });
            }
        }
        Ok(encoded)
    }
}

fn entry_name(instr: &Instruction) -> String {
    match instr {
        Instruction::Test { label, .. } => format!("scan:{label}"),
        Instruction::Assign { label, .. } => format!("asg:{label}"),
        Instruction::Accept { .. } => String::from("accept"),
        Instruction::Reject { .. } => String::from("reject"),
    }
}

pub fn compile_post(machine: &PostMachine, options: &CompilationOptions) -> CompiledSystem {
    let sigma: Vec<Symbol> = machine.alphabet().cloned().collect();
    let blank = machine.blank().clone();

    let mut taken: Vec<String> = sigma
        .iter()
        .chain(std::iter::once(&blank))
        .map(|s| s.as_str().to_owned())
        .collect();
    let pick = |taken: &mut Vec<String>, base: &str| -> Symbol {
        let name = fresh_name(
            &format!("{}{base}", options.symbol_prefix),
            taken.iter().map(String::as_str),
        );
        taken.push(name.clone());
        Symbol::new(name)
    };
    let endmarker = match options.mode {
        CompilationMode::Endmarker => Some(pick(&mut taken, "$")),
        CompilationMode::Faithful => None,
    };
    let marker = pick(&mut taken, "¢");
    let bottom_main = pick(&mut taken, "Z1");
    let bottom_helper = pick(&mut taken, "Z2");
    let query_main = pick(&mut taken, "K1");
    let query_helper = pick(&mut taken, "K2");
    let response = pick(&mut taken, "R");

    let mut input_alphabet = sigma.clone();
    if let Some(end) = &endmarker {
        input_alphabet.push(end.clone());
    }

    // Queue symbols as they appear on stacks, then the infrastructure.
    let mut queue_symbols = sigma.clone();
    queue_symbols.push(blank.clone());
    let mut stack_alphabet = queue_symbols.clone();
    stack_alphabet.extend([
        marker.clone(),
        bottom_main.clone(),
        bottom_helper.clone(),
        query_main.clone(),
        query_helper.clone(),
        response.clone(),
    ]);
    // Symbols the main component can face as its top outside communication.
    let mut plain_tops = queue_symbols.clone();
    plain_tops.extend([marker.clone(), bottom_main.clone(), bottom_helper.clone()]);

    fn st(name: impl AsRef<str>) -> StateId {
        StateId::new(name)
    }
    let instructions = machine.instructions();
    let entry = |idx: usize| st(entry_name(&instructions[idx]));

    let mut main_states: Vec<StateId> = vec![st("init"), st("load")];
    for instr in instructions {
        match instr {
            Instruction::Test { label, .. } => {
                main_states.push(st(format!("scan:{label}")));
                main_states.push(st(format!("rot:{label}")));
                main_states.push(st(format!("scanw:{label}")));
            }
            Instruction::Assign { label, .. } => {
                main_states.push(st(format!("asg:{label}")));
                main_states.push(st(format!("asgp:{label}")));
            }
            Instruction::Accept { .. } | Instruction::Reject { .. } => {}
        }
    }
    main_states.push(st("accept"));
    main_states.push(st("reject"));

    let mut main_moves = Vec::new();
    main_moves.push(Move::new(
        st("init"),
        None,
        bottom_main.clone(),
        st("load"),
        vec![marker.clone(), bottom_main.clone()],
    ));
    let mut load_tops = vec![marker.clone()];
    load_tops.extend(sigma.iter().cloned());
    for sym in &sigma {
        for d in &load_tops {
            main_moves.push(Move::new(
                st("load"),
                Some(sym.clone()),
                d.clone(),
                st("load"),
                vec![sym.clone(), d.clone()],
            ));
        }
    }
    let first_entry = entry(0);
    for d in &load_tops {
        main_moves.push(Move::new(
            st("load"),
            endmarker.clone(),
            d.clone(),
            first_entry.clone(),
            vec![d.clone()],
        ));
    }

    for instr in instructions {
        match instr {
            Instruction::Test {
                label,
                on_empty,
                branches,
            } => {
                let scan = st(format!("scan:{label}"));
                let rot = st(format!("rot:{label}"));
                let scanw = st(format!("scanw:{label}"));
                for state in [&scan, &scanw] {
                    for garbage in [&bottom_main, &bottom_helper] {
                        main_moves.push(Move::new(
                            state.clone(),
                            None,
                            garbage.clone(),
                            state.clone(),
                            vec![],
                        ));
                    }
                    for (sym, target) in branches {
                        main_moves.push(Move::new(
                            state.clone(),
                            None,
                            sym.clone(),
                            entry(*target),
                            vec![],
                        ));
                    }
                }
                main_moves.push(Move::new(
                    scan.clone(),
                    None,
                    marker.clone(),
                    rot.clone(),
                    vec![response.clone()],
                ));
                main_moves.push(Move::new(
                    rot.clone(),
                    None,
                    bottom_main.clone(),
                    scanw.clone(),
                    vec![query_helper.clone(), marker.clone(), bottom_main.clone()],
                ));
                main_moves.push(Move::new(
                    scanw.clone(),
                    None,
                    marker.clone(),
                    entry(*on_empty),
                    vec![marker.clone()],
                ));
            }
            Instruction::Assign {
                label,
                symbol,
                next,
            } => {
                let asg = st(format!("asg:{label}"));
                let asgp = st(format!("asgp:{label}"));
                for d in &plain_tops {
                    main_moves.push(Move::new(
                        asg.clone(),
                        None,
                        d.clone(),
                        asgp.clone(),
                        vec![response.clone(), d.clone()],
                    ));
                }
                main_moves.push(Move::new(
                    asgp.clone(),
                    None,
                    bottom_main.clone(),
                    entry(*next),
                    vec![query_helper.clone(), symbol.clone(), bottom_main.clone()],
                ));
            }
            Instruction::Accept { .. } | Instruction::Reject { .. } => {}
        }
    }

    let helper_states = vec![st("read"), st("relay"), st("offer")];
    let mut helper_moves = Vec::new();
    for sym in &sigma {
        helper_moves.push(Move::new(
            st("read"),
            Some(sym.clone()),
            bottom_helper.clone(),
            st("read"),
            vec![bottom_helper.clone()],
        ));
    }
    helper_moves.push(Move::new(
        st("read"),
        endmarker.clone(),
        bottom_helper.clone(),
        st("relay"),
        vec![bottom_helper.clone()],
    ));
    helper_moves.push(Move::new(
        st("relay"),
        None,
        bottom_helper.clone(),
        st("offer"),
        vec![query_main.clone(), bottom_helper.clone()],
    ));
    for d in &plain_tops {
        helper_moves.push(Move::new(
            st("offer"),
            None,
            d.clone(),
            st("relay"),
            vec![response.clone(), d.clone()],
        ));
    }

    let entry_states = instructions
        .iter()
        .map(|i| (i.label().to_owned(), entry_name(i)))
        .collect();

    let system = PcpaParts {
        input_alphabet,
        stack_alphabet,
        query_symbols: vec![query_main.clone(), query_helper.clone()],
        response_symbol: response.clone(),
        quantifier: AcceptanceQuantifier::All,
        components: vec![
            ComponentParts {
                name: String::from("main"),
                states: main_states,
                moves: main_moves,
                initial_state: st("init"),
                bottom_symbol: bottom_main.clone(),
                final_states: vec![st("accept")],
            },
            ComponentParts {
                name: String::from("helper"),
                states: helper_states,
                moves: helper_moves,
                initial_state: st("read"),
                bottom_symbol: bottom_helper.clone(),
                final_states: vec![st("read"), st("relay"), st("offer")],
            },
        ],
    }
    .build()
    .expect("compiled system is valid by construction");

    CompiledSystem {
        system,
        contract: CompilationContract {
            mode: options.mode,
            endmarker,
            blank,
            marker,
            bottom_main,
            bottom_helper,
            query_main,
            query_helper,
            response,
            entry_states,
        },
    }
}

/// Runs the queue machine and the compiled system side by side on each word
/// and reports where the verdicts agree, disagree, or ran out of budget.
pub fn verify_compilation(
    machine: &PostMachine,
    compiled: &CompiledSystem,
    words: &[Vec<Symbol>],
    mode: StepMode,
    budget: &Budget,
) -> Result<DifferentialReport, InputError> {
    let mut entries = Vec::with_capacity(words.len());
    for word in words {
        let left = machine.run(word, budget.max_steps)?.kind;
        let encoded = compiled.encode_word(word)?;
        let right = compiled.system.accepts(&encoded, mode, budget)?.kind;
        entries.push(DifferentialEntry::new(word.clone(), left, right));
    }
    Ok(DifferentialReport::new(entries))
}
