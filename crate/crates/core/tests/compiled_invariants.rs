//! Runs the queue machine and its compiled two-component system side by side
//! and checks that the main stack really carries the queue. Whenever the main
//! component enters an instruction's entry state (letting a communication
//! that is still in flight land first), the stack must hold the queue rotated
//! around the marker: front segment above it, rebuilt back segment below it,
//! with nothing else but bottom-symbol garbage. The reconstruction is
//! compared against the interpreter's own configuration sequence, visit by
//! visit.

use std::collections::HashSet;

use pdsys_core::compile::{compile_post, CompilationMode, CompilationOptions, CompiledSystem};
use pdsys_core::fixtures::{pm_anbn_source, pm_even_source};
use pdsys_core::pcpa::{StepMode, TraceOutcome, TraceResult};
use pdsys_core::post::{parse_post, PostMachine};
use pdsys_core::symbol::words_up_to;
use pdsys_core::{Symbol, VerdictKind};

const MAX_TRACE_STEPS: u64 = 20_000;

fn build(source: &str) -> (PostMachine, CompiledSystem) {
    let machine = parse_post(source).unwrap();
    let compiled = compile_post(
        &machine,
        &CompilationOptions {
            mode: CompilationMode::Endmarker,
            symbol_prefix: String::new(),
        },
    );
    (machine, compiled)
}

fn main_index(compiled: &CompiledSystem) -> usize {
    compiled
        .system
        .components()
        .iter()
        .position(|c| c.name == "main")
        .expect("main component")
}

/// Both stacks at each moment the main component enters an entry state. An
/// entry reached with a pending query on top settles on the following step,
/// so that step's stacks are reported instead. Detection by state change is
/// enough here because no fixture instruction branches directly to itself.
fn entry_snapshots(
    compiled: &CompiledSystem,
    trace: &TraceResult,
) -> Vec<(Vec<Symbol>, Vec<Symbol>)> {
    let main = main_index(compiled);
    let helper = 1 - main;
    let entries: HashSet<&str> = compiled
        .contract
        .entry_states
        .values()
        .map(String::as_str)
        .collect();
    let all: Vec<&pdsys_core::pcpa::PcpaConfig> = std::iter::once(&trace.initial)
        .chain(trace.steps.iter().map(|s| &s.config))
        .collect();
    let mut snapshots = Vec::new();
    for (i, config) in all.iter().enumerate() {
        let state = &config.components[main].state;
        let changed = i == 0 || all[i - 1].components[main].state != *state;
        if !(changed && entries.contains(state.as_str())) {
            continue;
        }
        let settled = if config.components[main].stack.first()
            == Some(&compiled.contract.query_helper)
        {
            all.get(i + 1).expect("pending transfer settles")
        } else {
            config
        };
        snapshots.push((
            settled.components[main].stack.clone(),
            settled.components[helper].stack.clone(),
        ));
    }
    snapshots
}

/// Reads the queue back out of a settled main stack: symbols above the
/// marker are the front, queue symbols below it are the rebuilt back, and
/// everything else must be one of the two bottom symbols.
fn queue_on_stack(
    machine: &PostMachine,
    compiled: &CompiledSystem,
    stack: &[Symbol],
) -> Vec<Symbol> {
    let contract = &compiled.contract;
    let queue_symbols: HashSet<&Symbol> = machine
        .alphabet()
        .chain(std::iter::once(machine.blank()))
        .collect();
    let garbage = [&contract.bottom_main, &contract.bottom_helper];
    let markers = stack
        .iter()
        .filter(|s| **s == contract.marker)
        .count();
    assert_eq!(markers, 1, "marker not unique: {stack:?}");
    assert_eq!(stack.last(), Some(&contract.bottom_main), "{stack:?}");
    let split = stack.iter().position(|s| *s == contract.marker).unwrap();
    let mut queue = Vec::new();
    for segment in [&stack[..split], &stack[split + 1..]] {
        for sym in segment.iter() {
            if queue_symbols.contains(sym) {
                queue.push(sym.clone());
            } else {
                assert!(garbage.contains(&sym), "unexpected symbol in {stack:?}");
            }
        }
    }
    queue
}

fn co_simulate(source: &str, max_len: usize) {
    let (machine, compiled) = build(source);
    let alphabet: Vec<Symbol> = machine.alphabet().cloned().collect();
    for word in words_up_to(&alphabet, max_len) {
        let post_trace = machine.run_trace(&word, MAX_TRACE_STEPS).unwrap();
        assert_ne!(post_trace.verdict.kind, VerdictKind::BudgetExhausted);

        let encoded = compiled.encode_word(&word).unwrap();
        let trace = compiled
            .system
            .run_trace(&encoded, StepMode::Strict, MAX_TRACE_STEPS)
            .unwrap();
        match post_trace.verdict.kind {
            VerdictKind::Accepted => {
                assert_eq!(trace.outcome, TraceOutcome::Accepted, "word {word:?}")
            }
            _ => assert_eq!(trace.outcome, TraceOutcome::Stuck, "word {word:?}"),
        }

        let snapshots = entry_snapshots(&compiled, &trace);
        assert_eq!(
            snapshots.len(),
            post_trace.configs.len(),
            "entry visits out of step on {word:?}"
        );
        for ((main_stack, _), config) in snapshots.iter().zip(&post_trace.configs) {
            let queue: Vec<Symbol> = config.queue.iter().cloned().collect();
            assert_eq!(
                queue_on_stack(&machine, &compiled, main_stack),
                queue,
                "queue mismatch on {word:?}"
            );
        }
    }
}

#[test]
fn unary_program_keeps_its_queue_on_the_stack() {
    co_simulate(pm_even_source(), 6);
}

#[test]
fn two_letter_program_keeps_its_queue_on_the_stack() {
    co_simulate(pm_anbn_source(), 4);
}

#[test]
fn settled_entries_hold_no_communication_symbols() {
    for source in [pm_even_source(), pm_anbn_source()] {
        let (machine, compiled) = build(source);
        let contract = &compiled.contract;
        let alphabet: Vec<Symbol> = machine.alphabet().cloned().collect();
        for word in words_up_to(&alphabet, 3) {
            let encoded = compiled.encode_word(&word).unwrap();
            let trace = compiled
                .system
                .run_trace(&encoded, StepMode::Strict, MAX_TRACE_STEPS)
                .unwrap();
            for (main_stack, helper_stack) in entry_snapshots(&compiled, &trace) {
                for sym in &main_stack {
                    assert!(
                        *sym != contract.query_main
                            && *sym != contract.query_helper
                            && *sym != contract.response,
                        "unsettled symbol {sym} on {word:?}"
                    );
                }
                // the helper may park its own standing query, nothing else
                for sym in &helper_stack {
                    assert!(
                        *sym != contract.query_helper
                            && *sym != contract.response
                            && *sym != contract.marker,
                        "helper holds {sym} on {word:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn every_instruction_has_an_entry_state() {
    for source in [pm_even_source(), pm_anbn_source()] {
        let (machine, compiled) = build(source);
        let labels: HashSet<&str> = machine
            .instructions()
            .iter()
            .map(|i| i.label())
            .collect();
        let mapped: HashSet<&str> = compiled
            .contract
            .entry_states
            .keys()
            .map(String::as_str)
            .collect();
        assert_eq!(labels, mapped);
        let states: HashSet<&str> = compiled.system.components()[main_index(&compiled)]
            .machine()
            .states()
            .map(|s| s.as_str())
            .collect();
        for state in compiled.contract.entry_states.values() {
            assert!(states.contains(state.as_str()), "missing {state}");
        }
    }
}
