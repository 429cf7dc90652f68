//! Small example machines used across the test suites and shipped as files
//! under `fixtures/` at the repository root.

use crate::pda::{AcceptanceMode, Move, Pda, PdaParts};
use crate::symbol::Symbol;

fn build(parts: PdaParts) -> Pda {
    parts.build().expect("fixture is valid")
}

/// Matched a's then b's, the empty word included. Deterministic; after a
/// completed block the bottom is swapped for a dead marker so the machine
/// cannot restart.
pub fn pda_ab() -> Pda {
    build(PdaParts {
        states: vec!["q0".into(), "q1".into(), "q2".into()],
        input_alphabet: vec!["a".into(), "b".into()],
        stack_alphabet: vec!["A".into(), "D".into(), "Z".into()],
        moves: vec![
            Move::new("q0", Some(Symbol::new("a")), "Z", "q1", vec!["A".into(), "Z".into()]),
            Move::new("q1", Some(Symbol::new("a")), "A", "q1", vec!["A".into(), "A".into()]),
            Move::new("q1", Some(Symbol::new("b")), "A", "q2", vec![]),
            Move::new("q2", Some(Symbol::new("b")), "A", "q2", vec![]),
            Move::new("q2", None, "Z", "q0", vec!["D".into()]),
        ],
        initial_state: "q0".into(),
        bottom_symbol: "Z".into(),
        final_states: vec!["q0".into()],
        acceptance_mode: AcceptanceMode::FinalState,
    })
}

/// Matched a's then b's, at least one of each.
pub fn pda_ab_strict() -> Pda {
    build(PdaParts {
        states: vec!["q0".into(), "q1".into(), "q2".into(), "q3".into()],
        input_alphabet: vec!["a".into(), "b".into()],
        stack_alphabet: vec!["A".into(), "Z".into()],
        moves: vec![
            Move::new("q0", Some(Symbol::new("a")), "Z", "q1", vec!["A".into(), "Z".into()]),
            Move::new("q1", Some(Symbol::new("a")), "A", "q1", vec!["A".into(), "A".into()]),
            Move::new("q1", Some(Symbol::new("b")), "A", "q2", vec![]),
            Move::new("q2", Some(Symbol::new("b")), "A", "q2", vec![]),
            Move::new("q2", None, "Z", "q3", vec!["Z".into()]),
        ],
        initial_state: "q0".into(),
        bottom_symbol: "Z".into(),
        final_states: vec!["q3".into()],
        acceptance_mode: AcceptanceMode::FinalState,
    })
}

/// Matched c's then d's, the empty word included.
pub fn pda_cd() -> Pda {
    build(PdaParts {
        states: vec!["p0".into(), "p1".into(), "p2".into()],
        input_alphabet: vec!["c".into(), "d".into()],
        stack_alphabet: vec!["B".into(), "D".into(), "Z".into()],
        moves: vec![
            Move::new("p0", Some(Symbol::new("c")), "Z", "p1", vec!["B".into(), "Z".into()]),
            Move::new("p1", Some(Symbol::new("c")), "B", "p1", vec!["B".into(), "B".into()]),
            Move::new("p1", Some(Symbol::new("d")), "B", "p2", vec![]),
            Move::new("p2", Some(Symbol::new("d")), "B", "p2", vec![]),
            Move::new("p2", None, "Z", "p0", vec!["D".into()]),
        ],
        initial_state: "p0".into(),
        bottom_symbol: "Z".into(),
        final_states: vec!["p0".into()],
        acceptance_mode: AcceptanceMode::FinalState,
    })
}

/// Matched c's then d's, at least one of each.
pub fn pda_cd_strict() -> Pda {
    build(PdaParts {
        states: vec!["p0".into(), "p1".into(), "p2".into(), "p3".into()],
        input_alphabet: vec!["c".into(), "d".into()],
        stack_alphabet: vec!["B".into(), "Z".into()],
        moves: vec![
            Move::new("p0", Some(Symbol::new("c")), "Z", "p1", vec!["B".into(), "Z".into()]),
            Move::new("p1", Some(Symbol::new("c")), "B", "p1", vec!["B".into(), "B".into()]),
            Move::new("p1", Some(Symbol::new("d")), "B", "p2", vec![]),
            Move::new("p2", Some(Symbol::new("d")), "B", "p2", vec![]),
            Move::new("p2", None, "Z", "p3", vec!["Z".into()]),
        ],
        initial_state: "p0".into(),
        bottom_symbol: "Z".into(),
        final_states: vec!["p3".into()],
        acceptance_mode: AcceptanceMode::FinalState,
    })
}

/// Palindromes over {a, b}, with a guessed middle (silent for even length,
/// consuming for odd). Useful as a genuinely nondeterministic machine.
pub fn pda_palindrome() -> Pda {
    let sym = Symbol::new;
    let mut moves = Vec::new();
    for (read, push) in [("a", "A"), ("b", "B")] {
        for top in ["Z", "A", "B"] {
            moves.push(Move::new(
                "s0",
                Some(sym(read)),
                top,
                "s0",
                vec![push.into(), top.into()],
            ));
        }
    }
    for top in ["Z", "A", "B"] {
        moves.push(Move::new("s0", None, top, "s1", vec![top.into()]));
    }
    // odd-length center: consume one symbol while switching to matching
    for read in ["a", "b"] {
        for top in ["Z", "A", "B"] {
            moves.push(Move::new("s0", Some(sym(read)), top, "s1", vec![top.into()]));
        }
    }
    moves.push(Move::new("s1", Some(sym("a")), "A", "s1", vec![]));
    moves.push(Move::new("s1", Some(sym("b")), "B", "s1", vec![]));
    moves.push(Move::new("s1", None, "Z", "s2", vec!["Z".into()]));
    build(PdaParts {
        states: vec!["s0".into(), "s1".into(), "s2".into()],
        input_alphabet: vec!["a".into(), "b".into()],
        stack_alphabet: vec!["A".into(), "B".into(), "Z".into()],
        moves,
        initial_state: "s0".into(),
        bottom_symbol: "Z".into(),
        final_states: vec!["s2".into()],
        acceptance_mode: AcceptanceMode::FinalState,
    })
}

/// Queue program accepting words of even length over {a}.
pub fn pm_even_source() -> &'static str {
    "\
alphabet: a
L0:  TEST empty -> ACC, a -> L1, '#' -> REJ
L1:  TEST empty -> REJ, a -> L0, '#' -> REJ
ACC: ACCEPT
REJ: REJECT
"
}

/// Queue program accepting matched a's then b's (empty word included). The
/// queue is rotated with a blank marker; one symbol of lookahead rides in
/// the control state.
pub fn pm_anbn_source() -> &'static str {
    "\
alphabet: a b
L0:  TEST empty -> ACC, a -> RA, b -> REJ, '#' -> REJ
RA:  ASSIGN '#' -> SC
SC:  TEST empty -> REJ, a -> DA, b -> DB, '#' -> REJ
DA:  TEST empty -> REJ, a -> PAA, b -> PAB, '#' -> REJ
PAA: ASSIGN a -> DA
PAB: ASSIGN a -> DB
DB:  TEST empty -> REJ, a -> PBA, b -> PBB, '#' -> L0
PBA: ASSIGN b -> DA
PBB: ASSIGN b -> DB
ACC: ACCEPT
REJ: REJECT
"
}
