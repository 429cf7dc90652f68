//! Brute-force acceptance oracle shared by integration tests. Enumerates
//! every move sequence up to a depth bound straight off the transition
//! table, with no deduplication and no code shared with the engine's search.

use pdsys_core::pda::AcceptanceMode;
use pdsys_core::{Pda, StateId, Symbol};

pub fn oracle_accepts(machine: &Pda, word: &[Symbol], max_moves: usize) -> bool {
    fn search(
        machine: &Pda,
        word: &[Symbol],
        state: &StateId,
        pos: usize,
        stack: &[Symbol],
        moves_left: usize,
    ) -> bool {
        let done = pos == word.len()
            && match machine.acceptance_mode() {
                AcceptanceMode::FinalState => machine.final_states().any(|f| f == state),
                AcceptanceMode::EmptyStack => stack.is_empty(),
            };
        if done {
            return true;
        }
        if moves_left == 0 {
            return false;
        }
        let Some(top) = stack.first() else {
            return false;
        };
        for m in machine.moves() {
            if &m.from != state || &m.top != top {
                continue;
            }
            let next_pos = match &m.input {
                None => pos,
                Some(read) if pos < word.len() && &word[pos] == read => pos + 1,
                Some(_) => continue,
            };
            let mut next_stack = m.push.clone();
            next_stack.extend_from_slice(&stack[1..]);
            if search(machine, word, &m.to, next_pos, &next_stack, moves_left - 1) {
                return true;
            }
        }
        false
    }

    let stack = vec![machine.bottom_symbol().clone()];
    search(machine, word, machine.initial_state(), 0, &stack, max_moves)
}
