//! JSON descriptions of machines and systems.
//!
//! Descriptions are plain data with no invariants; validation turns them into
//! the checked engine types and reports every problem it finds, not just the
//! first. Unknown JSON fields are rejected so typos fail loudly.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compile::CompiledSystem;
use crate::dpas::{DpasSystem, DpasValidationError};
use crate::pcpa::{
    AcceptanceQuantifier, ComponentParts, PcpaParts, PcpaSystem, SystemValidationError,
};
use crate::pda::{AcceptanceMode, Move, Pda, PdaParts, ValidationError};
use crate::symbol::{StateId, Symbol};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionDescription {
    pub from: String,
    /// Input label; the empty string means the move reads no input.
    #[serde(default)]
    pub input: String,
    pub top: String,
    pub to: String,
    /// Replacement for the popped top, topmost first.
    pub push: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdaDescription {
    pub states: Vec<String>,
    pub input_alphabet: Vec<String>,
    pub stack_alphabet: Vec<String>,
    pub transitions: Vec<TransitionDescription>,
    pub initial_state: String,
    pub bottom: String,
    pub finals: Vec<String>,
    pub acceptance: AcceptanceMode,
}

#[derive(Debug, Error)]
pub enum DescriptionError {
    #[error("malformed JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid description:\n{}", format_validation_errors(.0))]
    Invalid(Vec<ValidationError>),
}

pub fn format_validation_errors(errors: &[ValidationError]) -> String {
    errors
        .iter()
        .map(|e| format!("  - {e}"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn move_from_description(t: &TransitionDescription) -> Move {
    Move {
        from: StateId::new(&t.from),
        input: if t.input.is_empty() {
            None
        } else {
            Some(Symbol::new(&t.input))
        },
        top: Symbol::new(&t.top),
        to: StateId::new(&t.to),
        push: t.push.iter().map(Symbol::new).collect(),
    }
}

fn move_to_description(m: &Move) -> TransitionDescription {
    TransitionDescription {
        from: m.from.as_str().to_owned(),
        input: m
            .input
            .as_ref()
            .map_or_else(String::new, |s| s.as_str().to_owned()),
        top: m.top.as_str().to_owned(),
        to: m.to.as_str().to_owned(),
        push: m.push.iter().map(|s| s.as_str().to_owned()).collect(),
    }
}

pub fn validate_pda(desc: &PdaDescription) -> Result<Pda, Vec<ValidationError>> {
    PdaParts {
        states: desc.states.iter().map(StateId::new).collect(),
        input_alphabet: desc.input_alphabet.iter().map(Symbol::new).collect(),
        stack_alphabet: desc.stack_alphabet.iter().map(Symbol::new).collect(),
        moves: desc.transitions.iter().map(move_from_description).collect(),
        initial_state: StateId::new(&desc.initial_state),
        bottom_symbol: Symbol::new(&desc.bottom),
        final_states: desc.finals.iter().map(StateId::new).collect(),
        acceptance_mode: desc.acceptance,
    }
    .build()
}

pub fn describe_pda(pda: &Pda) -> PdaDescription {
    PdaDescription {
        states: pda.states().map(|s| s.as_str().to_owned()).collect(),
        input_alphabet: pda
            .input_alphabet()
            .map(|s| s.as_str().to_owned())
            .collect(),
        stack_alphabet: pda
            .stack_alphabet()
            .map(|s| s.as_str().to_owned())
            .collect(),
        transitions: pda.moves().iter().map(move_to_description).collect(),
        initial_state: pda.initial_state().as_str().to_owned(),
        bottom: pda.bottom_symbol().as_str().to_owned(),
        finals: pda.final_states().map(|s| s.as_str().to_owned()).collect(),
        acceptance: pda.acceptance_mode(),
    }
}

pub fn pda_from_json(text: &str) -> Result<Pda, DescriptionError> {
    let desc: PdaDescription = serde_json::from_str(text)?;
    validate_pda(&desc).map_err(DescriptionError::Invalid)
}

pub fn pda_to_json(pda: &Pda) -> String {
    let mut out = serde_json::to_string_pretty(&describe_pda(pda)).expect("description serializes");
    out.push('\n');
    out
}

/// One member of a parallel system; alphabets and the acceptance rule live
/// at the system level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDescription {
    pub name: String,
    pub states: Vec<String>,
    pub transitions: Vec<TransitionDescription>,
    pub initial_state: String,
    pub bottom: String,
    pub finals: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDescription {
    pub degree: usize,
    pub input_alphabet: Vec<String>,
    pub stack_alphabet: Vec<String>,
    /// One per component; `query_symbols[i]` addresses component `i`.
    pub query_symbols: Vec<String>,
    pub response_symbol: String,
    #[serde(default)]
    pub acceptance_quantifier: AcceptanceQuantifier,
    pub components: Vec<ComponentDescription>,
    /// Free-form annotation, e.g. the contract written by the translator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contract: Option<serde_json::Value>,
}

pub fn validate_system(desc: &SystemDescription) -> Result<PcpaSystem, Vec<SystemValidationError>> {
    let mut errors = Vec::new();
    if desc.degree != desc.components.len() {
        errors.push(SystemValidationError::DegreeMismatch {
            declared: desc.degree,
            found: desc.components.len(),
        });
    }
    let parts = PcpaParts {
        input_alphabet: desc.input_alphabet.iter().map(Symbol::new).collect(),
        stack_alphabet: desc.stack_alphabet.iter().map(Symbol::new).collect(),
        query_symbols: desc.query_symbols.iter().map(Symbol::new).collect(),
        response_symbol: Symbol::new(&desc.response_symbol),
        quantifier: desc.acceptance_quantifier,
        components: desc
            .components
            .iter()
            .map(|c| ComponentParts {
                name: c.name.clone(),
                states: c.states.iter().map(StateId::new).collect(),
                moves: c.transitions.iter().map(move_from_description).collect(),
                initial_state: StateId::new(&c.initial_state),
                bottom_symbol: Symbol::new(&c.bottom),
                final_states: c.finals.iter().map(StateId::new).collect(),
            })
            .collect(),
    };
    match parts.build() {
        Ok(system) if errors.is_empty() => Ok(system),
        Ok(_) => Err(errors),
        Err(inner) => {
            errors.extend(inner);
            Err(errors)
        }
    }
}

pub fn describe_system(system: &PcpaSystem) -> SystemDescription {
    SystemDescription {
        degree: system.degree(),
        input_alphabet: system
            .input_alphabet()
            .map(|s| s.as_str().to_owned())
            .collect(),
        stack_alphabet: system
            .stack_alphabet()
            .map(|s| s.as_str().to_owned())
            .collect(),
        query_symbols: system
            .query_symbols()
            .iter()
            .map(|s| s.as_str().to_owned())
            .collect(),
        response_symbol: system.response_symbol().as_str().to_owned(),
        acceptance_quantifier: system.quantifier(),
        components: system
            .components()
            .iter()
            .map(|c| {
                let m = c.machine();
                ComponentDescription {
                    name: c.name.clone(),
                    states: m.states().map(|s| s.as_str().to_owned()).collect(),
                    transitions: m.moves().iter().map(move_to_description).collect(),
                    initial_state: m.initial_state().as_str().to_owned(),
                    bottom: m.bottom_symbol().as_str().to_owned(),
                    finals: m.final_states().map(|s| s.as_str().to_owned()).collect(),
                }
            })
            .collect(),
        contract: None,
    }
}

/// Like [`describe_system`], with the translation contract attached.
pub fn describe_compiled(compiled: &CompiledSystem) -> SystemDescription {
    let mut desc = describe_system(&compiled.system);
    desc.contract =
        Some(serde_json::to_value(&compiled.contract).expect("contract serializes"));
    desc
}

pub fn system_from_json(text: &str) -> Result<PcpaSystem, SystemDescriptionError> {
    let desc: SystemDescription = serde_json::from_str(text)?;
    validate_system(&desc).map_err(SystemDescriptionError::Invalid)
}

pub fn system_to_json(desc: &SystemDescription) -> String {
    let mut out = serde_json::to_string_pretty(desc).expect("description serializes");
    out.push('\n');
    out
}

#[derive(Debug, Error)]
pub enum SystemDescriptionError {
    #[error("malformed JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid description:\n{}", format_error_list(.0))]
    Invalid(Vec<SystemValidationError>),
}

fn format_error_list<E: std::fmt::Display>(errors: &[E]) -> String {
    errors
        .iter()
        .map(|e| format!("  - {e}"))
        .collect::<Vec<_>>()
        .join("\n")
}

/// A distributed system is either an explicit list of machines or one
/// machine with a copy count. `uniform: true` insists on the latter shape.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct DpasDescription {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<PdaDescription>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub component: Option<PdaDescription>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub copies: Option<usize>,
    #[serde(default)]
    pub uniform: bool,
    /// Optional declaration of the common acceptance mode, checked against
    /// the components.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub acceptance: Option<AcceptanceMode>,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum DpasDescriptionError {
    #[error("give either `components` or `component` with `copies`, not both")]
    AmbiguousShape,
    #[error("give `components`, or `component` with `copies`")]
    MissingMachines,
    #[error("`component` requires `copies`")]
    MissingCopies,
    #[error("`copies` must be at least 1")]
    ZeroCopies,
    #[error("`uniform: true` requires the `component` and `copies` shape")]
    NotUniform,
    #[error("declared acceptance `{declared}` does not match component {index}")]
    AcceptanceMismatch {
        declared: AcceptanceMode,
        index: usize,
    },
    #[error("component {index}: {error}")]
    InComponent {
        index: usize,
        error: ValidationError,
    },
    #[error(transparent)]
    System(DpasValidationError),
}

pub fn validate_dpas(desc: &DpasDescription) -> Result<DpasSystem, Vec<DpasDescriptionError>> {
    let mut errors = Vec::new();
    let raw: Vec<(usize, &PdaDescription)> = match (&desc.components, &desc.component) {
        (Some(_), Some(_)) => {
            return Err(vec![DpasDescriptionError::AmbiguousShape]);
        }
        (Some(list), None) => {
            if desc.uniform {
                errors.push(DpasDescriptionError::NotUniform);
            }
            if desc.copies.is_some() {
                errors.push(DpasDescriptionError::AmbiguousShape);
            }
            list.iter().enumerate().collect()
        }
        (None, Some(single)) => match desc.copies {
            None => return Err(vec![DpasDescriptionError::MissingCopies]),
            Some(0) => return Err(vec![DpasDescriptionError::ZeroCopies]),
            Some(n) => std::iter::repeat(single).take(n).enumerate().collect(),
        },
        (None, None) => return Err(vec![DpasDescriptionError::MissingMachines]),
    };

    let mut machines = Vec::new();
    for (index, pdesc) in raw {
        if let Some(declared) = desc.acceptance {
            if pdesc.acceptance != declared {
                errors.push(DpasDescriptionError::AcceptanceMismatch { declared, index });
            }
        }
        match validate_pda(pdesc) {
            Ok(m) => machines.push(m),
            Err(inner) => errors.extend(
                inner
                    .into_iter()
                    .map(|error| DpasDescriptionError::InComponent { index, error }),
            ),
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    match DpasSystem::new(machines) {
        Ok(system) => Ok(system),
        Err(e) => Err(vec![DpasDescriptionError::System(e)]),
    }
}

pub fn describe_dpas(system: &DpasSystem) -> DpasDescription {
    DpasDescription {
        components: Some(system.components().iter().map(describe_pda).collect()),
        component: None,
        copies: None,
        uniform: false,
        acceptance: Some(system.acceptance_mode()),
    }
}

#[derive(Debug, Error)]
pub enum DpasJsonError {
    #[error("malformed JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid description:\n{}", format_error_list(.0))]
    Invalid(Vec<DpasDescriptionError>),
}

pub fn dpas_from_json(text: &str) -> Result<DpasSystem, DpasJsonError> {
    let desc: DpasDescription = serde_json::from_str(text)?;
    validate_dpas(&desc).map_err(DpasJsonError::Invalid)
}
