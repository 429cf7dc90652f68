use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};

use pdsys_core::compile::{
    compile_post, verify_compilation, CompilationMode, CompilationOptions, CompiledSystem,
};
use pdsys_core::dpas::{udpas_member_np, DpasSystem, MembershipDecision};
use pdsys_core::json::{
    describe_compiled, describe_pda, dpas_from_json, pda_from_json, pda_to_json, system_to_json,
    validate_system, DpasDescription, SystemDescription,
};
use pdsys_core::pcpa::{AcceptanceQuantifier, PcpaSystem, StepMode, TraceOutcome};
use pdsys_core::post::{parse_post, PostMachine};
use pdsys_core::shuffle::{build_reduction, verify_reduction};
use pdsys_core::symbol::{format_word, word_from_chars, word_from_names, words_up_to};
use pdsys_core::verdict::{Agreement, DifferentialReport};
use pdsys_core::{AcceptanceMode, Budget, Pda, Symbol, Verdict, VerdictKind};

use crate::{
    Cli, Command, ModeArg, PcpaCommand, PdaCommand, PostCommand, QuantifierArg, ReduceCommand,
    StepArg, UdpasCommand, WordArg,
};

/// Accumulates the machine-readable report written with `--json`.
struct Report {
    fields: Map<String, Value>,
}

impl Report {
    fn new(command: &str, cli: &Cli) -> Report {
        let mut fields = Map::new();
        fields.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        fields.insert("command".into(), json!(command));
        fields.insert(
            "configuration".into(),
            json!({
                "max_configurations": cli.max_configs,
                "max_steps": cli.max_steps,
            }),
        );
        Report { fields }
    }

    fn config(&mut self, key: &str, value: Value) {
        self.fields
            .get_mut("configuration")
            .and_then(Value::as_object_mut)
            .expect("configuration object")
            .insert(key.into(), value);
    }

    fn set(&mut self, key: &str, value: Value) {
        self.fields.insert(key.into(), value);
    }

    fn write(&self, path: &Path) -> Result<(), String> {
        let mut text = serde_json::to_string_pretty(&Value::Object(self.fields.clone()))
            .expect("report serializes");
        text.push('\n');
        fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

pub fn dispatch(cli: &Cli) -> Result<u8, String> {
    let budget = Budget::new(cli.max_configs, cli.max_steps).map_err(|e| e.to_string())?;
    let mut report = Report::new(command_name(&cli.command), cli);
    let code = run_command(cli, &budget, &mut report)?;
    report.set("exit_code", json!(code));
    if let Some(path) = &cli.json {
        report.write(path)?;
    }
    Ok(code)
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Pda(PdaCommand::Run { .. }) => "pda run",
        Command::Pda(PdaCommand::CheckDet { .. }) => "pda check-det",
        Command::Pda(PdaCommand::ToEmptyStack { .. }) => "pda to-empty-stack",
        Command::Pcpa(PcpaCommand::Run { .. }) => "pcpa run",
        Command::Pcpa(PcpaCommand::Trace { .. }) => "pcpa trace",
        Command::Post(PostCommand::Run { .. }) => "post run",
        Command::Post(PostCommand::Compile { .. }) => "post compile",
        Command::Post(PostCommand::Verify { .. }) => "post verify",
        Command::Udpas(UdpasCommand::Run { .. }) => "udpas run",
        Command::Udpas(UdpasCommand::MemberNp { .. }) => "udpas member-np",
        Command::Reduce(ReduceCommand::Build { .. }) => "reduce build",
        Command::Reduce(ReduceCommand::Transform { .. }) => "reduce transform",
        Command::Reduce(ReduceCommand::Verify { .. }) => "reduce verify",
    }
}

fn run_command(cli: &Cli, budget: &Budget, report: &mut Report) -> Result<u8, String> {
    match &cli.command {
        Command::Pda(cmd) => match cmd {
            PdaCommand::Run {
                machine,
                word,
                witness,
            } => pda_run(machine, word, *witness, budget, report),
            PdaCommand::CheckDet { machine } => pda_check_det(machine, report),
            PdaCommand::ToEmptyStack { machine, out } => {
                pda_to_empty_stack(machine, out.as_deref(), report)
            }
        },
        Command::Pcpa(cmd) => match cmd {
            PcpaCommand::Run {
                system,
                word,
                quantifier,
                step_semantics,
            } => pcpa_run(system, word, *quantifier, *step_semantics, budget, report),
            PcpaCommand::Trace {
                system,
                word,
                quantifier,
                step_semantics,
            } => pcpa_trace(system, word, *quantifier, *step_semantics, cli.max_steps, report),
        },
        Command::Post(cmd) => match cmd {
            PostCommand::Run { program, word } => {
                post_run(program, word, cli.max_steps, report)
            }
            PostCommand::Compile {
                program,
                mode,
                prefix,
                out,
            } => post_compile(program, *mode, prefix, out.as_deref(), report),
            PostCommand::Verify {
                program,
                mode,
                max_len,
                allow_inconclusive,
            } => post_verify(program, *mode, *max_len, *allow_inconclusive, budget, report),
        },
        Command::Udpas(cmd) => match cmd {
            UdpasCommand::Run { system, word } => udpas_run(system, word, budget, report),
            UdpasCommand::MemberNp {
                component,
                copies,
                word,
            } => udpas_member(component, *copies as usize, word, budget, report),
        },
        Command::Reduce(cmd) => match cmd {
            ReduceCommand::Build { first, second, out } => {
                reduce_build(first, second, out.as_deref(), report)
            }
            ReduceCommand::Transform { word } => reduce_transform(word, report),
            ReduceCommand::Verify {
                first,
                second,
                max_len,
                allow_inconclusive,
            } => reduce_verify(first, second, *max_len, *allow_inconclusive, budget, report),
        },
    }
}

fn read_file(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_output(out: Option<&Path>, text: &str, report: &mut Report) -> Result<(), String> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))?;
            report.set("written_to", json!(path.display().to_string()));
            println!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn load_pda(path: &Path) -> Result<Pda, String> {
    pda_from_json(&read_file(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_post(path: &Path) -> Result<PostMachine, String> {
    parse_post(&read_file(path)?).map_err(|errors| {
        let lines: Vec<String> = errors.iter().map(|e| format!("  - {e}")).collect();
        format!("{}: invalid program:\n{}", path.display(), lines.join("\n"))
    })
}

fn load_system(path: &Path, quantifier: Option<QuantifierArg>) -> Result<PcpaSystem, String> {
    let text = read_file(path)?;
    let mut desc: SystemDescription = serde_json::from_str(&text)
        .map_err(|e| format!("{}: malformed JSON: {e}", path.display()))?;
    if let Some(q) = quantifier {
        desc.acceptance_quantifier = match q {
            QuantifierArg::All => AcceptanceQuantifier::All,
            QuantifierArg::Some => AcceptanceQuantifier::Some,
        };
    }
    validate_system(&desc).map_err(|errors| {
        let lines: Vec<String> = errors.iter().map(|e| format!("  - {e}")).collect();
        format!("{}: invalid description:\n{}", path.display(), lines.join("\n"))
    })
}

fn load_dpas(path: &Path) -> Result<DpasSystem, String> {
    dpas_from_json(&read_file(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_word(arg: &WordArg) -> Vec<Symbol> {
    if arg.symbols {
        word_from_names(arg.word.split_whitespace())
    } else {
        word_from_chars(&arg.word)
    }
}

fn record_word(report: &mut Report, arg: &WordArg, word: &[Symbol]) {
    report.config("word", json!(format_word(word)));
    report.config("symbols", json!(arg.symbols));
}

fn step_mode(arg: StepArg) -> StepMode {
    match arg {
        StepArg::Strict => StepMode::Strict,
        StepArg::Relaxed => StepMode::Relaxed,
    }
}

fn compilation_mode(arg: ModeArg) -> CompilationMode {
    match arg {
        ModeArg::Endmarker => CompilationMode::Endmarker,
        ModeArg::Faithful => CompilationMode::Faithful,
    }
}

fn mode_name(mode: ModeArg) -> &'static str {
    match mode {
        ModeArg::Endmarker => "endmarker",
        ModeArg::Faithful => "faithful",
    }
}

fn verdict_code(kind: VerdictKind) -> u8 {
    match kind {
        VerdictKind::Accepted => 0,
        VerdictKind::Rejected => 1,
        VerdictKind::BudgetExhausted => 2,
    }
}

fn report_verdict<W>(report: &mut Report, verdict: &Verdict<W>) {
    report.set("verdict", json!(verdict.kind.as_str()));
    report.set(
        "stats",
        json!({
            "configurations": verdict.stats.configurations,
            "steps": verdict.stats.steps,
        }),
    );
}

fn print_verdict<W>(verdict: &Verdict<W>) {
    println!(
        "{} ({} configurations, {} steps)",
        verdict.kind.as_str(),
        verdict.stats.configurations,
        verdict.stats.steps
    );
}

fn pda_run(
    machine_path: &Path,
    word_arg: &WordArg,
    witness: bool,
    budget: &Budget,
    report: &mut Report,
) -> Result<u8, String> {
    report.config("machine", json!(machine_path.display().to_string()));
    let machine = load_pda(machine_path)?;
    let word = parse_word(word_arg);
    record_word(report, word_arg, &word);
    let verdict = machine.accepts(&word, budget).map_err(|e| e.to_string())?;
    print_verdict(&verdict);
    report_verdict(report, &verdict);
    if let Some(moves) = &verdict.witness {
        report.set(
            "witness",
            json!(moves.iter().map(|m| m.to_string()).collect::<Vec<_>>()),
        );
        if witness {
            for mv in moves {
                println!("  {mv}");
            }
        }
    }
    Ok(verdict_code(verdict.kind))
}

fn pda_check_det(machine_path: &Path, report: &mut Report) -> Result<u8, String> {
    report.config("machine", json!(machine_path.display().to_string()));
    let machine = load_pda(machine_path)?;
    match machine.check_determinism() {
        Ok(()) => {
            println!("deterministic");
            report.set("deterministic", json!(true));
            Ok(0)
        }
        Err(conflict) => {
            println!("non-deterministic: {conflict}");
            report.set("deterministic", json!(false));
            report.set(
                "conflict",
                json!({
                    "first": conflict.first.to_string(),
                    "second": conflict.second.to_string(),
                }),
            );
            Ok(1)
        }
    }
}

fn pda_to_empty_stack(
    machine_path: &Path,
    out: Option<&Path>,
    report: &mut Report,
) -> Result<u8, String> {
    report.config("machine", json!(machine_path.display().to_string()));
    let machine = load_pda(machine_path)?;
    let converted = machine.to_empty_stack();
    report.set(
        "machine",
        serde_json::to_value(describe_pda(&converted)).expect("description serializes"),
    );
    write_output(out, &pda_to_json(&converted), report)?;
    Ok(0)
}

fn pcpa_run(
    system_path: &Path,
    word_arg: &WordArg,
    quantifier: Option<QuantifierArg>,
    step_semantics: StepArg,
    budget: &Budget,
    report: &mut Report,
) -> Result<u8, String> {
    report.config("system", json!(system_path.display().to_string()));
    report.config(
        "quantifier",
        match quantifier {
            Some(QuantifierArg::All) => json!("all"),
            Some(QuantifierArg::Some) => json!("some"),
            None => Value::Null,
        },
    );
    report.config(
        "step_semantics",
        json!(match step_semantics {
            StepArg::Strict => "strict",
            StepArg::Relaxed => "relaxed",
        }),
    );
    let system = load_system(system_path, quantifier)?;
    let word = parse_word(word_arg);
    record_word(report, word_arg, &word);
    let verdict = system
        .accepts(&word, step_mode(step_semantics), budget)
        .map_err(|e| e.to_string())?;
    print_verdict(&verdict);
    report_verdict(report, &verdict);
    Ok(verdict_code(verdict.kind))
}

fn pcpa_trace(
    system_path: &Path,
    word_arg: &WordArg,
    quantifier: Option<QuantifierArg>,
    step_semantics: StepArg,
    max_steps: u64,
    report: &mut Report,
) -> Result<u8, String> {
    report.config("system", json!(system_path.display().to_string()));
    let system = load_system(system_path, quantifier)?;
    let word = parse_word(word_arg);
    record_word(report, word_arg, &word);
    let result = system
        .run_trace(&word, step_mode(step_semantics), max_steps)
        .map_err(|e| e.to_string())?;
    println!("   0  {}", result.initial);
    let mut steps_json = Vec::with_capacity(result.steps.len());
    for (i, step) in result.steps.iter().enumerate() {
        println!("{:>4}  {}", i + 1, step.action);
        println!("      {}", step.config);
        steps_json.push(json!({
            "action": step.action.to_string(),
            "config": step.config.to_string(),
        }));
    }
    report.set("initial", json!(result.initial.to_string()));
    report.set("steps", Value::Array(steps_json));
    let (outcome, code) = match result.outcome {
        TraceOutcome::Accepted => {
            println!("accepted after {} steps", result.steps.len());
            ("accepted", 0)
        }
        TraceOutcome::Stuck => {
            println!("stuck: no applicable step");
            ("stuck", 1)
        }
        TraceOutcome::StepLimit => {
            println!("step limit reached");
            ("step-limit", 2)
        }
        TraceOutcome::Nondeterministic {
            at_step,
            successor_count,
        } => {
            println!("non-deterministic at step {at_step}: {successor_count} possible steps");
            report.set("at_step", json!(at_step));
            report.set("successor_count", json!(successor_count));
            ("non-deterministic", 1)
        }
    };
    report.set("outcome", json!(outcome));
    Ok(code)
}

fn post_run(
    program_path: &Path,
    word_arg: &WordArg,
    max_steps: u64,
    report: &mut Report,
) -> Result<u8, String> {
    report.config("program", json!(program_path.display().to_string()));
    let machine = load_post(program_path)?;
    let word = parse_word(word_arg);
    record_word(report, word_arg, &word);
    let verdict = machine.run(&word, max_steps).map_err(|e| e.to_string())?;
    print_verdict(&verdict);
    report_verdict(report, &verdict);
    Ok(verdict_code(verdict.kind))
}

fn post_compile(
    program_path: &Path,
    mode: ModeArg,
    prefix: &str,
    out: Option<&Path>,
    report: &mut Report,
) -> Result<u8, String> {
    report.config("program", json!(program_path.display().to_string()));
    report.config("mode", json!(mode_name(mode)));
    report.config("prefix", json!(prefix));
    let machine = load_post(program_path)?;
    let options = CompilationOptions {
        mode: compilation_mode(mode),
        symbol_prefix: prefix.to_string(),
    };
    let compiled = compile_post(&machine, &options);
    let desc = describe_compiled(&compiled);
    report.set(
        "system",
        serde_json::to_value(&desc).expect("description serializes"),
    );
    write_output(out, &system_to_json(&desc), report)?;
    Ok(0)
}

fn differential_outcome(
    diff: &DifferentialReport,
    allow_inconclusive: bool,
    left_name: &str,
    right_name: &str,
    report: &mut Report,
) -> u8 {
    let mut entries_json = Vec::with_capacity(diff.entries.len());
    for entry in &diff.entries {
        entries_json.push(json!({
            "word": format_word(&entry.word),
            left_name: entry.left.as_str(),
            right_name: entry.right.as_str(),
            "agreement": match entry.agreement {
                Agreement::Match => "match",
                Agreement::Mismatch => "mismatch",
                Agreement::Inconclusive => "inconclusive",
            },
        }));
        match entry.agreement {
            Agreement::Mismatch => println!(
                "mismatch on {}: {} {}, {} {}",
                format_word(&entry.word),
                left_name,
                entry.left.as_str(),
                right_name,
                entry.right.as_str()
            ),
            Agreement::Inconclusive => {
                println!("inconclusive on {}", format_word(&entry.word))
            }
            Agreement::Match => {}
        }
    }
    report.set("entries", Value::Array(entries_json));
    report.set("matches", json!(diff.matches()));
    report.set("mismatches", json!(diff.mismatches()));
    report.set("inconclusive", json!(diff.inconclusive()));
    println!("{}/{} agree", diff.matches(), diff.entries.len());
    if diff.mismatches() > 0 {
        1
    } else if diff.inconclusive() > 0 {
        if allow_inconclusive {
            eprintln!(
                "warning: {} words inconclusive within budget",
                diff.inconclusive()
            );
            0
        } else {
            2
        }
    } else {
        0
    }
}

fn post_verify(
    program_path: &Path,
    mode: ModeArg,
    max_len: usize,
    allow_inconclusive: bool,
    budget: &Budget,
    report: &mut Report,
) -> Result<u8, String> {
    report.config("program", json!(program_path.display().to_string()));
    report.config("mode", json!(mode_name(mode)));
    report.config("max_len", json!(max_len));
    report.config("allow_inconclusive", json!(allow_inconclusive));
    let machine = load_post(program_path)?;
    let options = CompilationOptions {
        mode: compilation_mode(mode),
        symbol_prefix: String::new(),
    };
    let compiled: CompiledSystem = compile_post(&machine, &options);
    let alphabet: Vec<Symbol> = machine.alphabet().cloned().collect();
    let words = words_up_to(&alphabet, max_len);
    let diff = verify_compilation(&machine, &compiled, &words, StepMode::Strict, budget)
        .map_err(|e| e.to_string())?;
    Ok(differential_outcome(
        &diff,
        allow_inconclusive,
        "interpreter",
        "system",
        report,
    ))
}

fn udpas_run(
    system_path: &Path,
    word_arg: &WordArg,
    budget: &Budget,
    report: &mut Report,
) -> Result<u8, String> {
    report.config("system", json!(system_path.display().to_string()));
    let system = load_dpas(system_path)?;
    let word = parse_word(word_arg);
    record_word(report, word_arg, &word);
    let verdict = system.accepts(&word, budget).map_err(|e| e.to_string())?;
    print_verdict(&verdict);
    report_verdict(report, &verdict);
    Ok(verdict_code(verdict.kind))
}

fn udpas_member(
    component_path: &Path,
    copies: usize,
    word_arg: &WordArg,
    budget: &Budget,
    report: &mut Report,
) -> Result<u8, String> {
    report.config("component", json!(component_path.display().to_string()));
    report.config("copies", json!(copies));
    let machine = load_pda(component_path)?;
    let word = parse_word(word_arg);
    record_word(report, word_arg, &word);
    let decision =
        udpas_member_np(&machine, copies, &word, budget).map_err(|e| e.to_string())?;
    match decision {
        MembershipDecision::Member { assignment } => {
            println!("member");
            let one_based: Vec<usize> = assignment.iter().map(|c| c + 1).collect();
            if !one_based.is_empty() {
                let rendered: Vec<String> = one_based.iter().map(|c| c.to_string()).collect();
                println!("  copy per position: {}", rendered.join(" "));
            }
            report.set("decision", json!("member"));
            report.set("assignment", json!(one_based));
            Ok(0)
        }
        MembershipDecision::NonMember => {
            println!("non-member");
            report.set("decision", json!("non-member"));
            Ok(1)
        }
        MembershipDecision::Inconclusive => {
            println!("inconclusive");
            report.set("decision", json!("inconclusive"));
            Ok(2)
        }
    }
}

fn reduce_build(
    first_path: &Path,
    second_path: &Path,
    out: Option<&Path>,
    report: &mut Report,
) -> Result<u8, String> {
    report.config("first", json!(first_path.display().to_string()));
    report.config("second", json!(second_path.display().to_string()));
    let first = load_pda(first_path)?;
    let second = load_pda(second_path)?;
    let bundle = build_reduction(&first, &second).map_err(|e| e.to_string())?;
    let system = DpasDescription {
        components: None,
        component: Some(describe_pda(&bundle.combined)),
        copies: Some(2),
        uniform: true,
        acceptance: Some(AcceptanceMode::EmptyStack),
    };
    let value = json!({
        "separator": bundle.separator.as_str(),
        "role_marker": bundle.role_marker.as_str(),
        "first": serde_json::to_value(describe_pda(&bundle.source_first)).expect("serializes"),
        "second": serde_json::to_value(describe_pda(&bundle.source_second)).expect("serializes"),
        "combined": serde_json::to_value(describe_pda(&bundle.combined)).expect("serializes"),
        "system": serde_json::to_value(&system).expect("serializes"),
    });
    report.set("bundle", value.clone());
    let mut text = serde_json::to_string_pretty(&value).expect("serializes");
    text.push('\n');
    write_output(out, &text, report)?;
    Ok(0)
}

fn reduce_transform(word_arg: &WordArg, report: &mut Report) -> Result<u8, String> {
    let word = parse_word(word_arg);
    record_word(report, word_arg, &word);
    let separator = Symbol::new("#");
    let role_marker = Symbol::new("$");
    for sym in &word {
        if *sym == separator || *sym == role_marker {
            return Err(format!("word may not contain the reserved symbol `{sym}`"));
        }
    }
    let mut transformed = vec![separator.clone(), role_marker];
    for sym in &word {
        transformed.push(separator.clone());
        transformed.push(sym.clone());
    }
    let rendered = format_word(&transformed);
    println!("{rendered}");
    report.set("transformed", json!(rendered));
    Ok(0)
}

fn reduce_verify(
    first_path: &Path,
    second_path: &Path,
    max_len: usize,
    allow_inconclusive: bool,
    budget: &Budget,
    report: &mut Report,
) -> Result<u8, String> {
    report.config("first", json!(first_path.display().to_string()));
    report.config("second", json!(second_path.display().to_string()));
    report.config("max_len", json!(max_len));
    report.config("allow_inconclusive", json!(allow_inconclusive));
    let first = load_pda(first_path)?;
    let second = load_pda(second_path)?;
    let bundle = build_reduction(&first, &second).map_err(|e| e.to_string())?;
    let alphabet: std::collections::BTreeSet<Symbol> = first
        .input_alphabet()
        .chain(second.input_alphabet())
        .cloned()
        .collect();
    let alphabet: Vec<Symbol> = alphabet.into_iter().collect();
    let words = words_up_to(&alphabet, max_len);
    let diff = verify_reduction(&bundle, &words, budget).map_err(|e| e.to_string())?;
    Ok(differential_outcome(
        &diff,
        allow_inconclusive,
        "system",
        "membership",
        report,
    ))
}
