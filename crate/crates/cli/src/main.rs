//! Command-line front end: parse and pretty-print models, simulate, build
//! and export the induced state machine, run the unwinding-condition and
//! rely-guarantee checkers, the bounded security oracles, and the
//! compositional certification pipeline.
//!
//! Exit codes: 0 all checks hold, 1 a check fails (witness in the report),
//! 2 input error, 3 resource cap exhausted.

use clap::{Parser, Subcommand, ValueEnum};
use picore::arinc::{build_arinc_model, ArincParams};
use picore::eventucs::{certify, check_lre, check_sce, GammaMap};
use picore::ifs::{
    check_lr, check_oc, check_sc, oracle_noninfluence, oracle_noninterference_r,
    oracle_nonleakage, sequence_count, PolicyCtx,
};
use picore::machine::{build_machine, Machine};
use picore::model::{state_universe, Model, ParSys};
use picore::rg::{check_outline, model_outline, semantic_validity, RgCond};
use picore::semantics::{enumerate_computations, Stepper};
use picore::syntax::{model_digest, parse_model, pretty_print, SourceFile};
use picore::verdict::{RunReport, Verdict};
use picore::Caps;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "picore", version, about = "Checkers for event-based concurrent system models")]
struct Cli {
    /// Emit the structured JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for parallelizable checks (0 = rayon default).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Cap on the declared state universe.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    max_universe: u128,
    /// Cap on explored configurations.
    #[arg(long, global = true, default_value_t = 200_000)]
    max_configs: usize,
    /// Cap on enumerated computations.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    max_comps: usize,
    /// Cap on enumerated action sequences in the bounded oracles.
    #[arg(long, global = true, default_value_t = 5_000_000)]
    max_seqs: usize,
    /// Atomic-await fuel; default is 10 times the universe size.
    #[arg(long, global = true)]
    fuel: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Prop {
    Noninfluence,
    Nonleakage,
    #[value(name = "noninterference-r")]
    NoninterferenceR,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a model; print its canonical form.
    Parse { file: PathBuf },
    /// Walk one closed computation and print the trace.
    Simulate {
        file: PathBuf,
        #[arg(long, default_value_t = 20)]
        max_len: usize,
        /// Enumerate all computations instead of the least trace.
        #[arg(long)]
        all: bool,
    },
    /// Build the induced state machine; print a summary or the graph dump.
    Machine {
        file: PathBuf,
        #[arg(long)]
        emit_graph: bool,
    },
    /// Check the three small-step unwinding conditions.
    CheckUcs { file: PathBuf },
    /// Check the event-level unwinding conditions over the annotations.
    CheckEventUcs { file: PathBuf },
    /// Check the rely-guarantee proof outline; optionally cross-check with
    /// the bounded semantic oracle.
    CheckRg {
        file: PathBuf,
        #[arg(long)]
        semantic: bool,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
    /// Run one bounded security oracle.
    CheckIfs {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, value_enum)]
        prop: Prop,
    },
    /// Run the full compositional certification pipeline.
    Certify {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Generate and certify the built-in separation-kernel case study.
    Arinc {
        #[arg(long, default_value_t = 2)]
        cores: usize,
        /// Deployment, e.g. "P1@c0;P2@c1" (cores comma-separated).
        #[arg(long)]
        partitions: Option<String>,
        /// Channels, e.g. "ch1:P1->P2;ch2:P2->P1" (dests comma-separated).
        #[arg(long)]
        channels: Option<String>,
        /// Writable message values.
        #[arg(long, default_value_t = 1)]
        messages: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Print the generated model instead of certifying it.
        #[arg(long)]
        emit_model: bool,
    },
}

enum Outcome {
    AllHold,
    CheckFailed,
    InputError(String),
    ResourceCap(String),
}

struct Reporter {
    json: bool,
    report: RunReport,
    start: Instant,
}

impl Reporter {
    fn new(json: bool, subcommand: &str) -> Reporter {
        Reporter {
            json,
            report: RunReport {
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                model_digest: String::new(),
                subcommand: subcommand.to_string(),
                parameters: BTreeMap::new(),
                verdicts: vec![],
                wall_ms: 0,
            },
            start: Instant::now(),
        }
    }

    fn param(&mut self, k: &str, v: impl ToString) {
        self.report.parameters.insert(k.into(), v.to_string());
    }

    fn verdict(&mut self, v: Verdict) {
        if !self.json {
            println!("{v}");
        }
        self.report.verdicts.push(v);
    }

    fn finish(mut self) -> Outcome {
        self.report.wall_ms = self.start.elapsed().as_millis();
        let ok = self.report.verdicts.iter().all(|v| v.holds);
        if self.json {
            println!(
                "{}",
                serde_json::to_string_pretty(&self.report).expect("serialize")
            );
        }
        if ok {
            Outcome::AllHold
        } else {
            Outcome::CheckFailed
        }
    }
}

fn caps_of(cli: &Cli) -> Caps {
    Caps {
        max_universe: cli.max_universe,
        max_configs: cli.max_configs,
        max_computations: cli.max_comps,
        await_fuel: cli.fuel,
        max_sequences: cli.max_seqs,
    }
}

fn load_model(path: &PathBuf) -> Result<Model, Outcome> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Outcome::InputError(format!("cannot read {}: {e}", path.display())))?;
    let src = SourceFile::new(text, path.display().to_string());
    parse_model(&src).map_err(|diags| {
        let mut msg = String::new();
        for d in &diags {
            msg.push_str(&format!("{d}\n"));
        }
        Outcome::InputError(msg)
    })
}

/// Build the machine, consulting the digest-keyed cache directory when the
/// cache environment variable is set.
fn machine_cached(model: &Model, caps: &Caps) -> Result<Machine, Outcome> {
    let digest = model_digest(model);
    let cache_path = std::env::var_os("PICORE_CACHE_DIR").map(|dir| {
        let mut p = PathBuf::from(dir);
        p.push(format!("{digest}.machine.json"));
        p
    });
    if let Some(path) = &cache_path {
        if let Ok(text) = std::fs::read_to_string(path) {
            if let Ok(mut mach) = serde_json::from_str::<Machine>(&text) {
                if mach.digest == digest {
                    mach.reindex();
                    return Ok(mach);
                }
            }
            eprintln!("note: ignoring stale machine cache at {}", path.display());
        }
    }
    let mach = build_machine(model, caps).map_err(|e| {
        if e.is_resource_cap() {
            Outcome::ResourceCap(e.to_string())
        } else {
            Outcome::InputError(e.to_string())
        }
    })?;
    if let Some(path) = &cache_path {
        if let Some(dir) = path.parent() {
            let _ = std::fs::create_dir_all(dir);
        }
        if let Ok(text) = serde_json::to_string(&mach) {
            let _ = std::fs::write(path, text);
        }
    }
    Ok(mach)
}

fn policy_ctx(model: &Model, caps: &Caps) -> Result<PolicyCtx, Outcome> {
    PolicyCtx::build(model, caps).map_err(|e| match e {
        picore::ifs::PolicyError::Eval(picore::model::EvalError::UniverseTooLarge { .. }) => {
            Outcome::ResourceCap(e.to_string())
        }
        other => Outcome::InputError(other.to_string()),
    })
}

fn state_diff(model: &Model, prev: &picore::model::State, next: &picore::model::State) -> String {
    let mut parts = Vec::new();
    for (i, v) in model.vars.iter().enumerate() {
        if prev.0[i] != next.0[i] {
            parts.push(format!("{}: {} -> {}", v.name, prev.0[i], next.0[i]));
        }
    }
    if parts.is_empty() {
        "(unchanged)".to_string()
    } else {
        parts.join(", ")
    }
}

fn parse_partitions(s: &str) -> Result<Vec<(String, std::collections::BTreeSet<usize>)>, String> {
    let mut out = Vec::new();
    for part in s.split(';').filter(|p| !p.is_empty()) {
        let (name, cores) = part
            .split_once('@')
            .ok_or_else(|| format!("bad partition spec '{part}', expected NAME@c0[,c1...]"))?;
        let mut set = std::collections::BTreeSet::new();
        for c in cores.split(',') {
            let idx: usize = c
                .trim()
                .trim_start_matches('c')
                .parse()
                .map_err(|_| format!("bad core '{c}' in partition spec"))?;
            set.insert(idx);
        }
        out.push((name.trim().to_string(), set));
    }
    Ok(out)
}

fn parse_channels(
    s: &str,
) -> Result<Vec<(String, String, std::collections::BTreeSet<String>)>, String> {
    let mut out = Vec::new();
    for part in s.split(';').filter(|p| !p.is_empty()) {
        let (name, rest) = part
            .split_once(':')
            .ok_or_else(|| format!("bad channel spec '{part}', expected NAME:SRC->DST[,DST...]"))?;
        let (src, dests) = rest
            .split_once("->")
            .ok_or_else(|| format!("bad channel spec '{part}', expected NAME:SRC->DST[,DST...]"))?;
        let dset: std::collections::BTreeSet<String> =
            dests.split(',').map(|d| d.trim().to_string()).collect();
        out.push((name.trim().to_string(), src.trim().to_string(), dset));
    }
    Ok(out)
}

fn run(cli: Cli) -> Outcome {
    let caps = caps_of(&cli);
    match &cli.command {
        Command::Parse { file } => {
            let model = match load_model(file) {
                Ok(m) => m,
                Err(o) => return o,
            };
            print!("{}", pretty_print(&model));
            Outcome::AllHold
        }
        Command::Simulate { file, max_len, all } => {
            let model = match load_model(file) {
                Ok(m) => m,
                Err(o) => return o,
            };
            let universe = match state_universe(&model, caps.max_universe) {
                Ok(u) => Arc::new(u),
                Err(e) => return Outcome::ResourceCap(e.to_string()),
            };
            let stepper =
                Stepper::new(&model, Arc::clone(&universe), caps.fuel_for(universe.len()));
            let s0 = model.initial_state().expect("validated");
            let x0 = picore::model::EventCtx::bottom(model.cores.len());
            if *all {
                let ps = ParSys(model.systems.clone());
                match enumerate_computations(
                    &stepper,
                    &ps,
                    &s0,
                    &x0,
                    *max_len,
                    caps.max_computations,
                ) {
                    Err(e) => return Outcome::ResourceCap(e.to_string()),
                    Ok(comps) => {
                        println!("{} computations of length <= {max_len}", comps.len());
                        for (i, c) in comps.iter().enumerate() {
                            println!("computation {i}:");
                            println!("0 | init | {}", model.show_state(&c.configs[0].state));
                            for (j, l) in c.steps.iter().enumerate() {
                                println!(
                                    "{} | {} | {}",
                                    j + 1,
                                    l.display(&model),
                                    state_diff(&model, &c.configs[j].state, &c.configs[j + 1].state)
                                );
                            }
                        }
                    }
                }
            } else {
                let mut cfg = model.initial_config().expect("validated");
                println!("0 | init | {}", model.show_state(&cfg.state));
                for i in 1..=*max_len {
                    let succs = match stepper.step_config(&cfg) {
                        Ok(s) => s,
                        Err(e) => return Outcome::InputError(e.to_string()),
                    };
                    let Some((label, next)) = succs.into_iter().next() else {
                        println!("{i} | blocked |");
                        break;
                    };
                    println!(
                        "{i} | {} | {}",
                        label.display(&model),
                        state_diff(&model, &cfg.state, &next.state)
                    );
                    cfg = next;
                }
            }
            Outcome::AllHold
        }
        Command::Machine { file, emit_graph } => {
            let model = match load_model(file) {
                Ok(m) => m,
                Err(o) => return o,
            };
            let mach = match machine_cached(&model, &caps) {
                Ok(m) => m,
                Err(o) => return o,
            };
            if *emit_graph {
                print!("{}", mach.emit_graph(&model));
            } else {
                let edges: usize = mach.step.iter().map(|s| s.len()).sum();
                println!(
                    "machine {}: {} configurations, {} actions, {} edges",
                    mach.digest,
                    mach.configs.len(),
                    mach.actions.len(),
                    edges
                );
            }
            Outcome::AllHold
        }
        Command::CheckUcs { file } => {
            let model = match load_model(file) {
                Ok(m) => m,
                Err(o) => return o,
            };
            let mut rep = Reporter::new(cli.json, "check-ucs");
            rep.report.model_digest = model_digest(&model);
            let mach = match machine_cached(&model, &caps) {
                Ok(m) => m,
                Err(o) => return o,
            };
            let policy = match policy_ctx(&model, &caps) {
                Ok(p) => p,
                Err(o) => return o,
            };
            rep.verdict(check_oc(&mach, &policy));
            rep.verdict(check_lr(&mach, &policy, &model));
            rep.verdict(check_sc(&mach, &policy, &model));
            rep.finish()
        }
        Command::CheckEventUcs { file } => {
            let model = match load_model(file) {
                Ok(m) => m,
                Err(o) => return o,
            };
            let mut rep = Reporter::new(cli.json, "check-event-ucs");
            rep.report.model_digest = model_digest(&model);
            let policy = match policy_ctx(&model, &caps) {
                Ok(p) => p,
                Err(o) => return o,
            };
            let universe = Arc::clone(&policy.universe);
            let gamma = match GammaMap::from_model(&model, &universe) {
                Ok(g) => g,
                Err(e) => return Outcome::InputError(e.to_string()),
            };
            rep.verdict(check_lre(&model, &policy, &gamma));
            rep.verdict(check_sce(&model, &policy, &gamma));
            rep.finish()
        }
        Command::CheckRg {
            file,
            semantic,
            max_len,
        } => {
            let model = match load_model(file) {
                Ok(m) => m,
                Err(o) => return o,
            };
            let mut rep = Reporter::new(cli.json, "check-rg");
            rep.report.model_digest = model_digest(&model);
            rep.param("semantic", semantic);
            rep.param("max_len", max_len);
            let universe = match state_universe(&model, caps.max_universe) {
                Ok(u) => Arc::new(u),
                Err(e) => return Outcome::ResourceCap(e.to_string()),
            };
            let s0 = model.initial_state().expect("validated");
            let s0_id = universe.id_of(&s0).expect("initial state");
            let top = RgCond::top_from(&universe, s0_id);
            let outline = match model_outline(&model, &universe, top.clone()) {
                Ok(o) => o,
                Err(e) => return Outcome::InputError(e.to_string()),
            };
            let fuel = caps.fuel_for(universe.len());
            match check_outline(&model, &universe, &outline, fuel) {
                Ok(v) => rep.verdict(v),
                Err(e) => return Outcome::InputError(e.to_string()),
            }
            if *semantic {
                let spec = picore::model::Spec::Par(ParSys(model.systems.clone()));
                match semantic_validity(
                    &model,
                    &universe,
                    &spec,
                    &top,
                    *max_len,
                    caps.max_computations,
                    fuel,
                ) {
                    Ok(v) => rep.verdict(v),
                    Err(picore::rg::SemanticError::Explosion { cap }) => {
                        return Outcome::ResourceCap(format!("semantic enumeration cap {cap}"))
                    }
                    Err(e) => return Outcome::InputError(e.to_string()),
                }
            }
            rep.finish()
        }
        Command::CheckIfs { file, k, prop } => {
            let model = match load_model(file) {
                Ok(m) => m,
                Err(o) => return o,
            };
            let mut rep = Reporter::new(cli.json, "check-ifs");
            rep.report.model_digest = model_digest(&model);
            rep.param("k", k);
            let mach = match machine_cached(&model, &caps) {
                Ok(m) => m,
                Err(o) => return o,
            };
            let policy = match policy_ctx(&model, &caps) {
                Ok(p) => p,
                Err(o) => return o,
            };
            eprintln!(
                "estimate: {} configurations, {} actions, {} sequences at bound {k}",
                mach.configs.len(),
                mach.actions.len(),
                sequence_count(mach.actions.len(), *k)
            );
            let result = match prop {
                Prop::Noninfluence => {
                    oracle_noninfluence(&mach, &policy, &model, *k, caps.max_sequences)
                }
                Prop::Nonleakage => {
                    oracle_nonleakage(&mach, &policy, &model, *k, caps.max_sequences)
                }
                Prop::NoninterferenceR => {
                    oracle_noninterference_r(&mach, &policy, &model, *k, caps.max_sequences)
                }
            };
            match result {
                Ok(v) => rep.verdict(v),
                Err(e) => return Outcome::ResourceCap(e.to_string()),
            }
            rep.finish()
        }
        Command::Certify { file, k } => {
            let model = match load_model(file) {
                Ok(m) => m,
                Err(o) => return o,
            };
            certify_and_report(&model, &caps, *k, cli.json)
        }
        Command::Arinc {
            cores,
            partitions,
            channels,
            messages,
            k,
            emit_model,
        } => {
            let mut params = ArincParams {
                cores: *cores,
                messages: *messages,
                ..ArincParams::default()
            };
            if let Some(p) = partitions {
                params.partitions = match parse_partitions(p) {
                    Ok(v) => v,
                    Err(e) => return Outcome::InputError(e),
                };
            } else if *cores != 2 {
                params.partitions = (0..*cores)
                    .map(|i| (format!("P{}", i + 1), std::iter::once(i).collect()))
                    .collect();
            }
            if let Some(c) = channels {
                params.channels = match parse_channels(c) {
                    Ok(v) => v,
                    Err(e) => return Outcome::InputError(e),
                };
            }
            let model = match build_arinc_model(&params) {
                Ok(m) => m,
                Err(e) => return Outcome::InputError(e.to_string()),
            };
            if *emit_model {
                print!("{}", pretty_print(&model));
                return Outcome::AllHold;
            }
            certify_and_report(&model, &caps, *k, cli.json)
        }
    }
}

fn certify_and_report(model: &Model, caps: &Caps, k: usize, json: bool) -> Outcome {
    let mut rep = Reporter::new(json, "certify");
    rep.report.model_digest = model_digest(model);
    rep.param("k", k);
    let report = match certify(model, caps, Some(k)) {
        Ok(r) => r,
        Err(e) => return Outcome::InputError(e.to_string()),
    };
    for (_, v) in &report.premises {
        rep.verdict(v.clone());
    }
    if let Some(v) = &report.oracle_noninfluence {
        rep.verdict(v.clone());
    }
    if let Some(v) = &report.oracle_nonleakage {
        rep.verdict(v.clone());
    }
    if !json {
        println!(
            "certified by composition: {}",
            if report.certified { "yes" } else { "no" }
        );
    }
    rep.finish()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global();
    }
    match run(cli) {
        Outcome::AllHold => ExitCode::from(0),
        Outcome::CheckFailed => ExitCode::from(1),
        Outcome::InputError(msg) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
        Outcome::ResourceCap(msg) => {
            eprintln!("resource cap exhausted: {msg}");
            ExitCode::from(3)
        }
    }
}
