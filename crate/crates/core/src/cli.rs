//! Command-line front end.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::characters::{compare_with_automorphisms, enumerate_characters, faithfulness_report, Character};
use crate::matmodel::{check_relations, corpus_models, evaluate_edge_matrix, pauli_witness, MatrixModel};
use crate::multigraph::{automorphisms, read_graph, Multigraph, DEFAULT_AUTOMORPHISM_BUDGET};
use crate::ncalg::ProofBudget;
use crate::presentation::{banica_lift, build_presentation, edge_matrix, permissible_subpresentation, Presentation};
use crate::verify::{run_all, NumericOracle, Status, SuiteReport};

/// Exit status when every requested check passes.
pub const EXIT_OK: i32 = 0;
/// Exit status on a failed check or an error.
pub const EXIT_FAILURE: i32 = 1;
/// Exit status when nothing failed but some obligations stayed undecided.
pub const EXIT_UNDECIDED: i32 = 2;

const CORPUS_MODEL_SEED: u64 = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    /// The full presentation.
    Q,
    /// Generators with both indices permissible.
    Qprime,
    /// The lift of the vertex quantum automorphism group.
    Banica,
}

#[derive(Clone, Debug, PartialEq, Subcommand)]
pub enum Command {
    /// Vertex count, maximal multiplicity, uniformity, permissible pairs, automorphism count.
    Analyze,
    /// Presentation as JSON.
    Present {
        #[arg(value_enum, default_value = "q")]
        target: Target,
    },
    /// Runs every symbolic suite.
    Verify {
        /// Prints the trace of one obligation, e.g. `bimodule/3`.
        #[arg(long)]
        explain: Option<String>,
    },
    /// Enumerates characters and compares them with the automorphisms.
    Characters {
        /// Lists every character in cycle notation.
        #[arg(long)]
        list: bool,
    },
    /// Evaluates the Pauli witness model.
    Witness {
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
        theta: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Parser)]
#[command(name = "qsym", version, about = "Quantum automorphism presentations of finite multigraphs")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Graph file (JSON or edge-list text).
    #[arg(long, global = true)]
    pub graph: Option<PathBuf>,
    /// Maximal number of counted insertions per proof.
    #[arg(long, default_value_t = 3, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub depth: u32,
    /// Node budget of the character search.
    #[arg(long, default_value_t = 10_000_000, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub nodes: u64,
    #[arg(long, default_value_t = 1e-10, global = true, value_parser = parse_tol)]
    pub tol: f64,
    /// Leaves the s-independence relations out of the presentation.
    #[arg(long, global = true)]
    pub no_rv: bool,
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0, global = true)]
    pub workers: usize,
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if t > 0.0 && t < 1.0 {
        Ok(t)
    } else {
        Err("tolerance must lie in (0, 1)".into())
    }
}

impl RunConfig {
    pub fn budget(&self) -> ProofBudget {
        ProofBudget {
            max_insertions: self.depth as usize,
            ..ProofBudget::default()
        }
    }

    pub fn include_rv(&self) -> bool {
        !self.no_rv
    }
}

/// A finished run: exit status and the report text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub report: String,
}

impl RunOutput {
    fn new(code: i32, report: String) -> Self {
        RunOutput { code, report }
    }

    fn error(msg: impl std::fmt::Display) -> Self {
        RunOutput::new(EXIT_FAILURE, format!("error: {msg}\n"))
    }
}

pub fn run(config: &RunConfig) -> RunOutput {
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(config.workers).build() {
        Ok(p) => p,
        Err(e) => return RunOutput::error(e),
    };
    pool.install(|| dispatch(config))
}

fn dispatch(config: &RunConfig) -> RunOutput {
    let Some(path) = &config.graph else {
        return RunOutput::error("--graph is required");
    };
    let g = match read_graph(path) {
        Ok(g) => g,
        Err(e) => return RunOutput::error(e),
    };
    match &config.command {
        Command::Analyze => analyze(&g, config),
        Command::Present { target } => present(&g, *target, config),
        Command::Verify { explain } => verify(&g, explain.as_deref(), config),
        Command::Characters { list } => characters(&g, *list, config),
        Command::Witness { theta } => witness(&g, *theta, config),
    }
}

fn render(config: &RunConfig, value: &Value, text: impl FnOnce() -> String) -> String {
    match config.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("json values serialize");
            s.push('\n');
            s
        }
        Format::Text => text(),
    }
}

fn analyze(g: &Multigraph, config: &RunConfig) -> RunOutput {
    let auts = match automorphisms(g, DEFAULT_AUTOMORPHISM_BUDGET) {
        Ok(a) => a,
        Err(e) => return RunOutput::error(e),
    };
    let perm: Vec<String> = g.permissible_pairs().into_iter().map(|s| g.slot_name(s)).collect();
    let value = json!({
        "vertices": g.vertex_count(),
        "edges": g.edges().len(),
        "max_multiplicity": g.max_multiplicity(),
        "uniform": g.is_uniform(),
        "permissible_pairs": perm.len(),
        "permissible": perm,
        "automorphisms": auts.len(),
    });
    let report = render(config, &value, || {
        format!(
            "vertices            {}\nedges               {}\nN                   {}\nuniform             {}\npermissible pairs   {}\nautomorphisms       {}\n",
            g.vertex_count(),
            g.edges().len(),
            g.max_multiplicity(),
            g.is_uniform(),
            perm.len(),
            auts.len()
        )
    });
    RunOutput::new(EXIT_OK, report)
}

fn present(g: &Multigraph, target: Target, config: &RunConfig) -> RunOutput {
    let full: Presentation = build_presentation(g, config.include_rv());
    let (p, code, closure) = match target {
        Target::Q => (full, EXIT_OK, None),
        Target::Banica => (banica_lift(g), EXIT_OK, None),
        Target::Qprime => {
            let (sub, report) = permissible_subpresentation(&full, g, config.budget());
            let code = if report.all_proved() { EXIT_OK } else { EXIT_UNDECIDED };
            let proved = report.entries.iter().filter(|e| e.outcome.is_proved()).count();
            (sub, code, Some((proved, report.entries.len())))
        }
    };
    let report = match config.format {
        Format::Json => p.to_json(),
        Format::Text => {
            let mut s = format!(
                "kind {:?}, scope {:?}\ngenerators {}\nslots {}\nlinear relations {}\n",
                p.kind,
                p.scope,
                p.generator_count(),
                p.slots().iter().map(|s| g.slot_name(*s)).collect::<Vec<_>>().join(" "),
                p.linear_relations().len()
            );
            if let Some((proved, total)) = closure {
                let _ = writeln!(s, "coproduct closure: {proved}/{total} dropped legs proved zero");
            }
            s
        }
    };
    RunOutput::new(code, report)
}

/// Characters of `p` and the corpus models built from them; `None` with a note
/// when the search budget runs out.
fn oracle_inputs(p: &Presentation, config: &RunConfig) -> Result<(Vec<Character>, Vec<MatrixModel<f64>>), String> {
    let chars = enumerate_characters(p, config.nodes).map_err(|e| e.to_string())?;
    let models = corpus_models::<f64>(&chars, CORPUS_MODEL_SEED);
    Ok((chars, models))
}

fn verify(g: &Multigraph, explain: Option<&str>, config: &RunConfig) -> RunOutput {
    let p: Presentation = build_presentation(g, config.include_rv());
    let inputs = oracle_inputs(&p, config);
    let oracle = inputs.as_ref().ok().map(|(characters, models)| NumericOracle {
        characters,
        models,
        tol: config.tol,
    });
    let reports = run_all(g, config.include_rv(), config.budget(), oracle.as_ref());
    if let Some(id) = explain {
        return match reports.iter().find_map(|r| r.explain(id)) {
            Some(text) => RunOutput::new(EXIT_OK, text),
            None => RunOutput::error(format!("no obligation {id}")),
        };
    }
    let replays: Vec<bool> = reports.iter().map(SuiteReport::replays).collect();
    let undecided = reports.iter().any(|r| r.summary().undecided > 0);
    let code = if replays.iter().any(|ok| !ok) {
        EXIT_FAILURE
    } else if undecided {
        EXIT_UNDECIDED
    } else {
        EXIT_OK
    };
    let oracle_json = match &inputs {
        Ok((c, m)) => json!({ "characters": c.len(), "models": m.len(), "tolerance": config.tol }),
        Err(e) => json!({ "unavailable": e }),
    };
    let suites: Vec<Value> = reports
        .iter()
        .zip(&replays)
        .map(|(r, ok)| {
            let mut v = r.to_json_value();
            v["max_depth"] = json!(r.max_depth());
            v["replays"] = json!(ok);
            v
        })
        .collect();
    let value = json!({ "oracle": oracle_json, "suites": suites });
    let report = render(config, &value, || {
        let mut s = format!(
            "{:<26} {:>6} {:>7} {:>10} {:>10} {:>6} {:>8}\n",
            "suite", "total", "proved", "discharged", "undecided", "depth", "replays"
        );
        for (r, ok) in reports.iter().zip(&replays) {
            let m = r.summary();
            let _ = writeln!(
                s,
                "{:<26} {:>6} {:>7} {:>10} {:>10} {:>6} {:>8}",
                r.suite, m.total, m.proved, m.discharged, m.undecided, r.max_depth(), ok
            );
        }
        match &inputs {
            Ok((c, m)) => {
                let _ = writeln!(s, "oracle: {} characters, {} models", c.len(), m.len());
            }
            Err(e) => {
                let _ = writeln!(s, "oracle unavailable: {e}");
            }
        }
        for r in &reports {
            for n in &r.notes {
                let _ = writeln!(s, "note ({}): {n}", r.suite);
            }
            for o in r.obligations.iter().filter(|o| o.status == Status::Undecided) {
                let _ = writeln!(s, "undecided {}: {}", o.id, o.description);
            }
        }
        s
    });
    RunOutput::new(code, report)
}

fn bijection_json(result: &Result<crate::characters::AutomorphismMatch, crate::characters::CharacterError>) -> Value {
    match result {
        Ok(m) => json!({ "bijection": true, "characters": m.character_count, "automorphisms": m.automorphism_count }),
        Err(e) => json!({ "bijection": false, "reason": e.to_string() }),
    }
}

fn characters(g: &Multigraph, list: bool, config: &RunConfig) -> RunOutput {
    let p: Presentation = build_presentation(g, config.include_rv());
    let chars = match enumerate_characters(&p, config.nodes) {
        Ok(c) => c,
        Err(e) => return RunOutput::error(e),
    };
    let faith = match faithfulness_report(&chars, &p, g) {
        Ok(f) => f,
        Err(e) => return RunOutput::error(e),
    };
    let (sub, _) = permissible_subpresentation(&p, g, config.budget());
    let sub_chars = match enumerate_characters(&sub, config.nodes) {
        Ok(c) => c,
        Err(e) => return RunOutput::error(e),
    };
    let sub_match = compare_with_automorphisms(&sub_chars, &sub, g, DEFAULT_AUTOMORPHISM_BUDGET);
    let full_match = g
        .is_uniform()
        .then(|| compare_with_automorphisms(&chars, &p, g, DEFAULT_AUTOMORPHISM_BUDGET));
    let ok = sub_match.is_ok() && full_match.as_ref().is_none_or(Result::is_ok);
    let mut value = json!({
        "q": {
            "characters": chars.len(),
            "distinct_actions": faith.distinct_actions,
            "kernel_pairs": faith.kernel_pairs.len(),
            "first_kernel_pair": faith.kernel_pairs.first(),
            "faithful_on_classical_shadow": faith.is_faithful(),
        },
        "qprime": bijection_json(&sub_match),
    });
    if let Some(m) = &full_match {
        value["q"]["automorphisms"] = bijection_json(m);
    }
    if list {
        value["list"] = json!(chars.iter().map(|c| c.cycles(g.names())).collect::<Vec<_>>());
    }
    let report = render(config, &value, || {
        let mut s = format!(
            "Q characters        {}\ndistinct actions    {}\nkernel pairs        {}\n",
            chars.len(),
            faith.distinct_actions,
            faith.kernel_pairs.len()
        );
        let line = |r: &Result<_, crate::characters::CharacterError>| match r {
            Ok(crate::characters::AutomorphismMatch {
                character_count,
                automorphism_count,
                ..
            }) => format!("bijection ({character_count} <-> {automorphism_count})"),
            Err(e) => format!("no bijection: {e}"),
        };
        let _ = writeln!(s, "Q' vs automorphisms {}", line(&sub_match));
        if let Some(m) = &full_match {
            let _ = writeln!(s, "Q vs automorphisms  {}", line(m));
        }
        s.push_str("(classical characters only: a necessary shadow of faithfulness)\n");
        if list {
            for (n, c) in chars.iter().enumerate() {
                let _ = writeln!(s, "{n:>5}  {}", c.cycles(g.names()));
            }
        }
        s
    });
    RunOutput::new(if ok { EXIT_OK } else { EXIT_FAILURE }, report)
}

fn witness(g: &Multigraph, theta: f64, config: &RunConfig) -> RunOutput {
    let m = match pauli_witness::<f64>(g, theta) {
        Ok(m) => m,
        Err(e) => return RunOutput::error(e),
    };
    let p: Presentation = build_presentation(g, config.include_rv());
    let relations = match check_relations(&m, &p, config.tol) {
        Ok(r) => r,
        Err(e) => return RunOutput::error(e),
    };
    let em = edge_matrix(&p, g);
    let dev = evaluate_edge_matrix(&m, &em);
    let ok = relations.passes() && dev.biunitary <= config.tol && dev.magic > config.tol;
    let (a, b) = dev.worst_entry;
    let worst = format!("{} {}", g.edge_name(&em.edges[a]), g.edge_name(&em.edges[b]));
    let value = json!({
        "theta": theta,
        "tolerance": config.tol,
        "relations": relations,
        "biunitary_deviation": dev.biunitary,
        "magic_deviation": dev.magic,
        "worst_idempotent_deviation": dev.worst_idempotent,
        "worst_entry": worst,
        "witness": ok,
    });
    let report = render(config, &value, || {
        let mut s = String::new();
        for c in &relations.classes {
            let _ = writeln!(s, "{:<16} {:.3e}", c.class, c.deviation);
        }
        let _ = writeln!(s, "{:<16} {:.3e}", "biunitary", dev.biunitary);
        let _ = writeln!(s, "{:<16} {:.6}", "magic", dev.magic);
        let _ = writeln!(s, "{:<16} {:.6} at {worst}", "idempotent", dev.worst_idempotent);
        let _ = writeln!(s, "witness          {ok}");
        s
    });
    RunOutput::new(if ok { EXIT_OK } else { EXIT_FAILURE }, report)
}
