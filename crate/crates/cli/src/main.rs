//! `diagchase`: batch front end for quivers, commutativity checks, formulas,
//! models and proofs.
//!
//! Exit codes: 0 success or true, 1 false or failure, 2 usage or parse error.

mod files;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use diagchase::comcut::comcut;
use diagchase::commerge::commerge_report;
use diagchase::formula::{check_formula, formula_dual};
use diagchase::kernel::{Biproof, Kernel};
use diagchase::model::{formula_eval, FinCatModel, DEFAULT_DIAGRAM_CAP};
use diagchase::paths::{closure_with_cap, DEFAULT_PATH_CAP};
use diagchase::syntax::{print_formula, print_proof, print_quiver, LemmaRecord};

use files::*;

#[derive(Parser)]
#[command(name = "diagchase", version, about = "Check commutative diagrams and diagrammatic proofs")]
struct Cli {
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Bound on enumerated paths (and diagrams, for `eval`).
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Lemma registry file.
    #[arg(long, global = true, env = "DIAGCHASE_REGISTRY")]
    registry: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a quiver file.
    Quiver {
        #[command(subcommand)]
        action: QuiverAction,
    },
    /// Decide commutativity from assumed commuting parts.
    Commerge {
        quiver: PathBuf,
        /// JSON files listing assumptions.
        #[arg(long = "assume", required = true, num_args = 1..)]
        assume: Vec<PathBuf>,
    },
    /// Bipaths whose equalities make the whole quiver commute.
    Comcut {
        quiver: PathBuf,
        /// Confirm fullness with the closure oracle.
        #[arg(long)]
        verify: bool,
    },
    /// Inspect a formula file.
    Formula {
        #[command(subcommand)]
        action: FormulaAction,
    },
    /// Evaluate a closed formula in finite categories.
    Eval {
        formula: PathBuf,
        /// Model file, a battery category name, or `battery`.
        #[arg(long)]
        model: String,
    },
    Proof {
        #[command(subcommand)]
        action: ProofAction,
    },
    Biproof {
        #[command(subcommand)]
        action: BiproofAction,
    },
    /// Manage the lemma registry.
    Lemma {
        #[command(subcommand)]
        action: LemmaAction,
    },
    /// Run the HTTP session service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
}

#[derive(Subcommand)]
enum QuiverAction {
    Check { file: PathBuf },
    Dual { file: PathBuf },
    Dot { file: PathBuf },
}

#[derive(Subcommand)]
enum FormulaAction {
    Check { file: PathBuf },
    Dual { file: PathBuf },
}

#[derive(Subcommand)]
enum ProofAction {
    Check { formula: PathBuf, script: PathBuf },
}

#[derive(Subcommand)]
enum BiproofAction {
    Check { formula: PathBuf, primal: PathBuf, dual: PathBuf },
}

#[derive(Subcommand)]
enum LemmaAction {
    Add {
        name: String,
        formula: PathBuf,
        script: PathBuf,
        #[arg(long)]
        dual: Option<PathBuf>,
    },
    List,
}

enum Failure {
    /// Exit 1.
    Failed(String),
    /// Exit 2.
    Input(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e.to_string())
    }
}

/// Text for humans, JSON for `--json`, and the verdict.
struct Report {
    text: String,
    json: Value,
    ok: bool,
}

fn report(ok: bool, text: impl Into<String>, json: Value) -> Result<Report, Failure> {
    Ok(Report { text: text.into(), json, ok })
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let path_cap = cli.cap.unwrap_or(DEFAULT_PATH_CAP);
    match &cli.command {
        Command::Quiver { action: QuiverAction::Check { file } } => {
            let text = std::fs::read_to_string(file).map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
            let q = parse_quiver_text(&text).map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
            if let Err(e) = q.check_wf() {
                return report(false, format!("ill-formed: {e}"), json!({ "well_formed": false, "error": e.to_string() }));
            }
            let acyclic = q.is_acyclic();
            report(
                true,
                format!("ok: {} vertices, {} arcs, {}", q.n, q.arcs.len(), if acyclic { "acyclic" } else { "cyclic" }),
                json!({ "well_formed": true, "n": q.n, "arcs": q.arcs, "acyclic": acyclic }),
            )
        }
        Command::Quiver { action: QuiverAction::Dual { file } } => {
            let d = load_quiver(file)?.dual();
            report(true, print_quiver(&d), json!({ "n": d.n, "arcs": d.arcs }))
        }
        Command::Quiver { action: QuiverAction::Dot { file } } => {
            let q = load_quiver(file)?;
            let name = file.file_stem().and_then(|s| s.to_str()).unwrap_or("Q");
            let dot = q.to_dot(name);
            report(true, dot.trim_end(), json!({ "dot": dot }))
        }
        Command::Commerge { quiver, assume } => {
            let q = load_quiver(quiver)?;
            let mut assms = Vec::new();
            for f in assume {
                assms.extend(load_assumptions(f, &q)?);
            }
            let rep = commerge_report(&q, &assms).map_err(|e| Failure::Failed(e.to_string()))?;
            let mut text = format!("commerge: {}", rep.holds);
            for f in &rep.failures {
                text.push_str(&format!("\nfailing pair {} -> {}: components {:?}", f.u, f.v, f.components));
            }
            report(rep.holds, text, serde_json::to_value(&rep).expect("report serializes"))
        }
        Command::Comcut { quiver, verify } => {
            let q = load_quiver(quiver)?;
            let cut = comcut(&q).map_err(|e| Failure::Failed(e.to_string()))?;
            let mut lines: Vec<String> = cut.iter().enumerate().map(|(i, b)| format!("{i}: {}", b.equation())).collect();
            lines.insert(0, format!("{} bipaths", cut.len()));
            let verified = if *verify {
                let full = closure_with_cap(&q, &cut, path_cap).map_err(|e| Failure::Failed(e.to_string()))?.is_full();
                lines.push(format!("verification: {}", if full { "passed" } else { "FAILED" }));
                Some(full)
            } else {
                None
            };
            let equations: Vec<String> = cut.iter().map(|b| b.equation()).collect();
            report(verified != Some(false), lines.join("\n"), json!({ "bipaths": cut, "equations": equations, "verified": verified }))
        }
        Command::Formula { action: FormulaAction::Check { file } } => {
            let f = load_formula(file)?;
            match check_formula(&[], &f) {
                Ok(()) => report(true, "well-formed", json!({ "well_formed": true, "formula": print_formula(&f) })),
                Err(e) => report(
                    false,
                    format!("ill-formed: {e}"),
                    json!({ "well_formed": false, "formula": print_formula(&f), "error": e.to_string() }),
                ),
            }
        }
        Command::Formula { action: FormulaAction::Dual { file } } => {
            let d = formula_dual(&load_formula(file)?);
            report(true, print_formula(&d), json!({ "formula": print_formula(&d), "ast": d }))
        }
        Command::Eval { formula, model } => {
            let f = load_statement(formula)?;
            let mut results = Vec::new();
            let mut lines = Vec::new();
            let mut all = true;
            for (name, cat) in load_model(model)? {
                let m = FinCatModel::new(cat).map_err(|e| Failure::Input(e.to_string()))?.with_cap(cli.cap.unwrap_or(DEFAULT_DIAGRAM_CAP));
                let holds = formula_eval(&m, &[], &f).map_err(|e| Failure::Failed(format!("{name}: {e}")))?;
                all &= holds;
                lines.push(format!("{name}: {holds}"));
                results.push(json!({ "model": name, "holds": holds }));
            }
            report(all, lines.join("\n"), json!({ "holds": all, "results": results }))
        }
        Command::Proof { action: ProofAction::Check { formula, script } } => {
            let f = load_statement(formula)?;
            let pf = load_proof(script)?;
            let reg = load_registry(cli.registry.as_deref())?;
            let kernel = Kernel::new(&reg).with_path_cap(path_cap);
            match kernel.check_proof_report(&f, &pf) {
                Ok(()) => report(true, format!("proved in {} step{}", pf.len(), if pf.len() == 1 { "" } else { "s" }), json!({ "proved": true, "steps": pf.len(), "error": null })),
                Err(e) => report(false, format!("not proved: {e}"), json!({ "proved": false, "steps": pf.len(), "error": e.to_string() })),
            }
        }
        Command::Biproof { action: BiproofAction::Check { formula, primal, dual } } => {
            let f = load_statement(formula)?;
            let bp = Biproof { primal: load_proof(primal)?, dual: load_proof(dual)? };
            let reg = load_registry(cli.registry.as_deref())?;
            let kernel = Kernel::new(&reg).with_path_cap(path_cap);
            match kernel.check_biproof(&f, &bp) {
                Ok(true) => report(true, "proved, together with the dual statement", json!({ "proved": true, "error": null })),
                Ok(false) => {
                    let why = kernel.check_proof_report(&f, &bp.primal).err().map(|e| e.to_string()).unwrap_or_default();
                    report(false, format!("not proved: {why}"), json!({ "proved": false, "error": why }))
                }
                Err(e) => report(false, format!("not a biproof: {e}"), json!({ "proved": false, "error": e.to_string() })),
            }
        }
        Command::Lemma { action: LemmaAction::Add { name, formula, script, dual } } => {
            let path = cli
                .registry
                .as_deref()
                .ok_or_else(|| Failure::Input("no registry file: pass --registry or set DIAGCHASE_REGISTRY".into()))?;
            let mut file = load_registry_file(Some(path))?;
            let mut reg = load_registry(Some(path))?;
            let f = load_statement(formula)?;
            let pf = load_proof(script)?;
            let dual_pf = dual.as_deref().map(load_proof).transpose()?;
            reg.register(name, f.clone(), pf.clone(), dual_pf.clone()).map_err(|e| Failure::Failed(e.to_string()))?;
            file.lemmas.push(LemmaRecord {
                name: name.clone(),
                formula: f,
                script: print_proof(&pf),
                dual_script: dual_pf.as_ref().map(print_proof),
            });
            std::fs::write(path, file.to_json() + "\n").map_err(|e| Failure::Failed(format!("{}: {e}", path.display())))?;
            report(true, format!("added {name}"), json!({ "added": name }))
        }
        Command::Lemma { action: LemmaAction::List } => {
            let reg = load_registry(cli.registry.as_deref())?;
            let mut lines = Vec::new();
            let mut items = Vec::new();
            for (name, l) in reg.iter() {
                let dual = l.dual_proof.is_some();
                lines.push(format!("{name}{}: {}", if dual { " (with dual proof)" } else { "" }, print_formula(&l.formula)));
                items.push(json!({ "name": name, "formula": print_formula(&l.formula), "has_dual_proof": dual }));
            }
            report(true, lines.join("\n"), json!({ "lemmas": items }))
        }
        Command::Serve { port } => {
            let reg = load_registry(cli.registry.as_deref())?;
            let addr = SocketAddr::from(([127, 0, 0, 1], *port));
            let rt = tokio::runtime::Runtime::new().map_err(|e| Failure::Failed(e.to_string()))?;
            eprintln!("listening on http://{addr}");
            rt.block_on(diagchase_service::serve(addr, diagchase_service::AppState::new(reg)))
                .map_err(|e| Failure::Failed(e.to_string()))?;
            report(true, "", json!({}))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&r.json).expect("json"));
            } else if !r.text.is_empty() {
                println!("{}", r.text);
            }
            ExitCode::from(if r.ok { 0 } else { 1 })
        }
        Err(f) => {
            let (code, kind, msg) = match f {
                Failure::Failed(m) => (1, "failure", m),
                Failure::Input(m) => (2, "input", m),
            };
            eprintln!("error: {msg}");
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&json!({ "error": kind, "message": msg })).expect("json"));
            }
            ExitCode::from(code)
        }
    }
}

