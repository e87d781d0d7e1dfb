//! Reading workspace files: quivers, assumptions, formulas, scripts, models
//! and the lemma registry.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use diagchase::commerge::Assumption;
use diagchase::corpus;
use diagchase::formula::{check_formula, Formula};
use diagchase::kernel::{LemmaRegistry, Proof};
use diagchase::model::{battery, FinCat, ModelError};
use diagchase::syntax::{parse_formula, parse_proof, parse_quiver, ParseError, RegistryFile, RegistryLoadError};
use diagchase::Quiver;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("{path}: {message}")]
    Invalid { path: PathBuf, message: String },
    #[error("registry {path}: {source}")]
    Registry { path: PathBuf, source: RegistryLoadError },
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|source| InputError::Io { path: path.into(), source })
}

fn invalid(path: &Path, message: impl ToString) -> InputError {
    InputError::Invalid { path: path.into(), message: message.to_string() }
}

#[derive(Deserialize)]
struct QuiverJson {
    n: usize,
    arcs: Vec<(usize, usize)>,
}

/// Quiver text, `{"n":..,"arcs":..}` JSON, or a corpus name.
pub fn parse_quiver_text(text: &str) -> Result<Quiver, ParseError> {
    match serde_json::from_str::<QuiverJson>(text) {
        Ok(q) => Ok(Quiver::new(q.n, q.arcs)),
        Err(_) => parse_quiver(text.trim()),
    }
}

/// A well-formed quiver. Acyclicity is left to the caller.
pub fn load_quiver(path: &Path) -> Result<Quiver, InputError> {
    let q = parse_quiver_text(&read(path)?).map_err(|source| InputError::Parse { path: path.into(), source })?;
    q.check_wf().map_err(|e| invalid(path, e))?;
    Ok(q)
}

/// A JSON array of assumptions, each checked against `q`.
pub fn load_assumptions(path: &Path, q: &Quiver) -> Result<Vec<Assumption>, InputError> {
    let assms: Vec<Assumption> = serde_json::from_str(&read(path)?).map_err(|e| invalid(path, e))?;
    for a in &assms {
        a.check_in(q).map_err(|e| invalid(path, e))?;
    }
    Ok(assms)
}

/// Formula text or the name of a corpus statement; not yet sort-checked.
pub fn parse_formula_text(text: &str) -> Result<Formula, ParseError> {
    match corpus::formulas().get(text.trim()) {
        Some(f) => Ok(f.clone()),
        None => parse_formula(text, &[]),
    }
}

pub fn load_formula(path: &Path) -> Result<Formula, InputError> {
    parse_formula_text(&read(path)?).map_err(|source| InputError::Parse { path: path.into(), source })
}

/// A closed, well-sorted formula.
pub fn load_statement(path: &Path) -> Result<Formula, InputError> {
    let f = load_formula(path)?;
    check_formula(&[], &f).map_err(|e| invalid(path, e))?;
    Ok(f)
}

pub fn load_proof(path: &Path) -> Result<Proof, InputError> {
    parse_proof(&read(path)?).map_err(|source| InputError::Parse { path: path.into(), source })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ModelJson {
    Tables(FinCat),
    Presentation { objects: usize, arrows: Vec<(usize, usize)>, #[serde(default)] products: Vec<(usize, usize, usize)> },
}

/// Models named by a battery entry (or `battery` for all of them), or given
/// as JSON: full tables, or `{objects, arrows, products}` with identities
/// numbered first.
pub fn parse_model(text: &str) -> Result<Vec<(String, FinCat)>, String> {
    let name = text.trim();
    if name == "battery" {
        return Ok(battery().into_iter().map(|(n, c)| (n.to_string(), c)).collect());
    }
    if let Some((n, c)) = battery().into_iter().find(|(n, _)| *n == name) {
        return Ok(vec![(n.to_string(), c)]);
    }
    if !name.starts_with('{') {
        let names: Vec<&str> = battery().iter().map(|(n, _)| *n).collect();
        return Err(format!("unknown model `{name}`; expected a JSON category, `battery`, or one of {}", names.join(", ")));
    }
    let cat = match serde_json::from_str::<ModelJson>(text).map_err(|e| e.to_string())? {
        ModelJson::Tables(c) => c,
        ModelJson::Presentation { objects, arrows, products } => {
            if products.iter().any(|&(g, f, r)| g.max(f).max(r) >= objects + arrows.len()) {
                return Err("product refers to an unknown morphism".into());
            }
            FinCat::from_presentation(objects, &arrows, &products)
        }
    };
    cat.check().map_err(|e: ModelError| e.to_string())?;
    Ok(vec![("model".to_string(), cat)])
}

/// `arg` is a file path, or a battery name when no such file exists.
pub fn load_model(arg: &str) -> Result<Vec<(String, FinCat)>, InputError> {
    let path = Path::new(arg);
    let text = if path.exists() { read(path)? } else { arg.to_string() };
    parse_model(&text).map_err(|e| invalid(path, e))
}

/// Lemmas stored in the registry file, if it exists.
pub fn load_registry_file(path: Option<&Path>) -> Result<RegistryFile, InputError> {
    match path {
        Some(p) if p.exists() => {
            RegistryFile::from_json(&read(p)?).map_err(|source| InputError::Registry { path: p.into(), source })
        }
        _ => Ok(RegistryFile::default()),
    }
}

/// The builtin lemmas followed by those of the registry file, all re-checked.
pub fn load_registry(path: Option<&Path>) -> Result<LemmaRegistry, InputError> {
    let file = load_registry_file(path)?;
    file.into_registry(corpus::builtin_registry()).map_err(|source| InputError::Registry {
        path: path.map(Path::to_path_buf).unwrap_or_default(),
        source,
    })
}
