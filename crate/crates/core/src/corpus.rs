//! Named predicates and statements about monomorphisms and epimorphisms.
//!
//! Inside a predicate body `$0` is the quantified diagram and `$1`, `$2`, …
//! are the parameters, in order.

use std::collections::BTreeMap;

use crate::fixtures::{comp_q, map_q, mono_q};
use crate::formula::{apply_predicate, Formula, Predicate, Term};
use crate::kernel::{LemmaRegistry, Proof};
use crate::quiver::{Quiver, Subquiver};
use crate::syntax::parse_proof;

/// Proof script of [`mono_monom_pf`].
pub const MONO_MONOM_SCRIPT: &str = include_str!("../proofs/mono_monom.proof");

/// Proof script of [`epi_mepi_pf`], citing `mono_monom`.
pub const EPI_MEPI_SCRIPT: &str = include_str!("../proofs/epi_mepi.proof");

/// `restrA(arcs, t)` where `t` has sort `host`.
pub fn restr_a(host: &Quiver, arcs: &[usize], t: Term) -> Term {
    let sq = Subquiver::spanned_by_arcs(host, arcs.to_vec()).expect("arc indices of a corpus quiver");
    Term::restr(sq, t)
}

pub fn map_qd() -> Quiver {
    map_q().dual()
}

pub fn mono_qd() -> Quiver {
    mono_q().dual()
}

pub fn comp_qd() -> Quiver {
    comp_q().dual()
}

fn mono_body(arg: Quiver, shape: Quiver) -> Predicate {
    let w = |arcs: &[usize]| restr_a(&shape, arcs, Term::var(0));
    let body = Formula::forall(
        shape.clone(),
        Formula::implies_chain(
            [
                Formula::eqd(w(&[3]), Term::var(1)),
                Formula::commute(w(&[0, 2, 3])),
                Formula::commute(w(&[1, 2, 3])),
            ],
            Formula::commute(w(&[0, 1])),
        ),
    );
    Predicate::new(vec![arg], body)
}

/// `x` is a monomorphism.
pub fn mono_f() -> Predicate {
    mono_body(map_q(), mono_q())
}

/// `x` is an epimorphism: the same body over the dual quivers.
pub fn epi_f() -> Predicate {
    mono_body(map_qd(), mono_qd())
}

/// `z` is the composite of `x` followed by `y`.
pub fn comp_f() -> Predicate {
    let q = comp_q();
    let w = |arcs: &[usize]| restr_a(&q, arcs, Term::var(0));
    let body = Formula::exists(
        q.clone(),
        Formula::and(
            Formula::eqd(w(&[0]), Term::var(1)),
            Formula::and(
                Formula::eqd(w(&[2]), Term::var(2)),
                Formula::and(Formula::eqd(w(&[1]), Term::var(3)), Formula::commute(Term::var(0))),
            ),
        ),
    );
    Predicate::new(vec![map_q(), map_q(), map_q()], body)
}

fn monom_statement(triangle: Quiver, p: &Predicate) -> Formula {
    let ctx = [triangle.clone()];
    let gf = restr_a(&triangle, &[1], Term::var(0));
    let f = restr_a(&triangle, &[0], Term::var(0));
    let body = Formula::implies_chain(
        [Formula::commute(Term::var(0)), apply_predicate(&ctx, p, &[gf]).expect("well-sorted argument")],
        apply_predicate(&ctx, p, &[f]).expect("well-sorted argument"),
    );
    Formula::forall(triangle, body)
}

/// If `g ∘ f` is a monomorphism then so is `f`.
pub fn mono_monom_pf() -> Formula {
    monom_statement(comp_q(), &mono_f())
}

/// If `g ∘ f` is an epimorphism then so is `g`.
pub fn epi_mepi_pf() -> Formula {
    monom_statement(comp_qd(), &epi_f())
}

pub fn mono_monom_proof() -> Proof {
    parse_proof(MONO_MONOM_SCRIPT).expect("shipped script parses")
}

pub fn epi_mepi_proof() -> Proof {
    parse_proof(EPI_MEPI_SCRIPT).expect("shipped script parses")
}

/// A registry holding `mono_monom` with its primal and dual proofs.
pub fn builtin_registry() -> LemmaRegistry {
    let mut reg = LemmaRegistry::new();
    let pf = mono_monom_proof();
    let dual = pf.dual();
    reg.register("mono_monom", mono_monom_pf(), pf, Some(dual)).expect("shipped proof checks");
    reg
}

/// Predicates by name, as referenced with `@name(...)` in formula text.
pub fn predicates() -> BTreeMap<String, Predicate> {
    BTreeMap::from([
        ("Comp".to_string(), comp_f()),
        ("epiF".to_string(), epi_f()),
        ("monoF".to_string(), mono_f()),
    ])
}

/// Closed statements by name.
pub fn formulas() -> BTreeMap<String, Formula> {
    BTreeMap::from([
        ("epi_mepiPF".to_string(), epi_mepi_pf()),
        ("mono_monomPF".to_string(), mono_monom_pf()),
    ])
}

/// Named quivers.
pub fn quivers() -> BTreeMap<String, Quiver> {
    BTreeMap::from([
        ("compQ".to_string(), comp_q()),
        ("compQD".to_string(), comp_qd()),
        ("mapQ".to_string(), map_q()),
        ("mapQD".to_string(), map_qd()),
        ("monoQ".to_string(), mono_q()),
        ("monoQD".to_string(), mono_qd()),
    ])
}
