//! The deep-embedded first-order language over quiver sorts.
//!
//! Variables are de Bruijn indices: `$0` is bound by the innermost
//! quantifier. A context lists the sort of each free variable, innermost
//! first.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quiver::{Quiver, Subquiver};

/// A diagram-valued term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "tag", content = "children")]
pub enum Term {
    Var(usize),
    Restr(Subquiver, Box<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "tag", content = "children")]
pub enum Formula {
    Forall(Quiver, Box<Formula>),
    Exists(Quiver, Box<Formula>),
    Imply(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    FTrue,
    Commute(Term),
    EqD(Term, Term),
}

/// A formula abstracted over parameters; `arity[i]` is the sort of `$i` in
/// the body.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Predicate {
    pub arity: Vec<Quiver>,
    pub body: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SortError {
    #[error("variable ${0} is unbound")]
    UnboundVar(usize),
    #[error("ill-formed restriction: {0}")]
    BadRestr(String),
    #[error("quantifier quiver {0} is not well-formed")]
    IllFormedQuiver(Quiver),
    #[error("quantifier quiver {0} has a cycle")]
    CyclicQuiver(Quiver),
    #[error("equality between sorts {0} and {1}")]
    EqDSorts(Quiver, Quiver),
    #[error("predicate expects {expected} arguments, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("argument {index} has sort {found}, expected {expected}")]
    ArgSort { index: usize, expected: Quiver, found: Quiver },
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
}

impl Term {
    pub fn var(k: usize) -> Term {
        Term::Var(k)
    }

    pub fn restr(sq: Subquiver, t: Term) -> Term {
        Term::Restr(sq, Box::new(t))
    }

    /// The variable at the bottom of the restriction chain.
    pub fn root(&self) -> usize {
        match self {
            Term::Var(k) => *k,
            Term::Restr(_, t) => t.root(),
        }
    }

    /// Adds `by` to every variable index `>= cutoff`.
    pub fn shift(&self, by: usize, cutoff: usize) -> Term {
        match self {
            Term::Var(k) if *k >= cutoff => Term::Var(k + by),
            Term::Var(k) => Term::Var(*k),
            Term::Restr(sq, t) => Term::restr(sq.clone(), t.shift(by, cutoff)),
        }
    }

    /// Simultaneous substitution of `args` for the variables `depth..depth+len`
    /// at binder depth `depth`; variables above are lowered by `len`.
    fn subst(&self, depth: usize, args: &[Term]) -> Term {
        match self {
            Term::Var(k) if *k < depth => Term::Var(*k),
            Term::Var(k) if *k < depth + args.len() => args[k - depth].shift(depth, 0),
            Term::Var(k) => Term::Var(k - args.len()),
            Term::Restr(sq, t) => Term::restr(sq.clone(), t.subst(depth, args)),
        }
    }

    pub fn sort(&self, ctx: &[Quiver]) -> Result<Quiver, SortError> {
        term_sort(ctx, self)
    }
}

/// Surface form of a term, where a restriction may name only its arcs.
///
/// `RestrArcs` selects the given arcs and the endpoints they touch, in
/// ascending order; the vertex list is resolved against the sort of the
/// restricted term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "tag", content = "children")]
pub enum TermExpr {
    Var(usize),
    Restr(Subquiver, Box<TermExpr>),
    RestrArcs(Vec<usize>, Box<TermExpr>),
}

impl TermExpr {
    pub fn resolve(&self, ctx: &[Quiver]) -> Result<Term, SortError> {
        match self {
            TermExpr::Var(k) => Ok(Term::Var(*k)),
            TermExpr::Restr(sq, t) => Ok(Term::restr(sq.clone(), t.resolve(ctx)?)),
            TermExpr::RestrArcs(arcs, t) => {
                let inner = t.resolve(ctx)?;
                let host = term_sort(ctx, &inner)?;
                let sq = Subquiver::spanned_by_arcs(&host, arcs.clone()).map_err(|e| SortError::BadRestr(e.to_string()))?;
                Ok(Term::restr(sq, inner))
            }
        }
    }
}

impl From<&Term> for TermExpr {
    fn from(t: &Term) -> Self {
        match t {
            Term::Var(k) => TermExpr::Var(*k),
            Term::Restr(sq, inner) => TermExpr::Restr(sq.clone(), Box::new(TermExpr::from(&**inner))),
        }
    }
}

impl fmt::Display for TermExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermExpr::Var(k) => write!(f, "${k}"),
            TermExpr::Restr(sq, t) => write!(f, "restr({:?};{:?}, {t})", sq.vertices, sq.arcs),
            TermExpr::RestrArcs(arcs, t) => write!(f, "restrA({arcs:?}, {t})"),
        }
    }
}

/// Sort of a term: variables read the context, restrictions restrict.
pub fn term_sort(ctx: &[Quiver], t: &Term) -> Result<Quiver, SortError> {
    match t {
        Term::Var(k) => ctx.get(*k).cloned().ok_or(SortError::UnboundVar(*k)),
        Term::Restr(sq, inner) => {
            let host = term_sort(ctx, inner)?;
            host.restr(sq).map_err(|e| SortError::BadRestr(e.to_string()))
        }
    }
}

/// Collapses a restriction chain into one subquiver of its root's sort.
pub fn flatten_term(ctx: &[Quiver], t: &Term) -> Result<(usize, Subquiver), SortError> {
    match t {
        Term::Var(k) => {
            let q = ctx.get(*k).ok_or(SortError::UnboundVar(*k))?;
            Ok((*k, Subquiver::identity(q)))
        }
        Term::Restr(sq, inner) => {
            let (root, below) = flatten_term(ctx, inner)?;
            let flat = Subquiver::compose(&ctx[root], sq, &below).map_err(|e| SortError::BadRestr(e.to_string()))?;
            Ok((root, flat))
        }
    }
}

impl Formula {
    pub fn forall(q: Quiver, f: Formula) -> Formula {
        Formula::Forall(q, Box::new(f))
    }

    pub fn exists(q: Quiver, f: Formula) -> Formula {
        Formula::Exists(q, Box::new(f))
    }

    pub fn imply(a: Formula, b: Formula) -> Formula {
        Formula::Imply(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn commute(t: Term) -> Formula {
        Formula::Commute(t)
    }

    pub fn eqd(a: Term, b: Term) -> Formula {
        Formula::EqD(a, b)
    }

    /// Right-nested implications `h1 -> h2 -> ... -> goal`.
    pub fn implies_chain(hyps: impl IntoIterator<Item = Formula>, goal: Formula) -> Formula {
        let hyps: Vec<Formula> = hyps.into_iter().collect();
        hyps.into_iter().rev().fold(goal, |acc, h| Formula::imply(h, acc))
    }

    /// Applies `f` to every term, passing the binder depth.
    pub fn map_terms(&self, depth: usize, f: &mut impl FnMut(&Term, usize) -> Term) -> Formula {
        match self {
            Formula::Forall(q, b) => Formula::forall(q.clone(), b.map_terms(depth + 1, f)),
            Formula::Exists(q, b) => Formula::exists(q.clone(), b.map_terms(depth + 1, f)),
            Formula::Imply(a, b) => Formula::imply(a.map_terms(depth, f), b.map_terms(depth, f)),
            Formula::And(a, b) => Formula::and(a.map_terms(depth, f), b.map_terms(depth, f)),
            Formula::FTrue => Formula::FTrue,
            Formula::Commute(t) => Formula::Commute(f(t, depth)),
            Formula::EqD(a, b) => Formula::EqD(f(a, depth), f(b, depth)),
        }
    }

    /// Adds `by` to every free variable.
    pub fn shift(&self, by: usize) -> Formula {
        self.map_terms(0, &mut |t, depth| t.shift(by, depth))
    }

    /// Replaces `$0` by `t` (a term of the enclosing context) and lowers the
    /// other free variables.
    pub fn instantiate(&self, t: &Term) -> Formula {
        self.substitute(std::slice::from_ref(t))
    }

    /// Replaces `$0..$len` by `args`, lowering the remaining free variables.
    pub fn substitute(&self, args: &[Term]) -> Formula {
        self.map_terms(0, &mut |t, depth| t.subst(depth, args))
    }

    pub fn dual(&self) -> Formula {
        formula_dual(self)
    }

    /// Every quiver annotating a quantifier, outermost first.
    pub fn quantifier_quivers(&self) -> Vec<&Quiver> {
        let mut out = Vec::new();
        self.collect_quivers(&mut out);
        out
    }

    fn collect_quivers<'a>(&'a self, out: &mut Vec<&'a Quiver>) {
        match self {
            Formula::Forall(q, b) | Formula::Exists(q, b) => {
                out.push(q);
                b.collect_quivers(out);
            }
            Formula::Imply(a, b) | Formula::And(a, b) => {
                a.collect_quivers(out);
                b.collect_quivers(out);
            }
            _ => {}
        }
    }
}

/// Well-formedness with the reason for failure.
pub fn check_formula(ctx: &[Quiver], f: &Formula) -> Result<(), SortError> {
    match f {
        Formula::Forall(q, body) | Formula::Exists(q, body) => {
            if !q.is_wf() {
                return Err(SortError::IllFormedQuiver(q.clone()));
            }
            if !q.is_acyclic() {
                return Err(SortError::CyclicQuiver(q.clone()));
            }
            let mut inner = Vec::with_capacity(ctx.len() + 1);
            inner.push(q.clone());
            inner.extend_from_slice(ctx);
            check_formula(&inner, body)
        }
        Formula::Imply(a, b) | Formula::And(a, b) => {
            check_formula(ctx, a)?;
            check_formula(ctx, b)
        }
        Formula::FTrue => Ok(()),
        Formula::Commute(t) => term_sort(ctx, t).map(drop),
        Formula::EqD(a, b) => {
            let (sa, sb) = (term_sort(ctx, a)?, term_sort(ctx, b)?);
            if sa == sb {
                Ok(())
            } else {
                Err(SortError::EqDSorts(sa, sb))
            }
        }
    }
}

pub fn formula_wf(ctx: &[Quiver], f: &Formula) -> bool {
    check_formula(ctx, f).is_ok()
}

/// Dualizes every quantifier quiver; terms are untouched.
pub fn formula_dual(f: &Formula) -> Formula {
    match f {
        Formula::Forall(q, b) => Formula::forall(q.dual(), formula_dual(b)),
        Formula::Exists(q, b) => Formula::exists(q.dual(), formula_dual(b)),
        Formula::Imply(a, b) => Formula::imply(formula_dual(a), formula_dual(b)),
        Formula::And(a, b) => Formula::and(formula_dual(a), formula_dual(b)),
        other => other.clone(),
    }
}

/// Recomputes every quantifier quiver's vertex count from its arcs.
pub fn fill_vertices(f: &Formula) -> Formula {
    match f {
        Formula::Forall(q, b) => Formula::forall(Quiver::from_arcs(q.arcs.clone()), fill_vertices(b)),
        Formula::Exists(q, b) => Formula::exists(Quiver::from_arcs(q.arcs.clone()), fill_vertices(b)),
        Formula::Imply(a, b) => Formula::imply(fill_vertices(a), fill_vertices(b)),
        Formula::And(a, b) => Formula::and(fill_vertices(a), fill_vertices(b)),
        other => other.clone(),
    }
}

pub fn dual_context(ctx: &[Quiver]) -> Vec<Quiver> {
    ctx.iter().map(Quiver::dual).collect()
}

impl Predicate {
    pub fn new(arity: Vec<Quiver>, body: Formula) -> Self {
        Predicate { arity, body }
    }

    pub fn dual(&self) -> Predicate {
        Predicate { arity: dual_context(&self.arity), body: formula_dual(&self.body) }
    }
}

/// Instantiates the parameters of `p` with `args`, sort-checked in `ctx`.
pub fn apply_predicate(ctx: &[Quiver], p: &Predicate, args: &[Term]) -> Result<Formula, SortError> {
    if args.len() != p.arity.len() {
        return Err(SortError::ArityMismatch { expected: p.arity.len(), found: args.len() });
    }
    for (index, (arg, expected)) in args.iter().zip(&p.arity).enumerate() {
        let found = term_sort(ctx, arg)?;
        if &found != expected {
            return Err(SortError::ArgSort { index, expected: expected.clone(), found });
        }
    }
    Ok(p.body.substitute(args))
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(k) => write!(f, "${k}"),
            Term::Restr(sq, t) => write!(f, "restr({:?};{:?}, {t})", sq.vertices, sq.arcs),
        }
    }
}

impl Formula {
    fn level(&self) -> u8 {
        match self {
            Formula::Forall(..) | Formula::Exists(..) => 0,
            Formula::Imply(..) => 1,
            Formula::And(..) => 2,
            _ => 3,
        }
    }

    fn write_at(&self, out: &mut fmt::Formatter<'_>, min: u8, tail: bool) -> fmt::Result {
        let lvl = self.level();
        if lvl < min && !(lvl == 0 && tail) {
            out.write_str("(")?;
            self.write_at(out, 0, true)?;
            return out.write_str(")");
        }
        match self {
            Formula::Forall(q, b) => {
                write!(out, "forall {q} . ")?;
                b.write_at(out, 0, true)
            }
            Formula::Exists(q, b) => {
                write!(out, "exists {q} . ")?;
                b.write_at(out, 0, true)
            }
            Formula::Imply(a, b) => {
                a.write_at(out, 2, false)?;
                out.write_str(" -> ")?;
                b.write_at(out, 1, tail)
            }
            Formula::And(a, b) => {
                a.write_at(out, 3, false)?;
                out.write_str(" /\\ ")?;
                b.write_at(out, 2, tail)
            }
            Formula::FTrue => out.write_str("true"),
            Formula::Commute(t) => write!(out, "commute({t})"),
            Formula::EqD(a, b) => write!(out, "{a} == {b}"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0, true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{comp_q, map_q, mono_q};

    fn restr_a(host: &Quiver, arcs: Vec<usize>, t: Term) -> Term {
        Term::restr(Subquiver::spanned_by_arcs(host, arcs).unwrap(), t)
    }

    #[test]
    fn term_sorts() {
        let t = restr_a(&mono_q(), vec![3], Term::var(0));
        assert_eq!(term_sort(&[mono_q()], &t).unwrap(), map_q());
        assert_eq!(term_sort(&[comp_q()], &Term::var(0)).unwrap(), comp_q());
        assert_eq!(term_sort(&[], &Term::var(0)), Err(SortError::UnboundVar(0)));
        let bad = Term::restr(Subquiver::new(vec![0], vec![0]), Term::var(0));
        assert!(matches!(term_sort(&[comp_q()], &bad), Err(SortError::BadRestr(_))));
    }

    #[test]
    fn well_formedness() {
        assert!(formula_wf(&[], &Formula::FTrue));
        assert!(formula_wf(&[map_q()], &Formula::FTrue));
        assert!(!formula_wf(&[], &Formula::commute(Term::var(0))));
        assert!(formula_wf(&[], &Formula::forall(comp_q(), Formula::commute(Term::var(0)))));
        let cyclic = Quiver::new(2, vec![(0, 1), (1, 0)]);
        assert_eq!(
            check_formula(&[], &Formula::forall(cyclic.clone(), Formula::FTrue)),
            Err(SortError::CyclicQuiver(cyclic))
        );
        let mismatched = Formula::eqd(Term::var(0), Term::var(1));
        assert!(matches!(check_formula(&[map_q(), comp_q()], &mismatched), Err(SortError::EqDSorts(..))));
    }

    #[test]
    fn substitution_shifts_under_binders() {
        // forall Q . $0 == $1, with $1 := restr(..., $3) in the outer context.
        let body = Formula::forall(map_q(), Formula::eqd(Term::var(0), Term::var(1)));
        let arg = restr_a(&comp_q(), vec![0], Term::var(3));
        let out = body.instantiate(&arg);
        assert_eq!(out, Formula::forall(map_q(), Formula::eqd(Term::var(0), restr_a(&comp_q(), vec![0], Term::var(4)))));
        // Free variables above the substituted one are lowered.
        let lowered = Formula::commute(Term::var(2)).instantiate(&Term::var(0));
        assert_eq!(lowered, Formula::commute(Term::var(1)));
    }

    #[test]
    fn predicate_application_checks_sorts() {
        let p = Predicate::new(vec![map_q()], Formula::commute(Term::var(0)));
        let arg = restr_a(&comp_q(), vec![1], Term::var(0));
        assert_eq!(apply_predicate(&[comp_q()], &p, std::slice::from_ref(&arg)).unwrap(), Formula::commute(arg));
        assert!(matches!(apply_predicate(&[comp_q()], &p, &[Term::var(0)]), Err(SortError::ArgSort { .. })));
        assert!(matches!(apply_predicate(&[comp_q()], &p, &[]), Err(SortError::ArityMismatch { .. })));
        let nullary = Predicate::new(vec![], Formula::FTrue);
        assert_eq!(apply_predicate(&[], &nullary, &[]).unwrap(), Formula::FTrue);
    }

    #[test]
    fn flattening_composes_restrictions() {
        let inner = Subquiver::new(vec![0, 1, 2], vec![0, 2, 3]);
        let outer = Subquiver::new(vec![1, 2], vec![2]);
        let t = Term::restr(outer, Term::restr(inner, Term::var(0)));
        assert_eq!(flatten_term(&[mono_q()], &t).unwrap(), (0, Subquiver::new(vec![1, 2], vec![3])));
    }

    #[test]
    fn dual_only_touches_quivers() {
        let f = Formula::forall(comp_q(), Formula::imply(Formula::commute(Term::var(0)), Formula::FTrue));
        let d = formula_dual(&f);
        assert_eq!(d, Formula::forall(comp_q().dual(), Formula::imply(Formula::commute(Term::var(0)), Formula::FTrue)));
        assert_eq!(formula_dual(&d), f);
        assert_eq!(formula_dual(&Formula::FTrue), Formula::FTrue);
    }

    #[test]
    fn printing_respects_precedence() {
        let c = |k| Formula::commute(Term::var(k));
        let f = Formula::imply(Formula::imply(c(0), c(1)), Formula::and(c(0), Formula::forall(map_q(), c(0))));
        assert_eq!(f.to_string(), "(commute($0) -> commute($1)) -> commute($0) /\\ forall {arcs: (0,1)} . commute($0)");
        let g = Formula::and(Formula::forall(map_q(), c(0)), Formula::FTrue);
        assert_eq!(g.to_string(), "(forall {arcs: (0,1)} . commute($0)) /\\ true");
    }

    #[test]
    fn json_ast_is_tagged() {
        let f = Formula::commute(Term::restr(Subquiver::new(vec![0, 1], vec![0]), Term::var(0)));
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"{"tag":"Commute","children":{"tag":"Restr","children":[{"v":[0,1],"a":[0]},{"tag":"Var","children":0}]}}"#);
        assert_eq!(serde_json::from_str::<Formula>(&json).unwrap(), f);
    }
}
