//! Reified proofs: sequents, tactics and the proof checker.
//!
//! A tactic is a partial map on sequents. A proof is a list of tactics; it
//! proves a closed formula when every tactic applies in turn, starting from
//! the sequent with no context and no premises, and the last goal is `true`.
//! Every tactic has a dual acting on the dual sequent, which is what makes
//! biproofs checkable.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::commerge::{commerge, Assumption};
use crate::error::QuiverError;
use crate::formula::{check_formula, dual_context, flatten_term, formula_dual, term_sort, Formula, SortError, Term, TermExpr};
use crate::paths::{closure_with_cap, subquiver_bipaths, Bipath, DEFAULT_PATH_CAP};
use crate::quiver::{Quiver, Subquiver};

/// Context (innermost first), premises and a single goal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sequent {
    pub context: Vec<Quiver>,
    pub premises: Vec<Formula>,
    pub goal: Formula,
}

impl Sequent {
    pub fn of_formula(f: Formula) -> Self {
        Sequent { context: Vec::new(), premises: Vec::new(), goal: f }
    }

    /// `forall ctx . (H1 /\ (H2 /\ ... true)) -> goal`, outermost binder last
    /// in the context.
    pub fn to_formula(&self) -> Formula {
        let hyps = self.premises.iter().rev().fold(Formula::FTrue, |acc, h| Formula::and(h.clone(), acc));
        let body = Formula::imply(hyps, self.goal.clone());
        self.context.iter().fold(body, |acc, q| Formula::forall(q.clone(), acc))
    }

    pub fn check(&self) -> Result<(), SortError> {
        check_formula(&[], &self.to_formula())
    }

    pub fn is_wf(&self) -> bool {
        self.check().is_ok()
    }

    pub fn dual(&self) -> Sequent {
        Sequent {
            context: dual_context(&self.context),
            premises: self.premises.iter().map(formula_dual).collect(),
            goal: formula_dual(&self.goal),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.goal == Formula::FTrue
    }
}

pub fn sequent_of_formula(f: Formula) -> Sequent {
    Sequent::of_formula(f)
}

pub fn formula_of_sequent(s: &Sequent) -> Formula {
    s.to_formula()
}

pub fn dual_sequent(s: &Sequent) -> Sequent {
    s.dual()
}

/// Which side of an equation is replaced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Left side replaced by right side.
    Forward,
    /// Right side replaced by left side.
    Backward,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RewriteTarget {
    Goal,
    Premise(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "tactic", content = "args")]
pub enum Tactic {
    /// Moves the outer universal quantifier of the goal into the context.
    Intro,
    /// Moves the antecedent of the goal into the premises.
    IntroImply,
    /// Closes a goal equal to premise `i`.
    Assumption(usize),
    /// Instantiates the existential goal.
    Witness(TermExpr),
    /// Proves the left conjunct with the nested proof.
    AndIntro(Proof),
    /// Instantiates the universal premise `i`.
    SpecializePremise(usize, TermExpr),
    /// Modus ponens on premise `i` with premise `j`.
    DetachPremise(usize, usize),
    /// Rewrites with the equation in premise `eq`.
    RewriteEqD { eq: usize, direction: Direction, occurrence: usize, target: RewriteTarget },
    /// Closes a commutation goal from commutation premises.
    Comauto,
    ApplyLemma(String),
    ApplyDualLemma(String),
    TrueIntro,
    /// Closes `t == u` when both sides restrict the same variable identically.
    EqRefl,
    /// Glues the two diagrams of equation `k` along their common part.
    Glue(usize),
    /// Adds to diagram `i` an arc composing the given path.
    Compose(usize, Vec<usize>),
    /// Modus ponens on premise `i`, its antecedent proved by the nested proof.
    ElimImply(usize, Proof),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Proof(pub Vec<Tactic>);

impl Proof {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dual(&self) -> Proof {
        Proof(self.0.iter().map(dual_tactic).collect())
    }
}

impl From<Vec<Tactic>> for Proof {
    fn from(v: Vec<Tactic>) -> Self {
        Proof(v)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Biproof {
    pub primal: Proof,
    pub dual: Proof,
}

impl Biproof {
    /// Pairs `pf` with its tactic-wise dual.
    pub fn from_primal(pf: Proof) -> Self {
        let dual = pf.dual();
        Biproof { primal: pf, dual }
    }
}

/// The tactic acting on dual sequents as `t` acts on primal ones.
pub fn dual_tactic(t: &Tactic) -> Tactic {
    match t {
        Tactic::AndIntro(pf) => Tactic::AndIntro(pf.dual()),
        Tactic::ElimImply(i, pf) => Tactic::ElimImply(*i, pf.dual()),
        Tactic::Compose(i, steps) => Tactic::Compose(*i, steps.iter().rev().copied().collect()),
        Tactic::ApplyLemma(n) => Tactic::ApplyDualLemma(n.clone()),
        Tactic::ApplyDualLemma(n) => Tactic::ApplyLemma(n.clone()),
        other => other.clone(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TacticError {
    #[error("goal is not {0}")]
    GoalShape(&'static str),
    #[error("no premise {0}")]
    NoPremise(usize),
    #[error("premise {index} is not {expected}")]
    PremiseShape { index: usize, expected: &'static str },
    #[error("{0}")]
    Mismatch(String),
    #[error(transparent)]
    Sort(#[from] SortError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error("unknown lemma `{0}`")]
    UnknownLemma(String),
    #[error("nested proof failed: {0}")]
    Nested(Box<ProofError>),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("statement is ill-formed: {0}")]
    IllFormed(SortError),
    #[error("step {step} failed: {error}")]
    Step { step: usize, error: TacticError },
    #[error("proof ends with open goal {0}")]
    Unfinished(Formula),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BiproofError {
    #[error("primal has {primal} steps, dual has {dual}")]
    LengthMismatch { primal: usize, dual: usize },
    #[error("step {0} of the dual proof is not the dual of the primal step")]
    NotDual(usize),
    #[error("primal and dual verdicts differ")]
    VerdictMismatch,
}

type TResult<T> = Result<T, TacticError>;

/// A proved statement, with an optional proof of its dual.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma {
    pub formula: Formula,
    pub proof: Proof,
    pub dual_proof: Option<Proof>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("lemma `{0}` already exists")]
    Duplicate(String),
    #[error("proof of `{name}` rejected: {error}")]
    Rejected { name: String, error: Box<ProofError> },
    #[error("dual proof of `{name}` rejected: {error}")]
    DualRejected { name: String, error: String },
}

/// Named lemmas; every stored proof has been checked on insertion.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LemmaRegistry {
    lemmas: BTreeMap<String, Lemma>,
}

impl LemmaRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Option<&Lemma> {
        self.lemmas.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.lemmas.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Lemma)> {
        self.lemmas.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.lemmas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lemmas.is_empty()
    }

    /// Checks `proof` (and `dual_proof` as the dual half of a biproof)
    /// against the lemmas already present, then stores the lemma.
    pub fn register(&mut self, name: &str, formula: Formula, proof: Proof, dual_proof: Option<Proof>) -> Result<(), RegistryError> {
        if self.lemmas.contains_key(name) {
            return Err(RegistryError::Duplicate(name.to_string()));
        }
        let kernel = Kernel::new(self);
        kernel
            .check_proof_report(&formula, &proof)
            .map_err(|error| RegistryError::Rejected { name: name.to_string(), error: Box::new(error) })?;
        if let Some(dual) = &dual_proof {
            let bp = Biproof { primal: proof.clone(), dual: dual.clone() };
            match kernel.check_biproof(&formula, &bp) {
                Ok(true) => {}
                Ok(false) => {
                    return Err(RegistryError::DualRejected { name: name.to_string(), error: "dual proof does not check".into() })
                }
                Err(e) => return Err(RegistryError::DualRejected { name: name.to_string(), error: e.to_string() }),
            }
        }
        self.lemmas.insert(name.to_string(), Lemma { formula, proof, dual_proof });
        Ok(())
    }
}

/// The proof checker, parameterized by the lemmas it may cite.
#[derive(Clone, Copy, Debug)]
pub struct Kernel<'r> {
    pub lemmas: &'r LemmaRegistry,
    pub path_cap: usize,
}

static EMPTY_REGISTRY: std::sync::OnceLock<LemmaRegistry> = std::sync::OnceLock::new();

impl Default for Kernel<'static> {
    fn default() -> Self {
        Kernel::new(EMPTY_REGISTRY.get_or_init(LemmaRegistry::new))
    }
}

fn premise(s: &Sequent, i: usize) -> TResult<&Formula> {
    s.premises.get(i).ok_or(TacticError::NoPremise(i))
}

fn mismatch<T>(msg: impl Into<String>) -> TResult<T> {
    Err(TacticError::Mismatch(msg.into()))
}

/// Pushes a new innermost variable of sort `q`.
fn with_new_var(s: &Sequent, q: Quiver) -> Sequent {
    let mut context = Vec::with_capacity(s.context.len() + 1);
    context.push(q);
    context.extend_from_slice(&s.context);
    Sequent { context, premises: s.premises.iter().map(|p| p.shift(1)).collect(), goal: s.goal.shift(1) }
}

/// Replaces the `occurrence`-th (1-based) subterm equal to `src`, counted in
/// left-to-right preorder over the atoms of `f`. Under binders `src` and
/// `dst` are shifted accordingly.
fn rewrite_formula(f: &Formula, src: &Term, dst: &Term, occurrence: usize) -> Option<Formula> {
    let mut seen = 0;
    let mut done = false;
    let out = f.map_terms(0, &mut |t, depth| {
        if done {
            return t.clone();
        }
        let (s, d) = (src.shift(depth, 0), dst.shift(depth, 0));
        rewrite_term(t, &s, &d, occurrence, &mut seen, &mut done)
    });
    done.then_some(out)
}

fn rewrite_term(t: &Term, src: &Term, dst: &Term, occurrence: usize, seen: &mut usize, done: &mut bool) -> Term {
    if *done {
        return t.clone();
    }
    if t == src {
        *seen += 1;
        if *seen == occurrence {
            *done = true;
            return dst.clone();
        }
    }
    match t {
        Term::Var(_) => t.clone(),
        Term::Restr(sq, inner) => Term::restr(sq.clone(), rewrite_term(inner, src, dst, occurrence, seen, done)),
    }
}

/// Single-arc equations `restr([x,y];[e1], $r) == restr([x,y];[e2], $r)` as
/// bipaths of the host.
fn single_arc_bipath(host: &Quiver, a: &Subquiver, b: &Subquiver) -> Option<Bipath> {
    if a.vertices != b.vertices || a.arcs.len() != 1 || b.arcs.len() != 1 || a.vertices.len() != 2 {
        return None;
    }
    let (e1, e2) = (a.arcs[0], b.arcs[0]);
    let (s, t) = host.arcs[e1];
    (e1 != e2 && host.arcs[e2] == (s, t)).then(|| Bipath::new(s, t, vec![e1], vec![e2]))
}

impl<'r> Kernel<'r> {
    pub fn new(lemmas: &'r LemmaRegistry) -> Self {
        Kernel { lemmas, path_cap: DEFAULT_PATH_CAP }
    }

    pub fn with_path_cap(mut self, cap: usize) -> Self {
        self.path_cap = cap;
        self
    }

    /// Runs `pf` from `s`, returning the final sequent.
    pub fn run(&self, s: &Sequent, pf: &Proof) -> Result<Sequent, ProofError> {
        let mut cur = s.clone();
        for (step, tac) in pf.0.iter().enumerate() {
            cur = self.apply_tactic(tac, &cur).map_err(|error| ProofError::Step { step, error })?;
        }
        Ok(cur)
    }

    fn close(&self, s: &Sequent, pf: &Proof) -> TResult<()> {
        let last = self.run(s, pf).map_err(|e| TacticError::Nested(Box::new(e)))?;
        if last.is_closed() {
            Ok(())
        } else {
            Err(TacticError::Nested(Box::new(ProofError::Unfinished(last.goal))))
        }
    }

    pub fn check_proof_report(&self, f: &Formula, pf: &Proof) -> Result<(), ProofError> {
        check_formula(&[], f).map_err(ProofError::IllFormed)?;
        let last = self.run(&Sequent::of_formula(f.clone()), pf)?;
        if last.is_closed() {
            Ok(())
        } else {
            Err(ProofError::Unfinished(last.goal))
        }
    }

    pub fn check_proof(&self, f: &Formula, pf: &Proof) -> bool {
        self.check_proof_report(f, pf).is_ok()
    }

    /// Checks the pairing, then both halves; the verdicts must agree.
    pub fn check_biproof(&self, f: &Formula, bp: &Biproof) -> Result<bool, BiproofError> {
        if bp.primal.len() != bp.dual.len() {
            return Err(BiproofError::LengthMismatch { primal: bp.primal.len(), dual: bp.dual.len() });
        }
        if let Some(i) = (0..bp.primal.len()).find(|&i| dual_tactic(&bp.primal.0[i]) != bp.dual.0[i]) {
            return Err(BiproofError::NotDual(i));
        }
        let primal = self.check_proof(f, &bp.primal);
        let dual = self.check_proof(&formula_dual(f), &bp.dual);
        if primal != dual {
            return Err(BiproofError::VerdictMismatch);
        }
        Ok(primal)
    }

    pub fn apply_tactic(&self, tac: &Tactic, s: &Sequent) -> TResult<Sequent> {
        match tac {
            Tactic::Intro => match &s.goal {
                Formula::Forall(q, body) => {
                    let mut next = with_new_var(s, q.clone());
                    next.goal = (**body).clone();
                    Ok(next)
                }
                _ => Err(TacticError::GoalShape("a universal statement")),
            },
            Tactic::IntroImply => match &s.goal {
                Formula::Imply(h, g) => {
                    let mut next = s.clone();
                    next.premises.push((**h).clone());
                    next.goal = (**g).clone();
                    Ok(next)
                }
                _ => Err(TacticError::GoalShape("an implication")),
            },
            Tactic::Assumption(i) => {
                if premise(s, *i)? == &s.goal {
                    Ok(Sequent { goal: Formula::FTrue, ..s.clone() })
                } else {
                    mismatch(format!("premise {i} differs from the goal"))
                }
            }
            Tactic::Witness(t) => match &s.goal {
                Formula::Exists(q, body) => {
                    let term = t.resolve(&s.context)?;
                    let sort = term_sort(&s.context, &term)?;
                    if &sort != q {
                        return mismatch(format!("witness has sort {sort}, expected {q}"));
                    }
                    Ok(Sequent { goal: body.instantiate(&term), ..s.clone() })
                }
                _ => Err(TacticError::GoalShape("an existential statement")),
            },
            Tactic::AndIntro(pf) => match &s.goal {
                Formula::And(a, b) => {
                    self.close(&Sequent { goal: (**a).clone(), ..s.clone() }, pf)?;
                    Ok(Sequent { goal: (**b).clone(), ..s.clone() })
                }
                _ => Err(TacticError::GoalShape("a conjunction")),
            },
            Tactic::SpecializePremise(i, t) => match premise(s, *i)? {
                Formula::Forall(q, body) => {
                    let term = t.resolve(&s.context)?;
                    let sort = term_sort(&s.context, &term)?;
                    if &sort != q {
                        return mismatch(format!("instance has sort {sort}, expected {q}"));
                    }
                    let mut next = s.clone();
                    next.premises[*i] = body.instantiate(&term);
                    Ok(next)
                }
                _ => Err(TacticError::PremiseShape { index: *i, expected: "a universal statement" }),
            },
            Tactic::DetachPremise(i, j) => match premise(s, *i)? {
                Formula::Imply(a, b) => {
                    if i == j || premise(s, *j)? != &**a {
                        return mismatch(format!("premise {j} is not the antecedent of premise {i}"));
                    }
                    let mut next = s.clone();
                    next.premises[*i] = (**b).clone();
                    Ok(next)
                }
                _ => Err(TacticError::PremiseShape { index: *i, expected: "an implication" }),
            },
            Tactic::ElimImply(i, pf) => match premise(s, *i)? {
                Formula::Imply(a, b) => {
                    self.close(&Sequent { goal: (**a).clone(), ..s.clone() }, pf)?;
                    let mut next = s.clone();
                    next.premises[*i] = (**b).clone();
                    Ok(next)
                }
                _ => Err(TacticError::PremiseShape { index: *i, expected: "an implication" }),
            },
            Tactic::RewriteEqD { eq, direction, occurrence, target } => {
                let Formula::EqD(l, r) = premise(s, *eq)? else {
                    return Err(TacticError::PremiseShape { index: *eq, expected: "an equation" });
                };
                let (src, dst) = match direction {
                    Direction::Forward => (l, r),
                    Direction::Backward => (r, l),
                };
                let mut next = s.clone();
                let slot = match target {
                    RewriteTarget::Goal => &mut next.goal,
                    RewriteTarget::Premise(k) if k == eq => return mismatch("cannot rewrite an equation with itself"),
                    RewriteTarget::Premise(k) => next.premises.get_mut(*k).ok_or(TacticError::NoPremise(*k))?,
                };
                *slot = rewrite_formula(slot, src, dst, *occurrence)
                    .ok_or_else(|| TacticError::Mismatch(format!("occurrence {occurrence} of {src} not found")))?;
                next.check()?;
                Ok(next)
            }
            Tactic::Comauto => self.comauto(s),
            Tactic::ApplyLemma(name) => {
                let lemma = self.lemmas.get(name).ok_or_else(|| TacticError::UnknownLemma(name.clone()))?;
                if lemma.formula == s.goal {
                    Ok(Sequent { goal: Formula::FTrue, ..s.clone() })
                } else {
                    mismatch(format!("goal is not the statement of `{name}`"))
                }
            }
            Tactic::ApplyDualLemma(name) => {
                let lemma = self.lemmas.get(name).ok_or_else(|| TacticError::UnknownLemma(name.clone()))?;
                if formula_dual(&lemma.formula) == s.goal {
                    Ok(Sequent { goal: Formula::FTrue, ..s.clone() })
                } else {
                    mismatch(format!("goal is not the dual statement of `{name}`"))
                }
            }
            Tactic::TrueIntro => match s.goal {
                Formula::FTrue => Ok(s.clone()),
                _ => Err(TacticError::GoalShape("true")),
            },
            Tactic::EqRefl => match &s.goal {
                Formula::EqD(a, b) => {
                    if a == b || flatten_term(&s.context, a)? == flatten_term(&s.context, b)? {
                        Ok(Sequent { goal: Formula::FTrue, ..s.clone() })
                    } else {
                        mismatch("the two sides restrict different parts")
                    }
                }
                _ => Err(TacticError::GoalShape("an equation")),
            },
            Tactic::Glue(k) => self.glue(s, *k),
            Tactic::Compose(i, steps) => self.compose(s, *i, steps),
        }
    }

    fn comauto(&self, s: &Sequent) -> TResult<Sequent> {
        let Formula::Commute(t) = &s.goal else {
            return Err(TacticError::GoalShape("a commutation"));
        };
        let (root, goal_sq) = flatten_term(&s.context, t)?;
        let host = &s.context[root];
        let mut subquivers = Vec::new();
        let mut bipaths = Vec::new();
        for p in &s.premises {
            match p {
                Formula::Commute(u) => {
                    if let Ok((r, sq)) = flatten_term(&s.context, u) {
                        if r == root {
                            subquivers.push(sq);
                        }
                    }
                }
                Formula::EqD(a, b) => {
                    if let (Ok((ra, sa)), Ok((rb, sb))) = (flatten_term(&s.context, a), flatten_term(&s.context, b)) {
                        if ra == root && rb == root {
                            bipaths.extend(single_arc_bipath(host, &sa, &sb));
                        }
                    }
                }
                _ => {}
            }
        }

        // Work inside the union of everything mentioned.
        let mut vs: BTreeSet<usize> = goal_sq.vertices.iter().copied().collect();
        let mut arcs: BTreeSet<usize> = goal_sq.arcs.iter().copied().collect();
        for sq in &subquivers {
            vs.extend(&sq.vertices);
            arcs.extend(&sq.arcs);
        }
        for b in &bipaths {
            vs.extend([b.u, b.v]);
            arcs.extend(b.left.iter().chain(&b.right));
        }
        let union = Subquiver::new(vs.into_iter().collect(), arcs.into_iter().collect());
        let uq = host.restr(&union)?;
        let vpos = |x: usize| union.vertices.binary_search(&x).expect("vertex in union");
        let apos = |a: usize| union.arcs.binary_search(&a).expect("arc in union");
        let local = |sq: &Subquiver| {
            Subquiver::new(sq.vertices.iter().map(|&x| vpos(x)).collect(), sq.arcs.iter().map(|&a| apos(a)).collect())
        };
        let mut assms: Vec<Assumption> = subquivers.iter().map(|sq| Assumption::Subquiver(local(sq))).collect();
        assms.extend(bipaths.iter().map(|b| {
            Assumption::Bipath(Bipath::new(
                vpos(b.u),
                vpos(b.v),
                b.left.iter().map(|&a| apos(a)).collect(),
                b.right.iter().map(|&a| apos(a)).collect(),
            ))
        }));
        let closed = Sequent { goal: Formula::FTrue, ..s.clone() };
        if commerge(&uq, &assms)? {
            return Ok(closed);
        }
        let mut generators = Vec::new();
        for a in &assms {
            match a {
                Assumption::Subquiver(sq) => generators.extend(subquiver_bipaths(&uq, sq)?),
                Assumption::Bipath(b) => generators.push(b.clone()),
            }
        }
        let partition = closure_with_cap(&uq, &generators, self.path_cap)?;
        let wanted = subquiver_bipaths(&uq, &local(&goal_sq))?;
        if wanted.iter().all(|b| partition.related(b.u, b.v, &b.left, &b.right)) {
            Ok(closed)
        } else {
            mismatch("commutation does not follow from the premises")
        }
    }

    fn glue(&self, s: &Sequent, k: usize) -> TResult<Sequent> {
        let Formula::EqD(a, b) = premise(s, k)? else {
            return Err(TacticError::PremiseShape { index: k, expected: "an equation" });
        };
        let (i, s1) = flatten_term(&s.context, a)?;
        let (j, s2) = flatten_term(&s.context, b)?;
        let (q1, q2) = (&s.context[i], &s.context[j]);

        let mut vmap = vec![usize::MAX; q2.n];
        for (x, y) in s2.vertices.iter().zip(&s1.vertices) {
            vmap[*x] = *y;
        }
        let mut n = q1.n;
        for slot in vmap.iter_mut().filter(|v| **v == usize::MAX) {
            *slot = n;
            n += 1;
        }
        let mut arcs = q1.arcs.clone();
        let mut amap = vec![usize::MAX; q2.arcs.len()];
        for (x, y) in s2.arcs.iter().zip(&s1.arcs) {
            amap[*x] = *y;
        }
        for (e, slot) in amap.iter_mut().enumerate() {
            if *slot == usize::MAX {
                let (src, tgt) = q2.arcs[e];
                arcs.push((vmap[src], vmap[tgt]));
                *slot = arcs.len() - 1;
            }
        }
        let glued = Quiver::new(n, arcs);
        if !glued.is_acyclic() {
            return mismatch("gluing creates a cycle");
        }
        let e1 = Subquiver::new((0..q1.n).collect(), (0..q1.arcs.len()).collect());
        let e2 = Subquiver::new(vmap, amap);
        let mut next = with_new_var(s, glued);
        next.premises.push(Formula::eqd(Term::restr(e1, Term::var(0)), Term::var(i + 1)));
        next.premises.push(Formula::eqd(Term::restr(e2, Term::var(0)), Term::var(j + 1)));
        Ok(next)
    }

    fn compose(&self, s: &Sequent, i: usize, steps: &[usize]) -> TResult<Sequent> {
        let q = s.context.get(i).ok_or(SortError::UnboundVar(i))?;
        let Some(&first) = steps.first() else {
            return mismatch("empty path");
        };
        if first >= q.arcs.len() || steps.iter().any(|&a| a >= q.arcs.len()) {
            return mismatch("arc index out of bound");
        }
        let (u, v) = (q.src(first), q.tgt(*steps.last().unwrap()));
        if !q.is_path(u, steps, v) {
            return mismatch(format!("{steps:?} is not a path"));
        }
        let mut arcs = q.arcs.clone();
        arcs.push((u, v));
        let extended = Quiver::new(q.n, arcs);
        let fresh = q.arcs.len();
        let old = Subquiver::new((0..q.n).collect(), (0..fresh).collect());
        let mut path_vertices: Vec<usize> = steps.iter().map(|&a| q.src(a)).chain([v]).collect();
        path_vertices.sort_unstable();
        let mut path_arcs = steps.to_vec();
        path_arcs.sort_unstable();
        path_arcs.push(fresh);
        let mut next = with_new_var(s, extended);
        next.premises.push(Formula::eqd(Term::restr(old, Term::var(0)), Term::var(i + 1)));
        next.premises.push(Formula::commute(Term::restr(Subquiver::new(path_vertices, path_arcs), Term::var(0))));
        Ok(next)
    }

    /// Names of the tactics whose guard matches the shape of `s`.
    pub fn hints(&self, s: &Sequent) -> Vec<String> {
        let mut out = Vec::new();
        match &s.goal {
            Formula::Forall(..) => out.push("intro".to_string()),
            Formula::Imply(..) => out.push("intro_imply".to_string()),
            Formula::Exists(..) => out.push("witness".to_string()),
            Formula::And(..) => out.push("and_intro".to_string()),
            Formula::Commute(_) => out.push("comauto".to_string()),
            Formula::EqD(..) => out.push("eq_refl".to_string()),
            Formula::FTrue => out.push("qed".to_string()),
        }
        for (i, p) in s.premises.iter().enumerate() {
            if p == &s.goal {
                out.push(format!("assumption {i}"));
            }
            match p {
                Formula::Forall(..) => out.push(format!("specialize {i}")),
                Formula::Imply(a, _) => {
                    out.push(format!("elim_imply {i}"));
                    if let Some(j) = s.premises.iter().position(|q| q == &**a) {
                        out.push(format!("detach {i} {j}"));
                    }
                }
                Formula::EqD(..) => {
                    out.push(format!("rewrite {i}"));
                    out.push(format!("glue {i}"));
                }
                _ => {}
            }
        }
        for (name, lemma) in self.lemmas.iter() {
            if lemma.formula == s.goal {
                out.push(format!("apply_lemma {name}"));
            }
            if formula_dual(&lemma.formula) == s.goal {
                out.push(format!("apply_dual_lemma {name}"));
            }
        }
        out
    }
}

/// [`Kernel::check_proof`] with no lemmas available.
pub fn check_proof(f: &Formula, pf: &Proof) -> bool {
    Kernel::default().check_proof(f, pf)
}

pub fn apply_tactic(tac: &Tactic, s: &Sequent) -> Result<Sequent, TacticError> {
    Kernel::default().apply_tactic(tac, s)
}

pub fn check_biproof(f: &Formula, bp: &Biproof) -> Result<bool, BiproofError> {
    Kernel::default().check_biproof(f, bp)
}
