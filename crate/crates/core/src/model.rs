//! Executable diagram models.
//!
//! A [`DiagramModel`] supplies the carrier of diagrams used to interpret
//! formulas. [`FinCatModel`] decorates quivers with the objects and morphisms
//! of a finite category given by tables; since such a category has finitely
//! many diagrams on any quiver, quantifiers can be evaluated exhaustively.

use std::cell::RefCell;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{Formula, Predicate, Term};
use crate::quiver::{Path, Quiver, Subquiver};

/// Default bound on the number of diagrams enumerated for one quantifier.
pub const DEFAULT_DIAGRAM_CAP: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("{count} diagrams exceed the cap of {cap}")]
    CapExceeded { count: usize, cap: usize },
    #[error("diagram shape has a cycle")]
    Cycle,
    #[error("ill-formed category: {0}")]
    IllFormed(String),
}

/// The interface formulas are evaluated against.
pub trait DiagramModel {
    type Diagram: Clone;

    fn to_quiver(&self, d: &Self::Diagram) -> Quiver;

    /// `None` when `sq` does not fit the diagram's quiver.
    fn restrict(&self, sq: &Subquiver, d: &Self::Diagram) -> Option<Self::Diagram>;

    fn eq_d(&self, a: &Self::Diagram, b: &Self::Diagram) -> bool;

    /// Whether the paths `p` and `q` from `u` to `v` are related.
    fn path_related(&self, d: &Self::Diagram, u: usize, v: usize, p: &[usize], q: &[usize]) -> bool;

    /// Every diagram whose quiver is `q`.
    fn enumerate(&self, q: &Quiver) -> Result<Vec<Self::Diagram>, ModelError>;

    /// The path relation of `d` is full.
    fn commute(&self, d: &Self::Diagram) -> Result<bool, ModelError> {
        let q = self.to_quiver(d);
        with_path_groups(&q, |groups| {
            groups.iter().all(|(u, v, paths)| paths.iter().skip(1).all(|p| self.path_related(d, *u, *v, &paths[0], p)))
        })
    }
}

type PathGroups = Vec<(usize, usize, Vec<Vec<usize>>)>;

thread_local! {
    static PATH_GROUPS: RefCell<HashMap<Quiver, std::rc::Rc<PathGroups>>> = RefCell::new(HashMap::new());
}

/// Paths of `q` grouped by endpoints, skipping pairs with fewer than two.
fn with_path_groups<R>(q: &Quiver, f: impl FnOnce(&PathGroups) -> R) -> Result<R, ModelError> {
    let cached = PATH_GROUPS.with(|c| c.borrow().get(q).cloned());
    let groups = match cached {
        Some(g) => g,
        None => {
            let mut groups = Vec::new();
            for u in 0..q.n {
                for v in 0..q.n {
                    let paths = q.all_paths(u, v).map_err(|_| ModelError::Cycle)?;
                    if paths.len() > 1 {
                        groups.push((u, v, paths.into_iter().map(|p| p.steps).collect()));
                    }
                }
            }
            let g = std::rc::Rc::new(groups);
            PATH_GROUPS.with(|c| c.borrow_mut().insert(q.clone(), g.clone()));
            g
        }
    };
    Ok(f(&groups))
}

/// A finite category given by its tables.
///
/// `compose[g][f]` is `g ∘ f`, defined exactly when `tgt[f] == src[g]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinCat {
    pub objects: usize,
    pub src: Vec<usize>,
    pub tgt: Vec<usize>,
    pub identity: Vec<usize>,
    pub compose: Vec<Vec<Option<usize>>>,
}

impl FinCat {
    /// Builds a category whose first `objects` morphisms are the identities.
    /// `arrows` lists the other morphisms and `products` their composites as
    /// `(g, f, g∘f)`, numbering identities first.
    pub fn from_presentation(objects: usize, arrows: &[(usize, usize)], products: &[(usize, usize, usize)]) -> Self {
        let mut src: Vec<usize> = (0..objects).collect();
        let mut tgt: Vec<usize> = (0..objects).collect();
        for &(s, t) in arrows {
            src.push(s);
            tgt.push(t);
        }
        let m = src.len();
        let mut compose = vec![vec![None; m]; m];
        for f in 0..m {
            compose[f][src[f]] = Some(f);
            compose[tgt[f]][f] = Some(f);
        }
        for &(g, f, r) in products {
            compose[g][f] = Some(r);
        }
        FinCat { objects, src, tgt, identity: (0..objects).collect(), compose }
    }

    /// One object, its identity.
    pub fn trivial() -> Self {
        Self::from_presentation(1, &[], &[])
    }

    /// The total order `0 ≤ 1 ≤ … ≤ n-1` as a category.
    pub fn chain(n: usize) -> Self {
        let mut arrows = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                arrows.push((i, j));
            }
        }
        let id_of = |i: usize, j: usize| if i == j { i } else { n + arrows.iter().position(|&a| a == (i, j)).unwrap() };
        let mut products = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    products.push((id_of(j, k), id_of(i, j), id_of(i, k)));
                }
            }
        }
        Self::from_presentation(n, &arrows, &products)
    }

    /// Two objects with two distinct parallel arrows between them.
    pub fn parallel_pair() -> Self {
        Self::from_presentation(2, &[(0, 1), (0, 1)], &[])
    }

    /// The monoid `{1, a, z}` with `a·a = 1` and `z` absorbing; `z` is
    /// neither monic nor epic.
    pub fn monoid_with_zero() -> Self {
        let (one, a, z) = (0, 1, 2);
        Self::from_presentation(1, &[(0, 0), (0, 0)], &[(a, a, one), (a, z, z), (z, a, z), (z, z, z)])
    }

    /// `h, k : A -> B` coequalized by `f : B -> C`, so `f` is not monic.
    pub fn coequalized_pair() -> Self {
        let (h, k, f, m) = (3, 4, 5, 6);
        Self::from_presentation(3, &[(0, 1), (0, 1), (1, 2), (0, 2)], &[(f, h, m), (f, k, m)])
    }

    pub fn morphism_count(&self) -> usize {
        self.src.len()
    }

    pub fn comp(&self, g: usize, f: usize) -> Option<usize> {
        self.compose.get(g).and_then(|row| row.get(f)).copied().flatten()
    }

    /// Checks table shapes, typing of composites, unit laws and associativity.
    pub fn check(&self) -> Result<(), ModelError> {
        let bad = |msg: String| Err(ModelError::IllFormed(msg));
        let m = self.src.len();
        if self.tgt.len() != m || self.compose.len() != m || self.compose.iter().any(|r| r.len() != m) {
            return bad("table sizes disagree".into());
        }
        if self.identity.len() != self.objects {
            return bad("one identity per object expected".into());
        }
        if let Some(f) = (0..m).find(|&f| self.src[f] >= self.objects || self.tgt[f] >= self.objects) {
            return bad(format!("morphism {f} has an endpoint out of bound"));
        }
        for (x, &i) in self.identity.iter().enumerate() {
            if i >= m || self.src[i] != x || self.tgt[i] != x {
                return bad(format!("identity of object {x} is not an endomorphism of it"));
            }
        }
        for g in 0..m {
            for f in 0..m {
                match (self.tgt[f] == self.src[g], self.compose[g][f]) {
                    (true, Some(r)) if r < m && self.src[r] == self.src[f] && self.tgt[r] == self.tgt[g] => {}
                    (false, None) => {}
                    _ => return bad(format!("composite {g}∘{f} is missing or mistyped")),
                }
            }
        }
        for f in 0..m {
            if self.comp(f, self.identity[self.src[f]]) != Some(f) || self.comp(self.identity[self.tgt[f]], f) != Some(f) {
                return bad(format!("unit law fails for {f}"));
            }
        }
        for f in 0..m {
            for g in (0..m).filter(|&g| self.src[g] == self.tgt[f]) {
                let gf = self.compose[g][f].unwrap();
                for h in (0..m).filter(|&h| self.src[h] == self.tgt[g]) {
                    let hg = self.compose[h][g].unwrap();
                    if self.compose[h][gf] != self.compose[hg][f] {
                        return bad(format!("associativity fails for {h}∘{g}∘{f}"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_wf(&self) -> bool {
        self.check().is_ok()
    }

    /// The opposite category, with the same morphism numbering.
    pub fn opposite(&self) -> FinCat {
        let m = self.src.len();
        let compose = (0..m).map(|g| (0..m).map(|f| self.compose[f][g]).collect()).collect();
        FinCat { objects: self.objects, src: self.tgt.clone(), tgt: self.src.clone(), identity: self.identity.clone(), compose }
    }
}

/// The battery of small categories used to test soundness.
pub fn battery() -> Vec<(&'static str, FinCat)> {
    vec![
        ("trivial", FinCat::trivial()),
        ("chain3", FinCat::chain(3)),
        ("parallel_pair", FinCat::parallel_pair()),
        ("monoid_with_zero", FinCat::monoid_with_zero()),
        ("coequalized_pair", FinCat::coequalized_pair()),
    ]
}

/// A quiver decorated by objects and morphisms of a [`FinCat`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinCatDiagram {
    pub shape: Quiver,
    pub objects: Vec<usize>,
    pub morphisms: Vec<usize>,
}

impl FinCatDiagram {
    pub fn is_wf_in(&self, cat: &FinCat) -> bool {
        self.objects.len() == self.shape.n
            && self.morphisms.len() == self.shape.arcs.len()
            && self.objects.iter().all(|&x| x < cat.objects)
            && self.shape.arcs.iter().zip(&self.morphisms).all(|(&(s, t), &m)| {
                m < cat.morphism_count() && cat.src[m] == self.objects[s] && cat.tgt[m] == self.objects[t]
            })
    }
}

/// Composite of the decorations along `p`; the identity for an empty path.
pub fn path_composite(cat: &FinCat, d: &FinCatDiagram, p: &Path) -> usize {
    composite_steps(cat, d, p.u, &p.steps)
}

fn composite_steps(cat: &FinCat, d: &FinCatDiagram, u: usize, steps: &[usize]) -> usize {
    steps.iter().fold(cat.identity[d.objects[u]], |acc, &a| {
        cat.comp(d.morphisms[a], acc).expect("decorations along a path are composable")
    })
}

/// Finite categories seen as a model of diagrams.
#[derive(Clone, Debug)]
pub struct FinCatModel {
    pub cat: FinCat,
    pub cap: usize,
}

impl FinCatModel {
    pub fn new(cat: FinCat) -> Result<Self, ModelError> {
        cat.check()?;
        Ok(FinCatModel { cat, cap: DEFAULT_DIAGRAM_CAP })
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    /// The `mapQ` diagram carrying morphism `m`.
    pub fn arrow(&self, m: usize) -> FinCatDiagram {
        FinCatDiagram {
            shape: Quiver::new(2, vec![(0, 1)]),
            objects: vec![self.cat.src[m], self.cat.tgt[m]],
            morphisms: vec![m],
        }
    }
}

/// Every decoration of `q` by `cat`, in lexicographic order of vertex then
/// arc choices.
pub fn enumerate_diagrams(cat: &FinCat, q: &Quiver, cap: usize) -> Result<Vec<FinCatDiagram>, ModelError> {
    let mut out = Vec::new();
    let mut objects = vec![0; q.n];
    enumerate_objects(cat, q, 0, &mut objects, &mut out, cap)?;
    Ok(out)
}

fn enumerate_objects(
    cat: &FinCat,
    q: &Quiver,
    x: usize,
    objects: &mut Vec<usize>,
    out: &mut Vec<FinCatDiagram>,
    cap: usize,
) -> Result<(), ModelError> {
    if x == q.n {
        let mut morphisms = vec![0; q.arcs.len()];
        return enumerate_morphisms(cat, q, objects, 0, &mut morphisms, out, cap);
    }
    for o in 0..cat.objects {
        objects[x] = o;
        enumerate_objects(cat, q, x + 1, objects, out, cap)?;
    }
    Ok(())
}

fn enumerate_morphisms(
    cat: &FinCat,
    q: &Quiver,
    objects: &[usize],
    a: usize,
    morphisms: &mut Vec<usize>,
    out: &mut Vec<FinCatDiagram>,
    cap: usize,
) -> Result<(), ModelError> {
    if a == q.arcs.len() {
        if out.len() == cap {
            return Err(ModelError::CapExceeded { count: cap + 1, cap });
        }
        out.push(FinCatDiagram { shape: q.clone(), objects: objects.to_vec(), morphisms: morphisms.clone() });
        return Ok(());
    }
    let (s, t) = q.arcs[a];
    for m in 0..cat.morphism_count() {
        if cat.src[m] == objects[s] && cat.tgt[m] == objects[t] {
            morphisms[a] = m;
            enumerate_morphisms(cat, q, objects, a + 1, morphisms, out, cap)?;
        }
    }
    Ok(())
}

impl DiagramModel for FinCatModel {
    type Diagram = FinCatDiagram;

    fn to_quiver(&self, d: &FinCatDiagram) -> Quiver {
        d.shape.clone()
    }

    fn restrict(&self, sq: &Subquiver, d: &FinCatDiagram) -> Option<FinCatDiagram> {
        let shape = d.shape.restr(sq).ok()?;
        Some(FinCatDiagram {
            shape,
            objects: sq.vertices.iter().map(|&x| d.objects[x]).collect(),
            morphisms: sq.arcs.iter().map(|&a| d.morphisms[a]).collect(),
        })
    }

    fn eq_d(&self, a: &FinCatDiagram, b: &FinCatDiagram) -> bool {
        a == b
    }

    fn path_related(&self, d: &FinCatDiagram, u: usize, _v: usize, p: &[usize], q: &[usize]) -> bool {
        composite_steps(&self.cat, d, u, p) == composite_steps(&self.cat, d, u, q)
    }

    fn enumerate(&self, q: &Quiver) -> Result<Vec<FinCatDiagram>, ModelError> {
        enumerate_diagrams(&self.cat, q, self.cap)
    }
}

/// The same diagrams with dualized quivers and reversed path relation.
#[derive(Clone, Debug)]
pub struct Dual<M>(pub M);

pub fn model_dual<M: DiagramModel>(m: M) -> Dual<M> {
    Dual(m)
}

impl<M: DiagramModel> DiagramModel for Dual<M> {
    type Diagram = M::Diagram;

    fn to_quiver(&self, d: &M::Diagram) -> Quiver {
        self.0.to_quiver(d).dual()
    }

    fn restrict(&self, sq: &Subquiver, d: &M::Diagram) -> Option<M::Diagram> {
        self.0.restrict(sq, d)
    }

    fn eq_d(&self, a: &M::Diagram, b: &M::Diagram) -> bool {
        self.0.eq_d(a, b)
    }

    fn path_related(&self, d: &M::Diagram, u: usize, v: usize, p: &[usize], q: &[usize]) -> bool {
        let rev = |s: &[usize]| s.iter().rev().copied().collect::<Vec<_>>();
        self.0.path_related(d, v, u, &rev(p), &rev(q))
    }

    fn enumerate(&self, q: &Quiver) -> Result<Vec<M::Diagram>, ModelError> {
        self.0.enumerate(&q.dual())
    }
}

/// Evaluates a term against a stack of diagrams (`stack[0]` is `$0`).
pub fn term_oeval<M: DiagramModel>(m: &M, stack: &[M::Diagram], t: &Term) -> Option<M::Diagram> {
    match t {
        Term::Var(k) => stack.get(*k).cloned(),
        Term::Restr(sq, inner) => m.restrict(sq, &term_oeval(m, stack, inner)?),
    }
}

/// Truth of `f` in model `m`, with `stack[k]` interpreting the free `$k`.
pub fn formula_eval<M: DiagramModel>(m: &M, stack: &[M::Diagram], f: &Formula) -> Result<bool, ModelError> {
    let mut eval = Evaluator { model: m, cache: HashMap::new() };
    let mut rev: Vec<M::Diagram> = stack.iter().rev().cloned().collect();
    eval.eval(&mut rev, f)
}

/// Evaluates `p` applied to the diagrams `args`.
pub fn eval_predicate<M: DiagramModel>(m: &M, p: &Predicate, args: &[M::Diagram]) -> Result<bool, ModelError> {
    formula_eval(m, args, &p.body)
}

struct Evaluator<'m, M: DiagramModel> {
    model: &'m M,
    cache: HashMap<Quiver, std::rc::Rc<Vec<M::Diagram>>>,
}

impl<M: DiagramModel> Evaluator<'_, M> {
    fn diagrams(&mut self, q: &Quiver) -> Result<std::rc::Rc<Vec<M::Diagram>>, ModelError> {
        if let Some(ds) = self.cache.get(q) {
            return Ok(ds.clone());
        }
        let ds = std::rc::Rc::new(self.model.enumerate(q)?);
        self.cache.insert(q.clone(), ds.clone());
        Ok(ds)
    }

    /// `stack` holds `$0` last.
    fn term(&self, stack: &[M::Diagram], t: &Term) -> Option<M::Diagram> {
        match t {
            Term::Var(k) => stack.len().checked_sub(k + 1).map(|i| stack[i].clone()),
            Term::Restr(sq, inner) => self.model.restrict(sq, &self.term(stack, inner)?),
        }
    }

    fn eval(&mut self, stack: &mut Vec<M::Diagram>, f: &Formula) -> Result<bool, ModelError> {
        Ok(match f {
            Formula::Forall(q, body) => {
                for d in self.diagrams(q)?.iter() {
                    stack.push(d.clone());
                    let holds = self.eval(stack, body);
                    stack.pop();
                    if !holds? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Exists(q, body) => {
                for d in self.diagrams(q)?.iter() {
                    stack.push(d.clone());
                    let holds = self.eval(stack, body);
                    stack.pop();
                    if holds? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Imply(a, b) => !self.eval(stack, a)? || self.eval(stack, b)?,
            Formula::And(a, b) => self.eval(stack, a)? && self.eval(stack, b)?,
            Formula::FTrue => true,
            Formula::Commute(t) => match self.term(stack, t) {
                Some(d) => self.model.commute(&d)?,
                None => false,
            },
            Formula::EqD(a, b) => match (self.term(stack, a), self.term(stack, b)) {
                (Some(x), Some(y)) => self.model.eq_d(&x, &y),
                _ => false,
            },
        })
    }
}
