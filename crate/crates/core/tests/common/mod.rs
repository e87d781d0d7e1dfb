//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;

use diagchase::commerge::Assumption;
use diagchase::formula::{term_sort, Formula, Term};
use diagchase::kernel::Sequent;
use diagchase::model::FinCat;
use diagchase::paths::Bipath;
use diagchase::{Quiver, Subquiver};

/// A random acyclic quiver with shuffled labels; parallel arcs allowed.
pub fn random_dag<R: Rng>(rng: &mut R, max_n: usize, max_arcs: usize) -> Quiver {
    let n = rng.gen_range(1..=max_n);
    let m = if n < 2 { 0 } else { rng.gen_range(0..=max_arcs) };
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut arcs = Vec::with_capacity(m);
    for _ in 0..m {
        let a = rng.gen_range(0..n - 1);
        let b = rng.gen_range(a + 1..n);
        arcs.push((perm[a], perm[b]));
    }
    Quiver::new(n, arcs)
}

/// A random quiver that may have cycles and loops.
pub fn random_quiver<R: Rng>(rng: &mut R, max_n: usize, max_arcs: usize) -> Quiver {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(0..=max_arcs);
    Quiver::new(n, (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect())
}

/// A random subquiver: some arcs with their endpoints, plus some extra vertices,
/// in random order.
pub fn random_subquiver<R: Rng>(rng: &mut R, q: &Quiver) -> Subquiver {
    let mut arcs: Vec<usize> = (0..q.arcs.len()).filter(|_| rng.gen_bool(0.5)).collect();
    arcs.shuffle(rng);
    let mut vs: BTreeSet<usize> = arcs.iter().flat_map(|&a| [q.arcs[a].0, q.arcs[a].1]).collect();
    for x in 0..q.n {
        if rng.gen_bool(0.2) {
            vs.insert(x);
        }
    }
    if vs.is_empty() && q.n > 0 {
        vs.insert(rng.gen_range(0..q.n));
    }
    let mut vertices: Vec<usize> = vs.into_iter().collect();
    vertices.shuffle(rng);
    Subquiver::new(vertices, arcs)
}

/// Every path from `u` to `v`, by plain depth-first search over arc indices.
pub fn naive_paths(q: &Quiver, u: usize, v: usize) -> Vec<Vec<usize>> {
    fn go(q: &Quiver, at: usize, v: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if at == v {
            out.push(cur.clone());
        }
        for (a, &(s, t)) in q.arcs.iter().enumerate() {
            if s == at {
                cur.push(a);
                go(q, t, v, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(q, u, v, &mut Vec::new(), &mut out);
    out
}

/// Brute-force path relation generated by `gens`: the equivalence closure of
/// every whiskered generator `a·p·b ~ a·r·b`, by repeated class merging.
pub struct NaiveRelation {
    pub classes: BTreeMap<(usize, usize), Vec<BTreeSet<Vec<usize>>>>,
}

impl NaiveRelation {
    pub fn new(q: &Quiver, gens: &[(usize, usize, Vec<usize>, Vec<usize>)]) -> Self {
        let mut paths: BTreeMap<(usize, usize), Vec<Vec<usize>>> = BTreeMap::new();
        for u in 0..q.n {
            for v in 0..q.n {
                paths.insert((u, v), naive_paths(q, u, v));
            }
        }
        let mut label: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for ps in paths.values() {
            for p in ps {
                let next = label.len();
                label.entry(p.clone()).or_insert(next);
            }
        }
        let mut merges: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        for (u, v, p, r) in gens {
            for x in 0..q.n {
                for pre in &paths[&(x, *u)] {
                    for y in 0..q.n {
                        for post in &paths[&(*v, y)] {
                            let a: Vec<usize> = pre.iter().chain(p).chain(post).copied().collect();
                            let b: Vec<usize> = pre.iter().chain(r).chain(post).copied().collect();
                            merges.push((a, b));
                        }
                    }
                }
            }
        }
        for (a, b) in merges {
            let (la, lb) = (label[&a], label[&b]);
            if la != lb {
                for l in label.values_mut() {
                    if *l == lb {
                        *l = la;
                    }
                }
            }
        }
        let mut classes = BTreeMap::new();
        for (&(u, v), ps) in &paths {
            let mut groups: BTreeMap<usize, BTreeSet<Vec<usize>>> = BTreeMap::new();
            for p in ps {
                groups.entry(label[p]).or_default().insert(p.clone());
            }
            classes.insert((u, v), groups.into_values().collect());
        }
        NaiveRelation { classes }
    }

    pub fn is_full(&self) -> bool {
        self.classes.values().all(|g| g.len() <= 1)
    }

    pub fn related(&self, u: usize, v: usize, p: &[usize], r: &[usize]) -> bool {
        self.classes[&(u, v)].iter().any(|g| g.contains(p) && g.contains(r))
    }
}

/// Generators of an assumption list, in host coordinates, by naive path search.
pub fn assumption_generators(q: &Quiver, assms: &[Assumption]) -> Vec<(usize, usize, Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for a in assms {
        match a {
            Assumption::Bipath(b) => out.push((b.u, b.v, b.left.clone(), b.right.clone())),
            Assumption::Subquiver(sq) => {
                let inside = Quiver::new(q.n, sq.arcs.iter().map(|&a| q.arcs[a]).collect());
                for &u in &sq.vertices {
                    for &v in &sq.vertices {
                        let ps = naive_paths(&inside, u, v);
                        let host = |p: &Vec<usize>| p.iter().map(|&i| sq.arcs[i]).collect::<Vec<_>>();
                        for p in ps.iter().skip(1) {
                            out.push((u, v, host(&ps[0]), host(p)));
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn random_bipath<R: Rng>(rng: &mut R, q: &Quiver) -> Option<Bipath> {
    let mut pairs = Vec::new();
    for u in 0..q.n {
        for v in 0..q.n {
            let ps = naive_paths(q, u, v);
            if ps.len() >= 2 {
                pairs.push((u, v, ps));
            }
        }
    }
    let (u, v, ps) = pairs.choose(rng)?;
    let i = rng.gen_range(0..ps.len());
    let mut j = rng.gen_range(0..ps.len() - 1);
    if j >= i {
        j += 1;
    }
    Some(Bipath::new(*u, *v, ps[i].clone(), ps[j].clone()))
}

pub fn random_assumptions<R: Rng>(rng: &mut R, q: &Quiver) -> Vec<Assumption> {
    let k = rng.gen_range(0..=4);
    let mut out = Vec::new();
    for _ in 0..k {
        if rng.gen_bool(0.5) {
            let mut sq = random_subquiver(rng, q);
            // endpoints must be present
            let mut vs: BTreeSet<usize> = sq.vertices.iter().copied().collect();
            for &a in &sq.arcs {
                vs.insert(q.arcs[a].0);
                vs.insert(q.arcs[a].1);
            }
            sq.vertices = vs.into_iter().collect();
            out.push(Assumption::Subquiver(sq));
        } else if let Some(b) = random_bipath(rng, q) {
            out.push(Assumption::Bipath(b));
        }
    }
    out
}

/// A random term over `ctx` whose sort is well-formed.
pub fn random_term<R: Rng>(rng: &mut R, ctx: &[Quiver]) -> Term {
    let k = rng.gen_range(0..ctx.len());
    let mut t = Term::var(k);
    let depth = rng.gen_range(0..=2);
    for _ in 0..depth {
        let sort = term_sort(ctx, &t).expect("generated terms are well-sorted");
        if sort.n == 0 {
            break;
        }
        let mut sq = random_subquiver(rng, &sort);
        let mut vs: Vec<usize> = sq.vertices.clone();
        for &a in &sq.arcs {
            for x in [sort.arcs[a].0, sort.arcs[a].1] {
                if !vs.contains(&x) {
                    vs.push(x);
                }
            }
        }
        sq.vertices = vs;
        t = Term::restr(sq, t);
    }
    t
}

/// Atoms and connectives over `ctx`, with quantifiers over small acyclic quivers.
pub fn random_formula<R: Rng>(rng: &mut R, ctx: &[Quiver], depth: usize, quantifiers: usize) -> Formula {
    let choice = if depth == 0 { rng.gen_range(0..3) } else { rng.gen_range(0..7) };
    match choice {
        0 => Formula::FTrue,
        1 if !ctx.is_empty() => Formula::commute(random_term(rng, ctx)),
        2 if !ctx.is_empty() => random_eqd(rng, ctx),
        3 => Formula::imply(random_formula(rng, ctx, depth - 1, quantifiers), random_formula(rng, ctx, depth - 1, quantifiers)),
        4 => Formula::and(random_formula(rng, ctx, depth - 1, quantifiers), random_formula(rng, ctx, depth - 1, quantifiers)),
        5 | 6 if quantifiers > 0 => {
            let q = random_dag(rng, 3, 3);
            let mut inner = vec![q.clone()];
            inner.extend_from_slice(ctx);
            let body = random_formula(rng, &inner, depth - 1, quantifiers - 1);
            if choice == 5 {
                Formula::forall(q, body)
            } else {
                Formula::exists(q, body)
            }
        }
        _ if !ctx.is_empty() => Formula::commute(random_term(rng, ctx)),
        _ => Formula::FTrue,
    }
}

/// An equation between two random terms of the same sort, or a reflexive one.
pub fn random_eqd<R: Rng>(rng: &mut R, ctx: &[Quiver]) -> Formula {
    let a = random_term(rng, ctx);
    let sa = term_sort(ctx, &a).unwrap();
    for _ in 0..20 {
        let b = random_term(rng, ctx);
        if term_sort(ctx, &b).unwrap() == sa {
            return Formula::eqd(a, b);
        }
    }
    Formula::eqd(a.clone(), a)
}

pub fn random_sequent<R: Rng>(rng: &mut R) -> Sequent {
    let k = rng.gen_range(1..=2);
    let context: Vec<Quiver> = (0..k).map(|_| random_dag(rng, 3, 3)).collect();
    let premises = (0..rng.gen_range(0..=3)).map(|_| random_formula(rng, &context, 2, 1)).collect();
    let goal = random_formula(rng, &context, 2, 1);
    Sequent { context, premises, goal }
}

/// `m` is monic: `m∘g = m∘h` implies `g = h`, by table search.
pub fn is_monic(cat: &FinCat, m: usize) -> bool {
    let n = cat.morphism_count();
    (0..n).all(|g| {
        (0..n).all(|h| {
            if cat.tgt[g] != cat.src[m] || cat.tgt[h] != cat.src[m] || cat.src[g] != cat.src[h] {
                return true;
            }
            cat.comp(m, g) != cat.comp(m, h) || g == h
        })
    })
}

/// `m` is epic: `g∘m = h∘m` implies `g = h`.
pub fn is_epic(cat: &FinCat, m: usize) -> bool {
    is_monic(&cat.opposite(), m)
}

/// Composite along `steps` starting at vertex `u`, straight from the tables.
pub fn table_composite(cat: &FinCat, d: &diagchase::model::FinCatDiagram, u: usize, steps: &[usize]) -> usize {
    let mut acc = cat.identity[d.objects[u]];
    for &a in steps {
        acc = cat.compose[d.morphisms[a]][acc].expect("composable");
    }
    acc
}

pub fn table_commutes(cat: &FinCat, d: &diagchase::model::FinCatDiagram) -> bool {
    let q = &d.shape;
    (0..q.n).all(|u| {
        (0..q.n).all(|v| {
            let ps = naive_paths(q, u, v);
            ps.iter().all(|p| table_composite(cat, d, u, p) == table_composite(cat, d, u, &ps[0]))
        })
    })
}

/// Every decoration of `q`, by brute force over all object and morphism tuples.
pub fn table_diagrams(cat: &FinCat, q: &Quiver) -> Vec<diagchase::model::FinCatDiagram> {
    let mut out = Vec::new();
    let total = cat.objects.pow(q.n as u32);
    for code in 0..total {
        let objects: Vec<usize> = (0..q.n).map(|i| code / cat.objects.pow(i as u32) % cat.objects).collect();
        let choices: Vec<Vec<usize>> = q
            .arcs
            .iter()
            .map(|&(s, t)| (0..cat.src.len()).filter(|&m| cat.src[m] == objects[s] && cat.tgt[m] == objects[t]).collect())
            .collect();
        let mut idx = vec![0usize; q.arcs.len()];
        if choices.iter().any(|c| c.is_empty()) {
            continue;
        }
        loop {
            out.push(diagchase::model::FinCatDiagram {
                shape: q.clone(),
                objects: objects.clone(),
                morphisms: idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect(),
            });
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    out
}

/// Reference evaluator over a finite category; `stack[0]` is `$0`.
pub fn table_eval(cat: &FinCat, stack: &[diagchase::model::FinCatDiagram], f: &Formula) -> bool {
    fn term(stack: &[diagchase::model::FinCatDiagram], t: &Term) -> diagchase::model::FinCatDiagram {
        match t {
            Term::Var(k) => stack[*k].clone(),
            Term::Restr(sq, inner) => {
                let d = term(stack, inner);
                diagchase::model::FinCatDiagram {
                    shape: d.shape.restr(sq).expect("well-sorted"),
                    objects: sq.vertices.iter().map(|&x| d.objects[x]).collect(),
                    morphisms: sq.arcs.iter().map(|&a| d.morphisms[a]).collect(),
                }
            }
        }
    }
    let push = |d: diagchase::model::FinCatDiagram| {
        let mut s = vec![d];
        s.extend_from_slice(stack);
        s
    };
    match f {
        Formula::FTrue => true,
        Formula::Commute(t) => table_commutes(cat, &term(stack, t)),
        Formula::EqD(a, b) => term(stack, a) == term(stack, b),
        Formula::And(a, b) => table_eval(cat, stack, a) && table_eval(cat, stack, b),
        Formula::Imply(a, b) => !table_eval(cat, stack, a) || table_eval(cat, stack, b),
        Formula::Forall(q, body) => table_diagrams(cat, q).into_iter().all(|d| table_eval(cat, &push(d), body)),
        Formula::Exists(q, body) => table_diagrams(cat, q).into_iter().any(|d| table_eval(cat, &push(d), body)),
    }
}

/// A closed formula with an outermost quantifier.
pub fn random_closed_formula<R: Rng>(rng: &mut R) -> Formula {
    let q = random_dag(rng, 3, 3);
    let body = random_formula(rng, std::slice::from_ref(&q), 2, 1);
    if rng.gen_bool(0.5) {
        Formula::forall(q, body)
    } else {
        Formula::exists(q, body)
    }
}
