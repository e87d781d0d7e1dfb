//! Bipaths and the brute-force path relation they generate.
//!
//! [`closure`] materializes every path of an acyclic quiver and computes the
//! least family of equivalences that contains the given bipaths and is stable
//! under concatenation. It is exponential and meant as a reference oracle for
//! small quivers; [`crate::commerge`] is the production decision procedure.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{QuiverError, Result};
use crate::quiver::{Path, Quiver, Subquiver};
use crate::unionfind::UnionFind;

/// Default bound on the total number of paths the oracle will materialize.
pub const DEFAULT_PATH_CAP: usize = 100_000;

/// Two paths with the same extremities.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bipath {
    pub u: usize,
    pub v: usize,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl Bipath {
    pub fn new(u: usize, v: usize, left: Vec<usize>, right: Vec<usize>) -> Self {
        Bipath { u, v, left, right }
    }

    pub fn left_path(&self) -> Path {
        Path::new(self.u, self.v, self.left.clone())
    }

    pub fn right_path(&self) -> Path {
        Path::new(self.u, self.v, self.right.clone())
    }

    pub fn is_valid_in(&self, q: &Quiver) -> bool {
        q.is_path(self.u, &self.left, self.v) && q.is_path(self.u, &self.right, self.v)
    }

    pub fn check_in(&self, q: &Quiver) -> Result<()> {
        if self.is_valid_in(q) {
            Ok(())
        } else {
            Err(QuiverError::InvalidBipath(format!(
                "{:?} / {:?} are not both paths from {} to {}",
                self.left, self.right, self.u, self.v
            )))
        }
    }

    /// The same bipath read in the dual quiver.
    pub fn dual(&self) -> Bipath {
        Bipath {
            u: self.v,
            v: self.u,
            left: self.left.iter().rev().copied().collect(),
            right: self.right.iter().rev().copied().collect(),
        }
    }

    /// Human-readable equation between the two composites.
    pub fn equation(&self) -> String {
        let show = |steps: &[usize]| {
            let arcs: Vec<String> = steps.iter().map(usize::to_string).collect();
            format!("path({}→{} via [{}])", self.u, self.v, arcs.join(","))
        };
        format!("{} = {}", show(&self.left), show(&self.right))
    }
}

/// Every path of an acyclic quiver, indexed densely per endpoint pair.
#[derive(Clone, Debug)]
pub(crate) struct PathIndex {
    paths: Vec<Path>,
    ids: HashMap<(usize, Vec<usize>), usize>,
    ranges: BTreeMap<(usize, usize), std::ops::Range<usize>>,
}

impl PathIndex {
    pub(crate) fn build(q: &Quiver, cap: usize) -> Result<Self> {
        q.topo_order()?;
        let mut per_pair: BTreeMap<(usize, usize), Vec<Vec<usize>>> = BTreeMap::new();
        let mut count = 0;
        for u in 0..q.n {
            let mut stack = Vec::new();
            collect_from(q, u, u, &mut stack, &mut per_pair, &mut count, cap)?;
        }
        let mut index = PathIndex { paths: Vec::with_capacity(count), ids: HashMap::new(), ranges: BTreeMap::new() };
        for ((u, v), mut group) in per_pair {
            group.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
            let start = index.paths.len();
            for steps in group {
                index.ids.insert((u, steps.clone()), index.paths.len());
                index.paths.push(Path::new(u, v, steps));
            }
            index.ranges.insert((u, v), start..index.paths.len());
        }
        Ok(index)
    }

    pub(crate) fn id(&self, u: usize, steps: &[usize]) -> Option<usize> {
        self.ids.get(&(u, steps.to_vec())).copied()
    }

    pub(crate) fn len(&self) -> usize {
        self.paths.len()
    }

    fn bipaths(&self) -> Vec<Bipath> {
        let mut out = Vec::new();
        for (&(u, v), range) in &self.ranges {
            let group = &self.paths[range.clone()];
            for (i, p) in group.iter().enumerate() {
                for q in &group[i + 1..] {
                    out.push(Bipath::new(u, v, p.steps.clone(), q.steps.clone()));
                }
            }
        }
        out
    }
}

fn collect_from(
    q: &Quiver,
    u: usize,
    at: usize,
    stack: &mut Vec<usize>,
    out: &mut BTreeMap<(usize, usize), Vec<Vec<usize>>>,
    count: &mut usize,
    cap: usize,
) -> Result<()> {
    *count += 1;
    if *count > cap {
        return Err(QuiverError::CapExceeded { count: *count, cap });
    }
    out.entry((u, at)).or_default().push(stack.clone());
    for (a, &(s, t)) in q.arcs.iter().enumerate() {
        if s == at {
            stack.push(a);
            collect_from(q, u, t, stack, out, count, cap)?;
            stack.pop();
        }
    }
    Ok(())
}

/// A partition of the paths of each endpoint pair into equivalence classes.
///
/// Classes are ordered by their least path, and paths inside a class follow
/// the shortest-first enumeration order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathPartition {
    classes: BTreeMap<(usize, usize), Vec<Vec<Vec<usize>>>>,
}

impl PathPartition {
    pub fn classes(&self, u: usize, v: usize) -> &[Vec<Vec<usize>>] {
        self.classes.get(&(u, v)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.classes.keys().copied()
    }

    pub fn class_of(&self, u: usize, v: usize, steps: &[usize]) -> Option<usize> {
        self.classes(u, v).iter().position(|c| c.iter().any(|p| p == steps))
    }

    pub fn related(&self, u: usize, v: usize, p: &[usize], q: &[usize]) -> bool {
        match (self.class_of(u, v, p), self.class_of(u, v, q)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }

    /// At most one class for every endpoint pair.
    pub fn is_full(&self) -> bool {
        self.classes.values().all(|cs| cs.len() <= 1)
    }

    /// Debug dump: one line per endpoint pair.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for ((u, v), cs) in &self.classes {
            out.push_str(&format!("{u}->{v}: {cs:?}\n"));
        }
        out
    }
}

/// All unordered pairs of distinct paths sharing their extremities.
pub fn enumerate_bipaths(q: &Quiver) -> Result<Vec<Bipath>> {
    Ok(PathIndex::build(q, DEFAULT_PATH_CAP)?.bipaths())
}

pub fn closure(q: &Quiver, generators: &[Bipath]) -> Result<PathPartition> {
    closure_with_cap(q, generators, DEFAULT_PATH_CAP)
}

/// Least concatenation-stable equivalence containing `generators`.
pub fn closure_with_cap(q: &Quiver, generators: &[Bipath], cap: usize) -> Result<PathPartition> {
    q.check_wf()?;
    for b in generators {
        b.check_in(q)?;
    }
    let index = PathIndex::build(q, cap)?;
    let mut uf = UnionFind::new(index.len());
    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); q.n];
    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); q.n];
    for (a, &(s, t)) in q.arcs.iter().enumerate() {
        outgoing[s].push(a);
        incoming[t].push(a);
    }

    let lookup = |u: usize, steps: &[usize]| index.id(u, steps).expect("every path is indexed");
    let mut work = Vec::new();
    for b in generators {
        let (l, r) = (lookup(b.u, &b.left), lookup(b.u, &b.right));
        if uf.union(l, r) {
            work.push((l, r));
        }
    }
    // Whiskering each merged pair by one arc on either side is enough: longer
    // contexts are reached through the pairs this loop pushes in turn.
    while let Some((a, b)) = work.pop() {
        let (pa, pb) = (&index.paths[a], &index.paths[b]);
        let mut next = Vec::new();
        for &e in &incoming[pa.u] {
            let s = q.src(e);
            let mut la = vec![e];
            la.extend_from_slice(&pa.steps);
            let mut lb = vec![e];
            lb.extend_from_slice(&pb.steps);
            next.push((lookup(s, &la), lookup(s, &lb)));
        }
        for &e in &outgoing[pa.v] {
            let mut ra = pa.steps.clone();
            ra.push(e);
            let mut rb = pb.steps.clone();
            rb.push(e);
            next.push((lookup(pa.u, &ra), lookup(pb.u, &rb)));
        }
        for (x, y) in next {
            if uf.union(x, y) {
                work.push((x, y));
            }
        }
    }

    let mut classes = BTreeMap::new();
    for (&pair, range) in &index.ranges {
        let mut by_root: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
        for id in range.clone() {
            by_root.entry(uf.find(id)).or_default().push(index.paths[id].steps.clone());
        }
        classes.insert(pair, by_root.into_values().collect());
    }
    Ok(PathPartition { classes })
}

pub fn is_full(p: &PathPartition) -> bool {
    p.is_full()
}

/// The bipaths of the quiver selected by `sq`, written with `q`'s labels.
pub fn subquiver_bipaths(q: &Quiver, sq: &Subquiver) -> Result<Vec<Bipath>> {
    let restricted = q.restr(sq)?;
    Ok(enumerate_bipaths(&restricted)?
        .into_iter()
        .map(|b| Bipath {
            u: sq.vertices[b.u],
            v: sq.vertices[b.v],
            left: b.left.iter().map(|&a| sq.arcs[a]).collect(),
            right: b.right.iter().map(|&a| sq.arcs[a]).collect(),
        })
        .collect())
}
