//! Finite quivers with integer vertices, their subquivers and paths.
//!
//! A quiver is a vertex count together with an ordered list of arcs. Arcs are
//! identified by their index in that list, so parallel arcs are distinct.

use std::collections::{BTreeSet, BinaryHeap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{QuiverError, Result};

/// A finite directed multigraph on the vertices `0..n`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Quiver {
    pub n: usize,
    pub arcs: Vec<(usize, usize)>,
}

/// A selection of vertices and arc indices of a host quiver.
///
/// Restricting relabels the selected vertex `vertices[i]` to `i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subquiver {
    #[serde(rename = "v")]
    pub vertices: Vec<usize>,
    #[serde(rename = "a")]
    pub arcs: Vec<usize>,
}

/// A chain of adjacent arcs from `u` to `v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Path {
    pub u: usize,
    pub v: usize,
    pub steps: Vec<usize>,
}

/// A bijective relabelling of `0..n`: vertex `x` becomes `self.apply(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexPermutation(Vec<usize>);

/// Reflexive-transitive reachability table.
#[derive(Clone, Debug)]
pub struct Reachability {
    n: usize,
    table: Vec<bool>,
}

impl Reachability {
    pub fn reaches(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.table[u * self.n + v]
    }

    pub fn from(&self, u: usize) -> BTreeSet<usize> {
        (0..self.n).filter(|&v| self.reaches(u, v)).collect()
    }
}

impl Quiver {
    pub fn new(n: usize, arcs: Vec<(usize, usize)>) -> Self {
        Quiver { n, arcs }
    }

    /// Builds a quiver from its arcs alone, with `1 + max label` vertices.
    pub fn from_arcs(arcs: Vec<(usize, usize)>) -> Self {
        let n = arcs.iter().map(|&(s, t)| s.max(t) + 1).max().unwrap_or(0);
        Quiver { n, arcs }
    }

    /// The path-quiver with `k + 1` vertices and arcs `i -> i + 1`.
    pub fn path_quiver(k: usize) -> Self {
        Quiver { n: k + 1, arcs: (0..k).map(|i| (i, i + 1)).collect() }
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn src(&self, arc: usize) -> usize {
        self.arcs[arc].0
    }

    pub fn tgt(&self, arc: usize) -> usize {
        self.arcs[arc].1
    }

    pub fn is_wf(&self) -> bool {
        self.arcs.iter().all(|&(s, t)| s < self.n && t < self.n)
    }

    pub fn check_wf(&self) -> Result<()> {
        match self.arcs.iter().position(|&(s, t)| s >= self.n || t >= self.n) {
            Some(arc) => Err(QuiverError::NotWellFormed { arc }),
            None => Ok(()),
        }
    }

    /// Same vertices, every arc reversed, arc indices preserved.
    pub fn dual(&self) -> Quiver {
        Quiver { n: self.n, arcs: self.arcs.iter().map(|&(s, t)| (t, s)).collect() }
    }

    pub fn is_restr_wf(&self, sq: &Subquiver) -> bool {
        self.restr(sq).is_ok()
    }

    /// Selects the vertices and arcs named by `sq`, relabelling each selected
    /// vertex by its position in `sq.vertices`.
    pub fn restr(&self, sq: &Subquiver) -> Result<Quiver> {
        self.check_wf()?;
        let bad = |msg: String| Err(QuiverError::RestrIllFormed(msg));
        if let Some(&a) = sq.arcs.iter().find(|&&a| a >= self.arcs.len()) {
            return bad(format!("arc index {a} out of bound"));
        }
        let mut position = vec![None; self.n];
        for (i, &x) in sq.vertices.iter().enumerate() {
            if x >= self.n {
                return bad(format!("vertex {x} out of bound"));
            }
            if position[x].is_some() {
                return bad(format!("vertex {x} selected twice"));
            }
            position[x] = Some(i);
        }
        let mut arcs = Vec::with_capacity(sq.arcs.len());
        for &a in &sq.arcs {
            let (s, t) = self.arcs[a];
            match (position[s], position[t]) {
                (Some(s), Some(t)) => arcs.push((s, t)),
                _ => return bad(format!("endpoint of arc {a} not selected")),
            }
        }
        Ok(Quiver { n: sq.vertices.len(), arcs })
    }

    /// Checks the adjacency predicate: `steps` chain from `u` to `v`.
    pub fn is_path(&self, u: usize, steps: &[usize], v: usize) -> bool {
        if steps.iter().any(|&a| a >= self.arcs.len()) {
            return false;
        }
        let mut at = u;
        for &a in steps {
            let (s, t) = self.arcs[a];
            if s != at {
                return false;
            }
            at = t;
        }
        at == v && (!steps.is_empty() || u < self.n)
    }

    /// Reverse topological relabelling: afterwards every arc `(s, t)` has
    /// `s > t`. The vertex with the largest label among those without
    /// remaining incoming arcs receives the largest free label, so an already
    /// reverse-sorted quiver yields the identity.
    pub fn topo_order(&self) -> Result<VertexPermutation> {
        self.check_wf()?;
        let mut indegree = vec![0usize; self.n];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for &(s, t) in &self.arcs {
            indegree[t] += 1;
            out[s].push(t);
        }
        let mut ready: BinaryHeap<usize> = (0..self.n).filter(|&x| indegree[x] == 0).collect();
        let mut mapping = vec![0; self.n];
        let mut next = self.n;
        while let Some(x) = ready.pop() {
            next -= 1;
            mapping[x] = next;
            for &t in &out[x] {
                indegree[t] -= 1;
                if indegree[t] == 0 {
                    ready.push(t);
                }
            }
        }
        if next != 0 {
            return Err(QuiverError::Cycle);
        }
        Ok(VertexPermutation(mapping))
    }

    pub fn is_acyclic(&self) -> bool {
        self.topo_order().is_ok()
    }

    pub fn relabel(&self, perm: &VertexPermutation) -> Quiver {
        Quiver {
            n: self.n,
            arcs: self.arcs.iter().map(|&(s, t)| (perm.apply(s), perm.apply(t))).collect(),
        }
    }

    /// Vertices reachable from `u` by a possibly empty path.
    pub fn reachable(&self, u: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        if u >= self.n {
            return seen;
        }
        let mut queue = VecDeque::from([u]);
        seen.insert(u);
        while let Some(x) = queue.pop_front() {
            for &(s, t) in &self.arcs {
                if s == x && seen.insert(t) {
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    pub fn reachability(&self) -> Reachability {
        let n = self.n;
        let mut table = vec![false; n * n];
        for u in 0..n {
            for v in self.reachable(u) {
                table[u * n + v] = true;
            }
        }
        Reachability { n, table }
    }

    /// Every path from `u` to `v`, shortest first and lexicographic among
    /// paths of equal length.
    pub fn all_paths(&self, u: usize, v: usize) -> Result<Vec<Path>> {
        self.topo_order()?;
        if u >= self.n {
            return Err(QuiverError::VertexOutOfBound(u));
        }
        if v >= self.n {
            return Err(QuiverError::VertexOutOfBound(v));
        }
        let reach = self.reachability();
        let mut found = Vec::new();
        let mut stack = Vec::new();
        self.collect_paths(&reach, u, v, &mut stack, &mut found);
        found.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(found.into_iter().map(|steps| Path { u, v, steps }).collect())
    }

    fn collect_paths(
        &self,
        reach: &Reachability,
        at: usize,
        v: usize,
        stack: &mut Vec<usize>,
        found: &mut Vec<Vec<usize>>,
    ) {
        if at == v {
            found.push(stack.clone());
        }
        for (a, &(s, t)) in self.arcs.iter().enumerate() {
            if s == at && reach.reaches(t, v) {
                stack.push(a);
                self.collect_paths(reach, t, v, stack, found);
                stack.pop();
            }
        }
    }

    /// Graphviz rendering: one node per vertex, one edge per arc labelled by
    /// its index.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("digraph {name} {{\n  rankdir=LR;\n");
        for x in 0..self.n {
            out.push_str(&format!("  {x} [label=\"{x}\"];\n"));
        }
        for (i, &(s, t)) in self.arcs.iter().enumerate() {
            out.push_str(&format!("  {s} -> {t} [label=\"{i}\"];\n"));
        }
        out.push_str("}\n");
        out
    }
}

impl fmt::Display for Quiver {
    /// Prints the concrete syntax accepted by the parser.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        if Quiver::from_arcs(self.arcs.clone()).n != self.n {
            write!(f, "n: {}, ", self.n)?;
        }
        f.write_str("arcs:")?;
        for (i, (s, t)) in self.arcs.iter().enumerate() {
            let sep = if i == 0 { " " } else { ", " };
            write!(f, "{sep}({s},{t})")?;
        }
        f.write_str("}")
    }
}

impl Subquiver {
    pub fn new(vertices: Vec<usize>, arcs: Vec<usize>) -> Self {
        Subquiver { vertices, arcs }
    }

    /// Selects everything in `q`.
    pub fn identity(q: &Quiver) -> Self {
        Subquiver { vertices: (0..q.n).collect(), arcs: (0..q.arcs.len()).collect() }
    }

    /// Selects `arcs` of `q` together with their endpoints in ascending order.
    pub fn spanned_by_arcs(q: &Quiver, arcs: Vec<usize>) -> Result<Self> {
        let mut vertices = BTreeSet::new();
        for &a in &arcs {
            let &(s, t) = q
                .arcs
                .get(a)
                .ok_or_else(|| QuiverError::RestrIllFormed(format!("arc index {a} out of bound")))?;
            vertices.insert(s);
            vertices.insert(t);
        }
        Ok(Subquiver { vertices: vertices.into_iter().collect(), arcs })
    }

    /// Flattens `outer` (a subquiver of `restr(inner, host)`) into a single
    /// subquiver of `host` with the same restriction.
    pub fn compose(host: &Quiver, outer: &Subquiver, inner: &Subquiver) -> Result<Subquiver> {
        let mid = host.restr(inner)?;
        mid.restr(outer)?;
        Ok(Subquiver {
            vertices: outer.vertices.iter().map(|&x| inner.vertices[x]).collect(),
            arcs: outer.arcs.iter().map(|&a| inner.arcs[a]).collect(),
        })
    }
}

impl VertexPermutation {
    pub fn identity(n: usize) -> Self {
        VertexPermutation((0..n).collect())
    }

    /// Checks bijectivity on `0..mapping.len()`.
    pub fn from_mapping(mapping: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; mapping.len()];
        for &x in &mapping {
            if x >= mapping.len() || std::mem::replace(&mut seen[x], true) {
                return None;
            }
        }
        Some(VertexPermutation(mapping))
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mapping(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y] = x;
        }
        VertexPermutation(inv)
    }

    /// `self` after `first`.
    pub fn after(&self, first: &VertexPermutation) -> Self {
        VertexPermutation(first.0.iter().map(|&y| self.0[y]).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }
}

impl Path {
    pub fn new(u: usize, v: usize, steps: Vec<usize>) -> Self {
        Path { u, v, steps }
    }

    pub fn empty(u: usize) -> Self {
        Path { u, v: u, steps: Vec::new() }
    }

    pub fn is_valid_in(&self, q: &Quiver) -> bool {
        q.is_path(self.u, &self.steps, self.v)
    }

    /// Concatenation; the caller guarantees `self.v == other.u`.
    pub fn concat(&self, other: &Path) -> Path {
        debug_assert_eq!(self.v, other.u);
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        Path { u: self.u, v: other.v, steps }
    }

    /// The same arcs read in the dual quiver.
    pub fn reversed(&self) -> Path {
        Path { u: self.v, v: self.u, steps: self.steps.iter().rev().copied().collect() }
    }
}
