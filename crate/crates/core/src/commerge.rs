//! Sound decision procedure for the commerge problem on acyclic quivers.
//!
//! For every vertex pair `(u, v)` we build the frontier graph whose nodes are
//! the arcs leaving `u` towards `v` and the arcs entering `v` from `u`. Two
//! nodes are linked when they lie on a common `u -> v` path, or when an
//! assumption relates a path through one to a path through the other. If
//! every frontier graph is connected, the assumptions generate the full path
//! relation.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::paths::Bipath;
use crate::quiver::{Quiver, Reachability, Subquiver, VertexPermutation};
use crate::unionfind::UnionFind;

/// A commutativity hypothesis, in host coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Assumption {
    /// The selected subdiagram commutes.
    Subquiver(Subquiver),
    /// The two paths have equal composites.
    Bipath(Bipath),
}

impl Assumption {
    pub fn check_in(&self, q: &Quiver) -> Result<()> {
        match self {
            Assumption::Subquiver(sq) => q.restr(sq).map(drop),
            Assumption::Bipath(b) => b.check_in(q),
        }
    }

    /// Subquivers are unchanged, bipaths are reversed.
    pub fn dual(&self) -> Assumption {
        match self {
            Assumption::Subquiver(sq) => Assumption::Subquiver(sq.clone()),
            Assumption::Bipath(b) => Assumption::Bipath(b.dual()),
        }
    }

    pub fn relabel(&self, perm: &VertexPermutation) -> Assumption {
        match self {
            Assumption::Subquiver(sq) => Assumption::Subquiver(Subquiver::new(
                sq.vertices.iter().map(|&x| perm.apply(x)).collect(),
                sq.arcs.clone(),
            )),
            Assumption::Bipath(b) => Assumption::Bipath(Bipath::new(
                perm.apply(b.u),
                perm.apply(b.v),
                b.left.clone(),
                b.right.clone(),
            )),
        }
    }
}

/// The frontier multigraph of a vertex pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrontierGraph {
    pub u: usize,
    pub v: usize,
    pub nodes: BTreeSet<usize>,
    pub edges: BTreeSet<(usize, usize)>,
}

impl FrontierGraph {
    fn link(&mut self, a: usize, b: usize) {
        if a != b && self.nodes.contains(&a) && self.nodes.contains(&b) {
            self.edges.insert((a.min(b), a.max(b)));
        }
    }

    /// Connected components as sorted arc sets, ordered by least element.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let nodes: Vec<usize> = self.nodes.iter().copied().collect();
        let pos = |x: usize| nodes.binary_search(&x).expect("edge endpoints are nodes");
        let mut uf = UnionFind::new(nodes.len());
        for &(a, b) in &self.edges {
            uf.union(pos(a), pos(b));
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &x) in nodes.iter().enumerate() {
            groups.entry(uf.find(i)).or_default().push(x);
        }
        groups.into_values().collect()
    }

    /// An empty node set counts as connected.
    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }
}

/// Arcs starting a `u -> v` path, and arcs ending one.
pub fn frontier_arcs(q: &Quiver, u: usize, v: usize) -> Result<(BTreeSet<usize>, BTreeSet<usize>)> {
    q.topo_order()?;
    Ok(frontier_arcs_with(q, &q.reachability(), u, v))
}

fn frontier_arcs_with(q: &Quiver, reach: &Reachability, u: usize, v: usize) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let mut starts = BTreeSet::new();
    let mut ends = BTreeSet::new();
    for (a, &(s, t)) in q.arcs.iter().enumerate() {
        if s == u && reach.reaches(t, v) {
            starts.insert(a);
        }
        if t == v && reach.reaches(u, s) {
            ends.insert(a);
        }
    }
    (starts, ends)
}

/// Precomputed data shared by all vertex pairs.
struct Prepared<'a> {
    q: &'a Quiver,
    reach: Reachability,
    assumptions: Vec<PreparedAssumption<'a>>,
}

enum PreparedAssumption<'a> {
    Subquiver { arcs: &'a [usize], reach: Reachability },
    Bipath(&'a Bipath),
}

impl<'a> Prepared<'a> {
    fn new(q: &'a Quiver, assms: &'a [Assumption]) -> Result<Self> {
        q.topo_order()?;
        let mut assumptions = Vec::with_capacity(assms.len());
        for assm in assms {
            assm.check_in(q)?;
            assumptions.push(match assm {
                Assumption::Subquiver(sq) => {
                    let inside = Quiver::new(q.n, sq.arcs.iter().map(|&a| q.arcs[a]).collect());
                    PreparedAssumption::Subquiver { arcs: &sq.arcs, reach: inside.reachability() }
                }
                Assumption::Bipath(b) => PreparedAssumption::Bipath(b),
            });
        }
        Ok(Prepared { q, reach: q.reachability(), assumptions })
    }

    fn on_common_path(&self, u: usize, v: usize, e1: usize, e2: usize) -> bool {
        let (reach, q) = (&self.reach, self.q);
        let ordered = |a: usize, b: usize| {
            reach.reaches(u, q.src(a)) && reach.reaches(q.tgt(a), q.src(b)) && reach.reaches(q.tgt(b), v)
        };
        ordered(e1, e2) || ordered(e2, e1)
    }

    fn graph(&self, u: usize, v: usize) -> FrontierGraph {
        let (starts, ends) = frontier_arcs_with(self.q, &self.reach, u, v);
        let mut g = FrontierGraph { u, v, nodes: &starts | &ends, edges: BTreeSet::new() };
        let nodes: Vec<usize> = g.nodes.iter().copied().collect();
        for (i, &e1) in nodes.iter().enumerate() {
            for &e2 in &nodes[i + 1..] {
                if self.on_common_path(u, v, e1, e2) {
                    g.link(e1, e2);
                }
            }
        }
        for assm in &self.assumptions {
            match assm {
                PreparedAssumption::Subquiver { arcs, reach } => {
                    let on_path: Vec<usize> = arcs
                        .iter()
                        .copied()
                        .filter(|&a| g.nodes.contains(&a))
                        .filter(|&a| reach.reaches(u, self.q.src(a)) && reach.reaches(self.q.tgt(a), v))
                        .collect();
                    for (i, &a) in on_path.iter().enumerate() {
                        for &b in &on_path[i + 1..] {
                            g.link(a, b);
                        }
                    }
                }
                PreparedAssumption::Bipath(b) if b.u == u && b.v == v => {
                    for &x in &b.left {
                        for &y in &b.right {
                            g.link(x, y);
                        }
                    }
                }
                PreparedAssumption::Bipath(_) => {}
            }
        }
        g
    }
}

pub fn build_frontier_graph(q: &Quiver, assms: &[Assumption], u: usize, v: usize) -> Result<FrontierGraph> {
    Ok(Prepared::new(q, assms)?.graph(u, v))
}

/// A disconnected frontier graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairFailure {
    pub u: usize,
    pub v: usize,
    pub components: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommergeReport {
    pub holds: bool,
    pub failures: Vec<PairFailure>,
}

pub fn commerge(q: &Quiver, assms: &[Assumption]) -> Result<bool> {
    let prepared = Prepared::new(q, assms)?;
    Ok((0..q.n).all(|u| (0..q.n).all(|v| u == v || prepared.graph(u, v).is_connected())))
}

/// Same verdict as [`commerge`], with the failing pairs in ascending order.
pub fn commerge_report(q: &Quiver, assms: &[Assumption]) -> Result<CommergeReport> {
    let prepared = Prepared::new(q, assms)?;
    let mut failures = Vec::new();
    for u in 0..q.n {
        for v in 0..q.n {
            if u == v {
                continue;
            }
            let components = prepared.graph(u, v).components();
            if components.len() > 1 {
                failures.push(PairFailure { u, v, components });
            }
        }
    }
    Ok(CommergeReport { holds: failures.is_empty(), failures })
}
