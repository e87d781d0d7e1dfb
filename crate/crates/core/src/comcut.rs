//! Synthesis of a sufficient list of bipaths for an acyclic quiver.
//!
//! The quiver is processed in reverse topological order, one arc at a time.
//! When an arc `a0 : u0 -> v0` is added, for every minimal vertex `w`
//! reachable from both `u0` and `v0` we relate some path `u0 ~> w` to `a0`
//! followed by some path `v0 ~> w`. Reachability and path selection come from
//! a first-arc matrix that is updated incrementally.

use std::collections::BTreeSet;

use crate::error::{QuiverError, Result};
use crate::paths::Bipath;
use crate::quiver::{Path, Quiver};

/// Entry `(u, v)` holds an arc starting some nontrivial `u -> v` path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstArcMatrix {
    n: usize,
    arcs: Vec<(usize, usize)>,
    entries: Vec<Option<usize>>,
}

impl FirstArcMatrix {
    /// The matrix of `q` with all of its arcs removed.
    pub fn empty(q: &Quiver) -> Self {
        FirstArcMatrix { n: q.n, arcs: q.arcs.clone(), entries: vec![None; q.n * q.n] }
    }

    pub fn entry(&self, u: usize, v: usize) -> Option<usize> {
        if u == v {
            return None;
        }
        self.entries[u * self.n + v]
    }

    /// Reflexive reachability as recorded by the matrix.
    pub fn reachable(&self, u: usize) -> BTreeSet<usize> {
        (0..self.n).filter(|&v| v == u || self.entry(u, v).is_some()).collect()
    }

    /// Records `a0` as first arc towards everything reachable from its target.
    pub fn set_first_arc(&mut self, a0: usize, acc_v0: &BTreeSet<usize>) {
        let u0 = self.arcs[a0].0;
        for &v in acc_v0 {
            if v != u0 {
                self.entries[u0 * self.n + v] = Some(a0);
            }
        }
    }

    /// Follows first arcs from `u` until `v`.
    pub fn extract_path(&self, u: usize, v: usize) -> Result<Path> {
        let mut steps = Vec::new();
        let mut at = u;
        while at != v {
            match self.entry(at, v) {
                Some(a) if steps.len() < self.n => {
                    steps.push(a);
                    at = self.arcs[a].1;
                }
                _ => return Err(QuiverError::NoPath { u, v }),
            }
        }
        Ok(Path::new(u, v, steps))
    }
}

/// Functional form of [`FirstArcMatrix::set_first_arc`].
pub fn update_first_arc_matrix(m: &FirstArcMatrix, a0: usize, acc_v0: &BTreeSet<usize>) -> FirstArcMatrix {
    let mut next = m.clone();
    next.set_first_arc(a0, acc_v0);
    next
}

/// A list of bipaths whose generated path relation is full.
///
/// Any acyclic quiver is accepted; labels are normalized by a reverse
/// topological sort and mapped back afterwards. Arc indices never change.
pub fn comcut(q: &Quiver) -> Result<Vec<Bipath>> {
    let perm = q.topo_order()?;
    let sorted = q.relabel(&perm);
    let back = perm.inverse();
    Ok(comcut_sorted(&sorted)?
        .into_iter()
        .map(|b| Bipath::new(back.apply(b.u), back.apply(b.v), b.left, b.right))
        .collect())
}

/// `q` must satisfy `s > t` for every arc `(s, t)`.
fn comcut_sorted(q: &Quiver) -> Result<Vec<Bipath>> {
    let mut matrix = FirstArcMatrix::empty(q);
    let mut out = Vec::new();
    for u0 in 0..q.n {
        for a0 in (0..q.arcs.len()).filter(|&a| q.src(a) == u0) {
            let v0 = q.tgt(a0);
            let acc_u0 = matrix.reachable(u0);
            let acc_v0 = matrix.reachable(v0);
            let common: Vec<usize> = acc_u0.intersection(&acc_v0).copied().collect();
            let reach: Vec<BTreeSet<usize>> = common.iter().map(|&w| matrix.reachable(w)).collect();
            for (i, &w) in common.iter().enumerate() {
                let dominated = common.iter().enumerate().any(|(j, _)| j != i && reach[j].contains(&w));
                if dominated {
                    continue;
                }
                let p_w = matrix.extract_path(u0, w)?;
                let q_w = matrix.extract_path(v0, w)?;
                let mut right = vec![a0];
                right.extend(q_w.steps);
                out.push(Bipath::new(u0, w, p_w.steps, right));
            }
            matrix.set_first_arc(a0, &acc_v0);
        }
    }
    Ok(out)
}
