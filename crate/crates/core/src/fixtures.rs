//! Named quivers used throughout the examples and tests.
//!
//! Arcs are listed in increasing lexicographic `(src, tgt)` order, which is
//! the numbering convention of the usual drawings.

use crate::quiver::{Quiver, Subquiver};

/// A single arrow.
pub fn map_q() -> Quiver {
    Quiver::from_arcs(vec![(0, 1)])
}

/// Two parallel arrows followed by a triangle: `h, k : 0 -> 1`, `j : 0 -> 2`, `f : 1 -> 2`.
pub fn mono_q() -> Quiver {
    Quiver::from_arcs(vec![(0, 1), (0, 1), (0, 2), (1, 2)])
}

/// The composition triangle: `f : 0 -> 1`, `g∘f : 0 -> 2`, `g : 1 -> 2`.
pub fn comp_q() -> Quiver {
    Quiver::from_arcs(vec![(0, 1), (0, 2), (1, 2)])
}

/// Two rows of five vertices (`0..5` on top, `5..10` below) joined by
/// horizontal and vertical arrows.
pub fn five_q() -> Quiver {
    let mut arcs = Vec::new();
    for i in 0..5 {
        if i < 4 {
            arcs.push((i, i + 1));
        }
        arcs.push((i, i + 5));
    }
    for i in 5..9 {
        arcs.push((i, i + 1));
    }
    arcs.sort_unstable();
    Quiver::new(10, arcs)
}

/// The four unit squares of [`five_q`], left to right.
pub fn five_squares() -> Vec<Subquiver> {
    let q = five_q();
    let index = |arc: (usize, usize)| q.arcs.iter().position(|&a| a == arc).unwrap();
    (0..4)
        .map(|i| {
            let arcs = [(i, i + 1), (i, i + 5), (i + 1, i + 6), (i + 5, i + 6)];
            Subquiver::new(vec![i, i + 1, i + 5, i + 6], arcs.into_iter().map(index).collect())
        })
        .collect()
}

/// The quiver on which comcut is not minimal; already reverse-sorted.
pub fn cut_example_q() -> Quiver {
    Quiver::new(5, vec![(1, 0), (2, 0), (3, 0), (3, 1), (3, 2), (4, 0), (4, 1), (4, 2), (4, 3)])
}

/// A commutative-square shape, reverse-sorted: `3 -> 1 -> 0` and `3 -> 2 -> 0`.
pub fn square_q() -> Quiver {
    Quiver::new(4, vec![(1, 0), (2, 0), (3, 1), (3, 2)])
}
