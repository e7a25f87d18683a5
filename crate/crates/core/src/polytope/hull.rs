//! Exact convex hulls of rational point sets.
//!
//! Facets are found exhaustively: every d-subset of points spanning a
//! hyperplane is tested as a supporting hyperplane. The resulting
//! H-representation is then fed back through vertex enumeration, which both
//! recovers the vertex set deterministically and cross-validates the two
//! representations against each other.

use std::collections::BTreeSet;

use num_traits::Signed;

use crate::exact::linalg::{affine_rank, Mat};
use crate::exact::rational::Rat;

use super::{Halfspace, Polytope, PolytopeError};

/// Convex hull of a full-dimensional point set.
pub fn convex_hull(points: &[Vec<Rat>]) -> Result<Polytope, PolytopeError> {
    let Some(first) = points.first() else {
        return Err(PolytopeError::BadInput("no points".into()));
    };
    let dim = first.len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(PolytopeError::BadInput("points of mixed dimension".into()));
    }
    let rank = affine_rank(points);
    if rank != dim {
        return Err(PolytopeError::Degenerate { rank, dim });
    }

    let mut facets: BTreeSet<Halfspace> = BTreeSet::new();
    let n = points.len();
    let mut subset: Vec<usize> = (0..dim).collect();
    loop {
        if let Some(h) = supporting_hyperplane(points, &subset) {
            facets.insert(h);
        }
        let mut i = dim;
        let done = loop {
            if i == 0 {
                break true;
            }
            i -= 1;
            if subset[i] != i + n - dim {
                subset[i] += 1;
                for j in i + 1..dim {
                    subset[j] = subset[j - 1] + 1;
                }
                break false;
            }
        };
        if done {
            break;
        }
    }

    let hs: Vec<Halfspace> = facets.into_iter().collect();
    let p = Polytope::from_halfspaces(dim, &hs)?;
    // cross-validate: every hull vertex is an input point and every input
    // point lies inside
    for v in p.vertices() {
        if !points.contains(v) {
            return Err(PolytopeError::BadInput(
                "hull vertex is not an input point".into(),
            ));
        }
    }
    for q in points {
        if !p.contains(q) {
            return Err(PolytopeError::BadInput(
                "input point escapes the facet description".into(),
            ));
        }
    }
    Ok(p)
}

/// Hyperplane through the chosen d points, oriented to contain all points on
/// the ≤ side; `None` when degenerate or not supporting.
fn supporting_hyperplane(points: &[Vec<Rat>], subset: &[usize]) -> Option<Halfspace> {
    let base = &points[subset[0]];
    let rows: Vec<Vec<Rat>> = subset[1..]
        .iter()
        .map(|&i| {
            points[i]
                .iter()
                .zip(base)
                .map(|(a, b)| a.clone() - b.clone())
                .collect()
        })
        .collect();
    let null = Mat::from_rows(rows).nullspace();
    if null.len() != 1 {
        return None; // points are affinely dependent
    }
    let normal = null.into_iter().next().unwrap();
    let offset: Rat = normal
        .iter()
        .zip(base)
        .map(|(n, x)| n.clone() * x.clone())
        .sum();
    let mut seen_pos = false;
    let mut seen_neg = false;
    for p in points {
        let dot: Rat = normal
            .iter()
            .zip(p)
            .map(|(n, x)| n.clone() * x.clone())
            .sum();
        let slack = dot - offset.clone();
        if slack.is_positive() {
            seen_pos = true;
        } else if slack.is_negative() {
            seen_neg = true;
        }
        if seen_pos && seen_neg {
            return None;
        }
    }
    let h = if seen_pos {
        Halfspace::new(normal.iter().map(|c| -c.clone()).collect(), -offset)
    } else {
        Halfspace::new(normal, offset)
    };
    Some(h.canonical())
}
