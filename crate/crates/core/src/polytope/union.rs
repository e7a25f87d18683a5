//! Unions of equal-dimension cells with interior-disjointness validation.

use num_traits::Zero;

use crate::exact::rational::Rat;

use super::{Polytope, PolytopeError};

/// A list of cells expected to have pairwise interior-disjoint closures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellUnion {
    pub cells: Vec<Polytope>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellUnionReport {
    pub total_volume: Rat,
    pub max_overlap: Rat,
    /// Cell index pairs with positive-volume intersections.
    pub overlapping: Vec<(usize, usize, Rat)>,
}

impl CellUnionReport {
    pub fn passes(&self) -> bool {
        self.max_overlap.is_zero()
    }
}

/// Total volume and the maximum pairwise interior-overlap volume.
pub fn validate_cell_union(u: &CellUnion) -> Result<CellUnionReport, PolytopeError> {
    let Some(first) = u.cells.first() else {
        return Ok(CellUnionReport {
            total_volume: Rat::zero(),
            max_overlap: Rat::zero(),
            overlapping: Vec::new(),
        });
    };
    let dim = first.dim();
    if u.cells.iter().any(|c| c.dim() != dim) {
        return Err(PolytopeError::BadInput(
            "cells of a union must share a dimension".into(),
        ));
    }
    let mut total = Rat::zero();
    for c in &u.cells {
        total += c.volume();
    }
    let mut max_overlap = Rat::zero();
    let mut overlapping = Vec::new();
    for i in 0..u.cells.len() {
        for j in i + 1..u.cells.len() {
            if boxes_disjoint(&u.cells[i], &u.cells[j]) {
                continue;
            }
            if let Some(inter) = u.cells[i].intersection(&u.cells[j])? {
                let v = inter.volume();
                if !v.is_zero() {
                    if v > max_overlap {
                        max_overlap = v.clone();
                    }
                    overlapping.push((i, j, v));
                }
            }
        }
    }
    Ok(CellUnionReport {
        total_volume: total,
        max_overlap,
        overlapping,
    })
}

/// Cheap separation test on coordinate bounding boxes.
fn boxes_disjoint(a: &Polytope, b: &Polytope) -> bool {
    for axis in 0..a.dim() {
        let (alo, ahi) = a.axis_range(axis);
        let (blo, bhi) = b.axis_range(axis);
        if ahi <= blo || bhi <= alo {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat_i;
    use crate::polytope::Halfspace;

    fn square(x0: i64, x1: i64) -> Polytope {
        let hs = [
            Halfspace::new(vec![rat_i(-1), rat_i(0)], rat_i(-x0)),
            Halfspace::new(vec![rat_i(1), rat_i(0)], rat_i(x1)),
            Halfspace::new(vec![rat_i(0), rat_i(-1)], rat_i(0)),
            Halfspace::new(vec![rat_i(0), rat_i(1)], rat_i(1)),
        ];
        Polytope::from_halfspaces(2, &hs).unwrap()
    }

    #[test]
    fn edge_sharing_squares_pass() {
        let u = CellUnion {
            cells: vec![square(0, 1), square(1, 2)],
        };
        let r = validate_cell_union(&u).unwrap();
        assert!(r.passes());
        assert_eq!(r.total_volume, rat_i(2));
        assert!(r.overlapping.is_empty());
    }

    #[test]
    fn identical_cells_fail_with_cell_volume() {
        let u = CellUnion {
            cells: vec![square(0, 1), square(0, 1)],
        };
        let r = validate_cell_union(&u).unwrap();
        assert!(!r.passes());
        assert_eq!(r.max_overlap, rat_i(1));
        assert_eq!(r.overlapping, vec![(0, 1, rat_i(1))]);
    }

    #[test]
    fn mixed_dimensions_rejected() {
        let line = Polytope::from_halfspaces(
            1,
            &[
                Halfspace::new(vec![rat_i(-1)], rat_i(0)),
                Halfspace::new(vec![rat_i(1)], rat_i(1)),
            ],
        )
        .unwrap();
        let u = CellUnion {
            cells: vec![square(0, 1), line],
        };
        assert!(validate_cell_union(&u).is_err());
    }
}
