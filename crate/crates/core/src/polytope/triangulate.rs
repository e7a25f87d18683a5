//! Simplicial decomposition and exact polynomial integration over simplices.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::exact::linalg::{affine_rank, Mat};
use crate::exact::poly::Poly;
use crate::exact::rational::{factorial, Rat};

use super::Polytope;

/// Cone-over-facets triangulation, recursing through the face lattice.
///
/// Faces are identified by the set of polytope vertices they contain; the
/// subfaces of a face are cut out by the halfspaces that are tight on a
/// subset of its vertices of the right affine rank.
pub fn triangulate(p: &Polytope) -> Vec<Vec<Vec<Rat>>> {
    let all: Vec<usize> = (0..p.vertices().len()).collect();
    let mut out = Vec::new();
    triangulate_face(p, &all, p.dim(), &mut out);
    out
}

fn triangulate_face(p: &Polytope, face: &[usize], face_dim: usize, out: &mut Vec<Vec<Vec<Rat>>>) {
    debug_assert!(!face.is_empty());
    if face.len() == face_dim + 1 {
        out.push(face.iter().map(|&i| p.vertices()[i].clone()).collect());
        return;
    }
    // apex: lexicographically smallest vertex of the face (vertices are
    // stored sorted, so the smallest index works)
    let apex = face[0];
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for h in p.halfspaces() {
        let tight: Vec<usize> = face
            .iter()
            .copied()
            .filter(|&i| h.is_tight(&p.vertices()[i]))
            .collect();
        if tight.len() == face.len() || tight.is_empty() || tight.contains(&apex) {
            continue;
        }
        let pts: Vec<Vec<Rat>> = tight.iter().map(|&i| p.vertices()[i].clone()).collect();
        if affine_rank(&pts) != face_dim - 1 {
            continue;
        }
        if !seen.insert(tight.clone()) {
            continue;
        }
        let mut sub = Vec::new();
        triangulate_face(p, &tight, face_dim - 1, &mut sub);
        for mut simplex in sub {
            simplex.push(p.vertices()[apex].clone());
            out.push(simplex);
        }
    }
}

/// Exact `∫_S f` for a full-dimensional simplex `S` given by d+1 vertices.
///
/// Substitutes the barycentric parameterization `x = v_0 + Σ t_i (v_i - v_0)`
/// and integrates monomials with the Dirichlet formula
/// `∫_Δ t^α dt = (Π α_i!) / (d + Σ α_i)!`.
pub fn integrate_over_simplex(f: &Poly, simplex: &[Vec<Rat>]) -> Rat {
    let d = simplex.len() - 1;
    debug_assert_eq!(f.vars().len(), d, "simplex/polynomial dimension mismatch");
    let rows: Vec<Vec<Rat>> = simplex[1..]
        .iter()
        .map(|v| {
            v.iter()
                .zip(&simplex[0])
                .map(|(a, b)| a.clone() - b.clone())
                .collect()
        })
        .collect();
    let jac = Mat::from_rows(rows.clone());
    let det = jac.det();
    if det.is_zero() {
        return Rat::zero();
    }
    let absdet = if det < Rat::zero() { -det } else { det };

    // x_j as an affine polynomial in t_1..t_d
    let tvars: Vec<String> = (0..d).map(|i| format!("t{i}")).collect();
    let trefs: Vec<&str> = tvars.iter().map(|s| s.as_str()).collect();
    let coords: Vec<Poly> = (0..d)
        .map(|j| {
            let mut terms = vec![(simplex[0][j].clone(), vec![0u32; d])];
            for (i, row) in rows.iter().enumerate() {
                let mut e = vec![0u32; d];
                e[i] = 1;
                terms.push((row[j].clone(), e));
            }
            Poly::from_terms(&trefs, &terms)
        })
        .collect();
    let g = f.substitute(&trefs, &coords);

    let mut acc = Rat::zero();
    for (e, c) in g.terms() {
        let total: u32 = e.iter().sum();
        let mut num = Rat::from_integer(1.into());
        for &k in e {
            num *= factorial(k);
        }
        acc += c.clone() * num / factorial(total + d as u32);
    }
    acc * absdet
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{rat, rat_i};
    use crate::polytope::Halfspace;

    #[test]
    fn triangulation_covers_the_cube() {
        let p = crate::polytope::tests::unit_box(3);
        let simplices = triangulate(&p);
        let total: Rat = simplices.iter().map(|s| super::super::simplex_volume(s)).sum();
        assert_eq!(total, rat_i(1));
    }

    #[test]
    fn dirichlet_formula_on_standard_simplex() {
        // ∫ t0 over the standard triangle = 1/6
        let hs = [
            Halfspace::new(vec![rat_i(-1), rat_i(0)], rat_i(0)),
            Halfspace::new(vec![rat_i(0), rat_i(-1)], rat_i(0)),
            Halfspace::new(vec![rat_i(1), rat_i(1)], rat_i(1)),
        ];
        let p = crate::polytope::Polytope::from_halfspaces(2, &hs).unwrap();
        let f = Poly::var(&["x", "y"], "x");
        assert_eq!(p.integrate(&f).unwrap(), rat(1, 6));
    }
}
