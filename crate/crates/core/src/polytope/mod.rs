//! Convex polytopes in low dimension with dual representations.
//!
//! Polytopes keep both an H-representation (halfspaces `normal·x ≤ offset`)
//! and a V-representation (vertices), cross-validated at construction. All
//! geometry is exact rational arithmetic; there is no floating point kernel.
//! Vertex enumeration is exhaustive over d-subsets of halfspaces, which is
//! the right trade at dimension ≤ 5 with a few dozen halfspaces.

mod hull;
mod marginal;
mod triangulate;
mod union;

pub use hull::convex_hull;
pub use marginal::{marginal_over_fibers, PiecewisePoly};
pub use union::{validate_cell_union, CellUnion, CellUnionReport};

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::linalg::{affine_rank, Mat};
use crate::exact::poly::Poly;
use crate::exact::rational::{factorial, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    /// The halfspaces have no common point.
    Empty,
    /// The feasible set has a recession direction.
    Unbounded,
    /// Input does not span a full-dimensional body.
    Degenerate { rank: usize, dim: usize },
    /// A normal vector was all zeros, or dimensions disagree.
    BadInput(String),
    /// Polynomial variables do not match the ambient dimension.
    VariableMismatch { vars: usize, dim: usize },
}

impl std::fmt::Display for PolytopeError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PolytopeError::Empty => write!(f, "empty polytope"),
            PolytopeError::Unbounded => write!(f, "unbounded polyhedron"),
            PolytopeError::Degenerate { rank, dim } => {
                write!(f, "degenerate input: affine rank {rank} in dimension {dim}")
            }
            PolytopeError::BadInput(msg) => write!(f, "bad input: {msg}"),
            PolytopeError::VariableMismatch { vars, dim } => {
                write!(f, "polynomial has {vars} variables but the polytope has dimension {dim}")
            }
        }
    }
}

impl std::error::Error for PolytopeError {}

/// `normal·x ≤ offset`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Halfspace {
    pub normal: Vec<Rat>,
    pub offset: Rat,
}

impl Halfspace {
    pub fn new(normal: Vec<Rat>, offset: Rat) -> Self {
        Halfspace { normal, offset }
    }

    /// Slack `offset - normal·x`; nonnegative inside.
    pub fn slack(&self, x: &[Rat]) -> Rat {
        let dot: Rat = self
            .normal
            .iter()
            .zip(x)
            .map(|(n, xi)| n.clone() * xi.clone())
            .sum();
        self.offset.clone() - dot
    }

    pub fn is_tight(&self, x: &[Rat]) -> bool {
        self.slack(x).is_zero()
    }

    /// Scale by the unique positive rational making all entries coprime
    /// integers (the inequality is unchanged).
    pub fn canonical(&self) -> Halfspace {
        let mut denom_lcm = BigInt::one();
        for r in self.normal.iter().chain(std::iter::once(&self.offset)) {
            denom_lcm = denom_lcm.lcm(r.denom());
        }
        let ints: Vec<BigInt> = self
            .normal
            .iter()
            .chain(std::iter::once(&self.offset))
            .map(|r| r.numer() * &denom_lcm / r.denom())
            .collect();
        let mut g = BigInt::zero();
        for v in &ints {
            g = g.gcd(v);
        }
        if g.is_zero() {
            g = BigInt::one();
        }
        let scaled: Vec<Rat> = ints
            .iter()
            .map(|v| Rat::from_integer(v / &g))
            .collect();
        let (normal, offset) = scaled.split_at(self.normal.len());
        Halfspace {
            normal: normal.to_vec(),
            offset: offset[0].clone(),
        }
    }
}

/// Bounded full-dimensional convex polytope with validated dual
/// representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    halfspaces: Vec<Halfspace>,
    vertices: Vec<Vec<Rat>>,
}

impl Polytope {
    /// Build from halfspaces: enumerate vertices, check boundedness and full
    /// dimensionality.
    pub fn from_halfspaces(dim: usize, halfspaces: &[Halfspace]) -> Result<Self, PolytopeError> {
        let hs = clean_halfspaces(dim, halfspaces)?;
        let vertices = enumerate_vertices(dim, &hs);
        if vertices.is_empty() {
            return Err(PolytopeError::Empty);
        }
        check_bounded(dim, &hs)?;
        let rank = affine_rank(&vertices);
        if rank != dim {
            return Err(PolytopeError::Degenerate { rank, dim });
        }
        Ok(Polytope {
            dim,
            halfspaces: hs,
            vertices,
        })
    }

    /// Like [`Polytope::from_halfspaces`] but mapping empty or lower
    /// dimensional feasible sets to `None` (they have zero volume).
    pub fn try_full_dimensional(
        dim: usize,
        halfspaces: &[Halfspace],
    ) -> Result<Option<Self>, PolytopeError> {
        match Polytope::from_halfspaces(dim, halfspaces) {
            Ok(p) => Ok(Some(p)),
            Err(PolytopeError::Empty) | Err(PolytopeError::Degenerate { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[Vec<Rat>] {
        &self.vertices
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.halfspaces.iter().all(|h| !h.slack(x).is_negative())
    }

    /// Exact Lebesgue volume via simplicial decomposition.
    pub fn volume(&self) -> Rat {
        let mut acc = Rat::zero();
        for s in self.triangulate() {
            acc += simplex_volume(&s);
        }
        acc
    }

    /// Exact `∫_P f dλ` via triangulation and the Dirichlet monomial
    /// formula over the standard simplex.
    pub fn integrate(&self, f: &Poly) -> Result<Rat, PolytopeError> {
        if f.vars().len() != self.dim {
            return Err(PolytopeError::VariableMismatch {
                vars: f.vars().len(),
                dim: self.dim,
            });
        }
        let mut acc = Rat::zero();
        for s in self.triangulate() {
            acc += triangulate::integrate_over_simplex(f, &s);
        }
        Ok(acc)
    }

    /// Decompose into simplices, each given by dim+1 vertices.
    pub fn triangulate(&self) -> Vec<Vec<Vec<Rat>>> {
        triangulate::triangulate(self)
    }

    /// Intersect with one more halfspace; `None` when the result is empty or
    /// lower dimensional.
    pub fn intersect_halfspace(&self, h: &Halfspace) -> Result<Option<Polytope>, PolytopeError> {
        let mut hs = self.halfspaces.clone();
        hs.push(h.clone());
        Polytope::try_full_dimensional(self.dim, &hs)
    }

    /// Full-dimensional intersection with another polytope, if any.
    pub fn intersection(&self, other: &Polytope) -> Result<Option<Polytope>, PolytopeError> {
        if self.dim != other.dim {
            return Err(PolytopeError::BadInput(
                "intersection of polytopes of different dimension".into(),
            ));
        }
        let mut hs = self.halfspaces.clone();
        hs.extend(other.halfspaces.iter().cloned());
        Polytope::try_full_dimensional(self.dim, &hs)
    }

    /// Substitute `x_axis = value` and drop the axis; `None` when the slice
    /// is empty or lower dimensional in the hyperplane.
    pub fn slice(&self, axis: usize, value: &Rat) -> Result<Option<Polytope>, PolytopeError> {
        assert!(self.dim >= 2, "slice needs ambient dimension at least 2");
        let hs: Vec<Halfspace> = self
            .halfspaces
            .iter()
            .map(|h| {
                let mut normal = h.normal.clone();
                let coef = normal.remove(axis);
                Halfspace::new(normal, h.offset.clone() - coef * value.clone())
            })
            .collect();
        Polytope::try_full_dimensional(self.dim - 1, &hs)
    }

    /// The coordinate range of the polytope along one axis.
    pub fn axis_range(&self, axis: usize) -> (Rat, Rat) {
        let mut lo = self.vertices[0][axis].clone();
        let mut hi = lo.clone();
        for v in &self.vertices {
            if v[axis] < lo {
                lo = v[axis].clone();
            }
            if v[axis] > hi {
                hi = v[axis].clone();
            }
        }
        (lo, hi)
    }
}

fn clean_halfspaces(dim: usize, halfspaces: &[Halfspace]) -> Result<Vec<Halfspace>, PolytopeError> {
    let mut set = BTreeSet::new();
    for h in halfspaces {
        if h.normal.len() != dim {
            return Err(PolytopeError::BadInput(format!(
                "normal of length {} in dimension {}",
                h.normal.len(),
                dim
            )));
        }
        if h.normal.iter().all(|c| c.is_zero()) {
            if h.offset.is_negative() {
                return Err(PolytopeError::Empty);
            }
            continue; // trivially true constraint
        }
        set.insert(h.canonical());
    }
    if set.is_empty() {
        return Err(PolytopeError::BadInput("no effective halfspaces".into()));
    }
    Ok(set.into_iter().collect())
}

/// All feasible intersection points of d-subsets of halfspace boundaries.
fn enumerate_vertices(dim: usize, hs: &[Halfspace]) -> Vec<Vec<Rat>> {
    let n = hs.len();
    let mut out: BTreeSet<Vec<Rat>> = BTreeSet::new();
    let mut subset: Vec<usize> = (0..dim).collect();
    if n < dim {
        return Vec::new();
    }
    loop {
        let mat = Mat::from_rows(subset.iter().map(|&i| hs[i].normal.clone()).collect());
        let rhs: Vec<Rat> = subset.iter().map(|&i| hs[i].offset.clone()).collect();
        if let Some(x) = mat.solve(&rhs) {
            if hs.iter().all(|h| !h.slack(&x).is_negative()) {
                out.insert(x);
            }
        }
        // next d-combination of {0..n}
        let mut i = dim;
        loop {
            if i == 0 {
                return out.into_iter().collect();
            }
            i -= 1;
            if subset[i] != i + n - dim {
                subset[i] += 1;
                for j in i + 1..dim {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Error if the recession cone `{x : normal·x ≤ 0}` is nontrivial.
fn check_bounded(dim: usize, hs: &[Halfspace]) -> Result<(), PolytopeError> {
    let normals = Mat::from_rows(hs.iter().map(|h| h.normal.clone()).collect());
    // a line in the feasible set shows up in the kernel of the normals
    if !normals.nullspace().is_empty() {
        return Err(PolytopeError::Unbounded);
    }
    // a pointed nontrivial cone has an extreme ray cut out by dim-1
    // independent tight constraints
    let n = hs.len();
    if dim == 1 {
        // rays are ±e_0
        for dir in [Rat::one(), -Rat::one()] {
            let ray = vec![dir];
            if hs.iter().all(|h| !ray_escapes(h, &ray)) {
                return Err(PolytopeError::Unbounded);
            }
        }
        return Ok(());
    }
    let mut subset: Vec<usize> = (0..dim - 1).collect();
    loop {
        let mat = Mat::from_rows(subset.iter().map(|&i| hs[i].normal.clone()).collect());
        let null = mat.nullspace();
        if null.len() == 1 {
            for cand in [null[0].clone(), null[0].iter().map(|c| -c.clone()).collect()] {
                if hs.iter().all(|h| !ray_escapes(h, &cand)) {
                    return Err(PolytopeError::Unbounded);
                }
            }
        }
        let mut i = dim - 1;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            if subset[i] != i + n - (dim - 1) {
                subset[i] += 1;
                for j in i + 1..dim - 1 {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// True when moving along `ray` eventually violates `h`.
fn ray_escapes(h: &Halfspace, ray: &[Rat]) -> bool {
    let dot: Rat = h
        .normal
        .iter()
        .zip(ray)
        .map(|(n, r)| n.clone() * r.clone())
        .sum();
    dot.is_positive()
}

/// |det(v_1 - v_0, …, v_d - v_0)| / d!
pub fn simplex_volume(simplex: &[Vec<Rat>]) -> Rat {
    let d = simplex.len() - 1;
    if d == 0 {
        return Rat::zero();
    }
    let rows: Vec<Vec<Rat>> = simplex[1..]
        .iter()
        .map(|v| {
            v.iter()
                .zip(&simplex[0])
                .map(|(a, b)| a.clone() - b.clone())
                .collect()
        })
        .collect();
    let det = Mat::from_rows(rows).det();
    let vol = if det.is_negative() { -det } else { det };
    vol / factorial(d as u32)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{rat, rat_i};

    pub(crate) fn unit_box(dim: usize) -> Polytope {
        let mut hs = Vec::new();
        for i in 0..dim {
            let mut lo = vec![Rat::zero(); dim];
            lo[i] = rat_i(-1);
            hs.push(Halfspace::new(lo, Rat::zero()));
            let mut hi = vec![Rat::zero(); dim];
            hi[i] = rat_i(1);
            hs.push(Halfspace::new(hi, rat_i(1)));
        }
        Polytope::from_halfspaces(dim, &hs).unwrap()
    }

    #[test]
    fn unit_cube_volume() {
        for dim in 1..=4 {
            let p = unit_box(dim);
            assert_eq!(p.volume(), rat_i(1), "dim {dim}");
            assert_eq!(p.vertices().len(), 1 << dim);
        }
    }

    #[test]
    fn simplex_volume_formula() {
        // standard simplex x_i >= 0, sum <= 1 has volume 1/d!
        for dim in 2..=5 {
            let mut hs = Vec::new();
            for i in 0..dim {
                let mut n = vec![Rat::zero(); dim];
                n[i] = rat_i(-1);
                hs.push(Halfspace::new(n, Rat::zero()));
            }
            hs.push(Halfspace::new(vec![rat_i(1); dim], rat_i(1)));
            let p = Polytope::from_halfspaces(dim, &hs).unwrap();
            assert_eq!(p.volume(), rat_i(1) / factorial(dim as u32));
        }
    }

    #[test]
    fn unbounded_is_detected() {
        // x >= 0 alone in the plane
        let hs = [Halfspace::new(vec![rat_i(-1), Rat::zero()], Rat::zero())];
        assert_eq!(
            Polytope::from_halfspaces(2, &hs),
            Err(PolytopeError::Empty) // no vertex at all from a single plane
        );
        // half-strip: 0 <= y <= 1, x >= 0 — has vertices but recedes in x
        let hs = [
            Halfspace::new(vec![Rat::zero(), rat_i(-1)], Rat::zero()),
            Halfspace::new(vec![Rat::zero(), rat_i(1)], rat_i(1)),
            Halfspace::new(vec![rat_i(-1), Rat::zero()], Rat::zero()),
        ];
        assert_eq!(Polytope::from_halfspaces(2, &hs), Err(PolytopeError::Unbounded));
    }

    #[test]
    fn empty_intersection_is_none() {
        let p = unit_box(2);
        let far = Halfspace::new(vec![rat_i(1), Rat::zero()], rat_i(-5));
        assert_eq!(p.intersect_halfspace(&far).unwrap(), None);
        // touching at a face gives a lower-dimensional set -> None
        let touch = Halfspace::new(vec![rat_i(-1), Rat::zero()], Rat::zero());
        let q = Polytope::from_halfspaces(
            2,
            &[
                touch.clone(),
                Halfspace::new(vec![rat_i(1), Rat::zero()], Rat::zero()),
                Halfspace::new(vec![Rat::zero(), rat_i(1)], rat_i(1)),
                Halfspace::new(vec![Rat::zero(), rat_i(-1)], Rat::zero()),
            ],
        );
        assert!(matches!(q, Err(PolytopeError::Degenerate { .. })));
    }

    #[test]
    fn integrate_xy_over_unit_square() {
        let hs = [
            Halfspace::new(vec![rat_i(-1), Rat::zero()], Rat::zero()),
            Halfspace::new(vec![rat_i(1), Rat::zero()], rat_i(1)),
            Halfspace::new(vec![Rat::zero(), rat_i(-1)], Rat::zero()),
            Halfspace::new(vec![Rat::zero(), rat_i(1)], rat_i(1)),
        ];
        let p = Polytope::from_halfspaces(2, &hs).unwrap();
        let f = Poly::from_terms(&["x", "y"], &[(rat_i(1), vec![1, 1])]);
        assert_eq!(p.integrate(&f).unwrap(), rat(1, 4));
        let one = Poly::constant(&["x", "y"], rat_i(1));
        assert_eq!(p.integrate(&one).unwrap(), p.volume());
    }

    #[test]
    fn slice_of_a_cube_is_a_square() {
        let p = unit_box(3);
        let s = p.slice(0, &rat(1, 2)).unwrap().unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.volume(), rat_i(1));
        assert_eq!(p.slice(0, &rat_i(7)).unwrap(), None);
    }

    #[test]
    fn axis_range_and_contains() {
        let p = unit_box(2);
        assert_eq!(p.axis_range(0), (rat_i(0), rat_i(1)));
        assert!(p.contains(&[rat(1, 2), rat(1, 3)]));
        assert!(!p.contains(&[rat(3, 2), rat(1, 3)]));
    }
}
