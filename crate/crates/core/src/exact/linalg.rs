//! Dense exact linear algebra over the rationals.
//!
//! Sizes here are tiny (dimension ≤ 5 geometry, ≤ ~30-column constraint
//! systems), so plain fraction arithmetic with Gauss–Jordan elimination is
//! the right tool; there is no floating point anywhere.

use num_traits::{One, Zero};

use super::rational::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Reduced row echelon form in place; returns pivot column indices.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].recip();
            for j in c..self.cols {
                let v = self[(r, j)].clone() * inv.clone();
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let f = self[(i, c)].clone();
                    for j in c..self.cols {
                        let v = self[(i, j)].clone() - f.clone() * self[(r, j)].clone();
                        self[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right nullspace, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::new();
        for &fc in &free {
            let mut v = vec![Rat::zero(); self.cols];
            v[fc] = Rat::one();
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[(ri, fc)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Solve a square system A·x = b; `None` when A is singular.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(self.rows, self.cols, "solve wants a square matrix");
        assert_eq!(b.len(), self.rows);
        let n = self.rows;
        let mut aug = Mat::zero(n, n + 1);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n)] = b[i].clone();
        }
        let pivots = aug.rref();
        if pivots.len() != n || pivots.contains(&n) {
            return None;
        }
        Some((0..n).map(|i| aug[(i, n)].clone()).collect())
    }

    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols, "det wants a square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Rat::zero();
            };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            det *= m[(c, c)].clone();
            let inv = m[(c, c)].recip();
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone() * inv.clone();
                for j in c..n {
                    let v = m[(i, j)].clone() - f.clone() * m[(c, j)].clone();
                    m[(i, j)] = v;
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// Rank of the set of difference vectors `p_i - p_0` (affine rank).
pub fn affine_rank(points: &[Vec<Rat>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let base = &points[0];
    let rows: Vec<Vec<Rat>> = points[1..]
        .iter()
        .map(|p| {
            p.iter()
                .zip(base)
                .map(|(a, b)| a.clone() - b.clone())
                .collect()
        })
        .collect();
    Mat::from_rows(rows).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{rat, rat_i};

    #[test]
    fn solve_and_det() {
        let a = Mat::from_rows(vec![
            vec![rat_i(2), rat_i(1)],
            vec![rat_i(1), rat_i(3)],
        ]);
        assert_eq!(a.det(), rat_i(5));
        let x = a.solve(&[rat_i(4), rat_i(7)]).unwrap();
        assert_eq!(x, vec![rat_i(1), rat_i(2)]);
        let sing = Mat::from_rows(vec![
            vec![rat_i(1), rat_i(2)],
            vec![rat_i(2), rat_i(4)],
        ]);
        assert!(sing.solve(&[rat_i(1), rat_i(1)]).is_none());
        assert_eq!(sing.det(), rat_i(0));
    }

    #[test]
    fn nullspace_vectors_annihilate() {
        let a = Mat::from_rows(vec![
            vec![rat_i(1), rat_i(2), rat_i(3)],
            vec![rat_i(2), rat_i(4), rat_i(6)],
        ]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for i in 0..a.rows {
                let dot: Rat = a
                    .row(i)
                    .iter()
                    .zip(v)
                    .map(|(x, y)| x.clone() * y.clone())
                    .sum();
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn affine_rank_of_simplex() {
        let pts = vec![
            vec![rat_i(0), rat_i(0)],
            vec![rat_i(1), rat_i(0)],
            vec![rat_i(0), rat_i(1)],
            vec![rat(1, 2), rat(1, 2)],
        ];
        assert_eq!(affine_rank(&pts), 2);
        assert_eq!(affine_rank(&pts[..2]), 1);
    }
}
