//! Dense exact linear algebra over Q(zeta_m): reduced row echelon form,
//! rank, kernels, solving, inversion. Sizes here are small (a few hundred at
//! most), so Gaussian elimination with exact scalars is the right tool.

use crate::scalar::Cyclotomic;

#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Cyclotomic>,
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.at(i, j).render()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Cyclotomic::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Cyclotomic::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Cyclotomic>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            data.extend(row);
        }
        Mat { rows: r, cols: c, data }
    }

    /// Columns are coordinate vectors of length `dim`.
    pub fn from_columns(cols: &[Vec<Cyclotomic>], dim: usize) -> Self {
        let mut m = Self::zero(dim, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), dim);
            for (i, v) in col.iter().enumerate() {
                *m.at_mut(i, j) = v.clone();
            }
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> &Cyclotomic {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Cyclotomic {
        &mut self.data[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> Vec<Cyclotomic> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        t
    }

    pub fn matmul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Mat::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let t = a * b;
                    *out.at_mut(i, j) += &t;
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Cyclotomic]) -> Vec<Cyclotomic> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![Cyclotomic::zero(); self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.at(i, j);
                if a.is_zero() || v[j].is_zero() {
                    continue;
                }
                let t = a * &v[j];
                out[i] += &t;
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    /// In-place reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.at(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..self.cols {
                    self.data.swap(row * self.cols + j, p * self.cols + j);
                }
            }
            let inv = self.at(row, col).inv().expect("pivot nonzero");
            for j in col..self.cols {
                let v = self.at(row, j) * &inv;
                *self.at_mut(row, j) = v;
            }
            for r in 0..self.rows {
                if r != row && !self.at(r, col).is_zero() {
                    let factor = self.at(r, col).clone();
                    for j in col..self.cols {
                        let t = &factor * self.at(row, j);
                        *self.at_mut(r, j) -= &t;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the null space, as coordinate vectors of length `cols`.
    pub fn kernel_basis(&self) -> Vec<Vec<Cyclotomic>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![Cyclotomic::zero(); self.cols];
            v[free] = Cyclotomic::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m.at(r, free);
            }
            basis.push(v);
        }
        basis
    }

    /// Solve self * x = b; None when inconsistent. When the system is
    /// underdetermined, free variables are set to zero.
    pub fn solve(&self, b: &[Cyclotomic]) -> Option<Vec<Cyclotomic>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Mat::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, self.cols) = b[i].clone();
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None; // pivot in the augmented column
        }
        let mut x = vec![Cyclotomic::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug.at(r, self.cols).clone();
        }
        Some(x)
    }

    /// Coordinates of each column of `targets` in the span of `basis`
    /// (columns); None when some target is outside the span.
    pub fn coords_in_span(basis: &Mat, target: &[Cyclotomic]) -> Option<Vec<Cyclotomic>> {
        basis.solve_consistent(target)
    }

    fn solve_consistent(&self, b: &[Cyclotomic]) -> Option<Vec<Cyclotomic>> {
        let x = self.solve(b)?;
        // Verify: solve() soundness check (cheap at these sizes).
        let back = self.apply(&x);
        if back
            .iter()
            .zip(b.iter())
            .all(|(u, v)| (u - v).is_zero())
        {
            Some(x)
        } else {
            None
        }
    }

    pub fn det(&self) -> Cyclotomic {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Cyclotomic::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m.at(r, col).is_zero()) else {
                return Cyclotomic::zero();
            };
            if p != col {
                for j in 0..n {
                    m.data.swap(col * n + j, p * n + j);
                }
                det = -&det;
            }
            let pivot = m.at(col, col).clone();
            det = &det * &pivot;
            let inv = pivot.inv().unwrap();
            for r in col + 1..n {
                if m.at(r, col).is_zero() {
                    continue;
                }
                let factor = m.at(r, col) * &inv;
                for j in col..n {
                    let t = &factor * m.at(col, j);
                    *m.at_mut(r, j) -= &t;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, n + i) = Cyclotomic::one();
        }
        let pivots = aug.rref();
        if pivots.len() < n {
            return None;
        }
        let mut out = Mat::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                *out.at_mut(i, j) = aug.at(i, n + j).clone();
            }
        }
        Some(out)
    }

    /// Column-space basis as a list of vectors (columns of self picked and
    /// reduced deterministically via rref of the transpose).
    pub fn column_space_basis(&self) -> Vec<Vec<Cyclotomic>> {
        let mut t = self.transpose();
        t.rref();
        let mut out = Vec::new();
        for i in 0..t.rows {
            let row: Vec<Cyclotomic> = (0..t.cols).map(|j| t.at(i, j).clone()).collect();
            if row.iter().any(|c| !c.is_zero()) {
                out.push(row);
            }
        }
        out
    }

    /// Do the columns of `a` and `b` span the same subspace?
    pub fn same_span(a: &Mat, b: &Mat) -> bool {
        assert_eq!(a.rows, b.rows);
        let ra = a.rank();
        let rb = b.rank();
        if ra != rb {
            return false;
        }
        let mut joint = Mat::zero(a.rows, a.cols + b.cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                *joint.at_mut(i, j) = a.at(i, j).clone();
            }
            for j in 0..b.cols {
                *joint.at_mut(i, a.cols + j) = b.at(i, j).clone();
            }
        }
        joint.rank() == ra
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> Cyclotomic {
        Cyclotomic::from_int(n)
    }

    #[test]
    fn rref_rank_kernel() {
        let m = Mat::from_rows(vec![
            vec![c(1), c(2), c(3)],
            vec![c(2), c(4), c(6)],
            vec![c(1), c(0), c(1)],
        ]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        let img = m.apply(&k[0]);
        assert!(img.iter().all(|v| v.is_zero()));
    }

    #[test]
    fn solve_and_inverse() {
        let m = Mat::from_rows(vec![vec![c(2), c(1)], vec![c(1), c(1)]]);
        let x = m.solve(&[c(3), c(2)]).unwrap();
        assert_eq!(x, vec![c(1), c(1)]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.matmul(&inv), Mat::identity(2));
        assert_eq!(m.det(), c(1));
    }

    #[test]
    fn cyclotomic_entries() {
        let z = Cyclotomic::primitive_root(4);
        let m = Mat::from_rows(vec![
            vec![z.clone(), c(1)],
            vec![c(-1), z.clone()],
        ]);
        // det = z^2 + 1 = 0, so the matrix is singular over Q(i)
        assert!(m.det().is_zero());
        assert_eq!(m.rank(), 1);
    }
}
