//! Dense matrices over [`Scalar`]: products, inverses, nullspaces and
//! fraction-free rank computations with a nonzero-minor certificate.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Rank of a matrix together with a nonzero maximal minor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCertificate {
    pub rank: usize,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub minor: Scalar,
}

fn weight(s: &Scalar) -> usize {
    s.even().weight() + s.odd().weight() + s.den().weight()
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn conj(&self) -> Matrix {
        self.map(|x| x.conj())
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        self.map(|x| x * c)
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix shapes differ");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        self.add(&o.scale(&Scalar::from_int(-1)))
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "matrix shapes do not compose");
        let mut out = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    /// Selects a submatrix.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    fn pick_pivot(&self, col: usize, from: usize) -> Option<usize> {
        (from..self.rows).filter(|&i| !self.get(i, col).is_zero()).min_by_key(|&i| weight(self.get(i, col)))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = m.pick_pivot(c, r) else { continue };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("pivot is nonzero");
            for j in 0..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..m.cols {
                    let b = m.get(r, j);
                    if !b.is_zero() {
                        let v = m.get(i, j) - &(&f * b);
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Singular);
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Scalar::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(Matrix::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }

    pub fn determinant(&self) -> Scalar {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(p) = m.pick_pivot(c, c) else { return Scalar::zero() };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det = &det * &piv;
            let inv = piv.inv().expect("pivot is nonzero");
            for i in c + 1..n {
                let f = m.get(i, c) * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j) - &(&f * m.get(c, j));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Fraction-free (Bareiss) elimination with full pivoting. The selected
    /// rows and columns (sorted) index a nonzero minor of maximal size, whose
    /// determinant is recomputed independently and stored in the certificate.
    pub fn rank_certificate(&self) -> RankCertificate {
        let mut m = self.clone();
        let mut row_idx: Vec<usize> = (0..m.rows).collect();
        let mut col_idx: Vec<usize> = (0..m.cols).collect();
        let mut prev = Scalar::one();
        let mut rank = 0;
        for k in 0..m.rows.min(m.cols) {
            let mut best: Option<(usize, usize, usize)> = None;
            for i in k..m.rows {
                for j in k..m.cols {
                    let x = m.get(i, j);
                    if !x.is_zero() {
                        let w = weight(x);
                        if best.map(|b| w < b.2).unwrap_or(true) {
                            best = Some((i, j, w));
                        }
                    }
                }
            }
            let Some((pi, pj, _)) = best else { break };
            m.swap_rows(k, pi);
            row_idx.swap(k, pi);
            m.swap_cols(k, pj);
            col_idx.swap(k, pj);
            let pivot = m.get(k, k).clone();
            for i in k + 1..m.rows {
                let aik = m.get(i, k).clone();
                for j in k + 1..m.cols {
                    let v = &(&pivot * m.get(i, j)) - &(&aik * m.get(k, j));
                    m.set(i, j, v.checked_div(&prev).expect("previous pivot is nonzero"));
                }
                m.set(i, k, Scalar::zero());
            }
            prev = pivot;
            rank += 1;
        }
        let mut rows: Vec<usize> = row_idx[..rank].to_vec();
        let mut cols: Vec<usize> = col_idx[..rank].to_vec();
        rows.sort_unstable();
        cols.sort_unstable();
        let minor = if rank == 0 { Scalar::one() } else { self.select(&rows, &cols).determinant() };
        RankCertificate { rank, rows, cols, minor }
    }

    /// Basis of the right nullspace.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(row, free);
            }
            out.push(v);
        }
        out
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let cells: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Var;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn inverse_round_trip() {
        let x = Scalar::var(&Var::real("x"));
        let m = Matrix::from_rows(vec![vec![x.clone(), s(1)], vec![s(1), s(1)]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        let sing = Matrix::from_rows(vec![vec![x.clone(), x.clone()], vec![s(1), s(1)]]);
        assert_eq!(sing.inverse(), Err(Error::Singular));
    }

    #[test]
    fn rank_with_certificate() {
        let x = Scalar::var(&Var::real("x"));
        let m = Matrix::from_rows(vec![
            vec![x.clone(), s(1), s(0)],
            vec![&x * &x, x.clone(), s(0)],
            vec![s(0), s(0), s(2)],
        ]);
        let c = m.rank_certificate();
        assert_eq!(c.rank, 2);
        assert!(!c.minor.is_zero());
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).iter().all(|v| v.is_zero()));
    }

    #[test]
    fn determinant_matches_expansion() {
        let m = Matrix::from_rows(vec![vec![s(2), s(3)], vec![s(5), s(7)]]);
        assert_eq!(m.determinant(), s(-1));
    }
}
