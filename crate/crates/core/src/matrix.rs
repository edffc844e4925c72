//! Dense matrices over GF(q).

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

/// Row-major dense matrix over a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn new(field: &Field, rows: usize, cols: usize, data: Vec<Elem>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(&bad) = data.iter().find(|&&x| !field.contains(x)) {
            return Err(Error::InvalidEntry {
                value: bad,
                q: field.order(),
            });
        }
        Ok(Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed to shape an empty row list.
    pub fn from_rows(field: &Field, cols: usize, rows: &[Vec<Elem>]) -> Result<Matrix> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Shape(format!(
                "row of length {} in a matrix with {cols} columns",
                r.len()
            )));
        }
        Matrix::new(field, rows.len(), cols, rows.concat())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        debug_assert!(self.field.contains(v));
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(l, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Product of a row vector with this matrix.
    pub fn vec_mul(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.rows);
        let f = &self.field;
        let mut out = vec![0; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a != 0 {
                axpy(f, &mut out, a, self.row(i));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols || self.field != other.field {
            return Err(Error::Shape("vstack of incompatible matrices".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(&self.field, self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                m.set(i, jj, self.get(i, j));
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            data.extend_from_slice(self.row(i));
        }
        Matrix {
            field: self.field.clone(),
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    /// Reduced row echelon form together with the pivot column of each
    /// nonzero row. Zero rows are kept at the bottom.
    pub fn rref_with_pivots(&self) -> (Matrix, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&i| m.get(i, col) != 0) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = f.inv(m.get(row, col)).expect("pivot is nonzero");
            for j in col..m.cols {
                let v = f.mul(m.get(row, j), inv);
                m.set(row, j, v);
            }
            let pivot_row = m.row(row).to_vec();
            for i in 0..m.rows {
                if i == row {
                    continue;
                }
                let c = m.get(i, col);
                if c != 0 {
                    let neg = f.neg(c);
                    let start = i * m.cols;
                    axpy(f, &mut m.data[start..start + m.cols], neg, &pivot_row);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rref(&self) -> Matrix {
        self.rref_with_pivots().0
    }

    pub fn rank(&self) -> usize {
        self.rref_with_pivots().1.len()
    }

    /// Nonzero rows of the reduced row echelon form: a basis of the row space.
    pub fn row_basis(&self) -> Matrix {
        let (r, pivots) = self.rref_with_pivots();
        r.select_rows(&(0..pivots.len()).collect::<Vec<_>>())
    }

    /// Basis (as rows) of the right null space {v : M vᵀ = 0}.
    pub fn nullspace(&self) -> Matrix {
        let f = &self.field;
        let (r, pivots) = self.rref_with_pivots();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&j| !is_pivot[j]).collect();
        let mut basis = Matrix::zeros(f, free.len(), self.cols);
        for (b, &fc) in free.iter().enumerate() {
            basis.set(b, fc, 1);
            for (i, &pc) in pivots.iter().enumerate() {
                basis.set(b, pc, f.neg(r.get(i, fc)));
            }
        }
        basis
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

/// y += a * x
#[inline]
pub(crate) fn axpy(f: &Field, y: &mut [Elem], a: Elem, x: &[Elem]) {
    if f.order() == 2 {
        for (yi, &xi) in y.iter_mut().zip(x) {
            *yi ^= xi;
        }
        return;
    }
    for (yi, &xi) in y.iter_mut().zip(x) {
        if xi != 0 {
            *yi = f.add(*yi, f.mul(a, xi));
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:?} {}x{}", self.field, self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Full edge-vertex incidence matrix of the complete graph K_v: one row per
/// vertex, one column per edge (u, w) with u < w in lexicographic order.
pub fn complete_graph_incidence(field: &Field, v: usize) -> Matrix {
    let edges: Vec<(usize, usize)> = (0..v)
        .flat_map(|u| (u + 1..v).map(move |w| (u, w)))
        .collect();
    let mut m = Matrix::zeros(field, v, edges.len());
    for (e, &(u, w)) in edges.iter().enumerate() {
        m.set(u, e, 1);
        m.set(w, e, 1);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(q: u64) -> Field {
        Field::new(q).unwrap()
    }

    #[test]
    fn identity_has_full_rank_and_trivial_nullspace() {
        let f = gf(2);
        let i3 = Matrix::identity(&f, 3);
        assert_eq!(i3.rank(), 3);
        assert_eq!(i3.nullspace().rows(), 0);
    }

    /// Rank by brute force: log_q of the number of distinct row combinations.
    fn brute_rank(m: &Matrix) -> usize {
        let f = m.field();
        let q = f.order() as usize;
        let mut seen = std::collections::HashSet::new();
        let total = q.pow(m.rows() as u32);
        for idx in 0..total {
            let mut x = idx;
            let coeffs: Vec<Elem> = (0..m.rows())
                .map(|_| {
                    let d = (x % q) as Elem;
                    x /= q;
                    d
                })
                .collect();
            seen.insert(m.vec_mul(&coeffs));
        }
        let mut size = seen.len();
        let mut rank = 0;
        while size > 1 {
            size /= q;
            rank += 1;
        }
        rank
    }

    #[test]
    fn k4_incidence_rank_depends_on_characteristic() {
        let m2 = complete_graph_incidence(&gf(2), 4);
        assert_eq!(brute_rank(&m2), 3);
        assert_eq!(m2.rank(), 3);
        let m3 = complete_graph_incidence(&gf(3), 4);
        assert_eq!(brute_rank(&m3), 4);
        assert_eq!(m3.rank(), 4);
    }

    #[test]
    fn nullspace_is_annihilated() {
        let f = gf(4);
        let m = Matrix::new(&f, 2, 4, vec![1, 2, 3, 0, 0, 1, 1, 1]).unwrap();
        let ns = m.nullspace();
        assert_eq!(ns.rows(), 2);
        assert!(m.mul(&ns.transpose()).unwrap().is_zero());
    }

    #[test]
    fn rejects_malformed_input() {
        let f = gf(3);
        assert!(matches!(
            Matrix::new(&f, 2, 2, vec![0, 1, 2]),
            Err(Error::Shape(_))
        ));
        assert_eq!(
            Matrix::new(&f, 1, 2, vec![0, 3]).unwrap_err(),
            Error::InvalidEntry { value: 3, q: 3 }
        );
    }

    fn arb_matrix() -> impl Strategy<Value = Matrix> {
        let qs = prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9, 16, 256, 4096]);
        (qs, 1usize..=12, 1usize..=32).prop_flat_map(|(q, rows, cols)| {
            prop::collection::vec(0u32..q as u32, rows * cols).prop_map(move |data| {
                Matrix::new(&Field::new(q).unwrap(), rows, cols, data).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn rank_nullity(m in arb_matrix()) {
            let ns = m.nullspace();
            prop_assert_eq!(m.rank() + ns.rows(), m.cols());
            prop_assert_eq!(ns.rank(), ns.rows());
            if ns.rows() > 0 {
                prop_assert!(m.mul(&ns.transpose()).unwrap().is_zero());
            }
        }

        #[test]
        fn rref_is_idempotent(m in arb_matrix()) {
            let r = m.rref();
            prop_assert_eq!(r.rref(), r.clone());
            // same row space: stacking does not raise the rank
            prop_assert_eq!(m.vstack(&r).unwrap().rank(), m.rank());
        }
    }
}
