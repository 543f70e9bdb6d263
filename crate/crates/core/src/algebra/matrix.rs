//! Exact dense matrices, sparse fraction-free elimination, and determinants
//! of polynomial matrices.

use std::collections::BTreeMap;
use std::fmt;

use super::poly::MultiPoly;
use super::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix<C> {
    rows: usize,
    cols: usize,
    data: Vec<C>,
}

impl<C: Scalar> Matrix<C> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![C::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<C>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| C::from_int(v)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &C {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: C) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[C] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul(&self, other: &Matrix<C>) -> Matrix<C> {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = C::zero();
                for k in 0..self.cols {
                    acc = acc + self.get(i, k).clone() * other.get(k, j).clone();
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C]) -> Vec<C> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(C::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
            .collect()
    }

    fn sparse_rows(&self) -> Vec<Vec<(usize, C)>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(j, v)| (j, v.clone())).collect())
            .collect()
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.cols);
        for row in self.sparse_rows() {
            e.insert(row);
        }
        e.rank()
    }

    /// Basis of the right null space.
    pub fn kernel_basis(&self) -> Vec<Vec<C>> {
        let mut e = Echelon::new(self.cols);
        for row in self.sparse_rows() {
            e.insert(row);
        }
        e.kernel_basis()
    }

    /// Bareiss determinant.
    pub fn determinant(&self) -> C {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return C::one();
        }
        let mut a = self.clone();
        let mut prev = C::one();
        let mut sign = C::one();
        for k in 0..n {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&r| !a.get(r, k).is_zero()) {
                    Some(r) => {
                        for c in 0..n {
                            a.data.swap(k * n + c, r * n + c);
                        }
                        sign = -sign;
                    }
                    None => return C::zero(),
                }
            }
            let piv = a.get(k, k).clone();
            for i in k + 1..n {
                let f = a.get(i, k).clone();
                for j in k + 1..n {
                    let v = (piv.clone() * a.get(i, j).clone() - f.clone() * a.get(k, j).clone()) / prev.clone();
                    a.set(i, j, v);
                }
                a.set(i, k, C::zero());
            }
            prev = piv;
        }
        sign * a.get(n - 1, n - 1).clone()
    }
}

impl<C: Scalar> fmt::Display for Matrix<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

type SparseRow<C> = Vec<(usize, C)>;

/// Incremental row echelon form over sparse rows.
///
/// Rows are combined fraction-free (`p·r − c·s`) and rescaled by
/// [`Scalar::normalize_row`] after every step, so over the rationals all
/// stored rows are primitive integer vectors.
#[derive(Clone, Debug)]
pub struct Echelon<C> {
    cols: usize,
    pivots: BTreeMap<usize, SparseRow<C>>,
}

fn combine<C: Scalar>(a: &C, row: &[(usize, C)], b: &C, other: &[(usize, C)]) -> SparseRow<C> {
    // a·row − b·other
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < other.len() {
        let take_left = j >= other.len() || (i < row.len() && row[i].0 < other[j].0);
        let take_right = i >= row.len() || (j < other.len() && other[j].0 < row[i].0);
        if take_left {
            out.push((row[i].0, a.clone() * row[i].1.clone()));
            i += 1;
        } else if take_right {
            out.push((other[j].0, -(b.clone() * other[j].1.clone())));
            j += 1;
        } else {
            let v = a.clone() * row[i].1.clone() - b.clone() * other[j].1.clone();
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl<C: Scalar> Echelon<C> {
    pub fn new(cols: usize) -> Self {
        Echelon { cols, pivots: BTreeMap::new() }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the current pivots and stores it if it is
    /// independent. Returns whether the rank grew.
    pub fn insert(&mut self, mut row: SparseRow<C>) -> bool {
        row.retain(|(_, v)| !v.is_zero());
        row.sort_by_key(|(c, _)| *c);
        debug_assert!(row.iter().all(|(c, _)| *c < self.cols));
        loop {
            let Some(&(lead, _)) = row.first() else { return false };
            match self.pivots.get(&lead) {
                Some(p) => {
                    let a = p[0].1.clone();
                    let b = row[0].1.clone();
                    row = combine(&a, &row, &b, p);
                    C::normalize_row(&mut row);
                }
                None => {
                    C::normalize_row(&mut row);
                    self.pivots.insert(lead, row);
                    return true;
                }
            }
        }
    }

    /// Null space basis: one vector per non-pivot column, normalized so that
    /// the free coordinate is one.
    pub fn kernel_basis(&self) -> Vec<Vec<C>> {
        // Back-substitute to reduced form, last pivot first.
        let mut reduced: BTreeMap<usize, SparseRow<C>> = BTreeMap::new();
        for (&lead, row) in self.pivots.iter().rev() {
            let mut row = row.clone();
            loop {
                let hit = row.iter().skip(1).find(|(c, _)| reduced.contains_key(c)).map(|(c, v)| (*c, v.clone()));
                let Some((col, v)) = hit else { break };
                let p = &reduced[&col];
                let a = p[0].1.clone();
                row = combine(&a, &row, &v, p);
                C::normalize_row(&mut row);
            }
            reduced.insert(lead, row);
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !self.pivots.contains_key(c)) {
            let mut v = vec![C::zero(); self.cols];
            v[free] = C::one();
            for (&lead, row) in &reduced {
                if let Some((_, coeff)) = row.iter().find(|(c, _)| *c == free) {
                    v[lead] = -(coeff.clone() / row[0].1.clone());
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// Determinant of a square polynomial matrix by Laplace expansion along
/// rows, memoized over column subsets.
pub fn poly_det<C: Scalar>(m: &[Vec<MultiPoly<C>>]) -> MultiPoly<C> {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "square matrix required");
    assert!(n < usize::BITS as usize);
    if n == 0 {
        return MultiPoly::one(0);
    }
    let nvars = m[0][0].nvars();
    // minors[mask] = det of rows (n - |mask|)..n restricted to columns in mask
    let mut minors: BTreeMap<usize, MultiPoly<C>> = BTreeMap::new();
    minors.insert(0, MultiPoly::one(nvars));
    for size in 1..=n {
        let row = n - size;
        let mut next = BTreeMap::new();
        for mask in (0usize..1 << n).filter(|m| m.count_ones() as usize == size) {
            let mut acc = MultiPoly::zero(nvars);
            let mut sign_pos = true;
            for col in 0..n {
                if mask & (1 << col) == 0 {
                    continue;
                }
                let entry = &m[row][col];
                let sub = &minors[&(mask & !(1 << col))];
                if !entry.is_zero() && !sub.is_zero() {
                    let t = entry * sub;
                    acc = if sign_pos { &acc + &t } else { &acc - &t };
                }
                sign_pos = !sign_pos;
            }
            next.insert(mask, acc);
        }
        minors = next;
    }
    minors.remove(&((1 << n) - 1)).unwrap()
}
