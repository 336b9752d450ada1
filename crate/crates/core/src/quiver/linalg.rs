//! Dense linear algebra over a [`FiniteField`].

use super::field::{Elem, FiniteField};

/// Row-major matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Elem>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Elem>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn mul(&self, other: &Mat, f: &FiniteField) -> Mat {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, j)));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat, f: &FiniteField) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, other: &Mat, f: &FiniteField) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: Elem, f: &FiniteField) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn apply(&self, v: &[Elem], f: &FiniteField) -> Vec<Elem> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(0, |acc, j| f.add(acc, f.mul(self.get(i, j), v[j])))
            })
            .collect()
    }

    /// Entrywise image under a field map.
    pub fn map(&self, m: &[Elem]) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| m[a as usize]).collect(),
        }
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
}

/// Reduces `m` to reduced row echelon form; returns pivot columns.
pub fn rref(m: &mut Mat, f: &FiniteField) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
            continue;
        };
        if p != r {
            for j in 0..m.cols {
                m.data.swap(p * m.cols + j, r * m.cols + j);
            }
        }
        let inv = f.inv(m.get(r, c));
        for j in 0..m.cols {
            let v = f.mul(m.get(r, j), inv);
            m.set(r, j, v);
        }
        for i in 0..m.rows {
            if i == r {
                continue;
            }
            let factor = m.get(i, c);
            if factor == 0 {
                continue;
            }
            for j in 0..m.cols {
                let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Mat, f: &FiniteField) -> usize {
    let mut m = m.clone();
    rref(&mut m, f).len()
}

/// Basis of `{v : m v = 0}`.
pub fn nullspace(m: &Mat, f: &FiniteField) -> Vec<Vec<Elem>> {
    let mut a = m.clone();
    let pivots = rref(&mut a, f);
    let free: Vec<usize> = (0..a.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0; a.cols];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(a.get(r, fc));
            }
            v
        })
        .collect()
}

pub fn inverse(m: &Mat, f: &FiniteField) -> Option<Mat> {
    let n = m.rows;
    let mut aug = Mat::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, m.get(i, j));
        }
        aug.set(i, n + i, 1);
    }
    let pivots = rref(&mut aug, f);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    let mut out = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, aug.get(i, n + j));
        }
    }
    Some(out)
}

/// A subspace of `F_q^n` held as a reduced echelon basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    pub ambient: usize,
    basis: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                let mut v = vec![0; ambient];
                v[i] = 1;
                v
            })
            .collect();
        Subspace {
            ambient,
            basis,
            pivots: (0..ambient).collect(),
        }
    }

    pub fn span(ambient: usize, vectors: &[Vec<Elem>], f: &FiniteField) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let mut m = Mat::from_rows(vectors, ambient);
        let pivots = rref(&mut m, f);
        let basis = (0..pivots.len()).map(|r| m.row(r).to_vec()).collect();
        Subspace {
            ambient,
            basis,
            pivots,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.basis
    }

    /// Residue of `v` after elimination against the basis.
    pub fn reduce(&self, v: &[Elem], f: &FiniteField) -> Vec<Elem> {
        let mut v = v.to_vec();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            let c = v[p];
            if c != 0 {
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Elem], f: &FiniteField) -> bool {
        self.reduce(v, f).iter().all(|&c| c == 0)
    }

    pub fn extended(&self, vectors: &[Vec<Elem>], f: &FiniteField) -> Self {
        let mut all = self.basis.clone();
        all.extend(vectors.iter().cloned());
        Self::span(self.ambient, &all, f)
    }

    /// Rows spanning the annihilator: `w ∈ self ⇔ P w = 0`.
    pub fn annihilator(&self, f: &FiniteField) -> Mat {
        let rows = nullspace(&Mat::from_rows(&self.basis, self.ambient), f);
        Mat::from_rows(&rows, self.ambient)
    }
}

/// Every `l`-dimensional subspace of `F_q^m`, each given by an echelon basis.
pub fn subspaces(m: usize, l: usize, f: &FiniteField) -> Vec<Vec<Vec<Elem>>> {
    let q = f.order() as usize;
    let mut out = Vec::new();
    let mut pivots = Vec::new();
    fn choose(
        m: usize,
        l: usize,
        start: usize,
        pivots: &mut Vec<usize>,
        emit: &mut dyn FnMut(&[usize]),
    ) {
        if pivots.len() == l {
            emit(pivots);
            return;
        }
        for c in start..m {
            pivots.push(c);
            choose(m, l, c + 1, pivots, emit);
            pivots.pop();
        }
    }
    choose(m, l, 0, &mut pivots, &mut |piv: &[usize]| {
        // free slots: row r, column c > piv[r], c not a pivot
        let free: Vec<(usize, usize)> = (0..l)
            .flat_map(|r| {
                ((piv[r] + 1)..m)
                    .filter(|c| !piv.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        let total = q.pow(free.len() as u32);
        for mut idx in 0..total {
            let mut rows = vec![vec![0 as Elem; m]; l];
            for (r, &p) in piv.iter().enumerate() {
                rows[r][p] = 1;
            }
            for &(r, c) in &free {
                rows[r][c] = (idx % q) as Elem;
                idx /= q;
            }
            out.push(rows);
        }
    });
    out
}
