//! Quivers with loops, their representations over finite fields, and the
//! Kac-polynomial oracle for root multiplicities.

pub mod field;
pub mod kac;
pub mod linalg;
pub mod orbits;

use std::sync::Arc;

use crate::cartan::{BorcherdsCartanDatum, Label};
use crate::error::{Error, Result};
use field::{Elem, FiniteField};
use linalg::{Mat, Subspace};

pub use kac::{check_root_correspondence, kac_polynomial_1nil, kac_polynomial_nil, KacReport};
pub use orbits::{orbits, LocusFilter, Orbit};

/// A finite quiver; arrows are `(out, in)` pairs of vertex positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    labels: Vec<Label>,
    arrows: Vec<(usize, usize)>,
}

impl Quiver {
    pub fn new(labels: Vec<Label>, arrows: Vec<(usize, usize)>) -> Result<Self> {
        let n = labels.len();
        if let Some(&(a, b)) = arrows.iter().find(|(a, b)| *a >= n || *b >= n) {
            return Err(Error::InvalidInput(format!("arrow ({a}, {b}) leaves the vertex set")));
        }
        Ok(Quiver { labels, arrows })
    }

    /// Builds a quiver from labelled arrows.
    pub fn from_labels(labels: Vec<Label>, arrows: &[(Label, Label)]) -> Result<Self> {
        let pos = |l: &Label| {
            labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::UnknownVertex(l.to_string()))
        };
        let arrows = arrows
            .iter()
            .map(|(a, b)| Ok((pos(a)?, pos(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(labels, arrows)
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn position_of(&self, text: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l.matches(text))
            .ok_or_else(|| Error::UnknownVertex(text.trim().to_string()))
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    /// `g_i`: number of loops at `i`.
    pub fn loops(&self, i: usize) -> usize {
        self.arrows.iter().filter(|&&(a, b)| a == i && b == i).count()
    }

    /// `c_ij`: number of arrows `i → j` for `i ≠ j`.
    pub fn arrow_count(&self, i: usize, j: usize) -> usize {
        self.arrows.iter().filter(|&&(a, b)| a == i && b == j).count()
    }

    /// Indices of the loops at `i`.
    pub fn loop_arrows(&self, i: usize) -> Vec<usize> {
        (0..self.arrows.len())
            .filter(|&h| self.arrows[h] == (i, i))
            .collect()
    }

    pub fn is_imaginary(&self, i: usize) -> bool {
        self.loops(i) > 0
    }

    /// `A_Q`: diagonal `2 − 2g_i`, off-diagonal `−c_ij − c_ji`.
    pub fn cartan(&self) -> Result<BorcherdsCartanDatum> {
        let n = self.rank();
        let matrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            2 - 2 * self.loops(i) as i64
                        } else {
                            -((self.arrow_count(i, j) + self.arrow_count(j, i)) as i64)
                        }
                    })
                    .collect()
            })
            .collect();
        BorcherdsCartanDatum::new(self.labels.clone(), matrix, Some(vec![1; n]), None)
    }

    /// `Σ_h α_out α_in`: the dimension of `E(α)`.
    pub fn rep_dimension(&self, alpha: &[u32]) -> u64 {
        self.arrows
            .iter()
            .map(|&(a, b)| alpha[a] as u64 * alpha[b] as u64)
            .sum()
    }
}

/// `cartan_of_quiver`.
pub fn cartan_of_quiver(q: &Quiver) -> Result<BorcherdsCartanDatum> {
    q.cartan()
}

/// A representation: one `dim V_in × dim V_out` matrix per arrow.
#[derive(Debug, Clone)]
pub struct FqRep {
    pub field: Arc<FiniteField>,
    pub quiver: Arc<Quiver>,
    pub dims: Vec<usize>,
    pub maps: Vec<Mat>,
}

impl FqRep {
    pub fn new(
        field: Arc<FiniteField>,
        quiver: Arc<Quiver>,
        dims: Vec<usize>,
        maps: Vec<Mat>,
    ) -> Result<Self> {
        if dims.len() != quiver.rank() || maps.len() != quiver.arrows().len() {
            return Err(Error::InvalidInput(
                "representation does not match the quiver".into(),
            ));
        }
        for (h, &(a, b)) in quiver.arrows().iter().enumerate() {
            if maps[h].rows != dims[b] || maps[h].cols != dims[a] {
                return Err(Error::InvalidInput(format!(
                    "map for arrow {h} must be {}x{}",
                    dims[b], dims[a]
                )));
            }
        }
        Ok(FqRep {
            field,
            quiver,
            dims,
            maps,
        })
    }

    pub fn zero(field: Arc<FiniteField>, quiver: Arc<Quiver>, dims: Vec<usize>) -> Self {
        let maps = quiver
            .arrows()
            .iter()
            .map(|&(a, b)| Mat::zeros(dims[b], dims[a]))
            .collect();
        FqRep {
            field,
            quiver,
            dims,
            maps,
        }
    }

    /// Realises integer matrices over `F_q` (entries reduced into the prime field).
    pub fn from_int(
        field: Arc<FiniteField>,
        quiver: Arc<Quiver>,
        dims: Vec<usize>,
        maps: &[Vec<Vec<i64>>],
    ) -> Result<Self> {
        if maps.len() != quiver.arrows().len() {
            return Err(Error::InvalidInput(format!(
                "expected {} arrow matrices, got {}",
                quiver.arrows().len(),
                maps.len()
            )));
        }
        let mut mats = Vec::new();
        for (h, &(a, b)) in quiver.arrows().iter().enumerate() {
            let m = &maps[h];
            let rows = if dims[b] == 0 || dims[a] == 0 { 0 } else { m.len() };
            if rows != dims[b] && !(dims[b] == 0 || dims[a] == 0) {
                return Err(Error::InvalidInput(format!(
                    "map for arrow {h} must have {} rows",
                    dims[b]
                )));
            }
            let mut mat = Mat::zeros(dims[b], dims[a]);
            if dims[a] > 0 && dims[b] > 0 {
                for (r, row) in m.iter().enumerate() {
                    if row.len() != dims[a] {
                        return Err(Error::InvalidInput(format!(
                            "map for arrow {h} must have {} columns",
                            dims[a]
                        )));
                    }
                    for (c, &v) in row.iter().enumerate() {
                        mat.set(r, c, field.from_int(v));
                    }
                }
            }
            mats.push(mat);
        }
        Self::new(field, quiver, dims, mats)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn f(&self) -> &FiniteField {
        &self.field
    }

    /// Direct sum `M ⊕ N`, with `M`'s basis first at each vertex.
    pub fn direct_sum(&self, other: &FqRep) -> FqRep {
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(x, y)| {
                let mut m = Mat::zeros(x.rows + y.rows, x.cols + y.cols);
                for r in 0..x.rows {
                    for c in 0..x.cols {
                        m.set(r, c, x.get(r, c));
                    }
                }
                for r in 0..y.rows {
                    for c in 0..y.cols {
                        m.set(x.rows + r, x.cols + c, y.get(r, c));
                    }
                }
                m
            })
            .collect();
        FqRep {
            field: self.field.clone(),
            quiver: self.quiver.clone(),
            dims,
            maps,
        }
    }

    /// Loop maps at every imaginary vertex are simultaneously strictly
    /// triangularizable.
    pub fn is_one_nilpotent(&self) -> bool {
        let f = self.f();
        (0..self.quiver.rank()).all(|i| {
            let loops: Vec<&Mat> = self.quiver.loop_arrows(i).iter().map(|&h| &self.maps[h]).collect();
            if loops.is_empty() || self.dims[i] == 0 {
                return true;
            }
            let n = self.dims[i];
            let mut current = Subspace::zero(n);
            loop {
                let p = current.annihilator(f);
                let stacked: Vec<Vec<Elem>> = loops
                    .iter()
                    .flat_map(|x| {
                        let px = p.mul(x, f);
                        (0..px.rows).map(move |r| px.row(r).to_vec()).collect::<Vec<_>>()
                    })
                    .collect();
                let next = Subspace::span(n, &linalg::nullspace(&Mat::from_rows(&stacked, n), f), f);
                if next.dim() == n {
                    return true;
                }
                if next.dim() == current.dim() {
                    return false;
                }
                current = next;
            }
        })
    }

    /// A graded flag with `x_h(L_k) ⊂ L_{k−1}` for all arrows exists.
    pub fn is_nilpotent(&self) -> bool {
        let f = self.f();
        let q = &self.quiver;
        let n = q.rank();
        let mut current: Vec<Subspace> = self.dims.iter().map(|&d| Subspace::zero(d)).collect();
        loop {
            let ann: Vec<Mat> = current.iter().map(|s| s.annihilator(f)).collect();
            let mut next = Vec::with_capacity(n);
            for i in 0..n {
                let d = self.dims[i];
                let mut rows: Vec<Vec<Elem>> = Vec::new();
                for (h, &(a, b)) in q.arrows().iter().enumerate() {
                    if a != i {
                        continue;
                    }
                    let px = ann[b].mul(&self.maps[h], f);
                    rows.extend((0..px.rows).map(|r| px.row(r).to_vec()));
                }
                let kernel = if rows.is_empty() {
                    Subspace::full(d)
                } else {
                    Subspace::span(d, &linalg::nullspace(&Mat::from_rows(&rows, d), f), f)
                };
                next.push(kernel);
            }
            if next.iter().zip(&self.dims).all(|(s, &d)| s.dim() == d) {
                return true;
            }
            if next.iter().zip(&current).all(|(a, b)| a.dim() == b.dim()) {
                return false;
            }
            current = next;
        }
    }

    /// Basis of `End(M)`: tuples `(φ_i)` with `φ_in x_h = x_h φ_out`.
    pub fn endomorphism_basis(&self) -> Vec<Vec<Mat>> {
        let f = self.f();
        let offsets: Vec<usize> = self
            .dims
            .iter()
            .scan(0, |acc, &d| {
                let o = *acc;
                *acc += d * d;
                Some(o)
            })
            .collect();
        let unknowns: usize = self.dims.iter().map(|d| d * d).sum();
        let var = |i: usize, r: usize, c: usize| offsets[i] + r * self.dims[i] + c;
        let mut rows: Vec<Vec<Elem>> = Vec::new();
        for (h, &(a, b)) in self.quiver.arrows().iter().enumerate() {
            let x = &self.maps[h];
            // (φ_b x − x φ_a)[r][c] = Σ_k φ_b[r][k] x[k][c] − Σ_k x[r][k] φ_a[k][c]
            for r in 0..self.dims[b] {
                for c in 0..self.dims[a] {
                    let mut eq = vec![0; unknowns];
                    for k in 0..self.dims[b] {
                        let idx = var(b, r, k);
                        eq[idx] = f.add(eq[idx], x.get(k, c));
                    }
                    for k in 0..self.dims[a] {
                        let idx = var(a, k, c);
                        eq[idx] = f.sub(eq[idx], x.get(r, k));
                    }
                    rows.push(eq);
                }
            }
        }
        let solutions = if rows.is_empty() {
            (0..unknowns)
                .map(|u| {
                    let mut v = vec![0; unknowns];
                    v[u] = 1;
                    v
                })
                .collect()
        } else {
            linalg::nullspace(&Mat::from_rows(&rows, unknowns), f)
        };
        solutions
            .into_iter()
            .map(|v| {
                self.dims
                    .iter()
                    .enumerate()
                    .map(|(i, &d)| Mat {
                        rows: d,
                        cols: d,
                        data: v[offsets[i]..offsets[i] + d * d].to_vec(),
                    })
                    .collect()
            })
            .collect()
    }
}

fn combination(basis: &[Vec<Mat>], coeffs: &[Elem], f: &FiniteField, dims: &[usize]) -> Vec<Mat> {
    let mut out: Vec<Mat> = dims.iter().map(|&d| Mat::zeros(d, d)).collect();
    for (b, &c) in basis.iter().zip(coeffs) {
        if c == 0 {
            continue;
        }
        for (o, m) in out.iter_mut().zip(b) {
            *o = o.add(&m.scale(c, f), f);
        }
    }
    out
}

fn for_each_coeffs(q: u32, d: usize, cap: u64, mut visit: impl FnMut(&[Elem]) -> bool) -> Result<()> {
    let total = (q as u64).checked_pow(d as u32).filter(|&t| t <= cap).ok_or_else(|| {
        Error::CapExceeded(format!("endomorphism search over {q}^{d} elements exceeds the cap {cap}"))
    })?;
    let mut coeffs = vec![0 as Elem; d];
    for _ in 0..total {
        if !visit(&coeffs) {
            return Ok(());
        }
        for c in coeffs.iter_mut() {
            *c += 1;
            if (*c as u32) < q {
                break;
            }
            *c = 0;
        }
    }
    Ok(())
}

/// Whether `End` (given by a basis over `f`) contains an idempotent other
/// than 0 and 1.
fn has_nontrivial_idempotent(
    basis: &[Vec<Mat>],
    f: &FiniteField,
    dims: &[usize],
    cap: u64,
) -> Result<bool> {
    let mut found = false;
    for_each_coeffs(f.order(), basis.len(), cap, |coeffs| {
        let e = combination(basis, coeffs, f, dims);
        let is_zero = e.iter().all(|m| m.is_zero());
        let is_one = e.iter().zip(dims).all(|(m, &d)| *m == Mat::identity(d));
        if !is_zero && !is_one && e.iter().all(|m| m.mul(m, f) == *m) {
            found = true;
            return false;
        }
        true
    })?;
    Ok(found)
}

/// Indecomposable over `F_q` and after every base change to `F_{q^e}`,
/// `2 ≤ e ≤ dim M`.
pub fn is_absolutely_indecomposable(rep: &FqRep, cap: u64) -> Result<bool> {
    let n = rep.total_dim();
    if n == 0 {
        return Ok(false);
    }
    let f = rep.f();
    let basis = rep.endomorphism_basis();
    if has_nontrivial_idempotent(&basis, f, &rep.dims, cap)? {
        return Ok(false);
    }
    if basis.len() == 1 {
        return Ok(true);
    }
    for e in 2..=n as u32 {
        let big_order = f.order().checked_pow(e).filter(|&o| o <= field::MAX_ORDER).ok_or_else(|| {
            Error::CapExceeded(format!("base change to F_{}^{e} exceeds the field table limit", f.order()))
        })?;
        let big = FiniteField::get(big_order)?;
        let embed = f.embedding_into(&big)?;
        let lifted: Vec<Vec<Mat>> = basis
            .iter()
            .map(|b| b.iter().map(|m| m.map(&embed)).collect())
            .collect();
        if has_nontrivial_idempotent(&lifted, &big, &rep.dims, cap)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Oracle: every endomorphism is a scalar plus a nilpotent.
pub fn end_is_scalar_plus_nilpotent(rep: &FqRep, cap: u64) -> Result<bool> {
    let n = rep.total_dim();
    if n == 0 {
        return Ok(false);
    }
    let f = rep.f();
    let basis = rep.endomorphism_basis();
    let mut ok = true;
    for_each_coeffs(f.order(), basis.len(), cap, |coeffs| {
        let e = combination(&basis, coeffs, f, &rep.dims);
        let split = (0..f.order() as Elem).any(|c| {
            let shifted: Vec<Mat> = e
                .iter()
                .zip(&rep.dims)
                .map(|(m, &d)| m.sub(&Mat::identity(d).scale(c, f), f))
                .collect();
            shifted.iter().all(|m| {
                let mut p = m.clone();
                for _ in 0..m.rows {
                    p = p.mul(m, f);
                }
                p.is_zero() || m.rows == 0
            })
        });
        if !split {
            ok = false;
        }
        ok
    })?;
    Ok(ok)
}

/// Degree bound `max(0, 1 + Σ_h α_out α_in − Σ α_i²)`.
pub fn kac_degree_bound(q: &Quiver, alpha: &[u32]) -> usize {
    let d = 1 + q.rep_dimension(alpha) as i64 - alpha.iter().map(|&a| (a * a) as i64).sum::<i64>();
    d.max(0) as usize
}
