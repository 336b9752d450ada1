//! Exhaustive `G(α)`-orbit enumeration on `E(α)(F_q)`.

use std::sync::Arc;

use super::field::{Elem, FiniteField};
use super::linalg::{self, Mat};
use super::{FqRep, Quiver};
use crate::error::{Error, Result};

/// Default bound on `|E(α)(F_q)|`.
pub const DEFAULT_CAP: u64 = 1 << 24;

/// Which locus of `E(α)` to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocusFilter {
    All,
    OneNilpotent,
    Nilpotent,
}

impl LocusFilter {
    pub fn admits(self, rep: &FqRep) -> bool {
        match self {
            LocusFilter::All => true,
            LocusFilter::OneNilpotent => rep.is_one_nilpotent(),
            LocusFilter::Nilpotent => rep.is_nilpotent(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Orbit {
    /// The point of minimal index in the orbit.
    pub representative: FqRep,
    pub size: u64,
}

/// Coordinates on `E(α)`: all arrow matrices flattened, arrow by arrow,
/// row-major; the index is read in base `q` with the first entry least
/// significant.
pub(crate) struct Space {
    field: Arc<FiniteField>,
    quiver: Arc<Quiver>,
    dims: Vec<usize>,
    shapes: Vec<(usize, usize)>,
    pub(crate) points: u64,
}

impl Space {
    pub(crate) fn new(
        field: Arc<FiniteField>,
        quiver: Arc<Quiver>,
        alpha: &[u32],
        cap: u64,
    ) -> Result<Self> {
        if alpha.len() != quiver.rank() {
            return Err(Error::InvalidInput(format!(
                "dimension vector has {} entries for {} vertices",
                alpha.len(),
                quiver.rank()
            )));
        }
        let dims: Vec<usize> = alpha.iter().map(|&a| a as usize).collect();
        let shapes: Vec<(usize, usize)> = quiver.arrows().iter().map(|&(a, b)| (dims[b], dims[a])).collect();
        let entries: usize = shapes.iter().map(|(r, c)| r * c).sum();
        let points = (field.order() as u64)
            .checked_pow(entries as u32)
            .filter(|&p| p <= cap)
            .ok_or_else(|| {
                Error::CapExceeded(format!(
                    "E(alpha) over F_{} has {}^{entries} points, above the cap {cap}",
                    field.order(),
                    field.order()
                ))
            })?;
        Ok(Space {
            field,
            quiver,
            dims,
            shapes,
            points,
        })
    }

    pub(crate) fn decode(&self, mut index: u64) -> FqRep {
        let q = self.field.order() as u64;
        let maps = self
            .shapes
            .iter()
            .map(|&(r, c)| {
                let mut m = Mat::zeros(r, c);
                for k in 0..r * c {
                    m.data[k] = (index % q) as Elem;
                    index /= q;
                }
                m
            })
            .collect();
        FqRep {
            field: self.field.clone(),
            quiver: self.quiver.clone(),
            dims: self.dims.clone(),
            maps,
        }
    }

    pub(crate) fn encode(&self, rep: &FqRep) -> u64 {
        let q = self.field.order() as u64;
        let mut index = 0u64;
        for m in rep.maps.iter().rev() {
            for &v in m.data.iter().rev() {
                index = index * q + v as u64;
            }
        }
        index
    }

    /// `(vertex, g, g⁻¹)` for a generating set of `G(α)`.
    fn generators(&self) -> Vec<(usize, Mat, Mat)> {
        let f = &*self.field;
        let zeta = f.primitive_element();
        let mut gens = Vec::new();
        for (i, &d) in self.dims.iter().enumerate() {
            if d == 0 {
                continue;
            }
            if f.order() > 2 {
                let mut g = Mat::identity(d);
                g.set(0, 0, zeta);
                let mut gi = Mat::identity(d);
                gi.set(0, 0, f.inv(zeta));
                gens.push((i, g, gi));
            }
            for a in 0..d {
                for b in 0..d {
                    if a == b {
                        continue;
                    }
                    for &beta in &f.prime_basis() {
                        let mut g = Mat::identity(d);
                        g.set(a, b, beta);
                        let mut gi = Mat::identity(d);
                        gi.set(a, b, f.neg(beta));
                        gens.push((i, g, gi));
                    }
                }
            }
        }
        gens
    }

    fn act(&self, rep: &FqRep, vertex: usize, g: &Mat, g_inv: &Mat) -> FqRep {
        let f = &*self.field;
        let maps = self
            .quiver
            .arrows()
            .iter()
            .zip(&rep.maps)
            .map(|(&(a, b), x)| {
                let mut y = x.clone();
                if b == vertex {
                    y = g.mul(&y, f);
                }
                if a == vertex {
                    y = y.mul(g_inv, f);
                }
                y
            })
            .collect();
        FqRep {
            field: rep.field.clone(),
            quiver: rep.quiver.clone(),
            dims: rep.dims.clone(),
            maps,
        }
    }
}

/// One representative per isomorphism class in the chosen locus, with the
/// orbit sizes.
pub fn orbits(
    quiver: &Arc<Quiver>,
    alpha: &[u32],
    field: &Arc<FiniteField>,
    filter: LocusFilter,
    cap: u64,
) -> Result<Vec<Orbit>> {
    let space = Space::new(field.clone(), quiver.clone(), alpha, cap)?;
    let gens = space.generators();
    let mut seen = vec![false; space.points as usize];
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for start in 0..space.points {
        if seen[start as usize] {
            continue;
        }
        let rep = space.decode(start);
        if !filter.admits(&rep) {
            continue;
        }
        seen[start as usize] = true;
        stack.push(start);
        let mut size = 0u64;
        while let Some(p) = stack.pop() {
            size += 1;
            let x = space.decode(p);
            for (v, g, gi) in &gens {
                let y = space.encode(&space.act(&x, *v, g, gi)) as usize;
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y as u64);
                }
            }
        }
        out.push(Orbit {
            representative: rep,
            size,
        });
    }
    Ok(out)
}

/// `|E(α)(F_q)|` restricted to the locus, counted point by point.
pub fn locus_size(
    quiver: &Arc<Quiver>,
    alpha: &[u32],
    field: &Arc<FiniteField>,
    filter: LocusFilter,
    cap: u64,
) -> Result<u64> {
    let space = Space::new(field.clone(), quiver.clone(), alpha, cap)?;
    Ok((0..space.points).filter(|&p| filter.admits(&space.decode(p))).count() as u64)
}

/// `|GL_n(F_q)|`, used to sanity-check orbit sizes.
pub fn gl_order(n: usize, q: u64) -> u64 {
    let qn = q.pow(n as u32);
    (0..n as u32).map(|k| qn - q.pow(k)).product()
}

/// Isomorphism test by brute force over `G(α)`; only for tiny oracles.
pub fn isomorphic_by_search(x: &FqRep, y: &FqRep, cap: u64) -> Result<bool> {
    let f = x.f();
    let q = f.order() as u64;
    let mut per_vertex = Vec::new();
    for &d in &x.dims {
        let total = q.checked_pow((d * d) as u32).filter(|&t| t <= cap).ok_or_else(|| {
            Error::CapExceeded("brute-force isomorphism search exceeds the cap".into())
        })?;
        let mut mats = Vec::new();
        for idx in 0..total {
            let mut m = Mat::zeros(d, d);
            let mut r = idx;
            for k in 0..d * d {
                m.data[k] = (r % q) as Elem;
                r /= q;
            }
            if let Some(inv) = linalg::inverse(&m, f) {
                mats.push((m, inv));
            }
        }
        per_vertex.push(mats);
    }
    let mut choice = vec![0usize; per_vertex.len()];
    loop {
        let ok = x.quiver.arrows().iter().enumerate().all(|(h, &(a, b))| {
            let (gb, _) = &per_vertex[b][choice[b]];
            let (_, ga_inv) = &per_vertex[a][choice[a]];
            gb.mul(&x.maps[h], f).mul(ga_inv, f) == y.maps[h]
        });
        if ok {
            return Ok(true);
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                return Ok(false);
            }
            choice[k] += 1;
            if choice[k] < per_vertex[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}
