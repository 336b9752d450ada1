//! Weyl group action and enumeration of minimal coset representatives.

use std::collections::HashSet;

use crate::cartan::{BorcherdsCartanDatum, Weight};
use crate::error::{Error, Result};
use crate::series::DegreeBox;

/// A Weyl group element stored as a reduced word `r_{i1} ⋯ r_{ik}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    word: Vec<usize>,
    rho_shift: Vec<i64>,
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        WeylElement {
            word: Vec::new(),
            rho_shift: vec![0; rank],
        }
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    /// `ε(w) = (−1)^{l(w)}`.
    pub fn sign(&self) -> i64 {
        if self.word.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Root-lattice coordinates of `wρ − ρ`.
    pub fn rho_shift(&self) -> &[i64] {
        &self.rho_shift
    }
}

fn require_real(datum: &BorcherdsCartanDatum, i: usize) -> Result<()> {
    if i >= datum.rank() {
        return Err(Error::UnknownVertex(i.to_string()));
    }
    if !datum.is_real(i) {
        return Err(Error::InvalidInput(format!(
            "reflection r_{} needs a real vertex",
            datum.label(i)
        )));
    }
    Ok(())
}

/// `r_i(λ) = λ − ⟨h_i, λ⟩ α_i`.
pub fn reflect(datum: &BorcherdsCartanDatum, i: usize, weight: &Weight) -> Result<Weight> {
    require_real(datum, i)?;
    let p = datum.pairing(i, weight);
    let mut out = weight.clone();
    out.offset[i] -= p;
    Ok(out)
}

/// `r_i` on signed root-lattice coordinates.
pub fn reflect_coords(datum: &BorcherdsCartanDatum, i: usize, coords: &[i64]) -> Vec<i64> {
    let p: i64 = coords.iter().enumerate().map(|(j, &c)| c * datum.a(i, j)).sum();
    let mut out = coords.to_vec();
    out[i] -= p;
    out
}

/// `w(λ)`: the rightmost letter acts first.
pub fn apply(datum: &BorcherdsCartanDatum, w: &WeylElement, weight: &Weight) -> Result<Weight> {
    let mut out = weight.clone();
    for &i in w.word.iter().rev() {
        out = reflect(datum, i, &out)?;
    }
    Ok(out)
}

/// `w(β)` on signed root-lattice coordinates.
pub fn apply_coords(datum: &BorcherdsCartanDatum, word: &[usize], coords: &[i64]) -> Vec<i64> {
    let mut out = coords.to_vec();
    for &i in word.iter().rev() {
        out = reflect_coords(datum, i, &out);
    }
    out
}

fn is_positive(coords: &[i64]) -> bool {
    coords.iter().all(|&c| c >= 0) && coords.iter().any(|&c| c > 0)
}

/// Elements of `W(J)` of length at most `depth`.
///
/// `w′` is extended to `w′r_j` when `w′(α_j)` is a positive root whose
/// support is not contained in `J`. With a `cutoff` box a branch stops as
/// soon as `ρ − wρ` leaves the box. Output is sorted by length, then word.
pub fn enumerate_wj(
    datum: &BorcherdsCartanDatum,
    j: &[usize],
    depth: usize,
    cutoff: Option<&DegreeBox>,
) -> Result<Vec<WeylElement>> {
    for &v in j {
        require_real(datum, v)?;
    }
    let gens = datum.real_vertices();
    bfs(datum, &gens, depth, cutoff, |root| {
        root.iter().enumerate().any(|(k, &c)| c != 0 && !j.contains(&k))
    })
}

/// Elements of the parabolic subgroup `W_J` of length at most `depth`.
pub fn enumerate_parabolic(
    datum: &BorcherdsCartanDatum,
    j: &[usize],
    depth: usize,
    cutoff: Option<&DegreeBox>,
) -> Result<Vec<WeylElement>> {
    for &v in j {
        require_real(datum, v)?;
    }
    bfs(datum, j, depth, cutoff, |_| true)
}

fn bfs(
    datum: &BorcherdsCartanDatum,
    gens: &[usize],
    depth: usize,
    cutoff: Option<&DegreeBox>,
    admissible: impl Fn(&[i64]) -> bool,
) -> Result<Vec<WeylElement>> {
    let n = datum.rank();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let id = WeylElement::identity(n);
    seen.insert(id.rho_shift.clone());
    let mut all = vec![id.clone()];
    let mut layer = vec![id];
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &layer {
            for &g in gens {
                let mut unit = vec![0; n];
                unit[g] = 1;
                let root = apply_coords(datum, &w.word, &unit);
                if !is_positive(&root) || !admissible(&root) {
                    continue;
                }
                let shift: Vec<i64> = w.rho_shift.iter().zip(&root).map(|(a, b)| a - b).collect();
                if let Some(bx) = cutoff {
                    let depth_vec: Vec<i64> = shift.iter().map(|s| -s).collect();
                    if !bx.contains_signed(&depth_vec) {
                        continue;
                    }
                }
                if seen.insert(shift.clone()) {
                    let mut word = w.word.clone();
                    word.push(g);
                    next.push(WeylElement {
                        word,
                        rho_shift: shift,
                    });
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_by(|a, b| a.word.cmp(&b.word));
        all.extend(next.iter().cloned());
        layer = next;
    }
    Ok(all)
}
