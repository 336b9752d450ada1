//! Property checks shared by the property suite and the acceptance run.
//! Every check returns `Err` with a description on the first violation.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use bbz_core::arith;
use bbz_core::bbzmult::{self, witt_by_partitions};
use bbz_core::kmweights::KmSlice;
use bbz_core::{BorcherdsCartanDatum, DegreeBox, FormalSeries, Label, RootVec, Weight};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

pub type Check = Result<(), String>;

fn datum(matrix: Vec<Vec<i64>>, charge: Option<Vec<BigInt>>) -> BorcherdsCartanDatum {
    let labels = (0..matrix.len() as i64).map(Label::Int).collect();
    BorcherdsCartanDatum::new(labels, matrix, None, charge).expect("valid datum")
}

/// A random symmetric Borcherds-Cartan datum with charge, a slice `J` and a box.
#[derive(Debug, Clone)]
pub struct WittCase {
    pub matrix: Vec<Vec<i64>>,
    pub charge: Vec<u32>,
    pub j_mask: Vec<bool>,
    pub limits: Vec<u32>,
}

pub fn witt_case() -> impl Strategy<Value = WittCase> {
    (1usize..=3)
        .prop_flat_map(|n| {
            let diag = prop::collection::vec(prop::sample::select(vec![2i64, 0, -2, -4]), n);
            let off = prop::collection::vec(prop::sample::select(vec![0i64, -1, -2]), n * (n - 1) / 2);
            let charge = prop::collection::vec(1u32..=3, n);
            let mask = prop::collection::vec(any::<bool>(), n);
            let top = match n {
                1 => 8,
                2 => 4,
                _ => 2,
            };
            let limits = prop::collection::vec(0u32..=top, n);
            (diag, off, charge, mask, limits)
        })
        .prop_map(|(diag, off, charge, mask, limits)| {
            let n = diag.len();
            let mut matrix = vec![vec![0; n]; n];
            let mut k = 0;
            for i in 0..n {
                matrix[i][i] = diag[i];
                for j in i + 1..n {
                    matrix[i][j] = off[k];
                    matrix[j][i] = off[k];
                    k += 1;
                }
            }
            let charge = (0..n).map(|i| if diag[i] == 2 { 1 } else { charge[i] }).collect();
            let j_mask = (0..n).map(|i| mask[i] && diag[i] == 2).collect();
            WittCase {
                matrix,
                charge,
                j_mask,
                limits,
            }
        })
}

/// The log-series Witt value equals the partition enumeration everywhere
/// outside `Q₊^J`.
pub fn witt_log_matches_partitions(case: &WittCase) -> Check {
    let d = datum(
        case.matrix.clone(),
        Some(case.charge.iter().map(|&c| BigInt::from(c)).collect()),
    );
    let j: Vec<usize> = (0..case.j_mask.len()).filter(|&i| case.j_mask[i]).collect();
    let bx = DegreeBox::new(case.limits.clone());
    let vm = bbzmult::virtual_module(&d, &j, &bx).map_err(|e| e.to_string())?;
    let log = vm.witt_series();
    for beta in bx.nonzero_points() {
        if beta.supported_in(&j) {
            continue;
        }
        let a = witt_by_partitions(&vm, &beta);
        let b = log.coeff(&beta);
        if a != b {
            return Err(format!("{case:?}: W({beta}) partitions {a} vs log {b}"));
        }
    }
    Ok(())
}

/// `W(β) = Σ_{d|β} m(β/d)/d` inverted with the Möbius function returns `m`.
pub fn mobius_roundtrip(limits: &[u32], values: &[u32]) -> Check {
    let bx = DegreeBox::new(limits.to_vec());
    let points = bx.nonzero_points();
    let m: BTreeMap<RootVec, BigRational> = points
        .iter()
        .zip(values.iter().cycle())
        .map(|(p, &v)| (p.clone(), BigRational::from_integer(v.into())))
        .collect();
    let w = |beta: &RootVec| -> BigRational {
        arith::divisors(beta.gcd())
            .into_iter()
            .map(|d| m[&beta.div_exact(d as u32).unwrap()].clone() / BigRational::from_integer(d.into()))
            .sum()
    };
    for beta in &points {
        let mut back = BigRational::zero();
        for d in arith::divisors(beta.gcd()) {
            let mu = arith::mobius(d);
            if mu != 0 {
                back += BigRational::new(mu.into(), d.into()) * w(&beta.div_exact(d as u32).unwrap());
            }
        }
        if back != m[beta] {
            return Err(format!("roundtrip at {beta}: {back} vs {}", m[beta]));
        }
    }
    Ok(())
}

/// Finite-type matrices for Freudenthal checks.
pub fn finite_types() -> Vec<(&'static str, Vec<Vec<i64>>)> {
    vec![
        ("A1", vec![vec![2]]),
        ("A1xA1", vec![vec![2, 0], vec![0, 2]]),
        ("A2", vec![vec![2, -1], vec![-1, 2]]),
        ("B2", vec![vec![2, -2], vec![-1, 2]]),
        ("G2", vec![vec![2, -1], vec![-3, 2]]),
    ]
}

/// Freudenthal multiplicities are positive integers, invariant under the
/// simple reflections, and the sl₂ string has multiplicity one.
pub fn freudenthal_properties(kind: usize, pairings: &[i64]) -> Check {
    let (name, matrix) = finite_types().swap_remove(kind % 5);
    let n = matrix.len();
    let lam: Vec<i64> = (0..n).map(|i| pairings[i % pairings.len()]).collect();
    let d = datum(matrix.clone(), None);
    let all: Vec<usize> = (0..n).collect();
    let limits = vec![14u32; n];
    let bx = DegreeBox::new(limits.clone());
    let slice = KmSlice::new(&d, &all, &bx).map_err(|e| e.to_string())?;
    let m = slice
        .weight_multiplicities(&Weight::custom(lam.clone()), &limits)
        .map_err(|e| format!("{name} {lam:?}: {e}"))?;
    if m.get(&RootVec::zero(n)) != Some(&BigInt::one()) {
        return Err(format!("{name} {lam:?}: highest weight multiplicity is not 1"));
    }
    for (beta, v) in &m {
        if *v <= BigInt::zero() {
            return Err(format!("{name} {lam:?}: nonpositive multiplicity at {beta}"));
        }
        for i in 0..n {
            // ⟨h_i, λ − β⟩ and the reflected depth β + ⟨h_i, λ−β⟩ α_i
            let p = lam[i] - (0..n).map(|j| beta.get(j) as i64 * matrix[i][j]).sum::<i64>();
            let mut img = beta.to_signed();
            img[i] += p;
            if let Some(r) = RootVec::from_signed(&img) {
                if r.iter().zip(&limits).all(|(a, b)| a <= b) {
                    let w = m.get(&r).cloned().unwrap_or_default();
                    if w != *v {
                        return Err(format!("{name} {lam:?}: mult {v} at {beta} but {w} at reflected {r}"));
                    }
                }
            } else {
                return Err(format!("{name} {lam:?}: reflected depth of {beta} leaves Q+"));
            }
        }
    }
    if name == "A1" {
        let k = lam[0] as u32;
        for (beta, v) in &m {
            if beta.get(0) > k || !v.is_one() {
                return Err(format!("sl2 lambda={k}: unexpected weight {beta} with mult {v}"));
            }
        }
        if m.len() != k as usize + 1 {
            return Err(format!("sl2 lambda={k}: {} weights instead of {}", m.len(), k + 1));
        }
    }
    Ok(())
}

/// `Σ_{w ∈ W} ε(w) e^{−(ρ − wρ)}` in the box, by an independent breadth-first
/// search over `ρ − wρ`.
pub fn weyl_denominator_oracle(matrix: &[Vec<i64>], limits: &[u32]) -> BTreeMap<Vec<i64>, i64> {
    let n = matrix.len();
    let inside = |v: &[i64]| v.iter().zip(limits).all(|(&a, &b)| a >= 0 && a <= b as i64);
    let mut seen: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    let mut queue = VecDeque::new();
    seen.insert(vec![0; n], 1);
    queue.push_back(vec![0i64; n]);
    while let Some(v) = queue.pop_front() {
        let sign = seen[&v];
        for i in 0..n {
            // ρ − r_i wρ = α_i + r_i(ρ − wρ)
            let pairing: i64 = (0..n).map(|j| matrix[i][j] * v[j]).sum();
            let mut u = v.clone();
            u[i] += 1 - pairing;
            if inside(&u) && !seen.contains_key(&u) {
                seen.insert(u.clone(), -sign);
                queue.push_back(u);
            }
        }
    }
    seen
}

/// Peterson multiplicities reproduce the Weyl denominator.
pub fn peterson_matches_denominator(matrix: &[Vec<i64>], limits: &[u32]) -> Check {
    let n = matrix.len();
    let d = datum(matrix.to_vec(), None);
    let all: Vec<usize> = (0..n).collect();
    let bx = DegreeBox::new(limits.to_vec());
    let slice = KmSlice::new(&d, &all, &bx).map_err(|e| e.to_string())?;
    let mut prod = FormalSeries::one(&bx);
    for (alpha, &m) in slice.positive_roots() {
        prod = prod
            .mul(&FormalSeries::one_minus_power(&bx, alpha, &BigInt::from(m)))
            .map_err(|e| e.to_string())?;
    }
    let oracle = weyl_denominator_oracle(matrix, limits);
    let keys: BTreeSet<RootVec> = prod
        .terms()
        .keys()
        .cloned()
        .chain(oracle.keys().map(|k| RootVec::from_signed(k).unwrap()))
        .collect();
    for k in keys {
        let want = oracle.get(&k.to_signed()).copied().unwrap_or(0);
        if prod.coeff(&k) != BigRational::from_integer(want.into()) {
            return Err(format!("{matrix:?} box {limits:?}: coefficient at {k} is {} not {want}", prod.coeff(&k)));
        }
    }
    Ok(())
}

pub const A2: [[i64; 2]; 2] = [[2, -1], [-1, 2]];
pub const AFFINE_A1: [[i64; 2]; 2] = [[2, -2], [-2, 2]];

pub fn rows(m: &[[i64; 2]; 2]) -> Vec<Vec<i64>> {
    m.iter().map(|r| r.to_vec()).collect()
}
