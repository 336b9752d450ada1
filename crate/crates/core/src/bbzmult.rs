//! Root multiplicities, denominator identities and characters of
//! Borcherds-Bozec algebras via the virtual module `V^(J)`.
//!
//! Charge is handled natively: a non-isotropic vertex of charge `f` carries
//! weight `f`, and an isotropic vertex with total `t` carries `φ_f(t)`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{self, euler_phi_power};
use crate::cartan::{BorcherdsCartanDatum, RootVec, VertexKind, Weight};
use crate::error::{Error, Result};
use crate::kmweights::KmSlice;
use crate::series::{DegreeBox, FormalSeries};
use crate::weyl;

/// A sum of mutually orthogonal imaginary simple roots, stored collapsed:
/// one `(vertex, amount)` pair per present vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ImaginarySupport {
    parts: Vec<(usize, u32)>,
}

impl ImaginarySupport {
    pub fn empty() -> Self {
        ImaginarySupport { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[(usize, u32)] {
        &self.parts
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    /// The lattice value `s̄`.
    pub fn collapsed(&self, rank: usize) -> RootVec {
        let mut v = vec![0; rank];
        for &(i, a) in &self.parts {
            v[i] = a;
        }
        RootVec::new(v)
    }

    /// `d(s⁺)`: number of present non-isotropic vertices.
    pub fn nonisotropic_count(&self, datum: &BorcherdsCartanDatum) -> usize {
        self.parts
            .iter()
            .filter(|(i, _)| datum.classify(*i) == VertexKind::NonIsotropic)
            .count()
    }

    /// `d(s) = d(s⁺) + Σ t_i`.
    pub fn d(&self, datum: &BorcherdsCartanDatum) -> u64 {
        self.parts
            .iter()
            .map(|&(i, a)| match datum.classify(i) {
                VertexKind::Isotropic => a as u64,
                _ => 1,
            })
            .sum()
    }
}

/// `F_λ` inside `bx`: supports orthogonal to each other and to `λ`.
pub fn enumerate_f(
    datum: &BorcherdsCartanDatum,
    lambda: &Weight,
    bx: &DegreeBox,
) -> Vec<ImaginarySupport> {
    let candidates: Vec<usize> = datum
        .imaginary_vertices()
        .into_iter()
        .filter(|&i| bx.limit(i) > 0 && datum.pairing(i, lambda) == 0)
        .collect();
    let mut out = Vec::new();
    let mut chosen: Vec<(usize, u32)> = Vec::new();
    fn rec(
        datum: &BorcherdsCartanDatum,
        bx: &DegreeBox,
        candidates: &[usize],
        idx: usize,
        chosen: &mut Vec<(usize, u32)>,
        out: &mut Vec<ImaginarySupport>,
    ) {
        if idx == candidates.len() {
            out.push(ImaginarySupport {
                parts: chosen.clone(),
            });
            return;
        }
        rec(datum, bx, candidates, idx + 1, chosen, out);
        let i = candidates[idx];
        if chosen.iter().all(|&(k, _)| datum.a(i, k) == 0) {
            for amount in 1..=bx.limit(i) {
                chosen.push((i, amount));
                rec(datum, bx, candidates, idx + 1, chosen, out);
                chosen.pop();
            }
        }
    }
    rec(datum, bx, &candidates, 0, &mut chosen, &mut out);
    out.sort();
    out
}

/// `∏_{non-iso i} f(i) × ∏_{iso i} φ_{f(i)}(t_i)`.
pub fn support_weight(datum: &BorcherdsCartanDatum, s: &ImaginarySupport) -> BigInt {
    let mut w = BigInt::one();
    for &(i, a) in &s.parts {
        match datum.classify(i) {
            VertexKind::Isotropic => w *= euler_phi_power(datum.charge(i), a as usize),
            _ => w *= datum.charge(i),
        }
    }
    w
}

/// `ε(s) = (−1)^{d(s⁺)} × support_weight(s)`.
pub fn epsilon(datum: &BorcherdsCartanDatum, s: &ImaginarySupport) -> BigInt {
    let w = support_weight(datum, s);
    if s.nonisotropic_count(datum) % 2 == 1 {
        -w
    } else {
        w
    }
}

/// `S_λ = Σ_{s∈F_λ} ε(s) e^{−s}`.
pub fn s_lambda_series(
    datum: &BorcherdsCartanDatum,
    lambda: &Weight,
    bx: &DegreeBox,
) -> FormalSeries {
    let mut out = FormalSeries::zero(bx);
    for s in enumerate_f(datum, lambda, bx) {
        out.add_term(
            s.collapsed(datum.rank()),
            BigRational::from_integer(epsilon(datum, &s)),
        );
    }
    out
}

fn weyl_depth(bx: &DegreeBox) -> usize {
    bx.limits().iter().map(|&l| l as usize).sum::<usize>() + 1
}

/// The virtual `g₀^(J)`-module `V^(J)` truncated to a box.
#[derive(Debug, Clone)]
pub struct VirtualModule {
    j: Vec<usize>,
    bx: DegreeBox,
    character: FormalSeries,
    log: OnceLock<FormalSeries>,
}

impl VirtualModule {
    pub fn j(&self) -> &[usize] {
        &self.j
    }

    pub fn degree_box(&self) -> &DegreeBox {
        &self.bx
    }

    /// `ch V^(J) = Σ d_μ e^{μ}`, keyed by `−μ`.
    pub fn character(&self) -> &FormalSeries {
        &self.character
    }

    /// Virtual dimension `d_μ` at depth `β = −μ`.
    pub fn dim(&self, beta: &RootVec) -> BigRational {
        self.character.coeff(beta)
    }

    /// Weights with nonzero virtual dimension, in graded order.
    pub fn weights(&self) -> Vec<(RootVec, BigRational)> {
        self.character
            .sorted_terms()
            .into_iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    }

    /// `Σ_β W^(J)(β) e^{−β} = −log(1 − ch V^(J))`.
    pub fn witt_series(&self) -> &FormalSeries {
        self.log.get_or_init(|| {
            self.character
                .neg_log_one_minus()
                .expect("V^(J) has no weight zero")
        })
    }
}

/// Builds `V^(J)` inside `bx`.
pub fn virtual_module(
    datum: &BorcherdsCartanDatum,
    j: &[usize],
    bx: &DegreeBox,
) -> Result<VirtualModule> {
    if bx.rank() != datum.rank() {
        return Err(Error::InvalidInput("box rank differs from datum rank".into()));
    }
    let slice = KmSlice::new(datum, j, bx)?;
    let ws = weyl::enumerate_wj(datum, slice.j(), weyl_depth(bx), Some(bx))?;
    let fs = enumerate_f(datum, &Weight::zero(datum.rank()), bx);
    let rank = datum.rank();
    let mut character = FormalSeries::zero(bx);
    for w in &ws {
        for s in &fs {
            if w.length() == 0 && s.is_zero() {
                continue;
            }
            let weight = support_weight(datum, s);
            if weight.is_zero() {
                continue;
            }
            let exponent = w.length() + s.nonisotropic_count(datum) + 1;
            let coeff = if exponent % 2 == 0 { weight } else { -weight };
            let shifted = weyl::apply(datum, w, &Weight::rho(rank).minus(&s.collapsed(rank)))?;
            let hw = Weight::zero(rank).shifted(&shifted.offset);
            let Some(top) = hw.depth() else {
                return Err(Error::Invariant(format!(
                    "highest weight w(rho - s) - rho has offset {:?} outside -Q+ (w = {:?})",
                    hw.offset,
                    w.word()
                )));
            };
            if !bx.contains(&top) {
                continue;
            }
            let ch = slice.ch_vj(&hw, bx).map_err(|e| match e {
                Error::Invariant(msg) => Error::Invariant(format!(
                    "{msg} (w = {:?}, s = {:?})",
                    w.word(),
                    s.parts()
                )),
                other => other,
            })?;
            character = character.add(&ch.scale(&BigRational::from_integer(coeff)))?;
        }
    }
    let mut j = slice.j().to_vec();
    j.sort_unstable();
    Ok(VirtualModule {
        j,
        bx: bx.clone(),
        character,
        log: OnceLock::new(),
    })
}

/// `W^(J)(β)` by direct enumeration of partitions of `β` into weights of
/// `V^(J)`, ordered by height then lexicographically.
pub fn witt_by_partitions(vm: &VirtualModule, beta: &RootVec) -> BigRational {
    if beta.is_zero() {
        return BigRational::zero();
    }
    let parts: Vec<(RootVec, BigRational)> = vm
        .weights()
        .into_iter()
        .filter(|(k, _)| k.le(beta))
        .collect();
    let mut total = BigRational::zero();
    fn rec(
        parts: &[(RootVec, BigRational)],
        idx: usize,
        remaining: &RootVec,
        count: u64,
        acc: BigRational,
        total: &mut BigRational,
    ) {
        if remaining.is_zero() {
            *total += acc * BigRational::from_integer(arith::factorial(count - 1));
            return;
        }
        if idx == parts.len() {
            return;
        }
        rec(parts, idx + 1, remaining, count, acc.clone(), total);
        let (mu, d) = &parts[idx];
        let mut rest = remaining.clone();
        let mut acc = acc;
        let mut c: u64 = 0;
        while let Some(next) = rest.checked_sub(mu) {
            c += 1;
            acc = acc * d / BigRational::from_integer(c.into());
            rec(parts, idx + 1, &next, count + c, acc.clone(), total);
            rest = next;
        }
    }
    rec(&parts, 0, beta, 0, BigRational::one(), &mut total);
    total
}

/// `W^(J)(β)`; debug builds cross-check the partition value against the
/// logarithmic series.
pub fn witt(vm: &VirtualModule, beta: &RootVec) -> BigRational {
    let value = witt_by_partitions(vm, beta);
    debug_assert_eq!(
        value,
        vm.witt_series().coeff(beta),
        "Witt partition and log values disagree at {beta}"
    );
    value
}

/// Table of `dim g_α` for every nonzero `α` in a box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityTable {
    pub j: Vec<usize>,
    pub bx: DegreeBox,
    pub mults: BTreeMap<RootVec, BigInt>,
}

impl MultiplicityTable {
    pub fn get(&self, alpha: &RootVec) -> BigInt {
        self.mults.get(alpha).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Rows in graded order.
    pub fn rows(&self) -> Vec<(&RootVec, &BigInt)> {
        let mut v: Vec<_> = self.mults.iter().collect();
        v.sort_by(|a, b| a.0.graded_cmp(b.0));
        v
    }

    /// Positive roots (nonzero multiplicity).
    pub fn roots(&self) -> Vec<RootVec> {
        self.rows()
            .into_iter()
            .filter(|(_, m)| !m.is_zero())
            .map(|(k, _)| k.clone())
            .collect()
    }

    /// `∏ (1 − e^{−α})^{mult α}` over the rows selected by `keep`.
    pub fn product(&self, keep: impl Fn(&RootVec) -> bool) -> FormalSeries {
        let mut prod = FormalSeries::one(&self.bx);
        for (alpha, m) in self.rows() {
            if m.is_zero() || !keep(alpha) {
                continue;
            }
            let f = FormalSeries::one_minus_power(&self.bx, alpha, m);
            prod = prod.mul(&f).expect("same box");
        }
        prod
    }
}

fn integral_multiplicity(value: BigRational, alpha: &RootVec) -> Result<BigInt> {
    match arith::to_integer(&value) {
        Some(v) if !v.is_negative() => Ok(v),
        _ => Err(Error::Invariant(format!(
            "multiplicity at {alpha} is {}, not a nonnegative integer",
            arith::render_rational(&value)
        ))),
    }
}

/// `Σ_{d|α} μ(d)/d · W(α/d)`.
fn mobius_sum(alpha: &RootVec, w: impl Fn(&RootVec) -> BigRational) -> BigRational {
    let mut total = BigRational::zero();
    for d in arith::divisors(alpha.gcd()) {
        let mu = arith::mobius(d);
        if mu == 0 {
            continue;
        }
        let sub = alpha.div_exact(d as u32).unwrap();
        total += BigRational::new(mu.into(), d.into()) * w(&sub);
    }
    total
}

/// `dim g_α` for all nonzero `α` in `bx`.
pub fn multiplicity_table(
    datum: &BorcherdsCartanDatum,
    j: &[usize],
    bx: &DegreeBox,
) -> Result<MultiplicityTable> {
    let vm = virtual_module(datum, j, bx)?;
    let slice = KmSlice::new(datum, j, bx)?;
    let log = vm.witt_series();
    let mut mults = BTreeMap::new();
    for alpha in bx.nonzero_points() {
        let m = if alpha.supported_in(vm.j()) {
            BigInt::from(slice.peterson_mult(&alpha)?)
        } else {
            integral_multiplicity(mobius_sum(&alpha, |b| log.coeff(b)), &alpha)?
        };
        mults.insert(alpha, m);
    }
    Ok(MultiplicityTable {
        j: vm.j().to_vec(),
        bx: bx.clone(),
        mults,
    })
}

/// `dim g_α` for a single `α` in `bx`.
pub fn root_multiplicity(
    datum: &BorcherdsCartanDatum,
    j: &[usize],
    alpha: &RootVec,
    bx: &DegreeBox,
) -> Result<BigInt> {
    if alpha.is_zero() {
        return Err(Error::InvalidInput("multiplicity of the zero vector".into()));
    }
    if !bx.contains(alpha) {
        return Err(Error::InvalidInput(format!("{alpha} lies outside the box")));
    }
    let local = DegreeBox::below(alpha);
    let vm = virtual_module(datum, j, &local)?;
    if alpha.supported_in(vm.j()) {
        let slice = KmSlice::new(datum, j, &local)?;
        return Ok(BigInt::from(slice.peterson_mult(alpha)?));
    }
    integral_multiplicity(mobius_sum(alpha, |b| witt(&vm, b)), alpha)
}

/// Outcome of one series comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesCheck {
    pub pass: bool,
    /// First differing exponent in graded order with (left, right) values.
    pub first_discrepancy: Option<(RootVec, BigRational, BigRational)>,
}

impl SeriesCheck {
    fn compare(left: &FormalSeries, right: &FormalSeries) -> Self {
        let mut keys: Vec<&RootVec> = left.terms().keys().chain(right.terms().keys()).collect();
        keys.sort_by(|a, b| a.graded_cmp(b));
        keys.dedup();
        for k in keys {
            let (l, r) = (left.coeff(k), right.coeff(k));
            if l != r {
                return SeriesCheck {
                    pass: false,
                    first_discrepancy: Some((k.clone(), l, r)),
                };
            }
        }
        SeriesCheck {
            pass: true,
            first_discrepancy: None,
        }
    }
}

/// Result of [`verify_denominator`].
#[derive(Debug, Clone)]
pub struct DenominatorReport {
    /// `∏_{Δ₊(J)} (1−e^{−α})^{mult} == 1 − ch V^(J)`.
    pub twisted: SeriesCheck,
    /// `∏_{Δ₊} (1−e^{−α})^{mult} == Σ_{w,s} ε(w)ε(s) e^{w(ρ−s)−ρ}`.
    pub full: SeriesCheck,
    pub table: MultiplicityTable,
}

impl DenominatorReport {
    pub fn pass(&self) -> bool {
        self.twisted.pass && self.full.pass
    }
}

/// `Σ_{w∈W} Σ_{s∈F₀} ε(w)ε(s) e^{w(ρ−s)−ρ}` inside `bx`.
pub fn denominator_numerator(
    datum: &BorcherdsCartanDatum,
    bx: &DegreeBox,
) -> Result<FormalSeries> {
    weyl_numerator(datum, &Weight::zero(datum.rank()), bx)
}

/// `Σ_{w∈W} Σ_{s∈F_λ} ε(w)ε(s) e^{w(λ+ρ−s)−(λ+ρ)}` inside `bx`.
fn weyl_numerator(
    datum: &BorcherdsCartanDatum,
    lambda: &Weight,
    bx: &DegreeBox,
) -> Result<FormalSeries> {
    let rank = datum.rank();
    let ws = weyl::enumerate_wj(datum, &[], weyl_depth(bx), Some(bx))?;
    let fs = enumerate_f(datum, lambda, bx);
    let lam_rho = lambda.plus_rho();
    let mut out = FormalSeries::zero(bx);
    for w in &ws {
        for s in &fs {
            let eps = epsilon(datum, s) * w.sign();
            if eps.is_zero() {
                continue;
            }
            let image = weyl::apply(datum, w, &lam_rho.minus(&s.collapsed(rank)))?;
            let key: Vec<i64> = image
                .offset
                .iter()
                .zip(&lambda.offset)
                .map(|(o, l)| l - o)
                .collect();
            let Some(key) = RootVec::from_signed(&key) else {
                return Err(Error::Invariant(format!(
                    "w(lambda+rho-s) is not below lambda+rho for w = {:?}",
                    w.word()
                )));
            };
            out.add_term(key, BigRational::from_integer(eps));
        }
    }
    Ok(out)
}

/// Verifies the twisted and untwisted denominator identities in `bx`.
pub fn verify_denominator(
    datum: &BorcherdsCartanDatum,
    j: &[usize],
    bx: &DegreeBox,
) -> Result<DenominatorReport> {
    let table = multiplicity_table(datum, j, bx)?;
    check_denominator_with(datum, &table)
}

/// Runs both identity checks against a given multiplicity table.
pub fn check_denominator_with(
    datum: &BorcherdsCartanDatum,
    table: &MultiplicityTable,
) -> Result<DenominatorReport> {
    let bx = &table.bx;
    let vm = virtual_module(datum, &table.j, bx)?;
    let j = vm.j().to_vec();
    let twisted_left = table.product(|a| !a.supported_in(&j));
    let twisted_right = FormalSeries::one(bx).sub(vm.character())?;
    let full_left = table.product(|_| true);
    let full_right = denominator_numerator(datum, bx)?;
    Ok(DenominatorReport {
        twisted: SeriesCheck::compare(&twisted_left, &twisted_right),
        full: SeriesCheck::compare(&full_left, &full_right),
        table: table.clone(),
    })
}

/// `ch V(λ)` inside `bx`, keyed by `λ − μ`.
pub fn bbz_character(
    datum: &BorcherdsCartanDatum,
    lambda: &Weight,
    bx: &DegreeBox,
) -> Result<FormalSeries> {
    for i in 0..datum.rank() {
        let p = datum.pairing(i, lambda);
        if p < 0 {
            return Err(Error::InvalidInput(format!(
                "lambda is not dominant: <h_{}, lambda> = {p}",
                datum.label(i)
            )));
        }
    }
    let numerator = weyl_numerator(datum, lambda, bx)?;
    let table = multiplicity_table(datum, &datum.real_vertices(), bx)?;
    let denominator = table.product(|_| true);
    let ch = numerator.mul(&denominator.inverse()?)?;
    for (k, v) in ch.terms() {
        if arith::to_integer(v).filter(|x| !x.is_negative()).is_none() {
            return Err(Error::Invariant(format!(
                "character coefficient at {k} is {}",
                arith::render_rational(v)
            )));
        }
    }
    Ok(ch)
}
