//! Truncated formal power series over `Q₊` with exact rational coefficients.
//!
//! A key `β` stands for the monomial `e^{−β}`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::arith::render_rational;
use crate::cartan::{Label, RootVec};
use crate::error::{Error, Result};

/// Componentwise truncation bound.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DegreeBox {
    limits: Vec<u32>,
}

impl DegreeBox {
    pub fn new(limits: Vec<u32>) -> Self {
        DegreeBox { limits }
    }

    /// The box `[0, β]`.
    pub fn below(beta: &RootVec) -> Self {
        DegreeBox::new(beta.coeffs().to_vec())
    }

    pub fn rank(&self) -> usize {
        self.limits.len()
    }

    pub fn limits(&self) -> &[u32] {
        &self.limits
    }

    pub fn limit(&self, i: usize) -> u32 {
        self.limits[i]
    }

    pub fn contains(&self, beta: &RootVec) -> bool {
        beta.rank() == self.rank() && beta.iter().zip(&self.limits).all(|(b, l)| b <= l)
    }

    /// Same test on signed coordinates (negative entries are outside).
    pub fn contains_signed(&self, coords: &[i64]) -> bool {
        coords
            .iter()
            .zip(&self.limits)
            .all(|(&c, &l)| c >= 0 && c <= l as i64)
    }

    pub fn is_empty(&self) -> bool {
        self.limits.iter().all(|&l| l == 0)
    }

    /// Number of lattice points in the box, including zero.
    pub fn size(&self) -> u128 {
        self.limits.iter().map(|&l| l as u128 + 1).product()
    }

    /// All points of the box sorted by height, then lexicographically.
    pub fn points(&self) -> Vec<RootVec> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.rank()];
        loop {
            out.push(RootVec::new(cur.clone()));
            let mut k = 0;
            loop {
                if k == cur.len() {
                    out.sort_by(|a, b| a.graded_cmp(b));
                    return out;
                }
                if cur[k] < self.limits[k] {
                    cur[k] += 1;
                    break;
                }
                cur[k] = 0;
                k += 1;
            }
        }
    }

    /// Nonzero points of the box in graded order.
    pub fn nonzero_points(&self) -> Vec<RootVec> {
        self.points().into_iter().filter(|p| !p.is_zero()).collect()
    }
}

/// Sparse truncated series `Σ c_β e^{−β}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalSeries {
    terms: BTreeMap<RootVec, BigRational>,
    bx: DegreeBox,
}

impl FormalSeries {
    pub fn zero(bx: &DegreeBox) -> Self {
        FormalSeries {
            terms: BTreeMap::new(),
            bx: bx.clone(),
        }
    }

    pub fn one(bx: &DegreeBox) -> Self {
        Self::monomial(bx, RootVec::zero(bx.rank()), BigRational::one())
    }

    /// `c·e^{−β}`, or zero if `β` lies outside the box.
    pub fn monomial(bx: &DegreeBox, beta: RootVec, c: BigRational) -> Self {
        let mut s = Self::zero(bx);
        s.add_term(beta, c);
        s
    }

    pub fn from_terms(bx: &DegreeBox, terms: impl IntoIterator<Item = (RootVec, BigRational)>) -> Self {
        let mut s = Self::zero(bx);
        for (k, v) in terms {
            s.add_term(k, v);
        }
        s
    }

    pub fn degree_box(&self) -> &DegreeBox {
        &self.bx
    }

    pub fn terms(&self) -> &BTreeMap<RootVec, BigRational> {
        &self.terms
    }

    pub fn coeff(&self, beta: &RootVec) -> BigRational {
        self.terms.get(beta).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant(&self) -> BigRational {
        self.coeff(&RootVec::zero(self.bx.rank()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c·e^{−β}` in place, dropping terms outside the box.
    pub fn add_term(&mut self, beta: RootVec, c: BigRational) {
        if c.is_zero() || !self.bx.contains(&beta) {
            return;
        }
        let entry = self.terms.entry(beta);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_box(&self, other: &FormalSeries) -> Result<()> {
        if self.bx != other.bx {
            return Err(Error::BoxMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &FormalSeries) -> Result<FormalSeries> {
        self.check_box(other)?;
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &FormalSeries) -> Result<FormalSeries> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FormalSeries {
        self.scale(&-BigRational::one())
    }

    pub fn scale(&self, c: &BigRational) -> FormalSeries {
        if c.is_zero() {
            return Self::zero(&self.bx);
        }
        FormalSeries {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
            bx: self.bx.clone(),
        }
    }

    pub fn mul(&self, other: &FormalSeries) -> Result<FormalSeries> {
        self.check_box(other)?;
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = Self::zero(&self.bx);
        for (ka, va) in &small.terms {
            for (kb, vb) in &large.terms {
                let k = ka.add(kb);
                if self.bx.contains(&k) {
                    out.add_term(k, va * vb);
                }
            }
        }
        Ok(out)
    }

    /// `a^n`; negative `n` requires an invertible constant term.
    pub fn pow(&self, n: i64) -> Result<FormalSeries> {
        let base = if n < 0 { self.inverse()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut result = Self::one(&self.bx);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq)?;
            }
        }
        Ok(result)
    }

    pub fn inverse(&self) -> Result<FormalSeries> {
        let c0 = self.constant();
        if c0.is_zero() {
            return Err(Error::NotInvertible("constant term is zero".into()));
        }
        // a = c0 (1 − u)  ⇒  a^{-1} = c0^{-1} Σ u^k
        let u = Self::one(&self.bx).sub(&self.scale(&c0.recip()))?;
        let mut total = Self::one(&self.bx);
        let mut power = Self::one(&self.bx);
        loop {
            power = power.mul(&u)?;
            if power.is_zero() {
                break;
            }
            total = total.add(&power)?;
        }
        Ok(total.scale(&c0.recip()))
    }

    /// `−log(1 − u) = Σ_{n≥1} uⁿ/n`.
    pub fn neg_log_one_minus(&self) -> Result<FormalSeries> {
        if !self.constant().is_zero() {
            return Err(Error::InvalidInput(
                "neg_log_one_minus needs a zero constant term".into(),
            ));
        }
        let mut total = Self::zero(&self.bx);
        let mut power = Self::one(&self.bx);
        let mut n: i64 = 1;
        loop {
            power = power.mul(self)?;
            if power.is_zero() {
                return Ok(total);
            }
            total = total.add(&power.scale(&BigRational::new(BigInt::one(), BigInt::from(n))))?;
            n += 1;
        }
    }

    /// `exp(u) = Σ uⁿ/n!` for `u` with zero constant term.
    pub fn exp(&self) -> Result<FormalSeries> {
        if !self.constant().is_zero() {
            return Err(Error::InvalidInput("exp needs a zero constant term".into()));
        }
        let mut total = Self::one(&self.bx);
        let mut term = Self::one(&self.bx);
        let mut n: i64 = 1;
        loop {
            term = term
                .mul(self)?
                .scale(&BigRational::new(BigInt::one(), BigInt::from(n)));
            if term.is_zero() {
                return Ok(total);
            }
            total = total.add(&term)?;
            n += 1;
        }
    }

    /// `(1 − e^{−α})^m` expanded binomially for a nonnegative integer `m`.
    pub fn one_minus_power(bx: &DegreeBox, alpha: &RootVec, m: &BigInt) -> FormalSeries {
        let mut out = Self::one(bx);
        let mut k: u64 = 1;
        let mut binom = BigInt::one();
        loop {
            let key = alpha.scale(k as u32);
            if !bx.contains(&key) || alpha.is_zero() {
                return out;
            }
            binom = binom * (m - BigInt::from(k - 1)) / BigInt::from(k);
            if binom.is_zero() {
                return out;
            }
            let sign = if k % 2 == 1 { -BigInt::one() } else { BigInt::one() };
            out.add_term(key, BigRational::from_integer(sign * &binom));
            k += 1;
        }
    }

    /// Terms in graded order.
    pub fn sorted_terms(&self) -> Vec<(&RootVec, &BigRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.graded_cmp(b.0));
        v
    }

    /// One line per term: `coeff * e^{-(k1 a1 + ...)}`; the constant term is
    /// printed as its coefficient alone.
    pub fn render(&self, labels: &[Label]) -> String {
        let mut lines = Vec::new();
        for (k, v) in self.sorted_terms() {
            if k.is_zero() {
                lines.push(render_rational(v));
            } else {
                lines.push(format!("{} * e^{{-({})}}", render_rational(v), k.render_labeled(labels)));
            }
        }
        lines.join("\n")
    }

    /// JSON `[{"exp": {vertex: k}, "num": "...", "den": "..."}]`.
    pub fn to_json(&self, labels: &[Label]) -> Value {
        let items: Vec<Value> = self
            .sorted_terms()
            .into_iter()
            .map(|(k, v)| {
                let exp: serde_json::Map<String, Value> = k
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| (labels[i].to_string(), json!(c)))
                    .collect();
                json!({"exp": exp, "num": v.numer().to_string(), "den": v.denom().to_string()})
            })
            .collect();
        Value::Array(items)
    }
}

impl fmt::Display for FormalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<Label> = (0..self.bx.rank() as i64).map(Label::Int).collect();
        f.write_str(&self.render(&labels))
    }
}
