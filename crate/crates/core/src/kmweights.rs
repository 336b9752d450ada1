//! The Kac-Moody slice `g₀^(J)`: Peterson root multiplicities and
//! Freudenthal weight multiplicities, truncated to a box.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cartan::{BorcherdsCartanDatum, RootVec, Weight};
use crate::error::{Error, Result};
use crate::series::{DegreeBox, FormalSeries};
use crate::weyl;

/// Root data of the Kac-Moody subalgebra generated by the real vertices `J`.
#[derive(Debug, Clone)]
pub struct KmSlice<'a> {
    datum: &'a BorcherdsCartanDatum,
    j: Vec<usize>,
    bx: DegreeBox,
    mults: BTreeMap<RootVec, u64>,
}

impl<'a> KmSlice<'a> {
    /// Computes all root multiplicities of the slice inside `bx ∩ Q₊^J`.
    pub fn new(datum: &'a BorcherdsCartanDatum, j: &[usize], bx: &DegreeBox) -> Result<Self> {
        let mut j = j.to_vec();
        j.sort_unstable();
        j.dedup();
        for &v in &j {
            if v >= datum.rank() {
                return Err(Error::UnknownVertex(v.to_string()));
            }
            if !datum.is_real(v) {
                return Err(Error::InvalidInput(format!(
                    "J must consist of real vertices; {} is imaginary",
                    datum.label(v)
                )));
            }
        }
        let limits = (0..datum.rank())
            .map(|i| if j.contains(&i) { bx.limit(i) } else { 0 })
            .collect();
        let bx = DegreeBox::new(limits);
        let mut slice = KmSlice {
            datum,
            j,
            bx,
            mults: BTreeMap::new(),
        };
        slice.run_peterson()?;
        Ok(slice)
    }

    pub fn j(&self) -> &[usize] {
        &self.j
    }

    pub fn degree_box(&self) -> &DegreeBox {
        &self.bx
    }

    fn run_peterson(&mut self) -> Result<()> {
        let d = self.datum;
        let mut c: HashMap<RootVec, BigRational> = HashMap::new();
        let mut weyl_numerator: Option<HashMap<RootVec, i64>> = None;
        for beta in self.bx.nonzero_points() {
            let mult: BigRational = if beta.height() == 1 {
                BigRational::one()
            } else {
                let denom = d.bilinear(&beta, &beta)
                    - 2 * beta
                        .iter()
                        .enumerate()
                        .map(|(i, &b)| b as i64 * d.s(i))
                        .sum::<i64>();
                let mut rhs = BigRational::zero();
                for (b1, c1) in &c {
                    if !b1.le(&beta) || *b1 == beta {
                        continue;
                    }
                    let b2 = beta.checked_sub(b1).unwrap();
                    if let Some(c2) = c.get(&b2) {
                        rhs += BigRational::from_integer(d.bilinear(b1, &b2).into()) * c1 * c2;
                    }
                }
                let lower = self.lower_c_part(&beta);
                if denom != 0 {
                    let cb = rhs / BigRational::from_integer(denom.into());
                    cb - lower
                } else {
                    // ρ − β is W-conjugate to ρ; the recurrence is silent here and
                    // the coefficient is read off the denominator identity.
                    if !rhs.is_zero() {
                        return Err(Error::Invariant(format!(
                            "Peterson recurrence inconsistent at {beta}: zero denominator, nonzero sum"
                        )));
                    }
                    if weyl_numerator.is_none() {
                        weyl_numerator = Some(self.weyl_numerator()?);
                    }
                    let w = weyl_numerator.as_ref().unwrap().get(&beta).copied().unwrap_or(0);
                    let p = self.partial_product_coeff(&beta);
                    BigRational::from_integer(p - BigInt::from(w))
                }
            };
            let m = crate::arith::to_u64(&mult).ok_or_else(|| {
                Error::Invariant(format!(
                    "Kac-Moody multiplicity at {beta} is {mult}, not a nonnegative integer"
                ))
            })?;
            if m > 0 {
                self.mults.insert(beta.clone(), m);
            }
            let cb = BigRational::from_integer(m.into()) + self.lower_c_part(&beta);
            if !cb.is_zero() {
                c.insert(beta, cb);
            }
        }
        Ok(())
    }

    /// `Σ_{k|β, k>1} mult(β/k)/k`.
    fn lower_c_part(&self, beta: &RootVec) -> BigRational {
        let mut total = BigRational::zero();
        for k in crate::arith::divisors(beta.gcd()).into_iter().skip(1) {
            let sub = beta.div_exact(k as u32).unwrap();
            if let Some(&m) = self.mults.get(&sub) {
                total += BigRational::new(m.into(), k.into());
            }
        }
        total
    }

    /// `Σ_{w∈W_J} ε(w) e^{wρ−ρ}` inside the box, keyed by `ρ − wρ`.
    fn weyl_numerator(&self) -> Result<HashMap<RootVec, i64>> {
        let depth = self.bx.limits().iter().map(|&l| l as usize).sum::<usize>() + 1;
        let elems = weyl::enumerate_parabolic(self.datum, &self.j, depth, Some(&self.bx))?;
        let mut out = HashMap::new();
        for w in elems {
            let key: Vec<i64> = w.rho_shift().iter().map(|s| -s).collect();
            let key = RootVec::from_signed(&key).expect("cutoff keeps ρ − wρ in Q₊");
            *out.entry(key).or_insert(0) += w.sign();
        }
        Ok(out)
    }

    /// Coefficient of `e^{−β}` in `∏_{α<β}(1 − e^{−α})^{mult α}` over known roots.
    fn partial_product_coeff(&self, beta: &RootVec) -> BigInt {
        let bx = DegreeBox::below(beta);
        let mut prod = FormalSeries::one(&bx);
        for (alpha, &m) in &self.mults {
            if alpha.le(beta) && alpha != beta {
                let f = FormalSeries::one_minus_power(&bx, alpha, &BigInt::from(m));
                prod = prod.mul(&f).expect("same box");
            }
        }
        prod.coeff(beta).to_integer()
    }

    /// `dim (g₀^(J))_β`.
    pub fn peterson_mult(&self, beta: &RootVec) -> Result<u64> {
        if beta.is_zero() {
            return Err(Error::InvalidInput("multiplicity of the zero vector".into()));
        }
        if !beta.supported_in(&self.j) {
            return Err(Error::InvalidInput(format!("{beta} is not supported on J")));
        }
        if !self.bx.contains(beta) {
            return Err(Error::InvalidInput(format!("{beta} lies outside the slice box")));
        }
        Ok(self.mults.get(beta).copied().unwrap_or(0))
    }

    /// Positive roots of the slice in the box with their multiplicities.
    pub fn positive_roots(&self) -> &BTreeMap<RootVec, u64> {
        &self.mults
    }

    fn check_dominant(&self, lambda: &Weight) -> Result<()> {
        for &j in &self.j {
            let p = self.datum.pairing(j, lambda);
            if p < 0 {
                return Err(Error::Invariant(format!(
                    "highest weight is not J-dominant: <h_{}, lambda> = {p}",
                    self.datum.label(j)
                )));
            }
        }
        Ok(())
    }

    /// `dim V_J(λ)_{λ−β}` for every `β ∈ Q₊^J` with `β ≤ limits`.
    pub fn weight_multiplicities(
        &self,
        lambda: &Weight,
        limits: &[u32],
    ) -> Result<BTreeMap<RootVec, BigInt>> {
        self.check_dominant(lambda)?;
        let d = self.datum;
        let lim: Vec<u32> = (0..d.rank())
            .map(|i| if self.j.contains(&i) { limits[i] } else { 0 })
            .collect();
        if lim.iter().zip(self.bx.limits()).any(|(a, b)| a > b) {
            return Err(Error::InvalidInput(
                "weight window exceeds the slice box".into(),
            ));
        }
        let local = DegreeBox::new(lim);
        let lam_pair: Vec<i64> = (0..d.rank()).map(|i| d.pairing(i, lambda)).collect();
        let lam_alpha = |alpha: &RootVec| -> i64 {
            alpha
                .iter()
                .enumerate()
                .map(|(i, &a)| a as i64 * d.s(i) * lam_pair[i])
                .sum()
        };
        let mut m: BTreeMap<RootVec, BigInt> = BTreeMap::new();
        for beta in local.points() {
            if beta.is_zero() {
                m.insert(beta, BigInt::one());
                continue;
            }
            let lam_rho_beta: i64 = beta
                .iter()
                .enumerate()
                .map(|(i, &b)| b as i64 * d.s(i) * (lam_pair[i] + 1))
                .sum();
            let denom = 2 * lam_rho_beta - d.bilinear(&beta, &beta);
            let mut rhs = BigInt::zero();
            for (alpha, &mult) in &self.mults {
                if !alpha.le(&beta) {
                    continue;
                }
                let la = lam_alpha(alpha);
                let mut k = 1u32;
                while let Some(rest) = beta.checked_sub(&alpha.scale(k)) {
                    if let Some(mv) = m.get(&rest) {
                        let coeff = la - d.bilinear(&rest, alpha);
                        rhs += BigInt::from(coeff * mult as i64) * mv;
                    }
                    k += 1;
                }
            }
            rhs *= 2;
            if denom == 0 {
                if !rhs.is_zero() {
                    return Err(Error::Invariant(format!(
                        "vanishing Freudenthal denominator at depth {beta} with nonzero right side {rhs}"
                    )));
                }
                continue;
            }
            let (q, r) = rhs.div_rem(&BigInt::from(denom));
            if !r.is_zero() || q.is_negative() {
                return Err(Error::Invariant(format!(
                    "Freudenthal value at depth {beta} is {rhs}/{denom}"
                )));
            }
            if !q.is_zero() {
                m.insert(beta, q);
            }
        }
        Ok(m)
    }

    /// `dim V_J(λ)_μ` for a single weight `μ`.
    pub fn freudenthal_dim(&self, lambda: &Weight, mu: &Weight) -> Result<BigInt> {
        let diff: Vec<i64> = lambda.offset.iter().zip(&mu.offset).map(|(a, b)| a - b).collect();
        if lambda.base != mu.base {
            return Err(Error::InvalidInput("weights have different bases".into()));
        }
        let beta = RootVec::from_signed(&diff)
            .filter(|b| b.supported_in(&self.j))
            .ok_or_else(|| Error::InvalidInput("λ − μ is not in Q₊^J".into()))?;
        let m = self.weight_multiplicities(lambda, beta.coeffs())?;
        Ok(m.get(&beta).cloned().unwrap_or_else(BigInt::zero))
    }

    /// Character of `V_J(λ)` inside `outer`, keyed by `−μ` (the full depth of
    /// each weight, including the inert non-`J` part of `λ`).
    pub fn ch_vj(&self, lambda: &Weight, outer: &DegreeBox) -> Result<FormalSeries> {
        let top = lambda.depth().ok_or_else(|| {
            Error::InvalidInput("highest weight offset is not in −Q₊".into())
        })?;
        let mut out = FormalSeries::zero(outer);
        if !outer.contains(&top) {
            return Ok(out);
        }
        let limits: Vec<u32> = outer
            .limits()
            .iter()
            .zip(top.iter())
            .map(|(l, t)| l - t)
            .collect();
        for (beta, mult) in self.weight_multiplicities(lambda, &limits)? {
            out.add_term(top.add(&beta), BigRational::from_integer(mult));
        }
        Ok(out)
    }
}

/// `Σ_β dim` helper for tests: total dimension captured in a multiplicity map.
pub fn total_dimension(m: &BTreeMap<RootVec, BigInt>) -> BigInt {
    m.values().sum()
}

/// Converts a multiplicity to `i64` for small-case assertions.
pub fn small(v: &BigInt) -> i64 {
    v.to_i64().expect("small multiplicity")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::Label;

    fn datum(m: Vec<Vec<i64>>) -> BorcherdsCartanDatum {
        let n = m.len() as i64;
        BorcherdsCartanDatum::new((0..n).map(Label::Int).collect(), m, None, None).unwrap()
    }

    #[test]
    fn a1_multiplicities() {
        let d = datum(vec![vec![2]]);
        let s = KmSlice::new(&d, &[0], &DegreeBox::new(vec![4])).unwrap();
        assert_eq!(s.peterson_mult(&RootVec::new(vec![1])).unwrap(), 1);
        assert_eq!(s.peterson_mult(&RootVec::new(vec![2])).unwrap(), 0);
    }

    #[test]
    fn a2_multiplicities() {
        let d = datum(vec![vec![2, -1], vec![-1, 2]]);
        let s = KmSlice::new(&d, &[0, 1], &DegreeBox::new(vec![3, 3])).unwrap();
        assert_eq!(s.peterson_mult(&RootVec::new(vec![1, 1])).unwrap(), 1);
        // 2α₁+2α₂ has a vanishing Peterson denominator
        assert_eq!(s.peterson_mult(&RootVec::new(vec![2, 2])).unwrap(), 0);
        assert_eq!(s.positive_roots().len(), 3);
    }

    #[test]
    fn affine_imaginary_roots() {
        let d = datum(vec![vec![2, -2], vec![-2, 2]]);
        let s = KmSlice::new(&d, &[0, 1], &DegreeBox::new(vec![4, 4])).unwrap();
        for k in 1..=4 {
            assert_eq!(s.peterson_mult(&RootVec::new(vec![k, k])).unwrap(), 1);
        }
        assert_eq!(s.peterson_mult(&RootVec::new(vec![1, 2])).unwrap(), 1);
        assert_eq!(s.peterson_mult(&RootVec::new(vec![1, 3])).unwrap(), 0);
    }

    #[test]
    fn example_three_four_slice_module() {
        let d = datum(vec![vec![2, -2], vec![-2, -2]]);
        let s = KmSlice::new(&d, &[0], &DegreeBox::new(vec![10, 10])).unwrap();
        let lam = Weight::zero(2).minus(&RootVec::new(vec![0, 2]));
        let m = s.weight_multiplicities(&lam, &[10, 0]).unwrap();
        let got: Vec<(u32, i64)> = m.iter().map(|(b, v)| (b.get(0), small(v))).collect();
        assert_eq!(got, vec![(0, 1), (1, 1), (2, 1), (3, 1), (4, 1)]);
    }

    #[test]
    fn trivial_module() {
        let d = datum(vec![vec![2, -1], vec![-1, 2]]);
        let s = KmSlice::new(&d, &[0, 1], &DegreeBox::new(vec![3, 3])).unwrap();
        let m = s.weight_multiplicities(&Weight::zero(2), &[3, 3]).unwrap();
        assert_eq!(m.len(), 1);
    }

    #[test]
    fn sl3_adjoint_zero_weight() {
        let d = datum(vec![vec![2, -1], vec![-1, 2]]);
        let s = KmSlice::new(&d, &[0, 1], &DegreeBox::new(vec![3, 3])).unwrap();
        let lam = Weight::custom(vec![1, 1]);
        let mu = lam.minus(&RootVec::new(vec![1, 1]));
        assert_eq!(s.freudenthal_dim(&lam, &mu).unwrap(), BigInt::from(2));
        let m = s.weight_multiplicities(&lam, &[3, 3]).unwrap();
        assert_eq!(total_dimension(&m), BigInt::from(8));
    }

    #[test]
    fn rejects_non_dominant() {
        let d = datum(vec![vec![2]]);
        let s = KmSlice::new(&d, &[0], &DegreeBox::new(vec![3])).unwrap();
        assert!(s.weight_multiplicities(&Weight::custom(vec![-1]), &[3]).is_err());
    }
}
