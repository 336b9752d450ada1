//! j-function coefficients and Monster multiplicities.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith;
use crate::bbzmult;
use crate::cartan::{BorcherdsCartanDatum, EntryRule, Label, RootVec};
use crate::error::{Error, Result};
use crate::series::DegreeBox;

/// Coefficients `c(n)` of `j(q) − 744 = Σ_{n≥−1} c(n) qⁿ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JCoefficients {
    /// `coeffs[k] = c(k − 1)`.
    coeffs: Vec<BigInt>,
}

impl JCoefficients {
    /// Largest `n` with a stored coefficient.
    pub fn max_n(&self) -> i64 {
        self.coeffs.len() as i64 - 2
    }

    /// `c(n)`; zero below `−1`. Panics beyond the computed range.
    pub fn c(&self, n: i64) -> BigInt {
        if n < -1 {
            return BigInt::zero();
        }
        assert!(n <= self.max_n(), "c({n}) beyond computed range {}", self.max_n());
        self.coeffs[(n + 1) as usize].clone()
    }

    /// `c(x)` for rational `x = num/den`, zero unless `x` is an integer.
    pub fn c_frac(&self, num: i64, den: i64) -> BigInt {
        if num % den != 0 {
            BigInt::zero()
        } else {
            self.c(num / den)
        }
    }

    /// `(c(1), …, c(k))` as charges for the Monster window.
    pub fn charges(&self, k: i64) -> Vec<BigInt> {
        (1..=k).map(|n| self.c(n)).collect()
    }
}

/// `j(q) − 744` through `q^N` as `E₄³ / Δ`.
pub fn j_coefficients(n_max: usize) -> Result<JCoefficients> {
    if n_max < 2 {
        return Err(Error::InvalidInput("j-coefficients need N >= 2".into()));
    }
    // Work with q·j(q) = E₄(q)³ / ∏(1−qⁿ)²⁴ through q^{N+1}.
    let len = n_max + 2;
    let mut e4 = vec![BigInt::zero(); len];
    e4[0] = BigInt::one();
    for (n, slot) in e4.iter_mut().enumerate().skip(1) {
        let sigma3: u64 = arith::divisors(n as u64).iter().map(|d| d * d * d).sum();
        *slot = BigInt::from(240u64 * sigma3);
    }
    let e4_cubed = mul_trunc(&mul_trunc(&e4, &e4), &e4);
    let eta24 = arith::euler_phi_power_table(&BigInt::from(24), len - 1);
    let inv = inverse_trunc(&eta24);
    let mut qj = mul_trunc(&e4_cubed, &inv);
    qj[1] -= 744;
    let out = JCoefficients { coeffs: qj };
    let expected = [(-1, 1i64), (0, 0), (1, 196_884), (2, 21_493_760)];
    for (n, v) in expected {
        if out.c(n) != BigInt::from(v) {
            return Err(Error::Invariant(format!(
                "j-expansion self-test failed: c({n}) = {}",
                out.c(n)
            )));
        }
    }
    Ok(out)
}

fn mul_trunc(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let len = a.len();
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn inverse_trunc(a: &[BigInt]) -> Vec<BigInt> {
    debug_assert!(a[0].is_one());
    let mut out = vec![BigInt::zero(); a.len()];
    out[0] = BigInt::one();
    for n in 1..a.len() {
        let mut acc = BigInt::zero();
        for k in 1..=n {
            acc -= &a[k] * &out[n - k];
        }
        out[n] = acc;
    }
    out
}

/// Witt function over partitions of `(m, n)` into positive pairs, weighted by
/// `d(i, j)`, with pairs ordered lexicographically.
pub fn witt_pairs(m: u32, n: u32, d: &impl Fn(u32, u32) -> BigInt) -> BigRational {
    let mut pairs = Vec::new();
    for i in 1..=m {
        for j in 1..=n {
            let v = d(i, j);
            if !v.is_zero() {
                pairs.push(((i, j), BigRational::from_integer(v)));
            }
        }
    }
    let mut total = BigRational::zero();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        pairs: &[((u32, u32), BigRational)],
        idx: usize,
        rm: u32,
        rn: u32,
        count: u64,
        acc: BigRational,
        total: &mut BigRational,
    ) {
        if rm == 0 && rn == 0 {
            *total += acc * BigRational::from_integer(arith::factorial(count - 1));
            return;
        }
        if idx == pairs.len() || rm == 0 || rn == 0 {
            return;
        }
        rec(pairs, idx + 1, rm, rn, count, acc.clone(), total);
        let ((i, j), v) = &pairs[idx];
        let (mut a, mut b, mut acc, mut c) = (rm, rn, acc, 0u64);
        while a >= *i && b >= *j {
            a -= i;
            b -= j;
            c += 1;
            acc = acc * v / BigRational::from_integer(c.into());
            rec(pairs, idx + 1, a, b, count + c, acc.clone(), total);
        }
    }
    rec(&pairs, 0, m, n, 0, BigRational::one(), &mut total);
    total
}

/// `Σ_{k|(m,n)} μ(k)/k · W(m/k, n/k)`, asserted to be a nonnegative integer.
pub fn mobius_pairs(m: u32, n: u32, d: &impl Fn(u32, u32) -> BigInt) -> Result<BigInt> {
    let g = num_integer::gcd(m, n) as u64;
    let mut total = BigRational::zero();
    for k in arith::divisors(g) {
        let mu = arith::mobius(k);
        if mu != 0 {
            total += BigRational::new(mu.into(), k.into())
                * witt_pairs(m / k as u32, n / k as u32, d);
        }
    }
    match arith::to_integer(&total) {
        Some(v) if !v.is_negative() => Ok(v),
        _ => Err(Error::Invariant(format!(
            "multiplicity at ({m},{n}) is {}",
            arith::render_rational(&total)
        ))),
    }
}

fn require_range(coeffs: &JCoefficients, need: i64) -> Result<()> {
    if coeffs.max_n() < need {
        return Err(Error::InvalidInput(format!(
            "need j-coefficients through c({need}), have c({})",
            coeffs.max_n()
        )));
    }
    Ok(())
}

/// `dim L_{(m,n)}` of the Monster Lie algebra, with `d(i,j) = c(i+j−1)`.
pub fn monster_lie_mult(m: u32, n: u32, coeffs: &JCoefficients) -> Result<BigInt> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidInput("m and n must be positive".into()));
    }
    require_range(coeffs, (m + n) as i64)?;
    mobius_pairs(m, n, &|i, j| coeffs.c(i as i64 + j as i64 - 1))
}

/// `d(m, n) = Σ_{l=1}^{min(m,n)} c((m+n−l)/l)`.
pub fn monster_bozec_d(m: u32, n: u32, coeffs: &JCoefficients) -> BigInt {
    (1..=m.min(n))
        .map(|l| coeffs.c_frac((m + n - l) as i64, l as i64))
        .sum()
}

/// `dim 𝓛_{(m,n)}` of the Monster Borcherds-Bozec algebra.
pub fn monster_bozec_mult(m: u32, n: u32, coeffs: &JCoefficients) -> Result<BigInt> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidInput("m and n must be positive".into()));
    }
    require_range(coeffs, (m + n) as i64)?;
    mobius_pairs(m, n, &|i, j| monster_bozec_d(i, j, coeffs))
}

/// The Monster datum on the window `{−1, 1, …, k}` with charge `c(i)`.
pub fn monster_datum(k: i64, coeffs: &JCoefficients) -> Result<BorcherdsCartanDatum> {
    require_range(coeffs, k)?;
    let mut window = vec![Label::Int(-1)];
    window.extend((1..=k).map(Label::Int));
    let mut charge = vec![BigInt::one()];
    charge.extend(coeffs.charges(k));
    BorcherdsCartanDatum::from_rule(EntryRule::Monster, window, None, Some(charge))
}

/// Root-graded multiplicity `dim 𝓛_α` for `α` given as `(vertex, count)`
/// pairs over `{−1, 1, 2, …}`, via the generic pipeline with `J = {−1}`.
pub fn monster_bozec_root_mult(alpha: &[(i64, u32)], coeffs: &JCoefficients) -> Result<BigInt> {
    let k = alpha
        .iter()
        .filter(|(_, c)| *c > 0)
        .map(|&(v, _)| v)
        .max()
        .unwrap_or(1)
        .max(1);
    for &(v, _) in alpha {
        if v == 0 || v < -1 {
            return Err(Error::UnknownVertex(v.to_string()));
        }
    }
    let datum = monster_datum(k, coeffs)?;
    let mut coords = vec![0u32; datum.rank()];
    for &(v, c) in alpha {
        coords[datum.position(&Label::Int(v))?] += c;
    }
    let root = RootVec::new(coords);
    let j = [datum.position(&Label::Int(-1))?];
    bbzmult::root_multiplicity(&datum, &j, &root, &DegreeBox::below(&root))
}

/// All root vectors over `{−1, 1, 2, …}` whose image in the
/// `(Σ l_k + j, Σ k·l_k − j)` grading is `(m, n)`.
pub fn roots_over_grade(m: u32, n: u32) -> Vec<Vec<(i64, u32)>> {
    let mut out = Vec::new();
    for j in 0..m {
        let parts = m - j;
        let weight = n + j;
        // multisets of `parts` positive integers summing to `weight`
        let mut cur = Vec::new();
        collect_partitions(weight, parts, weight, &mut cur, &mut |p| {
            let mut counts: BTreeMap<i64, u32> = BTreeMap::new();
            for &k in p {
                *counts.entry(k as i64).or_insert(0) += 1;
            }
            let mut alpha = Vec::new();
            if j > 0 {
                alpha.push((-1, j));
            }
            alpha.extend(counts);
            out.push(alpha);
        });
    }
    out
}

fn collect_partitions(
    total: u32,
    parts: u32,
    max_part: u32,
    cur: &mut Vec<u32>,
    emit: &mut impl FnMut(&[u32]),
) {
    if parts == 0 {
        if total == 0 {
            emit(cur);
        }
        return;
    }
    if total < parts {
        return;
    }
    for p in (1..=max_part.min(total - (parts - 1))).rev() {
        cur.push(p);
        collect_partitions(total - p, parts - 1, p, cur, emit);
        cur.pop();
    }
}

/// Necklace polynomial, re-exported for the Monster context.
pub fn necklace(k: u64, n: u64) -> BigInt {
    arith::necklace(k, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs() -> JCoefficients {
        j_coefficients(16).unwrap()
    }

    #[test]
    fn self_test_values() {
        let c = coeffs();
        assert_eq!(c.c(1), BigInt::from(196_884));
        assert_eq!(c.c(0), BigInt::zero());
        assert_eq!(c.c(3), BigInt::from(864_299_970i64));
        assert_eq!(c.c(4), c.c(3) + c.c(1) * (c.c(1) - 1) / 2);
    }

    #[test]
    fn lie_replication_small() {
        let c = coeffs();
        assert_eq!(monster_lie_mult(1, 1, &c).unwrap(), c.c(1));
        assert_eq!(monster_lie_mult(2, 2, &c).unwrap(), c.c(4));
        assert_eq!(monster_lie_mult(4, 2, &c).unwrap(), c.c(8));
    }

    #[test]
    fn bozec_d_values() {
        let c = coeffs();
        assert_eq!(monster_bozec_d(1, 1, &c), c.c(1));
        assert_eq!(monster_bozec_d(2, 1, &c), c.c(2));
        assert_eq!(monster_bozec_d(3, 1, &c), c.c(3));
        assert_eq!(monster_bozec_d(4, 2, &c), c.c(5) + c.c(2));
        assert_eq!(monster_bozec_d(1, 2, &c), c.c(2));
    }

    #[test]
    fn bozec_mult_example() {
        let c = coeffs();
        let got = monster_bozec_mult(4, 2, &c).unwrap();
        let c2 = c.c(2);
        let displayed = c.c(5) + c.c(3) * c.c(1) + (&c2 * &c2 + &c2) / 2;
        assert_eq!(got, displayed);
        assert_eq!(got, c.c(8) + c.c(2));
        assert_eq!(monster_bozec_mult(1, 1, &c).unwrap(), c.c(1));
    }

    #[test]
    fn root_mult_simple_and_real() {
        let c = coeffs();
        for k in 1..=3 {
            assert_eq!(monster_bozec_root_mult(&[(k, 1)], &c).unwrap(), c.c(k));
        }
        assert_eq!(monster_bozec_root_mult(&[(-1, 3)], &c).unwrap(), BigInt::zero());
        assert_eq!(monster_bozec_root_mult(&[(-1, 1)], &c).unwrap(), BigInt::one());
    }

    #[test]
    fn grade_enumeration() {
        let roots = roots_over_grade(4, 2);
        assert_eq!(roots.len(), 4);
        assert!(roots.contains(&vec![(-1, 3), (5, 1)]));
        assert!(roots.contains(&vec![(-1, 2), (1, 1), (3, 1)]));
        assert!(roots.contains(&vec![(-1, 2), (2, 2)]));
        assert!(roots.contains(&vec![(-1, 1), (1, 3)]));
    }

    #[test]
    fn necklace_values() {
        assert_eq!(necklace(2, 4), BigInt::from(3));
    }
}
