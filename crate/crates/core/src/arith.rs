//! Small number-theoretic helpers shared by the pipelines.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Positive divisors of `n` in ascending order. `divisors(0)` is empty.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// The classical Möbius function.
pub fn mobius(mut n: u64) -> i64 {
    assert!(n > 0, "mobius(0) is undefined");
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: &BigInt, k: u64) -> BigInt {
    let mut num = BigInt::one();
    for i in 0..k {
        num *= n - BigInt::from(i);
    }
    num / factorial(k)
}

/// Coefficient of `q^n` in `∏_{k≥1} (1 − q^k)^f`.
///
/// Uses the power recurrence `n·P_n = Σ_{k=1}^{n} ((f+1)k − n)·A_k·P_{n−k}`
/// for `P = A^f`, valid for any exponent `f`.
pub fn euler_phi_power(f: &BigInt, n: usize) -> BigInt {
    euler_phi_power_table(f, n).pop().unwrap()
}

/// `φ_f(0..=n)`.
pub fn euler_phi_power_table(f: &BigInt, n: usize) -> Vec<BigInt> {
    let a = euler_phi_table(n);
    let mut p: Vec<BigInt> = vec![BigInt::one()];
    for m in 1..=n {
        let mut acc = BigInt::zero();
        for (k, ak) in a.iter().enumerate().take(m + 1).skip(1) {
            if ak.is_zero() {
                continue;
            }
            let factor = (f + 1u32) * BigInt::from(k) - BigInt::from(m);
            acc += factor * ak * &p[m - k];
        }
        let (quo, rem) = acc.div_rem(&BigInt::from(m));
        debug_assert!(rem.is_zero());
        p.push(quo);
    }
    p
}

/// Coefficients of Euler's product `∏(1 − q^k)` through degree `n`,
/// from the pentagonal number theorem.
pub fn euler_phi_table(n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n + 1];
    out[0] = BigInt::one();
    let mut k: i64 = 1;
    loop {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let g1 = (k * (3 * k - 1) / 2) as usize;
        let g2 = (k * (3 * k + 1) / 2) as usize;
        if g1 > n {
            break;
        }
        out[g1] = BigInt::from(sign);
        if g2 <= n {
            out[g2] = BigInt::from(sign);
        }
        k += 1;
    }
    out
}

/// Necklace polynomial `N(k, n) = (1/n) Σ_{d|n} μ(d) k^{n/d}`.
pub fn necklace(k: u64, n: u64) -> BigInt {
    assert!(n > 0, "necklace degree must be positive");
    let kb = BigInt::from(k);
    let sum: BigInt = divisors(n)
        .into_iter()
        .map(|d| BigInt::from(mobius(d)) * num_traits::pow(kb.clone(), (n / d) as usize))
        .sum();
    sum / BigInt::from(n)
}

/// Returns the integer value of `r` if it is integral.
pub fn to_integer(r: &BigRational) -> Option<BigInt> {
    r.is_integer().then(|| r.to_integer())
}

/// Converts a rational known to be a small nonnegative integer.
pub fn to_u64(r: &BigRational) -> Option<u64> {
    to_integer(r).filter(|v| !v.is_negative()).and_then(|v| v.to_u64())
}

/// Renders a rational as `num/den`, or just `num` when integral.
pub fn render_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn gcd_all(values: impl IntoIterator<Item = u64>) -> u64 {
    values.into_iter().fold(0, |g, v| g.gcd(&v))
}
