//! Exact polynomial fitting of point counts.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith;
use crate::error::{Error, Result};

/// A polynomial with integer coefficients, constant term first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountingPolynomial {
    pub coeffs: Vec<BigInt>,
}

impl CountingPolynomial {
    pub fn eval(&self, x: i64) -> BigInt {
        let x = BigInt::from(x);
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &x + c)
    }

    pub fn constant(&self) -> BigInt {
        self.coeffs.first().cloned().unwrap_or_default()
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs[self.degree()].clone()
    }
}

impl fmt::Display for CountingPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            parts.push(match k {
                0 => format!("{c}"),
                1 => format!("{c}*q"),
                _ => format!("{c}*q^{k}"),
            });
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Fits a polynomial of degree at most `degree` through the first
/// `degree + 1` points, then requires integral coefficients and an exact fit
/// at every remaining point.
pub fn fit(points: &[(i64, BigInt)], degree: usize) -> Result<CountingPolynomial> {
    let raw = || {
        points
            .iter()
            .map(|(x, y)| format!("{x}:{y}"))
            .collect::<Vec<_>>()
            .join(", ")
    };
    if points.len() < degree + 2 {
        return Err(Error::Interpolation(format!(
            "degree {degree} needs {} samples, got {} [{}]",
            degree + 2,
            points.len(),
            raw()
        )));
    }
    let basis = &points[..=degree];
    // Lagrange form expanded into monomial coefficients.
    let mut coeffs = vec![BigRational::zero(); degree + 1];
    for (i, (xi, yi)) in basis.iter().enumerate() {
        let mut poly = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (j, (xj, _)) in basis.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![BigRational::zero(); poly.len() + 1];
            for (k, c) in poly.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * BigRational::from_integer((*xj).into());
            }
            poly = next;
            denom *= BigRational::from_integer((xi - xj).into());
        }
        let scale = BigRational::from_integer(yi.clone()) / denom;
        for (k, c) in poly.into_iter().enumerate() {
            coeffs[k] += c * &scale;
        }
    }
    let mut ints = Vec::with_capacity(coeffs.len());
    for c in &coeffs {
        match arith::to_integer(c) {
            Some(v) => ints.push(v),
            None => {
                return Err(Error::Interpolation(format!(
                    "non-integral coefficient {} [{}]",
                    arith::render_rational(c),
                    raw()
                )))
            }
        }
    }
    while ints.len() > 1 && ints.last().is_some_and(|c| c.is_zero()) {
        ints.pop();
    }
    let poly = CountingPolynomial { coeffs: ints };
    for (x, y) in points {
        if poly.eval(*x) != *y {
            return Err(Error::Interpolation(format!(
                "fitted {poly} misses the sample at q={x} [{}]",
                raw()
            )));
        }
    }
    if poly.leading().is_negative() {
        return Err(Error::Interpolation(format!(
            "fitted {poly} has a negative leading coefficient [{}]",
            raw()
        )));
    }
    Ok(poly)
}
