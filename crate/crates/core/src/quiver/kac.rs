//! Counting polynomials of absolutely indecomposable representations and
//! the comparison with root multiplicities.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::field::FiniteField;
use super::orbits::{orbits, LocusFilter};
use super::{is_absolutely_indecomposable, kac_degree_bound, Quiver};
use crate::bbzmult;
use crate::cartan::RootVec;
use crate::error::{Error, Result};
use crate::interp::{self, CountingPolynomial};
use crate::series::DegreeBox;

#[derive(Debug, Clone)]
pub struct KacReport {
    pub alpha: Vec<u32>,
    pub degree_bound: usize,
    /// Degree actually fitted; below the bound when samples run short.
    pub fitted_degree: usize,
    pub clamped: bool,
    pub counts: Vec<(u32, BigInt)>,
    pub polynomial: CountingPolynomial,
}

/// Number of absolutely indecomposable classes in the locus over `F_q`.
pub fn count_absolutely_indecomposable(
    quiver: &Arc<Quiver>,
    alpha: &[u32],
    q: u32,
    filter: LocusFilter,
    cap: u64,
) -> Result<u64> {
    let field = FiniteField::get(q)?;
    let mut n = 0;
    for orbit in orbits(quiver, alpha, &field, filter, cap)? {
        if is_absolutely_indecomposable(&orbit.representative, cap)? {
            n += 1;
        }
    }
    Ok(n)
}

fn kac_polynomial(
    quiver: &Arc<Quiver>,
    alpha: &[u32],
    samples: &[u32],
    filter: LocusFilter,
    cap: u64,
) -> Result<KacReport> {
    if samples.len() < 2 {
        return Err(Error::InvalidInput(
            "at least two sample fields are needed to verify a fit".into(),
        ));
    }
    let bound = kac_degree_bound(quiver, alpha);
    let fitted = bound.min(samples.len() - 2);
    let mut counts = Vec::new();
    for &q in samples {
        counts.push((q, BigInt::from(count_absolutely_indecomposable(quiver, alpha, q, filter, cap)?)));
    }
    let points: Vec<(i64, BigInt)> = counts.iter().map(|(q, c)| (*q as i64, c.clone())).collect();
    let polynomial = interp::fit(&points, fitted)?;
    Ok(KacReport {
        alpha: alpha.to_vec(),
        degree_bound: bound,
        fitted_degree: fitted,
        clamped: fitted < bound,
        counts,
        polynomial,
    })
}

/// `A_α^{1-nil}` interpolated from exhaustive counts at the sample fields.
pub fn kac_polynomial_1nil(
    quiver: &Arc<Quiver>,
    alpha: &[u32],
    samples: &[u32],
    cap: u64,
) -> Result<KacReport> {
    kac_polynomial(quiver, alpha, samples, LocusFilter::OneNilpotent, cap)
}

/// `A_α^{nil}`; kept for the spot check against the 1-nilpotent variant.
pub fn kac_polynomial_nil(
    quiver: &Arc<Quiver>,
    alpha: &[u32],
    samples: &[u32],
    cap: u64,
) -> Result<KacReport> {
    kac_polynomial(quiver, alpha, samples, LocusFilter::Nilpotent, cap)
}

#[derive(Debug, Clone)]
pub struct RootRow {
    pub alpha: RootVec,
    pub multiplicity: BigInt,
    pub kac_constant: BigInt,
    pub polynomial: String,
    pub clamped: bool,
    pub agree: bool,
}

#[derive(Debug, Clone)]
pub struct CorrespondenceReport {
    pub rows: Vec<RootRow>,
    /// Positive roots in the box from the multiplicity side.
    pub roots_from_algebra: Vec<RootVec>,
    /// Dimension vectors carrying an absolutely indecomposable 1-nilpotent
    /// class at some sample field.
    pub roots_from_quiver: Vec<RootVec>,
}

impl CorrespondenceReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.agree) && self.roots_from_algebra == self.roots_from_quiver
    }
}

/// Compares `dim (g_Q)_α` with `A_α^{1-nil}(0)` on every nonzero `α` in the box.
pub fn check_root_correspondence(
    quiver: &Arc<Quiver>,
    bx: &DegreeBox,
    samples: &[u32],
    cap: u64,
) -> Result<CorrespondenceReport> {
    let datum = quiver.cartan()?;
    let table = bbzmult::multiplicity_table(&datum, &datum.real_vertices(), bx)?;
    let mut rows = Vec::new();
    let mut roots_from_algebra = Vec::new();
    let mut roots_from_quiver = Vec::new();
    for alpha in bx.nonzero_points() {
        let report = kac_polynomial_1nil(quiver, alpha.coeffs(), samples, cap)?;
        let multiplicity = table.get(&alpha);
        let kac_constant = report.polynomial.constant();
        if multiplicity.is_positive() {
            roots_from_algebra.push(alpha.clone());
        }
        if report.counts.iter().any(|(_, c)| !c.is_zero()) {
            roots_from_quiver.push(alpha.clone());
        }
        rows.push(RootRow {
            agree: multiplicity == kac_constant,
            alpha,
            multiplicity,
            kac_constant,
            polynomial: report.polynomial.to_string(),
            clamped: report.clamped,
        });
    }
    Ok(CorrespondenceReport {
        rows,
        roots_from_algebra,
        roots_from_quiver,
    })
}
