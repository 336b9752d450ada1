//! Borcherds-Cartan data with charge, root-lattice vectors and weights.
//!
//! Vertices of a datum are addressed by position `0..rank()`; each position
//! carries a [`Label`] used for input and output. Rule-generated data (the
//! Monster) are materialised over a finite window of labels.

use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};

/// External name of a vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Int(i64),
    Name(String),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Int(v) => write!(f, "{v}"),
            Label::Name(s) => f.write_str(s),
        }
    }
}

impl From<i64> for Label {
    fn from(v: i64) -> Self {
        Label::Int(v)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label::Name(s.to_string())
    }
}

impl Label {
    /// Parses user text: integers become [`Label::Int`].
    pub fn parse(s: &str) -> Label {
        s.trim()
            .parse::<i64>()
            .map(Label::Int)
            .unwrap_or_else(|_| Label::Name(s.trim().to_string()))
    }

    /// Whether this label names the same vertex as user text `s`.
    pub fn matches(&self, s: &str) -> bool {
        *self == Label::parse(s) || self.to_string() == s.trim()
    }
}

/// Kind of a simple root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexKind {
    Real,
    Isotropic,
    NonIsotropic,
}

/// Closed-form entry rules for infinite index sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryRule {
    /// `a_ij = −(i+j)` on `I = {−1, 1, 2, …}`.
    Monster,
}

impl EntryRule {
    pub fn entry(self, i: &Label, j: &Label) -> Result<i64> {
        match self {
            EntryRule::Monster => {
                let (Label::Int(a), Label::Int(b)) = (i, j) else {
                    return Err(Error::InvalidDatum(format!(
                        "monster rule needs integer vertices, got {i} and {j}"
                    )));
                };
                for v in [a, b] {
                    if *v == 0 || *v < -1 {
                        return Err(Error::UnknownVertex(v.to_string()));
                    }
                }
                Ok(-(a + b))
            }
        }
    }
}

/// A symmetrizable Borcherds-Cartan matrix with symmetrizers and charge,
/// restricted to a finite window of vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BorcherdsCartanDatum {
    labels: Vec<Label>,
    matrix: Vec<i64>,
    symmetrizers: Vec<i64>,
    charge: Vec<BigInt>,
    rule: Option<EntryRule>,
}

impl BorcherdsCartanDatum {
    /// Builds and validates a datum from an explicit matrix.
    pub fn new(
        labels: Vec<Label>,
        matrix: Vec<Vec<i64>>,
        symmetrizers: Option<Vec<i64>>,
        charge: Option<Vec<BigInt>>,
    ) -> Result<Self> {
        let n = labels.len();
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidDatum(format!(
                "matrix must be {n}x{n} to match the vertex list"
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.clone()) {
                return Err(Error::InvalidDatum(format!("duplicate vertex {l}")));
            }
        }
        let symmetrizers = match symmetrizers {
            Some(s) => s,
            None => minimal_symmetrizer(&matrix).ok_or_else(|| {
                Error::InvalidDatum("matrix is not symmetrizable".to_string())
            })?,
        };
        let charge = charge.unwrap_or_else(|| vec![BigInt::one(); n]);
        let datum = BorcherdsCartanDatum {
            labels,
            matrix: matrix.into_iter().flatten().collect(),
            symmetrizers,
            charge,
            rule: None,
        };
        datum.validate()?;
        Ok(datum)
    }

    /// Materialises a rule-generated datum over `window`.
    pub fn from_rule(
        rule: EntryRule,
        window: Vec<Label>,
        symmetrizers: Option<Vec<i64>>,
        charge: Option<Vec<BigInt>>,
    ) -> Result<Self> {
        let mut matrix = Vec::with_capacity(window.len());
        for i in &window {
            let row = window
                .iter()
                .map(|j| rule.entry(i, j))
                .collect::<Result<Vec<_>>>()?;
            matrix.push(row);
        }
        let mut datum = Self::new(window, matrix, symmetrizers, charge)?;
        datum.rule = Some(rule);
        Ok(datum)
    }

    fn validate(&self) -> Result<()> {
        let n = self.rank();
        if self.symmetrizers.len() != n || self.charge.len() != n {
            return Err(Error::InvalidDatum(
                "symmetrizers and charge must list one value per vertex".into(),
            ));
        }
        for i in 0..n {
            if self.symmetrizers[i] <= 0 {
                return Err(Error::InvalidDatum(format!(
                    "symmetrizer of {} must be positive",
                    self.labels[i]
                )));
            }
            let d = self.a(i, i);
            if d > 2 || d % 2 != 0 {
                return Err(Error::InvalidDatum(format!(
                    "diagonal entry a_{0}{0} = {d} is not in {{2, 0, -2, ...}}",
                    self.labels[i]
                )));
            }
            if !self.charge[i].is_positive() {
                return Err(Error::InvalidDatum(format!(
                    "charge of {} must be positive",
                    self.labels[i]
                )));
            }
            if d == 2 && !self.charge[i].is_one() {
                return Err(Error::InvalidDatum(format!(
                    "real vertex {} must have charge 1",
                    self.labels[i]
                )));
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                let (aij, aji) = (self.a(i, j), self.a(j, i));
                if aij > 0 {
                    return Err(Error::InvalidDatum(format!(
                        "off-diagonal entry a_({},{}) = {aij} is positive",
                        self.labels[i], self.labels[j]
                    )));
                }
                if (aij == 0) != (aji == 0) {
                    return Err(Error::InvalidDatum(format!(
                        "a_({0},{1}) = 0 but a_({1},{0}) != 0 or vice versa",
                        self.labels[i], self.labels[j]
                    )));
                }
                if self.symmetrizers[i] * aij != self.symmetrizers[j] * aji {
                    return Err(Error::InvalidDatum(format!(
                        "symmetrizers fail s_i a_ij = s_j a_ji at ({}, {})",
                        self.labels[i], self.labels[j]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &Label {
        &self.labels[i]
    }

    pub fn rule(&self) -> Option<EntryRule> {
        self.rule
    }

    /// Position of the vertex named `label`.
    pub fn position(&self, label: &Label) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    /// Position of the vertex named by user text.
    pub fn position_of(&self, text: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l.matches(text))
            .ok_or_else(|| Error::UnknownVertex(text.trim().to_string()))
    }

    /// Entry `a_ij` by position.
    #[inline]
    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.matrix[i * self.rank() + j]
    }

    /// Entry `a_ij` by label; errors outside the window.
    pub fn entry(&self, i: &Label, j: &Label) -> Result<i64> {
        Ok(self.a(self.position(i)?, self.position(j)?))
    }

    pub fn matrix(&self) -> Vec<Vec<i64>> {
        (0..self.rank())
            .map(|i| (0..self.rank()).map(|j| self.a(i, j)).collect())
            .collect()
    }

    #[inline]
    pub fn s(&self, i: usize) -> i64 {
        self.symmetrizers[i]
    }

    pub fn symmetrizers(&self) -> &[i64] {
        &self.symmetrizers
    }

    pub fn charge(&self, i: usize) -> &BigInt {
        &self.charge[i]
    }

    pub fn charges(&self) -> &[BigInt] {
        &self.charge
    }

    pub fn classify(&self, i: usize) -> VertexKind {
        match self.a(i, i) {
            2 => VertexKind::Real,
            0 => VertexKind::Isotropic,
            _ => VertexKind::NonIsotropic,
        }
    }

    pub fn is_real(&self, i: usize) -> bool {
        self.classify(i) == VertexKind::Real
    }

    pub fn real_vertices(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&i| self.is_real(i)).collect()
    }

    pub fn imaginary_vertices(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&i| !self.is_real(i)).collect()
    }

    /// Symmetrized entry `(α_i, α_j) = s_i a_ij`.
    #[inline]
    pub fn form(&self, i: usize, j: usize) -> i64 {
        self.s(i) * self.a(i, j)
    }

    /// `(α, β)` for root-lattice vectors given as signed coordinates.
    pub fn bilinear_coords(&self, alpha: &[i64], beta: &[i64]) -> i64 {
        let mut total = 0;
        for (i, &ai) in alpha.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in beta.iter().enumerate() {
                if bj != 0 {
                    total += ai * bj * self.form(i, j);
                }
            }
        }
        total
    }

    /// `(α, β)` for `α, β ∈ Q₊`.
    pub fn bilinear(&self, alpha: &RootVec, beta: &RootVec) -> i64 {
        self.bilinear_coords(&alpha.to_signed(), &beta.to_signed())
    }

    /// `⟨h_i, λ⟩`.
    pub fn pairing(&self, i: usize, weight: &Weight) -> i64 {
        let base = match &weight.base {
            WeightBase::Zero => 0,
            WeightBase::Rho => 1,
            WeightBase::Custom(p) => p[i],
        };
        base + weight
            .offset
            .iter()
            .enumerate()
            .map(|(j, &o)| o * self.a(i, j))
            .sum::<i64>()
    }

    /// `(β, λ) = Σ_i β_i s_i ⟨h_i, λ⟩`.
    pub fn bilinear_weight(&self, beta: &RootVec, weight: &Weight) -> i64 {
        beta.iter()
            .enumerate()
            .filter(|(_, &b)| b != 0)
            .map(|(i, &b)| b as i64 * self.s(i) * self.pairing(i, weight))
            .sum()
    }

    /// Restriction to a sub-window given by positions (kept in order).
    pub fn restrict(&self, positions: &[usize]) -> Result<Self> {
        let labels = positions.iter().map(|&p| self.labels[p].clone()).collect();
        let matrix = positions
            .iter()
            .map(|&i| positions.iter().map(|&j| self.a(i, j)).collect())
            .collect();
        let sym = positions.iter().map(|&p| self.symmetrizers[p]).collect();
        let charge = positions.iter().map(|&p| self.charge[p].clone()).collect();
        let mut d = Self::new(labels, matrix, Some(sym), Some(charge))?;
        d.rule = self.rule;
        Ok(d)
    }

    /// Same matrix with a new charge vector.
    pub fn with_charge(&self, charge: Vec<BigInt>) -> Result<Self> {
        let mut d = self.clone();
        d.charge = charge;
        d.validate()?;
        Ok(d)
    }

    /// Expands the charge into an index set `Ĩ = {(i,p) : 1 ≤ p ≤ f(i)}`.
    ///
    /// Returns the expanded datum (charge ≡ 1) together with the map from
    /// expanded positions to original positions.
    pub fn expand_charge(&self, cap: usize) -> Result<(Self, Vec<usize>)> {
        let mut total: usize = 0;
        let mut origin = Vec::new();
        for i in 0..self.rank() {
            let f = self.charge[i].to_usize().filter(|&f| f <= cap).ok_or_else(|| {
                Error::CapExceeded(format!(
                    "charge {} of vertex {} exceeds the expansion cap {cap}; use native charge weights",
                    self.charge[i], self.labels[i]
                ))
            })?;
            total += f;
            if total > cap {
                return Err(Error::CapExceeded(format!(
                    "expanded index set exceeds the cap {cap}; use native charge weights"
                )));
            }
            origin.extend(std::iter::repeat(i).take(f));
        }
        let labels = origin
            .iter()
            .enumerate()
            .map(|(k, &i)| {
                let copy = origin[..k].iter().filter(|&&o| o == i).count() + 1;
                if self.charge[i].is_one() {
                    self.labels[i].clone()
                } else {
                    Label::Name(format!("{}#{copy}", self.labels[i]))
                }
            })
            .collect();
        let matrix = origin
            .iter()
            .map(|&i| origin.iter().map(|&j| self.a(i, j)).collect())
            .collect();
        let sym = origin.iter().map(|&i| self.symmetrizers[i]).collect();
        let d = Self::new(labels, matrix, Some(sym), None)?;
        Ok((d, origin))
    }
}

/// Smallest positive integer symmetrizer of `matrix`, if one exists.
pub fn minimal_symmetrizer(matrix: &[Vec<i64>]) -> Option<Vec<i64>> {
    let n = matrix.len();
    // Work with rationals num/den per vertex, component by component.
    let mut value: Vec<Option<(i64, i64)>> = vec![None; n];
    for start in 0..n {
        if value[start].is_some() {
            continue;
        }
        value[start] = Some((1, 1));
        let mut component = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let (ni, di) = value[i].unwrap();
            for j in 0..n {
                if i == j || matrix[i][j] == 0 {
                    continue;
                }
                if matrix[j][i] == 0 {
                    return None;
                }
                // s_j = s_i a_ij / a_ji
                let num = ni * matrix[i][j];
                let den = di * matrix[j][i];
                let g = num.gcd(&den);
                let (num, den) = (num / g, den / g);
                let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
                match value[j] {
                    Some((a, b)) => {
                        if a * den != num * b {
                            return None;
                        }
                    }
                    None => {
                        if num <= 0 {
                            return None;
                        }
                        value[j] = Some((num, den));
                        component.push(j);
                        queue.push_back(j);
                    }
                }
            }
        }
        let l = component
            .iter()
            .fold(1i64, |acc, &k| acc.lcm(&value[k].unwrap().1));
        let scaled: Vec<i64> = component
            .iter()
            .map(|&k| value[k].unwrap().0 * (l / value[k].unwrap().1))
            .collect();
        let g = scaled.iter().fold(0i64, |acc, v| acc.gcd(v));
        for (&k, v) in component.iter().zip(scaled) {
            value[k] = Some((v / g, 1));
        }
    }
    Some(value.into_iter().map(|v| v.unwrap().0).collect())
}

/// An element of `Q₊`, dense over the positions of a datum.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootVec(Vec<u32>);

impl RootVec {
    pub fn new(coeffs: Vec<u32>) -> Self {
        RootVec(coeffs)
    }

    pub fn zero(rank: usize) -> Self {
        RootVec(vec![0; rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        RootVec(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, u32> {
        self.0.iter()
    }

    pub fn height(&self) -> u64 {
        self.0.iter().map(|&c| c as u64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&i| self.0[i] > 0).collect()
    }

    pub fn supported_in(&self, set: &[usize]) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(i, &c)| c == 0 || set.contains(&i))
    }

    /// Componentwise `self ≤ other`.
    pub fn le(&self, other: &RootVec) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &RootVec) -> RootVec {
        RootVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn checked_sub(&self, other: &RootVec) -> Option<RootVec> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(RootVec)
    }

    pub fn scale(&self, k: u32) -> RootVec {
        RootVec(self.0.iter().map(|a| a * k).collect())
    }

    /// Exact division by `d`, if `d` divides every coefficient.
    pub fn div_exact(&self, d: u32) -> Option<RootVec> {
        self.0
            .iter()
            .all(|a| a % d == 0)
            .then(|| RootVec(self.0.iter().map(|a| a / d).collect()))
    }

    pub fn gcd(&self) -> u64 {
        arith::gcd_all(self.0.iter().map(|&c| c as u64))
    }

    /// All `d` dividing every coefficient, ascending.
    pub fn divisors(&self) -> Result<Vec<u64>> {
        if self.is_zero() {
            return Err(Error::InvalidInput("divisors of the zero vector".into()));
        }
        Ok(arith::divisors(self.gcd()))
    }

    pub fn to_signed(&self) -> Vec<i64> {
        self.0.iter().map(|&c| c as i64).collect()
    }

    /// Interprets signed coordinates as an element of `Q₊`.
    pub fn from_signed(coords: &[i64]) -> Option<RootVec> {
        coords
            .iter()
            .map(|&c| u32::try_from(c).ok())
            .collect::<Option<Vec<_>>>()
            .map(RootVec)
    }

    /// Ordering by height, then lexicographically.
    pub fn graded_cmp(&self, other: &RootVec) -> std::cmp::Ordering {
        self.height()
            .cmp(&other.height())
            .then_with(|| self.0.cmp(&other.0))
    }

    /// Renders the vector with labels as `k1 a1 + k2 a2`.
    pub fn render_labeled(&self, labels: &[Label]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| format!("{c} a{}", labels[i]))
            .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// Renders `(c1,c2,...)`.
impl fmt::Display for RootVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Symbolic part of a weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum WeightBase {
    Zero,
    /// `⟨h_i, ρ⟩ = 1` for every `i`.
    Rho,
    /// Explicit coroot pairings `⟨h_i, λ⟩`.
    Custom(Vec<i64>),
}

/// A weight `base + Σ offset_j α_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weight {
    pub base: WeightBase,
    pub offset: Vec<i64>,
}

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight {
            base: WeightBase::Zero,
            offset: vec![0; rank],
        }
    }

    pub fn rho(rank: usize) -> Self {
        Weight {
            base: WeightBase::Rho,
            offset: vec![0; rank],
        }
    }

    pub fn custom(pairings: Vec<i64>) -> Self {
        let n = pairings.len();
        Weight {
            base: WeightBase::Custom(pairings),
            offset: vec![0; n],
        }
    }

    /// `self − β` for `β ∈ Q₊`.
    pub fn minus(&self, beta: &RootVec) -> Weight {
        let mut w = self.clone();
        for (o, &b) in w.offset.iter_mut().zip(beta.iter()) {
            *o -= b as i64;
        }
        w
    }

    /// `self + Σ coords_j α_j`.
    pub fn shifted(&self, coords: &[i64]) -> Weight {
        let mut w = self.clone();
        for (o, &c) in w.offset.iter_mut().zip(coords) {
            *o += c;
        }
        w
    }

    /// Base pairings shifted by ρ: the weight `self + ρ` with the same offset.
    pub fn plus_rho(&self) -> Weight {
        let n = self.offset.len();
        let base = match &self.base {
            WeightBase::Zero => WeightBase::Rho,
            WeightBase::Rho => WeightBase::Custom(vec![2; n]),
            WeightBase::Custom(p) => WeightBase::Custom(p.iter().map(|v| v + 1).collect()),
        };
        Weight {
            base,
            offset: self.offset.clone(),
        }
    }

    /// `−offset` when it lies in `Q₊`.
    pub fn depth(&self) -> Option<RootVec> {
        let neg: Vec<i64> = self.offset.iter().map(|o| -o).collect();
        RootVec::from_signed(&neg)
    }
}
