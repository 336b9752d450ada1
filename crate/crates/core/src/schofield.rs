//! Words in the letters `S_{i,l}`, 1-nilpotent flags of submodules, the
//! pairing `⟨w, M⟩ = χ(X_M(w))` and numerical checks of its algebraic
//! properties.
//!
//! Euler characteristics are obtained by counting flags over several finite
//! fields, fitting a counting polynomial and evaluating it at 1.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp::{self, CountingPolynomial};
use crate::quiver::field::{self, Elem, FiniteField};
use crate::quiver::linalg::{self, Mat, Subspace};
use crate::quiver::orbits::{orbits, LocusFilter};
use crate::quiver::{FqRep, Quiver};

/// Default bound on the number of partial flags visited per count.
pub const DEFAULT_FLAG_CAP: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub vertex: usize,
    pub l: u32,
    pub primed: bool,
}

impl Letter {
    pub fn new(vertex: usize, l: u32) -> Self {
        Letter {
            vertex,
            l,
            primed: false,
        }
    }

    pub fn primed(self) -> Self {
        Letter {
            primed: true,
            ..self
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }

    pub fn has_primes(&self) -> bool {
        self.0.iter().any(|x| x.primed)
    }

    /// `deg w = Σ l_k α_{i_k}`, primed letters included.
    pub fn degree(&self, rank: usize) -> Vec<u32> {
        let mut d = vec![0; rank];
        for x in &self.0 {
            d[x.vertex] += x.l;
        }
        d
    }

    /// `(w₁, w₂)`: the unprimed and primed subwords, primes dropped.
    pub fn split(&self) -> (Word, Word) {
        let plain = |p: bool| {
            Word(
                self.0
                    .iter()
                    .filter(|x| x.primed == p)
                    .map(|x| Letter { primed: false, ..*x })
                    .collect(),
            )
        };
        (plain(false), plain(true))
    }

    pub fn render(&self, quiver: &Quiver) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|x| {
                format!(
                    "S{}({},{})",
                    if x.primed { "'" } else { "" },
                    quiver.labels()[x.vertex],
                    x.l
                )
            })
            .collect()
    }

    /// Parses `S(1,2)S'(2,1)`; `S(i)` abbreviates `S(i,1)` and `1` is the
    /// empty word.
    pub fn parse(quiver: &Quiver, text: &str) -> Result<Word> {
        let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() || text == "1" {
            return Ok(Word::empty());
        }
        let bad = || Error::InvalidInput(format!("cannot parse word '{text}'"));
        let mut letters = Vec::new();
        let mut rest = text.as_str();
        while !rest.is_empty() {
            rest = rest.strip_prefix('S').ok_or_else(bad)?;
            let primed = rest.starts_with('\'');
            if primed {
                rest = &rest[1..];
            }
            rest = rest.strip_prefix('(').ok_or_else(bad)?;
            let close = rest.find(')').ok_or_else(bad)?;
            let inner = &rest[..close];
            rest = &rest[close + 1..];
            let (vertex, l) = match inner.rsplit_once(',') {
                Some((v, l)) => (v, l.parse::<u32>().map_err(|_| bad())?),
                None => (inner, 1),
            };
            let vertex = quiver.position_of(vertex)?;
            letters.push(Letter { vertex, l, primed });
        }
        let w = Word(letters);
        validate(quiver, &w)?;
        Ok(w)
    }
}

/// `l ≥ 1`, and `l = 1` at vertices without loops.
pub fn validate(quiver: &Quiver, w: &Word) -> Result<()> {
    for x in &w.0 {
        if x.vertex >= quiver.rank() {
            return Err(Error::UnknownVertex(x.vertex.to_string()));
        }
        if x.l == 0 || (x.l > 1 && !quiver.is_imaginary(x.vertex)) {
            return Err(Error::InvalidInput(format!(
                "letter S({},{}) is not in the alphabet",
                quiver.labels()[x.vertex],
                x.l
            )));
        }
    }
    Ok(())
}

/// A finite linear combination of words.
pub type Combination = BTreeMap<Word, BigInt>;

pub fn single(w: Word) -> Combination {
    Combination::from([(w, BigInt::one())])
}

pub fn letter(vertex: usize, l: u32) -> Combination {
    single(Word(vec![Letter::new(vertex, l)]))
}

fn accumulate(into: &mut Combination, w: Word, c: BigInt) {
    let slot = into.entry(w).or_insert_with(BigInt::zero);
    *slot += c;
    if slot.is_zero() {
        into.retain(|_, v| !v.is_zero());
    }
}

pub fn product(a: &Combination, b: &Combination) -> Combination {
    let mut out = Combination::new();
    for (u, x) in a {
        for (v, y) in b {
            accumulate(&mut out, u.concat(v), x * y);
        }
    }
    out
}

pub fn commutator(a: &Combination, b: &Combination) -> Combination {
    let mut out = product(a, b);
    for (w, c) in product(b, a) {
        accumulate(&mut out, w, -c);
    }
    out
}

/// `(ad x)^k (y)`.
pub fn ad_power(x: &Combination, k: u32, y: &Combination) -> Combination {
    (0..k).fold(y.clone(), |acc, _| commutator(x, &acc))
}

/// `δ(w) = Σ_S w_S`, priming the letters indexed by `S`.
pub fn delta(w: &Word) -> Vec<Word> {
    let r = w.len();
    (0u64..1 << r)
        .map(|mask| {
            Word(
                w.0.iter()
                    .enumerate()
                    .map(|(k, x)| Letter {
                        primed: mask >> k & 1 == 1,
                        ..*x
                    })
                    .collect(),
            )
        })
        .collect()
}

/// A representation with integer matrices, realised over any field by
/// reduction into the prime subfield.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntModule {
    pub dims: Vec<usize>,
    pub maps: Vec<Vec<Vec<i64>>>,
}

impl IntModule {
    pub fn zero(quiver: &Quiver, dims: Vec<usize>) -> Self {
        let maps = quiver
            .arrows()
            .iter()
            .map(|&(a, b)| vec![vec![0; dims[a]]; dims[b]])
            .collect();
        IntModule { dims, maps }
    }

    pub fn realise(&self, quiver: &Arc<Quiver>, q: u32) -> Result<FqRep> {
        FqRep::from_int(FiniteField::get(q)?, quiver.clone(), self.dims.clone(), &self.maps)
    }

    pub fn from_rep(rep: &FqRep) -> Result<Self> {
        if rep.field.degree() != 1 {
            return Err(Error::InvalidInput(
                "only prime-field representations lift to integer matrices".into(),
            ));
        }
        let maps = rep
            .maps
            .iter()
            .map(|m| (0..m.rows).map(|r| m.row(r).iter().map(|&v| v as i64).collect()).collect())
            .collect();
        Ok(IntModule {
            dims: rep.dims.clone(),
            maps,
        })
    }

    pub fn direct_sum(&self, other: &IntModule, quiver: &Quiver) -> IntModule {
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let maps = quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(h, &(a, b))| {
                let mut m = vec![vec![0; dims[a]]; dims[b]];
                for (r, row) in self.maps[h].iter().enumerate() {
                    for (c, &v) in row.iter().enumerate() {
                        m[r][c] = v;
                    }
                }
                for (r, row) in other.maps[h].iter().enumerate() {
                    for (c, &v) in row.iter().enumerate() {
                        m[self.dims[b] + r][self.dims[a] + c] = v;
                    }
                }
                m
            })
            .collect();
        IntModule { dims, maps }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }
}

/// One step of a chain: grow the subspace at `vertex` by `amounts[b]`
/// inside block `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub vertex: usize,
    pub amounts: Vec<u32>,
}

/// Counts chains `0 = L₀ ⊂ … ⊂ L_r = M` of submodules where step `k` adds
/// `amounts[b]` dimensions at its vertex inside block `b`, every `L_k` is
/// the direct sum of its block intersections, and the loops at the step's
/// vertex vanish on `L_k/L_{k−1}`.
///
/// `blocks[b][i]` is the size of block `b` at vertex `i`; blocks are laid
/// out consecutively and the maps must preserve them.
pub fn count_chains(rep: &FqRep, blocks: &[Vec<usize>], steps: &[Step], cap: u64) -> Result<u64> {
    let n = rep.quiver.rank();
    for i in 0..n {
        let total: usize = blocks.iter().map(|b| b[i]).sum();
        if total != rep.dims[i] {
            return Err(Error::InvalidInput("block sizes do not cover the module".into()));
        }
    }
    for (b, block) in blocks.iter().enumerate() {
        let mut need = vec![0usize; n];
        for s in steps {
            need[s.vertex] += s.amounts[b] as usize;
        }
        if need != *block {
            return Ok(0);
        }
    }
    let offsets: Vec<Vec<usize>> = (0..blocks.len())
        .map(|b| (0..n).map(|i| blocks[..b].iter().map(|x| x[i]).sum()).collect())
        .collect();
    let state = ChainState {
        parts: blocks.iter().map(|b| b.iter().map(|&d| Subspace::zero(d)).collect()).collect(),
        whole: rep.dims.iter().map(|&d| Subspace::zero(d)).collect(),
    };
    let mut engine = Engine {
        rep,
        f: rep.f(),
        blocks,
        offsets,
        visited: 0,
        cap,
    };
    engine.descend(&state, steps)
}

#[derive(Clone)]
struct ChainState {
    parts: Vec<Vec<Subspace>>,
    whole: Vec<Subspace>,
}

struct Engine<'a> {
    rep: &'a FqRep,
    f: &'a FiniteField,
    blocks: &'a [Vec<usize>],
    offsets: Vec<Vec<usize>>,
    visited: u64,
    cap: u64,
}

impl Engine<'_> {
    fn embed(&self, b: usize, i: usize, v: &[Elem]) -> Vec<Elem> {
        let mut out = vec![0; self.rep.dims[i]];
        out[self.offsets[b][i]..self.offsets[b][i] + v.len()].copy_from_slice(v);
        out
    }

    /// Vectors of block `b` at `i` sent into the current chain by every
    /// arrow leaving `i`.
    fn admissible(&self, state: &ChainState, b: usize, i: usize) -> Subspace {
        let d = self.blocks[b][i];
        let mut rows: Vec<Vec<Elem>> = Vec::new();
        for (h, &(a, t)) in self.rep.quiver.arrows().iter().enumerate() {
            if a != i {
                continue;
            }
            let ann = state.whole[t].annihilator(self.f);
            if ann.rows == 0 {
                continue;
            }
            let px = ann.mul(&self.rep.maps[h], self.f);
            for r in 0..px.rows {
                let o = self.offsets[b][i];
                rows.push(px.row(r)[o..o + d].to_vec());
            }
        }
        if rows.is_empty() {
            Subspace::full(d)
        } else {
            Subspace::span(d, &linalg::nullspace(&Mat::from_rows(&rows, d), self.f), self.f)
        }
    }

    fn descend(&mut self, state: &ChainState, steps: &[Step]) -> Result<u64> {
        self.visited += 1;
        if self.visited > self.cap {
            return Err(Error::CapExceeded(format!(
                "flag enumeration visited more than {} partial flags",
                self.cap
            )));
        }
        let Some((step, rest)) = steps.split_first() else {
            return Ok(1);
        };
        let i = step.vertex;
        // Per block, every admissible extension by the requested amount.
        let mut options: Vec<Vec<Subspace>> = Vec::new();
        for (b, &amount) in step.amounts.iter().enumerate() {
            let current = &state.parts[b][i];
            if amount == 0 {
                options.push(vec![current.clone()]);
                continue;
            }
            let allowed = self.admissible(state, b, i);
            let mut complement = Vec::new();
            let mut grown = current.clone();
            for v in allowed.basis() {
                if !grown.contains(v, self.f) {
                    complement.push(v.clone());
                    grown = grown.extended(std::slice::from_ref(v), self.f);
                }
            }
            if complement.len() < amount as usize {
                return Ok(0);
            }
            let choices = linalg::subspaces(complement.len(), amount as usize, self.f)
                .into_iter()
                .map(|coords| {
                    let vectors: Vec<Vec<Elem>> = coords
                        .iter()
                        .map(|c| {
                            let mut v = vec![0; current.ambient];
                            for (k, &x) in c.iter().enumerate() {
                                if x != 0 {
                                    for (t, &y) in v.iter_mut().zip(&complement[k]) {
                                        *t = self.f.add(*t, self.f.mul(x, y));
                                    }
                                }
                            }
                            v
                        })
                        .collect();
                    current.extended(&vectors, self.f)
                })
                .collect();
            options.push(choices);
        }
        let mut total = 0u64;
        let mut pick = vec![0usize; options.len()];
        loop {
            let mut next = state.clone();
            let mut vectors = Vec::new();
            for (b, &k) in pick.iter().enumerate() {
                next.parts[b][i] = options[b][k].clone();
                vectors.extend(options[b][k].basis().iter().map(|v| self.embed(b, i, v)));
            }
            next.whole[i] = Subspace::span(self.rep.dims[i], &vectors, self.f);
            total += self.descend(&next, rest)?;
            let mut k = 0;
            loop {
                if k == pick.len() {
                    return Ok(total);
                }
                pick[k] += 1;
                if pick[k] < options[k].len() {
                    break;
                }
                pick[k] = 0;
                k += 1;
            }
        }
    }
}

fn plain_steps(w: &Word) -> Vec<Step> {
    w.0.iter()
        .map(|x| Step {
            vertex: x.vertex,
            amounts: vec![x.l],
        })
        .collect()
}

/// `|X_M(w)(F_q)|` for a word without primes.
pub fn count_flags(rep: &FqRep, w: &Word, cap: u64) -> Result<u64> {
    if w.has_primes() {
        return Err(Error::InvalidInput("primed letters need a pair of modules".into()));
    }
    validate(&rep.quiver, w)?;
    count_chains(rep, &[rep.dims.clone()], &plain_steps(w), cap)
}

/// Flags in `(M, N)` of type `w`: unprimed letters grow inside `M`, primed
/// letters inside `N`.
pub fn count_flags_pair(m: &FqRep, n: &FqRep, w: &Word, cap: u64) -> Result<u64> {
    validate(&m.quiver, w)?;
    let steps: Vec<Step> = w
        .0
        .iter()
        .map(|x| Step {
            vertex: x.vertex,
            amounts: if x.primed { vec![0, x.l] } else { vec![x.l, 0] },
        })
        .collect();
    count_chains(&m.direct_sum(n), &[m.dims.clone(), n.dims.clone()], &steps, cap)
}

/// Block-split flags in `M ⊕ N` of type `w` where letter `k` contributes
/// `splits[k].0` dimensions in `M` and `splits[k].1` in `N`.
pub fn count_split_flags(
    m: &FqRep,
    n: &FqRep,
    w: &Word,
    splits: &[(u32, u32)],
    cap: u64,
) -> Result<u64> {
    let steps: Vec<Step> = w
        .0
        .iter()
        .zip(splits)
        .map(|(x, &(a, b))| Step {
            vertex: x.vertex,
            amounts: vec![a, b],
        })
        .collect();
    count_chains(&m.direct_sum(n), &[m.dims.clone(), n.dims.clone()], &steps, cap)
}

/// Dimension bound for a flag variety with the given steps:
/// `Σ_i Σ_{a<b} s_a s_b` over the step sizes at each vertex.
pub fn flag_dimension_bound(steps: &[Step], rank: usize) -> usize {
    let mut per_vertex = vec![Vec::new(); rank];
    for s in steps {
        per_vertex[s.vertex].push(s.amounts.iter().sum::<u32>() as usize);
    }
    per_vertex
        .iter()
        .map(|sizes| {
            let mut acc = 0;
            for a in 0..sizes.len() {
                for b in a + 1..sizes.len() {
                    acc += sizes[a] * sizes[b];
                }
            }
            acc
        })
        .sum()
}

fn next_prime_power(after: u32) -> Option<u32> {
    (after + 1..=field::MAX_ORDER).find(|&q| field::prime_power(q).is_some())
}

/// Extends `samples` to at least `needed` field orders. Samples sharing one
/// characteristic `p` are extended by further powers of `p` (the module is
/// then only ever base-changed); otherwise by the next prime powers.
pub fn extend_samples(samples: &[u32], needed: usize) -> Result<Vec<u32>> {
    let mut out: Vec<u32> = samples.to_vec();
    if out.is_empty() {
        return Err(Error::InvalidInput("no sample fields given".into()));
    }
    for &q in &out {
        if field::prime_power(q).is_none() {
            return Err(Error::InvalidInput(format!("{q} is not a prime power")));
        }
    }
    let chars: Vec<u32> = out.iter().map(|&q| field::prime_power(q).unwrap().0).collect();
    let single_char = chars.iter().all(|&p| p == chars[0]) && out.len() > 1;
    while out.len() < needed {
        let top = *out.iter().max().unwrap();
        let next = if single_char {
            top.checked_mul(chars[0]).filter(|&q| q <= field::MAX_ORDER)
        } else {
            next_prime_power(top)
        };
        match next {
            Some(q) => out.push(q),
            None => {
                return Err(Error::CapExceeded(format!(
                    "{needed} sample fields would exceed the field table limit {}",
                    field::MAX_ORDER
                )))
            }
        }
    }
    Ok(out)
}

/// Counts at several fields, the fitted polynomial and `χ = P(1)`.
#[derive(Debug, Clone)]
pub struct PairingReport {
    pub counts: Vec<(u32, BigInt)>,
    pub polynomial: CountingPolynomial,
    pub chi: BigInt,
}

/// Fits the counts produced by `count` at enough sample fields for a
/// polynomial of degree at most `bound`.
pub fn euler_characteristic(
    bound: usize,
    samples: &[u32],
    mut count: impl FnMut(u32) -> Result<u64>,
) -> Result<PairingReport> {
    let fields = extend_samples(samples, bound + 2)?;
    let mut counts = Vec::with_capacity(fields.len());
    for q in fields {
        counts.push((q, BigInt::from(count(q)?)));
    }
    let points: Vec<(i64, BigInt)> = counts.iter().map(|(q, c)| (*q as i64, c.clone())).collect();
    let polynomial = interp::fit(&points, bound)?;
    Ok(PairingReport {
        chi: polynomial.eval(1),
        counts,
        polynomial,
    })
}

/// The pairing context: a quiver, sample fields and the enumeration cap.
#[derive(Debug, Clone)]
pub struct Pairing {
    pub quiver: Arc<Quiver>,
    pub samples: Vec<u32>,
    pub cap: u64,
}

impl Pairing {
    pub fn new(quiver: Arc<Quiver>, samples: Vec<u32>) -> Self {
        Pairing {
            quiver,
            samples,
            cap: DEFAULT_FLAG_CAP,
        }
    }

    /// `⟨w, M⟩` for an unprimed word.
    pub fn word(&self, w: &Word, m: &IntModule) -> Result<PairingReport> {
        let steps = plain_steps(w);
        let bound = flag_dimension_bound(&steps, self.quiver.rank());
        euler_characteristic(bound, &self.samples, |q| {
            count_flags(&m.realise(&self.quiver, q)?, w, self.cap)
        })
    }

    /// `⟨w, (M, N)⟩` for a word over the doubled alphabet.
    pub fn word_pair(&self, w: &Word, m: &IntModule, n: &IntModule) -> Result<PairingReport> {
        let bound = flag_dimension_bound(&plain_steps(w), self.quiver.rank());
        euler_characteristic(bound, &self.samples, |q| {
            count_flags_pair(&m.realise(&self.quiver, q)?, &n.realise(&self.quiver, q)?, w, self.cap)
        })
    }

    /// `⟨u, M⟩ = Σ a_w ⟨w, M⟩`.
    pub fn combination(&self, u: &Combination, m: &IntModule) -> Result<BigInt> {
        let mut total = BigInt::zero();
        for (w, a) in u {
            total += a * self.word(w, m)?.chi;
        }
        Ok(total)
    }

    /// `⟨u, (M, N)⟩` over the doubled alphabet.
    pub fn combination_pair(&self, u: &Combination, m: &IntModule, n: &IntModule) -> Result<BigInt> {
        let mut total = BigInt::zero();
        for (w, a) in u {
            total += a * self.word_pair(w, m, n)?.chi;
        }
        Ok(total)
    }
}

/// Both sides of an identity between pairings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub lhs: BigInt,
    pub rhs: BigInt,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// `⟨w, (M, N)⟩ = ⟨w₁, M⟩⟨w₂, N⟩`.
pub fn check_lemma_product(
    ctx: &Pairing,
    m: &IntModule,
    n: &IntModule,
    w: &Word,
) -> Result<IdentityCheck> {
    let (w1, w2) = w.split();
    Ok(IdentityCheck {
        lhs: ctx.word_pair(w, m, n)?.chi,
        rhs: ctx.word(&w1, m)?.chi * ctx.word(&w2, n)?.chi,
    })
}

/// `⟨w, M ⊕ N⟩ = ⟨δ(w), (M, N)⟩` with `δ(S_{i,l}) = S_{i,l} + S_{i,l}′`.
pub fn check_lemma_sum(
    ctx: &Pairing,
    m: &IntModule,
    n: &IntModule,
    w: &Word,
) -> Result<IdentityCheck> {
    let lhs = ctx.word(w, &m.direct_sum(n, &ctx.quiver))?.chi;
    let mut rhs = BigInt::zero();
    for ws in delta(w) {
        rhs += ctx.word_pair(&ws, m, n)?.chi;
    }
    Ok(IdentityCheck { lhs, rhs })
}

/// Every way of splitting each `l_k` as `a + b`.
pub fn split_choices(w: &Word) -> Vec<Vec<(u32, u32)>> {
    w.0.iter().fold(vec![Vec::new()], |acc, x| {
        acc.into_iter()
            .flat_map(|prefix| {
                (0..=x.l).map(move |a| {
                    let mut p = prefix.clone();
                    p.push((a, x.l - a));
                    p
                })
            })
            .collect()
    })
}

/// `⟨w, M ⊕ N⟩` against the sum over all splittings of every letter
/// between the two summands, i.e. the flags fixed by scaling `M`.
pub fn check_lemma_sum_split(
    ctx: &Pairing,
    m: &IntModule,
    n: &IntModule,
    w: &Word,
) -> Result<IdentityCheck> {
    let lhs = ctx.word(w, &m.direct_sum(n, &ctx.quiver))?.chi;
    let bound = flag_dimension_bound(&plain_steps(w), ctx.quiver.rank());
    let mut rhs = BigInt::zero();
    for splits in split_choices(w) {
        rhs += euler_characteristic(bound, &ctx.samples, |q| {
            count_split_flags(
                &m.realise(&ctx.quiver, q)?,
                &n.realise(&ctx.quiver, q)?,
                w,
                &splits,
                ctx.cap,
            )
        })?
        .chi;
    }
    Ok(IdentityCheck { lhs, rhs })
}

/// The relations checked by [`check_serre`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SerreRelation {
    /// `(ad S_i)^{1 − l a_ij}(S_{j,l})` for real `i`.
    AdPower { i: usize, j: usize, l: u32 },
    /// `[S_{i,k}, S_{j,l}]` when `a_ij = 0`.
    Commute { i: usize, k: u32, j: usize, l: u32 },
}

impl SerreRelation {
    pub fn element(&self, quiver: &Quiver) -> Result<Combination> {
        let a = quiver.cartan()?;
        match *self {
            SerreRelation::AdPower { i, j, l } => {
                if quiver.is_imaginary(i) {
                    return Err(Error::InvalidInput(format!(
                        "vertex {} carries loops",
                        quiver.labels()[i]
                    )));
                }
                if i == j && l == 1 {
                    return Err(Error::InvalidInput("the relation needs i != (j,l)".into()));
                }
                validate(quiver, &Word(vec![Letter::new(j, l)]))?;
                let power = 1 - l as i64 * a.a(i, j);
                Ok(ad_power(&letter(i, 1), power as u32, &letter(j, l)))
            }
            SerreRelation::Commute { i, k, j, l } => {
                if a.a(i, j) != 0 {
                    return Err(Error::InvalidInput(format!(
                        "a_ij = {} is not zero",
                        a.a(i, j)
                    )));
                }
                validate(quiver, &Word(vec![Letter::new(i, k), Letter::new(j, l)]))?;
                Ok(commutator(&letter(i, k), &letter(j, l)))
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SerreReport {
    pub element: Combination,
    pub degree: Vec<u32>,
    /// `(prime, module, ⟨u, M⟩)` for every module in the family.
    pub rows: Vec<(u32, IntModule, BigInt)>,
}

impl SerreReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|(_, _, v)| v.is_zero())
    }

    pub fn witness(&self) -> Option<&(u32, IntModule, BigInt)> {
        self.rows.iter().find(|(_, _, v)| !v.is_zero())
    }
}

/// Pairs the relation element against every 1-nilpotent module of its
/// degree over each prime field `F_p`, counting over `F_p, F_{p²}, …`.
/// Vanishing is a necessary condition for the element to lie in the ideal.
pub fn check_serre(
    quiver: &Arc<Quiver>,
    relation: SerreRelation,
    primes: &[u32],
    cap: u64,
) -> Result<SerreReport> {
    let element = relation.element(quiver)?;
    let degree = element
        .keys()
        .next()
        .map(|w| w.degree(quiver.rank()))
        .unwrap_or_else(|| vec![0; quiver.rank()]);
    let mut rows = Vec::new();
    for &p in primes {
        if field::prime_power(p).map(|(_, k)| k) != Some(1) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        let ctx = Pairing {
            quiver: quiver.clone(),
            samples: vec![p, p * p],
            cap,
        };
        let base = FiniteField::get(p)?;
        for orbit in orbits(quiver, &degree, &base, LocusFilter::OneNilpotent, cap)? {
            let m = IntModule::from_rep(&orbit.representative)?;
            let value = ctx.combination(&element, &m)?;
            rows.push((p, m, value));
        }
    }
    Ok(SerreReport {
        element,
        degree,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::Label;

    const CAP: u64 = DEFAULT_FLAG_CAP;

    fn quiver(n: usize, arrows: &[(usize, usize)]) -> Arc<Quiver> {
        Arc::new(Quiver::new((1..=n as i64).map(Label::Int).collect(), arrows.to_vec()).unwrap())
    }

    fn module(dims: Vec<usize>, maps: Vec<Vec<Vec<i64>>>) -> IntModule {
        IntModule { dims, maps }
    }

    #[test]
    fn parse_and_render() {
        let q = quiver(2, &[(0, 1), (1, 1)]);
        let w = Word::parse(&q, "S(1)S'(2,2) S(2,1)").unwrap();
        assert_eq!(w.render(&q), "S(1,1)S'(2,2)S(2,1)");
        assert_eq!(w.degree(2), vec![1, 3]);
        assert!(Word::parse(&q, "S(1,2)").is_err());
        assert!(Word::parse(&q, "S(3,1)").is_err());
        assert!(Word::parse(&q, "T(1,1)").is_err());
        assert_eq!(Word::parse(&q, "1").unwrap(), Word::empty());
    }

    #[test]
    fn delta_expansions() {
        let q = quiver(2, &[(0, 1)]);
        assert_eq!(delta(&Word::empty()), vec![Word::empty()]);
        let w = Word::parse(&q, "S(1)S(2)").unwrap();
        let mut got: Vec<String> = delta(&w).iter().map(|x| x.render(&q)).collect();
        got.sort();
        assert_eq!(got, vec!["S'(1,1)S'(2,1)", "S'(1,1)S(2,1)", "S(1,1)S'(2,1)", "S(1,1)S(2,1)"]);
    }

    #[test]
    fn a2_flag_counts() {
        let q = quiver(2, &[(0, 1)]);
        let m = module(vec![1, 1], vec![vec![vec![1]]]);
        for order in [2, 3, 4, 5] {
            let rep = m.realise(&q, order).unwrap();
            assert_eq!(count_flags(&rep, &Word::parse(&q, "S(2)S(1)").unwrap(), CAP).unwrap(), 1);
            assert_eq!(count_flags(&rep, &Word::parse(&q, "S(1)S(2)").unwrap(), CAP).unwrap(), 0);
            assert_eq!(count_flags(&rep, &Word::parse(&q, "S(1)").unwrap(), CAP).unwrap(), 0);
        }
    }

    #[test]
    fn jordan_flag_counts() {
        let q = quiver(1, &[(0, 0)]);
        let block = module(vec![2], vec![vec![vec![0, 1], vec![0, 0]]]);
        let zero = IntModule::zero(&q, vec![2]);
        let w = Word::parse(&q, "S(1,1)S(1,1)").unwrap();
        let s2 = Word::parse(&q, "S(1,2)").unwrap();
        for order in [2, 3, 4, 5, 7] {
            assert_eq!(count_flags(&block.realise(&q, order).unwrap(), &w, CAP).unwrap(), 1);
            assert_eq!(count_flags(&zero.realise(&q, order).unwrap(), &w, CAP).unwrap(), order as u64 + 1);
            assert_eq!(count_flags(&block.realise(&q, order).unwrap(), &s2, CAP).unwrap(), 0);
            assert_eq!(count_flags(&zero.realise(&q, order).unwrap(), &s2, CAP).unwrap(), 1);
        }
    }

    #[test]
    fn single_letter_and_empty_word() {
        let q = quiver(1, &[(0, 0)]);
        let ctx = Pairing::new(q.clone(), vec![2, 3]);
        assert_eq!(ctx.word(&Word::empty(), &IntModule::zero(&q, vec![0])).unwrap().chi, BigInt::one());
        assert!(ctx.word(&Word::empty(), &IntModule::zero(&q, vec![1])).unwrap().chi.is_zero());
        let w = Word::parse(&q, "S(1,3)").unwrap();
        assert_eq!(ctx.word(&w, &IntModule::zero(&q, vec![3])).unwrap().chi, BigInt::one());
        let nil = module(vec![3], vec![vec![vec![0, 1, 0], vec![0, 0, 0], vec![0, 0, 0]]]);
        assert!(ctx.word(&w, &nil).unwrap().chi.is_zero());
    }

    #[test]
    fn pairing_a2() {
        let q = quiver(2, &[(0, 1)]);
        let ctx = Pairing::new(q.clone(), vec![2, 3, 4, 5]);
        let m = module(vec![1, 1], vec![vec![vec![1]]]);
        let r = ctx.word(&Word::parse(&q, "S(2)S(1)").unwrap(), &m).unwrap();
        assert_eq!(r.polynomial.coeffs, vec![BigInt::one()]);
        assert_eq!(r.chi, BigInt::one());
    }

    #[test]
    fn lemma_examples() {
        let j = quiver(1, &[(0, 0)]);
        let ctx = Pairing::new(j.clone(), vec![2, 3, 4, 5]);
        let one = IntModule::zero(&j, vec![1]);
        let w = Word::parse(&j, "S(1,1)S'(1,1)").unwrap();
        let c = check_lemma_product(&ctx, &one, &one, &w).unwrap();
        assert_eq!((c.lhs.clone(), c.holds()), (BigInt::one(), true));
        let w = Word::parse(&j, "S(1,1)S(1,1)").unwrap();
        let c = check_lemma_sum(&ctx, &one, &one, &w).unwrap();
        assert_eq!(c.lhs, BigInt::from(2));
        assert!(c.holds());

        let a2 = quiver(2, &[(0, 1)]);
        let ctx = Pairing::new(a2.clone(), vec![2, 3, 4, 5]);
        let s1 = IntModule::zero(&a2, vec![1, 0]);
        let s2 = IntModule::zero(&a2, vec![0, 1]);
        let w = Word::parse(&a2, "S(1)S(2)").unwrap();
        assert!(check_lemma_sum(&ctx, &s1, &s2, &w).unwrap().holds());
        let zero = IntModule::zero(&a2, vec![0, 0]);
        assert!(check_lemma_sum(&ctx, &zero, &s2, &Word::parse(&a2, "S(2)").unwrap()).unwrap().holds());
    }

    #[test]
    fn higher_letters_need_the_split_coproduct() {
        let j = quiver(1, &[(0, 0)]);
        let ctx = Pairing::new(j.clone(), vec![2, 3, 4, 5]);
        let one = IntModule::zero(&j, vec![1]);
        let w = Word::parse(&j, "S(1,2)").unwrap();
        let literal = check_lemma_sum(&ctx, &one, &one, &w).unwrap();
        assert_eq!((literal.lhs, literal.rhs), (BigInt::one(), BigInt::zero()));
        assert!(check_lemma_sum_split(&ctx, &one, &one, &w).unwrap().holds());
    }

    #[test]
    fn serre_relations() {
        let a2 = quiver(2, &[(0, 1)]);
        let rel = SerreRelation::AdPower { i: 0, j: 1, l: 1 };
        let u = rel.element(&a2).unwrap();
        assert_eq!(u.len(), 3);
        let r = check_serre(&a2, rel, &[2], CAP).unwrap();
        assert!(r.pass(), "{:?}", r.witness());
        assert!(!r.rows.is_empty());

        let free = quiver(2, &[]);
        let r = check_serre(&free, SerreRelation::Commute { i: 0, k: 1, j: 1, l: 1 }, &[2, 3], CAP).unwrap();
        assert!(r.pass());
        assert_eq!(r.rows.len(), 2);

        let j = quiver(1, &[(0, 0)]);
        assert!(commutator(&letter(0, 1), &letter(0, 1)).is_empty());
        assert!(SerreRelation::AdPower { i: 0, j: 0, l: 2 }.element(&j).is_err());
    }

    #[test]
    fn sample_extension() {
        assert_eq!(extend_samples(&[2, 3, 4, 5], 6).unwrap(), vec![2, 3, 4, 5, 7, 8]);
        assert_eq!(extend_samples(&[3, 9], 4).unwrap(), vec![3, 9, 27, 81]);
        assert!(extend_samples(&[2, 6], 2).is_err());
    }
}
