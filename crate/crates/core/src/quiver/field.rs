//! Finite fields `F_q` for small prime powers, as lookup tables.
//!
//! An element is encoded by the base-`p` digits of its coefficient vector
//! in `F_p[x]/(m(x))`, so the prime subfield is `0..p`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

pub type Elem = u16;

/// Largest field order supported by the table representation.
pub const MAX_ORDER: u32 = 1024;

#[derive(Debug)]
pub struct FiniteField {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
}

/// `(p, k)` with `q = p^k`, if `q` is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let (mut rest, mut k) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

fn poly_mod(mut a: Vec<u32>, m: &[u32], p: u32) -> Vec<u32> {
    // m is monic of degree m.len() - 1
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = a.pop().unwrap() % p;
        if lead != 0 {
            let shift = a.len() - dm;
            for (i, &c) in m.iter().take(dm).enumerate() {
                let idx = shift + i;
                a[idx] = (a[idx] + p - (lead * c) % p) % p;
            }
        }
    }
    a.resize(dm, 0);
    a
}

fn poly_rem_is_zero(a: &[u32], m: &[u32], p: u32) -> bool {
    poly_mod(a.to_vec(), m, p).iter().all(|&c| c == 0)
}

fn monic_polys(p: u32, degree: u32) -> impl Iterator<Item = Vec<u32>> {
    let count = p.pow(degree);
    (0..count).map(move |mut idx| {
        let mut v = Vec::with_capacity(degree as usize + 1);
        for _ in 0..degree {
            v.push(idx % p);
            idx /= p;
        }
        v.push(1);
        v
    })
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() as u32 - 1;
    (1..=deg / 2).all(|d| monic_polys(p, d).all(|g| !poly_rem_is_zero(f, &g, p)))
}

impl FiniteField {
    /// The field of order `q`, built once and cached.
    pub fn get(q: u32) -> Result<Arc<FiniteField>> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<FiniteField>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(f) = cache.lock().unwrap().get(&q) {
            return Ok(f.clone());
        }
        let f = Arc::new(Self::build(q)?);
        cache.lock().unwrap().insert(q, f.clone());
        Ok(f)
    }

    fn build(q: u32) -> Result<FiniteField> {
        let (p, k) = prime_power(q)
            .ok_or_else(|| Error::InvalidInput(format!("{q} is not a prime power")))?;
        if q > MAX_ORDER {
            return Err(Error::CapExceeded(format!(
                "field order {q} exceeds the table limit {MAX_ORDER}"
            )));
        }
        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            monic_polys(p, k)
                .find(|f| is_irreducible(f, p))
                .expect("irreducible polynomials exist in every degree")
        };
        let decode = |e: u32| -> Vec<u32> {
            let mut v = Vec::with_capacity(k as usize);
            let mut e = e;
            for _ in 0..k {
                v.push(e % p);
                e /= p;
            }
            v
        };
        let encode = |v: &[u32]| -> u32 { v.iter().rev().fold(0, |acc, &c| acc * p + c) };
        let n = q as usize;
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for a in 0..q {
            let va = decode(a);
            for b in 0..q {
                let vb = decode(b);
                let s: Vec<u32> = va.iter().zip(&vb).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = encode(&s) as Elem;
                let mut prod = vec![0u32; 2 * k as usize - 1];
                for (i, x) in va.iter().enumerate() {
                    for (j, y) in vb.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let r = if k == 1 { prod } else { poly_mod(prod, &modulus, p) };
                mul[(a * q + b) as usize] = encode(&r) as Elem;
            }
        }
        let mut neg = vec![0; n];
        let mut inv = vec![0; n];
        for a in 0..n {
            for b in 0..n {
                if add[a * n + b] == 0 {
                    neg[a] = b as Elem;
                }
                if mul[a * n + b] == 1 {
                    inv[a] = b as Elem;
                }
            }
        }
        Ok(FiniteField {
            p,
            k,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
        })
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    /// Coefficients of the defining polynomial, low degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(a != 0, "inverse of zero");
        self.inv[a as usize]
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> Elem {
        v.rem_euclid(self.p as i64) as Elem
    }

    /// `1, x, …, x^{k−1}`: a basis over the prime field.
    pub fn prime_basis(&self) -> Vec<Elem> {
        (0..self.k).map(|t| self.p.pow(t) as Elem).collect()
    }

    /// A generator of the multiplicative group.
    pub fn primitive_element(&self) -> Elem {
        let n = self.q - 1;
        let primes: Vec<u32> = (2..=n).filter(|d| n % d == 0 && prime_power(*d) == Some((*d, 1))).collect();
        (1..self.q as Elem)
            .find(|&g| primes.iter().all(|&r| self.pow(g, n / r) != 1))
            .expect("multiplicative group is cyclic")
    }

    pub fn pow(&self, a: Elem, mut e: u32) -> Elem {
        let (mut base, mut acc) = (a, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Embedding of `self` into an extension `big` of the same characteristic.
    pub fn embedding_into(&self, big: &FiniteField) -> Result<Vec<Elem>> {
        if big.p != self.p || big.k % self.k != 0 {
            return Err(Error::InvalidInput(format!(
                "F_{} does not embed in F_{}",
                self.q, big.q
            )));
        }
        let eval = |r: Elem| -> Elem {
            self.modulus
                .iter()
                .rev()
                .fold(0, |acc, &c| big.add(big.mul(acc, r), c as Elem))
        };
        let root = if self.k == 1 {
            0
        } else {
            (0..big.q as Elem)
                .find(|&r| eval(r) == 0)
                .expect("the modulus splits in the extension")
        };
        let map = (0..self.q)
            .map(|e| {
                let mut digits = Vec::new();
                let mut e = e;
                for _ in 0..self.k {
                    digits.push((e % self.p) as Elem);
                    e /= self.p;
                }
                digits
                    .iter()
                    .rev()
                    .fold(0, |acc, &c| big.add(big.mul(acc, root), c))
            })
            .collect();
        Ok(map)
    }
}
