//! Finite fields F_{p^k} with full log/antilog tables.
//!
//! Elements are encoded as integers in [0, q): the base-p digits are the
//! coefficients of the residue polynomial. The modulus is the smallest monic
//! irreducible of degree k (in that digit order) and the generator is the
//! smallest primitive element, so everything is deterministic.

use crate::arith::{is_prime, prime_factors};
use crate::error::{Error, Result};

/// Default ceiling on q for table-backed fields.
pub const DEFAULT_FIELD_BOUND: u64 = 1_000_000;

#[derive(Clone, Debug)]
pub struct FiniteField {
    pub p: u64,
    pub k: u32,
    pub q: u64,
    /// Monic modulus, low to high, length k+1.
    pub modulus: Vec<u64>,
    /// Fixed primitive element.
    pub generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Option<Vec<u32>>,
}

impl FiniteField {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        Self::with_bound(p, k, DEFAULT_FIELD_BOUND)
    }

    pub fn with_bound(p: u64, k: u32, bound: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::BadInput(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::BadInput(
                "extension degree must be at least 1".into(),
            ));
        }
        let q = p
            .checked_pow(k)
            .filter(|&q| q <= bound)
            .ok_or(Error::BoundExceeded {
                what: "field size",
                needed: p.saturating_pow(k),
                bound,
            })?;
        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            smallest_irreducible(p, k as usize)
        };
        let mut f = FiniteField {
            p,
            k,
            q,
            modulus,
            generator: 0,
            exp: Vec::new(),
            log: Vec::new(),
            add: None,
        };
        let g = (1..q as u32)
            .find(|&g| f.is_primitive_slow(g))
            .expect("F_q^x is cyclic");
        f.generator = g;
        let mut exp = vec![0u32; (q - 1) as usize];
        let mut log = vec![u32::MAX; q as usize];
        let mut x = 1u32;
        for (e, slot) in exp.iter_mut().enumerate() {
            *slot = x;
            log[x as usize] = e as u32;
            x = f.mul_slow(x, g);
        }
        f.exp = exp;
        f.log = log;
        if k > 1 && q <= 1024 {
            let mut add = vec![0u32; (q * q) as usize];
            for a in 0..q as u32 {
                for b in 0..q as u32 {
                    add[(a as u64 * q + b as u64) as usize] = f.add_digits(a, b);
                }
            }
            f.add = Some(add);
        }
        Ok(f)
    }

    fn digits(&self, mut x: u32) -> Vec<u64> {
        let mut d = vec![0u64; self.k as usize];
        for slot in d.iter_mut() {
            *slot = x as u64 % self.p;
            x /= self.p as u32;
        }
        d
    }

    fn undigits(&self, d: &[u64]) -> u32 {
        d.iter().rev().fold(0u64, |acc, &c| acc * self.p + c) as u32
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let s: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.undigits(&s)
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let p = self.p;
        let k = self.k as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * k - 1];
        for i in 0..k {
            for j in 0..k {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        for i in (k..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for j in 0..k {
                prod[i - k + j] = (prod[i - k + j] + (p - self.modulus[j]) * c) % p;
            }
            prod[i] = 0;
        }
        self.undigits(&prod[..k])
    }

    fn pow_slow(&self, a: u32, mut e: u64) -> u32 {
        let mut r = 1u32;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul_slow(r, b);
            }
            b = self.mul_slow(b, b);
            e >>= 1;
        }
        r
    }

    fn is_primitive_slow(&self, g: u32) -> bool {
        let n = self.q - 1;
        prime_factors(n)
            .into_iter()
            .all(|r| self.pow_slow(g, n / r) != 1)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            let s = a as u64 + b as u64;
            return if s >= self.p {
                (s - self.p) as u32
            } else {
                s as u32
            };
        }
        match &self.add {
            Some(t) => t[(a as u64 * self.q + b as u64) as usize],
            None => self.add_digits(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.k == 1 {
            return if a == 0 { 0 } else { (self.p as u32) - a };
        }
        let d: Vec<u64> = self
            .digits(a)
            .iter()
            .map(|&x| (self.p - x) % self.p)
            .collect();
        self.undigits(&d)
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let e = self.log[a as usize] as u64 + self.log[b as usize] as u64;
        self.exp[(e % (self.q - 1)) as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let l = self.log[a as usize] as u64;
        Some(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let l = self.log[a as usize] as u128 * e as u128;
        self.exp[(l % (self.q - 1) as u128) as usize]
    }

    /// Discrete log to the fixed generator; `None` for zero.
    #[inline]
    pub fn log(&self, a: u32) -> Option<u32> {
        if a == 0 {
            None
        } else {
            Some(self.log[a as usize])
        }
    }

    /// g^e.
    #[inline]
    pub fn exp(&self, e: u64) -> u32 {
        self.exp[(e % (self.q - 1)) as usize]
    }

    /// The prime-field element n mod p.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.p)
    }

    /// Absolute trace to F_p, as an integer in [0, p).
    pub fn trace(&self, a: u32) -> u64 {
        let mut acc = 0u32;
        let mut x = a;
        for _ in 0..self.k {
            acc = self.add(acc, x);
            x = self.frobenius(x);
        }
        debug_assert!((acc as u64) < self.p);
        acc as u64
    }

    /// Absolute norm to F_p.
    pub fn norm(&self, a: u32) -> u64 {
        let e = (self.q - 1) / (self.p - 1);
        self.pow(a, e) as u64
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q as u32
    }
}

/// Smallest monic irreducible of degree k over F_p in the digit order used
/// for field elements. Irreducibility via Rabin's test on x^{p^i} mod f.
fn smallest_irreducible(p: u64, k: usize) -> Vec<u64> {
    let count = p.pow(k as u32);
    for code in 0..count {
        let mut f = Vec::with_capacity(k + 1);
        let mut c = code;
        for _ in 0..k {
            f.push(c % p);
            c /= p;
        }
        f.push(1);
        if f[0] == 0 {
            continue;
        }
        if rabin_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let k = f.len() - 1;
    let mut prod = vec![0u64; 2 * k];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for i in (k..prod.len()).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        for j in 0..k {
            prod[i - k + j] = (prod[i - k + j] + (p - f[j]) * c) % p;
        }
        prod[i] = 0;
    }
    prod.truncate(k);
    prod
}

fn poly_powmod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let k = f.len() - 1;
    let mut r = vec![0u64; k];
    r[0] = 1;
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            r = poly_mulmod(&r, &b, f, p);
        }
        b = poly_mulmod(&b, &b, f, p);
        e >>= 1;
    }
    r
}

fn poly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    let trim = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        // a mod b
        let lead_inv = crate::arith::mod_pow(*b.last().unwrap(), p - 2, p);
        while a.len() >= b.len() {
            let c = a.last().unwrap() * lead_inv % p;
            let shift = a.len() - b.len();
            for (i, &bi) in b.iter().enumerate() {
                a[shift + i] = (a[shift + i] + p * p - c * bi % p) % p;
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

fn rabin_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    let mut x = vec![0u64; k];
    if k == 1 {
        return true;
    }
    x[1] = 1;
    // x^{p^k} ≡ x
    let mut xp = x.clone();
    for _ in 0..k {
        xp = poly_powmod(&xp, p, f, p);
    }
    if xp != x {
        return false;
    }
    for r in prime_factors(k as u64) {
        let mut y = x.clone();
        for _ in 0..(k as u64 / r) {
            y = poly_powmod(&y, p, f, p);
        }
        // gcd(f, y - x) must be 1
        let mut diff = y;
        diff[1] = (diff[1] + p - 1) % p;
        let g = poly_gcd(f.to_vec(), diff, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}
