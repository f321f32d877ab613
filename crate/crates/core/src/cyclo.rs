//! Exact arithmetic in Z[ζ_M] = Z[x]/Φ_M(x).
//!
//! Elements are stored fully reduced, as φ(M) big-integer coordinates in the
//! power basis 1, x, ..., x^{φ(M)-1}. That makes equality structural.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, gcd, moebius};

fn cyclotomic_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (low to high) of the cyclotomic polynomial Φ_m.
pub fn cyclotomic_poly(m: u64) -> Arc<Vec<i64>> {
    if let Some(c) = cyclotomic_cache().lock().unwrap().get(&m) {
        return c.clone();
    }
    // Φ_m = Π_{d|m} (x^d - 1)^{μ(m/d)}
    let mut num: Vec<i64> = vec![1];
    let mut dens: Vec<u64> = Vec::new();
    for d in divisors(m) {
        match moebius(m / d) {
            1 => {
                let mut next = vec![0i64; num.len() + d as usize];
                for (i, &c) in num.iter().enumerate() {
                    next[i] -= c;
                    next[i + d as usize] += c;
                }
                num = next;
            }
            -1 => dens.push(d),
            _ => {}
        }
    }
    for d in dens {
        // exact division by x^d - 1
        let d = d as usize;
        let n = num.len() - 1;
        let mut quo = vec![0i64; n + 1 - d];
        let mut rem = num.clone();
        for i in (d..=n).rev() {
            let c = rem[i];
            quo[i - d] = c;
            rem[i] -= c;
            rem[i - d] += c;
        }
        debug_assert!(rem.iter().all(|&c| c == 0));
        num = quo;
    }
    let arc = Arc::new(num);
    cyclotomic_cache().lock().unwrap().insert(m, arc.clone());
    arc
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cyclo {
    /// The M of ζ_M.
    pub modulus: u64,
    /// Coordinates in the power basis, length φ(M).
    pub coeffs: Vec<BigInt>,
}

impl Cyclo {
    pub fn degree(m: u64) -> usize {
        cyclotomic_poly(m).len() - 1
    }

    pub fn zero(m: u64) -> Self {
        Cyclo {
            modulus: m,
            coeffs: vec![BigInt::zero(); Self::degree(m)],
        }
    }

    pub fn from_int(m: u64, n: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(m);
        z.coeffs[0] = n.into();
        z
    }

    pub fn one(m: u64) -> Self {
        Self::from_int(m, 1)
    }

    /// ζ_M^k.
    pub fn zeta_pow(m: u64, k: i64) -> Self {
        let mut counts = vec![0i64; m as usize];
        counts[k.rem_euclid(m as i64) as usize] = 1;
        Self::from_counts(m, &counts)
    }

    /// Σ counts[e]·ζ^e for a length-M vector of small integers.
    pub fn from_counts(m: u64, counts: &[i64]) -> Self {
        let big: Vec<BigInt> = counts.iter().map(|&c| BigInt::from(c)).collect();
        Self::reduce(m, big)
    }

    /// Reduces an arbitrary-length polynomial in ζ modulo Φ_M.
    pub fn reduce(m: u64, mut poly: Vec<BigInt>) -> Self {
        let phi = cyclotomic_poly(m);
        let deg = phi.len() - 1;
        // Φ_m is monic.
        for i in (deg..poly.len()).rev() {
            if poly[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut poly[i]);
            for (j, &pj) in phi.iter().enumerate().take(deg) {
                if pj != 0 {
                    poly[i - deg + j] -= &c * pj;
                }
            }
        }
        poly.resize(deg, BigInt::zero());
        Cyclo {
            modulus: m,
            coeffs: poly,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The rational integer this element equals, if it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs.first().cloned().unwrap_or_default())
        } else {
            None
        }
    }

    pub fn add(&self, o: &Cyclo) -> Cyclo {
        assert_eq!(self.modulus, o.modulus);
        Cyclo {
            modulus: self.modulus,
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, o: &Cyclo) -> Cyclo {
        assert_eq!(self.modulus, o.modulus);
        Cyclo {
            modulus: self.modulus,
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Cyclo {
        Cyclo {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Cyclo {
        Cyclo {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().map(|a| a * k).collect(),
        }
    }

    pub fn mul(&self, o: &Cyclo) -> Cyclo {
        assert_eq!(self.modulus, o.modulus);
        let n = self.coeffs.len();
        if n == 0 {
            return self.clone();
        }
        let mut prod = vec![BigInt::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Cyclo::reduce(self.modulus, prod)
    }

    pub fn pow(&self, mut e: u64) -> Cyclo {
        let mut base = self.clone();
        let mut r = Cyclo::one(self.modulus);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        r
    }

    /// Galois action ζ ↦ ζ^k; requires gcd(k, M) = 1.
    pub fn galois(&self, k: u64) -> Cyclo {
        let m = self.modulus;
        assert_eq!(gcd(k % m.max(1), m), 1, "galois exponent must be a unit");
        let mut poly = vec![BigInt::zero(); m as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[(i as u64 * k % m) as usize] += c;
        }
        Cyclo::reduce(m, poly)
    }

    /// Complex conjugate, ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> Cyclo {
        if self.modulus <= 2 {
            return self.clone();
        }
        self.galois(self.modulus - 1)
    }

    /// Field norm down to Q.
    pub fn norm(&self) -> BigInt {
        let m = self.modulus;
        let mut acc = Cyclo::one(m);
        for k in 1..=m.max(1) {
            if gcd(k, m) == 1 {
                acc = acc.mul(&self.galois(k));
            }
        }
        acc.to_integer().expect("norm is rational")
    }

    /// Image under Z[ζ_M] → Z[ζ_N], ζ_M ↦ ζ_N^{N/M}.
    pub fn lift(&self, n: u64) -> Cyclo {
        assert_eq!(n % self.modulus, 0);
        let step = n / self.modulus;
        let mut poly = vec![BigInt::zero(); n as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[(i as u64 * step % n) as usize] += c;
        }
        Cyclo::reduce(n, poly)
    }

    /// Complex embedding ζ ↦ exp(2πi/M); only for diagnostics and bounds.
    pub fn to_complex(&self) -> (f64, f64) {
        let m = self.modulus as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            let cf = bigint_to_f64(c);
            let th = 2.0 * std::f64::consts::PI * i as f64 / m;
            re += cf * th.cos();
            im += cf * th.sin();
        }
        (re, im)
    }

    pub fn is_one(&self) -> bool {
        self.to_integer().is_some_and(|v| v.is_one())
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default()
    }
}

pub(crate) fn bigint_to_f64(c: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    c.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(*cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(105).len() - 1, 48);
        assert!(cyclotomic_poly(105).contains(&-2));
    }

    #[test]
    fn roots_of_unity() {
        let z = Cyclo::zeta_pow(6, 1);
        assert!(z.pow(6).is_one());
        assert!(!z.pow(3).is_one());
        assert_eq!(z.pow(3), Cyclo::from_int(6, -1));
        // 1 + ζ3 + ζ3² = 0
        let w = Cyclo::zeta_pow(3, 1);
        assert!(Cyclo::one(3).add(&w).add(&w.pow(2)).is_zero());
    }

    #[test]
    fn norms() {
        // 1 - ζ_p has norm p
        let z = Cyclo::zeta_pow(7, 1);
        assert_eq!(Cyclo::one(7).sub(&z).norm(), BigInt::from(7));
        // 2 + ζ3 has norm 3
        let w = Cyclo::from_int(3, 2).add(&Cyclo::zeta_pow(3, 1));
        assert_eq!(w.norm(), BigInt::from(3));
        assert_eq!(w.mul(&w.conj()).to_integer(), Some(BigInt::from(3)));
    }

    #[test]
    fn lift_is_ring_map() {
        let a = Cyclo::from_counts(4, &[1, 2, 0, -1]);
        let b = Cyclo::from_counts(4, &[0, 1, 3, 0]);
        assert_eq!(a.mul(&b).lift(12), a.lift(12).mul(&b.lift(12)));
    }
}
