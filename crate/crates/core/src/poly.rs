//! Dense integer polynomials in t, plus polynomials with cyclotomic coefficients
//! used while assembling products of linear factors (1 - j t).

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclo::Cyclo;

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct IntPoly {
    /// Coefficients, constant term first; no trailing zeros.
    pub coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// 1 - c·t
    pub fn linear(c: impl Into<BigInt>) -> Self {
        Self::new(vec![BigInt::one(), -c.into()])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return IntPoly::default();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn pow(&self, e: u64) -> IntPoly {
        let mut r = IntPoly::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// P(s·t).
    pub fn scale_var(&self, s: &BigInt) -> IntPoly {
        let mut f = BigInt::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c * &f);
            f *= s;
        }
        IntPoly::new(out)
    }

    /// Power sums s_ν = Σ α^ν of the reciprocal roots α, for ν = 1..=n,
    /// where P(t) = Π(1 - α t). Newton's identities.
    pub fn reciprocal_root_power_sums(&self, n: usize) -> Vec<BigInt> {
        // P = 1 + c1 t + c2 t^2 + ..., e_k = (-1)^k c_k.
        assert!(
            self.coeffs.first().is_some_and(|c| c.is_one()),
            "P(0) must be 1"
        );
        let e = |k: usize| -> BigInt {
            let c = self.coeff(k);
            if k % 2 == 0 {
                c
            } else {
                -c
            }
        };
        let mut s: Vec<BigInt> = Vec::with_capacity(n);
        for k in 1..=n {
            // s_k = Σ_{i=1}^{k-1} (-1)^{i-1} e_i s_{k-i} + (-1)^{k-1} k e_k
            let mut acc = BigInt::zero();
            for i in 1..k {
                let term = e(i) * &s[k - i - 1];
                if i % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            let last = e(k) * BigInt::from(k);
            if k % 2 == 1 {
                acc += last;
            } else {
                acc -= last;
            }
            s.push(acc);
        }
        s
    }

    /// Whether the reciprocal roots pair up as α ↔ q^w/α, i.e.
    /// c_{D-i} = ± q^{w(D/2 - i)} c_i with a single global sign.
    pub fn satisfies_functional_equation(&self, q: u64, weight: u32) -> bool {
        let d = self.degree();
        if self.coeffs.is_empty() {
            return false;
        }
        if (d as u64 * weight as u64) % 2 != 0 {
            return false;
        }
        let qb = BigInt::from(q);
        let lead = &self.coeffs[d];
        let top = qb.pow((d as u32) * weight / 2);
        let sign = if *lead == top {
            BigInt::one()
        } else if *lead == -top.clone() {
            -BigInt::one()
        } else {
            return false;
        };
        for i in 0..=d {
            // c_{d-i} = sign · q^{w(d-2i)/2} · c_i
            let ex = (d as i64 - 2 * i as i64) * weight as i64;
            if ex < 0 {
                continue;
            }
            let f = qb.pow((ex / 2) as u32);
            if self.coeffs[d - i] != &sign * &f * &self.coeffs[i] {
                return false;
            }
        }
        true
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl std::fmt::Display for IntPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &BigInt::zero();
            let mag = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    write!(f, "t")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Π (1 - α_i t) for cyclotomic α_i, multiplied out. Panics if the result
/// is not a rational integer polynomial, which would mean the factor list
/// was not Galois-stable.
pub fn product_of_linear(factors: &[Cyclo], modulus: u64) -> IntPoly {
    let mut acc: Vec<Cyclo> = vec![Cyclo::one(modulus)];
    for a in factors {
        let mut next = vec![Cyclo::zero(modulus); acc.len() + 1];
        for (k, c) in acc.iter().enumerate() {
            next[k] = next[k].add(c);
            next[k + 1] = next[k + 1].sub(&c.mul(a));
        }
        acc = next;
    }
    IntPoly::new(
        acc.into_iter()
            .map(|c| c.to_integer().expect("factor set not Galois stable"))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn newton_power_sums() {
        // (1 - 2t)(1 - 3t) = 1 - 5t + 6t^2
        let p = IntPoly::from_i64(&[1, -5, 6]);
        let s = p.reciprocal_root_power_sums(3);
        assert_eq!(s, vec![BigInt::from(5), BigInt::from(13), BigInt::from(35)]);
    }

    #[test]
    fn functional_equation() {
        assert!(IntPoly::from_i64(&[1, 1, 7]).satisfies_functional_equation(7, 1));
        assert!(!IntPoly::from_i64(&[1, 2, 7]).satisfies_functional_equation(7, 2));
        assert!(IntPoly::from_i64(&[1, 0, 5]).satisfies_functional_equation(5, 1));
    }

    #[test]
    fn galois_stable_product() {
        let w = Cyclo::zeta_pow(3, 1);
        let p = product_of_linear(&[w.clone(), w.pow(2)], 3);
        assert_eq!(p, IntPoly::from_i64(&[1, 1, 1]));
    }

    #[test]
    fn display() {
        assert_eq!(IntPoly::from_i64(&[1, -1, 7]).to_string(), "1 - t + 7t^2");
    }
}
