//! Multiplicative characters, Jacobi sums and Gauss sums with exact values in
//! cyclotomic rings.
//!
//! Sign convention: for a = (a_0, ..., a_{n+1}),
//!   j(a) = (-1)^n Σ_{1 + v_1 + ... + v_{n+1} = 0} χ^{a_1}(v_1)...χ^{a_{n+1}}(v_{n+1}).
//! a_0 does not enter the sum; it is fixed by Σ a_i ≡ 0.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{gcd, mod_pow};
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::field::FiniteField;

/// χ of exact order M with χ(g) = ζ_M for the field's fixed generator g.
#[derive(Clone, Copy, Debug)]
pub struct Character<'a> {
    pub field: &'a FiniteField,
    pub order: u64,
}

impl<'a> Character<'a> {
    pub fn new(field: &'a FiniteField, order: u64) -> Result<Self> {
        if order == 0 || (field.q - 1) % order != 0 {
            return Err(Error::NoCharacter { order, q: field.q });
        }
        Ok(Character { field, order })
    }

    /// Exponent e with χ^a(x) = ζ_M^e; `None` when the value is 0.
    /// The trivial character takes the value 1 at 0.
    #[inline]
    pub fn exponent(&self, x: u32, a: i64) -> Option<u64> {
        let a = a.rem_euclid(self.order as i64) as u64;
        match self.field.log(x) {
            None if a == 0 => Some(0),
            None => None,
            Some(l) => Some(a * l as u64 % self.order),
        }
    }

    pub fn value(&self, x: u32, a: i64) -> Cyclo {
        match self.exponent(x, a) {
            Some(e) => Cyclo::zeta_pow(self.order, e as i64),
            None => Cyclo::zero(self.order),
        }
    }

    /// χ^a(-1) as ±1.
    pub fn at_minus_one(&self, a: i64) -> i64 {
        let minus_one = self.field.neg(1);
        let e = self.exponent(minus_one, a).unwrap();
        if e == 0 {
            1
        } else {
            debug_assert_eq!(2 * e, self.order);
            -1
        }
    }
}

fn reduce_entries(chi: &Character, a: &[i64]) -> Vec<u64> {
    a.iter()
        .map(|&x| x.rem_euclid(chi.order as i64) as u64)
        .collect()
}

/// Σ_{1 + v_1 + ... + v_r = 0} Π χ^{b_i}(v_i) over v_i ∈ F_q^×, by iterated
/// additive convolution. Returned as exponent counts in Z[x]/(x^M - 1).
fn unsigned_sum_counts(chi: &Character, b: &[u64]) -> Vec<i64> {
    let f = chi.field;
    let q = f.q as usize;
    let m = chi.order as usize;
    assert!(!b.is_empty());
    // s[u*m + e] = number of ways to reach partial sum u with character phase e
    let mut s = vec![0i64; q * m];
    for v in 1..q as u32 {
        let e = chi.exponent(v, b[0] as i64).unwrap() as usize;
        s[v as usize * m + e] += 1;
    }
    for &bk in &b[1..] {
        let mut next = vec![0i64; q * m];
        for v in 1..q as u32 {
            let ev = chi.exponent(v, bk as i64).unwrap() as usize;
            for u in 0..q as u32 {
                let src = &s[u as usize * m..(u as usize + 1) * m];
                if src.iter().all(|&c| c == 0) {
                    continue;
                }
                let w = f.add(u, v) as usize;
                let dst = &mut next[w * m..(w + 1) * m];
                for (e, &c) in src.iter().enumerate() {
                    if c != 0 {
                        dst[(e + ev) % m] += c;
                    }
                }
            }
        }
        s = next;
    }
    let target = f.neg(1) as usize;
    s[target * m..(target + 1) * m].to_vec()
}

/// Signed Jacobi sum j(a), via additive convolution.
pub fn jacobi_sum(chi: &Character, a: &[i64]) -> Cyclo {
    assert!(a.len() >= 3, "need at least three entries");
    let n = a.len() - 2;
    let b = reduce_entries(chi, &a[1..]);
    let counts = unsigned_sum_counts(chi, &b);
    let j = Cyclo::from_counts(chi.order, &counts);
    if n % 2 == 1 {
        j.neg()
    } else {
        j
    }
}

/// The same sum by nested enumeration over F_q^n. Oracle only.
pub fn jacobi_sum_nested(chi: &Character, a: &[i64]) -> Cyclo {
    let f = chi.field;
    let n = a.len() - 2;
    let m = chi.order as usize;
    let b = reduce_entries(chi, &a[1..]);
    let mut counts = vec![0i64; m];
    let q = f.q as u32;
    let r = b.len();
    let mut v = vec![1u32; r - 1];
    'outer: loop {
        // v_r = -1 - Σ v_i
        let mut s = 1u32;
        for &x in &v {
            s = f.add(s, x);
        }
        let last = f.neg(s);
        if last != 0 {
            let mut e = chi.exponent(last, b[r - 1] as i64).unwrap();
            for (i, &x) in v.iter().enumerate() {
                e += chi.exponent(x, b[i] as i64).unwrap();
            }
            counts[(e % m as u64) as usize] += 1;
        }
        for slot in v.iter_mut() {
            *slot += 1;
            if *slot < q {
                continue 'outer;
            }
            *slot = 1;
        }
        break;
    }
    let j = Cyclo::from_counts(chi.order, &counts);
    if n % 2 == 1 {
        j.neg()
    } else {
        j
    }
}

/// The unsigned sum used in the affine point-count lemma: b are the
/// characters of the r variables (a constant term carries the rest).
pub fn jacobi_sum_unsigned(chi: &Character, b: &[i64]) -> Cyclo {
    let b = reduce_entries(chi, b);
    Cyclo::from_counts(chi.order, &unsigned_sum_counts(chi, &b))
}

/// Gauss sum g(χ^a) = Σ_{x≠0} χ^a(x) ψ(Tr x), ψ(y) = ζ_p^y, in Z[ζ_{Mp}].
pub fn gauss_sum(chi: &Character, a: i64) -> Cyclo {
    let f = chi.field;
    let m = chi.order;
    let p = f.p;
    assert_eq!(gcd(m, p), 1);
    let n = m * p;
    let mut counts = vec![0i64; n as usize];
    for x in 1..f.q as u32 {
        let e = chi.exponent(x, a).unwrap();
        let tr = f.trace(x);
        counts[((p * e + m * tr) % n) as usize] += 1;
    }
    Cyclo::from_counts(n, &counts)
}

/// Pure Gauss sums in the supersingular situation p^r ≡ -1 (mod m), r
/// minimal, over F_{p^{2r}}: G = p^r for p = 2, else (-1)^{(p^r+1)/m} p^r.
/// Returns (2r, G).
pub fn gauss_sum_supersingular(p: u64, m: u64) -> Option<(u32, BigInt)> {
    if m < 2 || gcd(p, m) != 1 {
        return None;
    }
    let mut r = 1u32;
    let mut pr = p % m;
    while pr != m - 1 {
        r += 1;
        pr = pr * p % m;
        if r as u64 > m {
            return None;
        }
    }
    let pow = BigInt::from(p).pow(r);
    if p == 2 {
        return Some((2 * r, pow));
    }
    let full = p.checked_pow(r)? + 1;
    let sign = if (full / m) % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    Some((2 * r, sign * pow))
}

/// (-1)^n Π_i g(χ^{a_i}) / q in Z[ζ_{Mp}], all a_i nonzero. Compare with
/// `jacobi_sum(..).lift(M·p)`.
pub fn jacobi_from_gauss(chi: &Character, a: &[i64]) -> Cyclo {
    let n = a.len() - 2;
    let mp = chi.order * chi.field.p;
    let mut prod = Cyclo::one(mp);
    for &ai in a {
        prod = prod.mul(&gauss_sum(chi, ai));
    }
    let q = BigInt::from(chi.field.q);
    let coeffs: Vec<BigInt> = prod
        .coeffs
        .iter()
        .map(|c| {
            assert!((c % &q).is_zero(), "Gauss product not divisible by q");
            c / &q
        })
        .collect();
    let j = Cyclo {
        modulus: mp,
        coeffs,
    };
    if n % 2 == 1 {
        j.neg()
    } else {
        j
    }
}

/// Smallest r ≥ 1 with p^r ≡ -1 (mod d), if any.
pub fn supersingular_exponent(p: u64, d: u64) -> Option<u32> {
    if d <= 2 {
        return if d == 0 { None } else { Some(1) };
    }
    (1..=d as u32).find(|&r| mod_pow(p, r as u64, d) == d - 1)
}
