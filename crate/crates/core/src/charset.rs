//! Character sets: residue vectors indexing the eigenspaces of diagonal
//! and quasi-diagonal cohomology.

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, lcm_all};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CharacterVector {
    pub modulus: u64,
    pub entries: Vec<u64>,
}

impl CharacterVector {
    pub fn new(modulus: u64, entries: Vec<u64>) -> Self {
        CharacterVector { modulus, entries }
    }

    pub fn as_i64(&self) -> Vec<i64> {
        self.entries.iter().map(|&x| x as i64).collect()
    }

    /// Multiplies every entry by a unit t of Z/M.
    pub fn scale(&self, t: u64) -> Self {
        CharacterVector {
            modulus: self.modulus,
            entries: self.entries.iter().map(|&a| a * t % self.modulus).collect(),
        }
    }

    pub fn negate(&self) -> Self {
        self.scale(self.modulus - 1)
    }

    pub fn sums_to_zero(&self) -> bool {
        self.entries.iter().sum::<u64>() % self.modulus == 0
    }
}

/// All tuples (a_i) with a_i in the given allowed residue lists and
/// Σ a_i ≡ 0 (mod m). The last coordinate is solved rather than scanned.
fn enumerate(m: u64, allowed: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let n = allowed.len();
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut member = vec![false; m as usize];
    for &a in &allowed[n - 1] {
        member[a as usize] = true;
    }
    let mut cur = vec![0u64; n];
    fn rec(
        i: usize,
        sum: u64,
        m: u64,
        allowed: &[Vec<u64>],
        member: &[bool],
        cur: &mut Vec<u64>,
        out: &mut Vec<Vec<u64>>,
    ) {
        let n = allowed.len();
        if i == n - 1 {
            let last = (m - sum % m) % m;
            if member[last as usize] {
                cur[i] = last;
                out.push(cur.clone());
            }
            return;
        }
        for &a in &allowed[i] {
            cur[i] = a;
            rec(i + 1, (sum + a) % m, m, allowed, member, cur, out);
        }
    }
    rec(0, 0, m, allowed, &member, &mut cur, &mut out);
    out
}

/// Number of such tuples, by dynamic programming over residues.
fn count(m: u64, allowed: &[Vec<u64>]) -> u128 {
    let mut dp = vec![0u128; m as usize];
    dp[0] = 1;
    for list in allowed {
        let mut next = vec![0u128; m as usize];
        for (r, &c) in dp.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &a in list {
                next[((r as u64 + a) % m) as usize] += c;
            }
        }
        dp = next;
    }
    dp[0]
}

fn nonzero_multiples(step: u64, m: u64) -> Vec<u64> {
    (1..m / step).map(|k| k * step).collect()
}

/// Weight-based set: a_i ∈ w_i Z/d, a_i ≠ 0, Σ a_i ≡ 0.
pub fn character_set(d: u64, weights: &[u64]) -> Vec<CharacterVector> {
    assert!(
        weights.iter().all(|&w| w > 0 && d % w == 0),
        "weights must divide d"
    );
    let allowed: Vec<Vec<u64>> = weights.iter().map(|&w| nonzero_multiples(w, d)).collect();
    enumerate(d, &allowed)
        .into_iter()
        .map(|e| CharacterVector::new(d, e))
        .collect()
}

pub fn character_set_size(d: u64, weights: &[u64]) -> u128 {
    let allowed: Vec<Vec<u64>> = weights.iter().map(|&w| nonzero_multiples(w, d)).collect();
    count(d, &allowed)
}

/// Exponent-based set for Σ x_i^{e_i}: modulus L = lcm(e_i),
/// a_i ∈ (L/e_i) Z/L nonzero, Σ ≡ 0.
pub fn character_set_exponents(exps: &[u64]) -> (u64, Vec<CharacterVector>) {
    let l = lcm_all(exps);
    let weights: Vec<u64> = exps.iter().map(|&e| l / e).collect();
    (l, character_set(l, &weights))
}

/// Constrained set of a quasi-diagonal equation
/// z_0^{m_0} z_1 + z_1^{m_1} + Σ_{i≥2} z_i^{m_i}:
/// M = lcm(m_0, m_2, ...), a_1 ∈ Z/M, a_i ∈ (M/m_i)Z/M (i ≠ 1), all nonzero,
/// Σ a_i ≡ 0 and a_0 + m_1 a_1 ≡ 0.
pub fn qd_character_set(exps: &[u64]) -> (u64, Vec<CharacterVector>) {
    assert!(exps.len() >= 3);
    let mut rel: Vec<u64> = vec![exps[0]];
    rel.extend_from_slice(&exps[2..]);
    let m = lcm_all(&rel);
    let m1 = exps[1];
    let mut allowed: Vec<Vec<u64>> = Vec::new();
    for (i, &e) in exps.iter().enumerate() {
        if i == 1 {
            allowed.push((1..m).collect());
        } else {
            allowed.push(nonzero_multiples(m / e, m));
        }
    }
    let set = enumerate(m, &allowed)
        .into_iter()
        .filter(|a| (a[0] + m1 % m * a[1]) % m == 0)
        .map(|e| CharacterVector::new(m, e))
        .collect();
    (m, set)
}

/// Line set of a quasi-diagonal surface with weights (w_0..w_3) and
/// exponents (m_0..m_3): {0 < a < m_3 : w_3 a ≡ 0 (mod w_2)}.
pub fn qd_line_set(weights: &[u64], exps: &[u64]) -> Vec<u64> {
    assert_eq!(weights.len(), 4);
    (1..exps[3])
        .filter(|&a| (weights[3] * a) % weights[2] == 0)
        .collect()
}

/// Orbit of a vector under (Z/M)^×.
pub fn unit_orbit(v: &CharacterVector) -> Vec<CharacterVector> {
    let m = v.modulus;
    let mut orbit: Vec<CharacterVector> = (1..m)
        .filter(|&t| gcd(t, m) == 1)
        .map(|t| v.scale(t))
        .collect();
    orbit.sort();
    orbit.dedup();
    orbit
}

/// A group element acting diagonally by roots of unity; entry k is the
/// exponent r_k/den of exp(2πi r_k/den) on coordinate k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootAction {
    pub den: u64,
    pub surface: Vec<u64>,
    pub curve: Vec<u64>,
}

/// Result of restricting product character sets to a quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientSets {
    pub surface: Vec<CharacterVector>,
    pub curve: Vec<CharacterVector>,
    pub pairs: Vec<(CharacterVector, CharacterVector)>,
    pub h1: usize,
    pub h2: usize,
    pub h3: usize,
}

/// Phase of an eigen-character under a diagonal root-of-unity element, in
/// Z/(den·modulus), normalised so that 0 means trivial.
fn phase(a: &CharacterVector, roots: &[u64], den: u64) -> (u64, u64) {
    // exp(2πi Σ a_k r_k / den) with a_k read as an integer mod its modulus:
    // well defined because the r_k are constrained to roots of order dividing
    // modulus/weight, see `quotient_character_sets`.
    let num: u64 = a.entries.iter().zip(roots).map(|(&x, &r)| x * r).sum();
    (num % den, den)
}

fn trivial(parts: &[(u64, u64)]) -> bool {
    // Σ n_i/d_i ∈ Z
    let l = lcm_all(&parts.iter().map(|p| p.1).collect::<Vec<_>>());
    parts.iter().map(|&(n, d)| n * (l / d)).sum::<u64>() % l == 0
}

/// Restricts surface and curve character sets to the invariants of the
/// group generated by `gens`. The exponents r_k must make each coordinate
/// root lie in the group of the corresponding diagonal factor, so that the
/// pairing with residues a_k is well defined.
pub fn quotient_character_sets(
    surface_set: &[CharacterVector],
    curve_set: &[CharacterVector],
    gens: &[RootAction],
) -> QuotientSets {
    let surf_ok =
        |a: &CharacterVector| gens.iter().all(|g| trivial(&[phase(a, &g.surface, g.den)]));
    let curve_ok = |b: &CharacterVector| gens.iter().all(|g| trivial(&[phase(b, &g.curve, g.den)]));
    let surface: Vec<CharacterVector> =
        surface_set.iter().filter(|a| surf_ok(a)).cloned().collect();
    let curve: Vec<CharacterVector> = curve_set.iter().filter(|b| curve_ok(b)).cloned().collect();
    let mut pairs = Vec::new();
    for a in surface_set {
        for b in curve_set {
            if gens
                .iter()
                .all(|g| trivial(&[phase(a, &g.surface, g.den), phase(b, &g.curve, g.den)]))
            {
                pairs.push((a.clone(), b.clone()));
            }
        }
    }
    let h1 = curve.len();
    let h2 = 2 + surface.len();
    let h3 = curve.len() + pairs.len();
    QuotientSets {
        surface,
        curve,
        pairs,
        h1,
        h2,
        h3,
    }
}
