//! Zeta functions of diagonal and quasi-diagonal hypersurfaces over F_q,
//! from Jacobi sums, and of their crepant resolutions.
//!
//! Z(t) = Π_i P_i(t)^{(-1)^{i+1}}, so N_ν = Σ_i (-1)^i Σ_{α ∈ roots(P_i)} α^ν.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, lcm_all, mult_order, prime_power};
use crate::charset::{character_set_exponents, qd_character_set, qd_line_set, CharacterVector};
use crate::count;
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::jacobi::{
    gauss_sum_supersingular, jacobi_sum, jacobi_sum_unsigned, supersingular_exponent, Character,
};
use crate::poly::{product_of_linear, IntPoly};
use crate::resolve::{point_set_p0, ResolutionInventory};
use crate::singular::CurveData;
use crate::wps::{Hypersurface, Kind, WeightedPoly};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaFunction {
    pub q: u64,
    pub dim: usize,
    /// P_0, ..., P_{2 dim}.
    pub factors: Vec<IntPoly>,
}

impl ZetaFunction {
    /// Zeta function of a space with only the classes of P^dim.
    pub fn projective_space(q: u64, dim: usize) -> Self {
        let factors = (0..=2 * dim)
            .map(|i| {
                if i % 2 == 0 {
                    IntPoly::linear(BigInt::from(q).pow(i as u32 / 2))
                } else {
                    IntPoly::one()
                }
            })
            .collect();
        ZetaFunction { q, dim, factors }
    }

    pub fn factor(&self, i: usize) -> &IntPoly {
        &self.factors[i]
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.factors.iter().map(|p| p.degree()).collect()
    }

    /// N_1, ..., N_n.
    pub fn counts(&self, n: usize) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); n];
        for (i, p) in self.factors.iter().enumerate() {
            let s = p.reciprocal_root_power_sums(n);
            for (k, v) in s.into_iter().enumerate() {
                if i % 2 == 0 {
                    out[k] += v;
                } else {
                    out[k] -= v;
                }
            }
        }
        out
    }

    pub fn numerator(&self) -> IntPoly {
        self.factors
            .iter()
            .skip(1)
            .step_by(2)
            .fold(IntPoly::one(), |a, p| a.mul(p))
    }

    pub fn denominator(&self) -> IntPoly {
        self.factors
            .iter()
            .step_by(2)
            .fold(IntPoly::one(), |a, p| a.mul(p))
    }

    /// Every P_i pairs its reciprocal roots as α ↔ q^i/α.
    pub fn satisfies_functional_equations(&self) -> bool {
        self.factors
            .iter()
            .enumerate()
            .all(|(i, p)| p.is_one() || p.satisfies_functional_equation(self.q, i as u32))
    }
}

/// True iff the first counts of Z equal `counts`.
pub fn verify_zeta(z: &ZetaFunction, counts: &[u64]) -> bool {
    let got = z.counts(counts.len());
    got.iter().zip(counts).all(|(a, &b)| *a == BigInt::from(b))
}

fn field_for(p: u64, k: u32) -> Result<FiniteField> {
    FiniteField::new(p, k)
}

/// χ^{-1}(Π c_i^{a_i}) as a root of unity of order M.
fn coefficient_twist(chi: &Character, coeffs: &[i64], a: &[u64]) -> Cyclo {
    let f = chi.field;
    let mut e = 0i64;
    for (&c, &ai) in coeffs.iter().zip(a) {
        let x = f.from_int(c);
        e += chi
            .exponent(x, -(ai as i64))
            .expect("coefficient is a unit") as i64;
    }
    Cyclo::zeta_pow(chi.order, e)
}

/// Frobenius eigenvalues on the primitive middle cohomology of a diagonal
/// hypersurface Σ c_i x_i^{e_i}, one per element of the exponent character
/// set. Requires q ≡ 1 (mod lcm e_i).
pub fn diagonal_eigenvalues(
    exps: &[u64],
    coeffs: &[i64],
    f: &FiniteField,
) -> Result<(u64, Vec<(CharacterVector, Cyclo)>)> {
    let (l, set) = character_set_exponents(exps);
    let chi = Character::new(f, l)?;
    let trivial = coeffs.iter().all(|&c| c == 1);
    let vals = set
        .into_iter()
        .map(|a| {
            let mut j = jacobi_sum(&chi, &a.as_i64());
            if !trivial {
                j = j.mul(&coefficient_twist(&chi, coeffs, &a.entries));
            }
            (a, j)
        })
        .collect();
    Ok((l, vals))
}

/// Zeta function of a diagonal hypersurface over F_q, q ≡ 1 (mod lcm e_i).
pub fn zeta_diagonal(h: &Hypersurface, p: u64, k: u32) -> Result<ZetaFunction> {
    if h.kind != Kind::Diagonal {
        return Err(Error::BadInput(
            "zeta_diagonal needs a diagonal hypersurface".into(),
        ));
    }
    let f = field_for(p, k)?;
    if !h.is_quasi_smooth(p)? {
        return Err(Error::BadInput(format!(
            "not quasi-smooth in characteristic {p}"
        )));
    }
    let coeffs: Vec<i64> = (0..h.nvars()).map(|i| h.coefficient(i)).collect();
    let (l, vals) = diagonal_eigenvalues(&h.exponents, &coeffs, &f)?;
    let n = h.dim();
    let mut z = ZetaFunction::projective_space(f.q, n);
    let js: Vec<Cyclo> = vals.into_iter().map(|(_, j)| j).collect();
    let middle = product_of_linear(&js, l);
    z.factors[n] = z.factors[n].mul(&middle);
    Ok(z)
}

/// N(W) for the affine variety b_0 + Σ_{i≥1} b_i x_i^{m_i} = 0 in A^r,
/// q ≡ 1 (mod lcm m_i).
pub fn count_affine_diagonal(b: &[i64], m: &[u64], f: &FiniteField) -> Result<BigInt> {
    let r = m.len();
    if b.len() != r + 1 {
        return Err(Error::BadInput("need r + 1 coefficients".into()));
    }
    let big_m = lcm_all(m);
    let chi = Character::new(f, big_m)?;
    let allowed: Vec<Vec<u64>> = m
        .iter()
        .map(|&mi| (1..mi).map(|k| k * (big_m / mi)).collect())
        .collect();
    let mut total = Cyclo::from_int(big_m, BigInt::from(f.q).pow(r as u32 - 1));
    let mut a = vec![0u64; r];
    fn rec(i: usize, a: &mut Vec<u64>, allowed: &[Vec<u64>], visit: &mut dyn FnMut(&[u64])) {
        if i == a.len() {
            visit(a);
            return;
        }
        for &x in &allowed[i] {
            a[i] = x;
            rec(i + 1, a, allowed, visit);
        }
    }
    let mut visit = |a: &[u64]| {
        // a_0 = −Σ a_i may vanish; those terms still contribute
        let a0 = (big_m - a.iter().sum::<u64>() % big_m) % big_m;
        let mut full = vec![a0];
        full.extend_from_slice(a);
        let twist = coefficient_twist(&chi, b, &full);
        let j = jacobi_sum_unsigned(&chi, &a.iter().map(|&x| x as i64).collect::<Vec<_>>());
        total = total.add(&twist.mul(&j));
    };
    rec(0, &mut a, &allowed, &mut visit);
    total
        .to_integer()
        .ok_or_else(|| Error::ValidationFailure("affine count is not an integer".into()))
}

/// Zeta of the elliptic curves E_1, E_2, E_3 (y_0^ℓ + y_1^.. + y_2^..) over F_p.
pub fn zeta_elliptic_over_q(i: usize, p: u64) -> Result<ZetaFunction> {
    let (h, _) = crate::wps::elliptic_fiber(i)?;
    let mut z = ZetaFunction::projective_space(p, 1);
    // bad reduction exactly when p divides an exponent
    if h.exponents.iter().any(|e| e % p == 0) {
        return Ok(z);
    }
    let l = lcm_all(&h.exponents);
    if (p - 1) % l == 0 {
        return zeta_diagonal(&h, p, 1);
    }
    if let Some(p1) = supersingular_curve_p1(&h.exponents, p) {
        z.factors[1] = p1;
        return Ok(z);
    }
    let f = field_for(p, 1)?;
    let n1 = count::count_projective(&h.poly()?, &f)?;
    let a = p as i64 + 1 - n1 as i64;
    z.factors[1] = IntPoly::from_i64(&[1, -a, p as i64]);
    Ok(z)
}

/// P_1 of the diagonal curve Σ x_i^{e_i} over F_p when p ≡ −1 (mod lcm e_i).
/// Every Gauss sum over F_{p^2} is ±p, so each Jacobi sum is the same
/// integer J = −Π G / p^2 and P_1 = (1 − J t^2)^g. `None` off that branch.
pub fn supersingular_curve_p1(exps: &[u64], p: u64) -> Option<IntPoly> {
    let l = lcm_all(exps);
    if exps.len() != 3 || l <= 2 || supersingular_exponent(p, l) != Some(1) {
        return None;
    }
    let (_, set) = character_set_exponents(exps);
    let p2 = BigInt::from(p * p);
    let mut j: Option<BigInt> = None;
    for a in &set {
        let mut prod = BigInt::one();
        for &ai in &a.entries {
            let (deg, g) = gauss_sum_supersingular(p, l / gcd(ai, l))?;
            if deg != 2 {
                return None;
            }
            prod *= g;
        }
        let this = -(prod / &p2);
        match &j {
            Some(v) if *v != this => return None,
            _ => j = Some(this),
        }
    }
    let j = j?;
    Some(IntPoly::new(vec![BigInt::one(), BigInt::zero(), -j]).pow(set.len() as u64 / 2))
}

/// Jacobi-sum eigenvalues of a quasi-diagonal equation
/// z_0^{m_0} z_1 + z_1^{m_1} + Σ z_i^{m_i}: the signed sum over the
/// characters (a_0, a_2, a_3, ...) of the constrained set.
fn qd_eigenvalues(exps: &[u64], f: &FiniteField) -> Result<(u64, Vec<(CharacterVector, Cyclo)>)> {
    let (big_m, set) = qd_character_set(exps);
    let chi = Character::new(f, big_m)?;
    let vals = set
        .into_iter()
        .map(|a| {
            let mut reduced = vec![0i64, a.entries[0] as i64];
            reduced.extend(a.entries[2..].iter().map(|&x| x as i64));
            (a, jacobi_sum(&chi, &reduced))
        })
        .collect();
    Ok((big_m, vals))
}

/// Zeta of a quasi-diagonal curve, surface or threefold, q ≡ 1 (mod M).
pub fn zeta_quasidiagonal(h: &Hypersurface, p: u64, k: u32) -> Result<ZetaFunction> {
    if h.kind != Kind::QuasiDiagonal {
        return Err(Error::BadInput(
            "zeta_quasidiagonal needs a quasi-diagonal hypersurface".into(),
        ));
    }
    if h.coefficients.iter().any(|&c| c != 1) {
        return Err(Error::Unsupported(
            "quasi-diagonal equations with coefficients".into(),
        ));
    }
    let f = field_for(p, k)?;
    let q = f.q;
    let exps = &h.exponents;
    let (big_m, vals) = qd_eigenvalues(exps, &f)?;
    let chi = Character::new(&f, big_m)?;
    let js: Vec<Cyclo> = vals.into_iter().map(|(_, j)| j).collect();
    let n = h.dim();
    let mut z = ZetaFunction::projective_space(q, n);
    match n {
        1 => {
            z.factors[1] = product_of_linear(&js, big_m);
        }
        2 => {
            let m3 = big_m / exps[3];
            let mut lines = IntPoly::one();
            for a in qd_line_set(&h.weights, exps) {
                let sign = chi.at_minus_one((a * m3) as i64);
                lines = lines.mul(&IntPoly::linear(BigInt::from(q as i64 * sign)));
            }
            z.factors[2] = z.factors[2].mul(&lines).mul(&product_of_linear(&js, big_m));
        }
        3 => {
            let aux = Hypersurface::fermat(&exps[2..])?;
            let c = zeta_diagonal(&aux, p, k)?;
            let shifted = c.factors[1].scale_var(&BigInt::from(q));
            z.factors[3] = shifted.mul(&product_of_linear(&js, big_m));
        }
        _ => {
            return Err(Error::Unsupported(
                "quasi-diagonal hypersurfaces of dimension > 3".into(),
            ))
        }
    }
    Ok(z)
}

/// Zeta of a diagonal or quasi-diagonal hypersurface.
pub fn zeta(h: &Hypersurface, p: u64, k: u32) -> Result<ZetaFunction> {
    match h.kind {
        Kind::Diagonal => {
            let l = lcm_all(&h.exponents);
            let unit = h.coefficients.iter().all(|&c| c == 1);
            if h.dim() == 1 && k == 1 && unit && (p - 1) % l != 0 && h.is_quasi_smooth(p)? {
                if let Some(p1) = supersingular_curve_p1(&h.exponents, p) {
                    let mut z = ZetaFunction::projective_space(p, 1);
                    z.factors[1] = p1;
                    return Ok(z);
                }
            }
            zeta_diagonal(h, p, k)
        }
        Kind::QuasiDiagonal => zeta_quasidiagonal(h, p, k),
        Kind::Deformed => Err(Error::Unsupported(
            "use the p-adic deformation method".into(),
        )),
    }
}

/// The degree-reduced diagonal model: exponents gcd(e_i, q − 1). Same
/// number of F_q-points.
pub fn reduce_degree(h: &Hypersurface, q: u64) -> Result<Hypersurface> {
    if h.kind != Kind::Diagonal {
        return Err(Error::BadInput(
            "reduce_degree needs a diagonal hypersurface".into(),
        ));
    }
    let exps: Vec<u64> = h.exponents.iter().map(|&e| gcd(e, q - 1)).collect();
    let mut r = Hypersurface::fermat(&exps)?;
    r.coefficients = h.coefficients.clone();
    Ok(r)
}

/// P_1 from N_1..N_g of a genus-g curve, completed by the functional
/// equation.
pub fn p1_from_counts(counts: &[u64], q: u64, genus: usize) -> Result<IntPoly> {
    if counts.len() < genus {
        return Err(Error::BadInput("need N_1..N_g".into()));
    }
    let qb = BigInt::from(q);
    // s_ν = q^ν + 1 − N_ν; k c_k = −Σ_{i=1}^k s_i c_{k−i}
    let s: Vec<BigInt> = (0..genus)
        .map(|i| qb.pow(i as u32 + 1) + 1 - BigInt::from(counts[i]))
        .collect();
    let mut c = vec![BigInt::one()];
    for kk in 1..=genus {
        let mut acc = BigInt::zero();
        for i in 1..=kk {
            acc += &s[i - 1] * &c[kk - i];
        }
        let kb = BigInt::from(kk);
        if !(&acc % &kb).is_zero() {
            return Err(Error::ValidationFailure(
                "counts do not come from an integer P_1".into(),
            ));
        }
        c.push(-acc / kb);
    }
    let mut coeffs = vec![BigInt::zero(); 2 * genus + 1];
    for i in 0..=genus {
        coeffs[i] = c[i].clone();
        coeffs[2 * genus - i] = &c[i] * qb.pow((genus - i) as u32);
    }
    Ok(IntPoly::new(coeffs))
}

/// Genus of a plane curve from point counts over F_{q^ν}: the smallest g
/// whose P_1 reconstructed from N_1..N_g also predicts N_{g+1}.
pub fn genus_by_counts(
    poly: &WeightedPoly,
    p: u64,
    k: u32,
    max_genus: usize,
) -> Result<(usize, IntPoly)> {
    let q = p.pow(k);
    let mut counts: Vec<u64> = Vec::new();
    for g in 0..=max_genus {
        while counts.len() < g + 1 {
            let f = field_for(p, k * (counts.len() as u32 + 1))?;
            counts.push(count::count_projective(poly, &f)?);
        }
        let Ok(p1) = p1_from_counts(&counts, q, g) else {
            continue;
        };
        let predicted = ZetaFunction {
            q,
            dim: 1,
            factors: vec![IntPoly::linear(1), p1.clone(), IntPoly::linear(q)],
        };
        if verify_zeta(&predicted, &counts[..g + 1]) {
            return Ok((g, p1));
        }
    }
    Err(Error::BoundExceeded {
        what: "genus",
        needed: max_genus as u64 + 1,
        bound: max_genus as u64,
    })
}

/// P_1 of a singular curve locus over F_q: Jacobi sums when the normalized
/// model is diagonal and q ≡ 1 (mod lcm e_i), point counts otherwise.
pub fn curve_p1(c: &CurveData, p: u64, k: u32) -> Result<IntPoly> {
    let q = p.pow(k);
    if c.genus == 0 {
        return Ok(IntPoly::one());
    }
    let (h, _) = Hypersurface::from_poly(&c.equation)?;
    let m = match h.kind {
        Kind::Diagonal => lcm_all(&h.exponents),
        _ => qd_character_set(&h.exponents).0,
    };
    if (q - 1) % m == 0 {
        return Ok(zeta(&h, p, k)?.factors[1].clone());
    }
    let counts = count::count_tower(&c.equation, p, k, c.genus as u32)?;
    p1_from_counts(&counts, q, c.genus as usize)
}

/// Zeta function of the crepant resolution from that of X and the census.
pub fn zeta_resolution(
    z: &ZetaFunction,
    inv: &ResolutionInventory,
    p: u64,
    k: u32,
) -> Result<ZetaFunction> {
    let q = z.q;
    if prime_power(q) != Some((p, k)) {
        return Err(Error::BadInput("field mismatch".into()));
    }
    for pl in &inv.planes {
        if gcd(pl.action.order, p) != 1 {
            return Err(Error::BadInput(format!("p = {p} divides a group order")));
        }
    }
    let qb = BigInt::from(q);
    let mut out = z.clone();
    match inv.dim {
        2 => {
            for pl in &inv.planes {
                let p0 = point_set_p0(&pl.point_set, p, k).scale_var(&qb);
                out.factors[2] = out.factors[2].mul(&p0.pow(pl.e));
            }
        }
        3 => {
            let mut extra = IntPoly::one();
            for r in &inv.ruled {
                extra = extra.mul(&IntPoly::linear(qb.clone()).pow(r.n));
                let c = curve_p1(&r.curve, p, k)?.scale_var(&qb);
                out.factors[3] = out.factors[3].mul(&c.pow(r.n));
            }
            for pl in &inv.planes {
                let p0 = point_set_p0(&pl.point_set, p, k).scale_var(&qb);
                extra = extra.mul(&p0.pow(pl.e));
            }
            out.factors[2] = out.factors[2].mul(&extra);
            out.factors[4] = out.factors[2].scale_var(&qb);
        }
        _ => {
            if !inv.is_empty() {
                return Err(Error::Unsupported("resolution of curves".into()));
            }
        }
    }
    Ok(out)
}

/// Algebraic / transcendental parts of P_2 of a K3 surface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct K3Split {
    /// Field over which the factors are computed (the smallest F_{p^f} with
    /// p^f ≡ 1 mod the character modulus).
    pub q: u64,
    pub supersingular: bool,
    pub p2_s: IntPoly,
    pub p2_t: IntPoly,
    pub weight_motive: Vec<CharacterVector>,
}

/// Splits P_2 of a diagonal or quasi-diagonal K3 surface along the weight
/// motive, the unit orbit of (w_0, ..., w_3) (or of (M_0, M − ΣM_i, M_2, M_3)
/// in the quasi-diagonal case). Supersingular when p^r ≡ −1 for some r.
pub fn transcendental_split(h: &Hypersurface, p: u64) -> Result<K3Split> {
    if h.dim() != 2 || !h.cy_condition() {
        return Err(Error::BadInput(
            "transcendental_split needs a K3 surface".into(),
        ));
    }
    let (modulus, anchor) = match h.kind {
        Kind::Diagonal => {
            let l = lcm_all(&h.exponents);
            (l, h.exponents.iter().map(|&e| l / e).collect::<Vec<u64>>())
        }
        Kind::QuasiDiagonal => {
            let (m, _) = qd_character_set(&h.exponents);
            let mi: Vec<u64> = h.exponents.iter().map(|&e| m / e).collect();
            let rest: u64 = mi[0] + mi[2] + mi[3];
            (m, vec![mi[0], (m - rest % m) % m, mi[2], mi[3]])
        }
        Kind::Deformed => return Err(Error::Unsupported("deformed K3".into())),
    };
    let f = mult_order(p % modulus, modulus)
        .ok_or_else(|| Error::BadInput(format!("p = {p} divides {modulus}")))? as u32;
    let field = field_for(p, f)?;
    let q = field.q;
    let anchor = CharacterVector::new(modulus, anchor);
    let motive = crate::charset::unit_orbit(&anchor);
    let supersingular = supersingular_exponent(p, modulus).is_some();
    let (m, vals, lines) = match h.kind {
        Kind::Diagonal => {
            let (m, v) = diagonal_eigenvalues(&h.exponents, &vec![1; 4], &field)?;
            (m, v, IntPoly::one())
        }
        _ => {
            let (m, v) = qd_eigenvalues(&h.exponents, &field)?;
            let z = zeta_quasidiagonal(h, p, f)?;
            let all = product_of_linear(&v.iter().map(|x| x.1.clone()).collect::<Vec<_>>(), m);
            // strip the 𝔄_Y part to recover the line factor
            let lines = divide_exact(&z.factors[2], &all.mul(&IntPoly::linear(q)))?;
            (m, v, lines)
        }
    };
    let (mut t_js, mut s_js) = (Vec::new(), Vec::new());
    for (a, j) in vals {
        if !supersingular && motive.contains(&a) {
            t_js.push(j);
        } else {
            s_js.push(j);
        }
    }
    let p2_t = product_of_linear(&t_js, m);
    let p2_s = IntPoly::linear(q)
        .mul(&lines)
        .mul(&product_of_linear(&s_js, m));
    Ok(K3Split {
        q,
        supersingular,
        p2_s,
        p2_t,
        weight_motive: motive,
    })
}

/// Exact division of integer polynomials with constant term 1.
fn divide_exact(num: &IntPoly, den: &IntPoly) -> Result<IntPoly> {
    let n = num.degree();
    let d = den.degree();
    if d > n {
        return Err(Error::ValidationFailure("division degree".into()));
    }
    let mut rem: Vec<BigInt> = num.coeffs.clone();
    let mut quo = vec![BigInt::zero(); n - d + 1];
    for i in 0..=n - d {
        // den(0) = 1
        let c = rem[i].clone();
        quo[i] = c.clone();
        for j in 0..=d {
            rem[i + j] -= &c * den.coeff(j);
        }
    }
    if rem.iter().any(|c| !c.is_zero()) {
        return Err(Error::ValidationFailure("inexact division".into()));
    }
    Ok(IntPoly::new(quo))
}

/// Brute-force N_1..N_ν of a hypersurface over F_q, F_{q^2}, ...
pub fn oracle_counts(h: &Hypersurface, p: u64, k: u32, nu: u32) -> Result<Vec<u64>> {
    count::count_tower(&h.poly()?, p, k, nu)
}
