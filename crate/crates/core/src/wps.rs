//! Weighted projective hypersurfaces: weights, equations, normalization,
//! quasi-smoothness and the twist construction.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, gcd_all, mod_inv};
use crate::error::{Error, Result};
use crate::field::FiniteField;

/// Default ceiling on the number of cone points an exhaustive check may visit.
pub const DEFAULT_EXHAUSTIVE_BOUND: u64 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<u64>);

impl Weight {
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        if entries.is_empty() || entries.contains(&0) {
            return Err(Error::BadInput(format!(
                "weights must be positive: {entries:?}"
            )));
        }
        Ok(Weight(entries))
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().sum()
    }

    /// No n of the n+1 entries share a common divisor > 1.
    pub fn is_normalized(&self) -> bool {
        if self.0.len() == 1 {
            return self.0[0] == 1;
        }
        (0..self.0.len()).all(|i| gcd_of_others(&self.0, i) == 1)
    }

    /// The chain of weights visited while normalizing, starting with `self`.
    /// Each step either divides everything by the overall gcd, or divides all
    /// entries but one by their common gcd.
    pub fn normalize_steps(&self) -> Vec<Weight> {
        let mut chain = vec![self.clone()];
        let mut w = self.0.clone();
        while let Some(next) = normalize_once(&w) {
            w = next.0;
            chain.push(Weight(w.clone()));
        }
        chain
    }

    pub fn normalize(&self) -> Weight {
        self.normalize_steps().pop().unwrap()
    }
}

fn gcd_of_others(w: &[u64], i: usize) -> u64 {
    w.iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .fold(0, |g, (_, &x)| gcd(g, x))
}

/// One normalization step: (new weights, Some(i) if all but entry i were divided).
fn normalize_once(w: &[u64]) -> Option<(Vec<u64>, Option<usize>, u64)> {
    let g = gcd_all(w);
    if g > 1 {
        return Some((w.iter().map(|x| x / g).collect(), None, g));
    }
    if w.len() < 2 {
        return None;
    }
    for i in 0..w.len() {
        let g = gcd_of_others(w, i);
        if g > 1 {
            let next = w
                .iter()
                .enumerate()
                .map(|(j, &x)| if j == i { x } else { x / g })
                .collect();
            return Some((next, Some(i), g));
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Term {
    pub coeff: i64,
    pub exps: Vec<u64>,
}

impl Term {
    pub fn new(coeff: i64, exps: Vec<u64>) -> Self {
        Term { coeff, exps }
    }

    fn degree(&self, weights: &[u64]) -> u64 {
        self.exps.iter().zip(weights).map(|(e, w)| e * w).sum()
    }

    fn support(&self) -> Vec<usize> {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
            .collect()
    }
}

/// A weighted homogeneous polynomial with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedPoly {
    pub weights: Vec<u64>,
    pub degree: u64,
    pub terms: Vec<Term>,
}

impl WeightedPoly {
    pub fn new(weights: Vec<u64>, terms: Vec<Term>) -> Result<Self> {
        Weight::new(weights.clone())?;
        let mut terms: Vec<Term> = terms.into_iter().filter(|t| t.coeff != 0).collect();
        if terms.is_empty() {
            return Err(Error::BadInput("empty polynomial".into()));
        }
        for t in &terms {
            if t.exps.len() != weights.len() {
                return Err(Error::BadInput("term arity does not match weights".into()));
            }
        }
        let degree = terms[0].degree(&weights);
        for t in &terms {
            let d = t.degree(&weights);
            if d != degree {
                return Err(Error::DegreeMismatch(format!(
                    "term {:?} has degree {d}, expected {degree}",
                    t.exps
                )));
            }
        }
        // merge equal monomials
        terms.sort_by(|a, b| b.exps.cmp(&a.exps));
        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.exps == t.exps => last.coeff += t.coeff,
                _ => merged.push(t),
            }
        }
        merged.retain(|t| t.coeff != 0);
        Ok(WeightedPoly {
            weights,
            degree,
            terms: merged,
        })
    }

    /// Σ c_i x_i^{e_i}.
    pub fn diagonal(weights: Vec<u64>, exps: &[u64], coeffs: &[i64]) -> Result<Self> {
        let n = weights.len();
        let terms = (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = exps[i];
                Term::new(coeffs.get(i).copied().unwrap_or(1), e)
            })
            .collect();
        Self::new(weights, terms)
    }

    pub fn nvars(&self) -> usize {
        self.weights.len()
    }

    pub fn is_cy(&self) -> bool {
        self.weights.iter().sum::<u64>() == self.degree
    }

    pub fn eval(&self, f: &FiniteField, x: &[u32]) -> u32 {
        let mut acc = 0u32;
        for t in &self.terms {
            let mut v = f.from_int(t.coeff);
            for (i, &e) in t.exps.iter().enumerate() {
                if e > 0 {
                    v = f.mul(v, f.pow(x[i], e));
                    if v == 0 {
                        break;
                    }
                }
            }
            acc = f.add(acc, v);
        }
        acc
    }

    /// ∂f/∂x_i as a list of terms (degree d − w_i); may be empty.
    pub fn derivative_terms(&self, i: usize) -> Vec<Term> {
        self.terms
            .iter()
            .filter(|t| t.exps[i] > 0)
            .map(|t| {
                let mut e = t.exps.clone();
                e[i] -= 1;
                Term::new(t.coeff * t.exps[i] as i64, e)
            })
            .collect()
    }

    /// Terms supported on the given variables, written in those variables.
    pub fn restrict_terms(&self, keep: &[usize]) -> Vec<Term> {
        self.terms
            .iter()
            .filter(|t| t.support().iter().all(|i| keep.contains(i)))
            .map(|t| Term::new(t.coeff, keep.iter().map(|&i| t.exps[i]).collect()))
            .collect()
    }

    /// Restriction to the coordinate subspace on `keep`; `None` when it vanishes
    /// identically.
    pub fn restrict(&self, keep: &[usize]) -> Option<WeightedPoly> {
        let terms = self.restrict_terms(keep);
        if terms.is_empty() {
            return None;
        }
        let weights = keep.iter().map(|&i| self.weights[i]).collect();
        WeightedPoly::new(weights, terms).ok()
    }

    /// Normalizes the ambient weight, rewriting the equation so that the
    /// hypersurface is unchanged. Returns the chain of weights visited.
    pub fn normalize(&self) -> Result<(WeightedPoly, Vec<Weight>)> {
        let mut cur = self.clone();
        let mut chain = vec![Weight(cur.weights.clone())];
        while let Some((w, fixed, g)) = normalize_once(&cur.weights) {
            let mut terms = cur.terms.clone();
            if let Some(i) = fixed {
                for t in &mut terms {
                    if t.exps[i] % g != 0 {
                        return Err(Error::Unsupported(format!(
                            "cannot normalize: exponent {} of x_{i} not divisible by {g}",
                            t.exps[i]
                        )));
                    }
                    t.exps[i] /= g;
                }
            }
            cur = WeightedPoly::new(w.clone(), terms)?;
            chain.push(Weight(w));
        }
        Ok((cur, chain))
    }

    pub fn to_equation_string(&self) -> String {
        let names: Vec<String> = (0..self.nvars()).map(|i| format!("z{i}")).collect();
        self.to_string_with(&names)
    }

    pub fn to_string_with(&self, names: &[String]) -> String {
        let mut s = String::new();
        for (k, t) in self.terms.iter().enumerate() {
            let c = t.coeff;
            if k == 0 {
                if c < 0 {
                    s.push('-');
                }
            } else {
                s.push_str(if c < 0 { " - " } else { " + " });
            }
            let mag = c.unsigned_abs();
            let mono: Vec<String> = t
                .exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        names[i].clone()
                    } else {
                        format!("{}^{}", names[i], e)
                    }
                })
                .collect();
            if mag != 1 || mono.is_empty() {
                s.push_str(&mag.to_string());
            }
            s.push_str(&mono.join(" "));
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Diagonal,
    QuasiDiagonal,
    Deformed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Deformation {
    pub param: String,
    pub monomial: Vec<u64>,
}

/// A hypersurface of one of the three supported shapes:
///
/// * diagonal: Σ c_i z_i^{e_i} with e_i = d / w_i;
/// * quasi-diagonal: c_0 z_0^{m_0} z_1 + c_1 z_1^{m_1} + Σ_{i≥2} c_i z_i^{m_i}
///   with d = w_0 m_0 + w_1 = w_i m_i;
/// * deformed: a diagonal base plus parameter-weighted monomials.
///
/// Missing coefficients default to 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypersurface {
    pub weights: Vec<u64>,
    pub degree: u64,
    pub kind: Kind,
    pub exponents: Vec<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coefficients: Vec<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub deformation: Vec<Deformation>,
}

impl Hypersurface {
    pub fn diagonal(weights: Vec<u64>, degree: u64) -> Result<Self> {
        let h = Hypersurface {
            exponents: weights
                .iter()
                .map(|w| if *w == 0 { 0 } else { degree / w })
                .collect(),
            weights,
            degree,
            kind: Kind::Diagonal,
            coefficients: vec![],
            deformation: vec![],
        };
        h.validate()?;
        Ok(h)
    }

    /// Diagonal hypersurface Σ z_i^{e_i} in its natural weights
    /// w_i = lcm(e)/e_i.
    pub fn fermat(exps: &[u64]) -> Result<Self> {
        let d = crate::arith::lcm_all(exps);
        Self::diagonal(exps.iter().map(|e| d / e).collect(), d)
    }

    pub fn quasi_diagonal(weights: Vec<u64>, degree: u64) -> Result<Self> {
        if weights.len() < 3 || degree <= weights[1] {
            return Err(Error::BadInput(
                "quasi-diagonal needs at least 3 variables".into(),
            ));
        }
        let mut exps = vec![(degree - weights[1]) / weights[0]];
        exps.extend(weights[1..].iter().map(|w| degree / w));
        let h = Hypersurface {
            weights,
            degree,
            kind: Kind::QuasiDiagonal,
            exponents: exps,
            coefficients: vec![],
            deformation: vec![],
        };
        h.validate()?;
        Ok(h)
    }

    pub fn with_coefficients(mut self, c: Vec<i64>) -> Result<Self> {
        self.coefficients = c;
        self.validate()?;
        Ok(self)
    }

    pub fn with_deformation(mut self, param: &str, monomial: Vec<u64>) -> Result<Self> {
        if self.kind == Kind::QuasiDiagonal {
            return Err(Error::Unsupported(
                "deformations of quasi-diagonal equations".into(),
            ));
        }
        self.kind = Kind::Deformed;
        self.deformation.push(Deformation {
            param: param.to_string(),
            monomial,
        });
        self.validate()?;
        Ok(self)
    }

    pub fn nvars(&self) -> usize {
        self.weights.len()
    }

    /// Projective dimension of the hypersurface.
    pub fn dim(&self) -> usize {
        self.weights.len() - 2
    }

    pub fn coefficient(&self, i: usize) -> i64 {
        self.coefficients.get(i).copied().unwrap_or(1)
    }

    pub fn validate(&self) -> Result<()> {
        Weight::new(self.weights.clone())?;
        let n = self.weights.len();
        if n < 2 {
            return Err(Error::BadInput("need at least two variables".into()));
        }
        if self.exponents.len() != n {
            return Err(Error::BadInput("one exponent per variable expected".into()));
        }
        if !self.coefficients.is_empty() && self.coefficients.len() != n {
            return Err(Error::BadInput(
                "one coefficient per base term expected".into(),
            ));
        }
        if self.coefficients.contains(&0) {
            return Err(Error::BadInput("zero coefficient".into()));
        }
        let d = self.degree;
        let w = &self.weights;
        let e = &self.exponents;
        match self.kind {
            Kind::Diagonal | Kind::Deformed => {
                for i in 0..n {
                    if w[i] * e[i] != d {
                        return Err(Error::DegreeMismatch(format!(
                            "w_{i} e_{i} = {} != {d}",
                            w[i] * e[i]
                        )));
                    }
                }
            }
            Kind::QuasiDiagonal => {
                if n < 3 || w[0] * e[0] + w[1] != d {
                    return Err(Error::DegreeMismatch(format!("w_0 m_0 + w_1 != {d}")));
                }
                for i in 1..n {
                    if w[i] * e[i] != d {
                        return Err(Error::DegreeMismatch(format!(
                            "w_{i} m_{i} = {} != {d}",
                            w[i] * e[i]
                        )));
                    }
                }
            }
        }
        if self.kind == Kind::Deformed && self.deformation.is_empty() {
            return Err(Error::BadInput(
                "deformed kind without deformation monomials".into(),
            ));
        }
        for def in &self.deformation {
            if def.monomial.len() != n {
                return Err(Error::BadInput("deformation monomial arity".into()));
            }
            let dd: u64 = def.monomial.iter().zip(w).map(|(a, b)| a * b).sum();
            if dd != d {
                return Err(Error::DegreeMismatch(format!(
                    "deformation monomial {:?} has degree {dd}",
                    def.monomial
                )));
            }
        }
        Ok(())
    }

    pub fn cy_condition(&self) -> bool {
        self.weights.iter().sum::<u64>() == self.degree
    }

    /// Base equation terms (deformations excluded).
    fn base_terms(&self) -> Vec<Term> {
        let n = self.nvars();
        let mut terms = Vec::with_capacity(n);
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = self.exponents[i];
            if self.kind == Kind::QuasiDiagonal && i == 0 {
                e[1] = 1;
            }
            terms.push(Term::new(self.coefficient(i), e));
        }
        terms
    }

    /// The equation. Deformation parameters must be supplied in `params`.
    pub fn poly_with(&self, params: &BTreeMap<String, i64>) -> Result<WeightedPoly> {
        let mut terms = self.base_terms();
        for def in &self.deformation {
            let v = params
                .get(&def.param)
                .ok_or_else(|| Error::BadInput(format!("no value for parameter {}", def.param)))?;
            terms.push(Term::new(*v, def.monomial.clone()));
        }
        WeightedPoly::new(self.weights.clone(), terms)
    }

    pub fn poly(&self) -> Result<WeightedPoly> {
        self.poly_with(&BTreeMap::new())
    }

    /// Recognizes a diagonal or quasi-diagonal polynomial. Quasi-diagonal
    /// equations are put in canonical order: the mixed term's leading
    /// variable first, its partner second, the rest by ascending weight.
    /// Returns the hypersurface and `perm` with new variable k = old perm[k].
    pub fn from_poly(p: &WeightedPoly) -> Result<(Hypersurface, Vec<usize>)> {
        let n = p.nvars();
        if p.terms.len() != n {
            return Err(Error::Unsupported(
                "neither diagonal nor quasi-diagonal".into(),
            ));
        }
        let mut pure: Vec<Option<(u64, i64)>> = vec![None; n];
        let mut mixed: Option<(usize, usize, u64, i64)> = None;
        for t in &p.terms {
            let s = t.support();
            match s.len() {
                1 => {
                    let i = s[0];
                    if pure[i].is_some() {
                        return Err(Error::Unsupported("repeated pure power".into()));
                    }
                    pure[i] = Some((t.exps[i], t.coeff));
                }
                2 if mixed.is_none() => {
                    let (a, b) = (s[0], s[1]);
                    let (lead, partner) = if t.exps[b] == 1 {
                        (a, b)
                    } else if t.exps[a] == 1 {
                        (b, a)
                    } else {
                        return Err(Error::Unsupported("mixed term is not z_i^m z_j".into()));
                    };
                    mixed = Some((lead, partner, t.exps[lead], t.coeff));
                }
                _ => {
                    return Err(Error::Unsupported(
                        "neither diagonal nor quasi-diagonal".into(),
                    ))
                }
            }
        }
        match mixed {
            None => {
                let exps: Vec<u64> = pure.iter().map(|x| x.unwrap().0).collect();
                let coeffs: Vec<i64> = pure.iter().map(|x| x.unwrap().1).collect();
                let mut h = Hypersurface::diagonal(p.weights.clone(), p.degree)?;
                debug_assert_eq!(h.exponents, exps);
                if coeffs.iter().any(|&c| c != 1) {
                    h.coefficients = coeffs;
                }
                Ok((h, (0..n).collect()))
            }
            Some((lead, partner, m0, c0)) => {
                if pure[lead].is_some() || pure[partner].is_none() {
                    return Err(Error::Unsupported("not quasi-diagonal".into()));
                }
                let mut rest: Vec<usize> = (0..n).filter(|&i| i != lead && i != partner).collect();
                rest.sort_by_key(|&i| p.weights[i]);
                let mut perm = vec![lead, partner];
                perm.extend(rest);
                let weights: Vec<u64> = perm.iter().map(|&i| p.weights[i]).collect();
                let mut exps = vec![m0];
                let mut coeffs = vec![c0];
                for &i in &perm[1..] {
                    let (e, c) = pure[i].unwrap();
                    exps.push(e);
                    coeffs.push(c);
                }
                let mut h = Hypersurface::quasi_diagonal(weights, p.degree)?;
                if h.exponents != exps {
                    return Err(Error::DegreeMismatch(
                        "inconsistent quasi-diagonal exponents".into(),
                    ));
                }
                if coeffs.iter().any(|&c| c != 1) {
                    h.coefficients = coeffs;
                }
                Ok((h, perm))
            }
        }
    }

    /// Quasi-smoothness. Characteristic 0 or diagonal kinds use the closed
    /// criterion; otherwise the affine cone over F_p is searched exhaustively
    /// for a nonzero point where f and all partials vanish.
    pub fn is_quasi_smooth(&self, p: u64) -> Result<bool> {
        self.is_quasi_smooth_with(p, &BTreeMap::new(), DEFAULT_EXHAUSTIVE_BOUND)
    }

    pub fn is_quasi_smooth_with(
        &self,
        p: u64,
        params: &BTreeMap<String, i64>,
        bound: u64,
    ) -> Result<bool> {
        match (self.kind, p) {
            (Kind::Diagonal, 0) => Ok(true),
            (Kind::Diagonal, p) => Ok(self.exponents.iter().all(|e| e % p != 0)
                && (0..self.nvars()).all(|i| self.coefficient(i).rem_euclid(p as i64) != 0)),
            // the partials z_0^{m_0-1} z_1, z_0^{m_0} + m_1 z_1^{m_1-1}, z_i^{m_i-1}
            // have no common zero off the origin
            (Kind::QuasiDiagonal, 0) => Ok(true),
            (Kind::Deformed, 0) => Err(Error::Unsupported(
                "quasi-smoothness of a deformation over Q".into(),
            )),
            (_, p) => {
                let f = FiniteField::new(p, 1)?;
                let poly = self.poly_with(params)?;
                singular_cone_point(&poly, &f, bound).map(|pt| pt.is_none())
            }
        }
    }
}

/// A nonzero cone point where the polynomial and all its partials vanish.
pub fn singular_cone_point(
    poly: &WeightedPoly,
    f: &FiniteField,
    bound: u64,
) -> Result<Option<Vec<u32>>> {
    let n = poly.nvars();
    let q = f.q;
    let total = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > bound as u128 {
        return Err(Error::BoundExceeded {
            what: "cone points",
            needed: total.min(u64::MAX as u128) as u64,
            bound,
        });
    }
    let derivs: Vec<WeightedPoly> = (0..n)
        .filter_map(|i| {
            let t = poly.derivative_terms(i);
            let w = poly.weights.clone();
            if t.iter().all(|t| f.from_int(t.coeff) == 0) {
                None
            } else {
                WeightedPoly::new(w, t).ok()
            }
        })
        .collect();
    let check =
        |x: &[u32]| -> bool { poly.eval(f, x) == 0 && derivs.iter().all(|d| d.eval(f, x) == 0) };
    let found = crate::par::find_first(q as u32, n, &check);
    Ok(found)
}

/// Solved data of the twist map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistData {
    pub ell: u64,
    pub w0: u64,
    pub v0: u64,
    pub s0: u64,
    pub t0: u64,
    pub s: u64,
    pub t: u64,
    /// (w_1..w_n) and (v_1..v_m).
    pub w: Vec<u64>,
    pub v: Vec<u64>,
    pub image_weight: Vec<u64>,
    pub image_degree: u64,
}

impl TwistData {
    pub fn new(w_full: &[u64], v_full: &[u64], ell: u64) -> Result<Self> {
        if w_full.len() < 2 || v_full.len() < 2 {
            return Err(Error::BadInput(
                "each factor needs at least two variables".into(),
            ));
        }
        let (w0, v0) = (w_full[0], v_full[0]);
        let g = gcd(w0, v0);
        if g > 1 {
            return Err(Error::GcdObstruction(g));
        }
        // linear scans; both ranges are tiny
        let s0 = (0..v0).find(|&s| (s * w0 + 1) % v0 == 0).unwrap();
        let t0 = (0..w0).find(|&t| (t * v0 + 1) % w0 == 0).unwrap();
        let s = (s0 * w0 + 1) / v0;
        let t = (t0 * v0 + 1) / w0;
        let w = w_full[1..].to_vec();
        let v = v_full[1..].to_vec();
        let mut image_weight: Vec<u64> = w.iter().map(|x| v0 * x).collect();
        image_weight.extend(v.iter().map(|y| w0 * y));
        Ok(TwistData {
            ell,
            w0,
            v0,
            s0,
            t0,
            s,
            t,
            w,
            v,
            image_weight,
            image_degree: v0 * w0 * ell,
        })
    }
}

fn pivot_ok(p: &WeightedPoly, ell: u64, which: &str) -> Result<()> {
    let lead = p.weights[0];
    if p.degree != ell * lead {
        return Err(Error::DegreeMismatch(format!(
            "{which}: degree {} != ell * {lead}",
            p.degree
        )));
    }
    let pivots: Vec<&Term> = p.terms.iter().filter(|t| t.exps[0] > 0).collect();
    let ok = pivots.len() == 1
        && pivots[0].exps[0] == ell
        && pivots[0].coeff == 1
        && pivots[0].exps[1..].iter().all(|&e| e == 0);
    if !ok {
        return Err(Error::BadInput(format!(
            "{which}: the first variable must enter only through the term x_0^ell"
        )));
    }
    Ok(())
}

/// X = {f − g = 0} from V_1: x_0^ℓ + f = 0 and V_2: y_0^ℓ + g = 0.
/// Variables of X are (x_1..x_n, y_1..y_m).
pub fn twist_compose(
    v1: &WeightedPoly,
    v2: &WeightedPoly,
    ell: u64,
) -> Result<(WeightedPoly, TwistData)> {
    let td = TwistData::new(&v1.weights, &v2.weights, ell)?;
    pivot_ok(v1, ell, "V1")?;
    pivot_ok(v2, ell, "V2")?;
    let n = v1.nvars() - 1;
    let m = v2.nvars() - 1;
    let mut terms = Vec::new();
    for t in v1.terms.iter().filter(|t| t.exps[0] == 0) {
        let mut e = t.exps[1..].to_vec();
        e.extend(std::iter::repeat(0).take(m));
        terms.push(Term::new(t.coeff, e));
    }
    for t in v2.terms.iter().filter(|t| t.exps[0] == 0) {
        let mut e = vec![0; n];
        e.extend_from_slice(&t.exps[1..]);
        terms.push(Term::new(-t.coeff, e));
    }
    let x = WeightedPoly::new(td.image_weight.clone(), terms)?;
    debug_assert_eq!(x.degree, td.image_degree);
    Ok((x, td))
}

/// Image of a pair of points under the twist map, extended to x_0 = 0 or
/// y_0 = 0.
pub fn twist_map_eval(td: &TwistData, f: &FiniteField, x: &[u32], y: &[u32]) -> Result<Vec<u32>> {
    if x.len() != td.w.len() + 1 || y.len() != td.v.len() + 1 {
        return Err(Error::BadInput("point arity".into()));
    }
    let (x0, y0) = (x[0], y[0]);
    let mut out = Vec::with_capacity(td.w.len() + td.v.len());
    match (x0 == 0, y0 == 0) {
        (true, true) => return Err(Error::Undefined),
        (true, false) => {
            out.extend_from_slice(&x[1..]);
            out.extend(std::iter::repeat(0).take(td.v.len()));
        }
        (false, true) => {
            out.extend(std::iter::repeat(0).take(td.w.len()));
            out.extend_from_slice(&y[1..]);
        }
        (false, false) => {
            for (i, &wi) in td.w.iter().enumerate() {
                let c = f.mul(f.pow(x0, td.s0 * wi), f.pow(y0, td.t * wi));
                out.push(f.mul(c, x[i + 1]));
            }
            for (j, &vj) in td.v.iter().enumerate() {
                let c = f.mul(f.pow(x0, td.s * vj), f.pow(y0, td.t0 * vj));
                out.push(f.mul(c, y[j + 1]));
            }
        }
    }
    Ok(out)
}

/// The three elliptic curves y_0^ℓ + ... used as fibers: index 1, 2, 3 for
/// ℓ = 3, 4, 6.
pub fn elliptic_fiber(i: usize) -> Result<(Hypersurface, u64)> {
    match i {
        1 => Ok((Hypersurface::diagonal(vec![1, 1, 1], 3)?, 3)),
        2 => Ok((Hypersurface::diagonal(vec![1, 1, 2], 4)?, 4)),
        3 => Ok((Hypersurface::diagonal(vec![1, 2, 3], 6)?, 6)),
        _ => Err(Error::BadInput(format!("no elliptic fiber E{i}"))),
    }
}

/// Second twist factor y_0^ℓ − (rest) = 0, so that X = f + rest.
pub fn as_second_factor(h: &Hypersurface) -> Result<WeightedPoly> {
    let mut p = h.poly()?;
    for t in &mut p.terms {
        if t.exps[0] == 0 {
            t.coeff = -t.coeff;
        }
    }
    Ok(p)
}

/// Unit u of Z/m with u·a ≡ 1, if any.
pub fn unit_inverse(a: u64, m: u64) -> Option<u64> {
    mod_inv(a as i64, m as i64).map(|x| x as u64)
}
