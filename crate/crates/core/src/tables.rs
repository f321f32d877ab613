//! Regeneration of the twist-map tables: elliptic curves, K3 surfaces and
//! elliptically or K3 fibered Calabi–Yau threefolds.
//!
//! Each row is rebuilt from its input weights by [`twist_compose`] with the
//! default pure-power equations (a z_i^m z_j binomial where a pure power does
//! not fit). Euler numbers come from the Jacobi-sum Betti pipeline when the
//! model is quasi-smooth, and from the orbifold Euler formula otherwise.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::charset::{character_set_exponents, character_set_size, qd_character_set, qd_line_set};
use crate::error::{Error, Result};
use crate::resolve::{betti_euler, k3_b2, resolution_inventory};
use crate::wps::{elliptic_fiber, twist_compose, Hypersurface, Kind, Term, Weight, WeightedPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Table {
    /// The three diagonal elliptic curves E_1, E_2, E_3.
    EllipticCurves,
    /// K3 surfaces from a curve C times E_i.
    K3,
    /// Elliptic but not K3 fibered threefolds, S × E_i.
    EllipticFibered,
    /// Elliptic and K3 fibered threefolds, S × E_i with S a K3 cover.
    EllipticK3Fibered,
    /// Large positive Euler number, fiber E_3; weight data only.
    PositiveEuler,
    /// K3 fibered threefolds, C × Y_i.
    K3Fibered,
}

impl Table {
    pub const ALL: [Table; 6] = [
        Table::EllipticCurves,
        Table::K3,
        Table::EllipticFibered,
        Table::EllipticK3Fibered,
        Table::PositiveEuler,
        Table::K3Fibered,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Table::EllipticCurves => "elliptic-curves",
            Table::K3 => "k3",
            Table::EllipticFibered => "elliptic-fibered",
            Table::EllipticK3Fibered => "elliptic-k3-fibered",
            Table::PositiveEuler => "positive-euler",
            Table::K3Fibered => "k3-fibered",
        }
    }

    /// Position in the printed order, 1-based.
    pub fn number(self) -> usize {
        Table::ALL.iter().position(|&t| t == self).unwrap() + 1
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Table {
    type Err = Error;
    /// Accepts the kebab-case name or the numeric alias 1..6.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Ok(n) = s.parse::<usize>() {
            return Table::ALL
                .get(n.wrapping_sub(1))
                .copied()
                .ok_or_else(|| Error::BadInput(format!("no table {n}")));
        }
        Table::ALL
            .iter()
            .copied()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::BadInput(format!("unknown table {s:?}")))
    }
}

/// How the Euler number of a row was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChiMethod {
    /// Character-set count plus the resolution census.
    JacobiSum,
    /// Orbifold Euler formula on the weights; the default model is not
    /// quasi-smooth.
    Orbifold,
}

/// One table row. Column names follow the printed headers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub table: Table,
    #[serde(rename = "#")]
    pub number: usize,
    /// Weights of the curve factor: C_(w0,w1,w2) or (v0,v1,v2).
    #[serde(rename = "C", skip_serializing_if = "Option::is_none")]
    pub curve: Option<Vec<u64>>,
    #[serde(rename = "g(C)", skip_serializing_if = "Option::is_none")]
    pub curve_genus: Option<u64>,
    /// (w0,w1,w2,w3) of the surface factor.
    #[serde(rename = "w", skip_serializing_if = "Option::is_none")]
    pub surface: Option<Vec<u64>>,
    /// "E1".."E3" or "Y1".."Y11".
    #[serde(rename = "fiber")]
    pub fiber: String,
    #[serde(rename = "ell", skip_serializing_if = "Option::is_none")]
    pub ell: Option<u64>,
    /// Image weight (k0,...), sorted ascending.
    pub k: Vec<u64>,
    pub d: u64,
    pub equation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<Kind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b2: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h11: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h21: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi_method: Option<ChiMethod>,
    pub cy: bool,
    /// Valid combination that the printed table leaves out.
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    pub extra: bool,
    /// Default model in the image weights, when one is quasi-smooth.
    #[serde(skip)]
    pub model: Option<Hypersurface>,
}

impl TableRow {
    fn new(table: Table, number: usize, fiber: String, k: Vec<u64>, d: u64) -> Self {
        let cy = k.iter().sum::<u64>() == d;
        TableRow {
            table,
            number,
            curve: None,
            curve_genus: None,
            surface: None,
            fiber,
            ell: None,
            k,
            d,
            equation: None,
            kind: None,
            b2: None,
            h11: None,
            h21: None,
            chi: None,
            chi_method: None,
            cy,
            extra: false,
            model: None,
        }
    }
}

/// Surface weights (w0,w1,w2,w3) of the elliptic but not K3 fibered rows.
pub const ELLIPTIC_FIBERED_SURFACES: [[u64; 4]; 9] = [
    [5, 1, 1, 3],
    [5, 1, 2, 2],
    [7, 1, 2, 4],
    [7, 1, 3, 3],
    [7, 2, 2, 3],
    [9, 1, 4, 4],
    [10, 2, 3, 5],
    [10, 1, 3, 6],
    [13, 1, 6, 6],
];

/// Surface weights of the elliptic and K3 fibered rows.
pub const ELLIPTIC_K3_FIBERED_SURFACES: [[u64; 4]; 13] = [
    [3, 1, 1, 1],
    [4, 1, 1, 2],
    [6, 1, 1, 4],
    [6, 1, 2, 3],
    [8, 1, 1, 6],
    [8, 1, 3, 4],
    [8, 2, 3, 3],
    [9, 1, 2, 6],
    [9, 2, 3, 4],
    [10, 1, 1, 8],
    [10, 3, 3, 4],
    [12, 1, 2, 9],
    [14, 1, 1, 12],
];

/// (surface, ℓ) pairs that pass every filter but are absent from the
/// printed elliptic and K3 fibered list. Emitted after the printed rows.
pub const ELLIPTIC_K3_FIBERED_OMITTED: [([u64; 4], u64); 2] =
    [([8, 1, 3, 4], 3), ([8, 2, 3, 3], 3)];

/// (w0,w1,w2,w3) of the positive Euler number rows, numbered from 24.
pub const POSITIVE_EULER_SURFACES: [[u64; 4]; 8] = [
    [581, 41, 42, 498],
    [498, 36, 41, 421],
    [539, 36, 41, 462],
    [463, 31, 41, 391],
    [433, 31, 36, 366],
    [414, 24, 41, 349],
    [385, 28, 31, 326],
    [372, 18, 41, 313],
];

/// Diagonal K3 fibers Y_i used by the K3 fibered rows: (index, weights, ℓ).
pub const K3_FIBERS: [(usize, [u64; 4], u64); 5] = [
    (1, [1, 1, 2, 2], 6),
    (4, [1, 2, 3, 6], 12),
    (6, [1, 2, 6, 9], 18),
    (9, [1, 6, 14, 21], 42),
    (10, [2, 3, 10, 15], 15),
];

/// (curve weights (v0,v1,v2), K3 fiber index) of the K3 fibered rows.
pub const K3_FIBERED_PAIRS: [([u64; 3], usize); 20] = [
    ([2, 1, 1], 1),
    ([2, 1, 1], 4),
    ([2, 1, 1], 6),
    ([2, 1, 1], 9),
    ([3, 2, 1], 1),
    ([3, 2, 1], 4),
    ([3, 2, 1], 6),
    ([3, 2, 1], 9),
    ([3, 2, 1], 10),
    ([4, 1, 3], 1),
    ([4, 1, 3], 9),
    ([5, 1, 4], 4),
    ([5, 1, 4], 6),
    ([5, 1, 4], 10),
    ([7, 1, 6], 6),
    ([7, 1, 6], 9),
    ([7, 1, 6], 10),
    ([5, 2, 3], 1),
    ([5, 2, 3], 6),
    ([5, 2, 3], 9),
];

fn fiber_for_ell(ell: u64) -> Option<usize> {
    match ell {
        3 => Some(1),
        4 => Some(2),
        6 => Some(3),
        _ => None,
    }
}

/// x_0^ℓ + Σ_{i≥1} x_i^{D/w_i} of degree D = ℓ·w_0. A variable whose weight
/// does not divide D gets a binomial x_i^a x_j instead, with x_j a pure-power
/// variable. `None` if that fails too: the weights carry no quasi-smooth
/// equation of this shape.
pub fn default_factor(weights: &[u64], ell: u64) -> Option<WeightedPoly> {
    let n = weights.len();
    let deg = ell * weights[0];
    let mut e0 = vec![0; n];
    e0[0] = ell;
    let mut terms = vec![Term::new(1, e0)];
    let bad: Vec<usize> = (1..n).filter(|&i| deg % weights[i] != 0).collect();
    if bad.len() > 1 {
        return None;
    }
    for i in 1..n {
        let mut e = vec![0; n];
        if deg % weights[i] == 0 {
            e[i] = deg / weights[i];
        } else {
            let j = (1..n)
                .find(|&j| j != i && deg > weights[j] && (deg - weights[j]) % weights[i] == 0)?;
            e[i] = (deg - weights[j]) / weights[i];
            e[j] = 1;
        }
        terms.push(Term::new(1, e));
    }
    WeightedPoly::new(weights.to_vec(), terms).ok()
}

fn negate_rest(mut p: WeightedPoly) -> WeightedPoly {
    for t in &mut p.terms {
        if t.exps[0] == 0 {
            t.coeff = -t.coeff;
        }
    }
    p
}

fn sorted(mut v: Vec<u64>) -> Vec<u64> {
    v.sort_unstable();
    v
}

/// Image weight and degree of a twist without building equations.
fn twist_weights(w: &[u64], v: &[u64], ell: u64) -> (Vec<u64>, u64) {
    let mut k: Vec<u64> = w[1..].iter().map(|x| v[0] * x).collect();
    k.extend(v[1..].iter().map(|y| w[0] * y));
    (sorted(k), v[0] * w[0] * ell)
}

/// Twist of the default factors; `None` when either factor has no
/// quasi-smooth default equation.
fn twist_model(w: &[u64], v: &[u64], ell: u64) -> Result<Option<(Hypersurface, String)>> {
    let (Some(f), Some(g)) = (default_factor(w, ell), default_factor(v, ell)) else {
        return Ok(None);
    };
    let (x, _) = twist_compose(&f, &negate_rest(g), ell)?;
    let eq = x.to_equation_string();
    let (h, _) = Hypersurface::from_poly(&x)?;
    Ok(Some((h, eq)))
}

fn curve_genus(c: &WeightedPoly) -> Result<u64> {
    let (h, _) = Hypersurface::from_poly(c)?;
    let size = match h.kind {
        Kind::Diagonal => character_set_exponents(&h.exponents).1.len(),
        _ => qd_character_set(&h.exponents).1.len(),
    };
    Ok(size as u64 / 2)
}

fn elliptic_rows() -> Result<Vec<TableRow>> {
    (1..=3)
        .map(|i| {
            let (e, ell) = elliptic_fiber(i)?;
            let mut r = TableRow::new(
                Table::EllipticCurves,
                i,
                format!("E{i}"),
                e.weights.clone(),
                e.degree,
            );
            r.ell = Some(ell);
            let names: Vec<String> = (0..3).map(|j| format!("y{j}")).collect();
            r.equation = Some(e.poly()?.to_string_with(&names));
            r.kind = Some(e.kind);
            r.model = Some(e);
            Ok(r)
        })
        .collect()
}

/// C_(w1+w2, w1, w2) with gcd(w1, w2) = 1 and w1, w2 | ℓ, ordered by
/// (w1, w2) then ℓ; then the quasi-diagonal curve C_(11,5,6).
fn k3_rows() -> Result<Vec<TableRow>> {
    let mut inputs: Vec<([u64; 3], u64)> = Vec::new();
    let mut pairs: Vec<(u64, u64)> = Vec::new();
    for ell in [3u64, 4, 6] {
        for w1 in 1..=ell {
            for w2 in w1..=ell {
                if ell % w1 == 0 && ell % w2 == 0 && gcd(w1, w2) == 1 && !pairs.contains(&(w1, w2))
                {
                    pairs.push((w1, w2));
                }
            }
        }
    }
    pairs.sort_unstable();
    for (w1, w2) in pairs {
        for ell in [3u64, 4, 6] {
            if ell % w1 == 0 && ell % w2 == 0 {
                inputs.push(([w1 + w2, w1, w2], ell));
            }
        }
    }
    inputs.push(([11, 5, 6], 6));
    let mut rows = Vec::new();
    for (idx, (c, ell)) in inputs.into_iter().enumerate() {
        let i = fiber_for_ell(ell).unwrap();
        let (e, _) = elliptic_fiber(i)?;
        let (k, d) = twist_weights(&c, &e.weights, ell);
        let mut r = TableRow::new(Table::K3, idx + 1, format!("E{i}"), k, d);
        r.curve = Some(c.to_vec());
        r.ell = Some(ell);
        let cpoly = default_factor(&c, ell)
            .ok_or_else(|| Error::BadInput(format!("no default curve for {c:?}")))?;
        r.curve_genus = Some(curve_genus(&cpoly)?);
        if let Some((h, eq)) = twist_model(&c, &e.weights, ell)? {
            r.kind = Some(h.kind);
            r.equation = Some(eq);
            r.model = Some(h);
        }
        rows.push(r);
    }
    Ok(rows)
}

fn surface_rows(
    table: Table,
    surfaces: &[[u64; 4]],
    omitted: &[([u64; 4], u64)],
) -> Result<Vec<TableRow>> {
    let mut main = Vec::new();
    let mut extra = Vec::new();
    for w in surfaces {
        for ell in [3u64, 4, 6] {
            if !w[1..].iter().all(|&x| (ell * w[0]) % x == 0) {
                continue;
            }
            let i = fiber_for_ell(ell).unwrap();
            let (e, _) = elliptic_fiber(i)?;
            if gcd(w[0], e.weights[0]) != 1 {
                continue;
            }
            let (k, d) = twist_weights(w, &e.weights, ell);
            let mut r = TableRow::new(table, 0, format!("E{i}"), k, d);
            r.surface = Some(w.to_vec());
            r.ell = Some(ell);
            if !r.cy {
                continue;
            }
            if let Some((h, eq)) = twist_model(w, &e.weights, ell)? {
                r.kind = Some(h.kind);
                r.equation = Some(eq);
                r.model = Some(h);
            }
            if omitted.iter().any(|(ow, ol)| ow == w && *ol == ell) {
                r.extra = true;
                extra.push(r);
            } else {
                main.push(r);
            }
        }
    }
    main.extend(extra);
    for (i, r) in main.iter_mut().enumerate() {
        r.number = i + 1;
    }
    Ok(main)
}

fn positive_euler_rows() -> Vec<TableRow> {
    POSITIVE_EULER_SURFACES
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let (k, d) = twist_weights(w, &[1, 2, 3], 6);
            let mut r = TableRow::new(Table::PositiveEuler, 24 + i, "E3".into(), k, d);
            r.surface = Some(w.to_vec());
            r.ell = Some(6);
            r
        })
        .collect()
}

fn k3_fibered_rows() -> Result<Vec<TableRow>> {
    let fibers: HashMap<usize, ([u64; 4], u64)> =
        K3_FIBERS.iter().map(|&(i, w, l)| (i, (w, l))).collect();
    let mut rows = Vec::new();
    for (idx, (v, yi)) in K3_FIBERED_PAIRS.iter().enumerate() {
        let (y, ell) = fibers[yi];
        if gcd(y[0], v[0]) != 1 {
            return Err(Error::GcdObstruction(gcd(y[0], v[0])));
        }
        let (k, d) = twist_weights(&y, v, ell);
        let mut r = TableRow::new(Table::K3Fibered, idx + 1, format!("Y{yi}"), k, d);
        r.curve = Some(v.to_vec());
        r.ell = Some(ell);
        if let Some((h, eq)) = twist_model(&y, v, ell)? {
            r.kind = Some(h.kind);
            r.equation = Some(eq);
            r.model = Some(h);
        }
        rows.push(r);
    }
    Ok(rows)
}

/// Rows of one table: input columns and default models, no Euler numbers.
pub fn table_rows(t: Table) -> Result<Vec<TableRow>> {
    match t {
        Table::EllipticCurves => elliptic_rows(),
        Table::K3 => k3_rows(),
        Table::EllipticFibered => surface_rows(t, &ELLIPTIC_FIBERED_SURFACES, &[]),
        Table::EllipticK3Fibered => surface_rows(
            t,
            &ELLIPTIC_K3_FIBERED_SURFACES,
            &ELLIPTIC_K3_FIBERED_OMITTED,
        ),
        Table::PositiveEuler => Ok(positive_euler_rows()),
        Table::K3Fibered => k3_fibered_rows(),
    }
}

/// All six tables in order.
pub fn enumerate_tables() -> Result<Vec<TableRow>> {
    let mut out = Vec::new();
    for t in Table::ALL {
        out.extend(table_rows(t)?);
    }
    Ok(out)
}

/// Orbifold Euler number of a Calabi–Yau threefold in P⁴(w) of degree d:
/// (1/d) Σ_{l,r ∈ Z/d} Π_{i: d | l w_i, d | r w_i} (1 − d/w_i).
/// The sum only depends on which weights each l selects, so l is grouped by
/// that subset first.
pub fn orbifold_euler(weights: &[u64], d: u64) -> Result<i64> {
    if weights.len() > 16 {
        return Err(Error::BadInput("too many weights".into()));
    }
    let mut classes: HashMap<u32, i128> = HashMap::new();
    for l in 0..d {
        let mask = weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| (l * w) % d == 0)
            .fold(0u32, |m, (i, _)| m | (1 << i));
        *classes.entry(mask).or_default() += 1;
    }
    let factor = |mask: u32| -> Ratio<i128> {
        weights
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .fold(Ratio::from_integer(1), |acc, (_, &w)| {
                acc * Ratio::new(w as i128 - d as i128, w as i128)
            })
    };
    let mut total = Ratio::from_integer(0i128);
    for (&m1, &c1) in &classes {
        for (&m2, &c2) in &classes {
            total += factor(m1 & m2) * Ratio::from_integer(c1 * c2);
        }
    }
    let chi = total / Ratio::from_integer(d as i128);
    if !chi.is_integer() {
        return Err(Error::ValidationFailure(format!(
            "non-integral orbifold Euler number {chi}"
        )));
    }
    Ok(*chi.numer() as i64)
}

/// Size of the middle-cohomology index set of a surface or threefold model:
/// |𝔄| for diagonal, |𝔏| + |𝔄_Y| or |𝔄_X| for quasi-diagonal.
pub fn middle_dimension(h: &Hypersurface) -> Result<u64> {
    match h.kind {
        Kind::Diagonal => Ok(character_set_size(h.degree, &h.weights) as u64),
        Kind::QuasiDiagonal => {
            let a = qd_character_set(&h.exponents).1.len() as u64;
            if h.dim() == 2 {
                Ok(a + qd_line_set(&h.weights, &h.exponents).len() as u64)
            } else {
                Ok(a)
            }
        }
        Kind::Deformed => Err(Error::Unsupported(
            "middle dimension of a deformed model".into(),
        )),
    }
}

/// Genus of the auxiliary diagonal curve of a quasi-diagonal threefold.
pub fn auxiliary_genus(h: &Hypersurface) -> u64 {
    if h.kind != Kind::QuasiDiagonal {
        return 0;
    }
    character_set_exponents(&h.exponents[2..]).1.len() as u64 / 2
}

/// Fills b2 for K3 rows and (h11, h21, χ) for threefold rows.
pub fn fill_invariants(row: &mut TableRow) -> Result<()> {
    match row.table {
        Table::EllipticCurves | Table::PositiveEuler => Ok(()),
        Table::K3 => {
            let h = row
                .model
                .as_ref()
                .ok_or_else(|| Error::Unsupported("no K3 model".into()))?;
            let inv = resolution_inventory(h)?;
            row.b2 = Some(k3_b2(&inv, middle_dimension(h)?));
            Ok(())
        }
        _ => {
            let normalized = Weight(row.k.clone()).is_normalized();
            match &row.model {
                Some(h) if normalized => {
                    let inv = resolution_inventory(h)?;
                    let b = betti_euler(&inv, middle_dimension(h)?, auxiliary_genus(h))?;
                    row.h11 = Some(b.h11);
                    row.h21 = Some(b.h21);
                    row.chi = Some(b.chi);
                    row.chi_method = Some(ChiMethod::JacobiSum);
                }
                _ => {
                    row.chi = Some(orbifold_euler(&row.k, row.d)?);
                    row.chi_method = Some(ChiMethod::Orbifold);
                }
            }
            Ok(())
        }
    }
}

/// Rows of one table with invariants filled in.
pub fn table_with_invariants(t: Table) -> Result<Vec<TableRow>> {
    let mut rows = table_rows(t)?;
    for r in &mut rows {
        fill_invariants(r)?;
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ks(t: Table) -> Vec<(Vec<u64>, u64)> {
        table_rows(t)
            .unwrap()
            .into_iter()
            .map(|r| (r.k, r.d))
            .collect()
    }

    #[test]
    fn table_names_and_aliases() {
        assert_eq!("4".parse::<Table>().unwrap(), Table::EllipticK3Fibered);
        assert_eq!("k3-fibered".parse::<Table>().unwrap(), Table::K3Fibered);
        assert!("7".parse::<Table>().is_err());
        assert!("0".parse::<Table>().is_err());
        for t in Table::ALL {
            assert_eq!(t.number().to_string().parse::<Table>().unwrap(), t);
        }
    }

    #[test]
    fn k3_rows_from_curves() {
        let rows = table_rows(Table::K3).unwrap();
        assert_eq!(rows.len(), 11);
        assert_eq!((rows[0].k.clone(), rows[0].d), (vec![1, 1, 2, 2], 6));
        assert_eq!(rows[0].curve_genus, Some(4));
        let last = &rows[10];
        assert_eq!((last.k.clone(), last.d), (vec![5, 6, 22, 33], 66));
        assert_eq!(last.kind, Some(Kind::QuasiDiagonal));
        assert_eq!(last.curve_genus, Some(5));
    }

    #[test]
    fn every_threefold_row_is_calabi_yau() {
        for t in [
            Table::EllipticFibered,
            Table::EllipticK3Fibered,
            Table::PositiveEuler,
            Table::K3Fibered,
        ] {
            for (k, d) in ks(t) {
                assert_eq!(k.iter().sum::<u64>(), d, "{t} {k:?}");
            }
        }
        assert_eq!(
            ks(Table::PositiveEuler)[0],
            (vec![41, 42, 498, 1162, 1743], 3486)
        );
    }

    #[test]
    fn cubic_threefold_1_1_1_3_3() {
        let rows = table_with_invariants(Table::EllipticK3Fibered).unwrap();
        let r = &rows[0];
        assert_eq!((r.k.clone(), r.d), (vec![1, 1, 1, 3, 3], 9));
        assert_eq!(r.chi, Some(-216));
        assert_eq!(r.chi_method, Some(ChiMethod::JacobiSum));
    }

    #[test]
    fn surface_without_binomial_fallback() {
        // weight 4 divides neither 90 nor 89
        assert!(default_factor(&[5, 1, 4], 18).is_none());
        let c = default_factor(&[3, 2, 1], 15).unwrap();
        assert_eq!(c.to_equation_string(), "z0^15 + z1^22 z2 + z2^45");
    }

    #[test]
    fn orbifold_formula_on_quintic() {
        assert_eq!(orbifold_euler(&[1, 1, 1, 1, 1], 5).unwrap(), -200);
    }

    /// Literal double sum over (l, r) in exact rationals.
    fn orbifold_oracle(w: &[u64], d: u64) -> Ratio<i128> {
        let mut s = Ratio::from_integer(0i128);
        for l in 0..d {
            for r in 0..d {
                let mut pr = Ratio::from_integer(1i128);
                for &wi in w {
                    if (l * wi) % d == 0 && (r * wi) % d == 0 {
                        pr *= Ratio::from_integer(1) - Ratio::new(d as i128, wi as i128);
                    }
                }
                s += pr;
            }
        }
        s / Ratio::from_integer(d as i128)
    }

    #[test]
    fn orbifold_formula_matches_literal_sum() {
        for t in [
            Table::EllipticFibered,
            Table::EllipticK3Fibered,
            Table::K3Fibered,
        ] {
            for r in table_rows(t).unwrap() {
                let want = orbifold_oracle(&r.k, r.d);
                assert_eq!(
                    Ratio::from_integer(orbifold_euler(&r.k, r.d).unwrap() as i128),
                    want
                );
            }
        }
    }

    #[test]
    fn jacobi_sum_chi_agrees_with_orbifold_formula() {
        for t in [
            Table::EllipticFibered,
            Table::EllipticK3Fibered,
            Table::K3Fibered,
        ] {
            for r in table_with_invariants(t).unwrap() {
                if r.chi_method == Some(ChiMethod::JacobiSum) {
                    assert_eq!(
                        r.chi.unwrap(),
                        orbifold_euler(&r.k, r.d).unwrap(),
                        "{t} #{}",
                        r.number
                    );
                    assert_eq!(
                        r.chi.unwrap(),
                        2 * (r.h11.unwrap() as i64 - r.h21.unwrap() as i64)
                    );
                }
            }
        }
    }

    #[test]
    fn resolved_k3_rows_have_b2_22() {
        for r in table_with_invariants(Table::K3).unwrap() {
            assert_eq!(r.b2, Some(22), "row {}", r.number);
        }
    }

    #[test]
    fn quasi_diagonal_models_are_quasi_smooth_at_13() {
        for t in [Table::K3, Table::K3Fibered] {
            for r in table_rows(t).unwrap() {
                if let Some(h) = r.model.as_ref().filter(|h| h.kind == Kind::QuasiDiagonal) {
                    assert!(h.is_quasi_smooth(13).unwrap(), "{t} #{}", r.number);
                }
            }
        }
    }
}
