//! Singular loci of quasi-smooth hypersurfaces inherited from the ambient
//! weighted projective space, with their local cyclic actions.
//!
//! A coordinate stratum {x_i = 0, i ∉ S} has stabilizer μ_m with
//! m = gcd(w_S). For threefolds: triples give curves, pairs give isolated
//! points, and a coordinate vertex lies on X when its variable has no pure
//! power (the z_0 of a quasi-diagonal equation).

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, gcd_all, lcm, mod_inv};
use crate::charset::{character_set_exponents, qd_character_set};
use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::wps::{Hypersurface, Kind, Weight, WeightedPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LocusKind {
    /// Curve cut out on a coordinate plane P²(w_i, w_j, w_k).
    Curve,
    /// Points on a coordinate line P¹(w_i, w_j).
    Points,
    /// The coordinate vertex of the quasi-diagonal leading variable.
    Vertex,
}

/// ζ acting on the normal coordinates by ζ^{a_k}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupAction {
    pub order: u64,
    pub exponents: Vec<u64>,
}

impl GroupAction {
    /// Scales so that the first entry prime to m becomes 1, and moves it to
    /// the front.
    fn normalized(order: u64, raw: Vec<u64>) -> Result<Self> {
        let raw: Vec<u64> = raw.into_iter().map(|x| x % order).collect();
        let pos = raw
            .iter()
            .position(|&x| gcd(x, order) == 1)
            .ok_or_else(|| {
                Error::Unsupported(format!("action {raw:?} mod {order} has no unit entry"))
            })?;
        let inv = mod_inv(raw[pos] as i64, order as i64).unwrap() as u64;
        let mut scaled: Vec<u64> = raw.iter().map(|x| x * inv % order).collect();
        let one = scaled.remove(pos);
        scaled.insert(0, one);
        Ok(GroupAction {
            order,
            exponents: scaled,
        })
    }

    /// 1 + a ≡ 0 or a_1 + a_2 + a_3 ≡ 0 (mod m).
    pub fn is_crepant(&self) -> bool {
        self.exponents.iter().sum::<u64>() % self.order == 0
    }
}

/// The invariant coordinate u = x_i^{w_j/g} / x_j^{w_i/g} on a coordinate
/// line satisfies u^k = c on the locus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSet {
    pub k: u64,
    /// c = num/den.
    pub c_num: i64,
    pub c_den: i64,
}

impl PointSet {
    /// Number of geometric points.
    pub fn degree(&self) -> u64 {
        self.k
    }

    /// #points over F_{q^ν}, q = p^e.
    pub fn count(&self, p: u64, e: u32, nu: u32) -> u64 {
        let f = FiniteField::new(p, 1).expect("prime");
        let c = f.mul(
            f.from_int(self.c_num),
            f.inv(f.from_int(self.c_den)).expect("unit"),
        );
        let l = f.log(c).expect("c is a unit mod p") as u128;
        let q1 = p as u128 - 1;
        let k = self.k as u128;
        // Q - 1 = (p-1) S with S = 1 + p + ... + p^{eν-1}; work mod k(p-1)
        let modk = k * q1;
        let mut s = 0u128;
        let mut pw = 1u128;
        for _ in 0..(e * nu) {
            s = (s + pw) % modk;
            pw = pw * p as u128 % modk;
        }
        let qm1 = (q1 * s) % k;
        let g = gcd(k as u64, qm1 as u64) as u128;
        // c = Γ^{l S} in F_Q^×; u^k = c solvable iff gcd(k, Q-1) | l S
        if (l * s) % g == 0 {
            g as u64
        } else {
            0
        }
    }

    /// Sizes of the Frobenius orbits on the geometric points over F_q.
    pub fn orbit_sizes(&self, p: u64, e: u32) -> Vec<u64> {
        let mut found: Vec<u64> = Vec::new(); // found[r-1] = number of orbits of size r
        let mut total = 0u64;
        let mut nu = 1u32;
        while total < self.k {
            let n = self.count(p, e, nu);
            let below: u64 = (1..nu as u64)
                .filter(|r| nu as u64 % r == 0)
                .map(|r| r * found[r as usize - 1])
                .sum();
            let orbits = (n - below) / nu as u64;
            found.push(orbits);
            total += orbits * nu as u64;
            nu += 1;
        }
        let mut sizes = Vec::new();
        for (i, &c) in found.iter().enumerate() {
            sizes.extend(std::iter::repeat(i as u64 + 1).take(c as usize));
        }
        sizes
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveData {
    pub weights: Vec<u64>,
    pub equation: WeightedPoly,
    pub kind: Kind,
    pub genus: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularLocus {
    pub dim: usize,
    pub kind: LocusKind,
    pub indices: Vec<usize>,
    pub order: u64,
    pub action: GroupAction,
    /// Equation induced on the coordinate stratum, in its own variables.
    pub residual: Option<WeightedPoly>,
    pub residual_equation: String,
    /// For point loci: the defining binomial u^k = c.
    pub points: Option<PointSet>,
    /// For curve loci.
    pub curve: Option<CurveData>,
    /// Positions (in the locus list) of the curves containing this locus.
    pub contained_in: Vec<usize>,
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    rec(0, n, size, &mut cur, &mut out);
    out
}

fn names_for(idx: &[usize]) -> Vec<String> {
    idx.iter().map(|i| format!("z{i}")).collect()
}

/// Binomial point set of a residual equation on a coordinate line.
fn line_points(res: &WeightedPoly, w: (u64, u64)) -> Option<PointSet> {
    // drop a common factor z_j (quasi-diagonal (0,1) line)
    let mut terms = res.terms.clone();
    for v in 0..2 {
        let m = terms.iter().map(|t| t.exps[v]).min().unwrap_or(0);
        for t in &mut terms {
            t.exps[v] -= m;
        }
    }
    if terms.len() != 2 {
        return None;
    }
    let (a, b) = if terms[0].exps[0] > 0 {
        (&terms[0], &terms[1])
    } else {
        (&terms[1], &terms[0])
    };
    if a.exps[1] != 0 || b.exps[0] != 0 {
        return None;
    }
    let g = gcd(w.0, w.1);
    let k = a.exps[0] / (w.1 / g);
    debug_assert!(k >= 1);
    Some(PointSet {
        k,
        c_num: -b.coeff,
        c_den: a.coeff,
    })
}

/// Normalized model and genus of a curve locus.
pub fn locus_curve_data(res: &WeightedPoly) -> Result<CurveData> {
    let (norm, _) = res.normalize()?;
    let (h, perm) = Hypersurface::from_poly(&norm)?;
    let genus = match h.kind {
        Kind::Diagonal => character_set_exponents(&h.exponents).1.len() as u64 / 2,
        Kind::QuasiDiagonal => qd_character_set(&h.exponents).1.len() as u64 / 2,
        Kind::Deformed => unreachable!(),
    };
    let mut equation = h.poly()?;
    // keep the normalized equation in the stratum's own variable order
    if h.kind == Kind::QuasiDiagonal {
        let mut back = equation.clone();
        back.weights = norm.weights.clone();
        for t in &mut back.terms {
            let mut e = vec![0; t.exps.len()];
            for (new, &old) in perm.iter().enumerate() {
                e[old] = t.exps[new];
            }
            t.exps = e;
        }
        equation = back;
    }
    Ok(CurveData {
        weights: norm.weights.clone(),
        equation,
        kind: h.kind,
        genus,
    })
}

/// All singular loci of a quasi-smooth diagonal or quasi-diagonal
/// hypersurface with normalized weights.
pub fn singular_loci(h: &Hypersurface) -> Result<Vec<SingularLocus>> {
    if !Weight(h.weights.clone()).is_normalized() {
        return Err(Error::BadInput("weights must be normalized".into()));
    }
    let poly = h.poly()?;
    let n = h.nvars();
    let w = &h.weights;
    let mut loci: Vec<SingularLocus> = Vec::new();
    if n < 4 {
        return Ok(loci);
    }
    let eliminated = if h.kind == Kind::QuasiDiagonal {
        Some(1usize)
    } else {
        None
    };

    // curves, for threefolds
    if n == 5 {
        for s in subsets(n, 3) {
            let m = gcd_all(&s.iter().map(|&i| w[i]).collect::<Vec<_>>());
            if m < 2 {
                continue;
            }
            let res = poly.restrict(&s).ok_or_else(|| {
                Error::Unsupported(format!("coordinate plane {s:?} lies on the hypersurface"))
            })?;
            if res.terms.len() < 2 {
                continue;
            }
            let outside: Vec<u64> = (0..n).filter(|i| !s.contains(i)).map(|i| w[i]).collect();
            let action = GroupAction::normalized(m, outside)?;
            let curve = locus_curve_data(&res)?;
            loci.push(SingularLocus {
                dim: 1,
                kind: LocusKind::Curve,
                indices: s.clone(),
                order: m,
                action,
                residual_equation: res.to_string_with(&names_for(&s)),
                residual: Some(res),
                points: None,
                curve: Some(curve),
                contained_in: vec![],
            });
        }
    }

    // points on coordinate lines
    for s in subsets(n, 2) {
        let m = gcd(w[s[0]], w[s[1]]);
        if m < 2 {
            continue;
        }
        // a further weight divisible by m puts the points inside a curve with
        // the same stabilizer
        if (0..n).any(|k| !s.contains(&k) && w[k] % m == 0) {
            continue;
        }
        let Some(res) = poly.restrict(&s) else {
            return Err(Error::Unsupported(format!(
                "coordinate line {s:?} lies on the hypersurface"
            )));
        };
        let Some(points) = line_points(&res, (w[s[0]], w[s[1]])) else {
            continue;
        };
        let outside: Vec<u64> = (0..n).filter(|i| !s.contains(i)).map(|i| w[i]).collect();
        let action = GroupAction::normalized(m, outside)?;
        loci.push(SingularLocus {
            dim: 0,
            kind: LocusKind::Points,
            indices: s.clone(),
            order: m,
            action,
            residual_equation: res.to_string_with(&names_for(&s)),
            residual: Some(res),
            points: Some(points),
            curve: None,
            contained_in: vec![],
        });
    }

    // coordinate vertices on X
    for i in 0..n {
        let has_pure = poly
            .terms
            .iter()
            .any(|t| t.exps[i] > 0 && t.exps.iter().filter(|&&e| e > 0).count() == 1);
        if has_pure || w[i] < 2 {
            continue;
        }
        let m = w[i];
        if (0..n).any(|k| k != i && w[k] % m == 0) {
            continue;
        }
        // the partner of the mixed term is eliminated by the implicit function theorem
        let partner = eliminated.filter(|_| i == 0);
        let outside: Vec<u64> = (0..n)
            .filter(|&k| k != i && Some(k) != partner)
            .map(|k| w[k])
            .collect();
        let action = GroupAction::normalized(m, outside)?;
        loci.push(SingularLocus {
            dim: 0,
            kind: LocusKind::Vertex,
            indices: vec![i],
            order: m,
            action,
            residual: None,
            residual_equation: format!("z{i} = 1, others 0"),
            points: Some(PointSet {
                k: 1,
                c_num: 1,
                c_den: 1,
            }),
            curve: None,
            contained_in: vec![],
        });
    }

    // containment of points in curves
    let curves: Vec<(usize, Vec<usize>)> = loci
        .iter()
        .enumerate()
        .filter(|(_, l)| l.kind == LocusKind::Curve)
        .map(|(k, l)| (k, l.indices.clone()))
        .collect();
    for l in loci.iter_mut().filter(|l| l.dim == 0) {
        l.contained_in = curves
            .iter()
            .filter(|(_, s)| l.indices.iter().all(|i| s.contains(i)))
            .map(|(k, _)| *k)
            .collect();
    }
    Ok(loci)
}

/// Number of geometric points on the coordinate line (i, j).
pub fn expected_point_degree(h: &Hypersurface, i: usize, j: usize) -> u64 {
    let (wi, wj) = (h.weights[i], h.weights[j]);
    if h.kind == Kind::QuasiDiagonal && (i, j) == (0, 1) {
        (h.degree - wj) / lcm(wi, wj)
    } else {
        h.degree / lcm(wi, wj)
    }
}
