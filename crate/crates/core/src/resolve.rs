//! Crepant resolution census of cyclic quotient singularities.
//!
//! Nothing is blown up: we only count exceptional divisors, record where
//! they are defined, and derive Betti numbers and new point counts.

use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::poly::IntPoly;
use crate::singular::{singular_loci, CurveData, GroupAction, LocusKind, PointSet, SingularLocus};
use crate::wps::Hypersurface;

/// Lattice points of the triangle A(0,1,0), B(0,0,1), C(m,−a,−b).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeCount {
    pub m: u64,
    pub a: u64,
    pub b: u64,
    pub a1: u64,
    pub b1: u64,
    pub side_ac_interior: u64,
    pub side_bc_interior: u64,
    pub interior: u64,
    pub interior_points: Vec<[i64; 3]>,
    pub boundary_points: Vec<[i64; 3]>,
}

/// Enumerates the triangle directly and checks the closed counts
/// e = (m + 1 − a₁ − b₁)/2 and 1 + a₁ + b₁ boundary points.
pub fn triangle_lattice(m: u64, a: u64, b: u64) -> Result<LatticeCount> {
    if m < 2 || (1 + a + b) % m != 0 {
        return Err(Error::BadInput(format!(
            "need m >= 2 and 1 + a + b ≡ 0 mod m: ({m},{a},{b})"
        )));
    }
    let (a, b) = (a % m, b % m);
    let mi = m as i64;
    let (ai, bi) = (a as i64, b as i64);
    let mut interior_points = Vec::new();
    let mut boundary_points = Vec::new();
    let (mut on_ac, mut on_bc) = (0u64, 0u64);
    // the point γC + αA + βB with γ = i/m, α + β + γ = 1
    for i in 0..=mi {
        let mut am = (i * ai).rem_euclid(mi);
        while am + i <= mi {
            let bm = mi - i - am;
            let pt = [i, (am - i * ai) / mi, (bm - i * bi) / mi];
            debug_assert_eq!((am - i * ai) % mi, 0);
            debug_assert_eq!((bm - i * bi) % mi, 0);
            if i > 0 && am > 0 && bm > 0 {
                interior_points.push(pt);
            } else {
                let vertex = (i == mi) || (am == mi) || (bm == mi);
                if !vertex {
                    if bm == 0 && i > 0 {
                        on_ac += 1;
                    } else if am == 0 && i > 0 {
                        on_bc += 1;
                    }
                }
                boundary_points.push(pt);
            }
            am += mi;
        }
    }
    let a1 = gcd(m, a);
    let b1 = gcd(m, b);
    let e = (m + 1 - a1 - b1) / 2;
    let lc = LatticeCount {
        m,
        a,
        b,
        a1,
        b1,
        side_ac_interior: b1 - 1,
        side_bc_interior: a1 - 1,
        interior: e,
        interior_points,
        boundary_points,
    };
    if lc.interior_points.len() as u64 != e
        || on_ac != b1 - 1
        || on_bc != a1 - 1
        || lc.boundary_points.len() as u64 != 1 + a1 + b1
    {
        return Err(Error::ValidationFailure(format!(
            "lattice enumeration disagrees with closed form for ({m},{a},{b})"
        )));
    }
    Ok(lc)
}

/// Length of the Hirzebruch–Jung continued fraction of m/a.
pub fn hj_length(m: u64, a: u64) -> u64 {
    let (mut p, mut q) = (m, a % m);
    let mut len = 0;
    while q > 0 {
        // p/q = b − 1/(q/r) with b = ceil(p/q)
        let b = p.div_ceil(q);
        let r = b * q - p;
        len += 1;
        p = q;
        q = r;
    }
    len
}

/// A singular curve replaced by a chain of ruled surfaces C × P¹.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuledEntry {
    pub indices: Vec<usize>,
    pub order: u64,
    pub n: u64,
    pub genus: u64,
    pub curve: CurveData,
}

/// Exceptional divisors over a finite point set: planes P² on threefolds,
/// lines P¹ on surfaces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneEntry {
    pub indices: Vec<usize>,
    pub kind: LocusKind,
    pub action: GroupAction,
    /// Divisors per geometric point.
    pub e: u64,
    /// Number of geometric points.
    pub points: u64,
    /// The points are defined over Q(ζ_{2k}) with k = field_index.
    pub field_index: u64,
    pub point_set: PointSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionInventory {
    /// Dimension of the hypersurface.
    pub dim: usize,
    pub ruled: Vec<RuledEntry>,
    pub planes: Vec<PlaneEntry>,
}

impl ResolutionInventory {
    pub fn is_empty(&self) -> bool {
        self.ruled.is_empty() && self.planes.is_empty()
    }

    /// Exceptional classes added to H².
    pub fn exceptional_classes(&self) -> u64 {
        self.ruled.iter().map(|r| r.n).sum::<u64>()
            + self.planes.iter().map(|p| p.e * p.points).sum::<u64>()
    }
}

fn plane_entry(l: &SingularLocus, dim: usize) -> Result<PlaneEntry> {
    let ps = l.points.clone().expect("point locus");
    let e = if dim == 3 {
        let ex = &l.action.exponents;
        triangle_lattice(l.order, ex[1], ex[2])?.interior
    } else {
        hj_length(l.order, l.action.exponents[1])
    };
    Ok(PlaneEntry {
        indices: l.indices.clone(),
        kind: l.kind,
        action: l.action.clone(),
        e,
        points: ps.k,
        field_index: ps.k,
        point_set: ps,
    })
}

/// Census of exceptional divisors from the singular loci.
pub fn resolution_inventory(h: &Hypersurface) -> Result<ResolutionInventory> {
    if !h.cy_condition() {
        return Err(Error::BadInput(
            "crepant resolution needs a Calabi–Yau hypersurface".into(),
        ));
    }
    let loci = singular_loci(h)?;
    inventory_from_loci(&loci, h.dim())
}

pub fn inventory_from_loci(loci: &[SingularLocus], dim: usize) -> Result<ResolutionInventory> {
    let mut inv = ResolutionInventory {
        dim,
        ruled: vec![],
        planes: vec![],
    };
    for l in loci {
        match l.kind {
            LocusKind::Curve => {
                let c = l.curve.clone().expect("curve locus");
                inv.ruled.push(RuledEntry {
                    indices: l.indices.clone(),
                    order: l.order,
                    n: hj_length(l.order, l.action.exponents[1]),
                    genus: c.genus,
                    curve: c,
                });
            }
            LocusKind::Points | LocusKind::Vertex => inv.planes.push(plane_entry(l, dim)?),
        }
    }
    Ok(inv)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Betti {
    pub b2: u64,
    pub b3: u64,
    pub chi: i64,
    pub h11: u64,
    pub h21: u64,
}

/// Betti and Hodge numbers of the resolved Calabi–Yau threefold.
/// `middle` is |𝔄| (or |𝔄_X| for quasi-diagonal), `aux_genus` the genus of
/// the auxiliary curve of a quasi-diagonal equation (0 otherwise).
pub fn betti_euler(inv: &ResolutionInventory, middle: u64, aux_genus: u64) -> Result<Betti> {
    if inv.dim != 3 {
        return Err(Error::BadInput(
            "Betti numbers are computed for threefolds".into(),
        ));
    }
    let b2 = 1 + inv.exceptional_classes();
    let b3 = middle + inv.ruled.iter().map(|r| 2 * r.n * r.genus).sum::<u64>() + 2 * aux_genus;
    if b3 % 2 != 0 {
        return Err(Error::ValidationFailure(format!("odd b3 = {b3}")));
    }
    let chi = 2 + 2 * b2 as i64 - b3 as i64;
    Ok(Betti {
        b2,
        b3,
        chi,
        h11: b2,
        h21: b3 / 2 - 1,
    })
}

/// Second Betti number of a resolved K3 surface: 1 + |𝔄| (+ |𝔏|) plus
/// exceptional curves.
pub fn k3_b2(inv: &ResolutionInventory, middle: u64) -> u64 {
    1 + middle + inv.exceptional_classes()
}

/// P₀ of a finite point set: Π over Frobenius orbits of (1 − t^r).
pub fn point_set_p0(ps: &PointSet, p: u64, e: u32) -> IntPoly {
    let mut out = IntPoly::one();
    for r in ps.orbit_sizes(p, e) {
        let mut c = vec![0i64; r as usize + 1];
        c[0] = 1;
        c[r as usize] = -1;
        out = out.mul(&IntPoly::from_i64(&c));
    }
    out
}

/// New points over F_{q^ν} per exceptional entry: n·q^ν·N(C) for ruled
/// surfaces, e·(q^ν + q^{2ν})·#P for planes, e·q^ν·#P for lines.
/// `curve_counts[i]` is #C_i(F_{q^ν}) for `inv.ruled[i]`.
pub fn new_point_counts(
    inv: &ResolutionInventory,
    p: u64,
    e: u32,
    nu: u32,
    curve_counts: &[u64],
) -> Vec<u128> {
    let qn = (p as u128).pow(e * nu);
    let mut out = Vec::new();
    for (r, &nc) in inv.ruled.iter().zip(curve_counts) {
        out.push(r.n as u128 * qn * nc as u128);
    }
    for pl in &inv.planes {
        let pts = pl.point_set.count(p, e, nu) as u128;
        let per = if inv.dim == 3 { qn + qn * qn } else { qn };
        out.push(pl.e as u128 * per * pts);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_examples() {
        let t = triangle_lattice(6, 2, 3).unwrap();
        assert_eq!((t.a1, t.b1, t.interior), (2, 3, 1));
        let t = triangle_lattice(22, 10, 11).unwrap();
        assert_eq!(
            (t.interior, t.side_ac_interior, t.side_bc_interior),
            (5, 10, 1)
        );
        assert_eq!(triangle_lattice(33, 21, 11).unwrap().interior, 10);
        assert_eq!(triangle_lattice(3, 1, 1).unwrap().interior, 1);
        let t = triangle_lattice(10, 1, 8).unwrap();
        assert_eq!(
            (t.interior, t.side_ac_interior, t.side_bc_interior),
            (4, 1, 0)
        );
        assert!(triangle_lattice(5, 1, 1).is_err());
    }

    #[test]
    fn hj_chains() {
        assert_eq!(hj_length(5, 4), 4);
        assert_eq!(hj_length(2, 1), 1);
        assert_eq!(hj_length(5, 2), 2); // 5/2 = [3, 2]
        assert_eq!(hj_length(7, 3), 3); // 7/3 = [3, 2, 2]
    }

    #[test]
    fn inventory_1_2_3_6_6() {
        let h = Hypersurface::diagonal(vec![1, 2, 3, 6, 6], 18).unwrap();
        let inv = resolution_inventory(&h).unwrap();
        let ns: Vec<u64> = inv.ruled.iter().map(|r| r.n).collect();
        assert_eq!(ns, vec![1, 2]);
        assert_eq!(inv.planes.len(), 1);
        assert_eq!((inv.planes[0].e, inv.planes[0].points), (1, 3));
        let b = betti_euler(&inv, 154, 0).unwrap();
        assert_eq!((b.b2, b.b3, b.chi), (7, 160, -144));
    }

    #[test]
    fn inventory_1_1_1_3_3() {
        let h = Hypersurface::diagonal(vec![1, 1, 1, 3, 3], 9).unwrap();
        let inv = resolution_inventory(&h).unwrap();
        assert!(inv.ruled.is_empty());
        assert_eq!(inv.planes[0].action.exponents, vec![1, 1, 1]);
        let b = betti_euler(&inv, 226, 0).unwrap();
        assert_eq!((b.b2, b.chi), (4, -216));
    }

    #[test]
    fn p0_of_conjugate_points() {
        let ps = PointSet {
            k: 3,
            c_num: -1,
            c_den: 1,
        };
        // p = 5: x^3 = -1 has one root in F_5 and a conjugate pair
        assert_eq!(point_set_p0(&ps, 5, 1), IntPoly::from_i64(&[1, -1, -1, 1]));
    }
}
