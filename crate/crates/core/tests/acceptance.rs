//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion.
//!
//! FAIL marks a criterion whose published target is contradicted by an
//! independent oracle; the oracle's value is asserted instead, so the run
//! still aborts if the corrected value itself breaks.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use wpzeta::charset::qd_character_set;
use wpzeta::count::count_tower;
use wpzeta::cyclo::Cyclo;
use wpzeta::field::FiniteField;
use wpzeta::jacobi::{
    gauss_sum, gauss_sum_supersingular, jacobi_sum, jacobi_sum_nested, Character,
};
use wpzeta::padic::{
    deformation_matrix, hypergeometric_1f0_ratio, katz_check, zeta_from_deformation,
    DeformationFamily, PadicRing,
};
use wpzeta::par::Strategy;
use wpzeta::poly::IntPoly;
use wpzeta::resolve::{
    new_point_counts, resolution_inventory, triangle_lattice, ResolutionInventory,
};
use wpzeta::tables::{table_rows, table_with_invariants, ChiMethod, Table};
use wpzeta::wps::{elliptic_fiber, Hypersurface, Kind};
use wpzeta::zeta::{oracle_counts, verify_zeta, zeta, zeta_diagonal, zeta_resolution};

struct Outcome {
    pass: bool,
    note: String,
}

fn pass(note: impl Into<String>) -> Outcome {
    Outcome {
        pass: true,
        note: note.into(),
    }
}

fn verdict(pass: bool, note: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        note: note.into(),
    }
}

fn poly(c: &[i64]) -> IntPoly {
    IntPoly::from_i64(c)
}

// ---------------------------------------------------------------------------
// printed rows: (row, input weights, fiber, ℓ, k, d)

type Printed = (
    usize,
    &'static [u64],
    &'static str,
    u64,
    &'static [u64],
    u64,
);

const ELLIPTIC: [(&str, &[u64], u64); 3] = [
    ("E1", &[1, 1, 1], 3),
    ("E2", &[1, 1, 2], 4),
    ("E3", &[1, 2, 3], 6),
];

const K3: [Printed; 11] = [
    (1, &[2, 1, 1], "E1", 3, &[1, 1, 2, 2], 6),
    (2, &[2, 1, 1], "E2", 4, &[1, 1, 2, 4], 8),
    (3, &[2, 1, 1], "E3", 6, &[1, 1, 4, 6], 12),
    (4, &[3, 1, 2], "E2", 4, &[1, 2, 3, 6], 12),
    (5, &[3, 1, 2], "E3", 6, &[1, 2, 6, 9], 18),
    (6, &[4, 1, 3], "E1", 3, &[1, 3, 4, 4], 12),
    (7, &[4, 1, 3], "E3", 6, &[1, 3, 8, 12], 24),
    (8, &[5, 1, 4], "E2", 4, &[1, 4, 5, 10], 20),
    (9, &[7, 1, 6], "E3", 6, &[1, 6, 14, 21], 42),
    (10, &[5, 2, 3], "E3", 6, &[2, 3, 10, 15], 30),
    (11, &[11, 5, 6], "E3", 6, &[5, 6, 22, 33], 66),
];
/// g(C) is printed once per curve; the curve itself changes with ℓ.
const K3_GENUS: [Option<u64>; 11] = [
    Some(4),
    None,
    None,
    Some(7),
    None,
    Some(3),
    None,
    Some(6),
    Some(15),
    Some(11),
    Some(5),
];

const ELLIPTIC_FIBERED: [Printed; 14] = [
    (1, &[5, 1, 1, 3], "E1", 3, &[1, 1, 3, 5, 5], 15),
    (2, &[5, 1, 1, 3], "E3", 6, &[1, 1, 3, 10, 15], 30),
    (3, &[5, 1, 1, 2], "E2", 4, &[1, 2, 2, 5, 10], 20),
    (4, &[5, 1, 1, 2], "E3", 6, &[1, 2, 2, 10, 15], 30),
    (5, &[7, 1, 2, 4], "E2", 4, &[1, 2, 4, 7, 14], 28),
    (6, &[7, 1, 3, 3], "E1", 3, &[1, 3, 3, 7, 7], 21),
    (7, &[7, 1, 3, 3], "E3", 6, &[1, 3, 3, 14, 21], 42),
    (8, &[7, 2, 2, 3], "E3", 6, &[2, 2, 3, 14, 21], 42),
    (9, &[9, 1, 4, 4], "E2", 4, &[1, 4, 4, 9, 18], 36),
    (10, &[10, 2, 3, 5], "E1", 3, &[2, 3, 5, 10, 10], 30),
    (11, &[10, 2, 3, 5], "E3", 6, &[2, 3, 5, 20, 30], 60),
    (12, &[10, 1, 3, 6], "E1", 3, &[1, 3, 6, 10, 10], 30),
    (13, &[10, 1, 3, 6], "E3", 6, &[1, 3, 6, 20, 30], 60),
    (14, &[13, 1, 6, 6], "E3", 6, &[1, 6, 6, 26, 39], 78),
];

const ELLIPTIC_K3_FIBERED: [Printed; 23] = [
    (1, &[3, 1, 1, 1], "E1", 3, &[1, 1, 1, 3, 3], 9),
    (2, &[3, 1, 1, 1], "E2", 4, &[1, 1, 1, 3, 6], 12),
    (3, &[3, 1, 1, 1], "E3", 6, &[1, 1, 1, 6, 9], 18),
    (4, &[4, 1, 1, 2], "E1", 3, &[1, 1, 2, 4, 4], 12),
    (5, &[4, 1, 1, 2], "E2", 4, &[1, 1, 2, 4, 8], 16),
    (6, &[4, 1, 1, 2], "E3", 6, &[1, 1, 2, 8, 12], 24),
    (7, &[6, 1, 1, 4], "E2", 4, &[1, 1, 4, 6, 12], 24),
    (8, &[6, 1, 1, 4], "E3", 6, &[1, 1, 4, 12, 18], 36),
    (9, &[6, 1, 2, 3], "E1", 3, &[1, 2, 3, 6, 6], 18),
    (10, &[6, 1, 2, 3], "E2", 4, &[1, 2, 3, 6, 12], 24),
    (11, &[6, 1, 2, 3], "E3", 6, &[1, 2, 3, 12, 18], 36),
    (12, &[8, 1, 1, 6], "E1", 3, &[1, 1, 6, 8, 8], 24),
    (13, &[8, 1, 1, 6], "E3", 6, &[1, 1, 6, 16, 24], 48),
    (14, &[8, 1, 3, 4], "E3", 6, &[1, 3, 4, 16, 24], 48),
    (15, &[8, 2, 3, 3], "E3", 6, &[2, 3, 3, 16, 24], 48),
    (16, &[9, 1, 2, 6], "E2", 4, &[1, 2, 6, 9, 18], 36),
    (17, &[9, 1, 2, 6], "E3", 6, &[1, 2, 6, 18, 27], 54),
    (18, &[9, 2, 3, 4], "E2", 4, &[2, 3, 4, 9, 18], 36),
    (19, &[10, 1, 1, 8], "E2", 4, &[1, 1, 8, 10, 20], 40),
    (20, &[10, 3, 3, 4], "E3", 6, &[3, 3, 4, 20, 30], 60),
    (21, &[12, 1, 2, 9], "E1", 3, &[1, 2, 9, 12, 12], 36),
    (22, &[12, 1, 2, 9], "E3", 6, &[1, 2, 9, 24, 36], 72),
    (23, &[14, 1, 1, 12], "E3", 6, &[1, 1, 12, 28, 42], 84),
];
const ELLIPTIC_K3_FIBERED_CHI: [i64; 23] = [
    -216, -324, -540, -192, -288, -480, -312, -528, -144, -480, -360, -240, -624, -312, -240, -228,
    -408, -120, -432, -192, -168, -240, -960,
];

const POSITIVE_EULER: [(usize, [u64; 4], [u64; 5], u64); 8] = [
    (24, [581, 41, 42, 498], [41, 42, 498, 1162, 1743], 3486),
    (25, [498, 36, 41, 421], [36, 41, 421, 996, 1494], 2988),
    (26, [539, 36, 41, 462], [36, 41, 462, 1078, 1617], 3234),
    (27, [463, 31, 41, 391], [31, 41, 391, 926, 1389], 2778),
    (28, [433, 31, 36, 366], [31, 36, 366, 866, 1299], 2598),
    (29, [414, 24, 41, 349], [24, 41, 349, 828, 1242], 2484),
    (30, [385, 28, 31, 326], [28, 31, 326, 770, 1155], 2310),
    (31, [372, 18, 41, 313], [18, 41, 313, 744, 1116], 2232),
];

const K3_FIBERED: [Printed; 20] = [
    (1, &[2, 1, 1], "Y1", 6, &[1, 1, 2, 4, 4], 12),
    (2, &[2, 1, 1], "Y4", 12, &[1, 1, 4, 6, 12], 24),
    (3, &[2, 1, 1], "Y6", 18, &[1, 1, 4, 12, 18], 36),
    (4, &[2, 1, 1], "Y9", 42, &[1, 1, 12, 28, 42], 84),
    (5, &[3, 2, 1], "Y1", 6, &[1, 3, 3, 6, 6], 18),
    (6, &[3, 2, 1], "Y4", 12, &[1, 2, 6, 9, 18], 36),
    (7, &[3, 2, 1], "Y6", 18, &[1, 2, 8, 18, 27], 54),
    (8, &[3, 2, 1], "Y9", 42, &[1, 2, 18, 42, 63], 126),
    (9, &[3, 2, 1], "Y10", 15, &[2, 4, 9, 30, 45], 90),
    (10, &[4, 1, 3], "Y1", 6, &[1, 3, 4, 8, 8], 24),
    (11, &[4, 1, 3], "Y9", 42, &[1, 3, 24, 56, 84], 168),
    (12, &[5, 1, 4], "Y4", 12, &[1, 4, 10, 15, 30], 60),
    (13, &[5, 1, 4], "Y6", 18, &[1, 4, 10, 30, 45], 90),
    (14, &[5, 1, 4], "Y10", 15, &[2, 8, 15, 50, 75], 150),
    (15, &[7, 1, 6], "Y6", 18, &[1, 6, 14, 42, 63], 126),
    (16, &[7, 1, 6], "Y9", 42, &[1, 6, 42, 98, 147], 294),
    (17, &[7, 1, 6], "Y10", 15, &[2, 12, 21, 70, 105], 210),
    (18, &[5, 2, 3], "Y1", 6, &[2, 3, 5, 10, 10], 30),
    (19, &[5, 2, 3], "Y6", 18, &[2, 3, 10, 30, 45], 90),
    (20, &[5, 2, 3], "Y9", 42, &[2, 3, 30, 70, 105], 210),
];

/// Cells of the printed tables that the regeneration corrects. Each entry
/// is (table, row, column); the corrected cell is asserted below.
const KNOWN_MISPRINTS: [(usize, usize, &str); 4] = [
    // surface (5,1,1,2) has weight sum 9, but k = (1,2,2,5,10) needs (5,1,2,2)
    (3, 3, "w"),
    (3, 4, "w"),
    // (3,2,1) x Y1 gives (1,2,3,6,6); (3,2,1) x Y6 gives (1,2,6,18,27)
    (6, 5, "k"),
    (6, 7, "k"),
];

fn compare(
    table: usize,
    t: Table,
    printed: &[Printed],
    mismatches: &mut Vec<(usize, usize, String)>,
) {
    let rows = table_rows(t).unwrap();
    let main: Vec<_> = rows.iter().filter(|r| !r.extra).collect();
    assert_eq!(main.len(), printed.len(), "row count of table {table}");
    for (r, &(n, input, fiber, ell, k, d)) in main.iter().zip(printed) {
        assert_eq!(r.number, n);
        let got_input = r.surface.clone().or(r.curve.clone()).unwrap();
        let cells = [
            ("w", got_input.as_slice() == input),
            ("fiber", r.fiber == fiber),
            ("ell", r.ell == Some(ell)),
            ("k", r.k.as_slice() == k),
            ("d", r.d == d),
        ];
        for (name, ok) in cells {
            if !ok {
                mismatches.push((table, n, name.to_string()));
            }
        }
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    let ell_rows = table_rows(Table::EllipticCurves).unwrap();
    for (r, (name, w, d)) in ell_rows.iter().zip(ELLIPTIC) {
        if r.fiber != name || r.k != w || r.d != d {
            mismatches.push((1, r.number, "k".into()));
        }
    }
    compare(2, Table::K3, &K3, &mut mismatches);
    let genera: Vec<u64> = table_rows(Table::K3)
        .unwrap()
        .iter()
        .map(|r| r.curve_genus.unwrap())
        .collect();
    for (i, (&g, &want)) in genera.iter().zip(&K3_GENUS).enumerate() {
        if want.is_some_and(|w| w != g) {
            mismatches.push((2, i + 1, "g(C)".into()));
        }
    }
    compare(
        3,
        Table::EllipticFibered,
        &ELLIPTIC_FIBERED,
        &mut mismatches,
    );
    compare(
        4,
        Table::EllipticK3Fibered,
        &ELLIPTIC_K3_FIBERED,
        &mut mismatches,
    );
    compare(6, Table::K3Fibered, &K3_FIBERED, &mut mismatches);

    let pos = table_rows(Table::PositiveEuler).unwrap();
    assert_eq!(pos.len(), 8);
    for (r, (n, w, k, d)) in pos.iter().zip(POSITIVE_EULER) {
        let ok = r.number == n && r.surface.as_deref() == Some(&w[..]) && r.k == k && r.d == d;
        if !ok || !r.cy || k.iter().sum::<u64>() != d {
            mismatches.push((5, n, "weight sum".into()));
        }
    }
    assert_eq!(pos[0].k.iter().sum::<u64>(), 3486);

    // corrected cells
    let t3 = table_rows(Table::EllipticFibered).unwrap();
    assert_eq!(t3[2].surface.as_deref(), Some(&[5u64, 1, 2, 2][..]));
    assert_eq!(t3[2].k, vec![1, 2, 2, 5, 10]);
    let t6 = table_rows(Table::K3Fibered).unwrap();
    assert_eq!((t6[4].k.clone(), t6[4].d), (vec![1, 2, 3, 6, 6], 18));
    assert_eq!((t6[6].k.clone(), t6[6].d), (vec![1, 2, 6, 18, 27], 54));
    let extras: Vec<_> = table_rows(Table::EllipticK3Fibered)
        .unwrap()
        .into_iter()
        .filter(|r| r.extra)
        .map(|r| (r.surface.unwrap(), r.ell.unwrap()))
        .collect();
    assert_eq!(extras, vec![(vec![8, 1, 3, 4], 3), (vec![8, 2, 3, 3], 3)]);

    let elapsed = start.elapsed().as_secs_f64();
    let known: Vec<(usize, usize, String)> = KNOWN_MISPRINTS
        .iter()
        .map(|&(t, r, c)| (t, r, c.to_string()))
        .collect();
    let unexpected: Vec<_> = mismatches.iter().filter(|m| !known.contains(m)).collect();
    let missing: Vec<_> = known.iter().filter(|m| !mismatches.contains(m)).collect();
    verdict(
        unexpected.is_empty() && missing.is_empty() && elapsed < 1.0,
        format!(
            "all rows regenerated in {elapsed:.2}s; corrected printed cells {:?}; \
             two valid elliptic+K3 fibered combinations appended{}",
            known
                .iter()
                .map(|(t, r, c)| format!("{t}/{r}/{c}"))
                .collect::<Vec<_>>(),
            if unexpected.is_empty() && missing.is_empty() {
                String::new()
            } else {
                format!("; unexpected {unexpected:?}, missing {missing:?}")
            }
        ),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let rows = table_with_invariants(Table::EllipticK3Fibered).unwrap();
    let mut deviations = Vec::new();
    let mut checked = 0;
    for (r, &printed) in rows
        .iter()
        .filter(|r| !r.extra)
        .zip(&ELLIPTIC_K3_FIBERED_CHI)
    {
        if r.kind != Some(Kind::Diagonal) || r.chi_method != Some(ChiMethod::JacobiSum) {
            continue;
        }
        checked += 1;
        let chi = r.chi.unwrap();
        if chi != printed {
            deviations.push((r.number, printed, chi));
        }
    }
    assert_eq!(rows[0].chi, Some(-216));
    assert_eq!(rows[8].chi, Some(-144));
    // independently: χ = 2(h11 − h21) and the orbifold formula
    for r in rows
        .iter()
        .filter(|r| r.chi_method == Some(ChiMethod::JacobiSum))
    {
        let chi = r.chi.unwrap();
        assert_eq!(chi, 2 * (r.h11.unwrap() as i64 - r.h21.unwrap() as i64));
        assert_eq!(chi, wpzeta::tables::orbifold_euler(&r.k, r.d).unwrap());
    }
    assert_eq!(deviations, vec![(10, -480, -216), (22, -240, -456)]);

    let t3 = table_with_invariants(Table::EllipticFibered).unwrap();
    let first = (t3[0].h11, t3[0].h21, t3[0].chi);
    assert_eq!(first, (Some(7), Some(103), Some(-192)));
    assert_eq!(t3[9].chi, Some(-72));
    assert_eq!(t3[2].h21, Some(120));
    let elapsed = start.elapsed().as_secs_f64();
    verdict(
        deviations.is_empty(),
        format!(
            "{checked} diagonal rows, chi -216 and -144 and (7, 103, -192) reproduced; \
             printed chi contradicted by orbifold formula at {:?} (row, printed, computed); {elapsed:.1}s",
            deviations
        ),
    )
}

fn inventory_summary(inv: &ResolutionInventory) -> (Vec<u64>, Vec<(u64, u64)>) {
    let mut ruled: Vec<u64> = inv.ruled.iter().map(|r| r.n).collect();
    ruled.sort_unstable();
    let mut planes: Vec<(u64, u64)> = inv.planes.iter().map(|p| (p.e, p.points)).collect();
    planes.sort_unstable();
    (ruled, planes)
}

fn criterion_3() -> Outcome {
    let diag = Hypersurface::diagonal(vec![1, 2, 3, 6, 6], 18).unwrap();
    let (ruled, planes) = inventory_summary(&resolution_inventory(&diag).unwrap());
    assert_eq!(ruled, vec![1, 2]);
    assert_eq!(planes, vec![(1, 3)]);

    let qd1 = Hypersurface::quasi_diagonal(vec![5, 6, 11, 22, 22], 66).unwrap();
    let (ruled, planes) = inventory_summary(&resolution_inventory(&qd1).unwrap());
    assert_eq!(ruled, vec![1, 10]);
    assert_eq!(planes, vec![(2, 1), (5, 3)]);

    let qd2 = Hypersurface::quasi_diagonal(vec![10, 12, 33, 33, 44], 132).unwrap();
    let inv = resolution_inventory(&qd2).unwrap();
    let (ruled, planes) = inventory_summary(&inv);
    assert_eq!(ruled, vec![1, 2, 10]);
    // the μ_4 points on z_0 = z_2 = z_3 = 0 are not in the printed census
    let mu4: Vec<_> = inv.planes.iter().filter(|p| p.action.order == 4).collect();
    assert_eq!(mu4.len(), 1);
    let printed: Vec<(u64, u64)> = planes
        .iter()
        .copied()
        .filter(|&pl| pl != (mu4[0].e, mu4[0].points))
        .collect();
    assert_eq!(printed, vec![(4, 1), (10, 4)]);

    let mut admissible = 0;
    for m in 2..=200u64 {
        for a in 1..m {
            let b = (2 * m - 1 - a) % m;
            if b == 0 {
                continue;
            }
            let t = triangle_lattice(m, a, b).unwrap();
            let direct = (1..m)
                .filter(|&i| {
                    let (x, y) = (i * a % m, i * b % m);
                    x > 0 && y > 0 && i + x + y == m
                })
                .count() as u64;
            assert_eq!(t.interior, direct);
            admissible += 1;
        }
    }
    pass(format!(
        "three censuses match; extra mu_4 locus with {} plane(s) at {} point(s) found on (10,12,33,33,44); \
         {admissible} lattices m <= 200 agree with enumeration",
        mu4[0].e, mu4[0].points
    ))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut cases: Vec<(String, Hypersurface, u64)> = Vec::new();
    for i in 1..=3 {
        let (e, _) = elliptic_fiber(i).unwrap();
        for p in [5u64, 7, 11, 13] {
            cases.push((format!("E{i}/F{p}"), e.clone(), p));
        }
    }
    cases.push((
        "K3 (1,1,2,2)/F7".into(),
        Hypersurface::diagonal(vec![1, 1, 2, 2], 6).unwrap(),
        7,
    ));
    let y11 = Hypersurface::quasi_diagonal(vec![5, 6, 22, 33], 66).unwrap();
    cases.push(("Y11/F13".into(), y11.clone(), 13));
    cases.push((
        "(1,1,1,3,3)/F19".into(),
        Hypersurface::diagonal(vec![1, 1, 1, 3, 3], 9).unwrap(),
        19,
    ));

    let (m, set) = qd_character_set(&y11.exponents);
    let mut got: Vec<Vec<u64>> = set.into_iter().map(|v| v.entries).collect();
    got.sort();
    assert_eq!(m, 12);
    assert_eq!(
        got,
        vec![
            vec![1, 1, 4, 6],
            vec![5, 5, 8, 6],
            vec![7, 7, 4, 6],
            vec![11, 11, 8, 6]
        ]
    );

    let mut failures = Vec::new();
    for (name, h, p) in &cases {
        let z = zeta(h, *p, 1).unwrap();
        let oracle = oracle_counts(h, *p, 1, 2).unwrap();
        let formula = z.counts(2);
        if formula
            .iter()
            .zip(&oracle)
            .any(|(a, b)| a != &BigInt::from(*b))
        {
            failures.push(name.clone());
        }
        if name.starts_with("Y11") {
            assert_eq!(z.factors[2].degree(), 5);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    verdict(
        failures.is_empty() && elapsed < 600.0,
        format!(
            "{} zeta functions agree with exhaustive N_1, N_2 in {elapsed:.1}s {failures:?}",
            cases.len()
        ),
    )
}

fn criterion_5() -> Outcome {
    let (p, q) = (19u64, BigInt::from(19));
    let h = Hypersurface::diagonal(vec![1, 2, 3, 6, 6], 18).unwrap();
    let z = zeta(&h, p, 1).unwrap();
    let inv = resolution_inventory(&h).unwrap();
    let zr = zeta_resolution(&z, &inv, p, 1).unwrap();

    let n1_x = oracle_counts(&h, p, 1, 1).unwrap()[0];
    let curves: Vec<u64> = inv
        .ruled
        .iter()
        .map(|r| count_tower(&r.curve.equation, p, 1, 1).unwrap()[0])
        .collect();
    let delta: u128 = new_point_counts(&inv, p, 1, 1, &curves).iter().sum();
    let expected = BigInt::from(n1_x as u128 + delta);
    let n1 = zr.counts(1)[0].clone();
    let symmetric = zr.factors[4] == zr.factors[2].scale_var(&q);
    assert_eq!(n1, expected);
    assert!(symmetric);
    verdict(
        n1 == expected && symmetric,
        format!("N_1 = {n1} = {n1_x} + {delta}; P_4(t) = P_2(19t)"),
    )
}

fn criterion_6() -> Outcome {
    let (e1, _) = elliptic_fiber(1).unwrap();
    let z = zeta(&e1, 5, 1).unwrap();
    let counts = oracle_counts(&e1, 5, 1, 2).unwrap();
    assert!(verify_zeta(&z, &counts));
    let published = poly(&[1, 0, -5]);
    let corrected = poly(&[1, 0, 5]);
    assert_eq!(z.factors[1], corrected);
    // N_2 = 25 + 1 - (α² + β²) separates the two candidates
    assert_eq!(counts[1], 36);

    // pure Gauss sums over F_{p^{2r}} against direct summation
    let mut gauss_checked = 0;
    for (p, m) in [(5u64, 3u64), (2, 3), (3, 4), (5, 6), (2, 5), (7, 4), (2, 9)] {
        let (deg, g) = gauss_sum_supersingular(p, m).unwrap();
        let f = FiniteField::new(p, deg).unwrap();
        let chi = Character::new(&f, m).unwrap();
        for a in (1..m as i64).filter(|&a| wpzeta::arith::gcd(a as u64, m) == 1) {
            assert_eq!(
                gauss_sum(&chi, a),
                Cyclo::from_int(m * p, g.clone()),
                "p = {p}, m = {m}, a = {a}"
            );
            gauss_checked += 1;
        }
    }
    let f25 = FiniteField::new(5, 2).unwrap();
    let chi = Character::new(&f25, 3).unwrap();
    for a in [[1i64, 1, 1], [2, 2, 2]] {
        // (-1)^n G^3 / q with G = 5
        assert_eq!(jacobi_sum(&chi, &a), Cyclo::from_int(3, -5));
        assert_eq!(jacobi_sum_nested(&chi, &a), Cyclo::from_int(3, -5));
    }
    verdict(
        z.factors[1] == published,
        format!(
            "E1/F5 gives P_1 = 1+5t^2 (N_2 = 36), not the printed 1-5t^2; \
             {gauss_checked} supersingular Gauss sums and the F25 Jacobi sums match direct sums"
        ),
    )
}

const SMALL_FIELDS: [(u64, u32); 16] = [
    (2, 2),
    (3, 1),
    (5, 1),
    (7, 1),
    (2, 3),
    (3, 2),
    (11, 1),
    (13, 1),
    (2, 4),
    (17, 1),
    (19, 1),
    (23, 1),
    (5, 2),
    (3, 3),
    (29, 1),
    (31, 1),
];

fn criterion_7() -> Outcome {
    let strategy = (
        0..SMALL_FIELDS.len(),
        1usize..3,
        any::<u64>(),
        prop::collection::vec(any::<u64>(), 3),
    );
    let config = Config {
        cases: 1000,
        failure_persistence: None,
        max_global_rejects: 100_000,
        ..Config::default()
    };
    let mut runner = TestRunner::new(config);
    let sampled = std::cell::Cell::new(0usize);
    let result = runner.run(&strategy, |(fi, n, mseed, seeds)| {
        let (p, k) = SMALL_FIELDS[fi];
        let f = FiniteField::new(p, k).unwrap();
        let divisors: Vec<u64> = (2..f.q).filter(|m| (f.q - 1) % m == 0).collect();
        prop_assume!(!divisors.is_empty());
        let m = divisors[(mseed % divisors.len() as u64) as usize];
        let mut a: Vec<i64> = seeds[..=n]
            .iter()
            .map(|s| 1 + (s % (m - 1)) as i64)
            .collect();
        let a0 = (-a.iter().sum::<i64>()).rem_euclid(m as i64);
        prop_assume!(a0 != 0);
        a.insert(0, a0);
        let chi = Character::new(&f, m).unwrap();
        let j = jacobi_sum(&chi, &a);
        let qn = BigInt::from(f.q).pow(n as u32);
        prop_assert_eq!(j.mul(&j.conj()), Cyclo::from_int(m, qn.clone()));
        // the norm is the product over φ(m) conjugates of |J| = q^{n/2}
        let deg = Cyclo::degree(m) as u32;
        prop_assert_eq!(j.norm() * j.norm(), qn.pow(deg));
        prop_assert_eq!(j, jacobi_sum_nested(&chi, &a));
        sampled.set(sampled.get() + 1);
        Ok(())
    });
    let sampled = sampled.get();
    verdict(
        result.is_ok() && sampled >= 1000,
        format!("{sampled} sampled sums with q <= 31: J conj(J) = q^n, norm = q^(n phi(m)/2), convolution = nested"),
    )
}

fn criterion_8() -> Outcome {
    let family = DeformationFamily::hasse_pencil();
    let mut lines = Vec::new();
    let mut slowest = 0.0f64;
    let mut ok = true;
    for (p, mus, expected) in [
        (7u64, vec![0i64, 3, 5, 6], vec![[1i64, 1, 7]; 4]),
        (
            13,
            vec![0, 1, 2],
            vec![[1, -5, 13], [1, 4, 13], [1, -5, 13]],
        ),
    ] {
        let ring = PadicRing::new(p, 1, 4).unwrap();
        for (mu, want) in mus.iter().zip(&expected) {
            let start = Instant::now();
            let z = zeta_from_deformation(&family, &[*mu], &ring, Some(6 * p as usize)).unwrap();
            slowest = slowest.max(start.elapsed().as_secs_f64());
            let fiber = family.fiber(&[*mu]).unwrap();
            let counts = count_tower(&fiber, p, 1, 2).unwrap();
            ok &= verify_zeta(&z.zeta, &counts) && z.truncation == 6 * p as usize;
            assert_eq!(z.primitive, poly(want), "p = {p}, mu = {mu}");
            lines.push(format!("p={p} mu={mu}: {:?}", z.primitive.to_strings()));
            if *mu == 0 {
                let direct =
                    zeta_diagonal(&Hypersurface::fermat(&[3, 3, 3]).unwrap(), p, 1).unwrap();
                ok &= direct.factors[1] == z.primitive;
            }
        }
    }
    verdict(
        ok && slowest < 300.0,
        format!("{}; slowest fiber {slowest:.1}s", lines.join(", ")),
    )
}

fn criterion_9() -> Outcome {
    let ring = PadicRing::new(7, 1, 3).unwrap();
    let hasse = DeformationFamily::hasse_pencil();
    let k3 = DeformationFamily::k3_sextic_family();
    let kh = katz_check(&hasse, &ring, 20).unwrap();
    let kk = katz_check(&k3, &ring, 20).unwrap();
    let katz = kh.integral && kh.holds && kk.integral && kk.holds;

    let mut support_ok = true;
    for f in [&hasse, &k3, &DeformationFamily::genus_25_family()] {
        let bound: u64 = (0..f.monomials.len()).map(|j| f.period(j)).sum();
        let a = deformation_matrix(f, bound as usize + 2, Strategy::default()).unwrap();
        support_ok &= a.support() == f.predicted_support(&a.types);
    }

    // F(cλ^3)/F(cλ^{3q}) for ₁F₀(a; z), c = -1/27: compare with
    // ω(1 - cλ̄^3)^{a(q-1)}
    let c = BigRational::new(BigInt::from(-1), BigInt::from(27));
    let mut points = 0;
    let mut ratio_ok = true;
    for (p, a6) in [(13u64, 1i64), (7, 5)] {
        let r = PadicRing::new(p, 1, 4).unwrap();
        let a = BigRational::new(BigInt::from(a6), BigInt::from(6));
        let cz = r.from_rational(&c).unwrap();
        for lam in 1..p as u32 {
            let base = r.residue(&r.sub(&r.one(), &r.mul(&cz, &r.pow(&r.teichmuller(lam), 3))));
            if base == 0 {
                continue;
            }
            let v = hypergeometric_1f0_ratio(&a, &c, 3, lam, &r).unwrap();
            let expect = r.pow(&r.teichmuller(base), a6 as u64 * (p - 1) / 6);
            ratio_ok &= v == expect && r.pow(&v, 6) == r.one();
            points += 1;
        }
    }
    assert!(points >= 10);
    verdict(
        katz && support_ok && ratio_ok,
        format!(
            "Katz relation mod (7^3, nu^20): hasse shift {}, K3 shift {}; support patterns exact for 3 families; \
             ratio is a sixth root of unity at {points} Teichmuller points",
            kh.shift, kk.shift
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("table reproduction", criterion_1),
        ("Euler and Hodge numbers", criterion_2),
        ("resolution census", criterion_3),
        ("zeta vs exhaustive counts", criterion_4),
        ("resolution zeta consistency", criterion_5),
        ("supersingular branches", criterion_6),
        ("Jacobi-sum properties", criterion_7),
        ("p-adic deformation", criterion_8),
        ("formal Katz identity", criterion_9),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = (i + 1).to_string();
        if !filter.is_empty() && !filter.iter().any(|f| f == &id || name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {id} [{tag}] {name} ({:.1}s): {}",
            start.elapsed().as_secs_f64(),
            o.note
        );
    }
    println!("acceptance: {failed} criteria FAIL against the published values; corrected values asserted");
}
