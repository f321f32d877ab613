//! Brute-force point counting on weighted projective hypersurfaces.
//!
//! Two independent methods: naive evaluation on every cone point, and a
//! value-histogram convolution over groups of variables that share terms.
//! Both return the affine-cone count; [`projective`] applies
//! N = (N_cone − 1)/(q − 1).

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::par::{self, Strategy};
use crate::wps::WeightedPoly;

/// Default ceiling on q^{n+1} for exhaustive counts.
pub const DEFAULT_COUNT_BOUND: u64 = 1_000_000_000;

/// Environment variable overriding [`DEFAULT_COUNT_BOUND`].
pub const COUNT_BOUND_ENV: &str = "WPZETA_COUNT_BOUND";

pub fn count_bound() -> u64 {
    std::env::var(COUNT_BOUND_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_COUNT_BOUND)
}

fn check_bound(q: u64, n: usize, bound: u64) -> Result<()> {
    let total = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > bound as u128 {
        return Err(Error::BoundExceeded {
            what: "cone points",
            needed: total.min(u64::MAX as u128) as u64,
            bound,
        });
    }
    Ok(())
}

pub fn projective(cone: u64, q: u64) -> u64 {
    (cone - 1) / (q - 1)
}

/// Cone count by evaluating f at every point of F_q^{n+1}.
pub fn count_cone_naive(
    poly: &WeightedPoly,
    f: &FiniteField,
    strategy: Strategy,
    bound: u64,
) -> Result<u64> {
    check_bound(f.q, poly.nvars(), bound)?;
    let pred = |x: &[u32]| poly.eval(f, x) == 0;
    Ok(par::count_points(f.q as u32, poly.nvars(), &pred, strategy))
}

/// Groups of variables connected through shared terms, with their terms.
fn components(poly: &WeightedPoly) -> Vec<(Vec<usize>, Vec<usize>)> {
    let n = poly.nvars();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for t in &poly.terms {
        let s: Vec<usize> = (0..n).filter(|&i| t.exps[i] > 0).collect();
        for w in s.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut out: Vec<(Vec<usize>, Vec<usize>)> = groups
        .into_values()
        .map(|vars| {
            let terms = (0..poly.terms.len())
                .filter(|&k| {
                    let t = &poly.terms[k];
                    (0..n).any(|i| t.exps[i] > 0 && vars.contains(&i))
                })
                .collect();
            (vars, terms)
        })
        .collect();
    out.sort();
    out
}

/// Cone count via per-component value histograms and additive convolution.
/// Cost is the sum of q^{|component|} plus q per convolution step.
pub fn count_cone_histogram(poly: &WeightedPoly, f: &FiniteField, bound: u64) -> Result<u64> {
    let q = f.q as usize;
    let comps = components(poly);
    for (vars, _) in &comps {
        check_bound(f.q, vars.len(), bound)?;
    }
    let mut hists: Vec<Vec<u64>> = Vec::with_capacity(comps.len());
    for (vars, terms) in &comps {
        let mut h = vec![0u64; q];
        let mut x = vec![0u32; poly.nvars()];
        let total = (q as u64).pow(vars.len() as u32);
        for mut code in 0..total {
            for &v in vars {
                x[v] = (code % q as u64) as u32;
                code /= q as u64;
            }
            let mut acc = 0u32;
            for &ti in terms {
                let t = &poly.terms[ti];
                let mut v = f.from_int(t.coeff);
                for &i in vars {
                    if t.exps[i] > 0 {
                        v = f.mul(v, f.pow(x[i], t.exps[i]));
                    }
                }
                acc = f.add(acc, v);
            }
            h[acc as usize] += 1;
        }
        hists.push(h);
    }
    let Some(last) = hists.pop() else {
        return Ok(1);
    };
    let mut acc = vec![0u64; q];
    acc[0] = 1;
    for h in &hists {
        let mut next = vec![0u64; q];
        for (a, &ca) in acc.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            for (b, &cb) in h.iter().enumerate() {
                if cb != 0 {
                    next[f.add(a as u32, b as u32) as usize] += ca * cb;
                }
            }
        }
        acc = next;
    }
    // only the value at 0 of the final convolution is needed
    let mut total = 0u64;
    for (a, &ca) in acc.iter().enumerate() {
        if ca != 0 {
            total += ca * last[f.neg(a as u32) as usize];
        }
    }
    Ok(total)
}

/// #X(F_q) for the projective hypersurface, by the histogram method.
pub fn count_projective(poly: &WeightedPoly, f: &FiniteField) -> Result<u64> {
    Ok(projective(
        count_cone_histogram(poly, f, count_bound())?,
        f.q,
    ))
}

/// N_1..N_ν over F_{p^{k}}, F_{p^{2k}}, ...
pub fn count_tower(poly: &WeightedPoly, p: u64, k: u32, nu: u32) -> Result<Vec<u64>> {
    (1..=nu)
        .map(|j| {
            let f = FiniteField::new(p, k * j)?;
            count_projective(poly, &f)
        })
        .collect()
}
