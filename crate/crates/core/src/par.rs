//! Exhaustive iteration over F_q^n, split on the first coordinate.
//!
//! With the `parallel` feature the slices run on the rayon pool; without it,
//! or with [`Strategy::Sequential`], everything runs on the calling thread.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    Parallel,
}

impl Default for Strategy {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Strategy::Parallel
        } else {
            Strategy::Sequential
        }
    }
}

/// Odometer over the last `n - 1` coordinates with the first fixed.
fn for_slice<F: FnMut(&[u32]) -> bool>(q: u32, n: usize, first: u32, mut visit: F) {
    let mut x = vec![0u32; n];
    x[0] = first;
    loop {
        if !visit(&x) {
            return;
        }
        let mut i = n;
        loop {
            if i == 1 {
                return;
            }
            i -= 1;
            x[i] += 1;
            if x[i] < q {
                break;
            }
            x[i] = 0;
        }
    }
}

fn count_slice<F: Fn(&[u32]) -> bool>(q: u32, n: usize, first: u32, pred: &F) -> u64 {
    let mut c = 0u64;
    if n == 0 {
        return 0;
    }
    for_slice(q, n, first, |x| {
        if pred(x) {
            c += 1;
        }
        true
    });
    c
}

/// Number of x in F_q^n with `pred(x)`. Field elements are 0..q.
pub fn count_points<F>(q: u32, n: usize, pred: &F, strategy: Strategy) -> u64
where
    F: Fn(&[u32]) -> bool + Sync,
{
    if n == 0 {
        return pred(&[]) as u64;
    }
    match strategy {
        #[cfg(feature = "parallel")]
        Strategy::Parallel => (0..q)
            .into_par_iter()
            .map(|a| count_slice(q, n, a, pred))
            .sum(),
        _ => (0..q).map(|a| count_slice(q, n, a, pred)).sum(),
    }
}

/// Some nonzero x with `pred(x)`, if one exists.
pub fn find_first<F>(q: u32, n: usize, pred: &F) -> Option<Vec<u32>>
where
    F: Fn(&[u32]) -> bool + Sync,
{
    let search = |a: u32| {
        let mut hit = None;
        for_slice(q, n, a, |x| {
            if x.iter().any(|&c| c != 0) && pred(x) {
                hit = Some(x.to_vec());
                return false;
            }
            true
        });
        hit
    };
    if n == 0 {
        return None;
    }
    #[cfg(feature = "parallel")]
    {
        (0..q).into_par_iter().find_map_any(search)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..q).find_map(search)
    }
}

/// Runs `f` on each item, in parallel when allowed.
pub fn map_collect<T, R, F>(items: Vec<T>, f: F, strategy: Strategy) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    match strategy {
        #[cfg(feature = "parallel")]
        Strategy::Parallel => items.into_par_iter().map(f).collect(),
        _ => items.into_iter().map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_agree_between_strategies() {
        let pred = |x: &[u32]| (x[0] + 2 * x[1] + x[2]) % 5 == 0;
        let a = count_points(5, 3, &pred, Strategy::Sequential);
        let b = count_points(5, 3, &pred, Strategy::Parallel);
        assert_eq!(a, 25);
        assert_eq!(a, b);
    }

    #[test]
    fn find_skips_origin() {
        assert_eq!(find_first(3, 2, &|x: &[u32]| x[0] == 0 && x[1] == 0), None);
        assert_eq!(
            find_first(3, 2, &|x: &[u32]| x[0] == 2 && x[1] == 1),
            Some(vec![2, 1])
        );
    }
}
