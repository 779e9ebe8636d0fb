//! Fixed-order reductions.
//!
//! Every reduction that feeds a reported number goes through here so that
//! results do not depend on the thread count or on chunking.

const LEAF: usize = 32;

/// Pairwise (cascade) summation with a fixed split order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= LEAF {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Pairwise sum of `f(j)` for `j` in `0..n`.
pub fn pairwise_sum_by(n: usize, f: impl Fn(usize) -> f64 + Copy) -> f64 {
    fn go(lo: usize, hi: usize, f: impl Fn(usize) -> f64 + Copy) -> f64 {
        if hi - lo <= LEAF {
            return (lo..hi).map(f).sum();
        }
        let mid = lo + (hi - lo) / 2;
        go(lo, mid, f) + go(mid, hi, f)
    }
    go(0, n, f)
}

/// Maximum of `f(j)` over `0..n` together with the maximizing index.
/// NaN entries win, so callers see them.
pub fn argmax_by(n: usize, f: impl Fn(usize) -> f64) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for j in 0..n {
        let x = f(j);
        match best {
            Some((_, b)) if b.is_nan() => {}
            Some((_, b)) if !(x.is_nan() || x > b) => {}
            _ => best = Some((j, x)),
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_on_integers() {
        let v: Vec<f64> = (1..=1000).map(f64::from).collect();
        assert_eq!(pairwise_sum(&v), 500500.0);
        assert_eq!(pairwise_sum_by(1000, |j| (j + 1) as f64), 500500.0);
    }

    #[test]
    fn empty_sum_is_zero() {
        assert_eq!(pairwise_sum(&[]), 0.0);
        assert!(argmax_by(0, |_| 1.0).is_none());
    }

    #[test]
    fn argmax_reports_nan() {
        let v = [1.0, f64::NAN, 3.0];
        let (j, x) = argmax_by(3, |j| v[j]).unwrap();
        assert_eq!(j, 1);
        assert!(x.is_nan());
        assert_eq!(argmax_by(2, |j| [2.0, 5.0][j]), Some((1, 5.0)));
    }
}
