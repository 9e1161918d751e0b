//! One-dimensional root finding and optimization helpers.

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Bisects a sign change of `f` on `[lo, hi]` down to adjacent floats.
///
/// `f(lo)` and `f(hi)` must not share a strict sign.
pub fn bisect_root(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return lo;
    }
    if fhi == 0.0 {
        return hi;
    }
    for _ in 0..1100 {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Narrows the boundary between a point where `pred` holds and one where it
/// fails. Returns the last point known to satisfy `pred`.
pub fn bisect_boundary(pred: impl Fn(f64) -> bool, mut yes: f64, mut no: f64, tol: f64) -> f64 {
    for _ in 0..200 {
        if (yes - no).abs() <= tol {
            break;
        }
        let mid = 0.5 * (yes + no);
        if mid == yes || mid == no {
            break;
        }
        if pred(mid) {
            yes = mid;
        } else {
            no = mid;
        }
    }
    yes
}

/// Golden-section search for a maximum of a unimodal `f` on `[lo, hi]`.
/// The endpoints are compared as well, so boundary maxima are exact.
pub fn golden_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..300 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = f(d);
        }
    }
    let mut best = if fc >= fd { (c, fc) } else { (d, fd) };
    for x in [lo, hi] {
        let fx = f(x);
        if fx > best.1 {
            best = (x, fx);
        }
    }
    best
}

/// Golden-section search for a minimum.
pub fn golden_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (x, v) = golden_max(|t| -f(t), lo, hi, tol);
    (x, -v)
}

/// Maximizer of a strictly concave function given its derivative.
pub fn concave_argmax(df: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    if df(lo) <= 0.0 {
        return lo;
    }
    if df(hi) >= 0.0 {
        return hi;
    }
    bisect_root(df, lo, hi)
}

/// `n` evenly spaced points from `lo` to `hi`, both included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + step * i as f64 })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_of_quadratic() {
        let r = bisect_root(|x| x * x - 2.0, 0.0, 2.0);
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn golden_finds_interior_and_boundary_maxima() {
        let (x, _) = golden_max(|x| -(x - 0.3).powi(2), 0.0, 1.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-6);
        let (x, v) = golden_max(|x| x, 0.0, 1.0, 1e-12);
        assert_eq!((x, v), (1.0, 1.0));
    }

    #[test]
    fn boundary_bisection_keeps_true_side() {
        let b = bisect_boundary(|x| x <= 0.25, 0.0, 1.0, 1e-12);
        assert!(b <= 0.25 && 0.25 - b < 1e-11);
    }

    #[test]
    fn concave_argmax_clamps() {
        assert_eq!(concave_argmax(|x| 1.0 - x, 0.0, 0.5), 0.5);
        assert_eq!(concave_argmax(|x| -1.0 - x, 0.0, 0.5), 0.0);
        let x = concave_argmax(|x| 0.2 - x, 0.0, 0.5);
        assert!((x - 0.2).abs() < 1e-15);
    }

    #[test]
    fn linspace_hits_ends() {
        let v = linspace(0.0, 2.5, 11);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[10], 2.5);
        assert!((v[4] - 1.0).abs() < 1e-15);
    }
}
