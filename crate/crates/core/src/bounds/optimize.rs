//! One-dimensional root finding and minimization.

/// Root of an increasing function on [lo, hi] by bisection. Stops when
/// |f(mid)| ≤ ftol or the bracket is narrower than xtol.
pub fn bisect_increasing(
    f: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    xtol: f64,
    ftol: f64,
) -> f64 {
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        let v = f(mid);
        if v.abs() <= ftol || hi - lo <= xtol {
            return mid;
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Golden-section search for a minimum of a unimodal function on [lo, hi].
pub fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Minimum of f over a uniform grid on [lo, hi] followed by golden-section
/// refinement between the neighbours of the best grid point. Endpoints are
/// always evaluated.
pub fn grid_then_golden(f: impl Fn(f64) -> f64, lo: f64, hi: f64, points: usize, tol: f64) -> (f64, f64) {
    let step = (hi - lo) / (points - 1) as f64;
    let mut best = (lo, f(lo));
    for i in 1..points {
        let x = if i == points - 1 { hi } else { lo + step * i as f64 };
        let v = f(x);
        if v < best.1 {
            best = (x, v);
        }
    }
    let a = (best.0 - step).max(lo);
    let b = (best.0 + step).min(hi);
    let refined = golden_min(&f, a, b, tol);
    if refined.1 < best.1 {
        refined
    } else {
        best
    }
}
