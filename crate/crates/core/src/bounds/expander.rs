//! The two-equation system in (γ, δ) behind the expander-based existence
//! bound for large alphabets.

use super::asymptotic::{AsymptoticPoint, BoundName};
use super::optimize::bisect_increasing;
use crate::error::{Error, Result};

const INNER_GRID: usize = 4000;
const MIN_DELTA: f64 = 1e-300;

pub(crate) fn check_params(r: usize, t: usize) -> Result<()> {
    if t < 2 || r < t {
        return Err(Error::domain(format!("the expander bound needs r >= t >= 2 (got r={r}, t={t})")));
    }
    Ok(())
}

fn h2(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -(x * x.ln() + (1.0 - x) * (-x).ln_1p()) / std::f64::consts::LN_2
}

/// ((t−1)/t) h(δ) − h(δγ(r+1))/(r+1) − δγ(r+1) h(1/(γ(r+1))).
pub fn phi(r: usize, t: usize, gamma: f64, delta: f64) -> f64 {
    let c = gamma * (r + 1) as f64;
    (t - 1) as f64 / t as f64 * h2(delta) - h2(delta * c) / (r + 1) as f64 - delta * c * h2(1.0 / c)
}

/// Largest root of φ(·; γ) in (0, min(1, 1/(γ(r+1)))], and whether more
/// than one sign change was seen. Roots can be extremely small as γ nears
/// 1/t, so the bracketing grid is uniform in ln δ.
pub fn delta2(r: usize, t: usize, gamma: f64) -> (f64, bool) {
    let upper = (1.0 / (gamma * (r + 1) as f64)).min(1.0);
    let (lo, hi) = (MIN_DELTA.ln(), upper.ln());
    let xs: Vec<f64> = (0..INNER_GRID)
        .map(|i| lo + (hi - lo) * i as f64 / (INNER_GRID - 1) as f64)
        .collect();
    let f = |x: f64| phi(r, t, gamma, x.exp().min(upper));
    let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let changes: Vec<usize> = (0..INNER_GRID - 1)
        .filter(|&i| vals[i] > 0.0 && vals[i + 1] <= 0.0)
        .collect();
    let Some(&i) = changes.last() else {
        // φ ≤ 0 throughout: the root has merged into 0
        return (if vals[0] > 0.0 { upper } else { 0.0 }, false);
    };
    let multi = changes.len() > 1;
    if vals[i + 1] == 0.0 && i + 1 == INNER_GRID - 1 {
        return (upper, multi);
    }
    let x = bisect_increasing(|x| -f(x), xs[i], xs[i + 1], 1e-14, 0.0);
    (x.exp().min(upper), multi)
}

fn rate_max(r: usize, t: usize) -> f64 {
    1.0 - t as f64 / (r + 1) as f64
}

/// δ*: where the curve meets the maximal rate, δ₂ at γ = 1/t.
pub fn delta_star(r: usize, t: usize) -> f64 {
    delta2(r, t, 1.0 / t as f64).0
}

/// Solves δ(1 − tγ) = 1 − t/(r+1) − R together with φ(δ; γ) = 0 for
/// γ ∈ [1/(r+1), 1/t). At the maximal rate the trivial endpoint δ = 0 is
/// returned and δ* is kept in `aux2`.
pub fn expander_lower_bound(r: usize, t: usize, rate: f64) -> Result<AsymptoticPoint> {
    check_params(r, t)?;
    let rmax = rate_max(r, t);
    if !(0.0..=rmax + 1e-12).contains(&rate) {
        return Err(Error::domain(format!("rate {rate} outside [0, {rmax}]")));
    }
    let dstar = delta_star(r, t);
    let mut point = AsymptoticPoint {
        bound: BoundName::Expander,
        q: None,
        r,
        t,
        delta: 0.0,
        value: rate,
        aux1: Some(1.0 / t as f64),
        aux2: Some(dstar),
        flag: None,
    };
    if rate >= rmax - 1e-15 {
        point.flag = Some("trivial endpoint");
        return Ok(point);
    }
    let slack = rmax - rate;
    let tf = t as f64;
    let gap = |g: f64| {
        let (d2, multi) = delta2(r, t, g);
        (slack / (1.0 - tf * g) - d2, d2, multi)
    };
    let mut lo = 1.0 / (r + 1) as f64;
    let mut hi = 1.0 / tf;
    let start = gap(lo);
    let (gamma, d, multi) = if start.0 >= -1e-13 {
        (lo, start.1, start.2)
    } else {
        for _ in 0..200 {
            if hi - lo <= 1e-15 {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if gap(mid).0 < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let g = 0.5 * (lo + hi);
        let (_, d2, multi) = gap(g);
        (g, d2, multi)
    };
    point.delta = d;
    point.aux1 = Some(gamma);
    if multi {
        point.flag = Some("multiple roots");
    }
    Ok(point)
}

/// The curve as a function of δ: R = 1 − t/(r+1) − δ(1 − tγ) where γ solves
/// δ₂(γ) = δ, extended horizontally at the maximal rate below δ*.
pub fn expander_rate_at(r: usize, t: usize, delta: f64) -> Result<AsymptoticPoint> {
    check_params(r, t)?;
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::domain(format!("relative distance {delta} outside [0, 1]")));
    }
    let rmax = rate_max(r, t);
    let tf = t as f64;
    let dstar = delta_star(r, t);
    let mut point = AsymptoticPoint {
        bound: BoundName::Expander,
        q: None,
        r,
        t,
        delta,
        value: rmax,
        aux1: Some(1.0 / tf),
        aux2: Some(dstar),
        flag: None,
    };
    if delta <= dstar {
        point.flag = Some("horizontal extension");
        return Ok(point);
    }
    // δ₂ decreases in γ: 1 at γ = 1/(r+1), δ* at γ = 1/t
    let gamma = bisect_increasing(|g| delta - delta2(r, t, g).0, 1.0 / (r + 1) as f64, 1.0 / tf, 1e-14, 1e-13);
    point.value = (rmax - delta * (1.0 - tf * gamma)).clamp(0.0, rmax);
    point.aux1 = Some(gamma);
    Ok(point)
}
