//! Asymptotic rate bounds as functions of the relative distance δ.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::Serialize;

use super::expander;
use super::optimize::{bisect_increasing, grid_then_golden};
use crate::enumerator::{incidence_weight_counts, ln_big, IncidenceCount};
use crate::error::{Error, Result};
use crate::par;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundName {
    At1,
    Expander,
    Gv,
    Gv2,
    Lp,
    Plotkin,
    Sa,
    Singleton,
}

impl BoundName {
    pub const ALL: [BoundName; 8] = [
        BoundName::At1,
        BoundName::Expander,
        BoundName::Gv,
        BoundName::Gv2,
        BoundName::Lp,
        BoundName::Plotkin,
        BoundName::Sa,
        BoundName::Singleton,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundName::At1 => "at1",
            BoundName::Expander => "expander",
            BoundName::Gv => "gv",
            BoundName::Gv2 => "gv2",
            BoundName::Lp => "lp",
            BoundName::Plotkin => "plotkin",
            BoundName::Sa => "sa",
            BoundName::Singleton => "singleton",
        }
    }
}

impl fmt::Display for BoundName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundName {
    type Err = Error;

    fn from_str(s: &str) -> Result<BoundName> {
        BoundName::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| Error::domain(format!("unknown bound `{s}`")))
    }
}

/// One sample of an asymptotic bound. `q` is None for curves that hold for
/// all sufficiently large alphabets.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymptoticPoint {
    pub bound: BoundName,
    pub q: Option<u32>,
    pub r: usize,
    pub t: usize,
    pub delta: f64,
    pub value: f64,
    /// Minimizer s*, optimal τ, or γ for the expander curve.
    pub aux1: Option<f64>,
    /// Second diagnostic: δ₂(γ) or δ* for the expander curve.
    pub aux2: Option<f64>,
    pub flag: Option<&'static str>,
}

impl AsymptoticPoint {
    fn plain(bound: BoundName, q: Option<u32>, r: usize, t: usize, delta: f64, value: f64) -> Self {
        AsymptoticPoint {
            bound,
            q,
            r,
            t,
            delta,
            value,
            aux1: None,
            aux2: None,
            flag: None,
        }
    }
}

fn check_q(q: u32) -> Result<()> {
    if q < 2 {
        return Err(Error::domain(format!("alphabet size {q} is below 2")));
    }
    Ok(())
}

fn check_delta(delta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::domain(format!("relative distance {delta} outside [0, 1]")));
    }
    Ok(())
}

fn theta(q: u32) -> f64 {
    (q - 1) as f64 / q as f64
}

/// q-ary entropy on [0, 1], with 0 log 0 = 0.
pub fn hq(x: f64, q: u32) -> Result<f64> {
    check_q(q)?;
    if !(0.0..=1.0).contains(&x) || x.is_nan() {
        return Err(Error::domain(format!("entropy argument {x} outside [0, 1]")));
    }
    let lq = (q as f64).ln();
    let a = if x > 0.0 { -x * (x / (q - 1) as f64).ln() } else { 0.0 };
    let b = if x < 1.0 { -(1.0 - x) * (1.0 - x).ln() } else { 0.0 };
    Ok((a + b) / lq)
}

/// f_q(x) = h_q((q − 1 − x(q − 2) − 2√((q − 1)x(1 − x)))/q) on [0, (q−1)/q].
pub fn fq(x: f64, q: u32) -> Result<f64> {
    check_q(q)?;
    if !(0.0..=theta(q)).contains(&x) {
        return Err(Error::domain(format!("f_q argument {x} outside [0, (q-1)/q]")));
    }
    let qf = q as f64;
    let inner = (qf - 1.0 - x * (qf - 2.0) - 2.0 * ((qf - 1.0) * x * (1.0 - x)).sqrt()) / qf;
    hq(inner.clamp(0.0, theta(q)), q)
}

/// f_q extended by 0 beyond (q−1)/q.
fn fq_ext(x: f64, q: u32) -> f64 {
    if x >= theta(q) {
        0.0
    } else {
        fq(x.max(0.0), q).expect("in domain")
    }
}

pub fn singleton_asym(r: usize, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let r = r as f64;
    Ok(r / (r + 1.0) * (1.0 - delta))
}

pub fn plotkin_asym(r: usize, delta: f64, q: u32) -> Result<f64> {
    check_q(q)?;
    check_delta(delta)?;
    let r = r as f64;
    Ok((r / (r + 1.0) * (1.0 - delta / theta(q))).max(0.0))
}

/// min over τ ∈ [0, 1/(r+1)] of τr + (1 − τ(r+1)) f_q(δ/(1 − τ(r+1))).
/// Returns (value, τ*).
pub fn lp_asym(r: usize, delta: f64, q: u32) -> Result<(f64, f64)> {
    check_q(q)?;
    check_delta(delta)?;
    let rf = r as f64;
    let top = 1.0 / (rf + 1.0);
    let phi = |tau: f64| {
        let rest = 1.0 - tau * (rf + 1.0);
        if rest <= 0.0 {
            return tau * rf;
        }
        tau * rf + rest * fq_ext(delta / rest, q)
    };
    // past the kink f_q vanishes and φ only grows with τ
    let kink = if delta < theta(q) { (1.0 - delta / theta(q)) * top } else { 0.0 };
    let hi = kink.clamp(0.0, top);
    let mut best = if hi > 0.0 {
        grid_then_golden(phi, 0.0, hi, 2001, 1e-13)
    } else {
        (0.0, phi(0.0))
    };
    for tau in [0.0, hi, top, (1.0 - delta) * top] {
        let v = phi(tau);
        if v < best.1 {
            best = (tau, v);
        }
    }
    Ok((best.1.clamp(0.0, 1.0), best.0))
}

/// (1 − δ)/e_t with e_t = Σ_{i≤t} r^{−i}, i.e. r^t(r−1)/(r^{t+1}−1)·(1 − δ).
pub fn sa_asym(r: usize, t: usize, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    if r == 0 {
        return Err(Error::domain("locality must be positive"));
    }
    let e: f64 = (0..=t).map(|i| (r as f64).powi(-(i as i32))).sum();
    Ok((1.0 - delta) / e)
}

/// (t(r−1)+1)/(tr+1)·(1 − δ).
pub fn at1_asym(r: usize, t: usize, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    if r == 0 {
        return Err(Error::domain("locality must be positive"));
    }
    let (r, t) = (r as f64, t as f64);
    Ok((t * (r - 1.0) + 1.0) / (t * r + 1.0) * (1.0 - delta))
}

/// s b′(s)/((r+1) b(s)) for b(s) = [(1+(q−1)s)^{r+1} + (q−1)(1−s)^{r+1}]/q.
pub fn gv_slope(q: u32, r: usize, s: f64) -> f64 {
    let qm = (q - 1) as f64;
    let a = 1.0 + qm * s;
    let u = (1.0 - s) / a;
    let ur = u.powi(r as i32);
    s * qm * (1.0 - ur) / a / (1.0 + qm * ur * u)
}

/// (1/(r+1)) log_q b(s) − δ log_q s, evaluated in log space.
pub fn gv_objective(q: u32, r: usize, delta: f64, s: f64) -> f64 {
    let qm = (q - 1) as f64;
    let a = 1.0 + qm * s;
    let u = (1.0 - s) / a;
    let ln_b = (r + 1) as f64 * a.ln() + (qm * u.powi(r as i32 + 1)).ln_1p() - (q as f64).ln();
    let ls = if delta == 0.0 { 0.0 } else { delta * s.ln() };
    (ln_b / (r + 1) as f64 - ls) / (q as f64).ln()
}

/// The unique s ∈ (0, 1] with gv_slope(s) = δ; 1 once δ ≥ (q−1)/q.
pub fn gv_minimizer(q: u32, r: usize, delta: f64) -> f64 {
    if delta >= theta(q) {
        return 1.0;
    }
    if delta <= 0.0 {
        return 0.0;
    }
    bisect_increasing(|s| gv_slope(q, r, s) - delta, 0.0, 1.0, 1e-17, 1e-13)
}

pub fn gv_asym(r: usize, delta: f64, q: u32) -> Result<AsymptoticPoint> {
    check_q(q)?;
    check_delta(delta)?;
    if r == 0 {
        return Err(Error::domain("locality must be positive"));
    }
    let plateau = r as f64 / (r + 1) as f64;
    let s = gv_minimizer(q, r, delta);
    let value = if s == 0.0 { plateau } else { plateau - gv_objective(q, r, delta, s) };
    let mut p = AsymptoticPoint::plain(BoundName::Gv, Some(q), r, 1, delta, value.clamp(0.0, plateau));
    p.aux1 = Some(s);
    Ok(p)
}

/// Weight counts of the vertex-edge incidence code of K_{r+2}, prepared for
/// log-space evaluation of g(s).
#[derive(Clone, Debug)]
pub struct Gv2Curve {
    q: u32,
    r: usize,
    edges: usize,
    div_exp: u32,
    ln_counts: Vec<(usize, f64)>,
}

impl Gv2Curve {
    pub fn new(q: u32, r: usize) -> Result<Gv2Curve> {
        check_q(q)?;
        if r == 0 {
            return Err(Error::domain("locality must be positive"));
        }
        let (counts, div_exp) = incidence_weight_counts(q, r, IncidenceCount::DeletedVertexPinned);
        let ln_counts = counts
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e, ln_big(c)))
            .collect();
        Ok(Gv2Curve {
            q,
            r,
            edges: counts.len() - 1,
            div_exp,
            ln_counts,
        })
    }

    /// ln g(s) = −m ln q + N ln(1+(q−1)s) + ln Σ_E c_E u^E, u = (1−s)/(1+(q−1)s).
    pub fn ln_g(&self, s: f64) -> f64 {
        let a = 1.0 + (self.q - 1) as f64 * s;
        let ln_u = ((1.0 - s) / a).ln();
        let terms: Vec<f64> = self
            .ln_counts
            .iter()
            .map(|&(e, lc)| if e == 0 { lc } else { lc + e as f64 * ln_u })
            .collect();
        let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lse = m + terms.iter().map(|x| (x - m).exp()).sum::<f64>().ln();
        -(self.div_exp as f64) * (self.q as f64).ln() + self.edges as f64 * a.ln() + lse
    }

    fn objective(&self, delta: f64, x: f64) -> f64 {
        let s = x.exp();
        (self.ln_g(s) / self.edges as f64 - delta * x) / (self.q as f64).ln()
    }

    pub fn point(&self, delta: f64) -> Result<AsymptoticPoint> {
        check_delta(delta)?;
        let plateau = self.r as f64 / (self.r + 2) as f64;
        let (x, v) = grid_then_golden(|x| self.objective(delta, x), (1e-12f64).ln(), 0.0, 10_000, 1e-12);
        let value = (plateau - v).clamp(0.0, plateau);
        let mut p = AsymptoticPoint::plain(BoundName::Gv2, Some(self.q), self.r, 2, delta, value);
        p.aux1 = Some(x.exp());
        Ok(p)
    }
}

pub fn gv2_asym(r: usize, delta: f64, q: u32) -> Result<AsymptoticPoint> {
    Gv2Curve::new(q, r)?.point(delta)
}

/// Samples each requested bound on δ = 0, step, 2·step, …, 1; rows sorted by
/// (bound, δ).
pub fn emit_curves(bounds: &[BoundName], q: u32, r: usize, t: usize, step: f64) -> Result<Vec<AsymptoticPoint>> {
    if !(step > 0.0 && step <= 0.1) {
        return Err(Error::domain(format!("grid step {step} outside (0, 0.1]")));
    }
    check_q(q)?;
    if r == 0 {
        return Err(Error::domain("locality must be positive"));
    }
    let count = (1.0 / step + 1e-9).floor() as usize;
    let mut deltas: Vec<f64> = (0..=count).map(|i| (i as f64 * step).min(1.0)).collect();
    if *deltas.last().expect("non-empty") < 1.0 - 1e-12 {
        deltas.push(1.0);
    }
    let mut names = bounds.to_vec();
    names.sort();
    names.dedup();
    let mut out = Vec::new();
    for name in names {
        let gv2 = if name == BoundName::Gv2 { Some(Gv2Curve::new(q, r)?) } else { None };
        if name == BoundName::Expander {
            expander::check_params(r, t)?;
        }
        let rows = par::map_indexed(deltas.len(), |i| {
            let d = deltas[i];
            let p = |v: f64| AsymptoticPoint::plain(name, Some(q), r, t, d, v);
            Ok(match name {
                BoundName::Gv => gv_asym(r, d, q)?,
                BoundName::Gv2 => gv2.as_ref().expect("prepared").point(d)?,
                BoundName::Singleton => p(singleton_asym(r, d)?),
                BoundName::Plotkin => p(plotkin_asym(r, d, q)?),
                BoundName::Lp => {
                    let (v, tau) = lp_asym(r, d, q)?;
                    AsymptoticPoint { aux1: Some(tau), ..p(v) }
                }
                BoundName::Sa => p(sa_asym(r, t, d)?),
                BoundName::At1 => p(at1_asym(r, t, d)?),
                BoundName::Expander => expander::expander_rate_at(r, t, d)?,
            })
        });
        for row in rows {
            out.push(row?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_values() {
        assert!((hq(0.5, 2).unwrap() - 1.0).abs() < 1e-15);
        assert!((hq(2.0 / 3.0, 3).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(hq(0.0, 5).unwrap(), 0.0);
        assert!(hq(1.2, 2).is_err());
        for q in [2, 3, 4, 7] {
            assert!((fq(0.0, q).unwrap() - 1.0).abs() < 1e-12);
            assert!(fq(theta(q), q).unwrap().abs() < 1e-6);
        }
        assert!(fq(0.9, 2).is_err());
    }

    #[test]
    fn simple_curves() {
        assert_eq!(singleton_asym(3, 0.0).unwrap(), 0.75);
        assert_eq!(plotkin_asym(3, 0.5, 2).unwrap(), 0.0);
        assert!((sa_asym(2, 2, 0.0).unwrap() - 4.0 / 7.0).abs() < 1e-15);
        assert!((at1_asym(2, 2, 0.0).unwrap() - 0.6).abs() < 1e-15);
        for r in 1..6 {
            let s = singleton_asym(r, 0.3).unwrap();
            assert!((sa_asym(r, 1, 0.3).unwrap() - s).abs() < 1e-15);
            assert!((at1_asym(r, 1, 0.3).unwrap() - s).abs() < 1e-15);
        }
        assert_eq!(sa_asym(3, 2, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn lp_sits_below_singleton_and_plotkin() {
        for i in 1..50 {
            let d = i as f64 / 100.0;
            let (lp, _) = lp_asym(3, d, 2).unwrap();
            assert!(lp <= singleton_asym(3, d).unwrap() + 1e-12);
            assert!(lp <= plotkin_asym(3, d, 2).unwrap() + 1e-12);
        }
        assert!((lp_asym(3, 0.0, 2).unwrap().0 - 0.75).abs() < 1e-12);
        assert_eq!(lp_asym(3, 0.6, 2).unwrap().0, 0.0);
    }

    #[test]
    fn lp_matches_dense_scan() {
        for (q, r, d) in [(2, 3, 0.1), (2, 2, 0.3), (4, 3, 0.2), (3, 1, 0.05)] {
            let (v, _) = lp_asym(r, d, q).unwrap();
            let rf = r as f64;
            let scan = (0..=200_000)
                .map(|i| {
                    let tau = i as f64 / 200_000.0 / (rf + 1.0);
                    let rest = 1.0 - tau * (rf + 1.0);
                    if rest <= 0.0 {
                        tau * rf
                    } else {
                        tau * rf + rest * fq_ext(d / rest, q)
                    }
                })
                .fold(f64::INFINITY, f64::min);
            assert!(v <= scan + 1e-12 && scan - v < 1e-8, "{q} {r} {d}: {v} vs {scan}");
        }
    }

    #[test]
    fn slope_is_increasing() {
        for q in [2, 3, 4, 8, 16] {
            for r in 1..=8 {
                let mut prev = -1.0;
                for i in 1..=2000 {
                    let f = gv_slope(q, r, i as f64 / 1000.0);
                    assert!(f > prev, "q={q} r={r} i={i}");
                    prev = f;
                }
                assert!((gv_slope(q, r, 1.0) - theta(q)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn gv_endpoints() {
        for q in [2, 3, 4] {
            for r in 1..=6 {
                let plateau = r as f64 / (r + 1) as f64;
                let low = gv_asym(r, 1e-9, q).unwrap().value;
                assert!(low <= plateau && low >= plateau - 1e-6);
                assert!(gv_asym(r, theta(q), q).unwrap().value <= 1e-9);
            }
        }
    }

    #[test]
    fn gv2_endpoints() {
        for q in [2, 3] {
            for r in 1..=4 {
                let plateau = r as f64 / (r + 2) as f64;
                let c = Gv2Curve::new(q, r).unwrap();
                let low = c.point(1e-9).unwrap().value;
                assert!(low <= plateau && low >= plateau - 1e-6, "{q} {r} {low}");
                assert!(c.point(theta(q)).unwrap().value <= 1e-9);
                assert!((c.ln_g(1.0) / c.edges as f64 / (q as f64).ln() - plateau).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn curves_are_sorted_and_complete() {
        let rows = emit_curves(&[BoundName::Singleton, BoundName::Gv], 2, 3, 1, 0.1).unwrap();
        assert_eq!(rows.len(), 22);
        assert_eq!(rows[0].bound, BoundName::Gv);
        assert_eq!(rows[21].delta, 1.0);
        assert!(emit_curves(&[], 2, 3, 1, 0.1).unwrap().is_empty());
        assert!(emit_curves(&[BoundName::Gv], 2, 3, 1, 0.2).is_err());
        assert_eq!("gv2".parse::<BoundName>().unwrap(), BoundName::Gv2);
    }
}
