//! Finite-length bounds, all in exact integer or rational arithmetic.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};
use serde::Serialize;

use super::asymptotic::gv_minimizer;
use crate::enumerator::binomial;
use crate::error::{Error, Result};

/// Parameters (n, k, r, t) over an alphabet of size q, with an optional
/// distance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub t: usize,
    pub q: u32,
    pub d: Option<usize>,
}

impl CodeParams {
    pub fn validate(&self) -> Result<()> {
        if !(1 <= self.r && self.r <= self.k && self.k <= self.n) {
            return Err(Error::domain(format!(
                "need 1 <= r <= k <= n (got n={}, k={}, r={})",
                self.n, self.k, self.r
            )));
        }
        if self.t < 1 || self.q < 2 {
            return Err(Error::domain("need t >= 1 and q >= 2"));
        }
        Ok(())
    }
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// n − k − ⌈k/r⌉ + 2.
pub fn singleton_lrc(n: usize, k: usize, r: usize) -> Result<i64> {
    if !(1 <= r && r <= k && k <= n) {
        return Err(Error::domain(format!("need 1 <= r <= k <= n (got n={n}, k={k}, r={r})")));
    }
    Ok(n as i64 - k as i64 - ceil_div(k, r) as i64 + 2)
}

/// 1/Π_{j=1}^t (1 + 1/(jr)).
pub fn rate_bound_t(r: usize, t: usize) -> BigRational {
    assert!(r >= 1, "locality must be positive");
    (1..=t)
        .fold(BigRational::one(), |acc, j| {
            acc * BigRational::new(BigInt::from(j * r + 1), BigInt::from(j * r))
        })
        .recip()
}

/// n − Σ_{i=0}^t ⌊(k−1)/r^i⌋.
pub fn distance_bound_t(n: usize, k: usize, r: usize, t: usize) -> Result<i64> {
    if k < 1 || r < 1 {
        return Err(Error::domain("need k >= 1 and r >= 1"));
    }
    let mut sum = 0u64;
    let mut pow = 1u64;
    for _ in 0..=t {
        sum += (k as u64 - 1) / pow;
        pow = pow.saturating_mul(r as u64);
    }
    Ok(n as i64 - sum as i64)
}

/// n − k + 2 − ⌈(t(k−1)+1)/(t(r−1)+1)⌉.
pub fn rpdv_bound(n: usize, k: usize, r: usize, t: usize) -> Result<i64> {
    if k < 1 || r < 1 {
        return Err(Error::domain("need k >= 1 and r >= 1"));
    }
    let num = t * (k - 1) + 1;
    let den = t * (r - 1) + 1;
    Ok(n as i64 - k as i64 + 2 - ceil_div(num, den) as i64)
}

/// Upper bounds on k_q(n, d) = log_q M_q(n, d), rounded down (codes have
/// integral dimension in the shortening argument, so the floor loses
/// nothing).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KqOracle {
    Singleton,
    Plotkin,
    SpherePacking,
    /// Explicit values for (n, d); anything missing is an error.
    Table(BTreeMap<(usize, usize), usize>),
}

impl KqOracle {
    pub fn name(&self) -> &'static str {
        match self {
            KqOracle::Singleton => "singleton",
            KqOracle::Plotkin => "plotkin",
            KqOracle::SpherePacking => "sphere-packing",
            KqOracle::Table(_) => "table",
        }
    }

    /// ⌊k_q(n, d)⌋ upper bound; 0 when n < d.
    pub fn kq_floor(&self, n: i64, d: usize, q: u32) -> Result<usize> {
        if n < d as i64 || n <= 0 {
            return Ok(0);
        }
        let n = n as usize;
        Ok(match self {
            KqOracle::Singleton => n + 1 - d,
            KqOracle::Plotkin => plotkin_kq(n, d, q),
            KqOracle::SpherePacking => sphere_packing_kq(n, d, q),
            KqOracle::Table(map) => *map.get(&(n, d)).ok_or(Error::OracleDomain { n, d })?,
        })
    }
}

/// Largest k with q^k ≤ x.
fn ilog(x: &BigUint, q: u32) -> usize {
    let q = BigUint::from(q);
    let mut k = 0;
    let mut p = q.clone();
    while &p <= x {
        k += 1;
        p *= &q;
    }
    k
}

/// M ≤ q^{n−m} ⌊qd/(qd − (q−1)m)⌋ with m the longest length (≤ n) on which
/// d exceeds the average weight (q−1)m/q.
fn plotkin_kq(n: usize, d: usize, q: u32) -> usize {
    let (qd, qm) = ((q as usize) * d, (q - 1) as usize);
    let m = if qm * n < qd { n } else { (qd - 1) / qm };
    let m_bound = BigUint::from(qd / (qd - qm * m));
    n - m + ilog(&m_bound, q)
}

/// Largest k with q^k V_q(n, ⌊(d−1)/2⌋) ≤ q^n.
fn sphere_packing_kq(n: usize, d: usize, q: u32) -> usize {
    let e = (d - 1) / 2;
    let qm = BigUint::from(q - 1);
    let vol: BigUint = (0..=e).map(|i| binomial(n, i) * Pow::pow(&qm, i as u32)).sum();
    let total = Pow::pow(&BigUint::from(q), n as u32);
    ilog(&(total / vol), q)
}

/// Largest k₀ with k₀ ≤ sr + k_q(n − s(r+1), d) for every
/// s ∈ [1, min(⌈n/(r+1)⌉, ⌈k₀/r⌉)], found by scanning k₀ downward from n.
pub fn shortening_bound(n: usize, d: usize, r: usize, q: u32, oracle: &KqOracle) -> Result<usize> {
    if d < 1 || d > n || r < 1 || q < 2 {
        return Err(Error::domain(format!("need 1 <= d <= n, r >= 1, q >= 2 (got n={n}, d={d}, r={r})")));
    }
    let s_cap = ceil_div(n, r + 1);
    let mut terms = Vec::with_capacity(s_cap);
    for s in 1..=s_cap {
        terms.push(s * r + oracle.kq_floor(n as i64 - (s * (r + 1)) as i64, d, q)?);
    }
    for k0 in (0..=n).rev() {
        let s_max = s_cap.min(ceil_div(k0, r));
        if terms[..s_max].iter().all(|&bound| k0 <= bound) {
            return Ok(k0);
        }
    }
    unreachable!("k0 = 0 always passes")
}

/// Denominator of the rational point at which the finite GV condition is
/// checked exactly.
pub const GV_DENOMINATOR: u64 = 1_000_000;

/// Distance certified by the finite GV argument, with the point s = a/D at
/// which the certificate was checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GvCertificate {
    pub d: usize,
    pub s_numer: u64,
    pub s_denom: u64,
}

/// d q^k P(a,D)^m D^d < q^n a^d D^n with m = n/(r+1) and
/// P(a,D) = (D + (q−1)a)^{r+1} + (q−1)(D − a)^{r+1}: the condition
/// d q^{k − nr/(r+1)} b(s)^m / s^d < 1 at s = a/D with denominators cleared.
fn gv_condition(n: usize, k: usize, r: usize, q: u32, d: usize, a: u64) -> bool {
    let big_d = BigUint::from(GV_DENOMINATOR);
    let a_big = BigUint::from(a);
    let qm = BigUint::from(q - 1);
    let e = (r + 1) as u32;
    let p = Pow::pow(&(&big_d + &qm * &a_big), e) + &qm * Pow::pow(&(&big_d - &a_big), e);
    let qb = BigUint::from(q);
    let m = (n / (r + 1)) as u32;
    let lhs = BigUint::from(d) * Pow::pow(&qb, k as u32) * Pow::pow(&p, m) * Pow::pow(&big_d, d as u32);
    let rhs = Pow::pow(&qb, n as u32) * Pow::pow(&a_big, d as u32) * Pow::pow(&big_d, n as u32);
    lhs < rhs
}

/// Largest d < n for which the finite GV condition holds at the rounded
/// minimizer; 1 when none does.
pub fn gv_finite_certificate(n: usize, k: usize, r: usize, q: u32) -> Result<GvCertificate> {
    if q < 2 || r < 1 || n % (r + 1) != 0 || k <= r || k * (r + 1) >= r * n {
        return Err(Error::domain(format!(
            "need (r+1) | n and r < k < rn/(r+1) (got n={n}, k={k}, r={r})"
        )));
    }
    for d in (1..n).rev() {
        let s = gv_minimizer(q, r, d as f64 / n as f64);
        let a = ((s * GV_DENOMINATOR as f64).round() as u64).clamp(1, GV_DENOMINATOR);
        if gv_condition(n, k, r, q, d, a) {
            return Ok(GvCertificate {
                d,
                s_numer: a,
                s_denom: GV_DENOMINATOR,
            });
        }
    }
    Ok(GvCertificate {
        d: 1,
        s_numer: GV_DENOMINATOR,
        s_denom: GV_DENOMINATOR,
    })
}

pub fn gv_finite(n: usize, k: usize, r: usize, q: u32) -> Result<usize> {
    Ok(gv_finite_certificate(n, k, r, q)?.d)
}

/// Largest d with Σ_{i=0}^{d−2} C(n−1, i)(q−1)^i < q^{n−k−⌈n/(r+1)⌉}.
pub fn gv_classic_lrc(n: usize, k: usize, r: usize, q: u32) -> Result<usize> {
    if n < 1 || k > n || r < 1 || q < 2 {
        return Err(Error::domain(format!("need 1 <= k <= n, r >= 1, q >= 2 (got n={n}, k={k}, r={r})")));
    }
    let exp = n as i64 - k as i64 - ceil_div(n, r + 1) as i64;
    if exp <= 0 {
        return Ok(1);
    }
    let limit = Pow::pow(&BigUint::from(q), exp as u32);
    let qm = BigUint::from(q - 1);
    let mut sum = BigUint::zero();
    let mut best = 1;
    for d in 2..=n {
        sum += binomial(n - 1, d - 2) * Pow::pow(&qm, (d - 2) as u32);
        if sum >= limit {
            break;
        }
        best = d;
    }
    Ok(best)
}

/// Π = Π_{j=1}^t (1 + 1/(jr)) compared with the r-th roots of t + 1 and
/// (t + 1)(1 + 1/r)^r.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Envelope {
    pub r: usize,
    pub t: usize,
    /// (t+1)^{−1/r}
    pub rate_root: f64,
    /// 1/Π
    #[serde(serialize_with = "crate::report::ser_ratio")]
    pub rate_product: BigRational,
    /// Π^r ≥ t + 1
    pub lower_holds: bool,
    /// Π^r ≤ (t + 1)(1 + 1/r)^r
    pub upper_holds: bool,
}

pub fn er_envelope(r: usize, t: usize) -> Result<Envelope> {
    if r < 1 {
        return Err(Error::domain("locality must be positive"));
    }
    let prod = rate_bound_t(r, t).recip();
    let rp = Pow::pow(&prod, r as u32);
    let t1 = BigRational::from_integer(BigInt::from(t + 1));
    let step = BigRational::new(BigInt::from(r + 1), BigInt::from(r));
    let upper = &t1 * Pow::pow(&step, r as u32);
    Ok(Envelope {
        r,
        t,
        rate_root: ((t + 1) as f64).powf(-1.0 / r as f64),
        rate_product: prod.recip(),
        lower_holds: rp >= t1,
        upper_holds: rp <= upper,
    })
}

/// ⌈x⌉ for a non-negative rational, used when reporting fractional bounds.
pub fn ceil_ratio(x: &BigRational) -> BigInt {
    let (q, r) = x.numer().div_rem(x.denom());
    if r.is_zero() || x < &BigRational::zero() {
        q
    } else {
        q + 1
    }
}

/// k ≤ n · rate_bound_t(r, t), as the largest admissible dimension.
pub fn max_dimension(n: usize, r: usize, t: usize) -> usize {
    let v = BigRational::from_integer(BigInt::from(n)) * rate_bound_t(r, t);
    v.floor().to_integer().to_usize().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn singleton_examples() {
        assert_eq!(singleton_lrc(6, 3, 2).unwrap(), 3);
        assert_eq!(singleton_lrc(8, 4, 2).unwrap(), 4);
        assert_eq!(singleton_lrc(10, 4, 4).unwrap(), 7);
        assert!(singleton_lrc(4, 5, 2).is_err());
    }

    #[test]
    fn rate_examples() {
        assert_eq!(rate_bound_t(5, 1), ratio(5, 6));
        assert_eq!(rate_bound_t(2, 2), ratio(8, 15));
        assert_eq!(rate_bound_t(2, 3), ratio(16, 35));
        assert_eq!(max_dimension(15, 2, 2), 8);
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance_bound_t(6, 3, 2, 2).unwrap(), 3);
        assert_eq!(rpdv_bound(6, 3, 2, 2).unwrap(), 3);
        assert_eq!(distance_bound_t(9, 1, 3, 4).unwrap(), 9);
        assert_eq!(rpdv_bound(9, 1, 3, 4).unwrap(), 9);
        for n in 1..=40 {
            for k in 1..=n {
                for r in 1..=k {
                    let s = singleton_lrc(n, k, r).unwrap();
                    assert_eq!(distance_bound_t(n, k, r, 1).unwrap(), s);
                    assert_eq!(rpdv_bound(n, k, r, 1).unwrap(), s);
                }
            }
        }
    }

    #[test]
    fn oracles() {
        let s = KqOracle::Singleton;
        assert_eq!(s.kq_floor(10, 3, 2).unwrap(), 8);
        assert_eq!(s.kq_floor(2, 3, 2).unwrap(), 0);
        // binary Plotkin: M(4, 3) ≤ 2, M(7, 4) ≤ 16 via shortening
        assert_eq!(KqOracle::Plotkin.kq_floor(4, 3, 2).unwrap(), 1);
        assert_eq!(KqOracle::Plotkin.kq_floor(8, 4, 2).unwrap(), 4);
        // Hamming bound is met by the [7,4] code
        assert_eq!(KqOracle::SpherePacking.kq_floor(7, 3, 2).unwrap(), 4);
        let table = KqOracle::Table(BTreeMap::from([((5, 2), 4)]));
        assert_eq!(table.kq_floor(5, 2, 2).unwrap(), 4);
        assert!(matches!(table.kq_floor(6, 2, 2), Err(Error::OracleDomain { n: 6, d: 2 })));
        for oracle in [KqOracle::Singleton, KqOracle::Plotkin, KqOracle::SpherePacking] {
            for q in [2, 3, 4] {
                for n in 1..30i64 {
                    for d in 1..n as usize {
                        let v = oracle.kq_floor(n, d, q).unwrap();
                        assert!(v >= oracle.kq_floor(n, d + 1, q).unwrap());
                        assert!(v <= oracle.kq_floor(n + 1, d, q).unwrap());
                        assert!(v <= n as usize);
                    }
                }
            }
        }
    }

    #[test]
    fn shortening_examples() {
        assert_eq!(shortening_bound(12, 1, 2, 2, &KqOracle::Singleton).unwrap(), 8);
        // never above the dimension allowed by the Singleton-type bound once
        // shortening by one block still leaves d coordinates
        for n in 2..=40 {
            for d in 1..=n {
                for r in 1..=5 {
                    if n < d + r + 1 {
                        continue;
                    }
                    let k = shortening_bound(n, d, r, 2, &KqOracle::Singleton).unwrap();
                    let implied = (1..=n)
                        .filter(|&k| singleton_lrc(n, k, r.min(k)).unwrap() >= d as i64)
                        .max()
                        .unwrap_or(0);
                    assert!(k <= implied, "{n} {d} {r}: {k} > {implied}");
                }
            }
        }
        let t = KqOracle::Table(BTreeMap::new());
        assert!(shortening_bound(12, 3, 2, 2, &t).is_err());
    }

    #[test]
    fn shortening_brute_force() {
        for n in 1..=20 {
            for d in 1..=n {
                for r in 1..=3 {
                    let o = KqOracle::Plotkin;
                    let got = shortening_bound(n, d, r, 2, &o).unwrap();
                    let ok = |k0: usize| {
                        let s_max = n.div_ceil(r + 1).min(k0.div_ceil(r));
                        (1..=s_max).all(|s| {
                            k0 <= s * r + o.kq_floor(n as i64 - (s * (r + 1)) as i64, d, 2).unwrap()
                        })
                    };
                    assert!(ok(got));
                    assert!(((got + 1)..=n).all(|k0| !ok(k0)));
                }
            }
        }
    }

    #[test]
    fn classic_gv_examples() {
        assert_eq!(gv_classic_lrc(8, 4, 3, 2).unwrap(), 2);
        assert_eq!(gv_classic_lrc(16, 8, 3, 2).unwrap(), 2);
        assert_eq!(gv_classic_lrc(8, 6, 3, 2).unwrap(), 1);
    }

    #[test]
    fn finite_gv_matches_scan() {
        // independent float scan over s for each d
        let expected = [
            ((8, 4, 3, 2), 1),
            ((24, 12, 3, 2), 1),
            ((48, 24, 3, 2), 3),
            ((96, 48, 3, 2), 6),
            ((120, 60, 3, 2), 7),
            ((200, 100, 3, 2), 13),
            ((96, 30, 2, 2), 11),
            ((60, 20, 2, 3), 9),
            ((100, 40, 4, 2), 11),
        ];
        for ((n, k, r, q), d) in expected {
            assert_eq!(gv_finite(n, k, r, q).unwrap(), d, "{n} {k} {r} {q}");
        }
        assert!(gv_finite(10, 4, 3, 2).is_err());
        assert!(gv_finite(8, 6, 3, 2).is_err());
        let cert = gv_finite_certificate(120, 60, 3, 2).unwrap();
        assert!(gv_condition(120, 60, 3, 2, cert.d, cert.s_numer));
    }

    #[test]
    fn envelope() {
        let e = er_envelope(2, 3).unwrap();
        assert_eq!(e.rate_product, ratio(16, 35));
        assert!((e.rate_root - 0.5).abs() < 1e-15);
        assert!(e.lower_holds && e.upper_holds);
        let e = er_envelope(1, 4).unwrap();
        assert_eq!(e.rate_product, ratio(1, 5));
        let e = er_envelope(3, 0).unwrap();
        assert!(e.lower_holds && e.upper_holds);
        assert_eq!(ceil_ratio(&ratio(7, 2)), BigInt::from(4));
    }
}
