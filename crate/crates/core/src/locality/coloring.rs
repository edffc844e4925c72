//! Expansion ratios and the random-permutation coloring experiment.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::closure::RecoveryGraph;
use crate::error::{Error, Result};
use crate::par;
use crate::rng::substream;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// e_t = Σ_{i=0}^t r^{−i} = (r^{t+1} − 1)/(r^{t+1} − r^t); equals t + 1 for r = 1.
pub fn e_ratio(r: u64, t: u32) -> BigRational {
    assert!(r >= 1, "r must be positive");
    let r = BigInt::from(r);
    (0..=t).fold(BigRational::zero(), |acc, i| {
        acc + BigRational::new(BigInt::one(), r.pow(i))
    })
}

/// Checks ⌊m/r^t⌋ r^t e_t + Σ_{i<t} α_i r^i e_i = Σ_{i=0}^t ⌊m/r^i⌋, where
/// α_i are the base-r digits of m.
pub fn floor_identity_check(m: u64, r: u64, t: u32) -> bool {
    assert!(r >= 2, "base must be at least 2");
    let big_r = BigInt::from(r);
    let rt = big_r.pow(t);
    let m_big = BigInt::from(m);
    let mut lhs = BigRational::from_integer(&m_big / &rt * &rt) * e_ratio(r, t);
    let mut rest = m;
    for i in 0..t {
        let alpha = rest % r;
        rest /= r;
        lhs += BigRational::from_integer(BigInt::from(alpha) * big_r.pow(i)) * e_ratio(r, i);
    }
    let rhs: BigInt = (0..=t).map(|i| &m_big / big_r.pow(i)).sum();
    lhs == BigRational::from_integer(rhs)
}

/// 1 − 1/Π_{j=1}^t (1 + 1/(jr)).
pub fn uniform_colored_fraction(r: u64, t: u64) -> BigRational {
    let prod = (1..=t).fold(BigRational::one(), |acc, j| {
        acc * rat((j * r + 1) as i64, (j * r) as i64)
    });
    BigRational::one() - prod.recip()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ColoringReport {
    pub trials: usize,
    pub seed: u64,
    /// Mean over trials of |U|/n.
    pub mean_fraction: f64,
    /// Standard error of the mean.
    pub std_error: f64,
    /// Exact expectation of |U|/n for this graph.
    pub expected_fraction: f64,
    /// 1 − 1/Π(1 + 1/(jr)) when all sets have the same size r.
    pub uniform_formula: Option<f64>,
    /// Sampled subsets U' ⊆ U checked for a vertex missing a color.
    pub probes_run: usize,
    /// Probes where every vertex of U' saw all t colors inside U'.
    pub probe_failures: usize,
}

impl ColoringReport {
    /// |mean − expected| in units of the standard error.
    pub fn z_score(&self) -> f64 {
        if self.std_error == 0.0 {
            if (self.mean_fraction - self.expected_fraction).abs() < 1e-12 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.mean_fraction - self.expected_fraction).abs() / self.std_error
        }
    }
}

/// Probability that v beats all members of at least one of its sets under a
/// uniform random order, by inclusion–exclusion over the (disjoint) sets.
fn colored_probability(sets: &[Vec<usize>]) -> BigRational {
    let t = sets.len();
    let mut p = BigRational::zero();
    for mask in 1u32..(1 << t) {
        let size: usize = (0..t).filter(|&j| mask >> j & 1 == 1).map(|j| sets[j].len()).sum();
        let term = rat(1, size as i64 + 1);
        if mask.count_ones() % 2 == 1 {
            p += term;
        } else {
            p -= term;
        }
    }
    p
}

/// Draws `trials` uniform orders τ. A vertex v joins U when τ(v) exceeds
/// τ on all of some recovering set, and takes the first such color. Each
/// trial also samples `probes` random subsets U' ⊆ U and checks that some
/// vertex of U' has a recovering set disjoint from U'.
pub fn permutation_coloring_experiment(
    g: &RecoveryGraph,
    trials: usize,
    seed: u64,
    probes: usize,
) -> Result<ColoringReport> {
    if trials == 0 {
        return Err(Error::domain("the experiment needs at least one trial"));
    }
    let n = g.n();
    let t = g.t();
    if t == 0 || t > 16 {
        return Err(Error::domain("between 1 and 16 colors are supported"));
    }
    let outcomes = par::map_indexed(trials, |trial| {
        let mut rng = substream(seed, "coloring", trial as u64);
        let mut tau: Vec<usize> = (0..n).collect();
        tau.shuffle(&mut rng);
        let in_u: Vec<bool> = (0..n)
            .map(|v| g.sets(v).iter().any(|s| s.iter().all(|&m| tau[v] > tau[m])))
            .collect();
        let members: Vec<usize> = (0..n).filter(|&v| in_u[v]).collect();
        let mut failures = 0;
        let mut run = 0;
        for _ in 0..probes {
            let sub: Vec<bool> = {
                let mut s = vec![false; n];
                for &v in &members {
                    s[v] = rng.gen_bool(0.5);
                }
                s
            };
            if !sub.iter().any(|&x| x) {
                continue;
            }
            run += 1;
            let has_missing = (0..n)
                .filter(|&v| sub[v])
                .any(|v| g.sets(v).iter().any(|s| s.iter().all(|&m| !sub[m])));
            if !has_missing {
                failures += 1;
            }
        }
        (members.len() as f64 / n as f64, run, failures)
    });
    let mean = outcomes.iter().map(|o| o.0).sum::<f64>() / trials as f64;
    let var = if trials > 1 {
        outcomes.iter().map(|o| (o.0 - mean).powi(2)).sum::<f64>() / (trials - 1) as f64
    } else {
        0.0
    };
    let expected = (0..n)
        .map(|v| colored_probability(g.sets(v)))
        .fold(BigRational::zero(), |a, b| a + b)
        / BigRational::from_integer(BigInt::from(n));
    let sizes: Vec<usize> = (0..n).flat_map(|v| g.sets(v).iter().map(Vec::len)).collect();
    let uniform_formula = match sizes.first() {
        Some(&r) if sizes.iter().all(|&s| s == r) => {
            uniform_colored_fraction(r as u64, t as u64).to_f64()
        }
        _ => None,
    };
    Ok(ColoringReport {
        trials,
        seed,
        mean_fraction: mean,
        std_error: (var / trials as f64).sqrt(),
        expected_fraction: expected.to_f64().unwrap_or(f64::NAN),
        uniform_formula,
        probes_run: outcomes.iter().map(|o| o.1).sum(),
        probe_failures: outcomes.iter().map(|o| o.2).sum(),
    })
}
