//! Biregular bipartite graphs from the configuration model and exhaustive
//! expansion checks.

use rand::seq::SliceRandom;
use serde::Serialize;

use crate::code::{binomial_u64, Combinations};
use crate::error::{Error, Result};
use crate::rng::substream;

/// Resampling attempts before giving up.
pub const MAX_RETRIES: usize = 10_000;
/// Largest left side accepted by the exhaustive expansion test.
pub const EXPANSION_MAX_LEFT: usize = 30;
/// Cap on the number of subsets the expansion test enumerates.
pub const EXPANSION_SUBSET_CAP_LOG2: u32 = 24;

/// Left vertices have degree t, right vertices degree r + 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BipartiteGraph {
    pub left_n: usize,
    pub right_p: usize,
    pub t: usize,
    pub right_degree: usize,
    /// Sorted right neighbours of each left vertex.
    pub adjacency: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    /// Left neighbours of each right vertex, ascending.
    pub fn right_adjacency(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.right_p];
        for (i, nb) in self.adjacency.iter().enumerate() {
            for &j in nb {
                out[j].push(i);
            }
        }
        out
    }

    /// No two left vertices share two right neighbours.
    pub fn is_four_cycle_free(&self) -> bool {
        let right = self.right_adjacency();
        let mut seen = vec![usize::MAX; self.left_n * self.left_n];
        for (j, lefts) in right.iter().enumerate() {
            for (a, &u) in lefts.iter().enumerate() {
                for &v in &lefts[a + 1..] {
                    let slot = &mut seen[u * self.left_n + v];
                    if *slot != usize::MAX && *slot != j {
                        return false;
                    }
                    *slot = j;
                }
            }
        }
        true
    }

    fn is_simple(&self) -> bool {
        self.adjacency.iter().all(|nb| nb.windows(2).all(|w| w[0] != w[1]))
    }
}

fn configuration(n: usize, t: usize, right_degree: usize, seed: u64, label: &str, attempt: usize) -> BipartiteGraph {
    let p = n * t / right_degree;
    let mut stubs: Vec<usize> = (0..p).flat_map(|j| std::iter::repeat_n(j, right_degree)).collect();
    let mut rng = substream(seed, label, attempt as u64);
    stubs.shuffle(&mut rng);
    let adjacency = stubs
        .chunks(t)
        .map(|c| {
            let mut v = c.to_vec();
            v.sort_unstable();
            v
        })
        .collect();
    BipartiteGraph {
        left_n: n,
        right_p: p,
        t,
        right_degree,
        adjacency,
    }
}

fn check_degrees(n: usize, t: usize, right_degree: usize) -> Result<()> {
    if n == 0 || t == 0 || right_degree == 0 || (n * t) % right_degree != 0 {
        return Err(Error::domain(format!(
            "(r+1) = {right_degree} must divide nt = {}",
            n * t
        )));
    }
    if t > n * t / right_degree {
        return Err(Error::domain("left degree exceeds the number of right vertices"));
    }
    Ok(())
}

/// Configuration-model sample, resampled until it has no multi-edges.
pub fn sample_biregular(n: usize, t: usize, right_degree: usize, seed: u64) -> Result<BipartiteGraph> {
    check_degrees(n, t, right_degree)?;
    (0..MAX_RETRIES)
        .map(|a| configuration(n, t, right_degree, seed, "biregular", a))
        .find(BipartiteGraph::is_simple)
        .ok_or(Error::RetryExhausted(MAX_RETRIES))
}

/// As [`sample_biregular`], additionally rejecting graphs with 4-cycles.
pub fn sample_biregular_four_cycle_free(n: usize, t: usize, right_degree: usize, seed: u64) -> Result<BipartiteGraph> {
    check_degrees(n, t, right_degree)?;
    (0..MAX_RETRIES)
        .map(|a| configuration(n, t, right_degree, seed, "biregular-girth", a))
        .find(|g| g.is_simple() && g.is_four_cycle_free())
        .ok_or(Error::RetryExhausted(MAX_RETRIES))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpanderReport {
    pub gamma: f64,
    pub delta_prime: f64,
    pub is_expander: bool,
    /// A left set T with |T| ≤ δ′n and |N(T)| < γt|T|.
    pub witness: Option<Vec<usize>>,
    pub four_cycle_free: bool,
    pub subsets_checked: u64,
}

/// Checks |N(T)| ≥ γt|T| for every non-empty left set T with |T| ≤ δ′n.
pub fn test_expansion(g: &BipartiteGraph, delta_prime: f64, gamma: f64) -> Result<ExpanderReport> {
    if g.left_n > EXPANSION_MAX_LEFT {
        return Err(Error::TooLarge {
            what: format!("expansion test on {} left vertices", g.left_n),
            cap_log2: EXPANSION_MAX_LEFT as u32,
        });
    }
    let max_size = ((delta_prime * g.left_n as f64) + 1e-9).floor().max(0.0) as usize;
    let max_size = max_size.min(g.left_n);
    let total: u64 = (1..=max_size).map(|s| binomial_u64(g.left_n, s)).sum();
    if total > 1 << EXPANSION_SUBSET_CAP_LOG2 {
        return Err(Error::TooLarge {
            what: "expansion subsets".into(),
            cap_log2: EXPANSION_SUBSET_CAP_LOG2,
        });
    }
    let words = g.right_p.div_ceil(64).max(1);
    let masks: Vec<Vec<u64>> = g
        .adjacency
        .iter()
        .map(|nb| {
            let mut m = vec![0u64; words];
            for &j in nb {
                m[j / 64] |= 1 << (j % 64);
            }
            m
        })
        .collect();
    let mut report = ExpanderReport {
        gamma,
        delta_prime,
        is_expander: true,
        witness: None,
        four_cycle_free: g.is_four_cycle_free(),
        subsets_checked: 0,
    };
    let mut union = vec![0u64; words];
    'sizes: for size in 1..=max_size {
        let need = gamma * g.t as f64 * size as f64 - 1e-9;
        for set in Combinations::new(g.left_n, size) {
            union.iter_mut().for_each(|w| *w = 0);
            for &i in &set {
                for (u, m) in union.iter_mut().zip(&masks[i]) {
                    *u |= m;
                }
            }
            report.subsets_checked += 1;
            let covered: u32 = union.iter().map(|w| w.count_ones()).sum();
            if (covered as f64) < need {
                report.is_expander = false;
                report.witness = Some(set);
                break 'sizes;
            }
        }
    }
    Ok(report)
}
