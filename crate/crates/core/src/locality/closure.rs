//! Recovery graphs and the closure of a vertex set.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::index;
use serde::Serialize;

use super::recovering::LocalityProfile;
use crate::code::{binomial_u64, Combinations, LinearCode};
use crate::error::{Error, Result};
use crate::rng::substream;

/// Exhaustive closure search is used while C(n, budget) stays below this.
pub const EXACT_SEARCH_LIMIT: u64 = 1_000_000;

/// For each vertex, t pairwise disjoint non-empty recovering sets; set l of
/// vertex i carries color l.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecoveryGraph {
    n: usize,
    t: usize,
    sets: Vec<Vec<Vec<usize>>>,
}

impl RecoveryGraph {
    pub fn new(n: usize, sets: Vec<Vec<Vec<usize>>>) -> Result<RecoveryGraph> {
        if sets.len() != n {
            return Err(Error::domain(format!("{} set lists for {n} vertices", sets.len())));
        }
        let t = sets.first().map_or(0, |s| s.len());
        let mut sets = sets;
        for (v, lists) in sets.iter_mut().enumerate() {
            if lists.len() != t {
                return Err(Error::domain(format!(
                    "vertex {v} has {} recovering sets, expected {t}",
                    lists.len()
                )));
            }
            let mut seen = vec![false; n];
            for s in lists.iter_mut() {
                s.sort_unstable();
                if s.is_empty() {
                    return Err(Error::domain(format!("vertex {v} has an empty recovering set")));
                }
                for &u in s.iter() {
                    if u >= n || u == v || seen[u] {
                        return Err(Error::domain(format!(
                            "vertex {v}: sets must be disjoint, in range and exclude the vertex"
                        )));
                    }
                    seen[u] = true;
                }
            }
        }
        Ok(RecoveryGraph { n, t, sets })
    }

    /// The graph whose sets are the certificates of a successful profile.
    pub fn from_profile(profile: &LocalityProfile) -> Result<RecoveryGraph> {
        if let Some(i) = profile.failure {
            return Err(Error::domain(format!(
                "coordinate {i} lacks {} disjoint recovering sets",
                profile.t
            )));
        }
        let sets = profile
            .certificates
            .iter()
            .map(|certs| certs.iter().map(|c| c.set.clone()).collect())
            .collect();
        RecoveryGraph::new(profile.certificates.len(), sets)
    }

    /// Every vertex gets t disjoint sets of exactly r other vertices, drawn
    /// uniformly. Requires n − 1 ≥ tr.
    pub fn random_uniform(n: usize, r: usize, t: usize, seed: u64) -> Result<RecoveryGraph> {
        if r == 0 || t == 0 || n < t * r + 1 {
            return Err(Error::domain(format!(
                "cannot place {t} disjoint sets of size {r} among {n} vertices"
            )));
        }
        let mut rng = substream(seed, "recovery-graph", 0);
        let sets = (0..n)
            .map(|v| {
                let picks: Vec<usize> = index::sample(&mut rng, n - 1, t * r)
                    .into_iter()
                    .map(|u| if u >= v { u + 1 } else { u })
                    .collect();
                picks.chunks(r).map(|c| c.to_vec()).collect()
            })
            .collect();
        RecoveryGraph::new(n, sets)
    }

    /// One color: the vertices 0..=r, each recovered by all the others.
    pub fn single_block(r: usize) -> RecoveryGraph {
        let sets = (0..=r)
            .map(|v| vec![(0..=r).filter(|&u| u != v).collect()])
            .collect();
        RecoveryGraph::new(r + 1, sets).expect("valid block")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn sets(&self, v: usize) -> &[Vec<usize>] {
        &self.sets[v]
    }

    /// Size of the largest recovering set.
    pub fn max_set_size(&self) -> usize {
        self.sets.iter().flatten().map(Vec::len).max().unwrap_or(0)
    }
}

/// Cl(S) together with the order in which vertices were colored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureResult {
    pub closed_set: Vec<usize>,
    /// Seeds in ascending order, then each newly colored vertex.
    pub order: Vec<usize>,
    #[serde(serialize_with = "crate::report::ser_ratio")]
    pub ratio: BigRational,
}

impl ClosureResult {
    pub fn size(&self) -> usize {
        self.closed_set.len()
    }
}

/// Colors S, then repeatedly colors any vertex with a fully colored
/// recovering set. Sweeps run over vertices in ascending order until nothing
/// changes.
pub fn closure(g: &RecoveryGraph, seed_set: &[usize]) -> Result<ClosureResult> {
    if seed_set.is_empty() {
        return Err(Error::domain("closure of the empty set"));
    }
    let mut colored = vec![false; g.n];
    let mut order = Vec::new();
    for &v in seed_set {
        if v >= g.n {
            return Err(Error::domain(format!("vertex {v} out of range")));
        }
        colored[v] = true;
    }
    order.extend((0..g.n).filter(|&v| colored[v]));
    let seeds = order.len();
    loop {
        let mut changed = false;
        for v in 0..g.n {
            if !colored[v] && g.sets[v].iter().any(|s| s.iter().all(|&u| colored[u])) {
                colored[v] = true;
                order.push(v);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let closed_set: Vec<usize> = (0..g.n).filter(|&v| colored[v]).collect();
    let ratio = BigRational::new(BigInt::from(closed_set.len()), BigInt::from(seeds));
    Ok(ClosureResult {
        closed_set,
        order,
        ratio,
    })
}

/// A seed set of size at most `budget` with a large closure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureSearch {
    pub seed_set: Vec<usize>,
    pub result: ClosureResult,
    /// False when the greedy construction was used.
    pub exact: bool,
}

/// Maximizes |Cl(S)| over |S| ≤ budget. Exhaustive while C(n, budget) is at
/// most 10^6 (closure is monotone, so only |S| = budget is scanned);
/// otherwise grows S one vertex at a time, each time adding the vertex with
/// the largest resulting closure.
pub fn best_closure_search(g: &RecoveryGraph, budget: usize) -> Result<ClosureSearch> {
    if budget == 0 {
        return Err(Error::domain("closure search needs a budget of at least 1"));
    }
    let b = budget.min(g.n);
    if binomial_u64(g.n, b) <= EXACT_SEARCH_LIMIT {
        let mut best: Option<(Vec<usize>, ClosureResult)> = None;
        for s in Combinations::new(g.n, b) {
            let res = closure(g, &s)?;
            if best.as_ref().is_none_or(|(_, r)| res.size() > r.size()) {
                let full = res.size() == g.n;
                best = Some((s, res));
                if full {
                    break;
                }
            }
        }
        let (seed_set, result) = best.expect("at least one subset");
        return Ok(ClosureSearch {
            seed_set,
            result,
            exact: true,
        });
    }
    let mut seed: Vec<usize> = Vec::new();
    let mut covered = vec![false; g.n];
    while seed.len() < b {
        let mut pick: Option<(usize, usize)> = None;
        for v in (0..g.n).filter(|&v| !covered[v]) {
            let mut trial = seed.clone();
            trial.push(v);
            let size = closure(g, &trial)?.size();
            if pick.is_none_or(|(_, s)| size > s) {
                pick = Some((v, size));
            }
        }
        let Some((v, _)) = pick else { break };
        seed.push(v);
        for u in closure(g, &seed)?.closed_set {
            covered[u] = true;
        }
    }
    seed.sort_unstable();
    let result = closure(g, &seed)?;
    Ok(ClosureSearch {
        seed_set: seed,
        result,
        exact: false,
    })
}

/// Upper bound n − |Cl(S)| on the distance, valid when |S| ≤ k − 1 and the
/// graph's sets are recovering sets of `code`. None when |S| ≥ k.
pub fn distance_certificate(
    code: &LinearCode,
    g: &RecoveryGraph,
    seed_set: &[usize],
) -> Result<Option<usize>> {
    if g.n != code.n() {
        return Err(Error::domain("recovery graph and code lengths differ"));
    }
    if seed_set.len() + 1 > code.k() {
        return Ok(None);
    }
    if seed_set.is_empty() {
        return Ok(Some(code.n()));
    }
    Ok(Some(code.n() - closure(g, seed_set)?.size()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::shortened_hamming_6_3_parity;
    use crate::locality::recovering::locality_profile;
    use num_traits::One;

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    fn hamming6_graph() -> (LinearCode, RecoveryGraph) {
        let c = LinearCode::from_parity(&shortened_hamming_6_3_parity());
        let g = RecoveryGraph::from_profile(&locality_profile(&c, 2, 2).unwrap()).unwrap();
        (c, g)
    }

    #[test]
    fn closure_of_everything_is_itself() {
        let (_, g) = hamming6_graph();
        let all: Vec<usize> = (0..6).collect();
        let res = closure(&g, &all).unwrap();
        assert_eq!(res.closed_set, all);
        assert!(res.ratio.is_one());
    }

    #[test]
    fn block_is_completed_by_parity() {
        let g = RecoveryGraph::single_block(3);
        let res = closure(&g, &[0, 2, 3]).unwrap();
        assert_eq!(res.closed_set, vec![0, 1, 2, 3]);
        assert_eq!(res.order, vec![0, 2, 3, 1]);
        let best = best_closure_search(&g, 3).unwrap();
        assert_eq!(best.result.ratio, ratio(4, 3));
        assert!(best.exact);
    }

    #[test]
    fn hamming6_certificate_is_tight() {
        let (c, g) = hamming6_graph();
        // some 2-subset closes to at least 3 vertices
        let best = best_closure_search(&g, 2).unwrap();
        assert!(best.result.size() >= 3);
        assert_eq!(distance_certificate(&c, &g, &best.seed_set).unwrap(), Some(3));
        assert_eq!(distance_certificate(&c, &g, &[0, 1, 2]).unwrap(), None);
    }

    #[test]
    fn budget_beyond_n_closes_everything() {
        let g = RecoveryGraph::random_uniform(10, 2, 2, 3).unwrap();
        let best = best_closure_search(&g, 12).unwrap();
        assert_eq!(best.result.size(), 10);
    }

    #[test]
    fn greedy_search_on_large_graphs() {
        let g = RecoveryGraph::random_uniform(60, 2, 1, 5).unwrap();
        let best = best_closure_search(&g, 10).unwrap();
        assert!(!best.exact);
        assert_eq!(best.seed_set.len(), 10);
        assert!(best.result.size() >= 10);
    }

    #[test]
    fn rejects_bad_graphs() {
        assert!(RecoveryGraph::new(2, vec![vec![vec![1]], vec![vec![1]]]).is_err());
        assert!(RecoveryGraph::new(3, vec![vec![vec![1], vec![1, 2]]; 3]).is_err());
        assert!(RecoveryGraph::random_uniform(4, 2, 2, 0).is_err());
    }
}
