//! Recovering sets: exhaustive and linear-algebra verifiers, and the search
//! for t disjoint recovering sets per coordinate.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::code::{pow_within, Combinations, LinearCode};
use crate::error::{Error, Result};
use crate::field::Elem;

/// Cap for verifiers that enumerate a whole code: q^k ≤ 2^24.
pub const VERIFY_CAP_LOG2: u32 = 24;
/// Upper limit on candidate sets fed into the exact packing search.
pub const MAX_CANDIDATES: usize = 10_000;
/// Node budget of the exact packing search.
pub const PACKING_NODE_BUDGET: u64 = 1_000_000;
/// Budget for the weight-bounded subset search used when the dual is too
/// large to enumerate.
pub const SUBSET_SEARCH_BUDGET: u64 = 5_000_000;

/// Evidence that `set` recovers `coordinate`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecoveringSetCertificate {
    pub coordinate: usize,
    pub set: Vec<usize>,
    /// Dual codeword h with h_i = 1 and supp(h) ⊆ set ∪ {i}.
    pub witness: Option<Vec<Elem>>,
}

fn check_subset(code: &LinearCode, i: usize, set: &[usize]) -> Result<()> {
    let n = code.n();
    if i >= n {
        return Err(Error::domain(format!("coordinate {i} out of range for n={n}")));
    }
    if let Some(&j) = set.iter().find(|&&j| j >= n) {
        return Err(Error::domain(format!("set element {j} out of range for n={n}")));
    }
    if set.contains(&i) {
        return Err(Error::domain(format!("set contains the coordinate {i} itself")));
    }
    Ok(())
}

/// True iff the values on `set` determine coordinate `i` on every codeword.
/// Groups all codewords by their restriction to `set`.
pub fn verify_recovering_set_general(code: &LinearCode, i: usize, set: &[usize]) -> Result<bool> {
    check_subset(code, i, set)?;
    let mut seen: HashMap<Vec<Elem>, Elem> = HashMap::new();
    let mut ok = true;
    code.for_each_codeword(VERIFY_CAP_LOG2, |c| {
        if !ok {
            return;
        }
        let key: Vec<Elem> = set.iter().map(|&j| c[j]).collect();
        match seen.get(&key) {
            Some(&v) if v != c[i] => ok = false,
            Some(_) => {}
            None => {
                seen.insert(key, c[i]);
            }
        }
    })?;
    Ok(ok)
}

/// A dual codeword h with h_i = 1 and support inside `set ∪ {i}`, if one
/// exists; then `set` is a recovering set for `i`.
pub fn verify_recovering_set_linear(
    code: &LinearCode,
    i: usize,
    set: &[usize],
) -> Result<Option<Vec<Elem>>> {
    check_subset(code, i, set)?;
    let h = code.parity_check();
    if h.rows() == 0 {
        return Ok(None);
    }
    let f = code.field();
    let outside: Vec<usize> = (0..code.n())
        .filter(|&j| j != i && !set.contains(&j))
        .collect();
    // combinations y of the rows of H that vanish outside set ∪ {i}
    let ys = h.select_columns(&outside).transpose().nullspace();
    for b in 0..ys.rows() {
        let word = h.vec_mul(ys.row(b));
        if word[i] != 0 {
            let inv = f.inv(word[i]).expect("nonzero");
            return Ok(Some(word.iter().map(|&x| f.mul(x, inv)).collect()));
        }
    }
    Ok(None)
}

/// Outcome of the search for t disjoint recovering sets of size ≤ r.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalityProfile {
    pub r: usize,
    pub t: usize,
    /// One list of t certificates per coordinate, up to the first failure.
    pub certificates: Vec<Vec<RecoveringSetCertificate>>,
    /// First coordinate lacking t disjoint sets.
    pub failure: Option<usize>,
    /// Number of disjoint sets found at the failing coordinate.
    pub found_at_failure: usize,
    /// Set when the candidate list was truncated or the packing search ran
    /// out of budget and fell back to a greedy choice.
    pub heuristic: bool,
}

impl LocalityProfile {
    pub fn is_success(&self) -> bool {
        self.failure.is_none()
    }
}

/// Candidate recovering sets for one coordinate, with witnesses.
type Candidates = Vec<(Vec<usize>, Vec<Elem>)>;

/// Searches every coordinate for t pairwise-disjoint recovering sets of size
/// at most r. A dual codeword of weight w through i gives a set of size w−1.
pub fn locality_profile(code: &LinearCode, r: usize, t: usize) -> Result<LocalityProfile> {
    if r == 0 || t == 0 {
        return Err(Error::domain("locality and availability must be positive"));
    }
    let n = code.n();
    let candidates = if pow_within(code.q() as u64, code.n() - code.k(), VERIFY_CAP_LOG2).is_some() {
        candidates_from_dual(code, r)?
    } else {
        candidates_by_subsets(code, r)?
    };
    let mut profile = LocalityProfile {
        r,
        t,
        certificates: Vec::with_capacity(n),
        failure: None,
        found_at_failure: 0,
        heuristic: false,
    };
    for (i, mut cands) in candidates.into_iter().enumerate() {
        cands = minimal_sets(cands);
        if cands.len() > MAX_CANDIDATES {
            cands.truncate(MAX_CANDIDATES);
            profile.heuristic = true;
        }
        let sets: Vec<&[usize]> = cands.iter().map(|(s, _)| s.as_slice()).collect();
        let packing = pack_disjoint(&sets, t);
        profile.heuristic |= packing.heuristic;
        if packing.chosen.len() < t {
            profile.failure = Some(i);
            profile.found_at_failure = packing.chosen.len();
            return Ok(profile);
        }
        profile.certificates.push(
            packing
                .chosen
                .iter()
                .map(|&c| RecoveringSetCertificate {
                    coordinate: i,
                    set: cands[c].0.clone(),
                    witness: Some(cands[c].1.clone()),
                })
                .collect(),
        );
    }
    Ok(profile)
}

fn candidates_from_dual(code: &LinearCode, r: usize) -> Result<Vec<Candidates>> {
    let n = code.n();
    let f = code.field().clone();
    let mut by_coord: Vec<HashMap<Vec<usize>, Vec<Elem>>> = vec![HashMap::new(); n];
    code.dual().for_each_codeword(VERIFY_CAP_LOG2, |h| {
        let support: Vec<usize> = (0..n).filter(|&j| h[j] != 0).collect();
        if support.len() < 2 || support.len() > r + 1 {
            return;
        }
        for &i in &support {
            let set: Vec<usize> = support.iter().copied().filter(|&j| j != i).collect();
            by_coord[i].entry(set).or_insert_with(|| {
                let inv = f.inv(h[i]).expect("nonzero");
                h.iter().map(|&x| f.mul(x, inv)).collect()
            });
        }
    })?;
    Ok(by_coord
        .into_iter()
        .map(|m| {
            let mut v: Candidates = m.into_iter().collect();
            v.sort();
            v
        })
        .collect())
}

/// Scans coordinate supports S with 2 ≤ |S| ≤ r + 1. Dual codewords with
/// support inside S are exactly the null vectors of the generator columns
/// in S, so S \ {i} recovers i iff one of them is nonzero at i.
fn candidates_by_subsets(code: &LinearCode, r: usize) -> Result<Vec<Candidates>> {
    let n = code.n();
    let max = (r + 1).min(n);
    let total: u64 = (2..=max).map(|w| crate::code::binomial_u64(n, w)).sum();
    if total > SUBSET_SEARCH_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "{total} supports of size ≤ {} exceed the budget of {SUBSET_SEARCH_BUDGET}",
            r + 1
        )));
    }
    let f = code.field();
    let g = code.generator();
    let mut by_coord: Vec<HashMap<Vec<usize>, Vec<Elem>>> = vec![HashMap::new(); n];
    for w in 2..=max {
        for support in Combinations::new(n, w) {
            let null = g.select_columns(&support).nullspace();
            if null.rows() == 0 {
                continue;
            }
            for (a, &i) in support.iter().enumerate() {
                let Some(b) = (0..null.rows()).find(|&b| null.get(b, a) != 0) else {
                    continue;
                };
                let inv = f.inv(null.get(b, a)).expect("nonzero");
                let mut h = vec![0; n];
                for (c, &j) in support.iter().enumerate() {
                    h[j] = f.mul(null.get(b, c), inv);
                }
                let set: Vec<usize> = (0..n).filter(|&j| j != i && h[j] != 0).collect();
                by_coord[i].entry(set).or_insert(h);
            }
        }
    }
    Ok(by_coord
        .into_iter()
        .map(|m| {
            let mut v: Candidates = m.into_iter().collect();
            v.sort();
            v
        })
        .collect())
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|x| big.binary_search(x).is_ok())
}

/// Keeps inclusion-minimal sets, smallest first.
fn minimal_sets(mut cands: Candidates) -> Candidates {
    cands.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.cmp(b)));
    let mut kept: Candidates = Vec::new();
    for c in cands {
        if !kept.iter().any(|(s, _)| is_subset(s, &c.0)) {
            kept.push(c);
        }
    }
    kept
}

pub(crate) struct Packing {
    pub chosen: Vec<usize>,
    pub heuristic: bool,
}

/// Chooses `t` pairwise disjoint sets by depth-first branch and bound,
/// falling back to a greedy pass when the node budget runs out.
pub(crate) fn pack_disjoint(sets: &[&[usize]], t: usize) -> Packing {
    let mut best: Vec<usize> = Vec::new();
    let mut nodes = 0u64;
    let mut stack = Vec::new();
    let complete = dfs(sets, t, 0, &mut stack, &mut BTreeSet::new(), &mut best, &mut nodes);
    if complete || best.len() >= t {
        return Packing {
            chosen: best,
            heuristic: false,
        };
    }
    let mut used = BTreeSet::new();
    let mut chosen = Vec::new();
    for (c, s) in sets.iter().enumerate() {
        if chosen.len() == t {
            break;
        }
        if s.iter().all(|x| !used.contains(x)) {
            used.extend(s.iter().copied());
            chosen.push(c);
        }
    }
    if chosen.len() < best.len() {
        chosen = best;
    }
    Packing {
        chosen,
        heuristic: true,
    }
}

/// Returns false when the node budget is exhausted.
fn dfs(
    sets: &[&[usize]],
    t: usize,
    from: usize,
    stack: &mut Vec<usize>,
    used: &mut BTreeSet<usize>,
    best: &mut Vec<usize>,
    nodes: &mut u64,
) -> bool {
    if stack.len() > best.len() {
        *best = stack.clone();
    }
    if best.len() >= t {
        return true;
    }
    for c in from..sets.len() {
        if stack.len() + (sets.len() - c) <= best.len() {
            break;
        }
        *nodes += 1;
        if *nodes > PACKING_NODE_BUDGET {
            return false;
        }
        if sets[c].iter().any(|x| used.contains(x)) {
            continue;
        }
        stack.push(c);
        used.extend(sets[c].iter().copied());
        let done = dfs(sets, t, c + 1, stack, used, best, nodes);
        for x in sets[c] {
            used.remove(x);
        }
        stack.pop();
        if !done {
            return false;
        }
        if best.len() >= t {
            return true;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{hamming_7_4_parity, shortened_hamming_6_3_parity};
    use crate::field::Field;
    use crate::matrix::Matrix;

    fn spc3() -> LinearCode {
        let f = Field::new(2).unwrap();
        LinearCode::from_parity(&Matrix::from_rows(&f, 3, &[vec![1, 1, 1]]).unwrap())
    }

    #[test]
    fn shortened_hamming_sets() {
        let c = LinearCode::from_parity(&shortened_hamming_6_3_parity());
        // the row 011001 is a weight-3 check through coordinates 1, 2, 5
        assert!(verify_recovering_set_general(&c, 1, &[2, 5]).unwrap());
        assert!(verify_recovering_set_linear(&c, 1, &[2, 5]).unwrap().is_some());
        let all_but_0: Vec<usize> = (1..6).collect();
        assert!(verify_recovering_set_general(&c, 0, &all_but_0).unwrap());
    }

    #[test]
    fn single_parity_sets() {
        let c = spc3();
        assert!(!verify_recovering_set_general(&c, 0, &[1]).unwrap());
        assert!(verify_recovering_set_linear(&c, 0, &[1]).unwrap().is_none());
        assert_eq!(
            verify_recovering_set_linear(&c, 0, &[1, 2]).unwrap(),
            Some(vec![1, 1, 1])
        );
    }

    #[test]
    fn whole_space_has_no_witness() {
        let f = Field::new(3).unwrap();
        let c = LinearCode::from_generator(&Matrix::identity(&f, 4));
        assert!(verify_recovering_set_linear(&c, 0, &[1, 2, 3]).unwrap().is_none());
    }

    #[test]
    fn invalid_subsets_are_rejected() {
        let c = spc3();
        assert!(verify_recovering_set_general(&c, 0, &[0, 1]).is_err());
        assert!(verify_recovering_set_linear(&c, 3, &[1]).is_err());
    }

    #[test]
    fn worked_profiles() {
        let c = LinearCode::from_parity(&shortened_hamming_6_3_parity());
        let p = locality_profile(&c, 2, 2).unwrap();
        assert!(p.is_success() && !p.heuristic);
        // all four weight-4 checks through a coordinate pairwise share a
        // second coordinate, so one set of size 3 is the most available
        let h = LinearCode::from_parity(&hamming_7_4_parity());
        let p = locality_profile(&h, 3, 1).unwrap();
        assert!(p.is_success());
        assert!(p.certificates.iter().flatten().all(|c| c.set.len() == 3));
        let p = locality_profile(&h, 3, 2).unwrap();
        assert_eq!((p.failure, p.found_at_failure), (Some(0), 1));
        let p = locality_profile(&spc3(), 2, 2).unwrap();
        assert_eq!(p.failure, Some(0));
        assert_eq!(p.found_at_failure, 1);
    }

    #[test]
    fn subset_search_agrees_with_dual_enumeration() {
        for h in [shortened_hamming_6_3_parity(), hamming_7_4_parity()] {
            let c = LinearCode::from_parity(&h);
            for r in 1..=4 {
                let a = candidates_from_dual(&c, r).unwrap();
                let b = candidates_by_subsets(&c, r).unwrap();
                for (x, y) in a.into_iter().zip(b) {
                    let xs: Vec<Vec<usize>> = minimal_sets(x).into_iter().map(|c| c.0).collect();
                    let ys: Vec<Vec<usize>> = minimal_sets(y).into_iter().map(|c| c.0).collect();
                    assert_eq!(xs, ys);
                }
            }
        }
    }

    #[test]
    fn hamming_product_has_two_disjoint_sets() {
        // every symbol of the product of two [7,4] Hamming codes sits in a
        // row code and a column code
        let g = hamming_7_4_parity().nullspace();
        let f = g.field().clone();
        let mut rows = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                let row: Vec<Elem> = (0..49)
                    .map(|c| f.mul(g.get(a, c / 7), g.get(b, c % 7)))
                    .collect();
                rows.push(row);
            }
        }
        let code = LinearCode::from_generator(&Matrix::from_rows(&f, 49, &rows).unwrap());
        assert_eq!(code.k(), 16);
        let p = locality_profile(&code, 3, 2).unwrap();
        assert!(p.is_success() && !p.heuristic);
    }

    #[test]
    fn packing_is_exact() {
        // greedy would take {0,1} and get stuck; the optimum is {0,2},{1,3}
        let sets: Vec<&[usize]> = vec![&[0, 1], &[0, 2], &[1, 3]];
        let p = pack_disjoint(&sets, 2);
        assert_eq!(p.chosen, vec![1, 2]);
        assert!(!p.heuristic);
    }
}
