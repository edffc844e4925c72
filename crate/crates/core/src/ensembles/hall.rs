//! Hall's condition through maximum bipartite matching.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};

pub const HALL_MAX_FAMILY: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HallResult {
    pub holds: bool,
    /// A system of distinct representatives, one element per set.
    pub sdr: Option<Vec<usize>>,
    /// Indices of sets whose union is smaller than their number.
    pub violator: Option<Vec<usize>>,
}

struct Matcher<'a> {
    adj: &'a [Vec<usize>],
    owner: Vec<Option<usize>>,
    visited_elem: Vec<bool>,
    visited_set: Vec<bool>,
}

impl Matcher<'_> {
    fn augment(&mut self, s: usize) -> bool {
        self.visited_set[s] = true;
        let adj = self.adj;
        for &e in &adj[s] {
            if self.visited_elem[e] {
                continue;
            }
            self.visited_elem[e] = true;
            match self.owner[e] {
                None => {
                    self.owner[e] = Some(s);
                    return true;
                }
                Some(o) => {
                    if self.augment(o) {
                        self.owner[e] = Some(s);
                        return true;
                    }
                }
            }
        }
        false
    }
}

/// Decides whether the family has a system of distinct representatives.
/// On failure, the sets of the alternating tree grown from an unmatched set
/// are returned: their union has one element fewer than their number.
pub fn hall_check(sets: &[Vec<usize>]) -> Result<HallResult> {
    let mut index = BTreeMap::new();
    for s in sets {
        for &e in s {
            let next = index.len();
            index.entry(e).or_insert(next);
        }
    }
    if sets.len() > HALL_MAX_FAMILY || index.len() > HALL_MAX_FAMILY {
        return Err(Error::domain("Hall check is limited to 10^4 sets and elements"));
    }
    let mut adj: Vec<Vec<usize>> = sets.iter().map(|s| s.iter().map(|e| index[e]).collect()).collect();
    for a in &mut adj {
        a.sort_unstable();
        a.dedup();
    }
    let mut m = Matcher {
        adj: &adj,
        owner: vec![None; index.len()],
        visited_elem: vec![false; index.len()],
        visited_set: vec![false; sets.len()],
    };
    for s in 0..sets.len() {
        m.visited_elem.iter_mut().for_each(|v| *v = false);
        m.visited_set.iter_mut().for_each(|v| *v = false);
        if !m.augment(s) {
            let violator = (0..sets.len()).filter(|&i| m.visited_set[i]).collect();
            return Ok(HallResult {
                holds: false,
                sdr: None,
                violator: Some(violator),
            });
        }
    }
    let elems: Vec<usize> = {
        let mut v = vec![0; index.len()];
        for (&e, &i) in &index {
            v[i] = e;
        }
        v
    };
    let mut sdr = vec![0; sets.len()];
    for (e, o) in m.owner.iter().enumerate() {
        if let Some(s) = o {
            sdr[*s] = elems[e];
        }
    }
    Ok(HallResult {
        holds: true,
        sdr: Some(sdr),
        violator: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_families() {
        let r = hall_check(&[vec![1], vec![1]]).unwrap();
        assert!(!r.holds);
        assert_eq!(r.violator, Some(vec![0, 1]));
        let r = hall_check(&[vec![1, 2], vec![2, 3], vec![3, 1]]).unwrap();
        assert!(r.holds);
        let sdr = r.sdr.unwrap();
        let mut sorted = sdr.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![1, 2, 3]);
        assert!(hall_check(&[]).unwrap().holds);
        assert!(!hall_check(&[vec![]]).unwrap().holds);
    }

    proptest! {
        #[test]
        fn certificates_are_valid(family in prop::collection::vec(prop::collection::vec(0usize..8, 0..4), 0..9)) {
            let r = hall_check(&family).unwrap();
            if r.holds {
                let sdr = r.sdr.unwrap();
                for (s, e) in family.iter().zip(&sdr) {
                    prop_assert!(s.contains(e));
                }
                let mut d = sdr.clone();
                d.sort_unstable();
                d.dedup();
                prop_assert_eq!(d.len(), sdr.len());
            } else {
                let v = r.violator.unwrap();
                let mut union: Vec<usize> = v.iter().flat_map(|&i| family[i].clone()).collect();
                union.sort_unstable();
                union.dedup();
                prop_assert!(union.len() < v.len());
            }
        }
    }
}
