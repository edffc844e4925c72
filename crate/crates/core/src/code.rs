//! Linear codes over GF(q): construction, codeword enumeration and
//! minimum distance.

use crate::enumerator::WeightEnumerator;
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::{axpy, Matrix};
use crate::par;

/// Codeword enumeration is limited to q^k ≤ 2^28.
pub const ENUMERATION_CAP_LOG2: u32 = 28;

/// Column-subset budget for the parity-check distance search.
const COLUMN_SEARCH_BUDGET: u64 = 1 << 22;

/// A linear [n, k] code. Both matrices are kept in reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    field: Field,
    n: usize,
    generator: Matrix,
    parity_check: Matrix,
    info_set: Vec<usize>,
}

impl LinearCode {
    /// The null space of `h`. Dependent rows are dropped, so k = n − rank(h).
    pub fn from_parity(h: &Matrix) -> LinearCode {
        LinearCode::build(h.nullspace(), h.row_basis())
    }

    /// The row space of `g`. Dependent rows are dropped.
    pub fn from_generator(g: &Matrix) -> LinearCode {
        LinearCode::build(g.row_basis(), g.nullspace())
    }

    fn build(generator: Matrix, parity_check: Matrix) -> LinearCode {
        let (generator, info_set) = generator.rref_with_pivots();
        LinearCode {
            field: generator.field().clone(),
            n: generator.cols(),
            generator,
            parity_check: parity_check.rref(),
            info_set,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.generator.rows()
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn parity_check(&self) -> &Matrix {
        &self.parity_check
    }

    /// Pivot columns of the generator: the message appears verbatim there.
    pub fn information_set(&self) -> &[usize] {
        &self.info_set
    }

    pub fn dual(&self) -> LinearCode {
        LinearCode::build(self.parity_check.clone(), self.generator.clone())
    }

    pub fn encode(&self, message: &[Elem]) -> Vec<Elem> {
        self.generator.vec_mul(message)
    }

    pub fn contains(&self, word: &[Elem]) -> bool {
        word.len() == self.n
            && (0..self.parity_check.rows()).all(|i| {
                let row = self.parity_check.row(i);
                let f = &self.field;
                row.iter()
                    .zip(word)
                    .fold(0, |acc, (&h, &x)| f.add(acc, f.mul(h, x)))
                    == 0
            })
    }

    /// q^k if it is at most 2^cap_log2.
    pub fn size_within(&self, cap_log2: u32) -> Option<u64> {
        pow_within(self.q() as u64, self.k(), cap_log2)
    }

    fn check_enumerable(&self, cap_log2: u32) -> Result<u64> {
        self.size_within(cap_log2).ok_or_else(|| Error::TooLarge {
            what: format!("{}^{} codewords", self.q(), self.k()),
            cap_log2,
        })
    }

    /// Calls `visit` on every codeword, consecutive words differing by a
    /// multiple of one generator row.
    pub fn for_each_codeword(&self, cap_log2: u32, mut visit: impl FnMut(&[Elem])) -> Result<()> {
        self.check_enumerable(cap_log2.min(ENUMERATION_CAP_LOG2))?;
        let rows: Vec<&[Elem]> = (0..self.k()).map(|i| self.generator.row(i)).collect();
        gray_walk(&self.field, &rows, vec![0; self.n], &mut visit);
        Ok(())
    }

    /// Number of codewords of each weight 0..=n, by direct enumeration.
    pub fn weight_distribution(&self) -> Result<Vec<u64>> {
        self.check_enumerable(ENUMERATION_CAP_LOG2)?;
        if self.q() == 2 && self.n <= 128 {
            return Ok(self.binary_weight_distribution());
        }
        let q = self.q() as usize;
        let k = self.k();
        // fix the top `split` message digits per task
        let mut split = 0;
        while split < k && q.pow(split as u32) < 256 {
            split += 1;
        }
        let low = k - split;
        let rows: Vec<&[Elem]> = (0..k).map(|i| self.generator.row(i)).collect();
        let f = &self.field;
        let n = self.n;
        let parts = par::map_indexed(q.pow(split as u32), |prefix| {
            let mut start = vec![0; n];
            let mut x = prefix;
            for row in &rows[low..] {
                let a = (x % q) as Elem;
                x /= q;
                if a != 0 {
                    axpy(f, &mut start, a, row);
                }
            }
            let mut counts = vec![0u64; n + 1];
            gray_walk(f, &rows[..low], start, &mut |c: &[Elem]| {
                counts[c.iter().filter(|&&x| x != 0).count()] += 1;
            });
            counts
        });
        Ok(sum_counts(parts, n))
    }

    fn binary_weight_distribution(&self) -> Vec<u64> {
        let k = self.k();
        let n = self.n;
        let rows: Vec<u128> = (0..k).map(|i| pack(self.generator.row(i))).collect();
        let split = k.min(8);
        let low = k - split;
        let parts = par::map_indexed(1usize << split, |prefix| {
            let mut c = 0u128;
            for (b, row) in rows[low..].iter().enumerate() {
                if prefix >> b & 1 == 1 {
                    c ^= row;
                }
            }
            let mut counts = vec![0u64; n + 1];
            counts[c.count_ones() as usize] += 1;
            for i in 1u64..(1u64 << low) {
                c ^= rows[i.trailing_zeros() as usize];
                counts[c.count_ones() as usize] += 1;
            }
            counts
        });
        sum_counts(parts, n)
    }

    /// Exact weight enumerator. Enumerates the smaller of the code and its
    /// dual, transforming back in the latter case.
    pub fn weight_enumerator(&self) -> Result<WeightEnumerator> {
        let q = self.q() as u64;
        if self.k() <= self.n - self.k() {
            return Ok(WeightEnumerator::from_counts(q as u32, &self.weight_distribution()?));
        }
        let dual = self.dual();
        let a = WeightEnumerator::from_counts(q as u32, &dual.weight_distribution()?);
        a.dual()
    }

    /// Exact minimum distance; n + 1 for the zero code.
    ///
    /// Up to q^k ≤ 2^28 codewords, enumerates messages by increasing weight
    /// on the information set and stops once no heavier message can beat the
    /// best word. Otherwise searches for the smallest linearly dependent set
    /// of parity-check columns, subject to a subset budget.
    pub fn min_distance(&self) -> Result<usize> {
        if self.k() == 0 {
            return Ok(self.n + 1);
        }
        if self.size_within(ENUMERATION_CAP_LOG2).is_some() {
            return Ok(self.min_distance_information_set());
        }
        self.min_distance_columns()
    }

    /// Minimum distance read off the full weight distribution.
    pub fn min_distance_exhaustive(&self) -> Result<usize> {
        let counts = self.weight_distribution()?;
        Ok((1..=self.n).find(|&w| counts[w] > 0).unwrap_or(self.n + 1))
    }

    fn min_distance_information_set(&self) -> usize {
        let f = &self.field;
        let k = self.k();
        let q = self.q();
        let mut best = self.n + 1;
        for w in 1..=k {
            if w >= best {
                break;
            }
            for support in Combinations::new(k, w) {
                // scaling does not change the weight: pin the first value to 1
                let mut values = vec![1 as Elem; w];
                loop {
                    let mut c = vec![0; self.n];
                    for (&row, &a) in support.iter().zip(&values) {
                        axpy(f, &mut c, a, self.generator.row(row));
                    }
                    best = best.min(c.iter().filter(|&&x| x != 0).count());
                    if !next_nonzero_tuple(&mut values[1..], q) {
                        break;
                    }
                }
            }
        }
        best
    }

    fn min_distance_columns(&self) -> Result<usize> {
        let h = &self.parity_check;
        let n = self.n;
        let mut spent: u64 = 0;
        for w in 1..=n {
            if w > h.rows() {
                // any rows + 1 columns are dependent
                return Ok(w);
            }
            spent = spent.saturating_add(binomial_u64(n, w));
            if spent > COLUMN_SEARCH_BUDGET {
                return Err(Error::TooLarge {
                    what: format!(
                        "distance search over {}^{} codewords or column subsets of size {w}",
                        self.q(),
                        self.k()
                    ),
                    cap_log2: ENUMERATION_CAP_LOG2,
                });
            }
            if Combinations::new(n, w).any(|cols| h.select_columns(&cols).rank() < w) {
                return Ok(w);
            }
        }
        Ok(n + 1)
    }
}

/// Visits `start + Σ m_j rows[j]` for every message m, in a q-ary modular
/// Gray order: each step adds +1 to one digit of the integer label.
fn gray_walk(f: &Field, rows: &[&[Elem]], start: Vec<Elem>, visit: &mut dyn FnMut(&[Elem])) {
    let q = f.order() as u64;
    let mut digits = vec![0u32; rows.len()];
    let mut c = start;
    visit(&c);
    let total = q.pow(rows.len() as u32);
    // field differences (a + 1) - a for each label a
    let steps: Vec<Elem> = (0..q as u32)
        .map(|a| f.sub(((a as u64 + 1) % q) as Elem, a))
        .collect();
    for i in 1..total {
        let mut j = 0;
        let mut x = i;
        while x % q == 0 {
            x /= q;
            j += 1;
        }
        let old = digits[j];
        digits[j] = ((old as u64 + 1) % q) as u32;
        axpy(f, &mut c, steps[old as usize], rows[j]);
        visit(&c);
    }
}

fn pack(row: &[Elem]) -> u128 {
    row.iter()
        .enumerate()
        .fold(0u128, |acc, (j, &x)| acc | ((x as u128) << j))
}

fn sum_counts(parts: Vec<Vec<u64>>, n: usize) -> Vec<u64> {
    parts.into_iter().fold(vec![0; n + 1], |mut acc, p| {
        for (a, b) in acc.iter_mut().zip(p) {
            *a += b;
        }
        acc
    })
}

/// Advances a tuple over the nonzero labels 1..q; false after the last one.
fn next_nonzero_tuple(values: &mut [Elem], q: u32) -> bool {
    for v in values.iter_mut() {
        if *v + 1 < q {
            *v += 1;
            return true;
        }
        *v = 1;
    }
    false
}

pub(crate) fn pow_within(q: u64, k: usize, cap_log2: u32) -> Option<u64> {
    let cap = 1u64 << cap_log2;
    let mut v: u64 = 1;
    for _ in 0..k {
        v = v.checked_mul(q).filter(|&v| v <= cap)?;
    }
    Some(v)
}

pub(crate) fn binomial_u64(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut v: u64 = 1;
    for i in 0..k {
        v = v.saturating_mul((n - i) as u64) / (i as u64 + 1);
    }
    v
}

/// k-subsets of 0..n in lexicographic order.
pub struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Combinations {
        Combinations {
            n,
            idx: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Parity-check matrix of the [7,4,3] Hamming code (columns are 1..7 in binary).
pub fn hamming_7_4_parity() -> Matrix {
    let f = Field::new(2).expect("GF(2)");
    let rows: Vec<Vec<Elem>> = (0..3)
        .map(|b| (1..=7u32).map(|c| (c >> (2 - b)) & 1).collect())
        .collect();
    Matrix::from_rows(&f, 7, &rows).expect("well formed")
}

/// Parity-check matrix of the shortened binary Hamming code of length 6,
/// a (6,3,2,2) locally recoverable code.
pub fn shortened_hamming_6_3_parity() -> Matrix {
    let f = Field::new(2).expect("GF(2)");
    let rows = vec![
        vec![0, 0, 0, 1, 1, 1],
        vec![0, 1, 1, 0, 0, 1],
        vec![1, 0, 1, 0, 1, 0],
    ];
    Matrix::from_rows(&f, 6, &rows).expect("well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(q: u64) -> Field {
        Field::new(q).unwrap()
    }

    #[test]
    fn single_parity_check() {
        let f = gf(2);
        let h = Matrix::from_rows(&f, 3, &[vec![1, 1, 1]]).unwrap();
        let c = LinearCode::from_parity(&h);
        assert_eq!((c.n(), c.k()), (3, 2));
        assert_eq!(c.min_distance().unwrap(), 2);
    }

    #[test]
    fn whole_space_has_empty_parity_check() {
        let f = gf(5);
        let c = LinearCode::from_generator(&Matrix::identity(&f, 4));
        assert_eq!(c.k(), 4);
        assert_eq!(c.parity_check().rows(), 0);
        assert_eq!(c.min_distance().unwrap(), 1);
    }

    #[test]
    fn rank_deficient_parity_is_reduced() {
        let f = gf(3);
        let h = Matrix::from_rows(&f, 3, &[vec![1, 1, 1], vec![2, 2, 2]]).unwrap();
        let c = LinearCode::from_parity(&h);
        assert_eq!(c.k(), 2);
        assert_eq!(c.parity_check().rows(), 1);
    }

    #[test]
    fn worked_examples() {
        let c = LinearCode::from_parity(&shortened_hamming_6_3_parity());
        assert_eq!((c.n(), c.k(), c.min_distance().unwrap()), (6, 3, 3));
        let h = LinearCode::from_parity(&hamming_7_4_parity());
        assert_eq!((h.n(), h.k(), h.min_distance().unwrap()), (7, 4, 3));
        assert_eq!(h.dual().min_distance().unwrap(), 4);
    }

    #[test]
    fn zero_code_distance_convention() {
        let f = gf(2);
        let c = LinearCode::from_parity(&Matrix::identity(&f, 5));
        assert_eq!(c.k(), 0);
        assert_eq!(c.min_distance().unwrap(), 6);
        assert_eq!(c.min_distance_exhaustive().unwrap(), 6);
    }

    #[test]
    fn generator_and_parity_are_orthogonal() {
        let c = LinearCode::from_parity(&hamming_7_4_parity());
        let prod = c.generator().mul(&c.parity_check().transpose()).unwrap();
        assert!(prod.is_zero());
        for i in 0..c.k() {
            assert!(c.contains(c.generator().row(i)));
        }
    }

    #[test]
    fn enumeration_cap() {
        let f = gf(2);
        let c = LinearCode::from_generator(&Matrix::identity(&f, 29));
        assert!(matches!(c.weight_distribution(), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn column_search_matches_enumeration() {
        // a [10, 5] code over GF(7) fits both paths
        let f = gf(7);
        let data: Vec<Elem> = (0..50).map(|i| (i * i * 3 + i + 1) % 7).collect();
        let h = Matrix::new(&f, 5, 10, data).unwrap();
        let c = LinearCode::from_parity(&h);
        assert_eq!(c.min_distance_columns().unwrap(), c.min_distance_exhaustive().unwrap());
    }

    #[test]
    fn combinations_count() {
        assert_eq!(Combinations::new(6, 3).count(), 20);
        assert_eq!(Combinations::new(4, 0).count(), 1);
        assert_eq!(Combinations::new(2, 3).count(), 0);
        assert_eq!(binomial_u64(30, 15), 155_117_520);
    }

    fn arb_code() -> impl Strategy<Value = LinearCode> {
        let qs = prop::sample::select(vec![2u64, 3, 4, 5, 8, 9]);
        (qs, 2usize..=10, 1usize..=6).prop_flat_map(|(q, n, rows)| {
            let rows = rows.min(n);
            prop::collection::vec(0u32..q as u32, rows * n).prop_map(move |data| {
                let f = Field::new(q).unwrap();
                LinearCode::from_parity(&Matrix::new(&f, rows, n, data).unwrap())
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn fast_distance_matches_exhaustive(c in arb_code()) {
            prop_assume!(c.size_within(16).is_some());
            prop_assert_eq!(c.min_distance().unwrap(), c.min_distance_exhaustive().unwrap());
            prop_assert_eq!(c.min_distance_columns().unwrap(), c.min_distance_exhaustive().unwrap());
        }

        #[test]
        fn distribution_sums_to_code_size(c in arb_code()) {
            prop_assume!(c.size_within(16).is_some());
            let counts = c.weight_distribution().unwrap();
            prop_assert_eq!(counts.iter().sum::<u64>(), c.size_within(16).unwrap());
            prop_assert_eq!(counts[0], 1);
            let mut seen = 0u64;
            c.for_each_codeword(16, |w| {
                assert!(c.contains(w));
                seen += 1;
            }).unwrap();
            prop_assert_eq!(seen, counts.iter().sum::<u64>());
        }
    }
}
