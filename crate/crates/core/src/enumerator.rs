//! Weight enumerators in exact integer arithmetic, the MacWilliams transform,
//! and the local enumerators behind the random ensembles.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Coefficients A_0..A_n of Σ A_w s^w, where A_w counts words of weight w.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightEnumerator {
    q: u32,
    #[serde(serialize_with = "ser_big_vec")]
    coeffs: Vec<BigUint>,
}

fn ser_big_vec<S: serde::Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

impl WeightEnumerator {
    /// Length is `coeffs.len() - 1`.
    pub fn new(q: u32, coeffs: Vec<BigUint>) -> Result<WeightEnumerator> {
        if coeffs.is_empty() {
            return Err(Error::Inconsistent("empty coefficient vector".into()));
        }
        if coeffs[0].is_zero() {
            return Err(Error::Inconsistent("A_0 must be at least 1".into()));
        }
        Ok(WeightEnumerator { q, coeffs })
    }

    pub fn from_counts(q: u32, counts: &[u64]) -> WeightEnumerator {
        WeightEnumerator {
            q,
            coeffs: counts.iter().map(|&c| BigUint::from(c)).collect(),
        }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn coeff(&self, w: usize) -> BigUint {
        self.coeffs.get(w).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigUint {
        self.coeffs.iter().sum()
    }

    /// Smallest nonzero weight present, if any.
    pub fn min_weight(&self) -> Option<usize> {
        (1..self.coeffs.len()).find(|&w| !self.coeffs[w].is_zero())
    }

    /// Enumerator of the dual code.
    pub fn dual(&self) -> Result<WeightEnumerator> {
        macwilliams(self, &self.total())
    }
}

/// q-ary MacWilliams transform:
/// B_j = (1/|C|) Σ_w A_w K_j(w), with Krawtchouk values
/// K_j(w) = Σ_l (−1)^l C(w,l) C(n−w,j−l) (q−1)^{j−l}.
pub fn macwilliams(a: &WeightEnumerator, code_size: &BigUint) -> Result<WeightEnumerator> {
    let total = a.total();
    if &total != code_size {
        return Err(Error::Inconsistent(format!(
            "coefficients sum to {total}, expected {code_size}"
        )));
    }
    let n = a.n();
    let binom = binomial_table(n);
    let qm1 = BigInt::from(a.q - 1);
    let pows: Vec<BigInt> = (0..=n).map(|e| qm1.pow(e as u32)).collect();
    let size = BigInt::from(code_size.clone());
    let mut out = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let mut acc = BigInt::zero();
        for (w, aw) in a.coeffs.iter().enumerate() {
            if aw.is_zero() {
                continue;
            }
            let mut k = BigInt::zero();
            for l in 0..=j.min(w) {
                if j - l > n - w {
                    continue;
                }
                let term = &binom[w][l] * &binom[n - w][j - l] * &pows[j - l];
                if l % 2 == 0 {
                    k += term;
                } else {
                    k -= term;
                }
            }
            acc += BigInt::from(aw.clone()) * k;
        }
        let (quot, rem) = acc.div_rem(&size);
        if !rem.is_zero() || quot.is_negative() {
            return Err(Error::Inconsistent(format!(
                "coefficient of s^{j} would be {acc}/{size}"
            )));
        }
        out.push(quot.to_biguint().expect("non-negative"));
    }
    WeightEnumerator::new(a.q, out)
}

pub(crate) fn binomial_table(n: usize) -> Vec<Vec<BigInt>> {
    let mut t: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut row = vec![BigInt::one(); i + 1];
        for j in 1..i {
            row[j] = &t[i - 1][j - 1] + &t[i - 1][j];
        }
        t.push(row);
    }
    t
}

pub(crate) fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut v = BigUint::one();
    for i in 0..k {
        v = v * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    v
}

/// Coefficients of (a + b s)^e.
fn linear_pow(a: &BigInt, b: &BigInt, e: usize) -> Vec<BigInt> {
    let binom = binomial_table(e);
    (0..=e)
        .map(|i| &binom[e][i] * a.pow((e - i) as u32) * b.pow(i as u32))
        .collect()
}

fn poly_mul(x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); x.len() + y.len() - 1];
    for (i, a) in x.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in y.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

fn poly_add_scaled(acc: &mut Vec<BigInt>, x: &[BigInt], c: &BigInt) {
    if acc.len() < x.len() {
        acc.resize(x.len(), BigInt::zero());
    }
    for (a, b) in acc.iter_mut().zip(x) {
        *a += c * b;
    }
}

/// Divides every coefficient by `d`, which must divide exactly and leave
/// non-negative values.
fn exact_quotient(p: Vec<BigInt>, d: &BigInt, what: &str) -> Result<Vec<BigUint>> {
    p.into_iter()
        .enumerate()
        .map(|(i, c)| {
            let (quot, rem) = c.div_rem(d);
            if !rem.is_zero() || quot.sign() == Sign::Minus {
                Err(Error::Inconsistent(format!("{what}: coefficient {i} is {c}/{d}")))
            } else {
                Ok(quot.to_biguint().expect("non-negative"))
            }
        })
        .collect()
}

/// Σ_E counts[E] (1 + (q−1)s)^{N−E} (1 − s)^E.
fn macwilliams_kernel_sum(q: u32, nn: usize, counts: &[BigUint]) -> Vec<BigInt> {
    let one = BigInt::one();
    let qm1 = BigInt::from(q - 1);
    let mut acc = vec![BigInt::zero(); nn + 1];
    for (e, c) in counts.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let p = poly_mul(&linear_pow(&one, &qm1, nn - e), &linear_pow(&one, &-&one, e));
        poly_add_scaled(&mut acc, &p, &BigInt::from(c.clone()));
    }
    acc
}

/// b(s) = (1/q)[(1 + (q−1)s)^{r+1} + (q−1)(1 − s)^{r+1}], the enumerator of
/// the [r+1, r] single parity-check code.
pub fn b_coeffs(q: u32, r: usize) -> Vec<BigUint> {
    let one = BigInt::one();
    let qm1 = BigInt::from(q - 1);
    let mut p = linear_pow(&one, &qm1, r + 1);
    poly_add_scaled(&mut p, &linear_pow(&one, &-&one, r + 1), &qm1);
    exact_quotient(p, &BigInt::from(q), "b(s)").expect("b(s) has integer coefficients")
}

/// The binary closed form
/// g(s) = 2^{−(r+2)} Σ_i C(r+2,i) (1+s)^{N − i(r+2−i)} (1−s)^{i(r+2−i)},
/// N = C(r+2, 2).
pub fn g2_closed_form(r: usize) -> Vec<BigUint> {
    let v = r + 2;
    let nn = v * (v - 1) / 2;
    let one = BigInt::one();
    let mut acc = vec![BigInt::zero(); nn + 1];
    for i in 0..=v {
        let cut = i * (v - i);
        let p = poly_mul(&linear_pow(&one, &one, nn - cut), &linear_pow(&one, &-&one, cut));
        poly_add_scaled(&mut acc, &p, &BigInt::from(binomial(v, i)));
    }
    exact_quotient(acc, &(BigInt::one() << v), "closed-form g(s)").expect("integer enumerator")
}

/// Which coefficient vectors on the vertices of K_{r+2} to count when
/// building the incidence-code enumerator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IncidenceCount {
    /// All of F_q^{r+2}, divided by q^{r+2}: the composition formula as
    /// stated with the multinomial sum.
    AllVertices,
    /// The deleted (last) vertex pinned to 0, divided by q^{r+1}: exactly
    /// the row space of the incidence matrix with that row removed.
    DeletedVertexPinned,
}

/// Multiplicity of each weight E among the words a·H̃ of the vertex-edge
/// incidence code of K_{r+2}, where a ranges over the chosen coefficient
/// vectors. Returns (counts indexed by E, log_q of the divisor).
///
/// An edge {u, v} is zero iff a_u + a_v = 0, so the count depends only on
/// the composition of a: for even q, classes are single field elements and
/// a class of size i contributes C(i, 2) zero edges; for odd q, zero forms
/// one class with C(i_0, 2) and each pair {α, −α} contributes i_α·i_{−α}.
pub fn incidence_weight_counts(q: u32, r: usize, mode: IncidenceCount) -> (Vec<BigUint>, u32) {
    let v = r + 2;
    let nn = v * (v - 1) / 2;
    let (free, pinned, div_exp) = match mode {
        IncidenceCount::AllVertices => (v, 0, v as u32),
        IncidenceCount::DeletedVertexPinned => (v - 1, 1, (v - 1) as u32),
    };
    let binom = binomial_table(free);
    // table[used][zero_edges], combined by binomial convolution over `used`
    let zero_class = {
        let mut t = Table::empty(free, nn);
        for i in 0..=free {
            let z = (i + pinned) * (i + pinned).saturating_sub(1) / 2;
            t.cells[i][z] = BigUint::one();
        }
        t
    };
    let other = if q % 2 == 0 {
        let mut single = Table::empty(free, nn);
        for i in 0..=free {
            single.cells[i][i * i.saturating_sub(1) / 2] = BigUint::one();
        }
        single.pow((q - 1) as usize, &binom)
    } else {
        let mut pair = Table::empty(free, nn);
        for i in 0..=free {
            for j in 0..=free - i {
                let ways = binom[i + j][i].to_biguint().expect("positive");
                pair.cells[i + j][i * j] += ways;
            }
        }
        pair.pow(((q - 1) / 2) as usize, &binom)
    };
    let all = zero_class.convolve(&other, &binom);
    let mut counts = vec![BigUint::zero(); nn + 1];
    for (z, c) in all.cells[free].iter().enumerate() {
        counts[nn - z] += c;
    }
    (counts, div_exp)
}

/// g_q(s): the enumerator obtained by the MacWilliams transform of the
/// incidence-code word counts. With `DeletedVertexPinned` this is the weight
/// enumerator of the code with parity-check matrix H_0 for every q; with
/// `AllVertices` it is the composition formula, which agrees with the former
/// for even q.
pub fn g_coeffs(q: u32, r: usize, mode: IncidenceCount) -> Result<Vec<BigUint>> {
    let (counts, div_exp) = incidence_weight_counts(q, r, mode);
    let nn = counts.len() - 1;
    let acc = macwilliams_kernel_sum(q, nn, &counts);
    let d = BigInt::from(q).pow(div_exp);
    exact_quotient(acc, &d, "g(s)")
}

#[derive(Clone)]
struct Table {
    cells: Vec<Vec<BigUint>>,
}

impl Table {
    fn empty(free: usize, nn: usize) -> Table {
        Table {
            cells: vec![vec![BigUint::zero(); nn + 1]; free + 1],
        }
    }

    fn identity(free: usize, nn: usize) -> Table {
        let mut t = Table::empty(free, nn);
        t.cells[0][0] = BigUint::one();
        t
    }

    /// Labelled product: positions are split between the two factors in
    /// C(u1 + u2, u1) ways.
    fn convolve(&self, other: &Table, binom: &[Vec<BigInt>]) -> Table {
        let free = self.cells.len() - 1;
        let nn = self.cells[0].len() - 1;
        let mut out = Table::empty(free, nn);
        for u1 in 0..=free {
            for (z1, a) in self.cells[u1].iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for u2 in 0..=free - u1 {
                    let w = binom[u1 + u2][u1].to_biguint().expect("positive") * a;
                    for (z2, b) in other.cells[u2].iter().enumerate() {
                        if b.is_zero() || z1 + z2 > nn {
                            continue;
                        }
                        out.cells[u1 + u2][z1 + z2] += &w * b;
                    }
                }
            }
        }
        out
    }

    fn pow(&self, mut e: usize, binom: &[Vec<BigInt>]) -> Table {
        let free = self.cells.len() - 1;
        let nn = self.cells[0].len() - 1;
        let mut result = Table::identity(free, nn);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.convolve(&base, binom);
            }
            e >>= 1;
            if e > 0 {
                base = base.convolve(&base, binom);
            }
        }
        result
    }
}

/// Natural logarithm of a big integer.
pub(crate) fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
}
