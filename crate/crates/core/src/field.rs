//! Finite fields GF(q) for prime powers q ≤ 4096.
//!
//! Elements are encoded as integers `0..q`: the base-p digits of an element
//! are the coefficients of its polynomial representative, lowest degree
//! first. Extension fields use the lexicographically smallest monic
//! irreducible polynomial of degree m over GF(p), with coefficient vectors
//! compared from the constant term upwards. Multiplication goes through
//! log/antilog tables built from the smallest primitive element.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A field element in its integer encoding.
pub type Elem = u32;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 4096;

#[derive(Clone)]
pub struct Field {
    inner: Arc<Inner>,
}

struct Inner {
    q: u32,
    p: u32,
    m: u32,
    /// Monic reduction polynomial, coefficients low to high (length m + 1).
    modulus: Vec<u32>,
    /// exp[i] = g^i for i in 0..2(q-1).
    exp: Vec<Elem>,
    /// log[a] for a != 0.
    log: Vec<u32>,
}

impl Field {
    /// Builds GF(q). Deterministic: the same q always yields the same tables.
    pub fn new(q: u64) -> Result<Field> {
        if q > MAX_ORDER {
            return Err(Error::FieldTooLarge(q));
        }
        let (p, m) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        let (p, m) = (p as u32, m as u32);
        let modulus = if m == 1 {
            vec![0, 1]
        } else {
            smallest_irreducible(p, m)
        };
        let q = q as u32;
        let mul = |a: Elem, b: Elem| poly_mul_mod(a, b, p, m, &modulus);
        let g = primitive_element(q, &mul);

        let order = (q - 1) as usize;
        let mut exp = vec![0; 2 * order.max(1)];
        let mut log = vec![0; q as usize];
        let mut x: Elem = 1;
        for i in 0..order {
            exp[i] = x;
            log[x as usize] = i as u32;
            x = mul(x, g);
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        Ok(Field {
            inner: Arc::new(Inner {
                q,
                p,
                m,
                modulus,
                exp,
                log,
            }),
        })
    }

    pub fn order(&self) -> u32 {
        self.inner.q
    }

    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.m
    }

    /// Reduction polynomial, coefficients from the constant term upwards.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    /// Human-readable polynomial identifier such as `x^2+x+1`.
    pub fn modulus_string(&self) -> String {
        let mut terms = Vec::new();
        for (i, &c) in self.inner.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && i > 0 {
                String::new()
            } else {
                c.to_string()
            };
            terms.push(match i {
                0 => format!("{c}"),
                1 => format!("{coef}x"),
                _ => format!("{coef}x^{i}"),
            });
        }
        terms.join("+")
    }

    #[inline]
    pub fn contains(&self, a: Elem) -> bool {
        a < self.inner.q
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let f = &*self.inner;
        if f.m == 1 {
            let s = a + b;
            if s >= f.p {
                s - f.p
            } else {
                s
            }
        } else if f.p == 2 {
            a ^ b
        } else {
            digitwise(a, b, f.p, f.m, |x, y| (x + y) % f.p)
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let f = &*self.inner;
        if a == 0 || f.p == 2 {
            a
        } else if f.m == 1 {
            f.p - a
        } else {
            digitwise(a, 0, f.p, f.m, |x, _| (f.p - x) % f.p)
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let f = &*self.inner;
        f.exp[(f.log[a as usize] + f.log[b as usize]) as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            return None;
        }
        let f = &*self.inner;
        let order = f.q - 1;
        Some(f.exp[((order - f.log[a as usize]) % order) as usize])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let f = &*self.inner;
        let order = (f.q - 1) as u64;
        let l = (f.log[a as usize] as u64 * (e % order)) % order;
        f.exp[l as usize]
    }

    /// The primitive element used to build the log tables.
    pub fn generator(&self) -> Elem {
        if self.inner.q == 2 {
            1
        } else {
            self.inner.exp[1]
        }
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.inner.q
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        // the construction is canonical, so the order identifies the field
        self.inner.q == other.inner.q
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.m == 1 {
            write!(f, "GF({})", self.inner.q)
        } else {
            write!(f, "GF({}) mod {}", self.inner.q, self.modulus_string())
        }
    }
}

fn digitwise(a: u32, b: u32, p: u32, m: u32, op: impl Fn(u32, u32) -> u32) -> u32 {
    let (mut a, mut b) = (a, b);
    let mut out = 0;
    let mut place = 1;
    for _ in 0..m {
        out += op(a % p, b % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

/// Returns (p, m) with q = p^m, p prime.
pub fn prime_power(q: u64) -> Option<(u64, u64)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut m = 0;
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

// Polynomials over GF(p) as coefficient vectors, lowest degree first.

fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let lead_inv = mod_inv(den[dd], p);
    while r.len() > dd && !(r.len() == 1 && r[0] == 0) {
        let shift = r.len() - 1 - dd;
        let c = r[r.len() - 1] * lead_inv % p;
        if c != 0 {
            for (i, &d) in den.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - c * d % p) % p;
            }
        }
        r.pop();
    }
    trim(r)
}

fn mod_inv(a: u32, p: u32) -> u32 {
    // p is prime and small; Fermat
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

fn to_digits(mut a: u32, p: u32, m: u32) -> Vec<u32> {
    (0..m)
        .map(|_| {
            let d = a % p;
            a /= p;
            d
        })
        .collect()
}

fn from_digits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn poly_mul_mod(a: Elem, b: Elem, p: u32, m: u32, modulus: &[u32]) -> Elem {
    if m == 1 {
        return ((a as u64 * b as u64) % p as u64) as u32;
    }
    let da = to_digits(a, p, m);
    let db = to_digits(b, p, m);
    let mut prod = vec![0u32; 2 * m as usize - 1];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let mut r = poly_rem(&prod, modulus, p);
    r.resize(m as usize, 0);
    from_digits(&r, p)
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        // every monic polynomial of degree d
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut g: Vec<u32> = to_digits(idx as u32, p, d as u32);
            g.push(1);
            let r = poly_rem(f, &g, p);
            if r.len() == 1 && r[0] == 0 {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree m, comparing the
/// coefficient vector (c0, c1, ..., c_{m-1}) with c0 most significant.
fn smallest_irreducible(p: u32, m: u32) -> Vec<u32> {
    let count = (p as u64).pow(m);
    for idx in 0..count {
        let mut f: Vec<u32> = (0..m)
            .map(|j| ((idx / (p as u64).pow(m - 1 - j)) % p as u64) as u32)
            .collect();
        f.push(1);
        if f[0] != 0 && is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist for every degree")
}

fn primitive_element(q: u32, mul: &impl Fn(Elem, Elem) -> Elem) -> Elem {
    if q == 2 {
        return 1;
    }
    let order = q - 1;
    let mut factors = Vec::new();
    let mut rest = order;
    let mut d = 2;
    while d * d <= rest {
        if rest % d == 0 {
            factors.push(d);
            while rest % d == 0 {
                rest /= d;
            }
        }
        d += 1;
    }
    if rest > 1 {
        factors.push(rest);
    }
    let pow = |a: Elem, mut e: u32| {
        let (mut base, mut acc) = (a, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            e >>= 1;
        }
        acc
    };
    (2..q)
        .find(|&g| factors.iter().all(|&f| pow(g, order / f) != 1))
        .expect("the multiplicative group is cyclic")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(4096), Some((2, 12)));
        assert_eq!(prime_power(243), Some((3, 5)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn rejects_bad_orders() {
        assert_eq!(Field::new(6).unwrap_err(), Error::NotPrimePower(6));
        assert_eq!(Field::new(8192).unwrap_err(), Error::FieldTooLarge(8192));
    }

    #[test]
    fn gf2_is_prime_field() {
        let f = Field::new(2).unwrap();
        assert_eq!(f.elements().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(f.add(1, 1), 0);
        assert_eq!(f.mul(1, 1), 1);
    }

    #[test]
    fn gf4_uses_x2_plus_x_plus_1() {
        let f = Field::new(4).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        // x is element 2, x^2 = x + 1 is element 3
        assert_eq!(f.mul(2, 2), 3);
        assert_eq!(f.modulus_string(), "x^2+x+1");
    }

    #[test]
    fn gf9_modulus_is_smallest_in_low_to_high_order() {
        // over GF(3): x^2 + 1 has no roots and (1, 0) precedes (1, 1), (2, 1)
        let f = Field::new(9).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
    }

    fn check_axioms(q: u64) {
        let f = Field::new(q).unwrap();
        let q = q as u32;
        for a in 0..q {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            for b in 0..q {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in 0..q {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_to_64() {
        for q in (2..=64).filter(|&q| prime_power(q).is_some()) {
            check_axioms(q);
        }
    }

    #[test]
    fn large_fields_have_consistent_tables() {
        for q in [1024u64, 2187, 4096, 4093] {
            let f = Field::new(q).unwrap();
            let g = f.generator();
            assert_eq!(f.pow(g, q - 1), 1);
            for a in (1..q as u32).step_by(37) {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                assert_eq!(f.sub(f.add(a, 17 % q as u32), 17 % q as u32), a);
            }
        }
    }
}
