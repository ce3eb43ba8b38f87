//! Arithmetic in odd-characteristic finite fields `F_{p^n}`.
//!
//! Elements are stored as an index in `[0, q)`: the coefficient vector
//! `(c_0, .., c_{n-1})` of the polynomial representative maps to
//! `c_0 + c_1 p + .. + c_{n-1} p^{n-1}`. Multiplication goes through
//! discrete log tables built once per field; the quadratic character is a
//! table lookup.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest field size the crate will build tables for.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

/// Which extension of the quadratic character to use at zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CharVariant {
    /// `chi(0) = 0`.
    Strict,
    /// `chi(0) = 1`, i.e. zero counts as a square.
    Tilde,
}

/// An element of a finite field.
///
/// Carries a fingerprint of its field so that mixing fields is caught in
/// debug builds and by the checked entry points.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    value: u32,
    tag: u32,
}

impl FieldElement {
    /// Index of the element in the field's canonical ordering.
    #[inline]
    pub fn index(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    #[inline]
    pub fn tag(self) -> u32 {
        self.tag
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.value)
    }
}

struct FieldInner {
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    tag: u32,
    // exp[i] = g^i for a fixed primitive element g, i in [0, q-1)
    exp: Vec<u32>,
    // log[x] for x != 0; log[0] is unused
    log: Vec<u32>,
    // strict quadratic character
    chi: Vec<i8>,
}

/// A finite field `F_q`, `q = p^n`, `p` odd. Cheap to clone.
#[derive(Clone)]
pub struct Field {
    inner: Arc<FieldInner>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.spec_string())
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.inner.p == other.inner.p
            && self.inner.n == other.inner.n
            && self.inner.modulus == other.inner.modulus
    }
}

impl Eq for Field {}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Dense polynomials over `F_p` used only while setting up a field.
mod fp {
    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn inv(a: u64, p: u64) -> u64 {
        pow(a, p - 2, p)
    }

    pub fn pow(mut b: u64, mut e: u64, p: u64) -> u64 {
        let mut r = 1 % p;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv(m[dm], p);
        while r.len() > dm && !r.is_empty() {
            let dr = r.len() - 1;
            let c = r[dr] * lead_inv % p;
            let shift = dr - dm;
            for (i, &mi) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - c * mi % p) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        rem(&prod, m, p)
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// No irreducible factor of degree <= deg/2, checked by
    /// `gcd(x^{p^i} - x, m) = 1` for `i = 1..=deg/2`.
    pub fn is_irreducible(m: &[u64], p: u64) -> bool {
        let deg = m.len() - 1;
        if deg <= 1 {
            return deg == 1;
        }
        let x = vec![0, 1];
        let mut xp = x.clone();
        for _ in 1..=deg / 2 {
            // xp <- xp^p mod m
            let mut acc = vec![1];
            let mut base = xp.clone();
            let mut e = p;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mulmod(&acc, &base, m, p);
                }
                base = mulmod(&base, &base, m, p);
                e >>= 1;
            }
            xp = acc;
            let mut diff = xp.clone();
            diff.resize(diff.len().max(2), 0);
            diff[1] = (diff[1] + p - 1) % p;
            trim(&mut diff);
            let g = gcd(m, &diff, p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

fn fingerprint(p: u32, n: u32, modulus: &[u32]) -> u32 {
    // FNV-1a over the defining data
    let mut h: u32 = 0x811c_9dc5;
    for w in [p, n].iter().chain(modulus.iter()) {
        for b in w.to_le_bytes() {
            h ^= b as u32;
            h = h.wrapping_mul(0x0100_0193);
        }
    }
    h
}

impl Field {
    /// Builds `F_{p^n}`. Without an explicit modulus the lexicographically
    /// least monic irreducible of degree `n` is used (lower coefficients
    /// read as a base-`p` number, `c_0` least significant).
    pub fn new(p: u32, n: u32, modulus: Option<&[u32]>) -> Result<Field> {
        if p < 3 || !is_prime(p as u64) {
            return Err(Error::NotOddPrime(p as u64));
        }
        if n == 0 {
            return Err(Error::DegreeMismatch { expected: 1, found: 0 });
        }
        let q = (p as u64).checked_pow(n).filter(|&q| q <= MAX_FIELD_SIZE);
        let Some(q) = q else {
            return Err(Error::FieldTooLarge { p: p as u64, n });
        };
        let q = q as u32;
        let modulus: Vec<u32> = match modulus {
            Some(m) => {
                if m.len() != n as usize + 1 {
                    return Err(Error::DegreeMismatch {
                        expected: n as usize,
                        found: m.len().saturating_sub(1),
                    });
                }
                if m[n as usize] % p != 1 {
                    return Err(Error::NotMonic);
                }
                let m: Vec<u32> = m.iter().map(|c| c % p).collect();
                if n > 1 {
                    let m64: Vec<u64> = m.iter().map(|&c| c as u64).collect();
                    if !fp::is_irreducible(&m64, p as u64) {
                        return Err(Error::ReducibleModulus);
                    }
                    m
                } else {
                    // elements are plain residues; the modulus is a placeholder
                    vec![0, 1]
                }
            }
            None if n == 1 => vec![0, 1],
            None => Self::least_irreducible(p, n),
        };
        Ok(Self::build(p, n, q, modulus))
    }

    /// Prime field `F_p`.
    pub fn prime(p: u32) -> Result<Field> {
        Self::new(p, 1, None)
    }

    fn least_irreducible(p: u32, n: u32) -> Vec<u32> {
        let count = (p as u64).pow(n);
        for t in 0..count {
            let mut m = Vec::with_capacity(n as usize + 1);
            let mut r = t;
            for _ in 0..n {
                m.push(r % p as u64);
                r /= p as u64;
            }
            m.push(1);
            if fp::is_irreducible(&m, p as u64) {
                return m.into_iter().map(|c| c as u32).collect();
            }
        }
        unreachable!("irreducible polynomials of every degree exist over F_p")
    }

    fn build(p: u32, n: u32, q: u32, modulus: Vec<u32>) -> Field {
        let tag = fingerprint(p, n, &modulus);
        let m64: Vec<u64> = modulus.iter().map(|&c| c as u64).collect();
        let p64 = p as u64;
        let to_poly = |mut x: u64| -> Vec<u64> {
            let mut v = Vec::with_capacity(n as usize);
            for _ in 0..n {
                v.push(x % p64);
                x /= p64;
            }
            fp::trim(&mut v);
            v
        };
        let from_poly = |v: &[u64]| -> u64 { v.iter().rev().fold(0, |acc, &c| acc * p64 + c) };
        let slow_mul = |a: u64, b: u64| -> u64 {
            if n == 1 {
                a * b % p64
            } else {
                from_poly(&fp::mulmod(&to_poly(a), &to_poly(b), &m64, p64))
            }
        };
        let slow_pow = |b: u64, mut e: u64| -> u64 {
            let mut r = 1u64;
            let mut base = b;
            while e > 0 {
                if e & 1 == 1 {
                    r = slow_mul(r, base);
                }
                base = slow_mul(base, base);
                e >>= 1;
            }
            r
        };
        let order = q as u64 - 1;
        let factors = prime_factors(order);
        let gen = (2..q as u64)
            .find(|&g| factors.iter().all(|&r| slow_pow(g, order / r) != 1))
            .unwrap_or(1);
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u64;
        for (i, e) in exp.iter_mut().enumerate() {
            *e = x as u32;
            log[x as usize] = i as u32;
            x = slow_mul(x, gen);
        }
        let mut chi = vec![-1i8; q as usize];
        chi[0] = 0;
        for i in (0..order as usize).step_by(2) {
            chi[exp[i] as usize] = 1;
        }
        Field {
            inner: Arc::new(FieldInner { p, n, q, modulus, tag, exp, log, chi }),
        }
    }

    /// Parses `"p"`, `"p^n"`, `"p^n:c0,c1,...,1"`, or a bare prime power `"q"`.
    pub fn parse(spec: &str) -> Result<Field> {
        spec.parse()
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.inner.n
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.inner.q
    }

    /// Modulus coefficients, low to high. For prime fields this is `x`.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    #[inline]
    pub fn tag(&self) -> u32 {
        self.inner.tag
    }

    /// Canonical text form: `"p"` for prime fields, `"p^n:c0,...,1"` otherwise.
    pub fn spec_string(&self) -> String {
        if self.inner.n == 1 {
            self.inner.p.to_string()
        } else {
            let coeffs: Vec<String> = self.inner.modulus.iter().map(|c| c.to_string()).collect();
            format!("{}^{}:{}", self.inner.p, self.inner.n, coeffs.join(","))
        }
    }

    #[inline]
    fn wrap(&self, value: u32) -> FieldElement {
        FieldElement { value, tag: self.inner.tag }
    }

    /// Checks that `x` belongs to this field.
    pub fn check(&self, x: FieldElement) -> Result<()> {
        if x.tag == self.inner.tag && x.value < self.inner.q {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    #[inline]
    pub fn zero(&self) -> FieldElement {
        self.wrap(0)
    }

    #[inline]
    pub fn one(&self) -> FieldElement {
        self.wrap(1)
    }

    /// Element with the given index.
    pub fn element(&self, index: u32) -> Result<FieldElement> {
        if index < self.inner.q {
            Ok(self.wrap(index))
        } else {
            Err(Error::InvalidArgument(format!(
                "element index {index} out of range for field of order {}",
                self.inner.q
            )))
        }
    }

    /// Element from index without a range check.
    #[inline]
    pub fn element_unchecked(&self, index: u32) -> FieldElement {
        debug_assert!(index < self.inner.q);
        self.wrap(index)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> FieldElement {
        self.wrap(v.rem_euclid(self.inner.p as i64) as u32)
    }

    /// Element from its coefficient vector (low to high); missing entries are zero.
    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<FieldElement> {
        if coeffs.len() > self.inner.n as usize {
            return Err(Error::DegreeMismatch {
                expected: self.inner.n as usize,
                found: coeffs.len(),
            });
        }
        let p = self.inner.p as i64;
        let v = coeffs.iter().rev().fold(0i64, |acc, &c| acc * p + c.rem_euclid(p));
        Ok(self.wrap(v as u32))
    }

    /// Coefficient vector of length `n`.
    pub fn coeffs(&self, x: FieldElement) -> Vec<u32> {
        let p = self.inner.p;
        let mut v = x.value;
        (0..self.inner.n)
            .map(|_| {
                let c = v % p;
                v /= p;
                c
            })
            .collect()
    }

    /// The class of the indeterminate (a root of the modulus). Zero for
    /// prime fields, where the modulus is the placeholder `x`.
    pub fn generator(&self) -> FieldElement {
        if self.inner.n == 1 {
            self.zero()
        } else {
            self.wrap(self.inner.p)
        }
    }

    /// True if `x` lies in the prime subfield.
    pub fn in_prime_subfield(&self, x: FieldElement) -> bool {
        x.value < self.inner.p
    }

    /// All `q` elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.inner.q).map(move |v| self.wrap(v))
    }

    #[inline]
    fn debug_check(&self, x: FieldElement) {
        debug_assert_eq!(x.tag, self.inner.tag, "element from a different field");
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.debug_check(a);
        self.debug_check(b);
        self.wrap(self.add_raw(a.value, b.value))
    }

    #[inline]
    pub(crate) fn add_raw(&self, a: u32, b: u32) -> u32 {
        let p = self.inner.p;
        if self.inner.n == 1 {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut pw = 1;
        while a > 0 || b > 0 {
            let s = a % p + b % p;
            out += if s >= p { s - p } else { s } * pw;
            a /= p;
            b /= p;
            pw *= p;
        }
        out
    }

    #[inline]
    pub(crate) fn neg_raw(&self, a: u32) -> u32 {
        let p = self.inner.p;
        if self.inner.n == 1 {
            return if a == 0 { 0 } else { p - a };
        }
        let mut a = a;
        let mut out = 0;
        let mut pw = 1;
        while a > 0 {
            let c = a % p;
            out += if c == 0 { 0 } else { p - c } * pw;
            a /= p;
            pw *= p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.debug_check(a);
        self.wrap(self.neg_raw(a.value))
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.debug_check(a);
        self.debug_check(b);
        self.wrap(self.add_raw(a.value, self.neg_raw(b.value)))
    }

    #[inline]
    pub(crate) fn mul_raw(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let inner = &*self.inner;
        let ord = inner.q - 1;
        let s = inner.log[a as usize] + inner.log[b as usize];
        inner.exp[(if s >= ord { s - ord } else { s }) as usize]
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.debug_check(a);
        self.debug_check(b);
        self.wrap(self.mul_raw(a.value, b.value))
    }

    /// Multiplicative inverse; `None` at zero.
    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        self.debug_check(a);
        if a.value == 0 {
            return None;
        }
        let ord = self.inner.q - 1;
        let l = self.inner.log[a.value as usize];
        Some(self.wrap(self.inner.exp[((ord - l) % ord) as usize]))
    }

    /// `a / b`; `None` when `b = 0`.
    pub fn div(&self, a: FieldElement, b: FieldElement) -> Option<FieldElement> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    #[inline]
    pub(crate) fn pow_raw(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let ord = (self.inner.q - 1) as u64;
        let l = self.inner.log[a as usize] as u64;
        self.inner.exp[((l * (e % ord)) % ord) as usize]
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        self.debug_check(a);
        self.wrap(self.pow_raw(a.value, e))
    }

    /// Inverse of the Frobenius map `x -> x^p`, i.e. `x -> x^{p^{n-1}}`.
    pub fn frobenius_inv(&self, a: FieldElement) -> FieldElement {
        let e = (self.inner.p as u64).pow(self.inner.n - 1);
        self.pow(a, e)
    }

    /// Quadratic character of the element with index `a` (strict, `chi(0) = 0`).
    #[inline]
    pub fn chi_raw(&self, a: u32) -> i8 {
        self.inner.chi[a as usize]
    }

    #[inline]
    pub fn chi(&self, a: FieldElement) -> i8 {
        self.debug_check(a);
        self.inner.chi[a.value as usize]
    }

    /// Quadratic character with the chosen value at zero.
    pub fn quad_char(&self, x: FieldElement, variant: CharVariant) -> Result<i8> {
        self.check(x)?;
        Ok(match (variant, x.value) {
            (CharVariant::Tilde, 0) => 1,
            _ => self.inner.chi[x.value as usize],
        })
    }

    /// True iff `x = y^2` for some `y`, zero included.
    pub fn is_square(&self, x: FieldElement) -> Result<bool> {
        self.check(x)?;
        Ok(self.inner.chi[x.value as usize] >= 0)
    }

    /// Table of the quadratic character over all elements.
    pub fn char_table(&self, variant: CharVariant) -> CharTable {
        let mut values = self.inner.chi.clone();
        if variant == CharVariant::Tilde {
            values[0] = 1;
        }
        CharTable { values, variant }
    }

    /// Smallest-index non-square.
    pub fn nonsquare(&self) -> FieldElement {
        let idx = self.inner.chi.iter().position(|&c| c == -1).expect("odd q has non-squares");
        self.wrap(idx as u32)
    }

    /// Formats an element: an integer for prime-subfield elements,
    /// otherwise a polynomial in the generator `t`.
    pub fn format(&self, x: FieldElement) -> String {
        if self.in_prime_subfield(x) {
            return x.value.to_string();
        }
        let coeffs = self.coeffs(x);
        let mut parts = Vec::new();
        for (i, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let part = match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "t".to_string(),
                (1, c) => format!("{c}*t"),
                (i, 1) => format!("t^{i}"),
                (i, c) => format!("{c}*t^{i}"),
            };
            parts.push(part);
        }
        parts.join(" + ")
    }

    /// `F_{q^e}` together with the image of every element of `self` under a
    /// fixed embedding (indexed by element index).
    pub fn extension(&self, e: u32) -> Result<(Field, Vec<FieldElement>)> {
        if e == 1 {
            return Ok((self.clone(), self.elements().collect()));
        }
        let big = Field::new(self.inner.p, self.inner.n * e, None)?;
        let modulus = &self.inner.modulus;
        let root = if self.inner.n == 1 {
            big.zero()
        } else {
            big.elements()
                .find(|&b| {
                    let mut acc = big.zero();
                    for &c in modulus.iter().rev() {
                        acc = big.add(big.mul(acc, b), big.from_int(c as i64));
                    }
                    acc.is_zero()
                })
                .expect("modulus splits in the extension")
        };
        let images = self
            .elements()
            .map(|x| {
                let mut acc = big.zero();
                for &c in self.coeffs(x).iter().rev() {
                    acc = big.add(big.mul(acc, root), big.from_int(c as i64));
                }
                acc
            })
            .collect();
        Ok((big, images))
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Field> {
        let s = s.trim();
        let bad = |msg: &str| Error::InvalidArgument(format!("field spec {s:?}: {msg}"));
        let (head, modulus) = match s.split_once(':') {
            Some((h, m)) => (h, Some(m)),
            None => (s, None),
        };
        let (p, n): (u64, u32) = match head.split_once('^') {
            Some((p, n)) => (
                p.trim().parse().map_err(|_| bad("bad characteristic"))?,
                n.trim().parse().map_err(|_| bad("bad degree"))?,
            ),
            None => {
                let q: u64 = head.trim().parse().map_err(|_| bad("expected an integer"))?;
                // accept a bare prime power
                match prime_factors(q).as_slice() {
                    [p] => {
                        let mut n = 0;
                        let mut r = q;
                        while r > 1 {
                            r /= p;
                            n += 1;
                        }
                        (*p, n)
                    }
                    _ => (q, 1),
                }
            }
        };
        if p > u32::MAX as u64 {
            return Err(Error::NotOddPrime(p));
        }
        match modulus {
            None => Field::new(p as u32, n, None),
            Some(m) => {
                let coeffs: Vec<u32> = m
                    .split(',')
                    .map(|c| c.trim().parse::<u32>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| bad("bad modulus coefficient"))?;
                Field::new(p as u32, n, Some(&coeffs))
            }
        }
    }
}

/// Quadratic character values for every element, in index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharTable {
    pub values: Vec<i8>,
    pub variant: CharVariant,
}

impl CharTable {
    #[inline]
    pub fn get(&self, x: FieldElement) -> i8 {
        self.values[x.index() as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f = Field::new(5, 1, None).unwrap();
        assert_eq!(f.order(), 5);
        assert_eq!(f.spec_string(), "5");
        assert_eq!(f.quad_char(f.zero(), CharVariant::Strict).unwrap(), 0);
        assert_eq!(f.quad_char(f.zero(), CharVariant::Tilde).unwrap(), 1);
        assert!(f.is_square(f.zero()).unwrap());
        assert!(f.is_square(f.from_int(4)).unwrap());
    }

    #[test]
    fn f9_uses_x2_plus_1() {
        let f = Field::new(3, 2, None).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        assert_eq!(f.order(), 9);
        assert_eq!(f.elements().next().unwrap(), f.zero());
        assert_eq!(f.elements().count(), 9);
        // t^2 = -1
        let t = f.generator();
        assert_eq!(f.mul(t, t), f.from_int(-1));
    }

    #[test]
    fn rejects_even_and_composite_characteristic() {
        assert!(matches!(Field::new(2, 1, None), Err(Error::NotOddPrime(2))));
        assert!(matches!(Field::new(9, 1, None), Err(Error::NotOddPrime(9))));
    }

    #[test]
    fn rejects_reducible_modulus() {
        // x^2 - 1 = (x-1)(x+1) over F_3
        assert!(matches!(Field::new(3, 2, Some(&[2, 0, 1])), Err(Error::ReducibleModulus)));
        assert!(matches!(
            Field::new(3, 2, Some(&[1, 1])),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn chi_mod_7() {
        let f = Field::prime(7).unwrap();
        assert_eq!(f.quad_char(f.from_int(3), CharVariant::Strict).unwrap(), -1);
        assert!(!f.is_square(f.from_int(5)).unwrap());
        let squares: Vec<u32> =
            f.elements().filter(|&x| f.is_square(x).unwrap()).map(|x| x.index()).collect();
        assert_eq!(squares, vec![0, 1, 2, 4]);
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(Field::parse("7").unwrap().order(), 7);
        assert_eq!(Field::parse("3^2").unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(Field::parse("25").unwrap().order(), 25);
        let f = Field::parse("3^2:2,1,1").unwrap();
        assert_eq!(f.modulus(), &[2, 1, 1]);
        assert_eq!(Field::parse(&f.spec_string()).unwrap(), f);
        assert!(Field::parse("2").is_err());
        assert!(Field::parse("x").is_err());
    }

    #[test]
    fn field_mismatch_is_reported() {
        let f5 = Field::prime(5).unwrap();
        let f7 = Field::prime(7).unwrap();
        assert!(matches!(f5.quad_char(f7.one(), CharVariant::Strict), Err(Error::FieldMismatch)));
        assert!(matches!(f5.is_square(f7.one()), Err(Error::FieldMismatch)));
    }

    #[test]
    fn character_is_exact_square_test_up_to_121() {
        for spec in ["3", "5", "7", "9", "11", "13", "25", "27", "49", "81", "121"] {
            let f = Field::parse(spec).unwrap();
            let mut is_sq = vec![false; f.order() as usize];
            for y in f.elements() {
                is_sq[f.mul(y, y).index() as usize] = true;
            }
            let mut pos = 0;
            for x in f.elements().skip(1) {
                let c = f.quad_char(x, CharVariant::Strict).unwrap();
                assert_eq!(c == 1, is_sq[x.index() as usize], "{spec} {x:?}");
                if c == 1 {
                    pos += 1;
                }
            }
            assert_eq!(pos, (f.order() - 1) / 2);
            let total: i64 = f.elements().map(|x| f.chi(x) as i64).sum();
            assert_eq!(total, 0);
        }
    }

    #[test]
    fn character_is_multiplicative_up_to_49() {
        for spec in ["3", "5", "7", "9", "25", "27", "49"] {
            let f = Field::parse(spec).unwrap();
            for x in f.elements() {
                for y in f.elements() {
                    assert_eq!(f.chi(f.mul(x, y)), f.chi(x) * f.chi(y));
                }
            }
        }
    }

    #[test]
    fn field_axioms_up_to_25() {
        for spec in ["3", "5", "7", "9", "11", "13", "25"] {
            let f = Field::parse(spec).unwrap();
            let els: Vec<_> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, f.neg(a)), f.zero());
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_inverse_roundtrip() {
        let f = Field::parse("27").unwrap();
        for x in f.elements() {
            assert_eq!(f.pow(f.frobenius_inv(x), 3), x);
        }
    }

    #[test]
    fn extension_embedding_is_a_homomorphism() {
        for (spec, e) in [("3", 2), ("9", 2), ("5", 3)] {
            let f = Field::parse(spec).unwrap();
            let (big, img) = f.extension(e).unwrap();
            assert_eq!(big.order(), f.order().pow(e));
            for a in f.elements() {
                for b in f.elements() {
                    let ia = img[a.index() as usize];
                    let ib = img[b.index() as usize];
                    assert_eq!(img[f.add(a, b).index() as usize], big.add(ia, ib));
                    assert_eq!(img[f.mul(a, b).index() as usize], big.mul(ia, ib));
                }
            }
        }
    }
}
