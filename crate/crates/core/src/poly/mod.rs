//! Polynomial algebra over a [`Field`].
//!
//! [`MultiPoly`] is a sparse map from exponent vectors to nonzero
//! coefficients, kept in graded-lexicographic order. [`UniPoly`] is a dense
//! univariate polynomial. The submodules add gcd and square-free structure,
//! Gröbner bases, zero search and the text grammar.

mod gcd;
mod groebner;
mod parse;
mod uni;
mod zeros;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::ff::{Field, FieldElement};

pub use gcd::SquareFreeDecomposition;
pub use groebner::{groebner_basis, ideal_contains_one};
pub use parse::parse_poly;
pub use uni::UniPoly;
pub use zeros::{common_zero_search, zero_count, ZeroWitness};

/// Exponent vector. Ordered graded-lexicographically with `x1 > x2 > ..`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(&a, &b)| a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a == 0 || b == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial in `x1..xk` over a finite field.
#[derive(Clone)]
pub struct MultiPoly {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.nvars == other.nvars && self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({})", self.field.spec_string(), self)
    }
}

impl MultiPoly {
    pub fn zero(field: &Field, nvars: usize) -> Self {
        MultiPoly { field: field.clone(), nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: &Field, nvars: usize, c: FieldElement) -> Self {
        let mut p = Self::zero(field, nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn one(field: &Field, nvars: usize) -> Self {
        Self::constant(field, nvars, field.one())
    }

    /// The variable `x_{i+1}` (zero-based index `i`).
    pub fn var(field: &Field, nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(field, nvars);
        p.terms.insert(Monomial::var(nvars, i), field.one());
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; repeated
    /// monomials are summed.
    pub fn from_terms<I>(field: &Field, nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, FieldElement)>,
    {
        let mut p = Self::zero(field, nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::ArityMismatch { expected: nvars, found: e.len() });
            }
            field.check(c)?;
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let s = self.field.add(*old, c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &FieldElement)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True for constants, including zero.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_term(&self) -> FieldElement {
        self.terms.get(&Monomial::one(self.nvars)).copied().unwrap_or(self.field.zero())
    }

    pub fn coeff(&self, m: &Monomial) -> FieldElement {
        self.terms.get(m).copied().unwrap_or(self.field.zero())
    }

    /// Total degree; `-1` for the zero polynomial.
    pub fn total_degree(&self) -> i64 {
        self.terms.keys().next_back().map_or(-1, |m| m.degree() as i64)
    }

    /// Degree in one variable; `-1` for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> i64 {
        self.terms.keys().map(|m| m.0[var] as i64).max().unwrap_or(-1)
    }

    /// Leading term under graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, FieldElement)> {
        self.terms.iter().next_back().map(|(m, &c)| (m, c))
    }

    pub fn leading_coeff(&self) -> FieldElement {
        self.leading_term().map_or(self.field.zero(), |(_, c)| c)
    }

    /// Variables that occur with positive exponent.
    pub fn variables(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.terms.keys().any(|m| m.0[i] > 0)).collect()
    }

    fn same_space(&self, other: &MultiPoly) {
        assert_eq!(self.nvars, other.nvars, "polynomials in different numbers of variables");
        debug_assert!(self.field == other.field, "polynomials over different fields");
    }

    pub fn scale(&self, c: FieldElement) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(&self.field, self.nvars);
        }
        let terms = self.terms.iter().map(|(m, &a)| (m.clone(), self.field.mul(a, c))).collect();
        MultiPoly { field: self.field.clone(), nvars: self.nvars, terms }
    }

    pub fn mul_term(&self, m: &Monomial, c: FieldElement) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(&self.field, self.nvars);
        }
        let terms =
            self.terms.iter().map(|(t, &a)| (t.mul(m), self.field.mul(a, c))).collect();
        MultiPoly { field: self.field.clone(), nvars: self.nvars, terms }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = Self::one(&self.field, self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Scales so the graded-lex leading coefficient is 1. Zero stays zero.
    pub fn monic(&self) -> MultiPoly {
        match self.field.inv(self.leading_coeff()) {
            Some(inv) => self.scale(inv),
            None => self.clone(),
        }
    }

    /// Value at a point.
    pub fn eval(&self, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, found: point.len() });
        }
        for &x in point {
            self.field.check(x)?;
        }
        let idx: Vec<u32> = point.iter().map(|x| x.index()).collect();
        Ok(self.field.element_unchecked(self.eval_raw(&idx)))
    }

    /// Value at a point given by element indices; no checks.
    pub fn eval_raw(&self, point: &[u32]) -> u32 {
        let f = &self.field;
        let mut acc = 0u32;
        for (m, c) in &self.terms {
            let mut t = c.index();
            for (&x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t = f.mul_raw(t, f.pow_raw(x, e as u64));
                    if t == 0 {
                        break;
                    }
                }
            }
            acc = f.add_raw(acc, t);
        }
        acc
    }

    /// Substitutes `x_{var+1} = value` and drops that variable.
    pub fn partial_eval(&self, var: usize, value: FieldElement) -> Result<MultiPoly> {
        if var >= self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, found: var + 1 });
        }
        self.field.check(value)?;
        let mut out = Self::zero(&self.field, self.nvars - 1);
        for (m, &c) in &self.terms {
            let mut e = m.0.clone();
            let k = e.remove(var);
            let c = self.field.mul(c, self.field.pow(value, k as u64));
            out.add_term(Monomial(e), c);
        }
        Ok(out)
    }

    /// Univariate polynomial in `x_{keep+1}` after fixing every other
    /// variable; `others` lists the remaining values in variable order.
    pub fn specialize(&self, keep: usize, others: &[u32]) -> UniPoly {
        let f = &self.field;
        let deg = self.degree_in(keep).max(0) as usize;
        let mut coeffs = vec![0u32; deg + 1];
        for (m, c) in &self.terms {
            let mut t = c.index();
            let mut j = 0;
            for (i, &e) in m.0.iter().enumerate() {
                if i == keep {
                    continue;
                }
                if e > 0 {
                    t = f.mul_raw(t, f.pow_raw(others[j], e as u64));
                }
                j += 1;
            }
            let d = m.0[keep] as usize;
            coeffs[d] = f.add_raw(coeffs[d], t);
        }
        UniPoly::from_raw(f, coeffs)
    }

    /// Writes `f = sum_j H_j * x_{var+1}^j` and returns `[H_0, .., H_d]` as
    /// polynomials in the remaining variables. Zero gives an empty list.
    pub fn expand_in_var(&self, var: usize) -> Vec<MultiPoly> {
        let d = self.degree_in(var);
        if d < 0 {
            return Vec::new();
        }
        let mut out = vec![Self::zero(&self.field, self.nvars - 1); d as usize + 1];
        for (m, &c) in &self.terms {
            let mut e = m.0.clone();
            let j = e.remove(var) as usize;
            out[j].add_term(Monomial(e), c);
        }
        out
    }

    /// Coefficients with respect to `var`, kept in the full variable space
    /// (the exponent of `var` is zeroed).
    pub(crate) fn coeffs_in(&self, var: usize) -> Vec<MultiPoly> {
        let d = self.degree_in(var);
        if d < 0 {
            return Vec::new();
        }
        let mut out = vec![Self::zero(&self.field, self.nvars); d as usize + 1];
        for (m, &c) in &self.terms {
            let mut e = m.0.clone();
            let j = std::mem::replace(&mut e[var], 0) as usize;
            out[j].add_term(Monomial(e), c);
        }
        out
    }

    /// Renames variables: variable `i` becomes `mapping[i]` in a space of
    /// `new_nvars` variables.
    pub fn relabel(&self, new_nvars: usize, mapping: &[usize]) -> MultiPoly {
        assert_eq!(mapping.len(), self.nvars);
        let mut out = Self::zero(&self.field, new_nvars);
        for (m, &c) in &self.terms {
            let mut e = vec![0; new_nvars];
            for (i, &k) in m.0.iter().enumerate() {
                e[mapping[i]] += k;
            }
            out.add_term(Monomial(e), c);
        }
        out
    }

    /// Applies a permutation of the variables.
    pub fn permute(&self, perm: &[usize]) -> MultiPoly {
        self.relabel(self.nvars, perm)
    }

    /// Invariant under every adjacent transposition of variables.
    pub fn is_symmetric(&self) -> bool {
        (0..self.nvars.saturating_sub(1)).all(|i| {
            let mut perm: Vec<usize> = (0..self.nvars).collect();
            perm.swap(i, i + 1);
            self.permute(&perm) == *self
        })
    }

    /// Formal partial derivative in `var`.
    pub fn derivative(&self, var: usize) -> MultiPoly {
        let mut out = Self::zero(&self.field, self.nvars);
        for (m, &c) in &self.terms {
            let k = m.0[var];
            if k == 0 {
                continue;
            }
            let mut e = m.0.clone();
            e[var] -= 1;
            out.add_term(Monomial(e), self.field.mul(c, self.field.from_int(k as i64)));
        }
        out
    }

    /// Division with remainder by a single divisor under graded-lex order.
    pub fn div_rem(&self, g: &MultiPoly) -> Result<(MultiPoly, MultiPoly)> {
        self.same_space(g);
        let Some((lm_g, lc_g)) = g.leading_term() else {
            return Err(Error::ZeroPolynomial);
        };
        let lm_g = lm_g.clone();
        let lc_inv = self.field.inv(lc_g).expect("nonzero leading coefficient");
        let mut quo = Self::zero(&self.field, self.nvars);
        let mut rem = Self::zero(&self.field, self.nvars);
        let mut p = self.clone();
        while let Some((m, c)) = p.terms.iter().next_back().map(|(m, &c)| (m.clone(), c)) {
            if lm_g.divides(&m) {
                let t = lm_g.quotient_of(&m);
                let coef = self.field.mul(c, lc_inv);
                p = &p - &g.mul_term(&t, coef);
                quo.add_term(t, coef);
            } else {
                p.terms.remove(&m);
                rem.add_term(m, c);
            }
        }
        Ok((quo, rem))
    }

    /// `self / g` when `g` divides `self` exactly.
    pub fn div_exact(&self, g: &MultiPoly) -> Option<MultiPoly> {
        match self.div_rem(g) {
            Ok((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    /// Coefficientwise map by the inverse Frobenius and exponent division
    /// by `p`, assuming every exponent is a multiple of `p`.
    pub(crate) fn pth_root(&self) -> MultiPoly {
        let p = self.field.characteristic();
        let mut out = Self::zero(&self.field, self.nvars);
        for (m, &c) in &self.terms {
            debug_assert!(m.0.iter().all(|e| e % p == 0));
            let e = m.0.iter().map(|e| e / p).collect();
            out.add_term(Monomial(e), self.field.frobenius_inv(c));
        }
        out
    }

    /// Maps coefficients into a larger field through `images` (indexed by
    /// element index of the current field).
    pub fn map_coeffs(&self, target: &Field, images: &[FieldElement]) -> MultiPoly {
        let mut out = Self::zero(target, self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), images[c.index() as usize]);
        }
        out
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;

    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.same_space(rhs);
        let mut out = self.clone();
        for (m, &c) in &rhs.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;

    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.same_space(rhs);
        let mut out = self.clone();
        for (m, &c) in &rhs.terms {
            out.add_term(m.clone(), self.field.neg(c));
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        self.scale(self.field.neg(self.field.one()))
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;

    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.same_space(rhs);
        let mut out = MultiPoly::zero(&self.field, self.nvars);
        for (m, &a) in &self.terms {
            for (n, &b) in &rhs.terms {
                out.add_term(m.mul(n), self.field.mul(a, b));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(field: &Field, s: &str) -> MultiPoly {
        parse_poly(field, s, None).unwrap()
    }

    fn pk(field: &Field, s: &str, k: usize) -> MultiPoly {
        parse_poly(field, s, Some(k)).unwrap()
    }

    #[test]
    fn eval_examples() {
        let f5 = Field::prime(5).unwrap();
        let f = p(&f5, "x1*x2+1");
        assert_eq!(f.eval(&[f5.from_int(2), f5.from_int(3)]).unwrap(), f5.from_int(2));
        let f7 = Field::prime(7).unwrap();
        let g = p(&f7, "x1+x2+x3");
        assert_eq!(g.eval(&[f7.zero(); 3]).unwrap(), f7.zero());
        let z = MultiPoly::zero(&f7, 2);
        assert_eq!(z.eval(&[f7.one(), f7.from_int(3)]).unwrap(), f7.zero());
        assert!(matches!(g.eval(&[f7.one()]), Err(Error::ArityMismatch { .. })));
        assert!(matches!(
            g.eval(&[f5.one(), f7.one(), f7.one()]),
            Err(Error::FieldMismatch)
        ));
    }

    #[test]
    fn partial_eval_examples() {
        let f5 = Field::prime(5).unwrap();
        let f = p(&f5, "x1*x2+1");
        assert_eq!(f.partial_eval(1, f5.zero()).unwrap(), MultiPoly::one(&f5, 1));
        let f3 = Field::prime(3).unwrap();
        let g = p(&f3, "x1^2+x2^2");
        assert_eq!(g.partial_eval(1, f3.one()).unwrap(), pk(&f3, "x1^2+1", 1));
        let h = p(&f5, "x1*x2*x3+1");
        let e = h.partial_eval(2, f5.from_int(2)).unwrap();
        assert_eq!(e, pk(&f5, "2*x1*x2+1", 2));
        assert!(e.total_degree() <= h.total_degree());
        assert!(h.partial_eval(3, f5.one()).is_err());
    }

    #[test]
    fn symmetry_examples() {
        let f = Field::prime(7).unwrap();
        assert!(p(&f, "x1*x2*x3+1").is_symmetric());
        assert!(!p(&f, "x1+2*x2").is_symmetric());
        assert!(p(&f, "x1*x2+x2*x3+x3*x1").is_symmetric());
    }

    #[test]
    fn expansion_examples() {
        let f = Field::prime(5).unwrap();
        let h = p(&f, "x1*x2+1").expand_in_var(0);
        assert_eq!(h, vec![pk(&f, "1", 1), pk(&f, "x1", 1)]);
        let h = p(&f, "x1*x2+x2*x3+x3*x1").expand_in_var(0);
        assert_eq!(h, vec![pk(&f, "x1*x2", 2), pk(&f, "x1+x2", 2)]);
        let h = pk(&f, "x1^2", 2).expand_in_var(0);
        assert_eq!(h.len(), 3);
        assert!(h[0].is_zero() && h[1].is_zero());
        assert_eq!(h[2], MultiPoly::one(&f, 1));
        assert!(MultiPoly::zero(&f, 2).expand_in_var(0).is_empty());
    }

    #[test]
    fn expansion_reassembles() {
        let f = Field::prime(7).unwrap();
        let g = p(&f, "3*x1^2*x2 + x1*x2*x3 + 5*x3^2 + x1 + 2");
        let parts = g.expand_in_var(0);
        let mut acc = MultiPoly::zero(&f, 3);
        for (j, h) in parts.iter().enumerate() {
            let lifted = h.relabel(3, &[1, 2]);
            acc = &acc + &(&lifted * &MultiPoly::var(&f, 3, 0).pow(j as u32));
        }
        assert_eq!(acc, g);
    }

    #[test]
    fn division() {
        let f = Field::prime(5).unwrap();
        let a = p(&f, "x1^2 - x2^2");
        let b = p(&f, "x1 - x2");
        assert_eq!(a.div_exact(&b).unwrap(), p(&f, "x1 + x2"));
        assert!(p(&f, "x1^2 + x2").div_exact(&b).is_none());
    }

    #[test]
    fn specialize_matches_eval() {
        let f = Field::prime(7).unwrap();
        let g = p(&f, "x1^2*x2 + 3*x1*x3 + x2*x3 + 1");
        for a in 0..7 {
            for b in 0..7 {
                let h = g.specialize(0, &[a, b]);
                for x in 0..7 {
                    assert_eq!(h.eval_raw(x), g.eval_raw(&[x, a, b]));
                }
            }
        }
    }
}
