use std::fmt;

use crate::error::{Error, Result};
use crate::ff::{Field, FieldElement};

/// Dense univariate polynomial, coefficients low to high, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    field: Field,
    coeffs: Vec<FieldElement>,
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|&c| self.field.format(c)).collect();
        write!(f, "UniPoly[{}]", parts.join(", "))
    }
}

impl UniPoly {
    pub fn zero(field: &Field) -> Self {
        UniPoly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn constant(field: &Field, c: FieldElement) -> Self {
        Self::new(field, vec![c])
    }

    /// `x`.
    pub fn x(field: &Field) -> Self {
        Self::new(field, vec![field.zero(), field.one()])
    }

    pub fn new(field: &Field, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { field: field.clone(), coeffs }
    }

    /// From integer coefficients, reduced into the prime subfield.
    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub(crate) fn from_raw(field: &Field, coeffs: Vec<u32>) -> Self {
        Self::new(field, coeffs.into_iter().map(|c| field.element_unchecked(c)).collect())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `-1` for zero.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn leading_coeff(&self) -> FieldElement {
        self.coeffs.last().copied().unwrap_or(self.field.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff() == self.field.one()
    }

    pub fn monic(&self) -> UniPoly {
        match self.field.inv(self.leading_coeff()) {
            Some(inv) => self.scale(inv),
            None => self.clone(),
        }
    }

    pub fn scale(&self, c: FieldElement) -> UniPoly {
        Self::new(&self.field, self.coeffs.iter().map(|&a| self.field.mul(a, c)).collect())
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = self.field.zero();
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(z);
                let b = other.coeffs.get(i).copied().unwrap_or(z);
                self.field.add(a, b)
            })
            .collect();
        Self::new(&self.field, c)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.scale(self.field.neg(self.field.one())))
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add_raw(out[i + j], f.mul_raw(a.index(), b.index()));
            }
        }
        Self::from_raw(f, out)
    }

    pub fn div_rem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        if d.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let f = &self.field;
        let dd = d.coeffs.len() - 1;
        let inv = f.inv(d.leading_coeff()).expect("nonzero");
        let mut r: Vec<u32> = self.coeffs.iter().map(|c| c.index()).collect();
        if r.len() <= dd {
            return Ok((Self::zero(f), self.clone()));
        }
        let mut q = vec![0u32; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = f.mul_raw(r[i], inv.index());
            if c == 0 {
                continue;
            }
            q[i - dd] = c;
            let nc = f.neg_raw(c);
            for (j, dj) in d.coeffs.iter().enumerate() {
                let k = i - dd + j;
                r[k] = f.add_raw(r[k], f.mul_raw(nc, dj.index()));
            }
        }
        r.truncate(dd);
        Ok((Self::from_raw(f, q), Self::from_raw(f, r)))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> UniPoly {
        let f = &self.field;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| f.mul(a, f.from_int(i as i64)))
            .collect();
        Self::new(f, c)
    }

    pub fn eval(&self, x: FieldElement) -> FieldElement {
        self.field.element_unchecked(self.eval_raw(x.index()))
    }

    pub(crate) fn eval_raw(&self, x: u32) -> u32 {
        let f = &self.field;
        self.coeffs.iter().rev().fold(0, |acc, c| f.add_raw(f.mul_raw(acc, x), c.index()))
    }

    fn pth_root(&self) -> UniPoly {
        let p = self.field.characteristic() as usize;
        let c = self
            .coeffs
            .iter()
            .step_by(p)
            .map(|&a| self.field.frobenius_inv(a))
            .collect();
        Self::new(&self.field, c)
    }

    /// `f = c * prod s_i^i` with monic, square-free, pairwise coprime `s_i`.
    /// Handles characteristic `p` by taking `p`-th roots of the part whose
    /// derivative vanishes.
    pub fn squarefree_decomposition(&self) -> Result<(FieldElement, Vec<(UniPoly, u32)>)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let lc = self.leading_coeff();
        let mut parts = Vec::new();
        sqf_monic(&self.monic(), 1, &mut parts);
        parts.sort_by_key(|(_, i)| *i);
        Ok((lc, parts))
    }

    /// Product of the distinct monic irreducible factors.
    pub fn squarefree_part(&self) -> Result<UniPoly> {
        let (_, parts) = self.squarefree_decomposition()?;
        Ok(parts.iter().fold(Self::constant(&self.field, self.field.one()), |acc, (s, _)| acc.mul(s)))
    }

    /// Number of distinct roots in a splitting field.
    pub fn distinct_root_count(&self) -> Result<usize> {
        Ok(self.squarefree_part()?.degree() as usize)
    }

    /// True iff `f = c * g^2` for a constant `c` and `g` over the field.
    pub fn is_const_square(&self) -> Result<bool> {
        let (_, parts) = self.squarefree_decomposition()?;
        Ok(parts.iter().all(|(_, i)| i % 2 == 0))
    }
}

fn sqf_monic(f: &UniPoly, mult: u32, out: &mut Vec<(UniPoly, u32)>) {
    if f.degree() <= 0 {
        return;
    }
    let field = f.field.clone();
    let p = field.characteristic();
    let mut c = f.gcd(&f.derivative());
    let mut w = f.div_rem(&c).expect("nonzero").0;
    let mut i = 1;
    while w.degree() > 0 {
        let y = w.gcd(&c);
        let z = w.div_rem(&y).expect("nonzero").0;
        if z.degree() > 0 {
            push_part(out, z, i * mult);
        }
        i += 1;
        c = c.div_rem(&y).expect("nonzero").0;
        w = y;
    }
    if c.degree() > 0 {
        // every exponent of c is a multiple of p
        sqf_monic(&c.pth_root().monic(), mult * p, out);
    }
}

fn push_part(out: &mut Vec<(UniPoly, u32)>, s: UniPoly, m: u32) {
    if let Some(entry) = out.iter_mut().find(|(_, i)| *i == m) {
        entry.0 = entry.0.mul(&s);
    } else {
        out.push((s, m));
    }
}
