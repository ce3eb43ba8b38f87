//! Multivariate gcd by recursive content/primitive-part reduction, and
//! square-free decomposition valid in characteristic `p`.

use super::MultiPoly;
use crate::error::{Error, Result};
use crate::ff::FieldElement;

impl MultiPoly {
    /// Greatest common divisor, normalized to leading coefficient 1 under
    /// graded-lex order. `gcd(f, 0)` is `f` normalized.
    pub fn gcd(&self, other: &MultiPoly) -> MultiPoly {
        self.same_space(other);
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.is_constant() || other.is_constant() {
            return MultiPoly::one(&self.field, self.nvars);
        }
        let var = (0..self.nvars)
            .find(|&i| self.degree_in(i) > 0 || other.degree_in(i) > 0)
            .expect("non-constant polynomial has a variable");
        if self.degree_in(var) == 0 {
            return self.gcd(&other.content_in(var));
        }
        if other.degree_in(var) == 0 {
            return other.gcd(&self.content_in(var));
        }
        let ca = self.content_in(var);
        let cb = other.content_in(var);
        let pa = self.div_exact(&ca).expect("content divides");
        let pb = other.div_exact(&cb).expect("content divides");
        let c = ca.gcd(&cb);
        let h = primitive_gcd(pa, pb, var);
        (&c * &h).monic()
    }

    /// Gcd of the coefficients with respect to `var` (free of `var`).
    pub fn content_in(&self, var: usize) -> MultiPoly {
        let mut acc = MultiPoly::zero(&self.field, self.nvars);
        for c in self.coeffs_in(var) {
            if c.is_zero() {
                continue;
            }
            acc = acc.gcd(&c);
            if acc.is_constant() && !acc.is_zero() {
                break;
            }
        }
        acc
    }

    /// Primitive part with respect to `var`.
    pub fn primitive_part_in(&self, var: usize) -> MultiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content_in(var);
        self.div_exact(&c).expect("content divides")
    }

    /// Pseudo-remainder of `self` by `b` as polynomials in `var`.
    fn pseudo_rem(&self, b: &MultiPoly, var: usize) -> MultiPoly {
        let db = b.degree_in(var);
        let lcb = b.coeffs_in(var).pop().expect("nonzero divisor");
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(var) >= db {
            let dr = r.degree_in(var);
            let lcr = r.coeffs_in(var).pop().expect("nonzero");
            let mut shift = super::Monomial::one(self.nvars);
            shift.0[var] = (dr - db) as u32;
            let t = (&lcr * b).mul_term(&shift, self.field.one());
            r = &(&lcb * &r) - &t;
        }
        r
    }

    /// Square-free decomposition `f = c * prod s_i^i` with `s_i` monic,
    /// square-free and pairwise coprime.
    ///
    /// Uses `gcd(f, df/dx_1, .., df/dx_k)`; a remaining factor whose
    /// partials all vanish is a `p`-th power and is handled by taking the
    /// `p`-th root (inverse Frobenius on coefficients) and recursing.
    pub fn squarefree_decomposition(&self) -> Result<SquareFreeDecomposition> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let constant = self.leading_coeff();
        let mut parts = Vec::new();
        sqf_monic(&self.monic(), 1, &mut parts);
        parts.sort_by_key(|(_, i)| *i);
        Ok(SquareFreeDecomposition { constant, parts })
    }

    /// Product of the distinct irreducible factors, monic.
    pub fn squarefree_part(&self) -> Result<MultiPoly> {
        let d = self.squarefree_decomposition()?;
        Ok(d.parts.iter().fold(MultiPoly::one(&self.field, self.nvars), |acc, (s, _)| &acc * s))
    }

    /// True iff `f = c * g^2` for some constant `c` and polynomial `g`
    /// over the base field.
    pub fn is_const_square(&self) -> Result<bool> {
        Ok(self.squarefree_decomposition()?.is_const_square())
    }
}

/// `f = constant * prod_{(s, i) in parts} s^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareFreeDecomposition {
    pub constant: FieldElement,
    pub parts: Vec<(MultiPoly, u32)>,
}

impl SquareFreeDecomposition {
    /// Every factor of odd multiplicity is constant (there are none).
    pub fn is_const_square(&self) -> bool {
        self.parts.iter().all(|(_, i)| i % 2 == 0)
    }

    /// `g` with `f = constant * g^2`, when the decomposition is all even.
    pub fn square_root(&self) -> Option<MultiPoly> {
        if !self.is_const_square() {
            return None;
        }
        let (first, _) = self.parts.first()?;
        let one = MultiPoly::one(first.field(), first.nvars());
        Some(self.parts.iter().fold(one, |acc, (s, i)| &acc * &s.pow(i / 2)))
    }
}

fn primitive_gcd(mut a: MultiPoly, mut b: MultiPoly, var: usize) -> MultiPoly {
    if a.degree_in(var) < b.degree_in(var) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if b.is_zero() {
            return a.monic();
        }
        if b.degree_in(var) == 0 {
            return MultiPoly::one(a.field(), a.nvars());
        }
        let r = a.pseudo_rem(&b, var);
        a = b;
        b = r.primitive_part_in(var);
    }
}

fn sqf_monic(f: &MultiPoly, mult: u32, out: &mut Vec<(MultiPoly, u32)>) {
    if f.is_constant() {
        return;
    }
    let p = f.field().characteristic();
    let mut c = f.clone();
    for v in 0..f.nvars() {
        let d = f.derivative(v);
        if !d.is_zero() {
            c = c.gcd(&d);
        }
    }
    let c_is_f = c == f.monic();
    if c_is_f {
        // all partials vanish: f is a p-th power
        sqf_monic(&f.pth_root().monic(), mult * p, out);
        return;
    }
    let mut w = f.div_exact(&c).expect("gcd divides").monic();
    let mut i = 1;
    while !w.is_constant() {
        let y = w.gcd(&c);
        let z = w.div_exact(&y).expect("gcd divides").monic();
        if !z.is_constant() {
            push_part(out, z, i * mult);
        }
        i += 1;
        c = c.div_exact(&y).expect("gcd divides");
        w = y;
    }
    if !c.is_constant() {
        sqf_monic(&c.pth_root().monic(), mult * p, out);
    }
}

fn push_part(out: &mut Vec<(MultiPoly, u32)>, s: MultiPoly, m: u32) {
    if let Some(entry) = out.iter_mut().find(|(_, i)| *i == m) {
        entry.0 = &entry.0 * &s;
    } else {
        out.push((s, m));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::Field;
    use crate::poly::parse_poly;

    fn p(field: &Field, s: &str) -> MultiPoly {
        parse_poly(field, s, None).unwrap()
    }

    #[test]
    fn gcd_examples() {
        let f = Field::prime(5).unwrap();
        let a = p(&f, "x1^2 - x2^2");
        assert_eq!(a.gcd(&MultiPoly::zero(&f, 2)), a.monic());
        assert_eq!(a.gcd(&p(&f, "x1 - x2")), p(&f, "x1 - x2"));
        assert_eq!(p(&f, "x1 - x2").gcd(&a), p(&f, "x1 - x2"));
        let g = p(&f, "(x1*x2 + x3)^2 * (x2 + 1)");
        let h = p(&f, "(x1*x2 + x3) * (x2 + 1)^3 * (x1 + x3)");
        assert_eq!(g.gcd(&h), p(&f, "(x1*x2 + x3) * (x2 + 1)").monic());
    }

    #[test]
    fn coprime_univariates_have_unit_gcd() {
        let f = Field::prime(7).unwrap();
        let a = parse_poly(&f, "x1^3 + 2*x1 + 5", Some(1)).unwrap();
        let b = parse_poly(&f, "x1^2 + 1", Some(1)).unwrap();
        assert_eq!(a.gcd(&b), MultiPoly::one(&f, 1));
    }

    #[test]
    fn squarefree_examples() {
        let f = Field::prime(5).unwrap();
        let s = p(&f, "(x1 + x2)^2").squarefree_part().unwrap();
        assert_eq!(s, p(&f, "x1 + x2"));
        let g = p(&f, "x1*x2 + 1");
        assert_eq!(g.squarefree_part().unwrap(), g);
        let x5 = parse_poly(&f, "x1^5", Some(1)).unwrap();
        assert_eq!(x5.squarefree_part().unwrap(), parse_poly(&f, "x1", Some(1)).unwrap());
        assert!(matches!(MultiPoly::zero(&f, 2).squarefree_part(), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn const_square_examples() {
        let f = Field::prime(5).unwrap();
        assert!(p(&f, "3*(x1+x2)^2").is_const_square().unwrap());
        assert!(!p(&f, "x1*x2+1").is_const_square().unwrap());
        assert!(!p(&f, "(x1*x2+1)^2*(x1+x2)").is_const_square().unwrap());
        assert!(p(&f, "2").is_const_square().unwrap());
    }

    #[test]
    fn mixed_pth_power_factors() {
        let f = Field::prime(3).unwrap();
        // x1^3 + x2 is irreducible with vanishing x1-derivative
        let g = p(&f, "(x1^3 + x2)^2 * (x1 + x2)^3 * (x1*x2+1)");
        let d = g.squarefree_decomposition().unwrap();
        let mults: Vec<u32> = d.parts.iter().map(|(_, i)| *i).collect();
        assert_eq!(mults, vec![1, 2, 3]);
        assert_eq!(d.parts[1].0, p(&f, "x1^3 + x2"));
        assert!(!d.is_const_square());
        assert!(p(&f, "(x1^3 + x2)^2 * (x1 + x2)^6").is_const_square().unwrap());
        // odd power p of a non-square stays a non-square
        assert!(!p(&f, "(x1 + x2)^3").is_const_square().unwrap());
    }

    #[test]
    fn square_root_recovers_g() {
        let f = Field::prime(7).unwrap();
        let g = p(&f, "x1^2 + x2 + 3");
        let sq = &g * &g;
        let d = sq.scale(f.from_int(3)).squarefree_decomposition().unwrap();
        assert_eq!(d.constant, f.from_int(3));
        assert_eq!(d.square_root().unwrap(), g.monic());
    }
}
