//! The exceptional sets where a specialization of `f` in `x1` (or a product
//! of specializations) is a constant multiple of a square.

use rayon::prelude::*;

use crate::error::{check_budget, Error, Result};
use crate::hypergraph::Budget;
use crate::poly::{MultiPoly, UniPoly};

/// Tuples `(u_2, .., u_k)` with `f(x, u_2, .., u_k) = c h(x)^2`, split by
/// whether the leading `x1`-coefficient `p_n` vanishes there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalSetX {
    pub q: u64,
    pub k: usize,
    pub d: u32,
    /// Degree of `f` in `x1`.
    pub n: u32,
    /// Members as element indices, in increasing lexicographic order.
    pub members: Vec<Vec<u32>>,
    /// Members where the specialization is a constant (so `c * 1^2`).
    pub constant_members: usize,
    /// Members with `p_n(u) = 0`.
    pub y_count: usize,
    /// Members with `p_n(u) != 0`.
    pub z_count: usize,
    /// Members where the specialization is the zero polynomial.
    pub zero_members: usize,
}

impl ExceptionalSetX {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `(d^2 + d) q^{k-2}`.
    pub fn bound(&self) -> u64 {
        (self.d as u64 * self.d as u64 + self.d as u64) * self.q.pow(self.k as u32 - 2)
    }

    /// `(d - n) q^{k-2}`.
    pub fn y_bound(&self) -> u64 {
        (self.d - self.n) as u64 * self.q.pow(self.k as u32 - 2)
    }

    /// `n d q^{k-2}`.
    pub fn z_bound(&self) -> u64 {
        self.n as u64 * self.d as u64 * self.q.pow(self.k as u32 - 2)
    }

    pub fn within_bounds(&self) -> bool {
        self.len() as u64 <= self.bound()
            && self.y_count as u64 <= self.y_bound()
            && self.z_count as u64 <= self.z_bound()
    }
}

/// Visits `F_q^len` in lexicographic order (first coordinate slowest),
/// with the first coordinate fixed to `head`.
fn for_each_tail(q: u32, len: usize, head: u32, mut visit: impl FnMut(&[u32])) {
    let mut u = vec![0u32; len];
    u[0] = head;
    loop {
        visit(&u);
        let mut pos = len;
        loop {
            pos -= 1;
            if pos == 0 {
                return;
            }
            u[pos] += 1;
            if u[pos] < q {
                break;
            }
            u[pos] = 0;
        }
    }
}

/// Enumerates the set `X` for a symmetric `f` in `k >= 2` variables.
///
/// Constant specializations are members. A zero specialization is
/// impossible for an admissible `f`; with `assume_admissible` it is an
/// error, otherwise it is counted as a member.
pub fn enumerate_x(f: &MultiPoly, assume_admissible: bool, budget: Budget) -> Result<ExceptionalSetX> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let k = f.nvars();
    if k < 2 {
        return Err(Error::ArityMismatch { expected: 2, found: k });
    }
    let field = f.field();
    let q = field.order();
    check_budget((q as u128).saturating_pow(k as u32 - 1), budget.tuples)?;
    let expansion = f.expand_in_var(0);
    let n = expansion.len() as u32 - 1;
    let top = expansion.last().expect("nonzero").clone();

    struct Part {
        members: Vec<Vec<u32>>,
        constant: usize,
        y: usize,
        z: usize,
        zero: usize,
    }
    let parts: Vec<Part> = (0..q)
        .into_par_iter()
        .map(|head| -> Result<Part> {
            let mut part = Part { members: Vec::new(), constant: 0, y: 0, z: 0, zero: 0 };
            let mut failure = None;
            for_each_tail(q, k - 1, head, |u| {
                if failure.is_some() {
                    return;
                }
                let h = f.specialize(0, u);
                let member = if h.is_zero() {
                    if assume_admissible {
                        failure = Some(Error::NotAdmissible);
                        return;
                    }
                    part.zero += 1;
                    true
                } else if h.degree() == 0 {
                    part.constant += 1;
                    true
                } else {
                    h.is_const_square().expect("nonzero")
                };
                if member {
                    if top.eval_raw(u) == 0 {
                        part.y += 1;
                    } else {
                        part.z += 1;
                    }
                    part.members.push(u.to_vec());
                }
            });
            match failure {
                Some(e) => Err(e),
                None => Ok(part),
            }
        })
        .collect::<Result<_>>()?;

    let mut x = ExceptionalSetX {
        q: q as u64,
        k,
        d: f.total_degree() as u32,
        n,
        members: Vec::new(),
        constant_members: 0,
        y_count: 0,
        z_count: 0,
        zero_members: 0,
    };
    for p in parts {
        x.members.extend(p.members);
        x.constant_members += p.constant;
        x.y_count += p.y;
        x.z_count += p.z;
        x.zero_members += p.zero;
    }
    Ok(x)
}

/// Tuples `(u_2(0), u_2(1), .., u_k(0), u_k(1))` for which the product of
/// the `2^{k-1}` specializations `f(x, u_2(e_2), .., u_k(e_k))` is a
/// constant multiple of a square (the zero product included).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalSetB {
    pub q: u64,
    pub k: usize,
    pub d: u32,
    pub members: Vec<Vec<u32>>,
    /// Members whose product polynomial is zero.
    pub zero_products: usize,
}

impl ExceptionalSetB {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `C q^{2k-3}` with `C = (d^2 + d) + 2^{k-1} d (d + 1)`: the `X`
    /// contribution plus a per-root Schwartz–Zippel count. An empirical
    /// yardstick, not a proven constant.
    pub fn empirical_bound(&self) -> u64 {
        let d = self.d as u64;
        let c = (d * d + d) + (1u64 << (self.k - 1)) * d * (d + 1);
        c * self.q.pow(2 * self.k as u32 - 3)
    }
}

pub fn enumerate_b(f: &MultiPoly, budget: Budget) -> Result<ExceptionalSetB> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let k = f.nvars();
    if k < 2 {
        return Err(Error::ArityMismatch { expected: 2, found: k });
    }
    let field = f.field();
    let q = field.order();
    check_budget((q as u128).saturating_pow(2 * k as u32 - 2), budget.tuples)?;
    // specialization for every (u_2, .., u_k), indexed in base q with u_2 most significant
    let mut specs: Vec<UniPoly> = Vec::with_capacity((q as usize).pow(k as u32 - 1));
    for head in 0..q {
        for_each_tail(q, k - 1, head, |u| specs.push(f.specialize(0, u)));
    }
    let index = |u: &[u32]| u.iter().fold(0usize, |acc, &x| acc * q as usize + x as usize);

    let parts: Vec<(Vec<Vec<u32>>, usize)> = (0..q)
        .into_par_iter()
        .map(|head| {
            let mut members = Vec::new();
            let mut zero = 0;
            let mut sel = vec![0u32; k - 1];
            let visit = |t: &[u32]| {
                let mut prod = UniPoly::constant(field, field.one());
                for eps in 0..1usize << (k - 1) {
                    for (i, s) in sel.iter_mut().enumerate() {
                        *s = t[2 * i + (eps >> i & 1)];
                    }
                    prod = prod.mul(&specs[index(&sel)]);
                }
                if prod.is_zero() {
                    zero += 1;
                    members.push(t.to_vec());
                } else if prod.is_const_square().expect("nonzero") {
                    members.push(t.to_vec());
                }
            };
            for_each_tail(q, 2 * k - 2, head, visit);
            (members, zero)
        })
        .collect();

    let mut b = ExceptionalSetB { q: q as u64, k, d: f.total_degree().max(0) as u32, members: Vec::new(), zero_products: 0 };
    for (m, z) in parts {
        b.members.extend(m);
        b.zero_products += z;
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::Field;
    use crate::poly::parse_poly;

    fn p(q: u32, s: &str) -> MultiPoly {
        parse_poly(&Field::prime(q).unwrap(), s, None).unwrap()
    }

    #[test]
    fn diagonal_examples() {
        let x7 = enumerate_x(&p(7, "x1^2+x2^2+x3^2"), true, Budget::default()).unwrap();
        assert_eq!(x7.members, vec![vec![0, 0]]);
        assert!(x7.within_bounds());
        let x13 = enumerate_x(&p(13, "x1^2+x2^2+x3^2"), true, Budget::default()).unwrap();
        assert_eq!(x13.len(), 25);
        assert_eq!((x13.y_count, x13.z_count), (0, 25));
    }

    #[test]
    fn constant_specialization_is_a_member() {
        let x = enumerate_x(&p(5, "x1*x2+1"), true, Budget::default()).unwrap();
        assert_eq!(x.members, vec![vec![0]]);
        assert_eq!(x.constant_members, 1);
        assert_eq!((x.y_count, x.z_count), (1, 0));
    }

    #[test]
    fn zero_specialization() {
        let f = p(5, "x1*x2");
        assert_eq!(enumerate_x(&f, true, Budget::default()), Err(Error::NotAdmissible));
        let x = enumerate_x(&f, false, Budget::default()).unwrap();
        assert_eq!(x.zero_members, 1);
    }

    #[test]
    fn b_for_k2() {
        let b = enumerate_b(&p(5, "x1*x2+1"), Budget::default()).unwrap();
        let expected: Vec<Vec<u32>> = (0..5).map(|a| vec![a, a]).collect();
        assert_eq!(b.members, expected);
        assert!(b.len() as u64 <= b.empirical_bound());
    }
}
