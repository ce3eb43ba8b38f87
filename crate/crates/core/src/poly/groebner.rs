//! Buchberger's algorithm in graded reverse lexicographic order, with the
//! product and chain criteria.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use super::{Monomial, MultiPoly};
use crate::error::{Error, Result};
use crate::ff::{Field, FieldElement};

fn grevlex(a: &Monomial, b: &Monomial) -> Ordering {
    a.degree().cmp(&b.degree()).then_with(|| {
        for (x, y) in a.0.iter().zip(&b.0).rev() {
            if x != y {
                // smaller exponent in the last differing variable wins
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

/// Terms sorted by decreasing grevlex monomial.
#[derive(Clone, Debug)]
struct GPoly {
    terms: Vec<(Monomial, FieldElement)>,
}

impl GPoly {
    fn from_multi(f: &MultiPoly) -> GPoly {
        let mut terms: Vec<_> = f.terms().map(|(m, &c)| (m.clone(), c)).collect();
        terms.sort_by(|a, b| grevlex(&b.0, &a.0));
        GPoly { terms }
    }

    fn to_multi(&self, field: &Field, nvars: usize) -> MultiPoly {
        MultiPoly::from_terms(field, nvars, self.terms.iter().map(|(m, c)| (m.0.clone(), *c)))
            .expect("consistent arity")
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn is_constant(&self) -> bool {
        !self.is_zero() && self.lm().is_one()
    }

    fn make_monic(&mut self, field: &Field) {
        if let Some(&(_, c)) = self.terms.first() {
            let inv = field.inv(c).expect("nonzero");
            for t in &mut self.terms {
                t.1 = field.mul(t.1, inv);
            }
        }
    }

    /// `self - c * m * g`.
    fn sub_scaled(&self, field: &Field, c: FieldElement, m: &Monomial, g: &GPoly) -> GPoly {
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut i = 0;
        let shifted: Vec<(Monomial, FieldElement)> =
            g.terms.iter().map(|(n, d)| (n.mul(m), field.neg(field.mul(*d, c)))).collect();
        let mut j = 0;
        while i < self.terms.len() && j < shifted.len() {
            match grevlex(&self.terms[i].0, &shifted[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(shifted[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let s = field.add(self.terms[i].1, shifted[j].1);
                    if !s.is_zero() {
                        out.push((self.terms[i].0.clone(), s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&shifted[j..]);
        GPoly { terms: out }
    }
}

/// Full reduction of `f` modulo `basis` (all basis elements monic).
fn reduce(field: &Field, f: &GPoly, basis: &[GPoly]) -> GPoly {
    let mut p = f.clone();
    let mut rem = Vec::new();
    while let Some((m, c)) = p.terms.first().cloned() {
        match basis.iter().find(|g| g.lm().divides(&m)) {
            Some(g) => {
                let t = g.lm().quotient_of(&m);
                p = p.sub_scaled(field, c, &t, g);
            }
            None => {
                rem.push((m, c));
                p.terms.remove(0);
            }
        }
    }
    GPoly { terms: rem }
}

fn s_poly(field: &Field, f: &GPoly, g: &GPoly) -> GPoly {
    let l = f.lm().lcm(g.lm());
    let a = f.lm().quotient_of(&l);
    let b = g.lm().quotient_of(&l);
    let zero = GPoly { terms: Vec::new() };
    zero.sub_scaled(field, field.neg(field.one()), &a, f).sub_scaled(field, field.one(), &b, g)
}

/// Reduced Gröbner basis (grevlex, monic elements) of the ideal generated
/// by `gens`. Zero generators are ignored.
pub fn groebner_basis(gens: &[MultiPoly]) -> Result<Vec<MultiPoly>> {
    let first = gens.first().ok_or(Error::EmptyGenerators)?;
    let field = first.field().clone();
    let nvars = first.nvars();
    for g in gens {
        if g.nvars() != nvars {
            return Err(Error::ArityMismatch { expected: nvars, found: g.nvars() });
        }
    }
    let mut basis: Vec<GPoly> = Vec::new();
    for g in gens.iter().filter(|g| !g.is_zero()) {
        let mut gp = GPoly::from_multi(g);
        gp.make_monic(&field);
        if gp.is_constant() {
            return Ok(vec![MultiPoly::one(&field, nvars)]);
        }
        basis.push(gp);
    }
    if basis.is_empty() {
        return Ok(Vec::new());
    }

    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pending.insert((i, j));
        }
    }
    while !pending.is_empty() {
        // normal selection strategy: smallest lcm
        let &(i, j) = pending
            .iter()
            .min_by(|a, b| {
                let la = basis[a.0].lm().lcm(basis[a.1].lm());
                let lb = basis[b.0].lm().lcm(basis[b.1].lm());
                grevlex(&la, &lb).then(a.cmp(b))
            })
            .expect("nonempty");
        pending.remove(&(i, j));
        let (lmi, lmj) = (basis[i].lm(), basis[j].lm());
        if lmi.coprime(lmj) {
            continue;
        }
        let l = lmi.lcm(lmj);
        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].lm().divides(&l)
                && !pending.contains(&key(i, k))
                && !pending.contains(&key(j, k))
        });
        if chain {
            continue;
        }
        let s = s_poly(&field, &basis[i], &basis[j]);
        let mut r = reduce(&field, &s, &basis);
        if r.is_zero() {
            continue;
        }
        r.make_monic(&field);
        if r.is_constant() {
            return Ok(vec![MultiPoly::one(&field, nvars)]);
        }
        let n = basis.len();
        basis.push(r);
        for k in 0..n {
            pending.insert((k, n));
        }
    }

    // minimalize, then inter-reduce
    let mut minimal: Vec<GPoly> = Vec::new();
    for (idx, g) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(o, h)| {
            o != idx && h.lm().divides(g.lm()) && (h.lm() != g.lm() || o < idx)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for idx in 0..minimal.len() {
        let others: Vec<GPoly> =
            minimal.iter().enumerate().filter(|(o, _)| *o != idx).map(|(_, g)| g.clone()).collect();
        let head = GPoly { terms: vec![minimal[idx].terms[0].clone()] };
        let tail = GPoly { terms: minimal[idx].terms[1..].to_vec() };
        let mut r = reduce(&field, &tail, &others);
        r.terms.insert(0, head.terms[0].clone());
        reduced.push(r);
    }
    reduced.sort_by(|a, b| grevlex(a.lm(), b.lm()));
    Ok(reduced.iter().map(|g| g.to_multi(&field, nvars).monic()).collect())
}

/// True iff 1 lies in the ideal, i.e. the generators have no common zero
/// over the algebraic closure.
pub fn ideal_contains_one(gens: &[MultiPoly]) -> Result<bool> {
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    if gens.iter().all(MultiPoly::is_zero) {
        return Err(Error::ZeroPolynomial);
    }
    let gb = groebner_basis(gens)?;
    Ok(gb.len() == 1 && gb[0].is_constant())
}
