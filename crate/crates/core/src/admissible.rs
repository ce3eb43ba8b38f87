//! Admissibility of symmetric polynomials: not a constant multiple of a
//! square, and the `x1`-expansion coefficients have no common zero over the
//! algebraic closure.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ff::Field;
use crate::poly::{common_zero_search, ideal_contains_one, MultiPoly, ZeroWitness};

/// Extension degree searched for an explicit common zero.
const WITNESS_EXT_DEGREE: u32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Admissible,
    FailsSquareCondition,
    FailsPrimitive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Admissible => "Admissible",
            Status::FailsSquareCondition => "FailsSquareCondition",
            Status::FailsPrimitive => "FailsPrimitive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityVerdict {
    pub status: Status,
    /// Common zero of the `H_j`, when `FailsPrimitive` and one was found.
    pub witness: Option<ZeroWitness>,
    /// `[H_0, .., H_n]` from the expansion in `x1`.
    pub detail: Vec<MultiPoly>,
    pub degree: u32,
    pub k: usize,
}

impl AdmissibilityVerdict {
    pub fn is_admissible(&self) -> bool {
        self.status == Status::Admissible
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "status": self.status.to_string(),
            "degree": self.degree,
            "k": self.k,
        });
        if let Some(w) = &self.witness {
            v["witness"] = json!({ "ext_degree": w.ext_degree, "point": w.formatted_point() });
        }
        v
    }
}

/// Decides admissibility of a symmetric `f` in `k >= 2` variables.
///
/// The primitive condition is decided by a Gröbner basis of the `H_j`; the
/// witness search over `F_{q^2}` only decorates a negative answer.
pub fn is_admissible(f: &MultiPoly) -> Result<AdmissibilityVerdict> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.nvars() < 2 {
        return Err(Error::ArityMismatch { expected: 2, found: f.nvars() });
    }
    if !f.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if f.total_degree() < 1 {
        return Err(Error::ConstantPolynomial);
    }
    let detail = f.expand_in_var(0);
    let degree = f.total_degree() as u32;
    let k = f.nvars();
    let verdict = |status, witness| AdmissibilityVerdict {
        status,
        witness,
        detail: detail.clone(),
        degree,
        k,
    };
    if f.is_const_square()? {
        return Ok(verdict(Status::FailsSquareCondition, None));
    }
    if primitive(&detail)? {
        Ok(verdict(Status::Admissible, None))
    } else {
        let gens: Vec<MultiPoly> = detail.iter().filter(|h| !h.is_zero()).cloned().collect();
        let witness = common_zero_search(&gens, WITNESS_EXT_DEGREE)?;
        Ok(verdict(Status::FailsPrimitive, witness))
    }
}

/// The primitive condition on an expansion `[H_0, .., H_n]`.
fn primitive(h: &[MultiPoly]) -> Result<bool> {
    let gens: Vec<MultiPoly> = h.iter().filter(|h| !h.is_zero()).cloned().collect();
    if gens.is_empty() {
        return Ok(false);
    }
    ideal_contains_one(&gens)
}

/// Partitions of every size `<= d` into at most `k` parts, each as a
/// non-increasing exponent vector of length `k`.
fn partitions(k: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(k: usize, remaining: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let mut padded = cur.clone();
        padded.resize(k, 0);
        out.push(padded);
        if cur.len() == k {
            return;
        }
        for part in (1..=max.min(remaining)).rev() {
            cur.push(part);
            rec(k, remaining - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, d, d, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| b.iter().sum::<u32>().cmp(&a.iter().sum::<u32>()).then(b.cmp(a)));
    out
}

/// Sum of the distinct permutations of the exponent vector `lambda`.
fn orbit_sum(field: &Field, lambda: &[u32]) -> MultiPoly {
    let mut perm = lambda.to_vec();
    perm.sort_unstable();
    let mut terms = Vec::new();
    loop {
        terms.push((perm.clone(), field.one()));
        // next lexicographic permutation
        let Some(i) = (1..perm.len()).rev().find(|&i| perm[i - 1] < perm[i]) else { break };
        let j = (i..perm.len()).rev().find(|&j| perm[j] > perm[i - 1]).expect("exists");
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
    MultiPoly::from_terms(field, lambda.len(), terms).expect("consistent arity")
}

/// Orbit sums spanning the symmetric polynomials of degree `<= d` in `k`
/// variables, highest degree first.
pub fn orbit_basis(field: &Field, k: usize, d: u32) -> Vec<MultiPoly> {
    partitions(k, d).iter().map(|l| orbit_sum(field, l)).collect()
}

/// Uniform random symmetric polynomial of degree exactly `d`, drawn from the
/// span of the orbit sums; deterministic in `rng`.
pub fn random_symmetric_poly_with<R: Rng>(field: &Field, k: usize, d: u32, rng: &mut R) -> Result<MultiPoly> {
    if k < 2 {
        return Err(Error::ArityMismatch { expected: 2, found: k });
    }
    if d < 1 {
        return Err(Error::ConstantPolynomial);
    }
    let basis = orbit_basis(field, k, d);
    let q = field.order();
    loop {
        let coeffs: Vec<u32> = basis.iter().map(|_| rng.gen_range(0..q)).collect();
        let top = basis.iter().zip(&coeffs).any(|(b, &c)| b.total_degree() == d as i64 && c != 0);
        if !top {
            continue;
        }
        let mut f = MultiPoly::zero(field, k);
        for (b, &c) in basis.iter().zip(&coeffs) {
            if c != 0 {
                f = &f + &b.scale(field.element_unchecked(c));
            }
        }
        return Ok(f);
    }
}

pub fn random_symmetric_poly(field: &Field, k: usize, d: u32, seed: u64) -> Result<MultiPoly> {
    random_symmetric_poly_with(field, k, d, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Draws random symmetric polynomials until one is admissible. Returns the
/// polynomial and the number of draws used.
pub fn random_admissible_poly_with<R: Rng>(
    field: &Field,
    k: usize,
    d: u32,
    rng: &mut R,
) -> Result<(MultiPoly, u32)> {
    for draws in 1.. {
        let f = random_symmetric_poly_with(field, k, d, rng)?;
        if is_admissible(&f)?.is_admissible() {
            return Ok((f, draws));
        }
    }
    unreachable!()
}

/// Exhaustive count over `(A, B, C, D)` of the family
/// `A(x1^2+x2^2+x3^2) + B(x1x2+x2x3+x3x1) + C(x1+x2+x3) + D` satisfying the
/// primitive condition; constants (degree 0) are not counted. Returns
/// `(count, q^4)`.
pub fn primitive_density_deg2_var3(field: &Field) -> Result<(u64, u64)> {
    let q = field.order();
    let basis = orbit_basis(field, 3, 2);
    let shape = |lambda: &[u32]| -> MultiPoly {
        basis
            .iter()
            .find(|b| b.terms().next().is_some_and(|(m, _)| {
                let mut e = m.exponents().to_vec();
                e.sort_unstable_by(|a, b| b.cmp(a));
                e == lambda
            }))
            .cloned()
            .expect("orbit present")
    };
    let squares = shape(&[2, 0, 0]);
    let products = shape(&[1, 1, 0]);
    let linear = shape(&[1, 0, 0]);
    let count: u64 = (0..q)
        .into_par_iter()
        .map(|a| -> Result<u64> {
            let mut n = 0;
            for b in 0..q {
                for c in 0..q {
                    if a == 0 && b == 0 && c == 0 {
                        continue;
                    }
                    let base = &(&squares.scale(field.element_unchecked(a))
                        + &products.scale(field.element_unchecked(b)))
                        + &linear.scale(field.element_unchecked(c));
                    for d in 0..q {
                        let f = &base + &MultiPoly::constant(field, 3, field.element_unchecked(d));
                        if primitive(&f.expand_in_var(0))? {
                            n += 1;
                        }
                    }
                }
            }
            Ok(n)
        })
        .collect::<Result<Vec<u64>>>()?
        .into_iter()
        .sum();
    Ok((count, (q as u64).pow(4)))
}
