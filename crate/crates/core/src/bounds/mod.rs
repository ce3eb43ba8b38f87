//! Quantitative bounds: Weil sums, the exceptional sets `X` and `B`, joint
//! square values, and the explicit error envelope for `m`-subset counts.
//!
//! Comparisons against bounds involving `sqrt(q)` are done on squared
//! integers; floating point is only used for display.

mod character;
mod exceptional;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{check_budget, Error, Result};
use crate::hypergraph::{build_hypergraph, count_m_subsets_raw, for_each_subset, Budget};
use crate::poly::MultiPoly;

pub use character::{slavov_count, weil_check, SlavovReport, WeilCheck};
pub use exceptional::{enumerate_b, enumerate_x, ExceptionalSetB, ExceptionalSetX};

pub fn binomial(n: usize, r: usize) -> u64 {
    if r > n {
        return 0;
    }
    (0..r).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// `main + O(A q^{m-1/2} + B q^{m-1})` with `A = (2d)^{2n}` and
/// `B = (2d)^{13n/3}`, where `n` counts the polynomials involved.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorEnvelope {
    pub q: u64,
    pub m: usize,
    pub n: u64,
    pub d: u32,
    pub main: BigRational,
    /// `A q^{m-1/2} + B q^{m-1}`, rounded upward.
    pub err: f64,
}

impl ErrorEnvelope {
    /// Envelope for joint square values of `n` polynomials of degree at
    /// most `d` in `m` variables: main term `q^m / 2^n`.
    pub fn joint_squares(q: u64, m: usize, n: u64, d: u32) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::InvalidArgument("envelope needs n >= 1 and d >= 1".into()));
        }
        let main = BigRational::new(BigInt::from(q).pow(m as u32), BigInt::from(2).pow(n as u32));
        Ok(Self::with_main(q, m, n, d, main))
    }

    fn with_main(q: u64, m: usize, n: u64, d: u32, main: BigRational) -> Self {
        let base = 2.0 * d as f64;
        let qf = q as f64;
        let a = base.powf(2.0 * n as f64) * qf.powf(m as f64 - 0.5);
        let b = base.powf(13.0 * n as f64 / 3.0) * qf.powf(m as f64 - 1.0);
        let mut err = a + b;
        // a few ulps of slack cover the rounding in powf
        for _ in 0..8 {
            err = err.next_up();
        }
        ErrorEnvelope { q, m, n, d, main, err }
    }

    /// `(2d)^{2n}`.
    pub fn coeff_a(&self) -> BigInt {
        BigInt::from(2 * self.d).pow(2 * self.n as u32)
    }

    /// `floor((2d)^{13n/3})`; flooring only tightens the bound.
    pub fn coeff_b(&self) -> BigInt {
        BigInt::from(2 * self.d).pow(13 * self.n as u32).cbrt()
    }

    /// Exact test `|observed - main| <= A q^{m-1/2} + floor(B) q^{m-1}`.
    pub fn contains(&self, observed: &BigInt) -> bool {
        let dev = (BigRational::from_integer(observed.clone()) - &self.main).abs();
        let qm1 = BigInt::from(self.q).pow(self.m as u32 - 1);
        let r = dev - BigRational::from_integer(self.coeff_b() * &qm1);
        if r <= BigRational::zero() {
            return true;
        }
        // r <= A q^{m-1} sqrt(q)  <=>  r^2 <= A^2 q^{2m-2} q
        let rhs = self.coeff_a().pow(2) * qm1.pow(2) * BigInt::from(self.q);
        &r * &r <= BigRational::from_integer(rhs)
    }

    /// `err / main`, for display.
    pub fn relative_err(&self) -> f64 {
        self.err / self.main.to_f64().unwrap_or(f64::INFINITY)
    }
}

/// Envelope for `k`-Diophantine style `m`-subset counts: main term
/// `q^m / (m! 2^{C(m,k)})`, with `n = C(m,k)`.
pub fn predict_envelope(q: u64, m: usize, k: usize, d: u32) -> Result<ErrorEnvelope> {
    if k < 2 || m < k {
        return Err(Error::InvalidArgument(format!("need m >= k >= 2, got m={m}, k={k}")));
    }
    if d == 0 {
        return Err(Error::InvalidArgument("need d >= 1".into()));
    }
    let n = binomial(m, k);
    let main = crate::hypergraph::subset_main_term(q, m, k);
    Ok(ErrorEnvelope::with_main(q, m, n, d, main))
}

/// Both sides of the subset/tuple identity: `N` counts `m`-subsets that
/// are cliques of `Y_{f,q}`, `S` counts ordered `m`-tuples where every
/// `f_I(a) = f(a_{i_1}, .., a_{i_k})` is a nonzero square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheck {
    pub q: u64,
    pub k: usize,
    pub m: usize,
    pub d: u32,
    pub subsets: u64,
    pub ordered: u64,
}

impl CrossCheck {
    /// `m! N - S`.
    pub fn difference(&self) -> i128 {
        factorial(self.m) as i128 * self.subsets as i128 - self.ordered as i128
    }

    /// `m! d C(m,k) q^{m-1}`, the scaled form of `|N - S/m!| <= d C(m,k) q^{m-1}`.
    pub fn bound(&self) -> u128 {
        factorial(self.m) as u128
            * self.d as u128
            * binomial(self.m, self.k) as u128
            * (self.q as u128).pow(self.m as u32 - 1)
    }

    pub fn pass(&self) -> bool {
        self.difference().unsigned_abs() <= self.bound()
    }
}

/// The family `f_I`, one polynomial in `m` variables per `k`-subset `I`.
pub fn subset_family(f: &MultiPoly, m: usize) -> Vec<MultiPoly> {
    let mut out = Vec::new();
    for_each_subset(m, f.nvars(), |idx| out.push(f.relabel(m, idx)));
    out
}

pub fn tuple_count_crosscheck(f: &MultiPoly, m: usize, budget: Budget) -> Result<CrossCheck> {
    let k = f.nvars();
    if m < k {
        return Err(Error::InvalidArgument(format!("m = {m} must be at least k = {k}")));
    }
    let q = f.field().order() as u64;
    check_budget((q as u128).saturating_pow(m as u32), budget.tuples)?;
    let y = build_hypergraph(f, budget)?;
    let subsets = count_m_subsets_raw(&y, m)?;
    let family = subset_family(f, m);
    let ordered = slavov_count(&family, false, budget)?.observed();
    let d = f.total_degree().max(1) as u32;
    Ok(CrossCheck { q, k, m, d, subsets, ordered })
}
