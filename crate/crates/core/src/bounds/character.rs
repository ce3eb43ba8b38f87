use num_bigint::BigInt;
use rayon::prelude::*;

use super::ErrorEnvelope;
use crate::error::{check_budget, Error, Result};
use crate::ff::FieldElement;
use crate::hypergraph::{for_each_subset, Budget};
use crate::poly::{MultiPoly, UniPoly};
use crate::report::CountReport;

/// `sum_x chi(a g(x))` against `(s - 1) sqrt(q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeilCheck {
    pub q: u32,
    pub sum: i64,
    /// Distinct roots of `g` in a splitting field.
    pub s: u32,
    /// `g` is not the square of a polynomial, so the bound applies.
    pub applicable: bool,
}

impl WeilCheck {
    /// `sum^2 <= (s - 1)^2 q`.
    pub fn holds(&self) -> bool {
        let lhs = (self.sum as i128).pow(2);
        let rhs = (self.s as i128 - 1).pow(2) * self.q as i128;
        lhs <= rhs
    }
}

pub fn weil_check(g: &UniPoly, a: FieldElement) -> Result<WeilCheck> {
    let field = g.field();
    field.check(a)?;
    if a.is_zero() {
        return Err(Error::InvalidArgument("a must be nonzero".into()));
    }
    if g.degree() < 1 {
        return Err(Error::ConstantPolynomial);
    }
    if !g.is_monic() {
        return Err(Error::NotMonic);
    }
    let sum: i64 = field
        .elements()
        .map(|x| field.chi(field.mul(a, g.eval(x))) as i64)
        .sum();
    let s = g.distinct_root_count()? as u32;
    Ok(WeilCheck { q: field.order(), sum, s, applicable: !g.is_const_square()? })
}

/// Joint nonzero-square count for a polynomial family.
#[derive(Clone, Debug, PartialEq)]
pub struct SlavovReport {
    pub report: CountReport,
    pub envelope: ErrorEnvelope,
    /// Whether the product condition was examined.
    pub condition_checked: bool,
    /// Nonempty index subsets whose product is a constant times a square.
    pub failing_subsets: Vec<Vec<usize>>,
}

impl SlavovReport {
    pub fn observed(&self) -> u64 {
        u64::try_from(&self.report.observed).expect("count fits u64")
    }

    pub fn condition_holds(&self) -> bool {
        self.condition_checked && self.failing_subsets.is_empty()
    }

    pub fn within_envelope(&self) -> bool {
        self.envelope.contains(&self.report.observed)
    }
}

/// Counts points of `F_q^m` where every `f_i` is a nonzero square, against
/// `q^m / 2^n`. With `check_condition`, every nonempty subset product is
/// tested for being a constant times a square, and failures are listed.
pub fn slavov_count(fs: &[MultiPoly], check_condition: bool, budget: Budget) -> Result<SlavovReport> {
    let first = fs.first().ok_or(Error::EmptyGenerators)?;
    let field = first.field().clone();
    let m = first.nvars();
    for f in fs {
        if f.field() != &field {
            return Err(Error::FieldMismatch);
        }
        if f.nvars() != m {
            return Err(Error::ArityMismatch { expected: m, found: f.nvars() });
        }
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
    }
    let q = field.order();
    check_budget((q as u128).saturating_pow(m as u32), budget.tuples)?;
    let nonzero_square: Vec<bool> = (0..q).map(|i| field.chi_raw(i) == 1).collect();
    let observed: u64 = (0..q)
        .into_par_iter()
        .map(|first| {
            let mut point = vec![0u32; m];
            point[0] = first;
            let mut n = 0u64;
            loop {
                if fs.iter().all(|f| nonzero_square[f.eval_raw(&point) as usize]) {
                    n += 1;
                }
                let mut pos = 1;
                while pos < m {
                    point[pos] += 1;
                    if point[pos] < q {
                        break;
                    }
                    point[pos] = 0;
                    pos += 1;
                }
                if pos >= m {
                    return n;
                }
            }
        })
        .sum();
    let n = fs.len();
    let d = fs.iter().map(|f| f.total_degree().max(1) as u32).max().unwrap_or(1);
    let envelope = ErrorEnvelope::joint_squares(q as u64, m, n as u64, d)?;
    let report = CountReport::new(BigInt::from(observed), envelope.main.clone()).with_envelope(envelope.err);
    let mut failing = Vec::new();
    if check_condition {
        for size in 1..=n {
            let mut err = None;
            for_each_subset(n, size, |idx| {
                if err.is_some() {
                    return;
                }
                let prod = idx.iter().fold(MultiPoly::one(&field, m), |acc, &i| &acc * &fs[i]);
                match prod.is_const_square() {
                    Ok(true) => failing.push(idx.to_vec()),
                    Ok(false) => {}
                    Err(e) => err = Some(e),
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
        }
    }
    Ok(SlavovReport { report, envelope, condition_checked: check_condition, failing_subsets: failing })
}
