//! Exhaustive counting kernels. Every parallel loop splits on the outermost
//! coordinate and reduces with exact integer sums, so results do not depend
//! on the number of worker threads.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

use super::{for_each_subset, Budget, HypergraphView};
use crate::bounds::predict_envelope;
use crate::error::{check_budget, Error, Result};
use crate::report::{ratio, CountReport};

fn pow_u128(q: u32, e: usize) -> u128 {
    (q as u128).saturating_pow(e as u32)
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

fn binomial(n: usize, r: usize) -> u64 {
    if r > n {
        return 0;
    }
    (0..r).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}

/// Labeled even partial octahedra: 2k-tuples of distinct vertices
/// `(u_1(0), u_1(1), .., u_k(0), u_k(1))` whose `2^k` octahedron positions
/// hold an even number of edges. Predicted main term `q^{2k} / 2`.
pub fn count_epo_direct(y: &HypergraphView, budget: Budget) -> Result<CountReport> {
    let q = y.order();
    let k = y.k();
    check_budget(pow_u128(q, 2 * k), budget.tuples)?;
    let observed: u64 = (0..q)
        .into_par_iter()
        .map(|first| {
            let mut tuple = vec![0u32; 2 * k];
            let mut used = vec![false; q as usize];
            tuple[0] = first;
            used[first as usize] = true;
            epo_rec(y, &mut tuple, &mut used, 1)
        })
        .sum();
    let predicted = ratio(BigInt::from(q).pow(2 * k as u32), 2);
    Ok(CountReport::new(observed, predicted))
}

fn epo_rec(y: &HypergraphView, tuple: &mut [u32], used: &mut [bool], pos: usize) -> u64 {
    let k = y.k();
    if pos == 2 * k {
        let mut parity = false;
        let mut verts = [0u32; super::MAX_K];
        for eps in 0..1usize << k {
            for i in 0..k {
                verts[i] = tuple[2 * i + (eps >> i & 1)];
            }
            parity ^= y.edge_raw(&verts[..k]);
        }
        return (!parity) as u64;
    }
    let mut n = 0;
    for v in 0..y.order() {
        if used[v as usize] {
            continue;
        }
        used[v as usize] = true;
        tuple[pos] = v;
        n += epo_rec(y, tuple, used, pos + 1);
        used[v as usize] = false;
    }
    n
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharSumMethod {
    /// Direct sum over `F^{2k}`.
    Naive,
    /// Sum over `F^{2k-2}` of the square of the inner sum over `u_1`.
    Factored,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharSumResult {
    /// `S = sum over F^{2k} of prod_eps chi(f(u(eps)))`, strict character.
    pub s: BigInt,
    /// `q^{2k}/2 + S/2`.
    pub estimate: BigRational,
}

/// The character sum `S` behind the EPO count.
///
/// Expanding `1/2 (1 + prod chi)` over all tuples gives the estimate
/// `q^{2k}/2 + S/2`. In the factored form the two inner sums over `u_1(0)`
/// and `u_1(1)` range over the same products, so `S` is a sum of squares.
pub fn count_epo_charsum(y: &HypergraphView, method: CharSumMethod, budget: Budget) -> Result<CharSumResult> {
    let q = y.order();
    let k = y.k();
    let field = y.field();
    let f = y.poly();
    let s: i128 = match method {
        CharSumMethod::Naive => {
            check_budget(pow_u128(q, 2 * k), budget.tuples)?;
            (0..q)
                .into_par_iter()
                .map(|first| {
                    let mut rest = vec![0u32; 2 * k - 1];
                    let mut point = vec![0u32; k];
                    let mut total = 0i128;
                    odometer(&mut rest, q, |rest| {
                        let mut prod = 1i8;
                        for eps in 0..1usize << k {
                            for (i, p) in point.iter_mut().enumerate() {
                                let idx = 2 * i + (eps >> i & 1);
                                *p = if idx == 0 { first } else { rest[idx - 1] };
                            }
                            prod *= field.chi_raw(f.eval_raw(&point));
                            if prod == 0 {
                                break;
                            }
                        }
                        total += prod as i128;
                    });
                    total
                })
                .sum()
        }
        CharSumMethod::Factored => {
            check_budget(pow_u128(q, 2 * k - 1), budget.tuples)?;
            let rest = 2 * k - 2;
            (0..q)
                .into_par_iter()
                .map(|head| {
                    let mut u = vec![0u32; rest];
                    u[0] = head;
                    let mut point = vec![0u32; k];
                    let mut total = 0i128;
                    let mut tail = vec![0u32; rest - 1];
                    odometer(&mut tail, q, |tail| {
                        u[1..].copy_from_slice(tail);
                        let mut t = 0i64;
                        for x in 0..q {
                            point[0] = x;
                            let mut prod = 1i8;
                            for eps in 0..1usize << (k - 1) {
                                for i in 1..k {
                                    point[i] = u[2 * (i - 1) + (eps >> (i - 1) & 1)];
                                }
                                prod *= field.chi_raw(f.eval_raw(&point));
                                if prod == 0 {
                                    break;
                                }
                            }
                            t += prod as i64;
                        }
                        total += (t as i128) * (t as i128);
                    });
                    total
                })
                .sum()
        }
    };
    let s = BigInt::from(s);
    let half = ratio(1, 2);
    let estimate = (BigRational::from_integer(BigInt::from(q).pow(2 * k as u32)) + BigRational::from_integer(s.clone()))
        * half;
    Ok(CharSumResult { s, estimate })
}

/// Visits every assignment of `digits` over `0..base`, starting from the
/// current contents (expected all zero).
fn odometer(digits: &mut [u32], base: u32, mut visit: impl FnMut(&[u32])) {
    loop {
        visit(digits);
        let mut pos = 0;
        while pos < digits.len() {
            digits[pos] += 1;
            if digits[pos] < base {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
        if pos == digits.len() {
            return;
        }
    }
}

/// A `k`-uniform pattern hypergraph on vertices `0..s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    s: usize,
    k: usize,
    edges: BTreeSet<Vec<usize>>,
}

impl Pattern {
    pub fn new(s: usize, k: usize, edges: impl IntoIterator<Item = Vec<usize>>) -> Result<Pattern> {
        if k < 2 || s < k {
            return Err(Error::InvalidArgument(format!("pattern needs s >= k >= 2, got s={s}, k={k}")));
        }
        let mut set = BTreeSet::new();
        for mut e in edges {
            e.sort_unstable();
            let distinct = e.windows(2).all(|w| w[0] < w[1]);
            if e.len() != k || !distinct || e.last().is_some_and(|&v| v >= s) {
                return Err(Error::InvalidArgument(format!("bad pattern edge {e:?}")));
            }
            set.insert(e);
        }
        Ok(Pattern { s, k, edges: set })
    }

    pub fn single_edge(k: usize) -> Pattern {
        Pattern::new(k, k, [(0..k).collect()]).expect("valid")
    }

    pub fn empty(s: usize, k: usize) -> Result<Pattern> {
        Pattern::new(s, k, [])
    }

    pub fn vertices(&self) -> usize {
        self.s
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, sorted: &[usize]) -> bool {
        self.edges.contains(sorted)
    }
}

/// Labeled induced copies of `pattern`: injective maps from pattern
/// vertices to `F_q` under which every `k`-subset is an edge exactly when
/// its preimage is. Predicted main term `q^s / 2^{C(s,k)}`.
pub fn count_labeled_induced(y: &HypergraphView, pattern: &Pattern, budget: Budget) -> Result<CountReport> {
    let k = y.k();
    if pattern.k != k {
        return Err(Error::ArityMismatch { expected: k, found: pattern.k });
    }
    let q = y.order();
    let s = pattern.s;
    check_budget(pow_u128(q, s), budget.tuples)?;
    // constraints[i]: k-subsets whose largest pattern vertex is i
    let mut constraints: Vec<Vec<(Vec<usize>, bool)>> = vec![Vec::new(); s];
    for (i, slot) in constraints.iter_mut().enumerate() {
        for_each_subset(i, k - 1, |sub| {
            let mut e = sub.to_vec();
            e.push(i);
            let present = pattern.has_edge(&e);
            slot.push((e, present));
        });
    }
    let observed: u64 = (0..q)
        .into_par_iter()
        .map(|first| {
            let mut image = vec![0u32; s];
            let mut used = vec![false; q as usize];
            image[0] = first;
            used[first as usize] = true;
            induced_rec(y, &constraints, &mut image, &mut used, 1)
        })
        .sum();
    let predicted = ratio(BigInt::from(q).pow(s as u32), BigInt::from(2).pow(binomial(s, k) as u32));
    Ok(CountReport::new(observed, predicted))
}

fn induced_rec(
    y: &HypergraphView,
    constraints: &[Vec<(Vec<usize>, bool)>],
    image: &mut [u32],
    used: &mut [bool],
    pos: usize,
) -> u64 {
    if pos == image.len() {
        return 1;
    }
    let mut verts = [0u32; super::MAX_K];
    let mut n = 0;
    for v in 0..y.order() {
        if used[v as usize] {
            continue;
        }
        image[pos] = v;
        let ok = constraints[pos].iter().all(|(e, present)| {
            for (slot, &p) in verts.iter_mut().zip(e) {
                *slot = image[p];
            }
            y.edge_raw(&verts[..e.len()]) == *present
        });
        if ok {
            used[v as usize] = true;
            n += induced_rec(y, constraints, image, used, pos + 1);
            used[v as usize] = false;
        }
    }
    n
}

/// Number of `m`-subsets all of whose `k`-subsets are edges.
pub fn count_m_subsets_raw(y: &HypergraphView, m: usize) -> Result<u64> {
    let k = y.k();
    if m < k {
        return Err(Error::InvalidArgument(format!("m = {m} must be at least k = {k}")));
    }
    let q = y.order();
    if m > q as usize {
        return Ok(0);
    }
    let all: Vec<u32> = (0..q).collect();
    Ok((0..q)
        .into_par_iter()
        .map(|v| {
            let mut clique = Vec::with_capacity(m);
            let cands = extend_candidates(y, &clique, v, &all[v as usize + 1..]);
            clique.push(v);
            subsets_rec(y, &mut clique, &cands, m)
        })
        .sum())
}

/// Survivors among `cands` after adding `v` to `clique`: vertices `w` such
/// that every `k`-subset of `clique + v + w` containing both `v` and `w` is
/// an edge.
pub(crate) fn extend_candidates(y: &HypergraphView, clique: &[u32], v: u32, cands: &[u32]) -> Vec<u32> {
    let k = y.k();
    if clique.len() + 1 < k - 1 {
        return cands.to_vec();
    }
    let mut subsets: Vec<Vec<u32>> = Vec::new();
    for_each_subset(clique.len(), k - 2, |sub| {
        let mut t: Vec<u32> = sub.iter().map(|&i| clique[i]).collect();
        t.push(v);
        subsets.push(t);
    });
    let mut verts = [0u32; super::MAX_K];
    cands
        .iter()
        .copied()
        .filter(|&w| {
            subsets.iter().all(|t| {
                verts[..k - 1].copy_from_slice(t);
                verts[k - 1] = w;
                y.edge_raw(&verts[..k])
            })
        })
        .collect()
}

fn subsets_rec(y: &HypergraphView, clique: &mut Vec<u32>, cands: &[u32], m: usize) -> u64 {
    if clique.len() == m {
        return 1;
    }
    if clique.len() + 1 == m {
        return cands.len() as u64;
    }
    if clique.len() + cands.len() < m {
        return 0;
    }
    let mut n = 0;
    for (i, &v) in cands.iter().enumerate() {
        let next = extend_candidates(y, clique, v, &cands[i + 1..]);
        clique.push(v);
        n += subsets_rec(y, clique, &next, m);
        clique.pop();
    }
    n
}

/// `m`-subset count with predicted main term `q^m / (m! 2^{C(m,k)})` and
/// the explicit error envelope for degree `d = deg f`.
pub fn count_m_subsets(y: &HypergraphView, m: usize) -> Result<CountReport> {
    let observed = count_m_subsets_raw(y, m)?;
    let d = y.poly().total_degree().max(1) as u32;
    let env = predict_envelope(y.order() as u64, m, y.k(), d)?;
    Ok(CountReport::new(observed, env.main.clone()).with_envelope(env.err))
}

pub(crate) fn subset_main_term(q: u64, m: usize, k: usize) -> BigRational {
    let den = factorial(m) * BigInt::from(2).pow(binomial(m, k) as u32);
    BigRational::new(BigInt::from(q).pow(m as u32), den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::Field;
    use crate::hypergraph::{build_hypergraph, paley};
    use crate::poly::parse_poly;

    fn y(q: &str, s: &str) -> HypergraphView {
        let f = Field::parse(q).unwrap();
        build_hypergraph(&parse_poly(&f, s, None).unwrap(), Budget::default()).unwrap()
    }

    #[test]
    fn epo_on_complete_graph() {
        // f = (x1+x2)^2 + ... constant square: 4 is a square mod 7
        let g = y("7", "4 + 0*x1*x2");
        let r = count_epo_direct(&g, Budget::default()).unwrap();
        assert_eq!(r.observed, BigInt::from(7 * 6 * 5 * 4));
    }

    #[test]
    fn charsum_paths_agree() {
        for (q, s) in [("5", "x1*x2+1"), ("7", "x1+x2"), ("5", "x1*x2*x3+1"), ("9", "x1^2+x2^2+t")] {
            let g = y(q, s);
            let a = count_epo_charsum(&g, CharSumMethod::Naive, Budget::default()).unwrap();
            let b = count_epo_charsum(&g, CharSumMethod::Factored, Budget::default()).unwrap();
            assert_eq!(a, b, "{q} {s}");
            assert!(a.s >= BigInt::from(0));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let g = y("7", "x1*x2+1");
        let tiny = Budget { tuples: 100, ..Budget::default() };
        assert!(matches!(count_epo_direct(&g, tiny), Err(Error::BudgetExceeded { .. })));
        assert!(matches!(
            count_epo_charsum(&g, CharSumMethod::Naive, tiny),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn single_edge_pattern_relations() {
        let g = paley(&Field::prime(11).unwrap(), 2, Budget::default()).unwrap();
        let edge = count_labeled_induced(&g, &Pattern::single_edge(2), Budget::default()).unwrap();
        let empty = count_labeled_induced(&g, &Pattern::empty(2, 2).unwrap(), Budget::default()).unwrap();
        assert_eq!(edge.observed, BigInt::from(g.edge_count() * 2));
        assert_eq!(&edge.observed + &empty.observed, BigInt::from(11 * 10));
        assert_eq!(BigInt::from(count_m_subsets_raw(&g, 2).unwrap() * 2), edge.observed);
    }

    #[test]
    fn m_subsets_edge_cases() {
        let g = y("5", "x1*x2+1");
        assert_eq!(count_m_subsets_raw(&g, 6).unwrap(), 0);
        assert!(count_m_subsets_raw(&g, 1).is_err());
        let r = count_m_subsets(&g, 3).unwrap();
        assert_eq!(r.predicted_main, ratio(125, 48));
        assert!(r.envelope.unwrap() > 0.0);
    }
}
