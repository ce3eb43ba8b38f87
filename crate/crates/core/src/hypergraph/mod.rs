//! The hypergraph `Y_{f,q}`: vertices are the elements of `F_q`, and a
//! `k`-set is an edge iff `f` takes a square value (0 included) on it.

mod clique;
mod count;

use std::collections::HashMap;
use std::sync::RwLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ff::{Field, FieldElement};
use crate::poly::MultiPoly;

pub use clique::{omega_clique, CliqueResult};
pub use count::{
    count_epo_charsum, count_epo_direct, count_labeled_induced, count_m_subsets, count_m_subsets_raw,
    CharSumMethod, CharSumResult, Pattern,
};
pub(crate) use count::subset_main_term;

/// Largest supported uniformity.
pub const MAX_K: usize = 16;

/// Work and memory limits shared by the enumeration kernels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of tuples an exhaustive loop may visit.
    pub tuples: u64,
    /// Maximum bytes for an eager edge bitset.
    pub mem_bytes: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { tuples: 1 << 36, mem_bytes: 1 << 23 }
    }
}

enum EdgeStore {
    /// One bit per `k`-subset, indexed by colex rank.
    Eager { bits: Vec<u64> },
    /// Memoized oracle keyed by the sorted tuple.
    Lazy(RwLock<HashMap<Vec<u32>, bool>>),
}

pub struct HypergraphView {
    field: Field,
    poly: MultiPoly,
    k: usize,
    square: Vec<bool>,
    binom: Vec<Vec<u64>>,
    store: EdgeStore,
}

impl std::fmt::Debug for HypergraphView {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HypergraphView")
            .field("field", &self.field.spec_string())
            .field("poly", &self.poly.to_string())
            .field("k", &self.k)
            .field("eager", &self.is_eager())
            .finish()
    }
}

/// `C(n, r)` for `n <= max_n`, `r <= max_r`, saturating.
fn binomial_table(max_n: usize, max_r: usize) -> Vec<Vec<u64>> {
    let mut t = vec![vec![0u64; max_r + 1]; max_n + 1];
    for n in 0..=max_n {
        t[n][0] = 1;
        for r in 1..=max_r.min(n) {
            t[n][r] = t[n - 1][r - 1].saturating_add(if r < n { t[n - 1][r] } else { 0 });
        }
    }
    t
}

/// Builds `Y_{f,q}` over the field of `f`. The edge set is materialized as a
/// bitset when it fits `budget.mem_bytes`, otherwise edges are computed on
/// demand and memoized.
pub fn build_hypergraph(f: &MultiPoly, budget: Budget) -> Result<HypergraphView> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let k = f.nvars();
    if !(2..=MAX_K).contains(&k) {
        return Err(Error::ArityMismatch { expected: 2, found: k });
    }
    if !f.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let field = f.field().clone();
    let q = field.order() as usize;
    let square = (0..field.order()).map(|i| field.chi_raw(i) >= 0).collect();
    let binom = binomial_table(q, k);
    let total = binom[q][k];
    let mut view = HypergraphView {
        field,
        poly: f.clone(),
        k,
        square,
        binom,
        store: EdgeStore::Lazy(RwLock::new(HashMap::new())),
    };
    if total.div_ceil(8) <= budget.mem_bytes {
        view.store = EdgeStore::Eager { bits: view.materialize(total) };
    }
    Ok(view)
}

/// The Paley sum hypergraph `P_k(q)`: `f = x1 + .. + xk`.
pub fn paley(field: &Field, k: usize, budget: Budget) -> Result<HypergraphView> {
    let mut f = MultiPoly::zero(field, k);
    for i in 0..k {
        f = &f + &MultiPoly::var(field, k, i);
    }
    build_hypergraph(&f, budget)
}

impl HypergraphView {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of vertices, `q`.
    pub fn order(&self) -> u32 {
        self.field.order()
    }

    pub fn is_eager(&self) -> bool {
        matches!(self.store, EdgeStore::Eager { .. })
    }

    pub fn vertices(&self) -> impl Iterator<Item = FieldElement> + '_ {
        self.field.elements()
    }

    fn eval_edge(&self, vs: &[u32]) -> bool {
        self.square[self.poly.eval_raw(vs) as usize]
    }

    fn rank(&self, sorted: &[u32]) -> u64 {
        sorted.iter().enumerate().map(|(i, &a)| self.binom[a as usize][i + 1]).sum()
    }

    fn unrank(&self, mut r: u64, out: &mut [u32]) {
        let mut hi = self.order() as usize;
        for i in (1..=self.k).rev() {
            // largest c < hi with C(c, i) <= r
            let (mut c, mut top) = (i - 1, hi - 1);
            while c < top {
                let mid = (c + top).div_ceil(2);
                if self.binom[mid][i] <= r {
                    c = mid;
                } else {
                    top = mid - 1;
                }
            }
            out[i - 1] = c as u32;
            r -= self.binom[c][i];
            hi = c;
        }
    }

    fn materialize(&self, total: u64) -> Vec<u64> {
        const WORDS_PER_CHUNK: usize = 1024;
        let words = total.div_ceil(64) as usize;
        let mut bits = vec![0u64; words];
        let k = self.k;
        bits.par_chunks_mut(WORDS_PER_CHUNK).enumerate().for_each(|(chunk, out)| {
            let start = (chunk * WORDS_PER_CHUNK * 64) as u64;
            let end = (start + out.len() as u64 * 64).min(total);
            let mut comb = vec![0u32; k];
            self.unrank(start, &mut comb);
            for r in start..end {
                if self.eval_edge(&comb) {
                    let off = (r - start) as usize;
                    out[off / 64] |= 1 << (off % 64);
                }
                next_colex(&mut comb);
            }
        });
        bits
    }

    /// Edge test on `k` distinct vertex indices in any order. Distinctness is
    /// the caller's responsibility.
    pub fn edge_raw(&self, vs: &[u32]) -> bool {
        let mut buf = [0u32; MAX_K];
        let s = &mut buf[..self.k];
        s.copy_from_slice(vs);
        s.sort_unstable();
        self.edge_sorted(s)
    }

    /// Edge test on strictly increasing vertex indices.
    pub fn edge_sorted(&self, sorted: &[u32]) -> bool {
        match &self.store {
            EdgeStore::Eager { bits } => {
                let r = self.rank(sorted);
                bits[(r / 64) as usize] >> (r % 64) & 1 == 1
            }
            EdgeStore::Lazy(cache) => {
                if let Some(&e) = cache.read().expect("cache lock").get(sorted) {
                    return e;
                }
                let e = self.eval_edge(sorted);
                cache.write().expect("cache lock").insert(sorted.to_vec(), e);
                e
            }
        }
    }

    pub fn is_edge(&self, vertices: &[FieldElement]) -> Result<bool> {
        if vertices.len() != self.k {
            return Err(Error::ArityMismatch { expected: self.k, found: vertices.len() });
        }
        let mut idx = Vec::with_capacity(self.k);
        for &v in vertices {
            self.field.check(v)?;
            idx.push(v.index());
        }
        idx.sort_unstable();
        if idx.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertex);
        }
        Ok(self.edge_sorted(&idx))
    }

    /// Unlabeled edge count.
    pub fn edge_count(&self) -> u64 {
        match &self.store {
            EdgeStore::Eager { bits } => bits.iter().map(|w| w.count_ones() as u64).sum(),
            EdgeStore::Lazy(_) => {
                let total = self.binom[self.order() as usize][self.k];
                let mut comb: Vec<u32> = (0..self.k as u32).collect();
                let mut n = 0;
                for _ in 0..total {
                    n += self.edge_sorted(&comb) as u64;
                    next_colex(&mut comb);
                }
                n
            }
        }
    }

    /// Number of edges containing each vertex.
    pub fn vertex_degrees(&self) -> Vec<u64> {
        let q = self.order() as usize;
        let total = self.binom[q][self.k];
        let mut deg = vec![0u64; q];
        let mut comb: Vec<u32> = (0..self.k as u32).collect();
        for _ in 0..total {
            if self.edge_sorted(&comb) {
                for &v in &comb {
                    deg[v as usize] += 1;
                }
            }
            next_colex(&mut comb);
        }
        deg
    }
}

/// Advances a strictly increasing tuple to its colex successor.
fn next_colex(c: &mut [u32]) {
    let k = c.len();
    for i in 0..k {
        if i + 1 == k || c[i] + 1 < c[i + 1] {
            c[i] += 1;
            for (j, x) in c.iter_mut().enumerate().take(i) {
                *x = j as u32;
            }
            return;
        }
    }
}

/// Calls `visit` on every `r`-subset of `items` (as index sets in
/// lexicographic order).
pub(crate) fn for_each_subset(n: usize, r: usize, mut visit: impl FnMut(&[usize])) {
    if r > n {
        return;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        visit(&idx);
        let Some(i) = (0..r).rev().find(|&i| idx[i] != i + n - r) else { return };
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
