//! Brute-force reference computations. These use their own small field
//! implementation (base-p digit vectors reduced by a separately chosen
//! irreducible modulus) and plain nested loops, sharing no code with the
//! library's counting kernels.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

/// `F_{p^n}` with elements encoded as base-`p` digit strings, lowest first.
pub struct OracleField {
    pub p: u32,
    pub n: u32,
    pub q: u32,
    add: Vec<Vec<u32>>,
    mul: Vec<Vec<u32>>,
    square: Vec<bool>,
}

fn digits(mut x: u32, p: u32, n: u32) -> Vec<u32> {
    (0..n)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

impl OracleField {
    pub fn new(q: u32) -> OracleField {
        let p = (2..=q).find(|p| q.is_multiple_of(*p)).unwrap();
        let n = (1..).find(|&n| p.pow(n) == q).unwrap();
        // largest monic modulus of degree n without roots in F_p (degree <= 3)
        let modulus: Vec<u32> = if n == 1 {
            vec![0, 1]
        } else {
            assert!(n <= 3);
            (0..p.pow(n))
                .rev()
                .map(|low| {
                    let mut m = digits(low, p, n);
                    m.push(1);
                    m
                })
                .find(|m| {
                    (0..p).all(|x| m.iter().rev().fold(0u64, |acc, &c| (acc * x as u64 + c as u64) % p as u64) != 0)
                })
                .unwrap()
        };
        let polymul = |a: &[u32], b: &[u32]| -> Vec<u32> {
            let mut r = vec![0u64; 2 * n as usize];
            for (i, &x) in a.iter().enumerate() {
                for (j, &y) in b.iter().enumerate() {
                    r[i + j] = (r[i + j] + x as u64 * y as u64) % p as u64;
                }
            }
            for i in (n as usize..r.len()).rev() {
                let c = r[i];
                if c == 0 {
                    continue;
                }
                for (j, &m) in modulus.iter().enumerate() {
                    let idx = i - n as usize + j;
                    r[idx] = (r[idx] + (p as u64 - c) * m as u64) % p as u64;
                }
            }
            r[..n as usize].iter().map(|&x| x as u32).collect()
        };
        let els: Vec<Vec<u32>> = (0..q).map(|x| digits(x, p, n)).collect();
        let add = els
            .iter()
            .map(|a| {
                els.iter()
                    .map(|b| {
                        let s: Vec<u32> = a.iter().zip(b).map(|(x, y)| (x + y) % p).collect();
                        undigits(&s, p)
                    })
                    .collect()
            })
            .collect();
        let mul: Vec<Vec<u32>> =
            els.iter().map(|a| els.iter().map(|b| undigits(&polymul(a, b), p)).collect()).collect();
        let mut square = vec![false; q as usize];
        for x in 0..q as usize {
            square[mul[x][x] as usize] = true;
        }
        OracleField { p, n, q, add, mul, square }
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize][b as usize]
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize][b as usize]
    }

    pub fn one(&self) -> u32 {
        1
    }

    /// Integer `c` as a prime-field element.
    pub fn int(&self, c: i64) -> u32 {
        c.rem_euclid(self.p as i64) as u32
    }

    /// Square, zero included.
    pub fn is_square(&self, a: u32) -> bool {
        self.square[a as usize]
    }

    pub fn is_nonzero_square(&self, a: u32) -> bool {
        a != 0 && self.square[a as usize]
    }
}

/// The test polynomials, by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OraclePoly {
    /// `x1 x2 .. xk + 1`
    ProdPlusOne,
    /// `x1 + .. + xk`
    Sum,
}

impl OraclePoly {
    pub fn text(self, k: usize) -> String {
        let vars: Vec<String> = (1..=k).map(|i| format!("x{i}")).collect();
        match self {
            OraclePoly::ProdPlusOne => format!("{}+1", vars.join("*")),
            OraclePoly::Sum => vars.join("+"),
        }
    }

    pub fn eval(self, f: &OracleField, xs: &[u32]) -> u32 {
        match self {
            OraclePoly::ProdPlusOne => f.add(xs.iter().fold(f.one(), |acc, &x| f.mul(acc, x)), f.one()),
            OraclePoly::Sum => xs.iter().fold(0, |acc, &x| f.add(acc, x)),
        }
    }

    pub fn edge(self, f: &OracleField, xs: &[u32]) -> bool {
        f.is_square(self.eval(f, xs))
    }
}

/// Labeled even partial octahedra by scanning all of `F^{2k}`.
pub fn epo_oracle(f: &OracleField, k: usize, poly: OraclePoly) -> u64 {
    let q = f.q as u64;
    let mut count = 0;
    let mut t = vec![0u32; 2 * k];
    for code in 0..q.pow(2 * k as u32) {
        let mut c = code;
        for x in t.iter_mut() {
            *x = (c % q) as u32;
            c /= q;
        }
        let distinct = (0..t.len()).all(|i| (i + 1..t.len()).all(|j| t[i] != t[j]));
        if !distinct {
            continue;
        }
        let mut edges = 0;
        for eps in 0..1usize << k {
            let verts: Vec<u32> = (0..k).map(|i| t[2 * i + ((eps >> i) & 1)]).collect();
            edges += poly.edge(f, &verts) as u32;
        }
        if edges % 2 == 0 {
            count += 1;
        }
    }
    count
}

fn adjacency(f: &OracleField, poly: OraclePoly) -> Vec<Vec<bool>> {
    (0..f.q).map(|a| (0..f.q).map(|b| a != b && poly.edge(f, &[a, b])).collect()).collect()
}

/// Triangles of a graph via common neighbours of each edge.
pub fn triangles_oracle(f: &OracleField, poly: OraclePoly) -> u64 {
    let adj = adjacency(f, poly);
    let q = f.q as usize;
    let mut n = 0;
    for a in 0..q {
        for b in a + 1..q {
            if adj[a][b] {
                n += (b + 1..q).filter(|&c| adj[a][c] && adj[b][c]).count() as u64;
            }
        }
    }
    n
}

/// 4-subsets of a 3-uniform hypergraph with all four triples present.
pub fn k3_quadruples_oracle(f: &OracleField, poly: OraclePoly) -> u64 {
    let q = f.q;
    let e = |a, b, c| poly.edge(f, &[a, b, c]);
    let mut n = 0;
    for a in 0..q {
        for b in a + 1..q {
            for c in b + 1..q {
                if !e(a, b, c) {
                    continue;
                }
                for d in c + 1..q {
                    if e(a, b, d) && e(a, c, d) && e(b, c, d) {
                        n += 1;
                    }
                }
            }
        }
    }
    n
}

/// Whether every `k`-subset of `set` is an edge.
fn is_clique(f: &OracleField, k: usize, poly: OraclePoly, set: &[u32]) -> bool {
    let mut idx: Vec<usize> = (0..k).collect();
    if set.len() < k {
        return true;
    }
    loop {
        let verts: Vec<u32> = idx.iter().map(|&i| set[i]).collect();
        if !poly.edge(f, &verts) {
            return false;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if idx[i] < set.len() - k + i {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Clique number by checking every vertex subset.
pub fn omega_all_subsets(f: &OracleField, k: usize, poly: OraclePoly) -> usize {
    let q = f.q;
    (0u64..1 << q)
        .filter_map(|mask| {
            let set: Vec<u32> = (0..q).filter(|&v| mask >> v & 1 == 1).collect();
            is_clique(f, k, poly, &set).then_some(set.len())
        })
        .max()
        .unwrap()
}

/// Clique number of a graph by growing cliques in increasing vertex order.
pub fn omega_graph(f: &OracleField, poly: OraclePoly) -> usize {
    fn grow(adj: &[Vec<bool>], clique: &mut Vec<usize>, from: usize) -> usize {
        let mut best = clique.len();
        for v in from..adj.len() {
            if clique.iter().all(|&u| adj[u][v]) {
                clique.push(v);
                best = best.max(grow(adj, clique, v + 1));
                clique.pop();
            }
        }
        best
    }
    grow(&adjacency(f, poly), &mut Vec::new(), 0)
}

/// Points `x` where both `x` and `x + 1` are nonzero squares.
pub fn slavov_pair_oracle(f: &OracleField) -> u64 {
    (0..f.q).filter(|&x| f.is_nonzero_square(x) && f.is_nonzero_square(f.add(x, f.one()))).count() as u64
}

/// `sum_x (x^2 + c / p)` for a prime `p`, by Euler's criterion.
pub fn legendre_sum_oracle(p: u64, c: u64) -> i64 {
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    (0..p)
        .map(|x| match pow(x * x + c, (p - 1) / 2) {
            0 => 0,
            1 => 1,
            _ => -1,
        })
        .sum()
}

/// `|X|` for `x1^2 + x2^2 + x3^2`: the specialization `x^2 + c` is a
/// constant times a square exactly when `c = 0`.
pub fn diagonal_x_oracle(f: &OracleField) -> u64 {
    let mut n = 0;
    for a in 0..f.q {
        for b in 0..f.q {
            if f.add(f.mul(a, a), f.mul(b, b)) == 0 {
                n += 1;
            }
        }
    }
    n
}

/// `(N, S)`: `m`-subsets all of whose `k`-subsets are edges, and ordered
/// `m`-tuples where `f` on every `k`-subset of positions is a nonzero square.
pub fn crosscheck_oracle(f: &OracleField, k: usize, m: usize, poly: OraclePoly) -> (u64, u64) {
    let q = f.q as u64;
    let mut subsets = 0;
    let mut ordered = 0;
    let mut t = vec![0u32; m];
    let positions: Vec<Vec<usize>> = {
        let mut out = Vec::new();
        for mask in 0u32..1 << m {
            if mask.count_ones() as usize == k {
                out.push((0..m).filter(|&i| mask >> i & 1 == 1).collect());
            }
        }
        out
    };
    for code in 0..q.pow(m as u32) {
        let mut c = code;
        for x in t.iter_mut() {
            *x = (c % q) as u32;
            c /= q;
        }
        let vals = positions.iter().map(|pos| {
            let verts: Vec<u32> = pos.iter().map(|&i| t[i]).collect();
            poly.eval(f, &verts)
        });
        let mut all_nonzero_sq = true;
        let mut all_sq = true;
        for v in vals {
            all_nonzero_sq &= f.is_nonzero_square(v);
            all_sq &= f.is_square(v);
        }
        ordered += all_nonzero_sq as u64;
        if t.windows(2).all(|w| w[0] < w[1]) && all_sq {
            subsets += 1;
        }
    }
    (subsets, ordered)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixtures {
    /// `(q, poly text) -> labeled EPO count`
    pub epo: BTreeMap<String, u64>,
    /// `(q, poly text, m) -> m-subset count`
    pub subsets: BTreeMap<String, u64>,
    /// `(q, poly text) -> clique number`
    pub omega: BTreeMap<String, usize>,
    /// `q -> #{x : x, x+1 nonzero squares}`
    pub slavov_pair: BTreeMap<String, u64>,
    /// `(q, c) -> sum_x chi(x^2 + c)`
    pub legendre_sum: BTreeMap<String, i64>,
    /// `q -> |X|` for the diagonal quadric
    pub diagonal_x: BTreeMap<String, u64>,
    /// `(q, poly text, m) -> [N, S]`
    pub crosscheck: BTreeMap<String, (u64, u64)>,
}

pub fn key(parts: &[&dyn std::fmt::Display]) -> String {
    parts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn fixture_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/oracle.json")
}

pub fn load_fixtures() -> Fixtures {
    let text = std::fs::read_to_string(fixture_path()).expect("fixture file");
    serde_json::from_str(&text).expect("fixture json")
}

pub const EPO_K2_ORDERS: [u32; 4] = [13, 17, 25, 29];
pub const EPO_K3_ORDERS: [u32; 3] = [7, 9, 11];
pub const POLYS: [OraclePoly; 2] = [OraclePoly::ProdPlusOne, OraclePoly::Sum];
pub const SLAVOV_ORDERS: [u32; 3] = [13, 29, 53];

pub fn odd_prime_powers(max: u32) -> Vec<u32> {
    (3..=max)
        .filter(|&q| {
            let p = (2..=q).find(|p| q % p == 0).unwrap();
            p != 2 && (1..).map(|n| p.pow(n)).take_while(|&x| x <= q).any(|x| x == q)
        })
        .collect()
}

/// `(q, k, m, poly)` cases for the subset/tuple identity.
pub fn crosscheck_cases() -> Vec<(u32, usize, usize, OraclePoly)> {
    let mut out = Vec::new();
    for q in odd_prime_powers(13) {
        for poly in POLYS {
            for m in [2, 3] {
                out.push((q, 2, m, poly));
            }
        }
    }
    for q in odd_prime_powers(9) {
        out.push((q, 3, 3, OraclePoly::ProdPlusOne));
    }
    out
}

/// Computes every fixture value from the oracles.
pub fn compute_fixtures() -> Fixtures {
    let mut fx = Fixtures {
        epo: BTreeMap::new(),
        subsets: BTreeMap::new(),
        omega: BTreeMap::new(),
        slavov_pair: BTreeMap::new(),
        legendre_sum: BTreeMap::new(),
        diagonal_x: BTreeMap::new(),
        crosscheck: BTreeMap::new(),
    };
    for (k, orders) in [(2usize, &EPO_K2_ORDERS[..]), (3, &EPO_K3_ORDERS[..])] {
        for &q in orders {
            let f = OracleField::new(q);
            for poly in POLYS {
                fx.epo.insert(key(&[&q, &poly.text(k)]), epo_oracle(&f, k, poly));
            }
        }
    }
    for q in [101, 151] {
        let f = OracleField::new(q);
        fx.subsets.insert(key(&[&q, &OraclePoly::ProdPlusOne.text(2), &3]), triangles_oracle(&f, OraclePoly::ProdPlusOne));
    }
    for q in [13, 17] {
        let f = OracleField::new(q);
        fx.subsets
            .insert(key(&[&q, &OraclePoly::ProdPlusOne.text(3), &4]), k3_quadruples_oracle(&f, OraclePoly::ProdPlusOne));
    }
    for q in odd_prime_powers(31) {
        let f = OracleField::new(q);
        for poly in POLYS {
            fx.omega.insert(key(&[&q, &poly.text(2)]), omega_graph(&f, poly));
        }
    }
    for q in odd_prime_powers(13) {
        let f = OracleField::new(q);
        fx.omega.insert(key(&[&q, &OraclePoly::ProdPlusOne.text(3)]), omega_all_subsets(&f, 3, OraclePoly::ProdPlusOne));
    }
    for q in SLAVOV_ORDERS {
        fx.slavov_pair.insert(q.to_string(), slavov_pair_oracle(&OracleField::new(q)));
    }
    for p in [13u64, 17] {
        for c in 1..p {
            fx.legendre_sum.insert(key(&[&p, &c]), legendre_sum_oracle(p, c));
        }
    }
    for q in [5, 7, 13] {
        fx.diagonal_x.insert(q.to_string(), diagonal_x_oracle(&OracleField::new(q)));
    }
    for (q, k, m, poly) in crosscheck_cases() {
        fx.crosscheck.insert(key(&[&q, &poly.text(k), &m]), crosscheck_oracle(&OracleField::new(q), k, m, poly));
    }
    fx
}
