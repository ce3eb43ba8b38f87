//! Oracle self-consistency and the frozen fixture file.
//!
//! Set `FFHYPER_WRITE_FIXTURES=1` to rewrite `tests/fixtures/oracle.json`
//! from the oracles.

mod common;

use common::*;

#[test]
fn oracle_field_is_a_field() {
    for q in [3, 9, 25, 27, 49] {
        let f = OracleField::new(q);
        for a in 1..q {
            assert_eq!((0..q).filter(|&b| f.mul(a, b) == 1).count(), 1, "q={q} a={a}");
        }
        let squares = (1..q).filter(|&a| f.is_nonzero_square(a)).count() as u32;
        assert_eq!(squares, (q - 1) / 2);
    }
}

#[test]
fn oracle_clique_methods_agree() {
    for q in odd_prime_powers(13) {
        let f = OracleField::new(q);
        for poly in POLYS {
            assert_eq!(omega_graph(&f, poly), omega_all_subsets(&f, 2, poly), "q={q} {poly:?}");
        }
    }
}

#[test]
fn oracle_small_cases() {
    // over F_3 the pairs {0,1}, {0,2}, {1,2} sum to 1, 2, 0: a path, so omega = 2
    let f3 = OracleField::new(3);
    assert_eq!(omega_graph(&f3, OraclePoly::Sum), 2);
    assert_eq!(legendre_sum_oracle(13, 1), -1);
    assert_eq!(diagonal_x_oracle(&OracleField::new(7)), 1);
    assert_eq!(diagonal_x_oracle(&OracleField::new(13)), 25);
    let (n, s) = crosscheck_oracle(&OracleField::new(7), 2, 2, OraclePoly::ProdPlusOne);
    assert_eq!(n, prod_plus_one_edges(7));
    assert!(s <= 49);
}

/// Edges of `x1 x2 + 1` over `F_p` by direct modular arithmetic.
fn prod_plus_one_edges(p: u64) -> u64 {
    let sq: Vec<bool> = (0..p).map(|x| (0..p).any(|y| y * y % p == x)).collect();
    let mut n = 0;
    for a in 0..p {
        for b in a + 1..p {
            n += sq[((a * b + 1) % p) as usize] as u64;
        }
    }
    n
}

#[test]
fn fixtures_match_oracles() {
    let computed = compute_fixtures();
    if std::env::var_os("FFHYPER_WRITE_FIXTURES").is_some() {
        let path = fixture_path();
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, serde_json::to_string_pretty(&computed).unwrap() + "\n").unwrap();
    }
    assert_eq!(load_fixtures(), computed);
}
