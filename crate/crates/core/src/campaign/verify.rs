use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::scan::{scan_csv, ScanConfig};
use crate::admissible::{is_admissible, primitive_density_deg2_var3, random_admissible_poly_with, Status};
use crate::bounds::{
    binomial, enumerate_b, enumerate_x, predict_envelope, slavov_count, tuple_count_crosscheck, weil_check,
};
use crate::error::{Error, Result};
use crate::ff::Field;
use crate::hypergraph::{
    build_hypergraph, count_epo_charsum, count_epo_direct, count_m_subsets_raw, omega_clique, Budget,
    CharSumMethod,
};
use crate::poly::{parse_poly, MultiPoly, UniPoly};
use crate::report::CheckRecord;

pub const VERIFY_SCHEMA_VERSION: u32 = 1;

/// Check groups in run order.
pub const CHECKS: [&str; 13] = [
    "density",
    "counterexample",
    "epo",
    "charsum",
    "tuples",
    "crosscheck",
    "weil",
    "xset",
    "bset",
    "slavov",
    "dichotomy",
    "omega",
    "determinism",
];

const OMEGA_NODE_BUDGET: u64 = 50_000_000;

#[derive(Clone, Debug)]
#[derive(Default)]
pub struct VerifyConfig {
    /// Restrict to these check groups.
    pub only: Option<Vec<String>>,
    pub seed: u64,
    pub budget: Budget,
}


#[derive(Clone, Debug)]
pub struct CheckGroup {
    pub name: String,
    pub seconds: f64,
    /// Asserted checks.
    pub records: Vec<CheckRecord>,
    /// Reported but not asserted.
    pub reports: Vec<CheckRecord>,
}

impl CheckGroup {
    pub fn pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub seed: u64,
    pub groups: Vec<CheckGroup>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.groups.iter().all(CheckGroup::pass)
    }

    pub fn to_json(&self) -> Value {
        let groups: Vec<Value> = self
            .groups
            .iter()
            .map(|g| {
                json!({
                    "check": g.name,
                    "pass": g.pass(),
                    "seconds": g.seconds,
                    "records": g.records,
                    "reports": g.reports,
                })
            })
            .collect();
        json!({
            "schema_version": VERIFY_SCHEMA_VERSION,
            "seed": self.seed,
            "pass": self.pass(),
            "checks": groups,
        })
    }
}

pub fn run_verify(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let names: Vec<&str> = match &cfg.only {
        None => CHECKS.to_vec(),
        Some(only) => {
            for name in only {
                if !CHECKS.contains(&name.as_str()) {
                    return Err(Error::InvalidArgument(format!("unknown check '{name}'")));
                }
            }
            CHECKS.iter().copied().filter(|c| only.iter().any(|o| o == c)).collect()
        }
    };
    let groups = names.iter().map(|n| run_check(n, cfg)).collect::<Result<_>>()?;
    Ok(SuiteReport { seed: cfg.seed, groups })
}

pub fn run_check(name: &str, cfg: &VerifyConfig) -> Result<CheckGroup> {
    let start = Instant::now();
    let mut g = Group::default();
    match name {
        "density" => density(&mut g)?,
        "counterexample" => counterexample(&mut g)?,
        "epo" => epo(&mut g, cfg)?,
        "charsum" => charsum(&mut g, cfg)?,
        "tuples" => tuples(&mut g, cfg)?,
        "crosscheck" => crosscheck(&mut g, cfg)?,
        "weil" => weil(&mut g, cfg)?,
        "xset" => xset(&mut g, cfg)?,
        "bset" => bset(&mut g, cfg)?,
        "slavov" => slavov(&mut g, cfg)?,
        "dichotomy" => dichotomy(&mut g, cfg)?,
        "omega" => omega(&mut g, cfg)?,
        "determinism" => determinism(&mut g, cfg)?,
        other => return Err(Error::InvalidArgument(format!("unknown check '{other}'"))),
    }
    Ok(CheckGroup {
        name: name.to_string(),
        seconds: start.elapsed().as_secs_f64(),
        records: g.records,
        reports: g.reports,
    })
}

#[derive(Default)]
struct Group {
    records: Vec<CheckRecord>,
    reports: Vec<CheckRecord>,
}

impl Group {
    fn check(&mut self, name: &str, instance: String, observed: impl ToString, bound: impl ToString, pass: bool) {
        self.records.push(CheckRecord::new(name, instance, observed, bound, pass));
    }

    fn report(&mut self, name: &str, instance: String, observed: impl ToString, bound: impl ToString, pass: bool) {
        self.reports.push(CheckRecord::new(name, instance, observed, bound, pass));
    }
}

/// Odd prime powers up to `max`.
pub fn odd_field_orders(max: u32) -> Vec<u32> {
    (3..=max)
        .filter(|&q| {
            let p = (2..=q).find(|p| q % p == 0).expect("q >= 2");
            let mut r = q;
            while r % p == 0 {
                r /= p;
            }
            p != 2 && r == 1
        })
        .collect()
}

fn field(q: u32) -> Result<Field> {
    Field::parse(&q.to_string())
}

fn poly(f: &Field, s: &str) -> Result<MultiPoly> {
    parse_poly(f, s, None)
}

fn rng(cfg: &VerifyConfig, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(cfg.seed);
    r.set_stream(stream);
    r
}

fn density(g: &mut Group) -> Result<()> {
    for q in [3u32, 5, 7] {
        let (count, total) = primitive_density_deg2_var3(&field(q)?)?;
        let q = q as u64;
        let expected = ((q - 1) * q.pow(3) + (q - 1) * q, q.pow(4));
        g.check(
            "density",
            format!("q={q}"),
            format!("{count}/{total}"),
            format!("{}/{}", expected.0, expected.1),
            (count, total) == expected,
        );
    }
    Ok(())
}

fn counterexample(g: &mut Group) -> Result<()> {
    let f5 = field(5)?;
    let v = is_admissible(&poly(&f5, "x1*x2+x2*x3+x3*x1")?)?;
    let witness = v.witness.as_ref().map(|w| w.formatted_point());
    let ok = v.status == Status::FailsPrimitive && witness == Some(vec!["0".into(), "0".into()]);
    g.check(
        "counterexample",
        "x1*x2+x2*x3+x3*x1 over F_5".into(),
        format!("{} {:?}", v.status, witness.unwrap_or_default()),
        "FailsPrimitive [\"0\", \"0\"]",
        ok,
    );
    let v = is_admissible(&poly(&field(7)?, "x1*x2*x3+1")?)?;
    g.check("counterexample", "x1*x2*x3+1 over F_7".into(), v.status, "Admissible", v.is_admissible());
    Ok(())
}

/// `|observed - q^{2k}/2| <= c q^{2k-1}` and the relative deviation.
fn epo_instance(g: &mut Group, cfg: &VerifyConfig, q: u32, f: &str, c: u64) -> Result<BigRational> {
    let fq = field(q)?;
    let y = build_hypergraph(&poly(&fq, f)?, cfg.budget)?;
    let k = y.k() as u32;
    let r = count_epo_direct(&y, cfg.budget)?;
    let bound = BigInt::from(c) * BigInt::from(q).pow(2 * k - 1);
    let dev = r.deviation().abs();
    g.check(
        "epo",
        format!("{f} over F_{q}"),
        &r.observed,
        format!("|dev| <= {bound}"),
        dev <= BigRational::from_integer(bound),
    );
    Ok(dev / &r.predicted_main)
}

fn epo(g: &mut Group, cfg: &VerifyConfig) -> Result<()> {
    for f in ["x1*x2+1", "x1+x2"] {
        let mut rel = Vec::new();
        for q in [13, 17, 25, 29] {
            rel.push(epo_instance(g, cfg, q, f, 8)?);
        }
        g.check(
            "epo",
            format!("{f} relative deviation q=29 vs q=13"),
            rel[3].to_string(),
            format!("< {}", rel[0]),
            rel[3] < rel[0],
        );
    }
    for f in ["x1*x2*x3+1", "x1+x2+x3"] {
        for q in [7, 9, 11] {
            epo_instance(g, cfg, q, f, 40)?;
        }
    }
    Ok(())
}

fn charsum(g: &mut Group, cfg: &VerifyConfig) -> Result<()> {
    let mut r = rng(cfg, 4);
    let mut i = 0;
    for q in [3u32, 5, 7, 9] {
        let fq = field(q)?;
        for k in [2usize, 3] {
            for _ in 0..3 {
                let d = 1 + i % 3;
                i += 1;
                let (f, _) = random_admissible_poly_with(&fq, k, d, &mut r)?;
                let y = build_hypergraph(&f, cfg.budget)?;
                let naive = count_epo_charsum(&y, CharSumMethod::Naive, cfg.budget)?;
                let fact = count_epo_charsum(&y, CharSumMethod::Factored, cfg.budget)?;
                g.check("charsum", format!("{f} over F_{q}"), &naive.s, format!("= {}", fact.s), naive == fact);
            }
        }
    }
    Ok(())
}

fn tuples(g: &mut Group, cfg: &VerifyConfig) -> Result<()> {
    for (f, m, qs) in [("x1*x2+1", 3, [101u32, 151]), ("x1*x2*x3+1", 4, [13, 17])] {
        for q in qs {
            let p = poly(&field(q)?, f)?;
            let y = build_hypergraph(&p, cfg.budget)?;
            let observed = count_m_subsets_raw(&y, m)?;
            let env = predict_envelope(q as u64, m, y.k(), p.total_degree() as u32)?;
            g.check(
                "tuples",
                format!("{f} m={m} over F_{q}"),
                observed,
                format!("{} +- {:e}", crate::report::rational_string(&env.main), env.err),
                env.contains(&BigInt::from(observed)),
            );
        }
    }
    Ok(())
}

fn crosscheck(g: &mut Group, cfg: &VerifyConfig) -> Result<()> {
    let mut cases = Vec::new();
    for q in odd_field_orders(13) {
        for f in ["x1*x2+1", "x1+x2"] {
            for m in [2, 3] {
                cases.push((q, f, m));
            }
        }
    }
    for q in odd_field_orders(9) {
        cases.push((q, "x1*x2*x3+1", 3));
    }
    for (q, f, m) in cases {
        let c = tuple_count_crosscheck(&poly(&field(q)?, f)?, m, cfg.budget)?;
        g.check(
            "crosscheck",
            format!("{f} m={m} over F_{q}"),
            format!("m!N - S = {}", c.difference()),
            format!("|.| <= {}", c.bound()),
            c.pass(),
        );
    }
    Ok(())
}

/// Seed-fixed Weil instances: `(q, g, a)` with `g` monic, not a square.
pub fn weil_instances(seed: u64, count: usize) -> Result<Vec<(Field, UniPoly, u32)>> {
    let fields = [9, 13, 25, 49].map(field).into_iter().collect::<Result<Vec<_>>>()?;
    weil_instances_in(&fields, count, 6, seed)
}

/// Random monic `g` of degree `1..=max_deg` that are not constant times a
/// square, with a nonzero multiplier index, cycling through `fields`.
pub fn weil_instances_in(
    fields: &[Field],
    count: usize,
    max_deg: u32,
    seed: u64,
) -> Result<Vec<(Field, UniPoly, u32)>> {
    if fields.is_empty() || max_deg == 0 {
        return Err(Error::InvalidArgument("need at least one field and max degree >= 1".into()));
    }
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(7);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let f = &fields[i % fields.len()];
        let q = f.order();
        let deg = r.gen_range(1..=max_deg as usize);
        let a = r.gen_range(1..q);
        loop {
            let mut coeffs: Vec<_> = (0..deg).map(|_| f.element_unchecked(r.gen_range(0..q))).collect();
            coeffs.push(f.one());
            let g = UniPoly::new(f, coeffs);
            if !g.is_const_square()? {
                out.push((f.clone(), g, a));
                break;
            }
        }
    }
    Ok(out)
}

fn weil(g: &mut Group, cfg: &VerifyConfig) -> Result<()> {
    for (f, p, a) in weil_instances(cfg.seed, 500)? {
        let w = weil_check(&p, f.element_unchecked(a))?;
        g.check(
            "weil",
            format!("q={} deg={} a={}", w.q, p.degree(), f.format(f.element_unchecked(a))),
            format!("sum={} s={}", w.sum, w.s),
            format!("sum^2 <= {}", (w.s as i64 - 1).pow(2) * w.q as i64),
            w.applicable && w.holds(),
        );
    }
    for q in [13, 17] {
        let f = field(q)?;
        for c in 1..q {
            let p = UniPoly::new(&f, vec![f.element_unchecked(c), f.zero(), f.one()]);
            let w = weil_check(&p, f.one())?;
            g.check("weil", format!("x^2+{c} over F_{q}"), w.sum, "= -1", w.sum == -1);
        }
    }
    Ok(())
}

/// Seed-fixed admissible instances for the `X` set checks: cycles through
/// `q in {5,7,9}`, `k in {2,3}`, `d in {1,2,3}`.
pub fn xset_instances(seed: u64, count: usize) -> Result<Vec<MultiPoly>> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(8);
    let fields = [5, 7, 9].map(field).into_iter().collect::<Result<Vec<_>>>()?;
    (0..count)
        .map(|i| {
            let k = 2 + (i / 3) % 2;
            let d = 1 + (i / 6) % 3;
            Ok(random_admissible_poly_with(&fields[i % 3], k, d as u32, &mut r)?.0)
        })
        .collect()
}

fn xset(g: &mut Group, cfg: &VerifyConfig) -> Result<()> {
    for f in xset_instances(cfg.seed, 100)? {
        let x = enumerate_x(&f, true, cfg.budget)?;
        let q = f.field().order();
        g.check(
            "xset",
            format!("{f} over F_{q}"),
            format!("|X|={} |Y|={} |Z|={}", x.len(), x.y_count, x.z_count),
            format!("{} {} {}", x.bound(), x.y_bound(), x.z_bound()),
            x.within_bounds(),
        );
        if x.constant_members > 0 {
            g.report(
                "xset-constants",
                format!("{f} over F_{q}"),
                x.constant_members,
                format!("|X| without constants = {}", x.len() - x.constant_members),
                true,
            );
        }
    }
    for (q, expected) in [(7u32, 1usize), (13, 25)] {
        let f = poly(&field(q)?, "x1^2+x2^2+x3^2")?;
        let x = enumerate_x(&f, true, cfg.budget)?;
        g.check("xset", format!("x1^2+x2^2+x3^2 over F_{q}"), x.len(), format!("= {expected}"), x.len() == expected);
    }
    // |X| = q^{k-2} + O(q^{k/2}) with the constant taken as 6
    for q in [5u32, 7, 13] {
        let f = poly(&field(q)?, "x1^2+x2^2+x3^2")?;
        let n = enumerate_x(&f, true, cfg.budget)?.len() as i64;
        let excess = (n - q as i64).max(0);
        g.report(
            "xset-magnitude",
            format!("x1^2+x2^2+x3^2 over F_{q}"),
            n,
            format!("{q} + 6*{q}^(3/2)"),
            excess * excess <= 36 * (q as i64).pow(3),
        );
    }
    Ok(())
}

fn bset(g: &mut Group, cfg: &VerifyConfig) -> Result<()> {
    let mut cases = vec![poly(&field(5)?, "x1*x2+1")?, poly(&field(7)?, "x1*x2+1")?];
    let mut r = rng(cfg, 9);
    for q in [3, 5] {
        cases.push(random_admissible_poly_with(&field(q)?, 3, 2, &mut r)?.0);
    }
    for f in cases {
        let b = enumerate_b(&f, cfg.budget)?;
        g.report(
            "bset",
            format!("{f} over F_{}", f.field().order()),
            b.len(),
            format!("<= {}", b.empirical_bound()),
            b.len() as u64 <= b.empirical_bound(),
        );
    }
    Ok(())
}

fn slavov(g: &mut Group, cfg: &VerifyConfig) -> Result<()> {
    for q in [13u32, 29, 53] {
        let f = field(q)?;
        let fs = [parse_poly(&f, "x1", Some(1))?, parse_poly(&f, "x1+1", Some(1))?];
        let r = slavov_count(&fs, true, cfg.budget)?;
        // |obs - q/4| <= 2 sqrt(q) + 4  <=>  D <= 16 or (D - 16)^2 <= 64 q, D = |4 obs - q|
        let d = (4 * r.observed() as i64 - q as i64).abs();
        let pass = d <= 16 || (d - 16).pow(2) <= 64 * q as i64;
        g.check("slavov", format!("(x, x+1) over F_{q}"), r.observed(), format!("{q}/4 +- (2 sqrt({q}) + 4)"), pass);
        g.check(
            "slavov",
            format!("(x, x+1) envelope over F_{q}"),
            r.observed(),
            format!("+- {:e}", r.envelope.err),
            r.condition_holds() && r.within_envelope(),
        );
    }
    let f = field(13)?;
    let fs = [parse_poly(&f, "x1", Some(1))?, parse_poly(&f, "4*x1", Some(1))?];
    let r = slavov_count(&fs, true, cfg.budget)?;
    g.check(
        "slavov",
        "(x, 4x) product condition over F_13".into(),
        format!("{:?}", r.failing_subsets),
        "[[0, 1]]",
        r.failing_subsets == vec![vec![0, 1]],
    );
    Ok(())
}

/// Five fixed symmetric `g` per arity, used for the `c g^2` dichotomy.
pub fn dichotomy_bases(k: usize) -> [&'static str; 5] {
    match k {
        2 => ["x1+x2", "x1*x2+1", "x1^2+x2^2", "x1*x2", "x1+x2+1"],
        _ => ["x1+x2+x3", "x1*x2*x3+1", "x1^2+x2^2+x3^2", "x1*x2+x2*x3+x3*x1", "x1+x2+x3+1"],
    }
}

fn dichotomy(g: &mut Group, cfg: &VerifyConfig) -> Result<()> {
    for q in odd_field_orders(9) {
        let f = field(q)?;
        for k in [2usize, 3] {
            for base in dichotomy_bases(k) {
                let h = poly(&f, base)?;
                let sq = &h * &h;
                let complete = build_hypergraph(&sq, cfg.budget)?.edge_count();
                let total = binomial(q as usize, k);
                g.check("dichotomy", format!("({base})^2 over F_{q}"), complete, format!("= {total}"), complete == total);
                let c = sq.scale(f.nonsquare());
                let edges = build_hypergraph(&c, cfg.budget)?.edge_count();
                let bound = c.total_degree() as u64 * (q as u64).pow(k as u32 - 1);
                g.check(
                    "dichotomy",
                    format!("{}*({base})^2 over F_{q}", f.format(f.nonsquare())),
                    edges,
                    format!("<= {bound}"),
                    edges <= bound,
                );
            }
        }
    }
    Ok(())
}

fn omega(g: &mut Group, cfg: &VerifyConfig) -> Result<()> {
    let mut cases = Vec::new();
    for q in odd_field_orders(31) {
        cases.push((q, "x1*x2+1"));
        cases.push((q, "x1+x2"));
    }
    for q in odd_field_orders(13) {
        cases.push((q, "x1*x2*x3+1"));
    }
    for (q, f) in cases {
        let y = build_hypergraph(&poly(&field(q)?, f)?, cfg.budget)?;
        let c = omega_clique(&y, OMEGA_NODE_BUDGET);
        g.check("omega", format!("{f} over F_{q}"), c.size, "exact search", c.exact);
    }
    Ok(())
}

/// The scan used by the determinism check.
pub fn determinism_config(seed: u64, workers: usize) -> Result<ScanConfig> {
    let fields = [5, 7, 9, 11, 13].map(field).into_iter().collect::<Result<Vec<_>>>()?;
    Ok(ScanConfig { workers, ..ScanConfig::new(fields, seed) })
}

fn determinism(g: &mut Group, cfg: &VerifyConfig) -> Result<()> {
    let reference = scan_csv(&determinism_config(cfg.seed, 1)?)?;
    for workers in [1, 2, 8] {
        let again = scan_csv(&determinism_config(cfg.seed, workers)?)?;
        g.check(
            "determinism",
            format!("scan workers={workers}"),
            format!("{} bytes", again.len()),
            format!("identical to {} bytes", reference.len()),
            again == reference,
        );
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_orders() {
        assert_eq!(odd_field_orders(31), vec![3, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29, 31]);
    }

    #[test]
    fn quick_groups_pass() {
        let cfg = VerifyConfig::default();
        for name in ["counterexample", "slavov", "weil"] {
            let g = run_check(name, &cfg).unwrap();
            assert!(g.pass(), "{name}: {:?}", g.records.iter().find(|r| !r.pass));
        }
        let only = VerifyConfig { only: Some(vec!["nope".into()]), ..VerifyConfig::default() };
        assert!(run_verify(&only).is_err());
    }
}
