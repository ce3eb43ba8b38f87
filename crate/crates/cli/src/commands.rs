use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde_json::{json, Value};
use thiserror::Error;

use ffhyper_core::admissible::{is_admissible, Status};
use ffhyper_core::bounds::{enumerate_b, enumerate_x, slavov_count, weil_check};
use ffhyper_core::campaign::{run_verify, scan_csv, scan_rows, weil_instances_in, ScanConfig, VerifyConfig};
use ffhyper_core::hypergraph::{
    build_hypergraph, count_epo_charsum, count_epo_direct, count_m_subsets, omega_clique, paley, Budget,
    CharSumMethod, HypergraphView,
};
use ffhyper_core::report::{rational_string, CountReport};
use ffhyper_core::{parse_poly, Error, Field, MultiPoly};

use crate::{EpoArgs, Format, Method, PolyArgs, ScanArgs, SlavovArgs, TuplesArgs, VerifyArgs, WeilArgs};

/// Bumped when any JSON or CSV layout changes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::BudgetExceeded { .. }) => 3,
            _ => 2,
        }
    }
}

pub struct Context {
    pub seed: u64,
    pub budget: Budget,
    pub workers: Option<usize>,
    pub format: Format,
}

pub struct Output {
    pub json: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    /// Preformatted CSV, used instead of `header`/`rows` when set.
    pub csv: Option<String>,
    pub pass: bool,
    command: &'static str,
}

impl Output {
    fn new(command: &'static str, json: Value, header: Vec<&'static str>, rows: Vec<Vec<String>>, pass: bool) -> Self {
        Output { json, header, rows, csv: None, pass, command }
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => {
                let mut v = self.json.clone();
                v["schema_version"] = json!(SCHEMA_VERSION);
                v["command"] = json!(self.command);
                Ok(serde_json::to_string_pretty(&v).expect("json") + "\n")
            }
            Format::Csv => {
                if let Some(text) = &self.csv {
                    return Ok(text.clone());
                }
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header)?;
                for r in &self.rows {
                    w.write_record(r)?;
                }
                let body = String::from_utf8(w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?)
                    .expect("utf-8");
                Ok(format!("# ffhyper {} v{SCHEMA_VERSION}\n{body}", self.command))
            }
        }
    }
}

/// Command arguments that determine a cacheable result.
pub enum Request {
    Poly(PolyArgs),
    Epo(EpoArgs),
    Tuples(TuplesArgs),
    Weil(WeilArgs),
    Slavov(SlavovArgs),
    Scan(ScanArgs),
    Uncached,
}

fn field(spec: &str) -> Result<Field, CliError> {
    Ok(Field::parse(spec.trim())?)
}

fn poly(f: &Field, text: &str, k: Option<usize>) -> Result<MultiPoly, CliError> {
    Ok(parse_poly(f, text, k)?)
}

/// Canonical parts of a request: field and polynomials in printed form,
/// then every parameter that affects the output bytes. `None` for
/// commands whose output is not reproducible (timings).
pub fn canonical_request(command: &str, req: &Request, ctx: &Context) -> Result<Option<Vec<String>>, CliError> {
    let fmt = format!("{:?}", ctx.format);
    let mut parts = vec![command.to_string(), fmt, format!("seed={}", ctx.seed)];
    match req {
        Request::Poly(a) => {
            let f = field(&a.field)?;
            parts.push(f.spec_string());
            parts.push(poly(&f, &a.poly, a.k)?.to_string());
            if command == "clique" {
                parts.push(format!("nodes={}", ctx.budget.tuples));
            }
        }
        Request::Epo(a) => {
            let f = field(&a.field)?;
            parts.push(f.spec_string());
            parts.push(epo_poly(&f, a)?.to_string());
            parts.push(format!("method={:?}", a.method));
        }
        Request::Tuples(a) => {
            let f = field(&a.poly.field)?;
            parts.push(f.spec_string());
            parts.push(poly(&f, &a.poly.poly, a.poly.k)?.to_string());
            parts.push(format!("m={}", a.m));
        }
        Request::Weil(a) => {
            let f = field(&a.field)?;
            parts.push(f.spec_string());
            match &a.poly {
                Some(p) => parts.push(poly(&f, p, Some(1))?.to_string()),
                None => parts.push(format!("random s={} d={}", a.s, a.d)),
            }
            parts.push(format!("a={}", f.format(multiplier(&f, &a.a)?)));
        }
        Request::Slavov(a) => {
            let f = field(&a.field)?;
            parts.push(f.spec_string());
            for p in slavov_polys(&f, a)? {
                parts.push(p.to_string());
            }
        }
        Request::Scan(a) => {
            for f in scan_fields(&a.field)? {
                parts.push(f.spec_string());
            }
            parts.push(format!("k={} d={} m={} s={}", a.k, a.d, a.m.unwrap_or(a.k + 1), a.s));
        }
        Request::Uncached => return Ok(None),
    }
    Ok(Some(parts))
}

fn report_row(r: &CountReport) -> Vec<String> {
    vec![
        r.observed.to_string(),
        rational_string(&r.predicted_main),
        rational_string(&r.deviation()),
        format!("{:.9e}", r.relative_deviation()),
    ]
}

fn require_symmetric(f: &MultiPoly) -> Result<(), CliError> {
    if f.nvars() < 2 {
        return Err(Error::ArityMismatch { expected: 2, found: f.nvars() }.into());
    }
    if !f.is_symmetric() {
        return Err(Error::NotSymmetric.into());
    }
    Ok(())
}

pub fn admissible(a: &PolyArgs, _ctx: &Context) -> Result<Output, CliError> {
    let f = field(&a.field)?;
    let p = poly(&f, &a.poly, a.k)?;
    let v = is_admissible(&p)?;
    let mut json = v.to_json();
    json["field"] = json!(f.spec_string());
    json["poly"] = json!(p.to_string());
    let (ext, point) = match &v.witness {
        Some(w) => (w.ext_degree.to_string(), w.formatted_point().join(" ")),
        None => (String::new(), String::new()),
    };
    let row = vec![f.spec_string(), p.to_string(), v.k.to_string(), v.degree.to_string(), v.status.to_string(), ext, point];
    let header = vec!["field", "poly", "k", "degree", "status", "witness_ext_degree", "witness_point"];
    Ok(Output::new("admissible", json, header, vec![row], true))
}

fn epo_poly(f: &Field, a: &EpoArgs) -> Result<MultiPoly, CliError> {
    match (&a.poly, a.paley) {
        (Some(p), false) => poly(f, p, a.k),
        (None, true) => {
            let k = a.k.unwrap_or(2);
            Ok(paley(f, k, Budget { tuples: 1, mem_bytes: 0 })?.poly().clone())
        }
        _ => Err(CliError::Usage("give exactly one of --poly and --paley".into())),
    }
}

fn epo_view(f: &Field, a: &EpoArgs, budget: Budget) -> Result<HypergraphView, CliError> {
    let p = epo_poly(f, a)?;
    require_symmetric(&p)?;
    Ok(build_hypergraph(&p, budget)?)
}

pub fn epo(a: &EpoArgs, ctx: &Context) -> Result<Output, CliError> {
    let f = field(&a.field)?;
    let y = epo_view(&f, a, ctx.budget)?;
    let q = f.order();
    let k = y.k();
    let d = y.poly().total_degree();
    let mut json = json!({
        "field": f.spec_string(),
        "poly": y.poly().to_string(),
        "k": k,
        "d": d,
        "method": format!("{:?}", a.method).to_lowercase(),
    });
    let mut rows = Vec::new();
    let base = |method: &str| vec![q.to_string(), k.to_string(), d.to_string(), method.to_string()];
    let mut pass = true;
    let direct = match a.method {
        Method::Direct | Method::Both => Some(count_epo_direct(&y, ctx.budget)?),
        _ => None,
    };
    let charsum = match a.method {
        Method::Naive => Some(count_epo_charsum(&y, CharSumMethod::Naive, ctx.budget)?),
        Method::Factored | Method::Both => Some(count_epo_charsum(&y, CharSumMethod::Factored, ctx.budget)?),
        Method::Direct => None,
    };
    if let Some(r) = &direct {
        json["direct"] = r.to_json();
        let mut row = base("direct");
        row.extend(report_row(r));
        rows.push(row);
    }
    if let Some(c) = &charsum {
        json["charsum"] = json!({ "s": c.s.to_string(), "estimate": rational_string(&c.estimate) });
        // the estimate is set against the same main term q^{2k}/2
        let main = BigRational::new(BigInt::from(q).pow(2 * k as u32), BigInt::from(2));
        let dev = &c.estimate - &main;
        let rel = (dev.abs() / &main).to_f64().unwrap_or(f64::NAN);
        let mut row = base("charsum");
        row.extend([rational_string(&c.estimate), rational_string(&main), rational_string(&dev), format!("{rel:.9e}")]);
        rows.push(row);
    }
    if let (Some(r), Some(c)) = (&direct, &charsum) {
        // repeated-vertex tuples, plus tuples where some octahedron value of f vanishes
        let pairs = (2 * k * (2 * k - 1) / 2) as u64;
        let zeros = (1u64 << (k - 1)) * d.max(0) as u64;
        let bound = BigInt::from(pairs + zeros) * BigInt::from(q).pow(2 * k as u32 - 1);
        let diff = BigRational::from_integer(r.observed.clone()) - &c.estimate;
        let ok = diff.abs() <= BigRational::from_integer(bound.clone());
        json["agreement"] = json!({ "difference": rational_string(&diff), "bound": bound.to_string(), "pass": ok });
        pass &= ok;
    }
    let header = vec!["q", "k", "d", "method", "observed", "predicted", "deviation", "relative"];
    Ok(Output::new("epo", json, header, rows, pass))
}

pub fn tuples(a: &TuplesArgs, ctx: &Context) -> Result<Output, CliError> {
    let f = field(&a.poly.field)?;
    let p = poly(&f, &a.poly.poly, a.poly.k)?;
    require_symmetric(&p)?;
    let y = build_hypergraph(&p, ctx.budget)?;
    let r = count_m_subsets(&y, a.m)?;
    let d = p.total_degree().max(1) as u32;
    let env = ffhyper_core::bounds::predict_envelope(f.order() as u64, a.m, y.k(), d)?;
    let within = env.contains(&r.observed);
    let json = json!({
        "field": f.spec_string(),
        "poly": p.to_string(),
        "k": y.k(),
        "m": a.m,
        "d": d,
        "report": r.to_json(),
        "within_envelope": within,
    });
    let mut row = vec![f.order().to_string(), y.k().to_string(), a.m.to_string(), d.to_string()];
    row.extend(report_row(&r));
    row.push(format!("{:e}", env.err));
    row.push(within.to_string());
    let header =
        vec!["q", "k", "m", "d", "observed", "predicted", "deviation", "relative", "envelope", "within_envelope"];
    Ok(Output::new("tuples", json, header, vec![row], within))
}

pub fn clique(a: &PolyArgs, ctx: &Context) -> Result<Output, CliError> {
    let f = field(&a.field)?;
    let p = poly(&f, &a.poly, a.k)?;
    require_symmetric(&p)?;
    let y = build_hypergraph(&p, ctx.budget)?;
    let c = omega_clique(&y, ctx.budget.tuples);
    if !c.exact {
        return Err(Error::BudgetExceeded { needed: c.nodes as u128, budget: ctx.budget.tuples as u128 }.into());
    }
    let members: Vec<String> = c.clique.iter().map(|&v| f.format(f.element_unchecked(v))).collect();
    let json = json!({
        "field": f.spec_string(),
        "poly": p.to_string(),
        "k": y.k(),
        "omega": c.size,
        "clique": members,
        "nodes": c.nodes,
    });
    let row = vec![f.order().to_string(), y.k().to_string(), p.to_string(), c.size.to_string(), members.join(" ")];
    Ok(Output::new("clique", json, vec!["q", "k", "poly", "omega", "clique"], vec![row], true))
}

fn multiplier(f: &Field, text: &str) -> Result<ffhyper_core::FieldElement, CliError> {
    let c = poly(f, text, Some(1))?;
    if !c.is_constant() || c.is_zero() {
        return Err(CliError::Usage("--a must be a nonzero constant".into()));
    }
    Ok(c.constant_term())
}

pub fn weil(a: &WeilArgs, ctx: &Context) -> Result<Output, CliError> {
    let f = field(&a.field)?;
    let mult = multiplier(&f, &a.a)?;
    let instances = match &a.poly {
        Some(text) => {
            let p = poly(&f, text, Some(1))?;
            let g = p.specialize(0, &[]);
            vec![(g, mult)]
        }
        None => weil_instances_in(std::slice::from_ref(&f), a.s, a.d, ctx.seed)?
            .into_iter()
            .map(|(_, g, a)| (g, f.element_unchecked(a)))
            .collect(),
    };
    let mut records = Vec::new();
    let mut rows = Vec::new();
    let mut pass = true;
    for (g, m) in instances {
        let w = weil_check(&g, m)?;
        let bound_sq = (w.s as i64 - 1).pow(2) * w.q as i64;
        let ok = !w.applicable || w.holds();
        pass &= ok;
        let coeffs: Vec<String> = g.coeffs().iter().map(|&c| f.format(c)).collect();
        records.push(json!({
            "g": coeffs,
            "a": f.format(m),
            "sum": w.sum,
            "s": w.s,
            "applicable": w.applicable,
            "bound_squared": bound_sq,
            "pass": ok,
        }));
        rows.push(vec![
            f.order().to_string(),
            coeffs.join(" "),
            f.format(m),
            w.sum.to_string(),
            w.s.to_string(),
            w.applicable.to_string(),
            bound_sq.to_string(),
            ok.to_string(),
        ]);
    }
    let json = json!({ "field": f.spec_string(), "instances": records, "pass": pass });
    let header = vec!["q", "g_coeffs_low_to_high", "a", "sum", "s", "applicable", "bound_squared", "pass"];
    Ok(Output::new("weil", json, header, rows, pass))
}

fn tuple_strings(f: &Field, members: &[Vec<u32>]) -> Vec<Vec<String>> {
    members.iter().map(|m| m.iter().map(|&v| f.format(f.element_unchecked(v))).collect()).collect()
}

pub fn xset(a: &PolyArgs, ctx: &Context) -> Result<Output, CliError> {
    let f = field(&a.field)?;
    let p = poly(&f, &a.poly, a.k)?;
    require_symmetric(&p)?;
    let status = is_admissible(&p)?.status;
    let admissible = status == Status::Admissible;
    let x = enumerate_x(&p, admissible, ctx.budget)?;
    let pass = !admissible || x.within_bounds();
    let json = json!({
        "field": f.spec_string(),
        "poly": p.to_string(),
        "status": status.to_string(),
        "k": x.k,
        "d": x.d,
        "n": x.n,
        "size": x.len(),
        "bound": x.bound(),
        "y_count": x.y_count,
        "y_bound": x.y_bound(),
        "z_count": x.z_count,
        "z_bound": x.z_bound(),
        "constant_members": x.constant_members,
        "zero_members": x.zero_members,
        "within_bounds": x.within_bounds(),
        "members": tuple_strings(&f, &x.members),
    });
    let row = vec![
        f.order().to_string(),
        p.to_string(),
        status.to_string(),
        x.len().to_string(),
        x.bound().to_string(),
        x.y_count.to_string(),
        x.y_bound().to_string(),
        x.z_count.to_string(),
        x.z_bound().to_string(),
        x.constant_members.to_string(),
    ];
    let header = vec!["q", "poly", "status", "size", "bound", "y", "y_bound", "z", "z_bound", "constants"];
    Ok(Output::new("xset", json, header, vec![row], pass))
}

pub fn bset(a: &PolyArgs, ctx: &Context) -> Result<Output, CliError> {
    let f = field(&a.field)?;
    let p = poly(&f, &a.poly, a.k)?;
    require_symmetric(&p)?;
    let b = enumerate_b(&p, ctx.budget)?;
    let json = json!({
        "field": f.spec_string(),
        "poly": p.to_string(),
        "k": b.k,
        "d": b.d,
        "size": b.len(),
        "empirical_bound": b.empirical_bound(),
        "zero_products": b.zero_products,
        "members": tuple_strings(&f, &b.members),
    });
    let row = vec![
        f.order().to_string(),
        p.to_string(),
        b.len().to_string(),
        b.empirical_bound().to_string(),
        b.zero_products.to_string(),
    ];
    Ok(Output::new("bset", json, vec!["q", "poly", "size", "empirical_bound", "zero_products"], vec![row], true))
}

fn slavov_polys(f: &Field, a: &SlavovArgs) -> Result<Vec<MultiPoly>, CliError> {
    let parsed: Vec<MultiPoly> = a.poly.iter().map(|t| poly(f, t, None)).collect::<Result<_, _>>()?;
    let m = a.m.unwrap_or_else(|| parsed.iter().map(MultiPoly::nvars).max().unwrap_or(1));
    a.poly.iter().map(|t| poly(f, t, Some(m))).collect()
}

pub fn slavov(a: &SlavovArgs, ctx: &Context) -> Result<Output, CliError> {
    let f = field(&a.field)?;
    let fs = slavov_polys(&f, a)?;
    let r = slavov_count(&fs, true, ctx.budget)?;
    let within = r.within_envelope();
    let pass = !r.condition_holds() || within;
    let failing: Vec<Vec<usize>> = r.failing_subsets.iter().map(|s| s.iter().map(|i| i + 1).collect()).collect();
    let json = json!({
        "field": f.spec_string(),
        "polys": fs.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "m": fs[0].nvars(),
        "n": fs.len(),
        "report": r.report.to_json(),
        "condition_holds": r.condition_holds(),
        "failing_subsets": failing,
        "within_envelope": within,
    });
    let mut row = vec![f.order().to_string(), fs[0].nvars().to_string(), fs.len().to_string()];
    row.extend(report_row(&r.report));
    row.push(r.condition_holds().to_string());
    row.push(within.to_string());
    let header = vec!["q", "m", "n", "observed", "predicted", "deviation", "relative", "condition", "within_envelope"];
    Ok(Output::new("slavov", json, header, vec![row], pass))
}

fn scan_fields(spec: &str) -> Result<Vec<Field>, CliError> {
    spec.split(',').map(field).collect()
}

pub fn scan(a: &ScanArgs, ctx: &Context) -> Result<Output, CliError> {
    let cfg = ScanConfig {
        fields: scan_fields(&a.field)?,
        k: a.k,
        d: a.d,
        m: a.m.unwrap_or(a.k + 1),
        samples: a.s,
        seed: ctx.seed,
        workers: ctx.workers.unwrap_or_else(rayon::current_num_threads),
        budget: ctx.budget,
    };
    let mut out = Output::new("scan", Value::Null, Vec::new(), Vec::new(), true);
    match ctx.format {
        Format::Csv => out.csv = Some(scan_csv(&cfg)?),
        Format::Json => {
            let rows: Vec<Value> = scan_rows(&cfg)?
                .iter()
                .map(|r| {
                    let mut v = json!({
                        "q": r.q,
                        "sample": r.sample,
                        "draw": r.draw,
                        "poly": r.poly,
                        "status": r.status.to_string(),
                    });
                    if let Some((epo, tuples)) = &r.counts {
                        v["epo"] = epo.to_json();
                        v["tuples"] = tuples.to_json();
                    }
                    v
                })
                .collect();
            out.json = json!({ "seed": cfg.seed, "k": cfg.k, "d": cfg.d, "m": cfg.m, "samples": cfg.samples, "rows": rows });
        }
    }
    Ok(out)
}

pub fn verify(a: &VerifyArgs, ctx: &Context) -> Result<Output, CliError> {
    let only = a.only.as_ref().map(|s| s.split(',').map(|x| x.trim().to_string()).collect());
    let cfg = VerifyConfig { only, seed: ctx.seed, budget: ctx.budget };
    let report = run_verify(&cfg)?;
    let mut rows = Vec::new();
    for g in &report.groups {
        for (asserted, list) in [(true, &g.records), (false, &g.reports)] {
            for r in list.iter() {
                rows.push(vec![
                    r.check.clone(),
                    r.instance.clone(),
                    r.observed.clone(),
                    r.bound.clone(),
                    r.pass.to_string(),
                    asserted.to_string(),
                ]);
            }
        }
    }
    let header = vec!["check", "instance", "observed", "bound", "pass", "asserted"];
    Ok(Output::new("verify", report.to_json(), header, rows, report.pass()))
}
