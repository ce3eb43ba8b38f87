use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::admissible::{is_admissible, random_symmetric_poly_with, Status};
use crate::error::{Error, Result};
use crate::ff::Field;
use crate::hypergraph::{build_hypergraph, count_epo_direct, count_m_subsets, Budget};
use crate::report::{rational_string, CountReport};

/// Bumped whenever the column set or its meaning changes.
pub const SCAN_CSV_VERSION: u32 = 1;

pub const SCAN_COLUMNS: [&str; 13] = [
    "q",
    "sample",
    "draw",
    "poly",
    "status",
    "epo_observed",
    "epo_predicted",
    "epo_deviation",
    "epo_relative",
    "tuples_observed",
    "tuples_predicted",
    "tuples_deviation",
    "tuples_relative",
];

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub fields: Vec<Field>,
    pub k: usize,
    pub d: u32,
    pub m: usize,
    /// Admissible samples per field.
    pub samples: usize,
    pub seed: u64,
    pub workers: usize,
    pub budget: Budget,
}

impl ScanConfig {
    pub fn new(fields: Vec<Field>, seed: u64) -> Self {
        ScanConfig { fields, k: 2, d: 2, m: 3, samples: 50, seed, workers: 1, budget: Budget::default() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub q: u32,
    pub sample: usize,
    /// 1-based draw number within the sample.
    pub draw: u32,
    pub poly: String,
    pub status: Status,
    /// `(epo, tuples)`; only for admissible rows.
    pub counts: Option<(CountReport, CountReport)>,
}

impl ScanRow {
    fn record(&self) -> Vec<String> {
        let mut rec = vec![
            self.q.to_string(),
            self.sample.to_string(),
            self.draw.to_string(),
            self.poly.clone(),
            self.status.to_string(),
        ];
        match &self.counts {
            Some((epo, tuples)) => {
                for r in [epo, tuples] {
                    rec.push(r.observed.to_string());
                    rec.push(rational_string(&r.predicted_main));
                    rec.push(rational_string(&r.deviation()));
                    rec.push(format!("{:.9e}", r.relative_deviation()));
                }
            }
            None => rec.extend(std::iter::repeat_n(String::new(), 8)),
        }
        rec
    }
}

/// The random stream for sample `idx` over a field of order `q`.
fn sample_rng(seed: u64, q: u32, idx: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((q as u64) << 32) | idx as u64);
    rng
}

fn scan_sample(cfg: &ScanConfig, field: &Field, idx: usize) -> Result<Vec<ScanRow>> {
    let mut rng = sample_rng(cfg.seed, field.order(), idx);
    let mut rows = Vec::new();
    for draw in 1.. {
        let f = random_symmetric_poly_with(field, cfg.k, cfg.d, &mut rng)?;
        let status = is_admissible(&f)?.status;
        let mut row = ScanRow { q: field.order(), sample: idx, draw, poly: f.to_string(), status, counts: None };
        if status == Status::Admissible {
            let y = build_hypergraph(&f, cfg.budget)?;
            let epo = count_epo_direct(&y, cfg.budget)?;
            let tuples = count_m_subsets(&y, cfg.m)?;
            row.counts = Some((epo, tuples));
            rows.push(row);
            break;
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Draws `samples` random admissible polynomials per field and records EPO
/// and `m`-subset deviations. Rejected draws appear as rows with their
/// status and empty count columns. The output depends only on the seed.
pub fn scan_rows(cfg: &ScanConfig) -> Result<Vec<ScanRow>> {
    if cfg.m < cfg.k {
        return Err(Error::InvalidArgument(format!("m = {} must be at least k = {}", cfg.m, cfg.k)));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let jobs: Vec<(&Field, usize)> =
        cfg.fields.iter().flat_map(|f| (0..cfg.samples).map(move |i| (f, i))).collect();
    let parts = pool.install(|| {
        jobs.par_iter()
            .map(|&(field, idx)| scan_sample(cfg, field, idx))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(parts.into_iter().flatten().collect())
}

/// CSV text: a versioned comment line, the header, then one row per draw.
pub fn scan_csv(cfg: &ScanConfig) -> Result<String> {
    let rows = scan_rows(cfg)?;
    let mut out = format!(
        "# ffhyper scan v{SCAN_CSV_VERSION} seed={} k={} d={} m={} samples={}\n",
        cfg.seed, cfg.k, cfg.d, cfg.m, cfg.samples
    );
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::InvalidArgument(e.to_string());
    w.write_record(SCAN_COLUMNS).map_err(io)?;
    for row in &rows {
        w.write_record(row.record()).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    out.push_str(&String::from_utf8(bytes).expect("utf-8"));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(workers: usize) -> ScanConfig {
        let fields = ["5", "7"].iter().map(|s| Field::parse(s).unwrap()).collect();
        ScanConfig { samples: 4, workers, ..ScanConfig::new(fields, 11) }
    }

    #[test]
    fn scan_is_deterministic() {
        let a = scan_csv(&cfg(1)).unwrap();
        assert_eq!(a, scan_csv(&cfg(3)).unwrap());
        assert!(a.starts_with("# ffhyper scan v1"));
        let rows = scan_rows(&cfg(2)).unwrap();
        assert_eq!(rows.iter().filter(|r| r.status == Status::Admissible).count(), 8);
        for r in rows.iter().filter(|r| r.status != Status::Admissible) {
            assert!(r.counts.is_none());
        }
    }
}
