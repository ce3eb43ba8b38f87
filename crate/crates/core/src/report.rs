//! Exact count reports and per-check records.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

/// Observed count against a predicted main term, with exact deviation.
#[derive(Clone, Debug, PartialEq)]
pub struct CountReport {
    pub observed: BigInt,
    pub predicted_main: BigRational,
    /// Error envelope value, when one applies.
    pub envelope: Option<f64>,
}

impl CountReport {
    pub fn new(observed: impl Into<BigInt>, predicted_main: BigRational) -> Self {
        CountReport { observed: observed.into(), predicted_main, envelope: None }
    }

    pub fn with_envelope(mut self, envelope: f64) -> Self {
        self.envelope = Some(envelope);
        self
    }

    /// `observed - predicted_main`, exactly.
    pub fn deviation(&self) -> BigRational {
        BigRational::from_integer(self.observed.clone()) - &self.predicted_main
    }

    /// `|deviation| / predicted_main`; 0 when the prediction is 0.
    pub fn relative_deviation(&self) -> f64 {
        if self.predicted_main.is_zero() {
            return 0.0;
        }
        (self.deviation().abs() / &self.predicted_main).to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "observed": self.observed.to_string(),
            "predicted_main": {
                "num": self.predicted_main.numer().to_string(),
                "den": self.predicted_main.denom().to_string(),
            },
            "deviation": rational_string(&self.deviation()),
            "relative_deviation": self.relative_deviation(),
        });
        if let Some(e) = self.envelope {
            v["envelope"] = json!(format!("{e:e}"));
        }
        v
    }
}

/// `"a"` for integers, `"a/b"` otherwise.
pub fn rational_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `a / b` as a rational.
pub fn ratio(a: impl Into<BigInt>, b: impl Into<BigInt>) -> BigRational {
    BigRational::new(a.into(), b.into())
}

/// One verification check outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub instance: String,
    pub observed: String,
    pub bound: String,
    pub pass: bool,
}

impl CheckRecord {
    pub fn new(
        check: &str,
        instance: impl Into<String>,
        observed: impl ToString,
        bound: impl ToString,
        pass: bool,
    ) -> Self {
        CheckRecord {
            check: check.to_string(),
            instance: instance.into(),
            observed: observed.to_string(),
            bound: bound.to_string(),
            pass,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_json() {
        let r = CountReport::new(7, ratio(25, 2));
        assert_eq!(rational_string(&r.deviation()), "-11/2");
        assert!((r.relative_deviation() - 0.44).abs() < 1e-12);
        let v = r.to_json();
        assert_eq!(v["observed"], "7");
        assert_eq!(v["predicted_main"]["den"], "2");
        assert!(v.get("envelope").is_none());
        let r = CountReport::new(10, ratio(10, 1)).with_envelope(2.5);
        assert_eq!(r.to_json()["deviation"], "0");
        assert_eq!(r.to_json()["envelope"], "2.5e0");
    }
}
