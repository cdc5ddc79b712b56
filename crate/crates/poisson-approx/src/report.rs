//! Named bound values with a role label and the parameters they came from.
//!
//! Values are stored rounded to [`REPORT_DIGITS`] significant digits so the
//! serialized form re-parses to the same bits. Infinite values serialize as
//! the strings `"inf"` and `"-inf"`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Result};

/// Significant digits kept in machine-readable output.
pub const REPORT_DIGITS: usize = 12;

/// Significant digits in human-readable output.
pub const HUMAN_DIGITS: usize = 4;

/// Rounds to `digits` significant decimal digits; non-finite values pass
/// through.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits.max(1) - 1, x).parse().unwrap_or(x)
}

/// Short decimal or scientific rendering with at most `digits` significant
/// digits; trailing zeros are dropped.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let exp = x.abs().log10().floor() as i32;
    if (-3..6).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        let s = format!("{:.*}", decimals, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{:.*e}", digits - 1, x);
        match s.split_once('e') {
            Some((m, e)) if m.contains('.') => {
                format!("{}e{e}", m.trim_end_matches('0').trim_end_matches('.'))
            }
            _ => s,
        }
    }
}

/// A real number that may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportValue(f64);

impl ReportValue {
    /// Rounds to [`REPORT_DIGITS`]; NaN is rejected.
    pub fn new(x: f64) -> Result<Self> {
        if x.is_nan() {
            return Err(invalid("report values cannot be NaN"));
        }
        Ok(Self(round_sig(x, REPORT_DIGITS)))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl Serialize for ReportValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0 {
            x if x == f64::INFINITY => s.serialize_str("inf"),
            x if x == f64::NEG_INFINITY => s.serialize_str("-inf"),
            x => s.serialize_f64(x),
        }
    }
}

impl<'de> Deserialize<'de> for ReportValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Tag(String),
        }
        let x = match Raw::deserialize(d)? {
            Raw::Num(x) => x,
            Raw::Tag(t) if t == "inf" => f64::INFINITY,
            Raw::Tag(t) if t == "-inf" => f64::NEG_INFINITY,
            Raw::Tag(t) => {
                return Err(serde::de::Error::custom(format!("unknown value tag {t:?}")))
            }
        };
        ReportValue::new(x).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for ReportValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_sig(self.0, REPORT_DIGITS))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Upper,
    Lower,
    Exact,
    Approx,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::Upper => "upper",
            BoundKind::Lower => "lower",
            BoundKind::Exact => "exact",
            BoundKind::Approx => "approx",
        })
    }
}

/// A parameter value recorded next to a bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ContextValue {
    Int(i64),
    Real(ReportValue),
    Text(String),
}

impl From<f64> for ContextValue {
    fn from(x: f64) -> Self {
        match ReportValue::new(x) {
            Ok(v) => ContextValue::Real(v),
            Err(_) => ContextValue::Text("nan".into()),
        }
    }
}

impl From<i64> for ContextValue {
    fn from(x: i64) -> Self {
        ContextValue::Int(x)
    }
}

impl From<usize> for ContextValue {
    fn from(x: usize) -> Self {
        ContextValue::Int(x as i64)
    }
}

impl From<&str> for ContextValue {
    fn from(x: &str) -> Self {
        ContextValue::Text(x.into())
    }
}

impl From<String> for ContextValue {
    fn from(x: String) -> Self {
        ContextValue::Text(x)
    }
}

impl fmt::Display for ContextValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContextValue::Int(i) => write!(f, "{i}"),
            ContextValue::Real(v) => write!(f, "{v}"),
            ContextValue::Text(t) => f.write_str(t),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub value: ReportValue,
    pub kind: BoundKind,
    /// Which bound produced the value, e.g. `"barbour-hall"`.
    pub provenance: String,
    #[serde(default)]
    pub context: BTreeMap<String, ContextValue>,
}

impl BoundReport {
    /// ```
    /// use poisson_approx::report::{BoundKind, BoundReport};
    ///
    /// let r = BoundReport::new("tv_upper", 1.0 / 3.0, BoundKind::Upper, "barbour-hall")
    ///     .unwrap()
    ///     .with("lambda", 2.0);
    /// assert_eq!(r.value.get(), 0.333333333333);
    /// ```
    pub fn new(name: &str, value: f64, kind: BoundKind, provenance: &str) -> Result<Self> {
        if provenance.is_empty() {
            return Err(invalid("provenance label must not be empty"));
        }
        Ok(Self {
            name: name.into(),
            value: ReportValue::new(value)?,
            kind,
            provenance: provenance.into(),
            context: BTreeMap::new(),
        })
    }

    pub fn with(mut self, key: &str, value: impl Into<ContextValue>) -> Self {
        self.context.insert(key.into(), value.into());
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round_sig(1.0 / 3.0, 4), 0.3333);
        assert_eq!(round_sig(123456.789, 3), 123000.0);
        assert_eq!(round_sig(f64::INFINITY, 4), f64::INFINITY);
        assert_eq!(round_sig(0.0, 4), 0.0);
    }

    #[test]
    fn human_format() {
        assert_eq!(format_sig(0.032111, 4), "0.03211");
        assert_eq!(format_sig(4060.0, 4), "4060");
        assert_eq!(format_sig(5.5734, 4), "5.573");
        assert_eq!(format_sig(7.6e-10, 4), "7.6e-10");
        assert_eq!(format_sig(2.9e25, 4), "2.9e25");
        assert_eq!(format_sig(-1.2346e-7, 4), "-1.235e-7");
        assert_eq!(format_sig(f64::NEG_INFINITY, 4), "-inf");
    }

    #[test]
    fn json_round_trip_including_infinity() {
        let reports = vec![
            BoundReport::new("kl", f64::INFINITY, BoundKind::Exact, "oracle").unwrap(),
            BoundReport::new("tv", 0.1 + 0.2, BoundKind::Upper, "le-cam")
                .unwrap()
                .with("n", 3usize)
                .with("lambda", 0.7)
                .with("profile", "linear"),
        ];
        let s = serde_json::to_string(&reports).unwrap();
        assert!(s.contains("\"inf\""));
        let back: Vec<BoundReport> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, reports);
        assert_eq!(
            back[1].value.get().to_bits(),
            reports[1].value.get().to_bits()
        );
    }

    #[test]
    fn rejects_nan_and_empty_provenance() {
        assert!(BoundReport::new("x", f64::NAN, BoundKind::Exact, "oracle").is_err());
        assert!(BoundReport::new("x", 1.0, BoundKind::Exact, "").is_err());
    }
}
