use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Declarative pass criterion over the measured values of a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum PassRule {
    AtMost { key: String, limit: f64 },
    AtLeast { key: String, limit: f64 },
    /// `lo <= value <= hi`
    Within { key: String, lo: f64, hi: f64 },
    /// Value finite and nonnegative.
    Finite { key: String },
    /// Values of `keys` strictly decreasing in order.
    StrictlyDecreasing { keys: Vec<String> },
    AllOf { rules: Vec<PassRule> },
    /// The check could not be evaluated.
    Never,
}

impl PassRule {
    pub fn at_most(key: &str, limit: f64) -> Self {
        PassRule::AtMost { key: key.into(), limit }
    }

    pub fn at_least(key: &str, limit: f64) -> Self {
        PassRule::AtLeast { key: key.into(), limit }
    }

    pub fn within(key: &str, lo: f64, hi: f64) -> Self {
        PassRule::Within { key: key.into(), lo, hi }
    }

    pub fn finite(key: &str) -> Self {
        PassRule::Finite { key: key.into() }
    }

    pub fn evaluate(&self, measured: &BTreeMap<String, f64>) -> bool {
        let get = |k: &str| measured.get(k).copied().filter(|v| !v.is_nan());
        match self {
            PassRule::AtMost { key, limit } => get(key).is_some_and(|v| v <= *limit),
            PassRule::AtLeast { key, limit } => get(key).is_some_and(|v| v >= *limit),
            PassRule::Within { key, lo, hi } => get(key).is_some_and(|v| *lo <= v && v <= *hi),
            PassRule::Finite { key } => get(key).is_some_and(|v| v.is_finite() && v >= 0.0),
            PassRule::StrictlyDecreasing { keys } => {
                let vals: Option<Vec<f64>> = keys.iter().map(|k| get(k)).collect();
                vals.is_some_and(|v| v.windows(2).all(|w| w[1] < w[0]))
            }
            PassRule::AllOf { rules } => rules.iter().all(|r| r.evaluate(measured)),
            PassRule::Never => false,
        }
    }
}

/// Reference value of a check: a number, or none when the statement only
/// asserts that some constant exists.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Bound {
    Value(f64),
    Existential,
}

const EXISTENTIAL: &str = "none (existential)";

impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Bound::Value(v) => s.serialize_f64(*v),
            Bound::Existential => s.serialize_str(EXISTENTIAL),
        }
    }
}

impl<'de> Deserialize<'de> for Bound {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Bound::Value(v)),
            Raw::Text(t) if t == EXISTENTIAL => Ok(Bound::Existential),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("unknown bound {t:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_id: String,
    pub params: BTreeMap<String, serde_json::Value>,
    #[serde(with = "lenient_map")]
    pub measured: BTreeMap<String, f64>,
    pub bound: Bound,
    pub rule: PassRule,
    pub passed: bool,
    pub notes: String,
    pub runtime_ms: u64,
}

impl CheckReport {
    pub fn new(check_id: &str, params: BTreeMap<String, serde_json::Value>) -> Self {
        CheckReport {
            check_id: check_id.into(),
            params,
            measured: BTreeMap::new(),
            bound: Bound::Existential,
            rule: PassRule::Never,
            passed: false,
            notes: String::new(),
            runtime_ms: 0,
        }
    }

    pub fn measure(&mut self, key: impl Into<String>, value: f64) -> &mut Self {
        self.measured.insert(key.into(), value);
        self
    }

    pub fn note(&mut self, text: impl AsRef<str>) -> &mut Self {
        if !self.notes.is_empty() {
            self.notes.push_str("; ");
        }
        self.notes.push_str(text.as_ref());
        self
    }

    /// Sets the rule and bound and evaluates `passed`.
    pub fn conclude(&mut self, bound: Bound, rule: PassRule) -> &mut Self {
        self.bound = bound;
        self.rule = rule;
        self.passed = self.recompute();
        self
    }

    /// Marks the report failed because the check raised an error.
    pub fn fail(&mut self, error: impl std::fmt::Display) -> &mut Self {
        self.rule = PassRule::Never;
        self.passed = false;
        self.note(format!("error: {error}"));
        self
    }

    pub fn recompute(&self) -> bool {
        self.rule.evaluate(&self.measured)
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.measured.get(key).copied()
    }
}

/// Non-finite measurements are written as the strings `"inf"`, `"-inf"` and
/// `"nan"` so that reports stay valid JSON.
mod lenient_map {
    use super::*;

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Num {
        Finite(f64),
        Special(String),
    }

    pub fn serialize<S: Serializer>(map: &BTreeMap<String, f64>, s: S) -> Result<S::Ok, S::Error> {
        let out: BTreeMap<&String, Num> = map
            .iter()
            .map(|(k, &v)| {
                let n = if v.is_finite() {
                    Num::Finite(v)
                } else if v.is_nan() {
                    Num::Special("nan".into())
                } else if v > 0.0 {
                    Num::Special("inf".into())
                } else {
                    Num::Special("-inf".into())
                };
                (k, n)
            })
            .collect();
        out.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<String, f64>, D::Error> {
        let raw = BTreeMap::<String, Num>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, n)| {
                let v = match n {
                    Num::Finite(v) => v,
                    Num::Special(t) => match t.as_str() {
                        "inf" => f64::INFINITY,
                        "-inf" => f64::NEG_INFINITY,
                        "nan" => f64::NAN,
                        _ => return Err(serde::de::Error::custom(format!("bad number {t:?}"))),
                    },
                };
                Ok((k, v))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_round_trips_through_json() {
        let mut r = CheckReport::new("demo", BTreeMap::new());
        r.measure("ratio", 1.5).measure("blowup", f64::INFINITY);
        r.conclude(Bound::Value(2.0), PassRule::at_most("ratio", 2.0));
        let text = serde_json::to_string(&r).unwrap();
        let back: CheckReport = serde_json::from_str(&text).unwrap();
        assert!(back.passed && back.recompute());
        assert_eq!(back.get("blowup"), Some(f64::INFINITY));
        assert!(text.contains("\"bound\":2.0"));
    }

    #[test]
    fn missing_keys_fail() {
        assert!(!PassRule::finite("absent").evaluate(&BTreeMap::new()));
    }
}
