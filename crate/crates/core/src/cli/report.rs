use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A computed value: a number, a set of numbers, an interval, or the outcome of a property check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Value {
    Integer(i64),
    Set(Vec<u32>),
    Interval([u32; 2]),
    Holds(bool),
}

impl Value {
    pub fn set(s: &BTreeSet<u32>) -> Self {
        Value::Set(s.iter().copied().collect())
    }

    pub fn range(max: u32) -> Self {
        Value::Set((1..=max).collect())
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Integer(n) => write!(f, "{n}"),
            Value::Set(v) if v.is_empty() => write!(f, "{{}}"),
            Value::Set(v) => {
                let contiguous = v.windows(2).all(|w| w[1] == w[0] + 1);
                if contiguous && v.len() > 2 {
                    write!(f, "[{}, {}]", v[0], v[v.len() - 1])
                } else {
                    let items: Vec<String> = v.iter().map(u32::to_string).collect();
                    write!(f, "{{{}}}", items.join(", "))
                }
            }
            Value::Interval([a, b]) => write!(f, "[{a}, {b}]"),
            Value::Holds(true) => write!(f, "holds"),
            Value::Holds(false) => write!(f, "fails"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Scanned value equals the prediction.
    Match,
    /// The scan stays inside the prediction without reaching it; the region is too small.
    Incomplete,
    /// The scan contradicts the prediction.
    Violation,
    /// Nothing to compare against.
    Info,
}

impl Status {
    pub fn is_failure(self) -> bool {
        matches!(self, Status::Incomplete | Status::Violation)
    }

    /// Compares a scanned value with a prediction.
    pub fn judge(value: &Value, predicted: &Value) -> Status {
        use Value::*;
        if value == predicted {
            return Status::Match;
        }
        match (value, predicted) {
            (Integer(v), Integer(p)) if v < p => Status::Incomplete,
            (Set(v), Set(p)) if v.iter().all(|x| p.contains(x)) => Status::Incomplete,
            _ => Status::Violation,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Match => "match",
            Status::Incomplete => "incomplete",
            Status::Violation => "violation",
            Status::Info => "info",
        })
    }
}

/// The finite region a value was computed on.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionInfo {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seq_len_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exp_cap: Option<u32>,
    pub elements: u64,
}

impl RegionInfo {
    /// Cache key component; independent of the element count.
    pub fn key(&self) -> String {
        format!("seq={:?},exp={:?}", self.seq_len_cap, self.exp_cap)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub element: serde_json::Value,
    pub lengths: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub spec_digest: String,
    pub invariant: String,
    pub region: RegionInfo,
    pub value: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicted: Option<Value>,
    pub status: Status,
    pub certified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<WitnessEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub runtime_ms: u64,
}

impl InvariantReport {
    /// A report without a prediction.
    pub fn info(invariant: impl Into<String>, value: Value) -> Self {
        Self {
            spec_digest: String::new(),
            invariant: invariant.into(),
            region: RegionInfo::default(),
            value,
            predicted: None,
            status: Status::Info,
            certified: false,
            anchor: None,
            witnesses: Vec::new(),
            detail: None,
            runtime_ms: 0,
        }
    }

    /// A report judged against a theorem-based prediction.
    pub fn predicted(
        invariant: impl Into<String>,
        value: Value,
        predicted: Value,
        anchor: &str,
    ) -> Self {
        let status = Status::judge(&value, &predicted);
        Self {
            predicted: Some(predicted),
            status,
            certified: status == Status::Match,
            anchor: Some(anchor.to_string()),
            ..Self::info(invariant, value)
        }
    }

    /// A report judged against a value declared in the spec file; never certified.
    pub fn declared(invariant: impl Into<String>, value: Value, declared: Value) -> Self {
        let status = Status::judge(&value, &declared);
        Self {
            predicted: Some(declared),
            status,
            ..Self::info(invariant, value)
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn with_witness(mut self, element: serde_json::Value, lengths: Vec<u32>) -> Self {
        self.witnesses.push(WitnessEntry { element, lengths });
        self
    }

    /// One line of the human-readable summary.
    pub fn summary_line(&self) -> String {
        let mut line = format!(
            "  {:<28} {:<16} {:<10}",
            self.invariant,
            self.value.to_string(),
            self.status
        );
        if let Some(p) = &self.predicted {
            if self.status != Status::Match {
                line.push_str(&format!(" expected {p}"));
            }
        }
        if self.certified {
            line.push_str(" certified");
        }
        if self.status.is_failure() {
            if let Some(d) = &self.detail {
                line.push_str(&format!(" ({d})"));
            }
        }
        line.trim_end().to_string()
    }
}
