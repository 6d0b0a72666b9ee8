use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::groups::{FiniteAbelianGroup, GroupElement};
use crate::primary::{ComponentDescription, PrimaryComponentSpec};
use crate::tblock::{BlockElement, Caps, TBlockSpec};

/// A spec file: a T-block monoid, optional scan caps, and optional declared results.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub group: FiniteAbelianGroup,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ground_set: Option<Vec<GroupElement>>,
    pub components: Vec<ComponentDescription>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<Caps>,
    #[serde(default, skip_serializing_if = "Expectations::is_empty")]
    pub expect: Expectations,
}

/// Values the scan is expected to produce.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectations {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub delta_contains: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_delta: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub catenary: Option<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lengths: Vec<ExpectedLengths>,
}

impl Expectations {
    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedLengths {
    pub element: BlockElement,
    pub lengths: Vec<u32>,
}

/// Malformed spec text, with the position serde reported.
#[derive(Debug, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl SpecFile {
    pub fn parse(text: &str) -> std::result::Result<Self, ParseError> {
        serde_json::from_str(text).map_err(|e| ParseError {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    /// Hex SHA-256 of the canonical serialization, ignoring the name.
    pub fn digest(&self) -> String {
        let anonymous = SpecFile {
            name: None,
            ..self.clone()
        };
        hex::encode(Sha256::digest(
            serde_json::to_vec(&anonymous).expect("specs serialize"),
        ))
    }

    pub fn to_spec(&self) -> Result<TBlockSpec> {
        let components = self
            .components
            .iter()
            .map(|d| PrimaryComponentSpec::from_description(&self.group, d))
            .collect::<Result<Vec<_>>>()?;
        TBlockSpec::new(self.group.clone(), self.ground_set.clone(), components)
    }

    pub fn to_pretty_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("specs serialize");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
        "name": "sample",
        "group": [2],
        "components": [{"rank": 2, "prime_classes": [[1], [1]]}],
        "scan": {"seq_len_cap": 4, "exp_cap": 4},
        "expect": {"max_delta": 4}
    }"#;

    #[test]
    fn parses_and_builds() {
        let f = SpecFile::parse(SAMPLE).unwrap();
        assert_eq!(f.expect.max_delta, Some(4));
        let spec = f.to_spec().unwrap();
        assert!(spec.ground_is_full());
        assert_eq!(SpecFile::parse(&f.to_pretty_json()).unwrap(), f);
    }

    #[test]
    fn digest_ignores_name_and_layout() {
        let f = SpecFile::parse(SAMPLE).unwrap();
        let mut g = SpecFile::parse(&serde_json::to_string(&f).unwrap()).unwrap();
        g.name = Some("renamed".into());
        assert_eq!(f.digest(), g.digest());
        g.scan = Some(Caps {
            seq_len_cap: 5,
            exp_cap: 4,
        });
        assert_ne!(f.digest(), g.digest());
    }

    #[test]
    fn errors_carry_positions() {
        let e = SpecFile::parse("{\n  \"group\": [2],\n  \"components\": [,]\n}").unwrap_err();
        assert_eq!(e.line, 3);
        let e = SpecFile::parse("{\"group\": [2], \"components\": [], \"extra\": 1}").unwrap_err();
        assert!(e.message.contains("extra"), "{e}");
    }
}
