//! The JSON request document.
//!
//! ```json
//! {
//!   "group": {"cyclic_orders": [4]},
//!   "distributions": {"Y": {"probs": {"[2]": "1"}}},
//!   "command": "analyze"
//! }
//! ```
//!
//! Element keys are residue arrays such as `"[1,2]"`; probabilities are exact
//! rationals written `"p/q"` or `"p"`. Unknown fields are rejected.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use invshift_core::{CircleRational, Distribution, GroupElement, GroupSpec, Rational};
use serde::Deserialize;

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Command {
    Analyze,
    FixedPoints,
    Independence,
    Sample,
    Circle,
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::FixedPoints => "fixed-points",
            Command::Independence => "independence",
            Command::Sample => "sample",
            Command::Circle => "circle",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "analyze" => Command::Analyze,
            "fixed-points" => Command::FixedPoints,
            "independence" => Command::Independence,
            "sample" => Command::Sample,
            "circle" => Command::Circle,
            other => {
                return Err(CliError::invalid(
                    "command",
                    format!(
                        "unknown command {other:?}; expected analyze, fixed-points, independence, sample or circle"
                    ),
                ))
            }
        })
    }
}

/// Support of `Y` on the circle for the `circle` command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleInput {
    pub support: Vec<CircleRational>,
    /// `Y` charges irrationals or infinitely many rationals.
    pub nonrational: bool,
}

/// A validated request.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisRequest {
    /// Absent only for `circle`.
    pub group: Option<GroupSpec>,
    /// `"Y"` and optionally `"X"`.
    pub distributions: BTreeMap<String, Distribution>,
    pub command: Command,
    pub sample_count: Option<u64>,
    pub seed: Option<u64>,
    pub circle: Option<CircleInput>,
    /// Also run the brute-force fixed-point solver.
    pub oracle: bool,
}

impl AnalysisRequest {
    pub fn y(&self) -> Option<&Distribution> {
        self.distributions.get("Y")
    }

    pub fn x(&self) -> Option<&Distribution> {
        self.distributions.get("X")
    }

    /// Checks the per-command requirements. Called by [`parse_request`]; call it
    /// again after overriding fields from the command line.
    pub fn validate(&self) -> Result<()> {
        match self.command {
            Command::Circle => {
                let circle = self
                    .circle
                    .as_ref()
                    .ok_or_else(|| CliError::invalid("circle", "the circle command needs a support"))?;
                if circle.support.is_empty() && !circle.nonrational {
                    return Err(CliError::Validation {
                        field: "circle.support".into(),
                        source: invshift_core::Error::EmptyCircleSupport,
                    });
                }
            }
            _ => {
                if self.group.is_none() {
                    return Err(CliError::invalid("group", "missing"));
                }
                if self.y().is_none() {
                    return Err(CliError::invalid("distributions.Y", "missing"));
                }
            }
        }
        if self.command == Command::Independence && self.x().is_none() {
            return Err(CliError::invalid("distributions.X", "the independence command needs X"));
        }
        if self.command == Command::Sample && self.sample_count.is_none() {
            return Err(CliError::invalid("sample_count", "the sample command needs a sample count"));
        }
        if self.sample_count == Some(0) {
            return Err(CliError::invalid("sample_count", "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RequestDoc {
    group: Option<GroupDoc>,
    #[serde(default)]
    distributions: BTreeMap<String, DistributionDoc>,
    command: String,
    sample_count: Option<u64>,
    seed: Option<u64>,
    circle: Option<CircleDoc>,
    #[serde(default)]
    oracle: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupDoc {
    cyclic_orders: Vec<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DistributionDoc {
    probs: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CircleDoc {
    support: Vec<String>,
    #[serde(default)]
    nonrational: bool,
}

/// Parses and validates a request document.
pub fn parse_request(text: &str) -> Result<AnalysisRequest> {
    let request = parse_document(text)?;
    request.validate()?;
    Ok(request)
}

/// Parses a document and validates its group and distributions, but not the
/// per-command requirements checked by [`AnalysisRequest::validate`].
pub fn parse_document(text: &str) -> Result<AnalysisRequest> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: RequestDoc = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        CliError::Json { path, line: inner.line(), column: inner.column(), message: inner.to_string() }
    })?;
    let command: Command = doc.command.parse()?;

    let group = doc
        .group
        .map(|g| {
            GroupSpec::new(g.cyclic_orders)
                .map_err(|source| CliError::Validation { field: "group.cyclic_orders".into(), source })
        })
        .transpose()?;

    let mut distributions = BTreeMap::new();
    for (name, dist) in doc.distributions {
        if name != "X" && name != "Y" {
            return Err(CliError::invalid(
                format!("distributions.{name}"),
                "only distributions named \"X\" and \"Y\" are recognized",
            ));
        }
        let spec = group.as_ref().ok_or_else(|| CliError::invalid("group", "distributions given without a group"))?;
        let parsed = parse_distribution(spec, &name, &dist.probs)?;
        distributions.insert(name, parsed);
    }

    let circle = doc
        .circle
        .map(|c| -> Result<CircleInput> {
            let support = c
                .support
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    s.parse::<CircleRational>()
                        .map_err(|source| CliError::Validation { field: format!("circle.support[{i}]"), source })
                })
                .collect::<Result<_>>()?;
            Ok(CircleInput { support, nonrational: c.nonrational })
        })
        .transpose()?;

    Ok(AnalysisRequest {
        group,
        distributions,
        command,
        sample_count: doc.sample_count,
        seed: doc.seed,
        circle,
        oracle: doc.oracle,
    })
}

fn parse_distribution(spec: &GroupSpec, name: &str, probs: &BTreeMap<String, String>) -> Result<Distribution> {
    let mut pairs = Vec::with_capacity(probs.len());
    for (key, value) in probs {
        let field = format!("distributions.{name}.probs[{key:?}]");
        let x = parse_element(spec, key).map_err(|e| e.at(&field))?;
        let p = parse_rational(value).map_err(|e| e.at(&field))?;
        pairs.push((x, p));
    }
    Distribution::from_pairs(spec.clone(), pairs)
        .map_err(|source| CliError::Validation { field: format!("distributions.{name}"), source })
}

/// Parses `"[a,b,...]"` into an element of `spec`.
pub fn parse_element(spec: &GroupSpec, key: &str) -> Result<GroupElement> {
    let inner = key
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| CliError::invalid("", format!("element key {key:?} is not of the form [a,b,...]")))?;
    let residues = inner
        .split(',')
        .map(|t| t.trim().parse::<u64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| CliError::invalid("", format!("element key {key:?} has a non-integer residue")))?;
    spec.element(residues).map_err(|source| CliError::Validation { field: String::new(), source })
}

/// Parses `"p/q"` or `"p"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).map_err(|e| CliError::invalid("", format!("cannot parse {s:?} as p/q: {e}")))
}

/// `"p/q"`, or `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// `"[a,b,...]"`.
pub fn element_key(x: &GroupElement) -> String {
    x.to_string()
}

/// Parses a comma-separated circle support such as `"1/4,1/6"`.
pub fn parse_circle_support(s: &str) -> Result<Vec<CircleRational>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .enumerate()
        .map(|(i, t)| {
            t.parse::<CircleRational>()
                .map_err(|source| CliError::Validation { field: format!("--support[{i}]"), source })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document() {
        let r = parse_request(
            r#"{"group":{"cyclic_orders":[4]},"distributions":{"Y":{"probs":{"[2]":"1"}}},"command":"analyze"}"#,
        )
        .unwrap();
        assert_eq!(r.command, Command::Analyze);
        assert_eq!(r.y().unwrap().support(), vec![r.group.as_ref().unwrap().element(vec![2]).unwrap()]);
        assert!(r.x().is_none());
    }

    #[test]
    fn mass_error() {
        let e = parse_request(
            r#"{"group":{"cyclic_orders":[3]},"distributions":{"Y":{"probs":{"[0]":"1/3","[1]":"1/3"}}},"command":"analyze"}"#,
        )
        .unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("mass ≠ 1"), "{msg}");
        assert!(msg.contains("distributions.Y"), "{msg}");
    }

    #[test]
    fn out_of_range_error() {
        let e = parse_request(
            r#"{"group":{"cyclic_orders":[4]},"distributions":{"Y":{"probs":{"[5]":"1"}}},"command":"analyze"}"#,
        )
        .unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("out of range"), "{msg}");
        assert!(msg.contains(r#"probs["[5]"]"#), "{msg}");
    }

    #[test]
    fn unknown_field_is_reported_with_position() {
        let e =
            parse_request("{\n  \"group\": {\"cyclic_orders\": [4]},\n  \"colour\": 1,\n  \"command\": \"analyze\"\n}")
                .unwrap_err();
        match e {
            CliError::Json { line, message, .. } => {
                assert_eq!(line, 3);
                assert!(message.contains("colour"));
            }
            other => panic!("unexpected {other:?}"),
        }
        let e = parse_request(
            r#"{"group":{"cyclic_orders":[4]},"command":"analyze","distributions":{"Y":{"probs":{"[0]":1}}}}"#,
        )
        .unwrap_err();
        assert!(e.to_string().contains("distributions.Y.probs"), "{e}");
    }

    #[test]
    fn other_validation_errors() {
        let bad = [
            r#"{"command":"analyze"}"#,
            r#"{"group":{"cyclic_orders":[4]},"command":"analyze"}"#,
            r#"{"group":{"cyclic_orders":[4]},"distributions":{"Z":{"probs":{"[0]":"1"}}},"command":"analyze"}"#,
            r#"{"group":{"cyclic_orders":[4]},"distributions":{"Y":{"probs":{"[0]":"1"}}},"command":"dance"}"#,
            r#"{"group":{"cyclic_orders":[4]},"distributions":{"Y":{"probs":{"[0]":"1"}}},"command":"sample"}"#,
            r#"{"group":{"cyclic_orders":[4]},"distributions":{"Y":{"probs":{"[0]":"1"}}},"command":"sample","sample_count":0}"#,
            r#"{"group":{"cyclic_orders":[4]},"distributions":{"Y":{"probs":{"[0]":"1"}}},"command":"independence"}"#,
            r#"{"group":{"cyclic_orders":[4]},"distributions":{"Y":{"probs":{"[0]":"3/2","[1]":"-1/2"}}},"command":"analyze"}"#,
            r#"{"group":{"cyclic_orders":[4]},"distributions":{"Y":{"probs":{"[0]":"1/0"}}},"command":"analyze"}"#,
            r#"{"group":{"cyclic_orders":[4]},"distributions":{"Y":{"probs":{"[0,1]":"1"}}},"command":"analyze"}"#,
            r#"{"group":{"cyclic_orders":[0]},"distributions":{"Y":{"probs":{"[0]":"1"}}},"command":"analyze"}"#,
            r#"{"group":{"cyclic_orders":[4]},"distributions":{"Y":{"probs":{"[0]":"1/2","[ 0 ]":"1/2"}}},"command":"analyze"}"#,
            r#"{"command":"circle","circle":{"support":[]}}"#,
            r#"{"command":"circle","circle":{"support":["1/x"]}}"#,
        ];
        for doc in bad {
            assert!(parse_request(doc).is_err(), "accepted {doc}");
        }
    }

    #[test]
    fn circle_document() {
        let r = parse_request(r#"{"command":"circle","circle":{"support":["1/4","2/12"]}}"#).unwrap();
        assert_eq!(r.circle.unwrap().support[1], "1/6".parse().unwrap());
        let r = parse_request(r#"{"command":"circle","circle":{"support":[],"nonrational":true}}"#).unwrap();
        assert!(r.circle.unwrap().nonrational);
    }

    #[test]
    fn circle_support_list() {
        let s = parse_circle_support("1/4, 1/6,").unwrap();
        assert_eq!(s.len(), 2);
        assert!(parse_circle_support("1/4,abc").is_err());
    }

    #[test]
    fn rational_formatting() {
        assert_eq!(format_rational(&parse_rational("2/6").unwrap()), "1/3");
        assert_eq!(format_rational(&parse_rational("1").unwrap()), "1");
    }
}
