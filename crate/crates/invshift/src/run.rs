//! Dispatches a request to the analysis routines and assembles the report.
//!
//! Reports are `serde_json::Value` objects. Object keys serialize in sorted
//! order and every element list is in canonical order, so identical requests
//! give byte-identical output.

use invshift_core::analysis::{self, CircleKind};
use invshift_core::oracle::oracle_fixed_points;
use invshift_core::{Distribution, Error, GroupElement, Subgroup};
use serde_json::{json, Map, Value};

use crate::format::{element_key, format_rational, AnalysisRequest, Command};
use crate::sample::{self, GENERATOR_VERSION};

pub const PRECONDITION_NOT_MET: &str = "precondition not met";

/// Default seed when a sampling request gives none.
pub const DEFAULT_SEED: u64 = 0;

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub report: Value,
    /// 0 success, 1 a requested verdict's precondition failed, 2 theorem violation.
    pub exit_code: u8,
}

impl RunOutcome {
    /// Indented JSON; arrays without nested objects stay on one line.
    pub fn to_json(&self) -> String {
        let mut s = String::new();
        write_value(&mut s, &self.report, 0);
        s.push('\n');
        s
    }

    /// One `key: value` line per top-level field.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if let Value::Object(map) = &self.report {
            for (k, v) in map {
                s.push_str(k);
                s.push_str(": ");
                s.push_str(&v.to_string());
                s.push('\n');
            }
        }
        s
    }
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = |out: &mut String, d: usize| out.extend(std::iter::repeat_n("  ", d));
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, v)) in map.iter().enumerate() {
                pad(out, depth + 1);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(out, v, depth + 1);
                if i + 1 < map.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            pad(out, depth);
            out.push('}');
        }
        Value::Array(items) if items.iter().any(|x| x.is_object()) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(out, depth + 1);
                write_value(out, item, depth + 1);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            pad(out, depth);
            out.push(']');
        }
        other => out.push_str(&other.to_string()),
    }
}

fn elements(xs: impl IntoIterator<Item = GroupElement>) -> Value {
    Value::Array(xs.into_iter().map(|x| json!(x.residues())).collect())
}

fn subgroup(s: &Subgroup) -> Value {
    elements(s.elements())
}

fn distribution(mu: &Distribution) -> Value {
    let probs: Map<String, Value> = mu
        .support()
        .into_iter()
        .map(|x| {
            let p = format_rational(mu.prob(&x).expect("member"));
            (element_key(&x), Value::String(p))
        })
        .collect();
    json!({ "probs": probs })
}

fn echo(request: &AnalysisRequest) -> Value {
    let mut m = Map::new();
    m.insert("command".into(), json!(request.command.as_str()));
    if let Some(g) = &request.group {
        m.insert("group".into(), json!({ "cyclic_orders": g.cyclic_orders() }));
    }
    if !request.distributions.is_empty() {
        let d: Map<String, Value> = request.distributions.iter().map(|(k, v)| (k.clone(), distribution(v))).collect();
        m.insert("distributions".into(), Value::Object(d));
    }
    if let Some(n) = request.sample_count {
        m.insert("sample_count".into(), json!(n));
    }
    if let Some(seed) = request.seed {
        m.insert("seed".into(), json!(seed));
    }
    if let Some(c) = &request.circle {
        let support: Vec<String> = c.support.iter().map(|p| p.to_string()).collect();
        m.insert("circle".into(), json!({ "support": support, "nonrational": c.nonrational }));
    }
    if request.oracle {
        m.insert("oracle".into(), json!(true));
    }
    Value::Object(m)
}

struct Builder {
    report: Map<String, Value>,
    verdicts: Map<String, Value>,
    exit_code: u8,
}

impl Builder {
    fn verdict(&mut self, name: &str, result: Result<bool, Error>, requested: bool) {
        match result {
            Ok(v) => {
                self.verdicts.insert(name.into(), json!(v));
            }
            Err(e) if e.is_precondition() => {
                if requested {
                    self.verdicts.insert(name.into(), json!(PRECONDITION_NOT_MET));
                    self.exit_code = self.exit_code.max(1);
                }
            }
            Err(e) => self.violation(name, e),
        }
    }

    fn violation(&mut self, name: &str, e: Error) {
        self.verdicts.insert(name.into(), json!(false));
        let list = self.report.entry("theorem_violations").or_insert_with(|| json!([]));
        list.as_array_mut().expect("array").push(json!(format!("{name}: {e}")));
        self.exit_code = 2;
    }
}

/// Runs a validated request.
pub fn run(request: &AnalysisRequest) -> RunOutcome {
    let mut b = Builder { report: Map::new(), verdicts: Map::new(), exit_code: 0 };
    b.report.insert("request".into(), echo(request));

    if request.command == Command::Circle {
        circle(request, &mut b);
    } else {
        let y = request.y().expect("validated request has Y");
        let x = request.x();
        match request.command {
            Command::Analyze => {
                structure(y, &mut b);
                if let Some(x) = x {
                    pair(x, y, &mut b, false);
                }
                basis(y, request.oracle, &mut b);
            }
            Command::FixedPoints => {
                structure(y, &mut b);
                basis(y, request.oracle, &mut b);
            }
            Command::Independence => {
                let x = x.expect("validated request has X");
                let fp = analysis::is_fixed_point(x, y).expect("same group");
                b.verdicts.insert("is_fixed_point".into(), json!(fp));
                b.verdict("independence_ok", analysis::independence_check(x, y), true);
            }
            Command::Sample => monte_carlo(request, y, x, &mut b),
            Command::Circle => unreachable!(),
        }
    }

    if !b.verdicts.is_empty() {
        b.report.insert("verdicts".into(), Value::Object(b.verdicts));
    }
    RunOutcome { report: Value::Object(b.report), exit_code: b.exit_code }
}

fn structure(y: &Distribution, b: &mut Builder) {
    let lambda = analysis::lambda_set(y);
    let a = analysis::invariance_subgroup(y);
    b.report.insert("lambda_indices".into(), Value::Array(lambda.characters().map(|c| json!(c.indices())).collect()));
    b.report.insert("a_subgroup".into(), subgroup(&a));
    b.verdicts.insert("haar_forced".into(), json!(a.is_whole()));
}

fn pair(x: &Distribution, y: &Distribution, b: &mut Builder, requested: bool) {
    let stab = analysis::stabilizer(x);
    b.report.insert("stabilizer".into(), subgroup(&stab));
    let fp = analysis::is_fixed_point(x, y).expect("same group");
    b.verdicts.insert("is_fixed_point".into(), json!(fp));
    match analysis::verify_forward(x, y) {
        Ok(_) => {
            b.verdicts.insert("forward_ok".into(), json!(true));
        }
        Err(e) if e.is_precondition() => {}
        Err(e) => b.violation("forward_ok", e),
    }
    b.verdict("converse_ok", analysis::verify_converse(x, y), requested);
    b.verdict("independence_ok", analysis::independence_check(x, y), requested);
}

fn basis(y: &Distribution, oracle: bool, b: &mut Builder) {
    let space = analysis::fixed_point_space(y);
    let cosets: Vec<Value> = space
        .cosets()
        .into_iter()
        .map(|c| json!({ "representative": c[0].residues(), "size": c.len(), "elements": elements(c) }))
        .collect();
    let mut m = Map::new();
    m.insert("dimension".into(), json!(space.dimension()));
    m.insert("cosets".into(), Value::Array(cosets));
    if oracle {
        let v = match oracle_fixed_points(y) {
            Ok(set) => {
                let agrees = set == space.affine_set();
                if !agrees {
                    b.violation("oracle_agrees", Error::TheoremViolation("oracle and coset lift differ".into()));
                }
                json!({ "affine_dimension": set.affine_dimension(), "agrees": agrees })
            }
            Err(e) => json!({ "error": e.to_string() }),
        };
        m.insert("oracle".into(), v);
    }
    b.report.insert("fixed_point_basis".into(), Value::Object(m));
}

fn monte_carlo(request: &AnalysisRequest, y: &Distribution, x: Option<&Distribution>, b: &mut Builder) {
    let n = request.sample_count.expect("validated request has a sample count");
    let seed = request.seed.unwrap_or(DEFAULT_SEED);
    let (table, target, compared) = match x {
        Some(x) => (sample::sample_sum(x, y, n, seed).expect("same group"), x, "law of X+Y vs X"),
        None => (sample::sample(y, n, seed), y, "law of Y"),
    };
    let tv = table.tv_exact(target).expect("same group");
    let spec = target.spec();
    let counts: Map<String, Value> = table
        .counts()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(i, &c)| (element_key(&spec.element_at(i)), json!(c)))
        .collect();
    b.report.insert(
        "monte_carlo".into(),
        json!({
            "compared": compared,
            "counts": counts,
            "generator": GENERATOR_VERSION,
            "sample_count": n,
            "seed": seed,
            "tv_distance": format_rational(&tv),
            "tv_distance_f64": num_traits::ToPrimitive::to_f64(&tv).unwrap_or(f64::NAN),
        }),
    );
}

fn circle(request: &AnalysisRequest, b: &mut Builder) {
    let input = request.circle.as_ref().expect("validated circle request");
    match analysis::circle_classify(&input.support, input.nonrational) {
        Ok(c) => {
            let v = match c.kind {
                CircleKind::FiniteCyclic(n) => {
                    let points: Vec<String> = c.subgroup_points().iter().map(|p| p.to_string()).collect();
                    json!({ "kind": "finite_cyclic", "n": n, "subgroup_points": points })
                }
                CircleKind::HaarForced => json!({ "kind": "haar_forced" }),
            };
            b.report.insert("circle".into(), v);
        }
        Err(e) if e.is_theorem_violation() => b.violation("circle", e),
        Err(e) => {
            b.report.insert("circle".into(), json!({ "error": e.to_string() }));
            b.exit_code = b.exit_code.max(1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_request;

    fn go(doc: &str) -> RunOutcome {
        run(&parse_request(doc).unwrap())
    }

    #[test]
    fn analyze_dirac_zero() {
        let out =
            go(r#"{"group":{"cyclic_orders":[4]},"distributions":{"Y":{"probs":{"[0]":"1"}}},"command":"analyze"}"#);
        assert_eq!(out.exit_code, 0);
        assert_eq!(out.report["a_subgroup"], json!([[0]]));
        assert_eq!(out.report["verdicts"]["haar_forced"], json!(false));
        assert_eq!(out.report["lambda_indices"], json!([[0], [1], [2], [3]]));
    }

    #[test]
    fn fixed_points_two_cosets() {
        let out = go(
            r#"{"group":{"cyclic_orders":[4]},"distributions":{"Y":{"probs":{"[0]":"1/2","[2]":"1/2"}}},"command":"fixed-points","oracle":true}"#,
        );
        let basis = &out.report["fixed_point_basis"];
        assert_eq!(basis["dimension"], json!(2));
        assert_eq!(basis["cosets"][0]["elements"], json!([[0], [2]]));
        assert_eq!(basis["cosets"][1]["elements"], json!([[1], [3]]));
        assert_eq!(basis["cosets"][1]["size"], json!(2));
        assert_eq!(basis["oracle"]["agrees"], json!(true));
        assert_eq!(basis["oracle"]["affine_dimension"], json!(1));
    }

    #[test]
    fn analyze_full_support_is_haar() {
        let out = go(
            r#"{"group":{"cyclic_orders":[5]},"distributions":{"Y":{"probs":{"[0]":"1/5","[1]":"1/5","[2]":"1/5","[3]":"1/5","[4]":"1/5"}}},"command":"analyze"}"#,
        );
        assert_eq!(out.report["verdicts"]["haar_forced"], json!(true));
    }

    #[test]
    fn independence_precondition_reported() {
        let out = go(
            r#"{"group":{"cyclic_orders":[2]},"distributions":{"X":{"probs":{"[0]":"1"}},"Y":{"probs":{"[1]":"1"}}},"command":"independence"}"#,
        );
        assert_eq!(out.exit_code, 1);
        assert_eq!(out.report["verdicts"]["independence_ok"], json!(PRECONDITION_NOT_MET));
        assert_eq!(out.report["verdicts"]["is_fixed_point"], json!(false));
    }

    #[test]
    fn analyze_with_x_reports_all_verdicts() {
        let out = go(
            r#"{"group":{"cyclic_orders":[4]},"distributions":{"X":{"probs":{"[0]":"1/2","[2]":"1/2"}},"Y":{"probs":{"[2]":"1"}}},"command":"analyze"}"#,
        );
        let v = &out.report["verdicts"];
        for key in ["is_fixed_point", "forward_ok", "converse_ok", "independence_ok"] {
            assert_eq!(v[key], json!(true), "{key}");
        }
        assert_eq!(out.report["stabilizer"], json!([[0], [2]]));

        // Non-fixed pair: verdicts whose preconditions fail are omitted.
        let out = go(
            r#"{"group":{"cyclic_orders":[4]},"distributions":{"X":{"probs":{"[0]":"1"}},"Y":{"probs":{"[1]":"1"}}},"command":"analyze"}"#,
        );
        let v = out.report["verdicts"].as_object().unwrap();
        assert_eq!(v["is_fixed_point"], json!(false));
        assert!(!v.contains_key("forward_ok"));
        assert!(!v.contains_key("converse_ok"));
        assert!(!v.contains_key("independence_ok"));
        assert_eq!(out.exit_code, 0);
    }

    #[test]
    fn sample_is_byte_stable() {
        let doc = r#"{"group":{"cyclic_orders":[12]},"distributions":{"X":{"probs":{"[0]":"1/4","[3]":"1/4","[6]":"1/4","[9]":"1/4"}},"Y":{"probs":{"[3]":"1/2","[9]":"1/2"}}},"command":"sample","sample_count":5000,"seed":11}"#;
        let a = go(doc).to_json();
        assert_eq!(a, go(doc).to_json());
        let out = go(doc);
        assert_eq!(out.report["monte_carlo"]["seed"], json!(11));
        assert!(out.report["monte_carlo"]["tv_distance_f64"].as_f64().unwrap() < 0.05);
    }

    #[test]
    fn circle_reports() {
        let out = go(r#"{"command":"circle","circle":{"support":["1/4","1/6"]}}"#);
        assert_eq!(out.report["circle"]["n"], json!(12));
        assert_eq!(out.report["circle"]["subgroup_points"].as_array().unwrap().len(), 12);
        let out = go(r#"{"command":"circle","circle":{"support":[],"nonrational":true}}"#);
        assert_eq!(out.report["circle"]["kind"], json!("haar_forced"));
    }

    #[test]
    fn json_output_parses_back() {
        let out = go(
            r#"{"group":{"cyclic_orders":[2,2]},"distributions":{"Y":{"probs":{"[1,0]":"1"}}},"command":"fixed-points"}"#,
        );
        let text = out.to_json();
        assert!(text.contains("\"a_subgroup\": [[0,0],[1,0]]"), "{text}");
        assert_eq!(serde_json::from_str::<Value>(&text).unwrap(), out.report);
    }

    #[test]
    fn text_output_lists_sections() {
        let out =
            go(r#"{"group":{"cyclic_orders":[4]},"distributions":{"Y":{"probs":{"[2]":"1"}}},"command":"analyze"}"#);
        let text = out.to_text();
        assert!(text.contains("a_subgroup: [[0],[2]]"), "{text}");
    }
}
