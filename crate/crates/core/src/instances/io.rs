use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, ParseErrorKind, Result};
use crate::instance::{Directionality, Instance, Link, LinkId, PowerAssignment, SinrParams};
use crate::metric::{EuclideanMetric, MatrixMetric, Metric, NodeId};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EuclideanDoc {
    dim: usize,
    points: BTreeMap<NodeId, Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixDoc {
    ids: Vec<NodeId>,
    d: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum MetricDoc {
    Euclidean(EuclideanDoc),
    Matrix(MatrixDoc),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    #[serde(default = "default_schema")]
    schema: u32,
    metric: MetricDoc,
    links: Vec<Link>,
    params: SinrParams,
    power: PowerAssignment,
    directionality: Directionality,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gadgets: Option<Vec<[LinkId; 2]>>,
}

fn default_schema() -> u32 {
    SCHEMA_VERSION
}

#[derive(Deserialize)]
struct SchemaProbe {
    #[serde(default = "default_schema")]
    schema: u32,
}

fn syntax(e: &serde_json::Error) -> ParseError {
    ParseError { field: String::new(), line: e.line(), column: e.column(), kind: ParseErrorKind::Syntax(e.to_string()) }
}

fn invalid(field: &str, kind: ParseErrorKind) -> Error {
    Error::Parse(ParseError { field: field.into(), line: 0, column: 0, kind })
}

/// Pulls `x` out of serde's "missing field `x`" message so the reported path
/// ends at the absent field rather than its parent.
fn missing_field(msg: &str) -> Option<&str> {
    let rest = msg.strip_prefix("missing field `")?;
    rest.split('`').next()
}

fn instance_error_field(e: &Error) -> &'static str {
    match e {
        Error::MetricInvalid(_) => "metric",
        Error::UnknownNode(_) | Error::DegenerateDistance(..) | Error::InfeasibleLink(_) => "links",
        Error::UnknownLink(_) => "power",
        _ => "",
    }
}

pub fn from_json_str(text: &str) -> Result<Instance> {
    let probe: SchemaProbe = serde_json::from_str(text).map_err(|e| {
        if e.is_syntax() || e.is_eof() {
            syntax(&e)
        } else {
            ParseError {
                field: "schema".into(),
                line: e.line(),
                column: e.column(),
                kind: ParseErrorKind::Invalid(e.to_string()),
            }
        }
    })?;
    if probe.schema != SCHEMA_VERSION {
        return Err(Error::SchemaVersionMismatch { found: probe.schema, expected: SCHEMA_VERSION });
    }

    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: InstanceDoc = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let msg = inner.to_string();
        let field = match missing_field(&msg) {
            Some(name) if path == "." => name.to_string(),
            Some(name) => format!("{path}.{name}"),
            None if path == "." => String::new(),
            None => path,
        };
        ParseError { field, line: inner.line(), column: inner.column(), kind: ParseErrorKind::Invalid(msg) }
    })?;

    let metric = match doc.metric {
        MetricDoc::Euclidean(m) => EuclideanMetric::new(m.dim, m.points).map(Metric::Euclidean),
        MetricDoc::Matrix(m) => MatrixMetric::new(m.ids, m.d).map(Metric::Matrix),
    }
    .map_err(|e| invalid("metric", ParseErrorKind::MetricInvalid(e.to_string())))?;

    let mut links = doc.links;
    links.sort_by_key(|l| l.id);
    let inst = Instance::new(metric, links, doc.params, doc.power, doc.directionality)
        .map_err(|e| invalid(instance_error_field(&e), ParseErrorKind::Invalid(e.to_string())))?;
    match doc.gadgets {
        Some(g) => inst.with_gadgets(g).map_err(|e| invalid("gadgets", ParseErrorKind::Invalid(e.to_string()))),
        None => Ok(inst),
    }
}

pub fn to_json_string(inst: &Instance) -> String {
    let metric = match inst.metric() {
        Metric::Euclidean(m) => MetricDoc::Euclidean(EuclideanDoc { dim: m.dim(), points: m.points().clone() }),
        Metric::Matrix(m) => MetricDoc::Matrix(MatrixDoc {
            ids: m.ids().to_vec(),
            d: (0..m.ids().len()).map(|i| m.row(i).to_vec()).collect(),
        }),
    };
    let doc = InstanceDoc {
        schema: SCHEMA_VERSION,
        metric,
        links: inst.links().to_vec(),
        params: *inst.params(),
        power: inst.power().clone(),
        directionality: inst.directionality(),
        gadgets: inst.gadgets().map(<[_]>::to_vec),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("instance documents always serialize");
    s.push('\n');
    s
}

pub fn save_instance(inst: &Instance, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, to_json_string(inst))?;
    Ok(())
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance> {
    let path = path.as_ref();
    let text =
        fs::read_to_string(path).map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
    from_json_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::gen_gadget;

    const DOC: &str = r#"{
  "metric": {"euclidean": {"dim": 1, "points": {"0": [0.0], "1": [1.0]}}},
  "links": [{"id": 0, "s": 0, "r": 1}],
  "params": {"alpha": 2.0, "beta": 1.0, "noise": 0.0},
  "power": {"uniform": 1.0},
  "directionality": "uni"
}"#;

    fn parse_err(text: &str) -> ParseError {
        match from_json_str(text) {
            Err(Error::Parse(p)) => p,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_document_without_schema() {
        let inst = from_json_str(DOC).unwrap();
        assert_eq!(inst.len(), 1);
    }

    #[test]
    fn gadget_round_trip() {
        let inst = gen_gadget(4, 2.0).unwrap();
        let back = from_json_str(&to_json_string(&inst)).unwrap();
        assert_eq!(inst, back);
        assert_eq!(to_json_string(&back), to_json_string(&inst));
    }

    #[test]
    fn missing_alpha_is_named() {
        let p = parse_err(&DOC.replace(r#""alpha": 2.0, "#, ""));
        assert_eq!(p.field, "params.alpha");
        assert!(p.line > 0);
    }

    #[test]
    fn bad_type_has_path_and_position() {
        let p = parse_err(&DOC.replace(r#""beta": 1.0"#, r#""beta": "one""#));
        assert_eq!(p.field, "params.beta");
        assert_eq!(p.line, 4);
    }

    #[test]
    fn syntax_error_has_position() {
        let p = parse_err("{\n  \"metric\": ,\n}");
        assert!(matches!(p.kind, ParseErrorKind::Syntax(_)));
        assert_eq!(p.line, 2);
    }

    #[test]
    fn schema_mismatch() {
        let doc = DOC.replacen('{', "{\"schema\": 7,", 1);
        assert!(matches!(from_json_str(&doc), Err(Error::SchemaVersionMismatch { found: 7, expected: 1 })));
    }

    #[test]
    fn triangle_violation_is_metric_invalid() {
        let doc = r#"{
  "metric": {"matrix": {"ids": [0, 1, 2], "d": [[0, 1, 5], [1, 0, 1], [5, 1, 0]]}},
  "links": [{"id": 0, "s": 0, "r": 1}],
  "params": {"alpha": 2.0, "beta": 1.0, "noise": 0.0},
  "power": {"uniform": 1.0},
  "directionality": "uni"
}"#;
        let p = parse_err(doc);
        assert_eq!(p.field, "metric");
        assert!(matches!(p.kind, ParseErrorKind::MetricInvalid(_)));
    }

    #[test]
    fn links_sorted_on_load() {
        let doc = r#"{
  "metric": {"euclidean": {"dim": 1, "points": {"0": [0], "1": [1], "2": [5], "3": [7]}}},
  "links": [{"id": 1, "s": 2, "r": 3}, {"id": 0, "s": 0, "r": 1}],
  "params": {"alpha": 2.0, "beta": 1.0, "noise": 0.0},
  "power": {"uniform": 1.0},
  "directionality": "bi"
}"#;
        let inst = from_json_str(doc).unwrap();
        assert_eq!(inst.derived(1).unwrap().length, 2.0);
    }
}
