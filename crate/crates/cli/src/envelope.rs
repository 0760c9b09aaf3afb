//! The versioned result document and JSON encodings of core values.

use okounkov::convbody::{BodyReport, CertificateKind, Halfspace, RationalPolytope};
use okounkov::scalar::to_fraction_string;
use okounkov::{Flag, Rational};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultEnvelope {
    pub schema: u32,
    pub command: String,
    pub truncation: usize,
    /// Whether the reported bodies carry exactness certificates.
    pub exact: bool,
    pub payload: Value,
    pub tool_version: String,
    /// SHA-256 of the input file, hex encoded.
    pub input_digest: String,
    pub seed: Option<u64>,
}

impl ResultEnvelope {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("envelopes serialize");
        text.push('\n');
        text
    }
}

pub fn rational(x: &Rational) -> Value {
    Value::String(to_fraction_string(x))
}

pub fn vector(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational).collect())
}

fn halfspace(h: &Halfspace<Rational>) -> Value {
    json!({
        "normal": h.normal.iter().map(|n| format!("{n}/1")).collect::<Vec<_>>(),
        "offset": rational(&h.offset),
    })
}

pub fn polytope(p: &RationalPolytope<Rational>) -> Value {
    json!({
        "ambient_dim": p.ambient_dim(),
        "dim": p.dim(),
        "vertices": p.vertices().iter().map(|v| vector(v)).collect::<Vec<_>>(),
        "facets": p.facets().iter().map(halfspace).collect::<Vec<_>>(),
        "equations": p.equations().iter().map(halfspace).collect::<Vec<_>>(),
        "volume": rational(&p.volume()),
    })
}

pub fn flag(f: &Flag) -> Value {
    let m = f.matrix();
    let rows: Vec<Value> = (0..m.rows()).map(|i| vector(m.row(i))).collect();
    json!({ "label": f.label(), "matrix": rows, "point": vector(&f.point()) })
}

pub fn body_report(r: &BodyReport<Rational>) -> Value {
    let certificate = r.certificate.as_ref().map(|c| {
        let kind = match c.kind {
            CertificateKind::MonomialGenerators => "monomial-generators",
            CertificateKind::TruncatedGeneration => "truncated-generation",
        };
        json!({ "kind": kind, "generation_degree": c.generation_degree })
    });
    json!({
        "polytope": polytope(&r.polytope),
        "truncation": r.truncation,
        "certificate": certificate,
    })
}
