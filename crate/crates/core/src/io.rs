//! JSON schemas for data, quivers and modules, plus the textual box and
//! vertex-set syntax shared by front-ends.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use serde::Deserialize;
use serde_json::Value;

use crate::cartan::{BorcherdsCartanDatum, EntryRule, Label};
use crate::error::{Error, Result};
use crate::monster;
use crate::quiver::Quiver;
use crate::series::DegreeBox;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DatumJson {
    vertices: Vec<Label>,
    matrix: Value,
    #[serde(default)]
    symmetrizers: Option<Vec<i64>>,
    #[serde(default)]
    charge: Option<Value>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleJson {
    rule: String,
}

fn schema<T>(r: serde_json::Result<T>) -> Result<T> {
    r.map_err(|e| Error::InvalidInput(format!("schema: {e}")))
}

fn big_from(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::InvalidInput(format!("charge {n} is not an integer"))),
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("charge '{s}' is not an integer"))),
        other => Err(Error::InvalidInput(format!("charge {other} is not an integer"))),
    }
}

/// Parses `{"vertices": [...], "matrix": [[...]] | {"rule": "monster"},
/// "symmetrizers": [...], "charge": {id: n, ...} | {"rule": "j-coefficients"}}`.
pub fn parse_datum(text: &str) -> Result<BorcherdsCartanDatum> {
    let raw: DatumJson = schema(serde_json::from_str(text))?;
    let labels = raw.vertices;
    let charge = match &raw.charge {
        None => None,
        Some(Value::Object(map)) if map.contains_key("rule") => {
            let rule: RuleJson = schema(serde_json::from_value(Value::Object(map.clone())))?;
            if rule.rule != "j-coefficients" {
                return Err(Error::InvalidInput(format!("unknown charge rule '{}'", rule.rule)));
            }
            Some(j_charges(&labels)?)
        }
        Some(Value::Object(map)) => {
            let mut charge = vec![BigInt::one(); labels.len()];
            for (key, v) in map {
                let i = labels
                    .iter()
                    .position(|l| l.matches(key))
                    .ok_or_else(|| Error::UnknownVertex(key.clone()))?;
                charge[i] = big_from(v)?;
            }
            Some(charge)
        }
        Some(other) => {
            return Err(Error::InvalidInput(format!("charge must be an object, got {other}")))
        }
    };
    match raw.matrix {
        Value::Object(map) => {
            let rule: RuleJson = schema(serde_json::from_value(Value::Object(map)))?;
            if rule.rule != "monster" {
                return Err(Error::InvalidInput(format!("unknown matrix rule '{}'", rule.rule)));
            }
            BorcherdsCartanDatum::from_rule(EntryRule::Monster, labels, raw.symmetrizers, charge)
        }
        m => {
            let matrix: Vec<Vec<i64>> = schema(serde_json::from_value(m))?;
            BorcherdsCartanDatum::new(labels, matrix, raw.symmetrizers, charge)
        }
    }
}

/// `c(i)` at integer vertices `i ≥ 1` and 1 at `−1`.
fn j_charges(labels: &[Label]) -> Result<Vec<BigInt>> {
    let mut top = 1;
    for l in labels {
        match l {
            Label::Int(-1) => {}
            Label::Int(v) if *v >= 1 => top = top.max(*v),
            other => {
                return Err(Error::InvalidInput(format!(
                    "j-coefficient charge is undefined at vertex {other}"
                )))
            }
        }
    }
    let coeffs = monster::j_coefficients(top.max(2) as usize)?;
    Ok(labels
        .iter()
        .map(|l| match l {
            Label::Int(v) if *v >= 1 => coeffs.c(*v),
            _ => BigInt::one(),
        })
        .collect())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrowJson {
    from: Label,
    to: Label,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuiverJson {
    vertices: Vec<Label>,
    #[serde(default)]
    arrows: Vec<ArrowJson>,
}

/// Parses `{"vertices": [...], "arrows": [{"from": a, "to": b}, ...]}`.
pub fn parse_quiver(text: &str) -> Result<Quiver> {
    let raw: QuiverJson = schema(serde_json::from_str(text))?;
    let arrows: Vec<(Label, Label)> = raw.arrows.into_iter().map(|a| (a.from, a.to)).collect();
    Quiver::from_labels(raw.vertices, &arrows)
}

/// Parses `{"dims": [...], "maps": [[[...]], ...]}` with one matrix per
/// arrow, in arrow order, each `dim(to) × dim(from)`.
pub fn parse_module(text: &str, quiver: &Quiver) -> Result<crate::schofield::IntModule> {
    let m: crate::schofield::IntModule = schema(serde_json::from_str(text))?;
    if m.dims.len() != quiver.rank() {
        return Err(Error::InvalidInput(format!(
            "module lists {} dimensions for {} vertices",
            m.dims.len(),
            quiver.rank()
        )));
    }
    // Shape validation happens on realisation; do it once here over F_2.
    m.realise(&std::sync::Arc::new(quiver.clone()), 2)?;
    Ok(m)
}

/// Parses a degree box: positional `4,4` or labelled `1:4,2:4`; vertices
/// missing from a labelled box get limit 0.
pub fn parse_box(text: &str, labels: &[Label]) -> Result<DegreeBox> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(DegreeBox::new(vec![0; labels.len()]));
    }
    let items: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = |s: &str| Error::InvalidInput(format!("cannot read box entry '{s}'"));
    if items.iter().any(|s| s.contains(':')) {
        let mut limits = vec![0; labels.len()];
        for item in items {
            let (l, k) = item.rsplit_once(':').ok_or_else(|| bad(item))?;
            let i = labels
                .iter()
                .position(|x| x.matches(l))
                .ok_or_else(|| Error::UnknownVertex(l.trim().to_string()))?;
            limits[i] = k.trim().parse().map_err(|_| bad(item))?;
        }
        Ok(DegreeBox::new(limits))
    } else {
        if items.len() != labels.len() {
            return Err(Error::InvalidInput(format!(
                "box has {} entries for {} vertices",
                items.len(),
                labels.len()
            )));
        }
        let limits = items
            .iter()
            .map(|s| s.parse().map_err(|_| bad(s)))
            .collect::<Result<Vec<u32>>>()?;
        Ok(DegreeBox::new(limits))
    }
}

/// Parses a comma-separated vertex set; the empty string is `∅`.
pub fn parse_vertex_set(text: &str, labels: &[Label]) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let i = labels
            .iter()
            .position(|x| x.matches(item))
            .ok_or_else(|| Error::UnknownVertex(item.to_string()))?;
        if !out.contains(&i) {
            out.push(i);
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Parses labelled integers `1:2,2:0` into one value per vertex (default 0).
pub fn parse_labelled_ints(text: &str, labels: &[Label]) -> Result<Vec<i64>> {
    let mut out = vec![0; labels.len()];
    let items: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if !items.is_empty() && items.iter().all(|s| !s.contains(':')) {
        if items.len() != labels.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} values, got {}",
                labels.len(),
                items.len()
            )));
        }
        for (o, s) in out.iter_mut().zip(items) {
            *o = s.parse().map_err(|_| Error::InvalidInput(format!("'{s}' is not an integer")))?;
        }
        return Ok(out);
    }
    let mut seen = BTreeMap::new();
    for item in items {
        let (l, v) = item
            .rsplit_once(':')
            .ok_or_else(|| Error::InvalidInput(format!("cannot read '{item}'")))?;
        let i = labels
            .iter()
            .position(|x| x.matches(l))
            .ok_or_else(|| Error::UnknownVertex(l.trim().to_string()))?;
        if seen.insert(i, ()).is_some() {
            return Err(Error::InvalidInput(format!("vertex {} given twice", labels[i])));
        }
        out[i] = v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("'{v}' is not an integer")))?;
    }
    Ok(out)
}
