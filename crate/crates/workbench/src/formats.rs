//! On-disk JSON schemas for quantales, Q-sets, and morphisms, with parsers
//! that reject unknown names, partial tables, and conflicting entries, and
//! canonical serializers that round-trip bit-exactly.
//!
//! A quantale document carries `elements` (array of names), `le` (either an
//! array of `[below, above]` generating pairs, closed reflexively and
//! transitively, or a full boolean matrix), and `tensor` (an array of
//! `[a, b, a⊗b]` triples covering every pair). A Q-set document carries
//! `quantale` (a path relative to the document, or an inline quantale
//! document), `carrier`, and `delta` triples (symmetric closure applied,
//! conflicts rejected). A morphism document carries `kind`, `dom` and `cod`
//! paths, and a `map` or `table` plus an optional `error` element.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use qset_core::morphism::{EMorphism, FunctionalMorphism, RelationalMorphism};
use qset_core::quantale::close_order;
use qset_core::{QSet, Quantale};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("failed to read {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid json in {path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

impl FormatError {
    fn schema(path: &str, message: impl Into<String>) -> Self {
        FormatError::Schema {
            path: path.to_string(),
            message: message.into(),
        }
    }

    fn invalid(path: &str, message: impl std::fmt::Display) -> Self {
        FormatError::Invalid {
            path: path.to_string(),
            message: message.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum LeSpec {
    Pairs(Vec<[String; 2]>),
    Matrix(Vec<Vec<bool>>),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct QuantaleDoc {
    pub elements: Vec<String>,
    pub le: LeSpec,
    pub tensor: Vec<[String; 3]>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum QuantaleRef {
    Path(String),
    Inline(QuantaleDoc),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct QSetDoc {
    /// Optional only when the consumer supplies the quantale out of band, as
    /// the CLI subcommands do.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quantale: Option<QuantaleRef>,
    pub carrier: Vec<String>,
    pub delta: Vec<[String; 3]>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub kind: String,
    pub dom: String,
    pub cod: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map: Option<Vec<[String; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<[String; 3]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, FormatError> {
    let text = fs::read_to_string(path).map_err(|source| FormatError::Read {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| FormatError::Json {
        path: path.display().to_string(),
        source,
    })
}

pub fn quantale_from_doc(doc: &QuantaleDoc, path: &str) -> Result<Arc<Quantale>, FormatError> {
    let n = doc.elements.len();
    let index = |name: &str| -> Result<usize, FormatError> {
        doc.elements
            .iter()
            .position(|e| e == name)
            .ok_or_else(|| FormatError::schema(path, format!("unknown element name {name:?}")))
    };
    let le = match &doc.le {
        LeSpec::Pairs(pairs) => {
            let mut idx_pairs = Vec::with_capacity(pairs.len());
            for [a, b] in pairs {
                idx_pairs.push((index(a)?, index(b)?));
            }
            close_order(n, &idx_pairs)
        }
        LeSpec::Matrix(rows) => {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(FormatError::schema(path, "le matrix must be n×n"));
            }
            rows.iter().flatten().copied().collect()
        }
    };
    let mut tensor = vec![usize::MAX; n * n];
    for [a, b, c] in &doc.tensor {
        let (i, j, k) = (index(a)?, index(b)?, index(c)?);
        if tensor[i * n + j] != usize::MAX && tensor[i * n + j] != k {
            return Err(FormatError::schema(
                path,
                format!("conflicting tensor entries for ({a}, {b})"),
            ));
        }
        tensor[i * n + j] = k;
    }
    if let Some(flat) = tensor.iter().position(|&v| v == usize::MAX) {
        return Err(FormatError::schema(
            path,
            format!(
                "tensor table is partial: missing ({}, {})",
                doc.elements[flat / n],
                doc.elements[flat % n]
            ),
        ));
    }
    Quantale::new(doc.elements.clone(), le, tensor)
        .map(Arc::new)
        .map_err(|e| FormatError::invalid(path, e))
}

pub fn load_quantale(path: &Path) -> Result<Arc<Quantale>, FormatError> {
    let doc: QuantaleDoc = read_json(path)?;
    quantale_from_doc(&doc, &path.display().to_string())
}

pub fn qset_from_doc(
    doc: &QSetDoc,
    path: &str,
    base: Option<&Path>,
    provided: Option<&Arc<Quantale>>,
) -> Result<Arc<QSet>, FormatError> {
    let declared = match &doc.quantale {
        Some(QuantaleRef::Inline(qdoc)) => Some(quantale_from_doc(qdoc, path)?),
        Some(QuantaleRef::Path(rel)) => {
            let resolved: PathBuf = match base {
                Some(dir) => dir.join(rel),
                None => PathBuf::from(rel),
            };
            Some(load_quantale(&resolved)?)
        }
        None => None,
    };
    let quantale = match (provided, declared) {
        (Some(given), Some(declared)) => {
            if **given != *declared {
                return Err(FormatError::schema(
                    path,
                    "declared quantale disagrees with the provided one",
                ));
            }
            given.clone()
        }
        (Some(given), None) => given.clone(),
        (None, Some(declared)) => declared,
        (None, None) => {
            return Err(FormatError::schema(
                path,
                "no quantale declared and none provided",
            ))
        }
    };
    let k = doc.carrier.len();
    let index = |name: &str| -> Result<usize, FormatError> {
        doc.carrier
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| FormatError::schema(path, format!("unknown carrier name {name:?}")))
    };
    let mut delta = vec![usize::MAX; k * k];
    for [x, y, e] in &doc.delta {
        let (i, j) = (index(x)?, index(y)?);
        let v = quantale
            .index_of(e)
            .ok_or_else(|| FormatError::schema(path, format!("unknown element name {e:?}")))?;
        for cell in [i * k + j, j * k + i] {
            if delta[cell] != usize::MAX && delta[cell] != v {
                return Err(FormatError::schema(
                    path,
                    format!("conflicting delta entries for ({x}, {y})"),
                ));
            }
            delta[cell] = v;
        }
    }
    if let Some(flat) = delta.iter().position(|&v| v == usize::MAX) {
        return Err(FormatError::schema(
            path,
            format!(
                "delta table is partial: missing ({}, {})",
                doc.carrier[flat / k],
                doc.carrier[flat % k]
            ),
        ));
    }
    QSet::new(quantale, doc.carrier.clone(), delta)
        .map(Arc::new)
        .map_err(|e| FormatError::invalid(path, e))
}

pub fn load_qset(path: &Path) -> Result<Arc<QSet>, FormatError> {
    let doc: QSetDoc = read_json(path)?;
    qset_from_doc(&doc, &path.display().to_string(), path.parent(), None)
}

/// Loads a Q-set against a quantale supplied by the caller; any quantale the
/// document declares must agree with it.
pub fn load_qset_against(path: &Path, quantale: &Arc<Quantale>) -> Result<Arc<QSet>, FormatError> {
    let doc: QSetDoc = read_json(path)?;
    qset_from_doc(
        &doc,
        &path.display().to_string(),
        path.parent(),
        Some(quantale),
    )
}

pub fn quantale_to_doc(q: &Quantale) -> QuantaleDoc {
    let n = q.len();
    let le = LeSpec::Matrix(
        (0..n)
            .map(|i| (0..n).map(|j| q.is_le(i, j)).collect())
            .collect(),
    );
    let mut tensor = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            tensor.push([
                q.name(i).to_string(),
                q.name(j).to_string(),
                q.name(q.tensor(i, j)).to_string(),
            ]);
        }
    }
    QuantaleDoc {
        elements: q.names().to_vec(),
        le,
        tensor,
    }
}

/// Canonical serialization: inline quantale, upper-triangular delta triples
/// in carrier order.
pub fn qset_to_doc(x: &QSet) -> QSetDoc {
    let q = x.quantale();
    let mut delta = Vec::new();
    for i in 0..x.len() {
        for j in i..x.len() {
            delta.push([
                x.name(i).to_string(),
                x.name(j).to_string(),
                q.name(x.delta(i, j)).to_string(),
            ]);
        }
    }
    QSetDoc {
        quantale: Some(QuantaleRef::Inline(quantale_to_doc(q))),
        carrier: x.carrier().to_vec(),
        delta,
    }
}

pub fn to_json_string<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(doc: &T, path: &Path) -> Result<(), FormatError> {
    fs::write(path, to_json_string(doc)).map_err(|source| FormatError::Read {
        path: path.display().to_string(),
        source,
    })
}

/// A parsed morphism document together with its endpoints.
pub enum LoadedMorphism {
    Functional(FunctionalMorphism),
    Relational(RelationalMorphism),
    E(EMorphism),
}

pub fn load_morphism(path: &Path) -> Result<LoadedMorphism, FormatError> {
    let doc: MorphismDoc = read_json(path)?;
    let label = path.display().to_string();
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let dom = load_qset(&base.join(&doc.dom))?;
    let cod = load_qset(&base.join(&doc.cod))?;
    let point = |x: &Arc<QSet>, name: &str| -> Result<usize, FormatError> {
        x.index_of(name)
            .ok_or_else(|| FormatError::schema(&label, format!("unknown carrier name {name:?}")))
    };
    let build_map = |map: &Vec<[String; 2]>| -> Result<Vec<usize>, FormatError> {
        let mut out = vec![usize::MAX; dom.len()];
        for [x, y] in map {
            let i = point(&dom, x)?;
            let j = point(&cod, y)?;
            if out[i] != usize::MAX && out[i] != j {
                return Err(FormatError::schema(
                    &label,
                    format!("conflicting map entries for {x}"),
                ));
            }
            out[i] = j;
        }
        if out.contains(&usize::MAX) {
            return Err(FormatError::schema(&label, "map is partial"));
        }
        Ok(out)
    };
    match doc.kind.as_str() {
        "functional" => {
            let map = doc
                .map
                .as_ref()
                .ok_or_else(|| FormatError::schema(&label, "functional morphism needs a map"))?;
            FunctionalMorphism::new(dom.clone(), cod.clone(), build_map(map)?)
                .map(LoadedMorphism::Functional)
                .map_err(|e| FormatError::invalid(&label, e))
        }
        "e" => {
            let map = doc
                .map
                .as_ref()
                .ok_or_else(|| FormatError::schema(&label, "e-morphism needs a map"))?;
            let e_name = doc
                .error
                .as_ref()
                .ok_or_else(|| FormatError::schema(&label, "e-morphism needs an error element"))?;
            let e = dom.quantale().index_of(e_name).ok_or_else(|| {
                FormatError::schema(&label, format!("unknown element {e_name:?}"))
            })?;
            EMorphism::new(dom.clone(), cod.clone(), build_map(map)?, e)
                .map(LoadedMorphism::E)
                .map_err(|e| FormatError::invalid(&label, e))
        }
        "relational" => {
            let triples = doc
                .table
                .as_ref()
                .ok_or_else(|| FormatError::schema(&label, "relational morphism needs a table"))?;
            let mut table = vec![usize::MAX; dom.len() * cod.len()];
            for [x, y, e] in triples {
                let i = point(&dom, x)?;
                let j = point(&cod, y)?;
                let v = dom
                    .quantale()
                    .index_of(e)
                    .ok_or_else(|| FormatError::schema(&label, format!("unknown element {e:?}")))?;
                let cell = i * cod.len() + j;
                if table[cell] != usize::MAX && table[cell] != v {
                    return Err(FormatError::schema(
                        &label,
                        format!("conflicting table entries for ({x}, {y})"),
                    ));
                }
                table[cell] = v;
            }
            if table.contains(&usize::MAX) {
                return Err(FormatError::schema(&label, "table is partial"));
            }
            RelationalMorphism::new(dom.clone(), cod.clone(), table)
                .map(LoadedMorphism::Relational)
                .map_err(|e| FormatError::invalid(&label, e))
        }
        other => Err(FormatError::schema(
            &label,
            format!("unknown morphism kind {other:?}"),
        )),
    }
}

pub fn functional_to_doc(f: &FunctionalMorphism, dom: &str, cod: &str) -> MorphismDoc {
    MorphismDoc {
        kind: "functional".to_string(),
        dom: dom.to_string(),
        cod: cod.to_string(),
        map: Some(
            (0..f.dom().len())
                .map(|x| {
                    [
                        f.dom().name(x).to_string(),
                        f.cod().name(f.apply(x)).to_string(),
                    ]
                })
                .collect(),
        ),
        table: None,
        error: None,
    }
}

pub fn relational_to_doc(phi: &RelationalMorphism, dom: &str, cod: &str) -> MorphismDoc {
    let mut table = Vec::new();
    for x in 0..phi.dom().len() {
        for y in 0..phi.cod().len() {
            table.push([
                phi.dom().name(x).to_string(),
                phi.cod().name(y).to_string(),
                phi.dom().quantale().name(phi.at(x, y)).to_string(),
            ]);
        }
    }
    MorphismDoc {
        kind: "relational".to_string(),
        dom: dom.to_string(),
        cod: cod.to_string(),
        map: None,
        table: Some(table),
        error: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b4_doc() -> QuantaleDoc {
        quantale_to_doc(&qset_core::fixtures::b4())
    }

    #[test]
    fn quantale_parser_rejects_unknown_names() {
        let mut doc = b4_doc();
        doc.tensor[0] = ["bot".into(), "bot".into(), "zap".into()];
        let err = quantale_from_doc(&doc, "mem").unwrap_err();
        assert!(matches!(err, FormatError::Schema { .. }), "{err}");
    }

    #[test]
    fn quantale_parser_rejects_partial_tensor_tables() {
        let mut doc = b4_doc();
        doc.tensor.pop();
        let err = quantale_from_doc(&doc, "mem").unwrap_err();
        assert!(matches!(err, FormatError::Schema { .. }), "{err}");
    }

    #[test]
    fn quantale_parser_rejects_conflicting_tensor_triples() {
        let mut doc = b4_doc();
        doc.tensor.push(["bot".into(), "bot".into(), "top".into()]);
        let err = quantale_from_doc(&doc, "mem").unwrap_err();
        assert!(matches!(err, FormatError::Schema { .. }), "{err}");
    }

    #[test]
    fn quantale_order_pairs_close_transitively() {
        let names = ["bot", "mid", "top"];
        let doc = QuantaleDoc {
            elements: names.iter().map(|s| s.to_string()).collect(),
            le: LeSpec::Pairs(vec![
                ["bot".into(), "mid".into()],
                ["mid".into(), "top".into()],
            ]),
            tensor: (0..3)
                .flat_map(|i: usize| {
                    (0..3).map(move |j: usize| {
                        [
                            names[i].to_string(),
                            names[j].to_string(),
                            names[i.min(j)].to_string(),
                        ]
                    })
                })
                .collect(),
        };
        let q = quantale_from_doc(&doc, "mem").unwrap();
        assert!(q.is_le(0, 2));
        assert_eq!(*q, *qset_core::fixtures::chain3());
    }
}
