//! JSON documents for distributions, networks and auxiliary maps.
//!
//! Labels may be given as JSON strings or numbers; numbers are kept in
//! their JSON spelling (`1` becomes `"1"`). Probabilities may be numbers,
//! decimal strings, or fractions such as `"1/8"`.

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::dist::{DiscreteDistribution, RandomVectorDistribution};
use crate::error::{Error, Result};
use crate::netcode::{AuxSpec, NetworkSpec};

/// A distribution as read from a document.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadedDistribution {
    pub dist: RandomVectorDistribution,
    /// Whether the support entries were bare labels rather than tuples.
    pub scalar: bool,
    /// Coordinate names; default `X` for scalars and `X1..Xm` for tuples.
    pub coords: Vec<String>,
}

impl LoadedDistribution {
    /// The distribution over whole support entries, labelled as in the
    /// document for scalar input and as `(a,b)` for tuples.
    pub fn joint(&self) -> &DiscreteDistribution {
        self.dist.joint()
    }
}

#[derive(Deserialize, Serialize)]
struct DistributionDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    arity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coords: Option<Vec<Value>>,
    support: Vec<Value>,
    probs: Vec<Value>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// A string or number as a label.
pub fn label(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(bad(format!("label must be a string or number, got {other}"))),
    }
}

/// A probability given as a number, a decimal string or a fraction `p/q`.
pub fn probability(v: &Value) -> Result<f64> {
    let parse = |s: &str| -> Result<f64> {
        s.trim().parse::<f64>().map_err(|_| bad(format!("malformed probability {s:?}")))
    };
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| bad(format!("probability {n} out of range"))),
        Value::String(s) => match s.split_once('/') {
            Some((p, q)) => {
                let q = parse(q)?;
                if q == 0.0 {
                    return Err(bad(format!("zero denominator in {s:?}")));
                }
                Ok(parse(p)? / q)
            }
            None => parse(s),
        },
        other => Err(bad(format!("probability must be a number or string, got {other}"))),
    }
}

pub fn parse_distribution(text: &str) -> Result<LoadedDistribution> {
    let doc: DistributionDoc = serde_json::from_str(text)?;
    let probs: Vec<f64> = doc.probs.iter().map(probability).collect::<Result<_>>()?;
    let tuple_input = doc.support.first().is_some_and(Value::is_array);
    let tuples: Vec<Vec<String>> = doc
        .support
        .iter()
        .map(|entry| match entry {
            Value::Array(parts) if tuple_input => parts.iter().map(label).collect(),
            _ if !tuple_input => Ok(vec![label(entry)?]),
            _ => Err(bad("support mixes tuples and bare labels")),
        })
        .collect::<Result<_>>()?;
    let arity = tuples.first().map_or(0, Vec::len);
    if let Some(a) = doc.arity {
        if a != arity {
            return Err(bad(format!("declared arity {a} but support tuples have {arity} entries")));
        }
    }
    let dist = if tuple_input {
        RandomVectorDistribution::new(tuples, probs)?
    } else {
        let labels = tuples.into_iter().map(|mut t| t.remove(0)).collect();
        RandomVectorDistribution::from_scalar(&DiscreteDistribution::new(labels, probs)?)
    };
    let coords = match doc.coords {
        Some(c) => {
            let c: Vec<String> = c.iter().map(label).collect::<Result<_>>()?;
            if c.len() != dist.arity() {
                return Err(bad(format!("{} coordinate names for arity {}", c.len(), dist.arity())));
            }
            c
        }
        None if !tuple_input => vec!["X".to_string()],
        None => (1..=dist.arity()).map(|i| format!("X{i}")).collect(),
    };
    Ok(LoadedDistribution {
        dist,
        scalar: !tuple_input,
        coords,
    })
}

/// Document form of a distribution; scalar distributions use bare labels.
pub fn distribution_to_json(d: &LoadedDistribution) -> Value {
    let support: Vec<Value> = (0..d.dist.len())
        .map(|i| {
            let t = d.dist.tuple(i);
            if d.scalar {
                json!(t[0])
            } else {
                json!(t)
            }
        })
        .collect();
    let mut doc = Map::new();
    if !d.scalar {
        doc.insert("arity".into(), json!(d.dist.arity()));
        doc.insert("coords".into(), json!(d.coords));
    }
    doc.insert("support".into(), Value::Array(support));
    doc.insert("probs".into(), json!(d.dist.probs()));
    Value::Object(doc)
}

fn labels_in_place(v: &mut Value) -> Result<()> {
    if let Value::Number(n) = v {
        *v = Value::String(n.to_string());
    } else if !v.is_string() {
        return Err(bad(format!("label must be a string or number, got {v}")));
    }
    Ok(())
}

fn array_labels(obj: &mut Value, key: &str) -> Result<()> {
    if let Some(Value::Array(items)) = obj.get_mut(key) {
        for it in items {
            labels_in_place(it)?;
        }
    }
    Ok(())
}

pub fn parse_network(text: &str) -> Result<NetworkSpec> {
    let mut v: Value = serde_json::from_str(text)?;
    array_labels(&mut v, "nodes")?;
    for key in ["edges", "sources"] {
        if let Some(Value::Array(items)) = v.get_mut(key) {
            for it in items {
                for field in ["id", "tail", "head"] {
                    if let Some(f) = it.get_mut(field) {
                        labels_in_place(f)?;
                    }
                }
                array_labels(it, "placed")?;
                array_labels(it, "demanded")?;
            }
        }
    }
    let net: NetworkSpec = serde_json::from_value(v)?;
    net.validate()?;
    Ok(net)
}

pub fn network_to_json(net: &NetworkSpec) -> Value {
    serde_json::to_value(net).expect("network documents always serialise")
}

pub fn parse_aux(text: &str) -> Result<AuxSpec> {
    let mut v: Value = serde_json::from_str(text)?;
    if let Some(Value::Array(items)) = v.get_mut("aux") {
        for it in items {
            if let Some(id) = it.get_mut("id") {
                labels_in_place(id)?;
            }
            if let Some(Value::Object(map)) = it.get_mut("map") {
                for val in map.values_mut() {
                    labels_in_place(val)?;
                }
            }
        }
    }
    let aux: AuxSpec = serde_json::from_value(v)?;
    aux.validate()?;
    Ok(aux)
}

pub fn aux_to_json(aux: &AuxSpec) -> Value {
    serde_json::to_value(aux).expect("aux documents always serialise")
}
