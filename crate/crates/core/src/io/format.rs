//! JSON instance and result files.
//!
//! Costs and payments are exact: integers are written as JSON numbers and
//! everything else as `"num/den"` strings. Output is pretty-printed with
//! sorted keys and a trailing newline, so a canonical file survives a
//! parse/serialize round trip byte for byte.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::certify::FairnessReport;
use crate::error::{Error, Result};
use crate::model::{Allocation, Instance, PaymentVector};
use crate::rational::{self, Rational};

pub const INSTANCE_KIND: &str = "chores";

pub fn parse_instance(bytes: &[u8]) -> Result<Instance> {
    let root = parse_json(bytes)?;
    let obj = root
        .as_object()
        .ok_or_else(|| Error::parse("$", "instance file must be a JSON object"))?;
    if let Some(kind) = obj.get("kind") {
        if kind.as_str() != Some(INSTANCE_KIND) {
            return Err(Error::parse("kind", format!("expected \"{INSTANCE_KIND}\", found {kind}")));
        }
    }
    let rows = obj
        .get("disutility")
        .ok_or_else(|| Error::parse("disutility", "missing field"))?
        .as_array()
        .ok_or_else(|| Error::parse("disutility", "expected an array of rows"))?;
    let mut matrix = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::parse(format!("disutility[{i}]"), "expected an array"))?;
        let mut parsed = Vec::with_capacity(row.len());
        for (j, entry) in row.iter().enumerate() {
            let location = format!("disutility[{i}][{j}]");
            let value = parse_value(entry, &location)?;
            if value < rational::zero() {
                return Err(Error::parse(location, "negative disutility"));
            }
            parsed.push(value);
        }
        matrix.push(parsed);
    }
    let n = matrix.len();
    let m = matrix.first().map_or(0, Vec::len);
    let agents = match obj.get("agents") {
        Some(v) => string_list(v, "agents")?,
        None => (1..=n).map(|i| format!("a{i}")).collect(),
    };
    let chores = match obj.get("chores") {
        Some(v) => string_list(v, "chores")?,
        None => (1..=m).map(|j| format!("j{j}")).collect(),
    };
    if agents.len() != n {
        return Err(Error::parse(
            "disutility",
            format!("{n} rows but {} agents declared", agents.len()),
        ));
    }
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != chores.len() {
            return Err(Error::parse(
                format!("disutility[{i}]"),
                format!("{} entries but {} chores declared", row.len(), chores.len()),
            ));
        }
    }
    Instance::new(agents, chores, matrix).map_err(|e| match e {
        Error::Input(msg) => Error::parse("$", msg),
        other => other,
    })
}

pub fn parse_instance_str(text: &str) -> Result<Instance> {
    parse_instance(text.as_bytes())
}

pub fn serialize_instance(inst: &Instance) -> String {
    let mut obj = Map::new();
    obj.insert("kind".into(), Value::from(INSTANCE_KIND));
    obj.insert("agents".into(), Value::from(inst.agent_ids().to_vec()));
    obj.insert("chores".into(), Value::from(inst.chore_ids().to_vec()));
    let rows = inst
        .matrix()
        .iter()
        .map(|row| Value::Array(row.iter().map(rational_value).collect()))
        .collect();
    obj.insert("disutility".into(), Value::Array(rows));
    to_canonical(&Value::Object(obj))
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_canonical(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    text.push('\n');
    text
}

/// Integers become numbers when they fit in i64; everything else a string.
pub fn rational_value(value: &Rational) -> Value {
    if value.is_integer() {
        if let Ok(n) = i64::try_from(value.numer()) {
            return Value::from(n);
        }
    }
    Value::from(rational::format_rational(value))
}

fn parse_value(entry: &Value, location: &str) -> Result<Rational> {
    match entry {
        Value::Number(num) => {
            if let Some(n) = num.as_i64() {
                Ok(rational::int(n))
            } else if let Some(n) = num.as_u64() {
                Ok(Rational::from_integer(n.into()))
            } else {
                Err(Error::parse(
                    location,
                    format!("{num} is not an integer; write fractions as \"num/den\""),
                ))
            }
        }
        Value::String(s) => rational::parse_rational(s)
            .ok_or_else(|| Error::parse(location, format!("malformed rational {s:?}"))),
        other => Err(Error::parse(location, format!("expected a number or \"num/den\" string, found {other}"))),
    }
}

fn string_list(value: &Value, field: &str) -> Result<Vec<String>> {
    let items = value
        .as_array()
        .ok_or_else(|| Error::parse(field, "expected an array of ids"))?;
    items
        .iter()
        .enumerate()
        .map(|(i, v)| match v {
            Value::String(s) => Ok(s.clone()),
            Value::Number(n) => Ok(n.to_string()),
            _ => Err(Error::parse(format!("{field}[{i}]"), "ids must be strings")),
        })
        .collect()
}

fn parse_json(bytes: &[u8]) -> Result<Value> {
    serde_json::from_slice(bytes)
        .map_err(|e| Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string()))
}

/// Output of `solve`: bundles, the optional equilibrium payments, checked
/// properties and the optional trace.
#[derive(Debug, Clone, Serialize)]
pub struct ResultFile {
    pub allocation: BTreeMap<String, Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub payments: Option<BTreeMap<String, Value>>,
    pub certificate: Vec<FairnessReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Value>,
}

impl ResultFile {
    pub fn new(inst: &Instance, alloc: &Allocation, payments: Option<&PaymentVector>) -> Self {
        Self {
            allocation: allocation_map(inst, alloc),
            payments: payments.map(|p| payment_map(inst, p)),
            certificate: Vec::new(),
            trace: None,
        }
    }

    pub fn to_json(&self) -> String {
        to_canonical(&serde_json::to_value(self).expect("result files serialize"))
    }
}

pub fn allocation_map(inst: &Instance, alloc: &Allocation) -> BTreeMap<String, Vec<String>> {
    inst.agents()
        .map(|i| {
            let chores = alloc.bundle(i).iter().map(|&j| inst.chore_name(j).to_string()).collect();
            (inst.agent_name(i).to_string(), chores)
        })
        .collect()
}

pub fn payment_map(inst: &Instance, pay: &PaymentVector) -> BTreeMap<String, Value> {
    inst.chores()
        .map(|j| (inst.chore_name(j).to_string(), rational_value(pay.get(j))))
        .collect()
}

/// Reads an allocation: either a bare `{agent: [chores]}` map or any object
/// with such a map under `"allocation"` (so result files work directly).
/// Every chore must be assigned exactly once.
pub fn parse_allocation(inst: &Instance, bytes: &[u8]) -> Result<Allocation> {
    let root = parse_json(bytes)?;
    let map = section(&root, "allocation")?;
    let mut alloc = Allocation::empty(inst.num_agents(), inst.num_chores());
    for (agent, chores) in map {
        let i = inst
            .agent_index(agent)
            .ok_or_else(|| Error::parse(format!("allocation.{agent}"), "unknown agent"))?;
        let chores = chores
            .as_array()
            .ok_or_else(|| Error::parse(format!("allocation.{agent}"), "expected an array of chore ids"))?;
        for (pos, chore) in chores.iter().enumerate() {
            let location = format!("allocation.{agent}[{pos}]");
            let name = chore
                .as_str()
                .ok_or_else(|| Error::parse(&location, "chore ids must be strings"))?;
            let j = inst
                .chore_index(name)
                .ok_or_else(|| Error::parse(&location, format!("unknown chore {name:?}")))?;
            if let Some(prev) = alloc.owner(j) {
                return Err(Error::parse(
                    location,
                    format!("chore {name:?} already assigned to {}", inst.agent_name(prev)),
                ));
            }
            alloc.assign(j, i);
        }
    }
    if let Some(j) = alloc.unassigned().next() {
        return Err(Error::parse("allocation", format!("chore {:?} is not assigned", inst.chore_name(j))));
    }
    Ok(alloc)
}

/// Reads payments from a bare `{chore: value}` map or a `"payments"` section.
pub fn parse_payments(inst: &Instance, bytes: &[u8]) -> Result<PaymentVector> {
    let root = parse_json(bytes)?;
    let map = section(&root, "payments")?;
    let mut values: Vec<Option<Rational>> = vec![None; inst.num_chores()];
    for (chore, value) in map {
        let location = format!("payments.{chore}");
        let j = inst
            .chore_index(chore)
            .ok_or_else(|| Error::parse(&location, "unknown chore"))?;
        let v = parse_value(value, &location)?;
        if v <= rational::zero() {
            return Err(Error::parse(location, "payments must be positive"));
        }
        values[j] = Some(v);
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(j, v)| v.ok_or_else(|| Error::parse("payments", format!("no payment for chore {:?}", inst.chore_name(j)))))
        .collect::<Result<Vec<_>>>()?;
    PaymentVector::new(values)
}

fn section<'a>(root: &'a Value, key: &str) -> Result<&'a Map<String, Value>> {
    let obj = root
        .as_object()
        .ok_or_else(|| Error::parse("$", "expected a JSON object"))?;
    match obj.get(key) {
        Some(inner) => inner
            .as_object()
            .ok_or_else(|| Error::parse(key, "expected an object")),
        None => Ok(obj),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const THM2: &str = r#"{
  "agents": ["a", "b"],
  "chores": ["j1", "j2", "j3", "j4"],
  "disutility": [[1, 1, 3, 3], [1, 1, 4, 4]],
  "kind": "chores"
}"#;

    #[test]
    fn parses_small_file() {
        let inst = parse_instance_str(THM2).unwrap();
        assert_eq!(inst.num_agents(), 2);
        assert_eq!(inst.num_chores(), 4);
        assert_eq!(inst.cost(1, 3), &rational::int(4));
    }

    #[test]
    fn rational_entries_and_round_trip() {
        let text = r#"{"kind":"chores","agents":["x"],"chores":["c","d"],"disutility":[["3/2", 2]]}"#;
        let inst = parse_instance_str(text).unwrap();
        assert_eq!(inst.cost(0, 0), &rational::ratio(3, 2));
        let canon = serialize_instance(&inst);
        assert!(canon.contains("\"3/2\""));
        assert!(canon.ends_with('\n'));
        let again = parse_instance_str(&canon).unwrap();
        assert_eq!(again, inst);
        assert_eq!(serialize_instance(&again), canon);
    }

    #[test]
    fn errors_carry_locations() {
        let err = parse_instance_str(r#"{"agents":["a","b","c"],"chores":["x","y","z"],"disutility":[[1,2,3],[1,2,3]]}"#)
            .unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "{err}");
        let err = parse_instance_str(r#"{"disutility":[[1,-2]]}"#).unwrap_err();
        assert_eq!(err, Error::parse("disutility[0][1]", "negative disutility"));
        let err = parse_instance_str(r#"{"disutility":[[1,"x/2"]]}"#).unwrap_err();
        assert!(matches!(err, Error::Parse { ref location, .. } if location == "disutility[0][1]"));
        let err = parse_instance_str(r#"{"disutility":[[1, 2.5]]}"#).unwrap_err();
        assert!(err.to_string().contains("num/den"));
        let err = parse_instance_str("{\n  \"disutility\": [1,\n}").unwrap_err();
        assert!(matches!(err, Error::Parse { ref location, .. } if location.starts_with("line 3")));
        let err = parse_instance_str(r#"{"disutility":[[1,2],[3]]}"#).unwrap_err();
        assert!(matches!(err, Error::Parse { ref location, .. } if location == "disutility[1]"));
        assert!(parse_instance_str(r#"{"kind":"goods","disutility":[[1]]}"#).is_err());
    }

    #[test]
    fn allocation_and_payment_files() {
        let inst = parse_instance_str(THM2).unwrap();
        let alloc = Allocation::from_owners(2, &[0, 1, 0, 1]).unwrap();
        let pay = PaymentVector::new(vec![rational::int(1), rational::int(1), rational::ratio(7, 2), rational::int(4)]).unwrap();
        let file = ResultFile::new(&inst, &alloc, Some(&pay)).to_json();
        assert_eq!(parse_allocation(&inst, file.as_bytes()).unwrap(), alloc);
        assert_eq!(parse_payments(&inst, file.as_bytes()).unwrap(), pay);

        let bare = r#"{"a":["j1","j2"],"b":["j3"]}"#;
        let err = parse_allocation(&inst, bare.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("\"j4\" is not assigned"));
        let dup = r#"{"a":["j1","j2","j4"],"b":["j3","j4"]}"#;
        assert!(parse_allocation(&inst, dup.as_bytes()).is_err());
        let bad = r#"{"j1":1,"j2":1,"j3":0,"j4":1}"#;
        assert!(parse_payments(&inst, bad.as_bytes()).is_err());
    }
}
