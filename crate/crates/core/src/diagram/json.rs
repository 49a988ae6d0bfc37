use serde_json::{json, Map, Value};

use super::{Diagram, Slice};
use crate::error::{Error, Result};
use crate::scalars::{ExactScalar, ScalarDoc};

fn perr(position: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        position: position.into(),
        message: message.into(),
    }
}

/// Parses a JSON diagram document.
pub fn parse(text: &str) -> Result<Diagram> {
    let v: Value = serde_json::from_str(text).map_err(|e| {
        perr(
            format!("line {}, column {}", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    parse_value(&v)
}

fn get_uint(obj: &Map<String, Value>, key: &str, at: &str) -> Result<Option<u64>> {
    match obj.get(key) {
        None => Ok(None),
        Some(v) => v
            .as_u64()
            .map(Some)
            .ok_or_else(|| perr(at, format!("'{key}' must be a nonnegative integer"))),
    }
}

fn need_uint(obj: &Map<String, Value>, key: &str, at: &str) -> Result<u64> {
    get_uint(obj, key, at)?.ok_or_else(|| perr(at, format!("missing '{key}'")))
}

/// Charges in `-d..=d` are accepted and reduced mod d.
fn charge(obj: &Map<String, Value>, d: u32, at: &str) -> Result<u32> {
    match obj.get("charge") {
        None => Ok(0),
        Some(v) => {
            let c = v
                .as_i64()
                .ok_or_else(|| perr(at, "'charge' must be an integer"))?;
            if c.unsigned_abs() > d as u64 {
                return Err(perr(at, format!("charge {c} out of range for d={d}")));
            }
            Ok(c.rem_euclid(d as i64) as u32)
        }
    }
}

pub fn parse_value(v: &Value) -> Result<Diagram> {
    let top = v
        .as_object()
        .ok_or_else(|| perr("document", "expected an object"))?;
    for key in top.keys() {
        if !matches!(key.as_str(), "d" | "wires" | "prefactor" | "slices") {
            return Err(perr("document", format!("unknown key '{key}'")));
        }
    }
    let d = need_uint(top, "d", "document")? as u32;
    if d < 2 {
        return Err(perr("document.d", format!("order {d} is below 2")));
    }
    let wires = need_uint(top, "wires", "document")? as usize;
    let prefactor = match top.get("prefactor") {
        None => ExactScalar::one(d),
        Some(p) => serde_json::from_value::<ScalarDoc>(p.clone())
            .map_err(|e| perr("document.prefactor", e.to_string()))?
            .to_scalar(d),
    };
    let raw = top
        .get("slices")
        .and_then(Value::as_array)
        .ok_or_else(|| perr("document", "missing 'slices' array"))?;
    let mut slices = Vec::with_capacity(raw.len());
    for (i, s) in raw.iter().enumerate() {
        let at = format!("slices[{i}]");
        let obj = s
            .as_object()
            .ok_or_else(|| perr(&at, "slice must be an object"))?;
        let kind = obj
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| perr(&at, "missing 'kind'"))?;
        let pos = || -> Result<usize> { Ok(need_uint(obj, "pos", &at)? as usize) };
        let slice = match kind {
            "label" => Slice::Label {
                pos: pos()?,
                charge: charge(obj, d, &at)?,
            },
            "crossing" => {
                let sign = obj.get("sign").and_then(Value::as_i64).unwrap_or(1);
                if sign != 1 && sign != -1 {
                    return Err(perr(&at, format!("sign {sign} must be 1 or -1")));
                }
                Slice::Crossing {
                    pos: pos()?,
                    sign: sign as i8,
                }
            }
            "cap" => Slice::Cap {
                pos: pos()?,
                charge: charge(obj, d, &at)?,
            },
            "cup" => Slice::Cup {
                pos: pos()?,
                charge: charge(obj, d, &at)?,
            },
            "box" => Slice::Box {
                name: obj
                    .get("name")
                    .and_then(Value::as_str)
                    .ok_or_else(|| perr(&at, "box needs a 'name'"))?
                    .to_string(),
                pos: pos()?,
                span: get_uint(obj, "span", &at)?.unwrap_or(1) as usize,
            },
            "meter" | "closure" => {
                let positions = obj
                    .get("positions")
                    .and_then(Value::as_array)
                    .ok_or_else(|| perr(&at, "missing 'positions'"))?
                    .iter()
                    .map(|p| p.as_u64().map(|x| x as usize))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| perr(&at, "positions must be nonnegative integers"))?;
                if kind == "meter" {
                    Slice::Meter { positions }
                } else {
                    Slice::Closure { positions }
                }
            }
            other => return Err(perr(&at, format!("unknown slice kind '{other}'"))),
        };
        slices.push(slice);
    }
    let dg = Diagram {
        d,
        wires_in: wires,
        prefactor,
        slices,
    };
    dg.validate()?;
    Ok(dg)
}

/// Canonical document: sorted keys, reduced charges, prefactor omitted when it is 1.
pub fn serialize_value(dg: &Diagram) -> Value {
    let slices: Vec<Value> = dg
        .slices
        .iter()
        .map(|s| match s {
            Slice::Label { pos, charge } => json!({"kind": "label", "pos": pos, "charge": charge}),
            Slice::Crossing { pos, sign } => json!({"kind": "crossing", "pos": pos, "sign": sign}),
            Slice::Cap { pos, charge } => json!({"kind": "cap", "pos": pos, "charge": charge}),
            Slice::Cup { pos, charge } => json!({"kind": "cup", "pos": pos, "charge": charge}),
            Slice::Box { name, pos, span } => {
                json!({"kind": "box", "name": name, "pos": pos, "span": span})
            }
            Slice::Meter { positions } => json!({"kind": "meter", "positions": positions}),
            Slice::Closure { positions } => json!({"kind": "closure", "positions": positions}),
        })
        .collect();
    let mut top = json!({"d": dg.d, "wires": dg.wires_in, "slices": slices});
    if !dg.prefactor.is_one() {
        top["prefactor"] = serde_json::to_value(ScalarDoc::from(&dg.prefactor)).expect("scalar");
    }
    top
}

pub fn serialize(dg: &Diagram) -> String {
    serde_json::to_string(&serialize_value(dg)).expect("diagram serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let dg =
            parse(r#"{"d":2,"wires":2,"slices":[{"kind":"crossing","pos":1,"sign":1}]}"#).unwrap();
        assert_eq!(dg.slices, vec![Slice::Crossing { pos: 1, sign: 1 }]);
        let dg =
            parse(r#"{"d":3,"wires":1,"slices":[{"kind":"label","pos":1,"charge":3}]}"#).unwrap();
        assert_eq!(dg.slices, vec![Slice::Label { pos: 1, charge: 0 }]);
        let err = parse(
            r#"{"d":2,"wires":2,"slices":[{"kind":"label","pos":1},{"kind":"cup","pos":2}]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Arity { slice: 1, .. }), "{err:?}");
        let err = parse(r#"{"d":2,"wires":1,"slices":[{"kind":"twirl","pos":1}]}"#).unwrap_err();
        assert!(err.to_string().contains("slices[0]"));
        let err = parse(r#"{"d":3,"wires":1,"slices":[{"kind":"label","pos":1,"charge":7}]}"#)
            .unwrap_err();
        assert!(err.to_string().contains("out of range"));
        let err = parse("{\"d\":2,\n\"wires\":}").unwrap_err();
        assert!(err.to_string().contains("line 2"));
    }

    #[test]
    fn canonical_round_trip() {
        let text = r#"{"d":3,"prefactor":{"coeff":[0.5,-1.0],"delta_exp":-2,"zeta_exp":4},"slices":[{"charge":2,"kind":"cap","pos":1},{"kind":"crossing","pos":2,"sign":-1},{"kind":"meter","positions":[1,3]}],"wires":1}"#;
        let dg = parse(text).unwrap();
        assert_eq!(serialize(&dg), text);
        assert_eq!(parse(&serialize(&dg)).unwrap(), dg);
    }
}
