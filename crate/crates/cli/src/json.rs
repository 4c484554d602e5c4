//! JSON encodings. Integers are exact JSON numbers of any size; rationals are
//! `[numerator, denominator]` pairs.

use enriques_core::{BigInt, BigRational, DivClass, LatticeProfile};
use serde_json::{json, Number, Value};

pub fn int(n: &BigInt) -> Value {
    Value::Number(n.to_string().parse::<Number>().expect("integers are valid JSON numbers"))
}

pub fn ratio(q: &BigRational) -> Value {
    Value::Array(vec![int(q.numer()), int(q.denom())])
}

pub fn class(d: &DivClass) -> Value {
    Value::Array(d.coords().iter().map(ratio).collect())
}

pub fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

/// `{name: coefficient}` in curve order, skipping zeros.
pub fn named_ints(names: &[String], v: &[BigInt]) -> Value {
    let map = names
        .iter()
        .zip(v)
        .filter(|(_, c)| c != &&BigInt::from(0))
        .map(|(n, c)| (n.clone(), int(c)))
        .collect::<serde_json::Map<_, _>>();
    Value::Object(map)
}

pub fn profile(p: &LatticeProfile) -> Value {
    json!({
        "rank": p.rank,
        "determinant": int(&p.determinant),
        "signature": [p.signature.positive, p.signature.zero, p.signature.negative],
        "even": p.is_even,
    })
}

pub fn parse_int(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.to_string().parse().ok(),
        _ => None,
    }
}

pub fn parse_ratio(v: &Value) -> Option<BigRational> {
    let pair = v.as_array()?;
    if pair.len() != 2 {
        return None;
    }
    let den = parse_int(&pair[1])?;
    if den == BigInt::from(0) {
        return None;
    }
    Some(BigRational::new(parse_int(&pair[0])?, den))
}

pub fn parse_class(v: &Value) -> Option<DivClass> {
    v.as_array()?.iter().map(parse_ratio).collect::<Option<Vec<_>>>().map(DivClass::new)
}

/// Compact single-line rendering for text reports: pairs print as `n/d`.
pub fn render(v: &Value) -> String {
    match v {
        Value::Array(items) if items.len() == 2 && items.iter().all(Value::is_number) => {
            match (parse_int(&items[0]), parse_int(&items[1])) {
                (Some(n), Some(d)) if d == BigInt::from(1) => n.to_string(),
                (Some(n), Some(d)) if d > BigInt::from(1) => format!("{n}/{d}"),
                _ => v.to_string(),
            }
        }
        Value::Array(items) => format!("[{}]", items.iter().map(render).collect::<Vec<_>>().join(", ")),
        Value::Object(map) => {
            format!("{{{}}}", map.iter().map(|(k, v)| format!("{k}: {}", render(v))).collect::<Vec<_>>().join(", "))
        }
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_values_round_trip() {
        let big: BigInt = "123456789012345678901234567891".parse().unwrap();
        let q = BigRational::new(big.clone(), BigInt::from(1024));
        let text = serde_json::to_string(&ratio(&q)).unwrap();
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parse_ratio(&back), Some(q));
        assert_eq!(text, format!("[{big},1024]"));
    }
}
