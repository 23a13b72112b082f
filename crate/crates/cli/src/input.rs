//! JSON system descriptions.
//!
//! Two shapes are accepted:
//!
//! ```json
//! {"m": 3, "l": 2, "f": [1, 1], "e": [2, 1], "a": [-1, -1]}
//! {"m": 3, "l": 2, "f": 1, "a": -1, "seed": 17}
//! ```
//!
//! `f` and `a` may be scalars, broadcast to the length of `e`. Integers are
//! JSON numbers or decimal strings. A document with a `"system"` member (as
//! written by `analyze --format json`) is read through that member.

use dualradix_core::orbit::OrbitSpec;
use dualradix_core::system::{sequence_from_cycle, sequence_from_exponents};
use dualradix_core::Int;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::error::CliError;

pub const DEFAULT_BUDGET: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SystemInput {
    Exponents { m: Int, l: Int, f: Vec<u32>, e: Vec<u32>, a: Vec<Int> },
    Seed { m: Int, l: Int, f: u32, a: Int, seed: Int, budget: usize },
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

pub fn int_from_json(value: &Value, field: &str) -> Result<Int, CliError> {
    let text = match value {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.trim().to_string(),
        _ => return Err(bad(format!("`{field}` must be an integer or a decimal string"))),
    };
    text.parse().map_err(|_| bad(format!("`{field}` is not an integer: {text}")))
}

/// JSON number when it fits in 64 bits, decimal string otherwise.
pub fn int_to_json(n: &Int) -> Value {
    match n.to_i64() {
        Some(x) => json!(x),
        None => Value::String(n.to_string()),
    }
}

fn small(value: &Value, field: &str) -> Result<u32, CliError> {
    int_from_json(value, field)?
        .to_u32()
        .filter(|&x| x > 0)
        .ok_or_else(|| bad(format!("`{field}` entries must be positive 32-bit integers")))
}

fn field<'a>(obj: &'a Map<String, Value>, name: &str) -> Result<&'a Value, CliError> {
    obj.get(name).ok_or_else(|| bad(format!("missing field `{name}`")))
}

fn list<T>(value: &Value, name: &str, len: Option<usize>, parse: impl Fn(&Value) -> Result<T, CliError>) -> Result<Vec<T>, CliError>
where
    T: Clone,
{
    match (value, len) {
        (Value::Array(items), _) => {
            let parsed = items.iter().map(&parse).collect::<Result<Vec<_>, _>>()?;
            if let Some(n) = len {
                if parsed.len() != n {
                    return Err(bad(format!("`{name}` must have {n} entries")));
                }
            }
            Ok(parsed)
        }
        (scalar, Some(n)) => Ok(vec![parse(scalar)?; n]),
        (_, None) => Err(bad(format!("`{name}` must be an array"))),
    }
}

pub fn parse_system(text: &str) -> Result<SystemInput, CliError> {
    let root: Value = serde_json::from_str(text).map_err(|e| bad(format!("malformed JSON: {e}")))?;
    let obj = match root.get("system") {
        Some(inner) => inner,
        None => &root,
    };
    let obj = obj.as_object().ok_or_else(|| bad("system description must be a JSON object"))?;
    let m = int_from_json(field(obj, "m")?, "m")?;
    let l = int_from_json(field(obj, "l")?, "l")?;
    if let Some(seed) = obj.get("seed") {
        let seed = int_from_json(seed, "seed")?;
        let f = small(field(obj, "f")?, "f")?;
        let a = int_from_json(field(obj, "a")?, "a")?;
        let budget = match obj.get("budget") {
            Some(b) => int_from_json(b, "budget")?.to_usize().ok_or_else(|| bad("`budget` out of range"))?,
            None => DEFAULT_BUDGET,
        };
        return Ok(SystemInput::Seed { m, l, f, a, seed, budget });
    }
    let e = list(field(obj, "e")?, "e", None, |v| small(v, "e"))?;
    let f = list(field(obj, "f")?, "f", Some(e.len()), |v| small(v, "f"))?;
    let a = list(field(obj, "a")?, "a", Some(e.len()), |v| int_from_json(v, "a"))?;
    Ok(SystemInput::Exponents { m, l, f, e, a })
}

/// The orbit described by the input; seeded inputs are checked against the
/// iterates found by forward iteration.
pub fn resolve(input: &SystemInput) -> Result<OrbitSpec, CliError> {
    match input {
        SystemInput::Exponents { m, l, f, e, a } => Ok(OrbitSpec::new(sequence_from_exponents(m, l, f, e, a)?)?),
        SystemInput::Seed { m, l, f, a, seed, budget } => {
            let ingest = sequence_from_cycle(m, l, *f, a, seed, *budget)?;
            let spec = OrbitSpec::new(ingest.sequence)?.with_observed(ingest.iterates)?;
            spec.verify_cycle_consistency().map_err(|m| CliError::Invariant(m.to_string()))?;
            Ok(spec)
        }
    }
}

/// Exponent-form description of an orbit; parsing it yields the same orbit.
pub fn system_to_json(spec: &OrbitSpec) -> Value {
    let seq = spec.sequence();
    json!({
        "m": int_to_json(seq.m()),
        "l": int_to_json(seq.l()),
        "f": seq.f_seq(),
        "e": seq.e_seq(),
        "a": seq.a_seq().iter().map(int_to_json).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i(x: i64) -> Int {
        Int::from(x)
    }

    #[test]
    fn exponent_form() {
        let input = parse_system(r#"{"m":3,"l":2,"f":[1,1],"e":[2,1],"a":["-1",-1]}"#).unwrap();
        assert_eq!(input, SystemInput::Exponents { m: i(3), l: i(2), f: vec![1, 1], e: vec![2, 1], a: vec![i(-1), i(-1)] });
        let spec = resolve(&input).unwrap();
        assert_eq!(spec.iterate_value(0), dualradix_core::Rational::from_integer(i(5)));
    }

    #[test]
    fn scalars_broadcast() {
        let input = parse_system(r#"{"m":3,"l":2,"f":1,"e":[4,1,1,2,1,1,1],"a":-1}"#).unwrap();
        let SystemInput::Exponents { f, a, .. } = input else { panic!() };
        assert_eq!(f, vec![1; 7]);
        assert_eq!(a, vec![i(-1); 7]);
    }

    #[test]
    fn seed_form_and_round_trip() {
        let input = parse_system(r#"{"m":3,"l":2,"f":1,"a":-1,"seed":17}"#).unwrap();
        let spec = resolve(&input).unwrap();
        assert_eq!(spec.sequence().e_seq(), vec![4, 1, 1, 2, 1, 1, 1]);
        let text = system_to_json(&spec).to_string();
        let again = resolve(&parse_system(&text).unwrap()).unwrap();
        assert_eq!(again.sequence(), spec.sequence());
        let wrapped = format!(r#"{{"system":{text},"other":1}}"#);
        assert_eq!(resolve(&parse_system(&wrapped).unwrap()).unwrap().sequence(), spec.sequence());
    }

    #[test]
    fn big_integers() {
        let big = "123456789012345678901234567890";
        let v: Value = serde_json::from_str(big).unwrap();
        assert_eq!(int_from_json(&v, "x").unwrap().to_string(), big);
        assert_eq!(int_to_json(&big.parse().unwrap()), Value::String(big.into()));
        assert_eq!(int_to_json(&i(-7)), json!(-7));
    }

    #[test]
    fn malformed_inputs() {
        for text in [
            "{",
            "[]",
            r#"{"m":3,"l":2,"f":[1],"e":[1,2],"a":[1,1]}"#,
            r#"{"m":3,"l":2,"f":1,"e":[0],"a":1}"#,
            r#"{"m":3,"l":2,"f":1,"e":[1],"a":1.5}"#,
            r#"{"m":3,"f":1,"e":[1],"a":1}"#,
        ] {
            assert!(matches!(parse_system(text), Err(CliError::Input(_))), "{text}");
        }
    }
}
