//! JSON encodings of series, tensors and rationals used by the command output.

use mihopf::combo::{Combo, Q};
use mihopf::envelope::EnvIndex;
use mihopf::index::MultiIndex;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

/// An integer as a JSON number when it fits in `i64`, as a decimal string otherwise.
fn integer(n: &num_bigint::BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

/// `{num, den}` fields of a rational.
fn fraction(c: &Q) -> (Value, Value) {
    (integer(&c.numer()), integer(&c.denom()))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

/// A series as `[{index, num, den}]` in key order.
pub fn series(s: &Combo<MultiIndex>) -> Value {
    Value::Array(
        s.iter()
            .map(|(m, c)| {
                let (num, den) = fraction(c);
                json!({"index": to_value(m), "num": num, "den": den})
            })
            .collect(),
    )
}

/// An element of `T⁺` as `[{index, num, den}]` with envelope indices.
pub fn plus(s: &Combo<EnvIndex>) -> Value {
    Value::Array(
        s.iter()
            .map(|(m, c)| {
                let (num, den) = fraction(c);
                json!({"index": to_value(m), "num": num, "den": den})
            })
            .collect(),
    )
}

/// A tensor as `[{left, right, num, den}]` in key order.
pub fn tensor<A: Serialize + Ord + Clone, B: Serialize + Ord + Clone>(t: &Combo<(A, B)>) -> Value {
    Value::Array(
        t.iter()
            .map(|((a, b), c)| {
                let (num, den) = fraction(c);
                json!({"left": to_value(a), "right": to_value(b), "num": num, "den": den})
            })
            .collect(),
    )
}

/// Pretty, key-sorted rendering with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use mihopf::combo::qr;
    use mihopf::index::ek;

    #[test]
    fn series_encoding() {
        let s = Combo::term(ek(1), qr(-3, 4));
        assert_eq!(series(&s), json!([{"index": [["k:1", 1]], "num": -3, "den": 4}]));
    }

    #[test]
    fn keys_are_sorted() {
        let v = json!({"b": 1, "a": 2});
        assert_eq!(render(&v), "{\n  \"a\": 2,\n  \"b\": 1\n}\n");
    }
}
