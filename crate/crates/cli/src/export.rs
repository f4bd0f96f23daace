//! JSON encoding of coefficient tables.
//!
//! Keys are `name[l][k]` for harmonic `k` of order `l`, and `name[l]` for
//! per-order constants. Exact values are `{"g", "num", "den"}` with integer
//! coefficient lists in increasing powers of `t`; numeric values are decimal
//! strings carrying the full working precision.

use isola::exactfield::{GradedScalar, ZPoly};
use isola::scalar::Scalar;
use isola::trigseries::EpsSeries;
use isola::Real;
use serde_json::{json, Map, Value};

pub trait Encode {
    fn encode(&self) -> Value;
}

fn poly(p: &ZPoly) -> Value {
    Value::Array(p.coeffs().iter().map(|c| Value::String(c.to_string())).collect())
}

impl Encode for GradedScalar {
    fn encode(&self) -> Value {
        json!({ "g": self.grade(), "num": poly(self.rat().num()), "den": poly(self.rat().den()) })
    }
}

impl Encode for Real {
    fn encode(&self) -> Value {
        Value::String(self.to_decimal_full())
    }
}

pub fn series<S: Encode + Scalar>(out: &mut Map<String, Value>, name: &str, s: &EpsSeries<S>) {
    for l in 0..=s.order() {
        for (k, c) in s.term(l).harmonics() {
            out.insert(format!("{name}[{l}][{k}]"), c.encode());
        }
    }
}

pub fn list<S: Encode>(out: &mut Map<String, Value>, name: &str, v: &[S]) {
    for (l, c) in v.iter().enumerate() {
        out.insert(format!("{name}[{l}]"), c.encode());
    }
}
