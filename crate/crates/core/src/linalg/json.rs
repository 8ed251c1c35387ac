use num_bigint::BigInt;
use serde_json::{json, Number, Value};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Ring, Scalar};

pub(crate) fn int_value(v: &BigInt) -> Value {
    Value::Number(Number::from_string_unchecked(v.to_string()))
}

pub(crate) fn parse_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .to_string()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("expected an integer, got {n}"))),
        other => Err(Error::Parse(format!("expected an integer, got {other}"))),
    }
}

fn scalar_value(ring: Ring, v: &Scalar) -> Value {
    match ring {
        Ring::Rationals => Value::Array(vec![int_value(v.numer()), int_value(v.denom())]),
        _ => int_value(v.numer()),
    }
}

fn parse_scalar(ring: Ring, v: &Value) -> Result<Scalar> {
    match (ring, v) {
        (Ring::Rationals, Value::Array(pair)) if pair.len() == 2 => {
            let num = parse_int(&pair[0])?;
            let den = parse_int(&pair[1])?;
            if den <= BigInt::from(0) {
                return Err(Error::Parse("denominator must be positive".into()));
            }
            Ok(Scalar::from_ratio(num, den))
        }
        (Ring::Rationals, Value::Number(_)) => Ok(Scalar::from_integer(parse_int(v)?)),
        (_, Value::Number(_)) => Ok(ring.reduce(Scalar::from_integer(parse_int(v)?).0)),
        _ => Err(Error::Parse(format!("bad matrix entry {v} for ring {ring}"))),
    }
}

impl Matrix {
    /// `{"ring", "rows", "cols", "entries"}` with dense row-major entries.
    pub fn to_json(&self) -> Value {
        let ring = self.ring();
        let mut entries = Vec::with_capacity(self.rows() * self.cols());
        for row in self.to_dense() {
            entries.extend(row.iter().map(|v| scalar_value(ring, v)));
        }
        json!({
            "ring": ring.to_string(),
            "rows": self.rows(),
            "cols": self.cols(),
            "entries": entries,
        })
    }

    pub fn from_json(v: &Value) -> Result<Matrix> {
        let ring: Ring = v["ring"]
            .as_str()
            .ok_or_else(|| Error::Parse("matrix.ring missing".into()))?
            .parse()?;
        let rows = v["rows"].as_u64().ok_or_else(|| Error::Parse("matrix.rows missing".into()))? as usize;
        let cols = v["cols"].as_u64().ok_or_else(|| Error::Parse("matrix.cols missing".into()))? as usize;
        let entries = v["entries"]
            .as_array()
            .ok_or_else(|| Error::Parse("matrix.entries missing".into()))?
            .iter()
            .map(|e| parse_scalar(ring, e))
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_dense(ring, rows, cols, entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_entries_are_pairs() {
        let q = Ring::Rationals;
        let m = Matrix::from_dense(
            q,
            1,
            2,
            vec![Scalar::from_ratio(2.into(), 4.into()), q.from_i64(-3)],
        )
        .unwrap();
        let v = m.to_json();
        assert_eq!(v["entries"].to_string(), "[[1,2],[-3,1]]");
        assert_eq!(Matrix::from_json(&v).unwrap(), m);
    }

    #[test]
    fn rejects_bad_denominator() {
        let v = json!({"ring": "q", "rows": 1, "cols": 1, "entries": [[1, 0]]});
        assert!(Matrix::from_json(&v).is_err());
        let v = json!({"ring": "q", "rows": 1, "cols": 1, "entries": [[1, -2]]});
        assert!(Matrix::from_json(&v).is_err());
    }

    #[test]
    fn big_integers_survive() {
        let z = Ring::Integers;
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let m = Matrix::from_dense(z, 1, 1, vec![Scalar::from_integer(big)]).unwrap();
        let text = m.to_json().to_string();
        let back = Matrix::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, m);
    }
}
