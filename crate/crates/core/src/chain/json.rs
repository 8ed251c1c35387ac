use serde_json::{json, Value};

use crate::chain::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Ring};

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value> {
    v.get(name).ok_or_else(|| Error::Parse(format!("missing field `{name}`")))
}

fn as_degree(v: &Value) -> Result<i64> {
    v.as_i64().ok_or_else(|| Error::Parse(format!("bad degree {v}")))
}

fn indexed_matrices(v: &Value, key: &str, ring: Ring) -> Result<Vec<(i64, Matrix)>> {
    let arr = field(v, key)?
        .as_array()
        .ok_or_else(|| Error::Parse(format!("`{key}` is not an array")))?;
    arr.iter()
        .map(|e| {
            let m = Matrix::from_json(field(e, "matrix")?)?;
            ring.check_same(m.ring())?;
            Ok((as_degree(field(e, "k")?)?, m))
        })
        .collect()
}

impl ChainComplex {
    /// `{"ring", "degrees": [{"k", "rank"}], "diff": [{"k", "matrix"}]}`,
    /// listing nonzero ranks and nonzero differentials in ascending degree.
    pub fn to_json(&self) -> Value {
        let degrees: Vec<Value> = self.ranks().iter().map(|(k, r)| json!({"k": k, "rank": r})).collect();
        let diff: Vec<Value> = self
            .stored_diffs()
            .map(|(k, m)| json!({"k": k, "matrix": m.to_json()}))
            .collect();
        json!({"ring": self.ring().to_string(), "degrees": degrees, "diff": diff})
    }

    /// Parses and validates (`d^2 = 0` is enforced).
    pub fn from_json(v: &Value) -> Result<ChainComplex> {
        let ring: Ring = field(v, "ring")?
            .as_str()
            .ok_or_else(|| Error::Parse("`ring` is not a string".into()))?
            .parse()?;
        let ranks = field(v, "degrees")?
            .as_array()
            .ok_or_else(|| Error::Parse("`degrees` is not an array".into()))?
            .iter()
            .map(|e| {
                let r = field(e, "rank")?
                    .as_u64()
                    .ok_or_else(|| Error::Parse(format!("bad rank in {e}")))?;
                Ok((as_degree(field(e, "k")?)?, r as usize))
            })
            .collect::<Result<Vec<_>>>()?;
        let diffs = match v.get("diff") {
            Some(_) => indexed_matrices(v, "diff", ring)?,
            None => Vec::new(),
        };
        ChainComplex::new_checked(ring, ranks, diffs)
    }
}

impl ChainMap {
    /// `{"source", "target", "components": [{"k", "matrix"}]}`.
    pub fn to_json(&self) -> Value {
        let comps: Vec<Value> = self
            .stored_components()
            .map(|(k, m)| json!({"k": k, "matrix": m.to_json()}))
            .collect();
        json!({
            "source": self.source().to_json(),
            "target": self.target().to_json(),
            "components": comps,
        })
    }

    pub fn from_json(v: &Value) -> Result<ChainMap> {
        let source = ChainComplex::from_json(field(v, "source")?)?;
        let target = ChainComplex::from_json(field(v, "target")?)?;
        let comps = indexed_matrices(v, "components", source.ring())?;
        ChainMap::new_checked(source, target, comps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_round_trip() {
        let q = Ring::Rationals;
        let d = Matrix::from_i64_rows(q, &[vec![1, -3]]);
        let c = ChainComplex::new(q, [(-1, 1), (0, 2)], [(0, d)]).unwrap();
        let text = serde_json::to_string(&c.to_json()).unwrap();
        let back = ChainComplex::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, c);
        assert_eq!(serde_json::to_string(&back.to_json()).unwrap(), text);
    }

    #[test]
    fn rejects_nonzero_square() {
        let z = Ring::Integers;
        let one = Matrix::from_i64_rows(z, &[vec![1]]).to_json();
        let v = json!({
            "ring": "z",
            "degrees": [{"k": 0, "rank": 1}, {"k": 1, "rank": 1}, {"k": 2, "rank": 1}],
            "diff": [{"k": 1, "matrix": one}, {"k": 2, "matrix": one}],
        });
        assert!(ChainComplex::from_json(&v).is_err());
    }
}
