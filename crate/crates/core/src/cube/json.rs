use serde_json::{json, Map, Value};

use crate::chain::{ChainComplex, ChainMap};
use crate::cube::{CubicalDiagram, Subset};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

impl CubicalDiagram {
    /// `{"n", "vertices": {"101": complex, ..}, "edges": [{"from", "to",
    /// "components"}]}`, keyed by subset bitstrings (coordinate 1 leftmost).
    pub fn to_json(&self) -> Value {
        let mut vertices = Map::new();
        let mut edges = Vec::new();
        for t in Subset::all(self.n()) {
            vertices.insert(t.key(), self.vertex(t).to_json());
            for i in (0..self.n()).filter(|&i| !t.contains(i)) {
                let comps: Vec<Value> = self
                    .edge(t, i)
                    .stored_components()
                    .map(|(k, m)| json!({"k": k, "matrix": m.to_json()}))
                    .collect();
                edges.push(json!({"from": t.key(), "to": t.with(i).key(), "components": comps}));
            }
        }
        json!({"n": self.n(), "vertices": vertices, "edges": edges})
    }

    /// Parses and validates the cube (functoriality included).
    pub fn from_json(v: &Value) -> Result<CubicalDiagram> {
        let n = v["n"].as_u64().ok_or_else(|| Error::Parse("cube.n missing".into()))? as usize;
        let vertices = v["vertices"]
            .as_object()
            .ok_or_else(|| Error::Parse("cube.vertices missing".into()))?;
        let edges = v["edges"].as_array().cloned().unwrap_or_default();
        let find_edge = |t: Subset, i: usize| -> Result<&Value> {
            let (from, to) = (t.key(), t.with(i).key());
            edges
                .iter()
                .find(|e| e["from"].as_str() == Some(&from) && e["to"].as_str() == Some(&to))
                .ok_or_else(|| Error::Parse(format!("missing edge {from} -> {to}")))
        };
        CubicalDiagram::from_fn(
            n,
            |t| {
                let c = vertices
                    .get(&t.key())
                    .ok_or_else(|| Error::Parse(format!("missing vertex {}", t.key())))?;
                ChainComplex::from_json(c)
            },
            |t, i, s, d| {
                let e = find_edge(t, i)?;
                let comps = e["components"]
                    .as_array()
                    .ok_or_else(|| Error::Parse("edge components missing".into()))?
                    .iter()
                    .map(|c| {
                        let k = c["k"].as_i64().ok_or_else(|| Error::Parse("edge degree missing".into()))?;
                        Ok((k, Matrix::from_json(&c["matrix"])?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                ChainMap::new(s.clone(), d.clone(), comps)
            },
        )?
        .validated()
    }
}
