use std::ops::RangeInclusive;

use serde_json::{json, Value};

use crate::calculus::cr_n;
use crate::error::Result;
use crate::report::{describe, homology_in, homology_json, Report};
use crate::source::{Context, EtaObject, FunctorRef};

/// `F` has degree `n` on the samples: `cr_{n+1} F` is acyclic in the window
/// for every `(n+1)`-tuple.
pub fn degree_check(
    f: &FunctorRef,
    n: usize,
    ctx: &Context,
    samples: &[Vec<EtaObject>],
    window: RangeInclusive<i64>,
) -> Result<Report> {
    let mut report = Report::new("degree").with_n(n);
    let mut tables = Vec::new();
    for (i, xs) in samples.iter().enumerate() {
        if xs.len() != n + 1 {
            report.record(&format!("sample {i}"), vec![format!("needs {} objects, got {}", n + 1, xs.len())]);
            continue;
        }
        let table = homology_in(&cr_n(f, ctx, xs)?, window.clone())?;
        let bad = table.values().any(|h| !h.is_zero());
        report.record(
            &format!("sample {i}"),
            if bad { vec![format!("cr_{} {} has {}", n + 1, f.name(), describe(&table))] } else { Vec::new() },
        );
        tables.push(homology_json(&table));
    }
    report.detail("functor", json!(f.name()));
    report.detail("window", json!([window.start(), window.end()]));
    report.detail("cross_effect_homology", Value::Array(tables));
    Ok(report)
}
