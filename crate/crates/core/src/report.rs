//! JSON and CSV reports. Floats are rounded to 12 significant digits so
//! that identical runs give identical bytes.

use std::io::Write;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;
use crate::families::Family;
use crate::game::GameSpec;
use crate::optimize::linspace;
use crate::plausibility::Analysis;

/// Bumped whenever a report changes shape; the schemas under `schemas/`
/// carry the same number.
pub const SCHEMA_VERSION: u32 = 1;

pub const SIGNIFICANT_DIGITS: usize = 12;

pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    let r: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x);
    if r == 0.0 { 0.0 } else { r }
}

/// Rounds every float in `v`; non-finite numbers become `null`.
pub fn rounded(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            serde_json::Number::from_f64(round_sig(x)).map(Value::Number).unwrap_or(Value::Null)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(rounded).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, rounded(v))).collect()),
        other => other,
    }
}

pub fn to_json(value: &impl Serialize) -> Result<String> {
    let v = rounded(serde_json::to_value(value)?);
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

/// Common head of every report.
pub fn header(command: &str, family: &Family) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "family": family.name(),
        "params": family.params_json(),
    })
}

/// Merges the fields of `body` into `head`.
pub fn with_body(mut head: Value, body: Value) -> Value {
    if let (Value::Object(h), Value::Object(b)) = (&mut head, body) {
        h.extend(b);
    }
    head
}

pub fn analyze(family: &Family, an: &Analysis) -> Value {
    let plaus = an.report();
    let diag = an.lower_bound_diagnostics();
    let p_omitted = plaus.p_plausible.is_none();
    with_body(
        header("analyze", family),
        json!({
            "equilibria": an.eq,
            "rc": plaus.rc,
            "plausibility": plaus,
            "diagnostics": {
                "lower_bound": diag,
                "p_omitted": p_omitted,
                "tolerances": an.spec.tol,
            },
        }),
    )
}

/// One sampled row of the curves `U`, `phi` and `gamma`.
#[derive(Clone, Debug, Serialize)]
pub struct CurveRow {
    pub x: f64,
    #[serde(rename = "U")]
    pub u: f64,
    pub phi: f64,
    /// Empty when the game has no unique Cournot action.
    pub gamma: Option<f64>,
}

pub fn sample_curves(spec: &GameSpec, cournot: Option<f64>, n: usize) -> Vec<CurveRow> {
    let s = spec.leader_space;
    linspace(s.lo, s.hi, n.max(2))
        .into_iter()
        .map(|x| CurveRow { x, u: spec.leader_value(x), phi: spec.phi(x), gamma: cournot.map(|c| spec.gamma(x, c)) })
        .collect()
}

/// Writes rows with header `x,U,phi,gamma`.
pub fn write_curves_csv(rows: &[CurveRow], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "U", "phi", "gamma"])?;
    let num = |x: f64| round_sig(x).to_string();
    for r in rows {
        w.write_record([num(r.x), num(r.u), num(r.phi), r.gamma.map(num).unwrap_or_default()])?;
    }
    w.flush()?;
    Ok(())
}

/// The unique Cournot action, if there is one.
pub fn unique_cournot(an: &Analysis) -> Option<f64> {
    match an.eq.cournot_points.as_slice() {
        [c] if an.eq.cournot.pieces().len() == 1 => Some(*c),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_is_stable() {
        assert_eq!(round_sig(5.0 / 11.0), 0.454545454545);
        assert_eq!(round_sig(round_sig(1.0 / 3.0)), round_sig(1.0 / 3.0));
        assert_eq!(round_sig(-2.5e-20), -2.5e-20);
        let v = rounded(json!({"a": [0.1 + 0.2, 1], "b": "x"}));
        assert_eq!(v, json!({"a": [0.3, 1], "b": "x"}));
    }
}
