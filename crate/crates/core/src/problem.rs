//! Problem files and report documents.
//!
//! Integers travel as decimal strings (plain JSON integers are accepted on
//! input for small fields); floats are rejected everywhere so no coefficient
//! ever passes through a binary float.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::Serializer;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::lift::{new_system, FactorSystem, LiftReport, ModeRequest, StepRecord, StrategyComparison};
use crate::poly::MonicPoly;
use crate::ring::PadicContext;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemSpec {
    pub p: u64,
    pub f: MonicPoly,
    pub factors: Vec<MonicPoly>,
    pub s: u64,
    pub target: Option<u64>,
    pub mode: ModeRequest,
    pub compare: bool,
}

const FIELDS: [&str; 7] = ["p", "f", "factors", "s", "target", "mode", "compare"];

impl ProblemSpec {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| Error::input("$", format!("invalid JSON: {e}")))?;
        Self::from_value(&value)
    }

    pub fn from_value(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::input("$", "expected an object"))?;
        if let Some(key) = obj.keys().find(|k| !FIELDS.contains(&k.as_str())) {
            return Err(Error::input(format!("$.{key}"), "unknown field"));
        }
        let p = parse_u64(required(obj, "p")?, "$.p")?;
        let f = parse_monic(required(obj, "f")?, "$.f")?;
        let factors = match required(obj, "factors")? {
            Value::Array(items) => items
                .iter()
                .enumerate()
                .map(|(i, v)| parse_monic(v, &format!("$.factors[{i}]")))
                .collect::<Result<Vec<_>>>()?,
            _ => return Err(Error::input("$.factors", "expected an array of coefficient lists")),
        };
        let s = parse_u64(required(obj, "s")?, "$.s")?;
        let target = match obj.get("target") {
            None | Some(Value::Null) => None,
            Some(v) => Some(parse_u64(v, "$.target")?),
        };
        let mode = match obj.get("mode") {
            None | Some(Value::Null) => ModeRequest::Auto,
            Some(Value::String(m)) => m.parse().map_err(|_| {
                Error::input("$.mode", format!("expected auto, general or special, got {m:?}"))
            })?,
            Some(_) => return Err(Error::input("$.mode", "expected a string")),
        };
        let compare = match obj.get("compare") {
            None | Some(Value::Null) => false,
            Some(Value::Bool(b)) => *b,
            Some(_) => return Err(Error::input("$.compare", "expected a boolean")),
        };
        Ok(ProblemSpec {
            p,
            f,
            factors,
            s,
            target,
            mode,
            compare,
        })
    }

    pub fn to_value(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("p".into(), json!(self.p));
        obj.insert("f".into(), poly_value(&self.f));
        obj.insert("factors".into(), polys_value(&self.factors));
        obj.insert("s".into(), json!(self.s));
        if let Some(t) = self.target {
            obj.insert("target".into(), json!(t));
        }
        let mode = match self.mode {
            ModeRequest::Auto => "auto",
            ModeRequest::General => "general",
            ModeRequest::Special => "special",
        };
        obj.insert("mode".into(), json!(mode));
        obj.insert("compare".into(), json!(self.compare));
        Value::Object(obj)
    }

    pub fn context(&self) -> Result<PadicContext> {
        PadicContext::new(self.p).map_err(|e| Error::input("$.p", e.to_string()))
    }

    pub fn system(&self, mode: Option<ModeRequest>) -> Result<FactorSystem> {
        let ctx = self.context()?;
        new_system(
            &ctx,
            self.f.clone(),
            self.factors.clone(),
            self.s,
            mode.unwrap_or(self.mode),
        )
    }
}

fn required<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::input(format!("$.{key}"), "missing field"))
}

fn parse_u64(v: &Value, path: &str) -> Result<u64> {
    match v {
        Value::Number(n) => n
            .as_u64()
            .ok_or_else(|| Error::input(path, "expected a non-negative integer")),
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::input(path, format!("expected a non-negative integer, got {s:?}"))),
        _ => Err(Error::input(path, "expected a non-negative integer")),
    }
}

pub fn parse_bigint(v: &Value, path: &str) -> Result<BigInt> {
    match v {
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::input(path, format!("expected a decimal integer, got {s:?}"))),
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n
            .to_string()
            .parse()
            .expect("JSON integers are decimal")),
        Value::Number(_) => Err(Error::input(path, "floats are not accepted; use a decimal string")),
        _ => Err(Error::input(path, "expected a decimal integer string")),
    }
}

/// A full coefficient list, low to high, ending in 1.
pub fn parse_monic(v: &Value, path: &str) -> Result<MonicPoly> {
    let items = v
        .as_array()
        .ok_or_else(|| Error::input(path, "expected a coefficient list (low to high)"))?;
    let coeffs = items
        .iter()
        .enumerate()
        .map(|(i, c)| parse_bigint(c, &format!("{path}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    MonicPoly::from_full(&coeffs).map_err(|_| {
        Error::input(
            path,
            "coefficient list must be non-empty and end with leading coefficient 1",
        )
    })
}

pub fn parse_polys(v: &Value, path: &str) -> Result<Vec<MonicPoly>> {
    v.as_array()
        .ok_or_else(|| Error::input(path, "expected a list of coefficient lists"))?
        .iter()
        .enumerate()
        .map(|(i, g)| parse_monic(g, &format!("{path}[{i}]")))
        .collect()
}

pub fn poly_value(g: &MonicPoly) -> Value {
    Value::Array(
        g.full_coeffs()
            .iter()
            .map(|c| Value::String(c.to_string()))
            .collect(),
    )
}

pub fn polys_value(gs: &[MonicPoly]) -> Value {
    Value::Array(gs.iter().map(poly_value).collect())
}

pub(crate) fn ser_bigint<S: Serializer>(x: &BigInt, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(&x.to_string())
}

pub(crate) fn ser_polys<S: Serializer>(
    gs: &[MonicPoly],
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::Serialize;
    polys_value(gs).serialize(ser)
}

/// The machine-readable lift report.
pub fn lift_report_value(
    report: &LiftReport,
    final_factors: &[MonicPoly],
    ctx: &PadicContext,
    target: u64,
) -> Value {
    let modulus = ctx.pow(target);
    let balanced: Vec<MonicPoly> = final_factors
        .iter()
        .map(|g| g.reduce_balanced(&modulus))
        .collect();
    let canonical: Vec<MonicPoly> = final_factors
        .iter()
        .map(|g| g.reduce_canonical(&modulus))
        .collect();
    json!({
        "p": report.p,
        "mode": report.mode,
        "t": report.t,
        "t_prime": report.t_prime,
        "initial_s": report.initial_s,
        "final_s": report.final_s,
        "exact": report.exact,
        "target": target,
        "steps": report.steps,
        "factors": {
            "modulus_exponent": target,
            "canonical": polys_value(&canonical),
            "balanced": polys_value(&balanced),
        },
    })
}

/// Factors and modulus exponent read back from a lift report.
pub fn parse_report_factors(report: &Value) -> Result<(u64, Vec<MonicPoly>, Vec<MonicPoly>)> {
    let factors = report
        .get("factors")
        .ok_or_else(|| Error::input("$.factors", "missing field"))?;
    let n = parse_u64(
        factors
            .get("modulus_exponent")
            .ok_or_else(|| Error::input("$.factors.modulus_exponent", "missing field"))?,
        "$.factors.modulus_exponent",
    )?;
    let canonical = parse_polys(
        factors
            .get("canonical")
            .ok_or_else(|| Error::input("$.factors.canonical", "missing field"))?,
        "$.factors.canonical",
    )?;
    let balanced = parse_polys(
        factors
            .get("balanced")
            .ok_or_else(|| Error::input("$.factors.balanced", "missing field"))?,
        "$.factors.balanced",
    )?;
    Ok((n, canonical, balanced))
}

/// Fixed-width step / precision / defect table.
pub fn format_table(steps: &[StepRecord]) -> String {
    let mut out = String::new();
    let w = steps
        .iter()
        .map(|r| r.s.to_string().len())
        .max()
        .unwrap_or(0)
        .max("precision".len());
    let _ = writeln!(out, "{:>4}  {:>w$}  {:>6}", "step", "precision", "defect");
    for r in steps {
        let _ = writeln!(out, "{:>4}  {:>w$}  {:>6}", r.step, r.s, r.defect);
    }
    out
}

pub fn comparison_value(c: &StrategyComparison) -> Value {
    let mut v = serde_json::to_value(c).expect("comparison serializes");
    v["advantage"] = json!(c.advantage());
    v
}

pub fn format_comparison(c: &StrategyComparison) -> String {
    let mut out = String::new();
    let prime = |x: Option<u64>| x.map_or("-".to_string(), |v| v.to_string());
    let _ = writeln!(out, "mode {}  s = {}  degrees {:?}", c.mode, c.s, c.degrees);
    let _ = writeln!(
        out,
        "t = {}  t' = {}  t0 = {}  t0' = {}  t1 = {}  t1' = {}",
        c.t,
        prime(c.t_prime),
        c.t0,
        prime(c.t0_prime),
        c.t1,
        prime(c.t1_prime)
    );
    let _ = writeln!(
        out,
        "{:<8}  {:>16}  {:>17}  {:>15}  {:>16}",
        "strategy", "factor (bound)", "product (bound)", "factor (seen)", "product (seen)"
    );
    for (name, o) in [("direct", &c.direct), ("nested", &c.nested)] {
        let _ = writeln!(
            out,
            "{:<8}  {:>16}  {:>17}  {:>15}  {:>16}",
            name,
            o.guaranteed_factor_precision,
            o.guaranteed_product_precision,
            o.achieved_factor_precision,
            o.achieved_product_precision.to_string()
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX: &str = r#"{"p": 2, "f": ["8", "-2", "1", "1"],
        "factors": [["0", "1"], ["2", "1"], ["7", "1"]], "s": 3, "target": 514}"#;

    #[test]
    fn parses_and_round_trips() {
        let spec = ProblemSpec::from_json_str(EX).unwrap();
        assert_eq!(spec.p, 2);
        assert_eq!(spec.f, MonicPoly::from_lower([8, -2, 1]));
        assert_eq!(spec.factors.len(), 3);
        assert_eq!(spec.target, Some(514));
        assert_eq!(spec.mode, ModeRequest::Auto);
        let back = ProblemSpec::from_value(&spec.to_value()).unwrap();
        assert_eq!(back, spec);
        assert_eq!(spec.system(None).unwrap().t(), 1);
    }

    fn err_path(text: &str) -> String {
        match ProblemSpec::from_json_str(text) {
            Err(Error::InvalidInput { path, .. }) => path,
            other => panic!("expected an input error, got {other:?}"),
        }
    }

    #[test]
    fn reports_field_paths() {
        assert_eq!(err_path("[]"), "$");
        assert_eq!(err_path("{"), "$");
        assert_eq!(err_path(r#"{"f": ["1"], "factors": [], "s": 1}"#), "$.p");
        assert_eq!(
            err_path(r#"{"p": 2, "f": ["1", "x", "1"], "factors": [], "s": 1}"#),
            "$.f[1]"
        );
        assert_eq!(
            err_path(r#"{"p": 2, "f": ["0", "1"], "factors": [["0", "2"]], "s": 1}"#),
            "$.factors[0]"
        );
        assert_eq!(
            err_path(r#"{"p": 2, "f": ["0", 1.5], "factors": [], "s": 1}"#),
            "$.f[1]"
        );
        assert_eq!(
            err_path(r#"{"p": 2, "f": ["0", "1"], "factors": [], "s": -1}"#),
            "$.s"
        );
        assert_eq!(
            err_path(r#"{"p": 2, "f": ["0", "1"], "factors": [], "s": 1, "mode": "fast"}"#),
            "$.mode"
        );
        assert_eq!(
            err_path(r#"{"p": 2, "f": ["0", "1"], "factors": [], "s": 1, "extra": 0}"#),
            "$.extra"
        );
    }

    #[test]
    fn table_layout() {
        let rec = |step, s, defect| StepRecord {
            step,
            s,
            s_achieved: s - defect,
            defect,
            residual_valuation: crate::ring::Valuation::Finite(2 * s),
            next_s: 2 * s,
            factors: vec![],
        };
        let table = format_table(&[rec(1, 3, 1), rec(2, 4, 1)]);
        assert_eq!(
            table,
            "step  precision  defect\n   1          3       1\n   2          4       1\n"
        );
    }
}
