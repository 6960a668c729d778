//! JSON forms of shifts, codes, entropies and decomposition reports.
//!
//! Rationals are written as `"p/q"` strings and integers that do not fit
//! in an `i64` as decimal strings; every float is a display copy of an
//! exact field next to it.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::epsilon::parse_rational;
use crate::algebra::{AlgebraicReal, EntropyValue, Epsilon, IntPoly, PeriodicCensus};
use crate::codes::{BlockMap, CodeChain, DecompositionCertificate};
use crate::error::{Error, Result};
use crate::factor::{DecompositionReport, Trace};
use crate::shift::{ShiftKind, ShiftSpace};
use crate::symbols::{Alphabet, Word};

/// Format version written into every report.
pub const FORMAT_VERSION: u64 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ShiftDoc {
    EdgeShift { matrix: Vec<Vec<u64>> },
    Sft { alphabet: Vec<String>, forbidden: Vec<Word> },
    Sofic { states: Vec<String>, edges: Vec<EdgeDoc> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub from: String,
    pub to: String,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDoc {
    pub window: Word,
    pub out: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeDoc {
    pub memory: usize,
    pub anticipation: usize,
    /// Target alphabet; the sorted outputs when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Vec<String>>,
    pub table: Vec<EntryDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<ShiftDoc>,
}

/// Parses JSON text, reporting the line and column of a syntax error.
pub fn parse_text(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))
}

fn from_value<T: serde::de::DeserializeOwned>(v: &Value, what: &str) -> Result<T> {
    T::deserialize(v).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

pub fn shift_doc(x: &ShiftSpace) -> ShiftDoc {
    match x.kind() {
        ShiftKind::EdgeShift { matrix } => ShiftDoc::EdgeShift { matrix: matrix.clone() },
        ShiftKind::Sft { alphabet, forbidden } => {
            ShiftDoc::Sft { alphabet: alphabet.symbols().to_vec(), forbidden: forbidden.clone() }
        }
        ShiftKind::Sofic { states, pres } => ShiftDoc::Sofic {
            states: states.clone(),
            edges: pres
                .edges
                .iter()
                .map(|e| EdgeDoc {
                    from: states[e.from as usize].clone(),
                    to: states[e.to as usize].clone(),
                    label: pres.alphabet.symbol(e.label).to_string(),
                })
                .collect(),
        },
    }
}

pub fn shift_from_doc(d: ShiftDoc) -> Result<ShiftSpace> {
    match d {
        ShiftDoc::EdgeShift { matrix } => ShiftSpace::edge_shift(matrix),
        ShiftDoc::Sft { alphabet, forbidden } => ShiftSpace::sft(Alphabet::new(alphabet)?, forbidden),
        ShiftDoc::Sofic { states, edges } => {
            ShiftSpace::sofic(states, edges.into_iter().map(|e| (e.from, e.to, e.label)).collect())
        }
    }
}

pub fn shift_to_json(x: &ShiftSpace) -> Value {
    serde_json::to_value(shift_doc(x)).expect("shift documents serialize")
}

pub fn shift_from_json(v: &Value) -> Result<ShiftSpace> {
    shift_from_doc(from_value(v, "shift")?)
}

pub fn code_doc(code: &BlockMap, with_domain: bool) -> CodeDoc {
    CodeDoc {
        memory: code.memory(),
        anticipation: code.anticipation(),
        target: Some(code.target().symbols().to_vec()),
        table: code.entries().into_iter().map(|(window, out)| EntryDoc { window, out }).collect(),
        domain: with_domain.then(|| shift_doc(code.domain())),
    }
}

pub fn code_to_json(code: &BlockMap, with_domain: bool) -> Value {
    serde_json::to_value(code_doc(code, with_domain)).expect("code documents serialize")
}

/// Builds a code; the embedded domain wins over `domain`.
pub fn code_from_doc(d: CodeDoc, domain: Option<&ShiftSpace>) -> Result<BlockMap> {
    let dom = match (d.domain, domain) {
        (Some(s), _) => shift_from_doc(s)?,
        (None, Some(x)) => x.clone(),
        (None, None) => return Err(Error::Parse("code has no domain".into())),
    };
    let target = match d.target {
        Some(t) => Alphabet::new(t)?,
        None => Alphabet::sorted(d.table.iter().map(|e| e.out.clone()))?,
    };
    BlockMap::new(dom, d.memory, d.anticipation, target, d.table.into_iter().map(|e| (e.window, e.out)).collect())
}

pub fn code_from_json(v: &Value, domain: Option<&ShiftSpace>) -> Result<BlockMap> {
    code_from_doc(from_value(v, "code")?, domain)
}

pub fn chain_to_json(c: &CodeChain) -> Value {
    Value::Array(c.stages.iter().map(|s| code_to_json(s, true)).collect())
}

pub fn chain_from_json(v: &Value) -> Result<CodeChain> {
    let stages = v.as_array().ok_or_else(|| Error::Parse("a code chain is an array of codes".into()))?;
    CodeChain::new(stages.iter().map(|s| code_from_json(s, None)).collect::<Result<_>>()?)
}

pub fn rational_to_json(r: &BigRational) -> Value {
    Value::String(format!("{}/{}", r.numer(), r.denom()))
}

pub fn rational_from_json(v: &Value) -> Result<BigRational> {
    let s = v.as_str().ok_or_else(|| Error::Parse(format!("rationals are \"p/q\" strings, got {v}")))?;
    parse_rational(s)
}

pub fn int_to_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(k) => json!(k),
        None => Value::String(n.to_string()),
    }
}

pub fn int_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| Error::Parse(format!("not an integer: {n}"))),
        Value::String(s) => BigInt::from_str(s).map_err(|_| Error::Parse(format!("not an integer: {s:?}"))),
        _ => Err(Error::Parse(format!("not an integer: {v}"))),
    }
}

pub fn nat_to_json(n: &BigUint) -> Value {
    int_to_json(&BigInt::from(n.clone()))
}

pub fn real_to_json(x: &AlgebraicReal) -> Value {
    let (lo, hi) = x.interval();
    json!({
        "poly": x.poly().coeffs().iter().map(int_to_json).collect::<Vec<_>>(),
        "interval": [rational_to_json(lo), rational_to_json(hi)],
        "approx": x.to_f64(),
    })
}

/// Rebuilds an algebraic number; the interval must isolate a simple root.
pub fn real_from_json(v: &Value) -> Result<AlgebraicReal> {
    let poly = v
        .get("poly")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("algebraic number needs a \"poly\" array".into()))?;
    let poly = IntPoly::new(poly.iter().map(int_from_json).collect::<Result<_>>()?);
    let iv = v
        .get("interval")
        .and_then(Value::as_array)
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::Parse("algebraic number needs an \"interval\" pair".into()))?;
    let (lo, hi) = (rational_from_json(&iv[0])?, rational_from_json(&iv[1])?);
    AlgebraicReal::from_parts(poly, lo, hi)
        .ok_or_else(|| Error::Parse("interval does not isolate a simple root of the polynomial".into()))
}

/// `{"poly", "interval", "approx"}` for e^h plus the value in nats.
pub fn entropy_to_json(h: &EntropyValue) -> Value {
    let mut v = real_to_json(&h.base);
    v["nats"] = json!(h.nats());
    v
}

pub fn entropy_from_json(v: &Value) -> Result<EntropyValue> {
    Ok(EntropyValue::from_base(real_from_json(v)?))
}

/// A target entropy: an expression string such as `"1/5*log(2)"`, an
/// exact object `{"poly", "interval"}` for e^h, or an approximate object
/// `{"approx", "tol"}`, which is rejected as inexact.
pub fn target_from_json(v: &Value) -> Result<EntropyValue> {
    match v {
        Value::String(s) => crate::algebra::parse_entropy_expr(s),
        Value::Object(o) if o.contains_key("poly") => entropy_from_json(v),
        Value::Object(o) if o.contains_key("approx") => Err(Error::InexactTarget(format!(
            "approximate target {} needs an exact polynomial and isolating interval",
            o["approx"]
        ))),
        _ => Err(Error::Parse(format!("unrecognized entropy target {v}"))),
    }
}

pub fn epsilon_to_json(e: &Epsilon) -> Value {
    match e {
        Epsilon::Nat(r) => rational_to_json(r),
        Epsilon::LogMultiple { coeff, base } => Value::String(format!("{}/{}*log({base})", coeff.numer(), coeff.denom())),
    }
}

pub fn epsilon_from_json(v: &Value) -> Result<Epsilon> {
    Epsilon::parse(v.as_str().ok_or_else(|| Error::Parse(format!("tolerance must be a string, got {v}")))?)
}

pub fn census_to_json(c: &PeriodicCensus, horizon: usize) -> Value {
    json!({
        "horizon": horizon,
        "q": (1..=horizon).map(|k| nat_to_json(&c.get(k))).collect::<Vec<_>>(),
    })
}

pub fn certificate_to_json(c: &DecompositionCertificate) -> Value {
    json!({
        "window_length": c.window_length,
        "windows_checked": c.windows_checked,
        "first_stage_onto": c.first_stage_onto,
        "second_stage_onto": c.second_stage_onto,
    })
}

fn entropies(v: &[EntropyValue]) -> Value {
    Value::Array(v.iter().map(entropy_to_json).collect())
}

pub fn trace_to_json(t: &Trace) -> Value {
    let sofic = t.sofic.as_ref().map(|s| {
        json!({
            "sub_sft": shift_to_json(&s.sub_sft),
            "sub_sft_entropy": entropy_to_json(&s.sub_sft_entropy),
            "block_length": s.block_length,
            "iterations": s.iterations,
            "tilde_entropies": entropies(&s.tilde_entropies),
            "hat_entropies": entropies(&s.hat_entropies),
            "sandwich_ok": s.sandwich_ok,
        })
    });
    let sft = t.sft.as_ref().map(|s| {
        json!({
            "n": s.n,
            "classes": s.classes,
            "m": s.m,
            "aux_entropy": entropy_to_json(&s.aux_entropy),
            "entropies": entropies(&s.entropies),
            "bounds": entropies(&s.bounds),
        })
    });
    json!({ "sofic": sofic, "sft": sft, "notes": t.notes })
}

/// The decomposition result: both chains, the intermediate shift and its
/// entropy, the step and the trace. Certificates are kept separately.
pub fn decomposition_to_json(r: &DecompositionReport) -> Value {
    json!({
        "phi1": chain_to_json(&r.phi1),
        "phi2": chain_to_json(&r.phi2),
        "intermediate": shift_to_json(&r.intermediate),
        "intermediate_entropy": entropy_to_json(&r.intermediate_entropy),
        "target": entropy_to_json(&r.target),
        "epsilon": epsilon_to_json(&r.epsilon),
        "k_step": r.k_step,
        "trace": trace_to_json(&r.trace),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{entropy, perron_root};
    use crate::symbols::word;

    #[test]
    fn shifts_round_trip() {
        let docs = [
            r#"{"kind":"edge_shift","matrix":[[1,1],[1,0]]}"#,
            r#"{"kind":"sft","alphabet":["0","1"],"forbidden":[["1","1"]]}"#,
            r#"{"kind":"sofic","states":["a","b"],"edges":[{"from":"a","to":"a","label":"1"},{"from":"a","to":"b","label":"0"},{"from":"b","to":"a","label":"0"}]}"#,
        ];
        for d in docs {
            let x = shift_from_json(&parse_text(d).unwrap()).unwrap();
            let v = shift_to_json(&x);
            assert_eq!(serde_json::to_string(&shift_doc(&x)).unwrap(), d);
            assert_eq!(shift_from_json(&v).unwrap(), x);
        }
    }

    #[test]
    fn parse_errors_carry_position() {
        let e = parse_text("{\"kind\":\n  \"sft\",]").unwrap_err();
        assert!(matches!(&e, Error::Parse(m) if m.starts_with("line 2, column")), "{e}");
        let e = shift_from_json(&json!({"kind": "tree"})).unwrap_err();
        assert!(matches!(e, Error::Parse(_)));
    }

    #[test]
    fn entropy_round_trip_and_tamper() {
        let g = EntropyValue::from_base(perron_root(&[vec![1, 1], vec![1, 0]]).unwrap());
        let v = entropy_to_json(&g);
        assert_eq!(v["poly"], json!([-1, -1, 1]));
        assert_eq!(entropy_from_json(&v).unwrap(), g);
        let mut bad = v.clone();
        bad["interval"] = json!(["2/1", "3/1"]);
        assert!(entropy_from_json(&bad).is_err());
        let two = EntropyValue::log_int(2);
        assert_eq!(entropy_from_json(&entropy_to_json(&two)).unwrap(), two);
        assert!(matches!(target_from_json(&json!({"approx": 0.5, "tol": 0.01})), Err(Error::InexactTarget(_))));
        assert_eq!(target_from_json(&json!("log(2)")).unwrap(), two);
    }

    #[test]
    fn code_round_trip() {
        let x = ShiftSpace::sft(Alphabet::new(vec!["0".into(), "1".into()]).unwrap(), vec![word("11")]).unwrap();
        let c = BlockMap::from_fn(x.clone(), 1, 0, |w| if w[0] == w[1] { "a".into() } else { "b".into() }).unwrap();
        let v = code_to_json(&c, false);
        assert_eq!(code_from_json(&v, Some(&x)).unwrap(), c);
        let with = code_to_json(&c, true);
        assert_eq!(code_from_json(&with, None).unwrap(), c);
        let mut partial = v.clone();
        partial["table"].as_array_mut().unwrap().pop();
        assert!(matches!(code_from_json(&partial, Some(&x)), Err(Error::IncompleteTable(_))));
        assert!(entropy(&x).is_ok());
    }
}
