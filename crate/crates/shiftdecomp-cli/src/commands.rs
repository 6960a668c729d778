//! Every report-producing command as a pure function of its serialized
//! config and inputs, so `verify` can run the same code on a report.

use std::cmp::Ordering;

use serde_json::{json, Value};
use shift_decomp::algebra::{entropy, is_perron, is_weak_perron, q_census, within, Certainty};
use shift_decomp::codes::{compose, image, is_embedding, is_factor_onto, verify_decomposition, BlockMap};
use shift_decomp::embed::{
    blow_up, build_bn_matrix, census_sandwich, embedding_preconditions, membership, predicted_census,
    subshift_between_search, BlowupSpec, EmbedPreconditionReport, EntropySet, EntropySetQuery, Require,
};
use shift_decomp::factor::{decompose_dense, sample_s0, split_sft, DecompositionReport, SampleStatus};
use shift_decomp::json::*;
use shift_decomp::shift::{forbid, higher_block_presentation, is_k_step, min_step, structure};
use shift_decomp::{Error, Result, ShiftSpace};

pub(crate) fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("missing field {key:?}")))
}

pub(crate) fn usize_field(v: &Value, key: &str) -> Result<usize> {
    field(v, key)?.as_u64().map(|k| k as usize).ok_or_else(|| Error::Parse(format!("{key:?} must be a nonnegative integer")))
}

fn u64_field(v: &Value, key: &str) -> Result<u64> {
    field(v, key)?.as_u64().ok_or_else(|| Error::Parse(format!("{key:?} must be a nonnegative integer")))
}

fn bool_field(v: &Value, key: &str) -> Result<bool> {
    field(v, key)?.as_bool().ok_or_else(|| Error::Parse(format!("{key:?} must be a boolean")))
}

fn str_field<'a>(v: &'a Value, key: &str) -> Result<&'a str> {
    field(v, key)?.as_str().ok_or_else(|| Error::Parse(format!("{key:?} must be a string")))
}

pub(crate) fn shift_field(v: &Value, key: &str) -> Result<ShiftSpace> {
    shift_from_json(field(v, key)?)
}

fn matrix_from_json(v: &Value) -> Result<Vec<Vec<u64>>> {
    serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("matrix: {e}")))
}

fn words_from_json(v: &Value) -> Result<Vec<Vec<String>>> {
    serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("words: {e}")))
}

fn check(name: &str, holds: bool) -> Value {
    json!({ "check": name, "holds": holds })
}

fn structure_json(x: &ShiftSpace) -> Result<Value> {
    let s = structure(x)?;
    Ok(json!({
        "irreducible": s.irreducible,
        "mixing": s.mixing,
        "period": s.period,
        "nonwandering": s.nonwandering_note,
        "finite_type_step": min_step(x)?,
    }))
}

fn precondition_json(r: &EmbedPreconditionReport) -> Value {
    json!({
        "entropy_ok": r.entropy_ok,
        "census_horizon": r.census_horizon,
        "census_ok": r.census_ok,
        "witnesses": r.witnesses,
        "holds": r.holds(),
    })
}

fn set_name(s: EntropySet) -> &'static str {
    match s {
        EntropySet::TPrime => "tprime",
        EntropySet::T0 => "t0",
        EntropySet::T1Prime => "t1prime",
    }
}

pub fn parse_set(s: &str) -> Result<EntropySet> {
    match s {
        "tprime" => Ok(EntropySet::TPrime),
        "t0" => Ok(EntropySet::T0),
        "t1prime" => Ok(EntropySet::T1Prime),
        _ => Err(Error::Parse(format!("unknown entropy set {s:?}; expected tprime, t0 or t1prime"))),
    }
}

/// Computed payload of a report.
pub struct Computed {
    pub result: Value,
    pub certificates: Vec<Value>,
}

/// Commands whose reports are checked by recomputation.
pub const RECOMPUTED: &[&str] = &[
    "entropy",
    "census",
    "structure",
    "higher-block",
    "forbid",
    "image",
    "compose",
    "verify-code",
    "sample-s0",
    "blowup",
    "build-bn",
    "embed-preconditions",
    "embed-oracle",
    "between-search",
    "census-sandwich",
];

pub fn compute(command: &str, config: &Value, inputs: &Value) -> Result<Computed> {
    let plain = |result: Value| Ok(Computed { result, certificates: vec![] });
    match command {
        "entropy" => {
            let shifts = field(inputs, "shifts")?.as_array().ok_or_else(|| Error::Parse("\"shifts\" must be an array".into()))?;
            let mut out = Vec::new();
            for s in shifts {
                let x = shift_from_json(s)?;
                out.push(json!({ "entropy": entropy_to_json(&entropy(&x)?), "structure": structure_json(&x)? }));
            }
            plain(json!({ "shifts": out }))
        }
        "census" => {
            let x = shift_field(inputs, "shift")?;
            let h = usize_field(config, "horizon")?;
            let c = q_census(&x, h)?;
            let fixed: Vec<Value> = (1..=h).map(|k| nat_to_json(&c.fixed_by(k))).collect();
            let mut result = census_to_json(&c, h);
            result["fixed"] = Value::Array(fixed);
            plain(result)
        }
        "structure" => {
            let x = shift_field(inputs, "shift")?;
            plain(structure_json(&x)?)
        }
        "higher-block" => {
            let x = shift_field(inputs, "shift")?;
            let n = usize_field(config, "n")?;
            let p = higher_block_presentation(&x, n, usize_field(config, "state_budget")?)?;
            let names = (0..p.n_states).map(|i| format!("s{i}")).collect();
            let hb = ShiftSpace::from_presentation(&p, names)?;
            plain(json!({ "shift": shift_to_json(&hb) }))
        }
        "forbid" => {
            let x = shift_field(inputs, "shift")?;
            let w = words_from_json(field(config, "words")?)?;
            let z = forbid(&x, &w)?;
            plain(json!({ "shift": shift_to_json(&z), "entropy": entropy_to_json(&entropy(&z)?) }))
        }
        "image" => {
            let x = shift_field(inputs, "domain")?;
            let c = code_from_json(field(inputs, "code")?, Some(&x))?;
            let y = image(&c)?;
            plain(json!({ "image": shift_to_json(&y), "entropy": entropy_to_json(&entropy(&y)?) }))
        }
        "compose" => {
            let x = shift_field(inputs, "domain")?;
            let f = code_from_json(field(inputs, "inner")?, Some(&x))?;
            let mid = image(&f)?;
            let g = code_from_json(field(inputs, "outer")?, Some(&mid))?;
            let h = compose(&g, &f)?;
            plain(json!({ "code": code_to_json(&h, false) }))
        }
        "verify-code" => {
            let x = shift_field(inputs, "domain")?;
            let c = code_from_json(field(inputs, "code")?, Some(&x))?;
            let mut result = json!({
                "memory": c.memory(),
                "anticipation": c.anticipation(),
                "windows": c.len(),
                "embedding": is_embedding(&c)?,
                "image": shift_to_json(&image(&c)?),
            });
            if let Some(y) = inputs.get("y") {
                result["onto"] = json!(is_factor_onto(&c, &shift_from_json(y)?)?);
            }
            plain(result)
        }
        "decompose-factor" | "decompose-sft" => {
            let (phi, y) = factor_inputs(inputs)?;
            let eps = epsilon_from_json(field(config, "epsilon")?)?;
            let r = if command == "decompose-factor" {
                let target = entropy_from_json(field(config, "target")?)?;
                decompose_dense(&phi, &y, &target, &eps)?
            } else {
                split_sft(&phi, &y, &eps)?
            };
            check_budgets(config, &r)?;
            Ok(Computed { result: decomposition_to_json(&r), certificates: decomposition_certificates(&r)? })
        }
        "sample-s0" => {
            let (phi, y) = factor_inputs(inputs)?;
            let eps = epsilon_from_json(field(config, "epsilon")?)?;
            let grid = field(config, "grid")?
                .as_array()
                .ok_or_else(|| Error::Parse("\"grid\" must be an array".into()))?
                .iter()
                .map(entropy_from_json)
                .collect::<Result<Vec<_>>>()?;
            let rows = sample_s0(&phi, &y, &grid, &eps)?;
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let status = match &r.status {
                        SampleStatus::Achieved { entropy, perron, k_step } => json!({
                            "status": "achieved",
                            "entropy": entropy_to_json(entropy),
                            "perron": perron,
                            "k_step": k_step,
                        }),
                        SampleStatus::OutOfRange => json!({ "status": "out_of_range" }),
                        SampleStatus::Failed(m) => json!({ "status": "failed", "reason": m }),
                    };
                    json!({ "target": entropy_to_json(&r.target), "row": status })
                })
                .collect();
            plain(json!({ "rows": rows }))
        }
        "blowup" => {
            let x = shift_field(inputs, "shift")?;
            let orbit: Vec<String> = serde_json::from_value(field(config, "orbit")?.clone())
                .map_err(|e| Error::Parse(format!("orbit: {e}")))?;
            let multipliers: Vec<usize> = serde_json::from_value(field(config, "multipliers")?.clone())
                .map_err(|e| Error::Parse(format!("multipliers: {e}")))?;
            let n = orbit.len();
            let spec = BlowupSpec { orbit, multipliers: multipliers.clone() };
            let z = blow_up(&x, &spec)?;
            let h = usize_field(config, "horizon")?.max(n * multipliers.iter().max().copied().unwrap_or(1) + n);
            let before = q_census(&x, h)?;
            let after = q_census(&z, h)?;
            let predicted = predicted_census(&before, n, &multipliers);
            let s = structure(&z)?;
            Ok(Computed {
                result: json!({
                    "shift": shift_to_json(&z),
                    "before": census_to_json(&before, h),
                    "after": census_to_json(&after, h),
                    "mixing": s.mixing,
                    "entropy": entropy_to_json(&entropy(&z)?),
                }),
                certificates: vec![
                    check("census", after == predicted),
                    check("entropy_preserved", entropy(&z)? == entropy(&x)?),
                    check("mixing_preserved", !structure(&x)?.mixing || s.mixing),
                ],
            })
        }
        "build-bn" => {
            let b = matrix_from_json(field(config, "matrix")?)?;
            let n = usize_field(config, "n")?;
            let m = build_bn_matrix(&b, n)?;
            let x = ShiftSpace::edge_shift(m.clone())?;
            let s = structure(&x)?;
            let h = entropy(&x)?;
            let hb = entropy(&ShiftSpace::edge_shift(b)?)?;
            Ok(Computed {
                result: json!({ "matrix": m, "period": s.period, "irreducible": s.irreducible, "entropy": entropy_to_json(&h) }),
                certificates: vec![check("irreducible", s.irreducible), check("period", s.period == n as u64), check("entropy_equal", h == hb)],
            })
        }
        "embed-preconditions" => {
            let x = shift_field(inputs, "x")?;
            let y = shift_field(inputs, "y")?;
            let r = embedding_preconditions(&x, &y)?;
            plain(precondition_json(&r))
        }
        "embed-oracle" => {
            let set = parse_set(str_field(config, "set")?)?;
            let h = entropy_from_json(field(config, "h")?)?;
            let hx = entropy_from_json(field(config, "hx")?)?;
            let hy = entropy_from_json(field(config, "hy")?)?;
            let mut q = EntropySetQuery::new(set, h, hx, hy);
            q.p = u64_field(config, "p")?;
            q.q = u64_field(config, "q")?;
            q.r_bound = u64_field(config, "r_bound")?;
            q.x_irreducible = bool_field(config, "x_irreducible")?;
            q.nonwandering = bool_field(config, "nonwandering")?;
            let m = membership(&q)?;
            let perron = match set {
                EntropySet::T0 => json!(is_perron(&q.h.base)?),
                EntropySet::T1Prime => json!(is_weak_perron(&q.h.base)?),
                EntropySet::TPrime => Value::Null,
            };
            plain(json!({
                "set": set_name(set),
                "member": m.member,
                "witness": m.witness,
                "hypotheses": m.hypotheses,
                "perron_data": perron,
            }))
        }
        "between-search" => {
            let x = shift_field(inputs, "x")?;
            let y = shift_field(inputs, "y")?;
            let target = entropy_from_json(field(config, "target")?)?;
            let tol = epsilon_from_json(field(config, "tolerance")?)?;
            let require: Require = str_field(config, "require")?.parse()?;
            let z = subshift_between_search(&x, &y, &target, &tol, require, usize_field(config, "max_len")?)?;
            let h = entropy(&z)?;
            Ok(Computed {
                result: json!({ "shift": shift_to_json(&z), "entropy": entropy_to_json(&h), "finite_type_step": min_step(&z)? }),
                certificates: vec![check("within_tolerance", within(&h, &target, &tol) == Certainty::Yes)],
            })
        }
        "census-sandwich" => {
            let x = shift_field(inputs, "x")?;
            let y = shift_field(inputs, "y")?;
            let target = entropy_from_json(field(config, "target")?)?;
            let realization = match config.get("matrix") {
                Some(Value::Null) | None => None,
                Some(m) => Some(matrix_from_json(m)?),
            };
            let s = census_sandwich(&x, &y, &target, realization)?;
            let blowups: Vec<Value> = s.blowups.iter().map(|b| json!({ "orbit": b.orbit, "multipliers": b.multipliers })).collect();
            Ok(Computed {
                result: json!({
                    "w_matrix": s.w_matrix,
                    "w_entropy": entropy_to_json(&entropy(&s.w)?),
                    "blowups": blowups,
                    "lower": precondition_json(&s.lower),
                    "upper": precondition_json(&s.upper),
                }),
                certificates: vec![
                    check("entropy_equal", entropy(&s.w)? == target),
                    check("lower_holds", s.lower.holds()),
                    check("upper_holds", s.upper.holds()),
                ],
            })
        }
        _ => Err(Error::Parse(format!("unknown command {command:?}"))),
    }
}

/// φ with its domain, and Y (the image of φ when absent).
pub(crate) fn factor_inputs(inputs: &Value) -> Result<(BlockMap, ShiftSpace)> {
    let x = shift_field(inputs, "domain")?;
    let phi = code_from_json(field(inputs, "code")?, Some(&x))?;
    let y = match inputs.get("y") {
        Some(y) => shift_from_json(y)?,
        None => image(&phi)?,
    };
    Ok((phi, y))
}

fn check_budgets(config: &Value, r: &DecompositionReport) -> Result<()> {
    let Some(sft) = &r.trace.sft else { return Ok(()) };
    let over = |key: &str, used: usize| config.get(key).and_then(Value::as_u64).is_some_and(|b| used as u64 > b);
    if over("budget_max_n", sft.n) || over("budget_max_m", sft.m) || over("budget_max_classes", sft.classes) {
        return Err(Error::Budget(format!(
            "decomposition used n = {}, m = {}, N = {}; partial trace: {}",
            sft.n,
            sft.m,
            sft.classes,
            trace_to_json(&r.trace)
        )));
    }
    Ok(())
}

/// Certificates of a decomposition, each re-checkable from the report.
pub(crate) fn decomposition_certificates(r: &DecompositionReport) -> Result<Vec<Value>> {
    let mut c = certificate_to_json(&r.certificate);
    c["check"] = json!("decomposition");
    c["holds"] = json!(r.certificate.first_stage_onto && r.certificate.second_stage_onto);
    let mut out = vec![c];
    out.push(check("entropy_within", within(&r.intermediate_entropy, &r.target, &r.epsilon) == Certainty::Yes));
    if let Some(k) = r.k_step {
        let mut c = check("k_step", is_k_step(&r.intermediate, k)?);
        c["step"] = json!(k);
        out.push(c);
    }
    if let Some(s) = &r.trace.sft {
        let bound = 2 * s.m * s.classes + 1;
        let mut c = check("step_bound", is_k_step(&r.intermediate, bound)?);
        c["step"] = json!(bound);
        out.push(c);
    }
    Ok(out)
}

/// Re-checks a serialized decomposition without re-running the search.
pub(crate) fn recheck_decomposition(command: &str, config: &Value, inputs: &Value, result: &Value, certs: &[Value]) -> Result<usize> {
    let (phi, y) = factor_inputs(inputs)?;
    let phi1 = chain_from_json(field(result, "phi1")?)?;
    let phi2 = chain_from_json(field(result, "phi2")?)?;
    let z = shift_field(result, "intermediate")?;
    let hz = entropy_from_json(field(result, "intermediate_entropy")?)?;
    let target = entropy_from_json(field(result, "target")?)?;
    let eps = epsilon_from_json(field(result, "epsilon")?)?;
    if command == "decompose-factor" && entropy_from_json(field(config, "target")?)? != target {
        return Err(Error::Certificate("report target differs from the configured target".into()));
    }
    if epsilon_from_json(field(config, "epsilon")?)? != eps {
        return Err(Error::Certificate("report tolerance differs from the configured tolerance".into()));
    }
    let named = |name: &str| certs.iter().find(|c| c.get("check").and_then(Value::as_str) == Some(name));
    let require = |name: &str| named(name).ok_or_else(|| Error::Certificate(format!("certificate {name:?} is missing")));
    let mut checked = 0;

    let dec = require("decomposition")?;
    let fresh = verify_decomposition(&phi, &phi1, &phi2, &z, &y).map_err(|e| match e {
        Error::WordNotInDomain(w) | Error::ImageNotInDomain(w) => {
            Error::Certificate(format!("stage tables do not chain: word {w:?} leaves a stage domain"))
        }
        e => e,
    })?;
    let mut expect = certificate_to_json(&fresh);
    expect["check"] = json!("decomposition");
    expect["holds"] = json!(true);
    if *dec != expect {
        return Err(Error::Certificate(format!("decomposition certificate differs: recorded {dec}, recomputed {expect}")));
    }
    checked += 1;

    require("entropy_within")?;
    if entropy(&z)? != hz {
        return Err(Error::Certificate("recorded intermediate entropy is not the entropy of the intermediate shift".into()));
    }
    if within(&hz, &target, &eps) != Certainty::Yes {
        return Err(Error::Certificate("intermediate entropy is not within the tolerance of the target".into()));
    }
    checked += 1;

    if let Some(k) = field(result, "k_step")?.as_u64() {
        let c = require("k_step")?;
        if c.get("step").and_then(Value::as_u64) != Some(k) || !is_k_step(&z, k as usize)? {
            return Err(Error::Certificate(format!("intermediate is not {k}-step")));
        }
        checked += 1;
    }
    let sft = &field(result, "trace")?["sft"];
    if !sft.is_null() {
        let c = require("step_bound")?;
        let bound = 2 * usize_field(sft, "m")? * usize_field(sft, "classes")? + 1;
        if c.get("step").and_then(Value::as_u64) != Some(bound as u64) || !is_k_step(&z, bound)? {
            return Err(Error::Certificate(format!("intermediate is not {bound}-step")));
        }
        checked += 1;
    }
    if entropy(phi.domain())?.cmp_exact(&target) == Ordering::Less {
        return Err(Error::Certificate("target lies above the entropy of the domain".into()));
    }
    Ok(checked)
}
