use std::fmt::Write;

use serde_json::Value;

fn nats(v: &Value) -> String {
    v.get("nats").and_then(Value::as_f64).map_or("-".into(), |x| format!("{x:.6}"))
}

fn poly(v: &Value) -> String {
    v.get("poly").map_or("-".into(), |p| p.to_string())
}

/// Plain-text summary of a report.
pub fn render_table(report: &Value) -> String {
    let r = &report["result"];
    let mut s = String::new();
    let cmd = report["command"].as_str().unwrap_or("?");
    match cmd {
        "entropy" => {
            let _ = writeln!(s, "{:<32} {:>10} {:>5} {:>6} {:>6}  poly", "input", "h (nats)", "irr", "mixing", "period");
            let paths = report["config"]["paths"].as_array().cloned().unwrap_or_default();
            for (i, e) in r["shifts"].as_array().into_iter().flatten().enumerate() {
                let p = paths.get(i).and_then(Value::as_str).unwrap_or("-");
                let st = &e["structure"];
                let _ = writeln!(
                    s,
                    "{:<32} {:>10} {:>5} {:>6} {:>6}  {}",
                    p,
                    nats(&e["entropy"]),
                    st["irreducible"],
                    st["mixing"],
                    st["period"],
                    poly(&e["entropy"])
                );
            }
        }
        "census" => {
            let _ = writeln!(s, "{:>4} {:>20} {:>20}", "k", "q_k", "fixed by σ^k");
            let q = r["q"].as_array().cloned().unwrap_or_default();
            let f = r["fixed"].as_array().cloned().unwrap_or_default();
            for (k, (a, b)) in q.iter().zip(&f).enumerate() {
                let _ = writeln!(s, "{:>4} {:>20} {:>20}", k + 1, a.to_string(), b.to_string());
            }
        }
        "decompose-factor" | "decompose-sft" => {
            let _ = writeln!(s, "target        {}", nats(&r["target"]));
            let _ = writeln!(s, "intermediate  {}  poly {}", nats(&r["intermediate_entropy"]), poly(&r["intermediate_entropy"]));
            let _ = writeln!(s, "epsilon       {}", r["epsilon"]);
            let _ = writeln!(s, "k_step        {}", r["k_step"]);
            let _ = writeln!(s, "stages        {} + {}", r["phi1"].as_array().map_or(0, Vec::len), r["phi2"].as_array().map_or(0, Vec::len));
        }
        "sample-s0" => {
            let _ = writeln!(s, "{:>10} {:>14} {:>10}", "target", "status", "h");
            for row in r["rows"].as_array().into_iter().flatten() {
                let st = &row["row"];
                let _ = writeln!(s, "{:>10} {:>14} {:>10}", nats(&row["target"]), st["status"].as_str().unwrap_or("?"), nats(&st["entropy"]));
            }
        }
        "embed-oracle" => {
            let _ = writeln!(s, "set {}  member {}  witness {}", r["set"], r["member"], r["witness"]);
            let _ = writeln!(s, "{}", r["hypotheses"].as_str().unwrap_or(""));
        }
        _ => {
            let _ = writeln!(s, "{}", serde_json::to_string_pretty(r).unwrap_or_default());
        }
    }
    for c in report["certificates"].as_array().into_iter().flatten() {
        let _ = writeln!(s, "certificate {:<20} {}", c["check"].as_str().unwrap_or("?"), if c["holds"] == Value::Bool(true) { "ok" } else { "FAILED" });
    }
    s
}
