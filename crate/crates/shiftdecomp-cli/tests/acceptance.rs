//! End-to-end acceptance run: one PASS/FAIL line per criterion, driven
//! through the command-line front end where a command exists.

use std::cell::RefCell;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Parser;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use shift_decomp::algebra::{entropy, is_perron, is_weak_perron, q_census, AlgebraicReal, IntPoly};
use shift_decomp::algebra::census::to_u64_vec;
use shift_decomp::codes::image;
use shift_decomp::embed::{blow_up, periodic_orbits, BlowupSpec};
use shift_decomp::factor::{hat_z, normalize};
use shift_decomp::json::{code_from_json, shift_from_json};
use shift_decomp::shift::{language_eq, structure};
use shift_decomp::{Error, ShiftSpace};
use shiftdecomp_cli::{execute, exit_code, read_json, verify_report, Cli};

struct Run {
    dir: tempfile::TempDir,
    count: RefCell<usize>,
    reports: RefCell<Vec<(String, PathBuf)>>,
}

impl Run {
    fn file(&self, name: &str, v: &Value) -> String {
        let p = self.dir.path().join(name);
        std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
        p.display().to_string()
    }

    /// Runs a command line, keeping the report for the self-verification step.
    fn cli(&self, label: &str, args: &[&str]) -> Result<Value, Error> {
        let n = {
            let mut c = self.count.borrow_mut();
            *c += 1;
            *c
        };
        let out = self.dir.path().join(format!("report{n}.json"));
        let mut argv = vec!["shiftdecomp"];
        argv.extend_from_slice(args);
        let o = out.display().to_string();
        argv.extend_from_slice(&["--out", &o]);
        let cli = Cli::try_parse_from(&argv).unwrap_or_else(|e| panic!("{label}: {e}"));
        execute(&cli)?;
        self.reports.borrow_mut().push((label.to_string(), out.clone()));
        Ok(read_json(&out).unwrap())
    }
}

fn report(id: &str, ok: bool, detail: String) -> bool {
    println!("{id:<4} {}  {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn certs_hold(r: &Value) -> bool {
    r["certificates"].as_array().unwrap().iter().all(|c| c["holds"] == json!(true))
}

fn full2() -> Value {
    json!({"kind": "sft", "alphabet": ["0", "1"], "forbidden": []})
}

fn constant_code() -> Value {
    json!({"memory": 0, "anticipation": 0, "table": [{"window": ["0"], "out": "0"}, {"window": ["1"], "out": "0"}]})
}

fn c1(run: &Run) -> (bool, Vec<Value>) {
    let x = run.file("full2.json", &full2());
    let code = run.file("const.json", &constant_code());
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    let mut reports = Vec::new();
    for t in ["1/5", "7/20", "1/2", "13/20"] {
        let target = format!("{t}*log(2)");
        let args = ["decompose-factor", "--input", &x, "--code", &code, "--target", &target, "--epsilon", "1/10*log(2)"];
        match run.cli("C1", &args) {
            Ok(r) => {
                let res = &r["result"];
                let h = res["intermediate_entropy"]["nats"].as_f64().unwrap();
                let step = &res["k_step"];
                let checks: Vec<&str> = r["certificates"].as_array().unwrap().iter().map(|c| c["check"].as_str().unwrap()).collect();
                let good = certs_hold(&r) && checks.contains(&"decomposition") && checks.contains(&"entropy_within") && checks.contains(&"k_step");
                ok &= good;
                parts.push(format!("{t}: h={h:.4} step={step}"));
                reports.push(r);
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{t}: {e}"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 300.0;
    (report("C1", ok, format!("{} in {secs:.1}s", parts.join(", "))), reports)
}

fn c2(run: &Run, c1_reports: &[Value]) -> bool {
    let calls = c1_reports.iter().filter(|r| !r["result"]["trace"]["sft"].is_null()).count();
    let mut ok = c1_reports.iter().filter(|r| !r["result"]["trace"]["sft"].is_null()).all(|r| {
        r["certificates"].as_array().unwrap().iter().any(|c| c["check"] == "step_bound" && c["holds"] == json!(true))
    });
    let x = run.file("full2.json", &full2());
    let code = run.file("const.json", &constant_code());
    let detail = match run.cli("C2", &["decompose-sft", "--input", &x, "--code", &code, "--epsilon", "1/2"]) {
        Ok(r) => {
            let sft = &r["result"]["trace"]["sft"];
            let bound = r["certificates"].as_array().unwrap().iter().find(|c| c["check"] == "step_bound").cloned();
            let (m, big_n) = (sft["m"].as_u64().unwrap_or(0), sft["classes"].as_u64().unwrap_or(0));
            let holds = bound.as_ref().is_some_and(|b| b["holds"] == json!(true) && b["step"] == json!(2 * m * big_n + 1));
            ok &= holds;
            format!("{calls} split_sft call(s) inside criterion 1; direct run n={} m={m} N={big_n} is {}-step: {holds}", sft["n"], 2 * m * big_n + 1)
        }
        Err(e) => {
            ok = false;
            format!("direct split_sft run failed: {e}")
        }
    };
    report("C2", ok, detail)
}

fn c3() -> bool {
    let x = shift_from_json(&full2()).unwrap();
    let phi = code_from_json(&constant_code(), Some(&x)).unwrap();
    let z = shift_from_json(&json!({"kind": "sft", "alphabet": ["0", "1"], "forbidden": [["0", "0"]]})).unwrap();
    let hz = entropy(&z).unwrap();
    let tr = normalize(&x, &z, &phi).unwrap();
    let yb = image(&tr.phi).unwrap();
    let hats: Vec<_> = (0..=10).map(|n| entropy(&hat_z(&tr, &yb, n).unwrap()).unwrap()).collect();
    let monotone = hats.windows(2).all(|w| w[1].cmp_exact(&w[0]) != std::cmp::Ordering::Greater);
    let above = hats.iter().all(|h| h.cmp_exact(&hz) != std::cmp::Ordering::Less);
    let gap = hats[10].nats() - hz.nats();
    report("C3", monotone && above && gap < 1e-3, format!("h(Ẑ_n) nonincreasing: {monotone}, ≥ h(Z): {above}, gap at n=10: {gap:.2e} nats"))
}

fn essential(a: &[Vec<u64>]) -> bool {
    let n = a.len();
    (0..n).all(|i| a[i].iter().any(|&x| x > 0) && (0..n).any(|j| a[j][i] > 0))
}

fn traces(a: &[Vec<u64>], k: usize) -> Vec<u128> {
    let n = a.len();
    let mut p: Vec<Vec<u128>> = (0..n).map(|i| (0..n).map(|j| (i == j) as u128).collect()).collect();
    let mut out = Vec::new();
    for _ in 0..k {
        p = (0..n).map(|i| (0..n).map(|j| (0..n).map(|l| p[i][l] * a[l][j] as u128).sum()).collect()).collect();
        out.push((0..n).map(|i| p[i][i]).sum());
    }
    out
}

fn as_u128(v: &Value) -> u128 {
    match v {
        Value::Number(n) => n.as_u64().unwrap() as u128,
        Value::String(s) => s.parse().unwrap(),
        _ => panic!("not a count: {v}"),
    }
}

fn c4(run: &Run) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut bad = Vec::new();
    let mut done = 0;
    while done < 50 {
        let n = rng.gen_range(1..=6);
        let a: Vec<Vec<u64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_bool(0.45) as u64).collect()).collect();
        if !essential(&a) {
            continue;
        }
        done += 1;
        let f = run.file(&format!("m{done}.json"), &json!({"kind": "edge_shift", "matrix": a}));
        let r = match run.cli("C4", &["census", "--input", &f, "--budget-horizon", "12"]) {
            Ok(r) => r,
            Err(e) => {
                bad.push(format!("{a:?}: {e}"));
                continue;
            }
        };
        let q: Vec<u128> = r["result"]["q"].as_array().unwrap().iter().map(as_u128).collect();
        for (k, t) in traces(&a, 12).into_iter().enumerate() {
            let k = k + 1;
            let s: u128 = (1..=k).filter(|d| k % d == 0).map(|d| q[d - 1]).sum();
            if s != t {
                bad.push(format!("{a:?} k={k}: {s} vs {t}"));
            }
        }
    }
    report("C4", bad.is_empty(), format!("50 matrices, k ≤ 12, {} violation(s) {}", bad.len(), bad.first().cloned().unwrap_or_default()))
}

fn expected_census(before: &[u64], n: usize, ms: &[usize]) -> Vec<u64> {
    let mut q = before.to_vec();
    let ones = ms.iter().filter(|&&m| m == 1).count() as u64;
    q[n - 1] = q[n - 1] - n as u64 + n as u64 * ones;
    for &m in ms.iter().filter(|&&m| m > 1) {
        if n * m <= q.len() {
            q[n * m - 1] += (n * m) as u64;
        }
    }
    q
}

fn c5() -> bool {
    let fixtures = [vec![vec![2]], vec![vec![1, 1], vec![1, 0]], vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]];
    let mut lists: Vec<Vec<usize>> = Vec::new();
    for k in 1..=3u32 {
        for c in 0..4usize.pow(k) {
            let mut c = c;
            lists.push((0..k).map(|_| {
                let m = c % 4 + 1;
                c /= 4;
                m
            }).collect());
        }
    }
    let (mut total, mut bad) = (0, Vec::new());
    for a in fixtures {
        let x = ShiftSpace::edge_shift(a.clone()).unwrap();
        let mixing = structure(&x).unwrap().mixing;
        for n in 1..=3 {
            for o in periodic_orbits(&x, n).unwrap() {
                for ms in &lists {
                    total += 1;
                    let h = n * ms.iter().max().unwrap() + n;
                    let spec = BlowupSpec { orbit: o.clone(), multipliers: ms.clone() };
                    match blow_up(&x, &spec) {
                        Ok(z) => {
                            let before = to_u64_vec(&q_census(&x, h).unwrap());
                            let after = to_u64_vec(&q_census(&z, h).unwrap());
                            if after != expected_census(&before, n, ms) {
                                bad.push(format!("{a:?} {o:?} {ms:?}: census"));
                            }
                            if mixing && !structure(&z).unwrap().mixing {
                                bad.push(format!("{a:?} {o:?} {ms:?}: mixing lost"));
                            }
                        }
                        Err(e) => bad.push(format!("{a:?} {o:?} {ms:?}: {e}")),
                    }
                }
            }
        }
    }
    report("C5", bad.is_empty(), format!("{total} blow-ups, {} failure(s) {}", bad.len(), bad.first().cloned().unwrap_or_default()))
}

fn c6(run: &Run) -> bool {
    let mut bad = Vec::new();
    for b in ["[[2]]", "[[1,1],[1,0]]"] {
        for n in 1..=5 {
            let ns = n.to_string();
            match run.cli("C6", &["build-bn", "--matrix", b, "--n", &ns]) {
                Ok(r) if r["result"]["period"] == json!(n) && certs_hold(&r) => {}
                Ok(r) => bad.push(format!("{b} n={n}: period {}", r["result"]["period"])),
                Err(e) => bad.push(format!("{b} n={n}: {e}")),
            }
        }
    }
    report("C6", bad.is_empty(), format!("B ∈ {{[[2]], golden}}, n ≤ 5, {} failure(s) {}", bad.len(), bad.join("; ")))
}

fn root(c: &[i64]) -> AlgebraicReal {
    AlgebraicReal::largest_root(&IntPoly::from_i64(c)).unwrap()
}

fn c7() -> bool {
    let t = [root(&[-2, 1]), root(&[-1, -1, 1]), root(&[1, -3, 1])].iter().map(|x| is_perron(x).unwrap()).collect::<Vec<_>>();
    let s2 = root(&[-2, 0, 1]);
    let f = is_perron(&s2).unwrap();
    let w = is_weak_perron(&s2).unwrap();
    let ok = t.iter().all(|&b| b) && !f && w == Some(2);
    report("C7", ok, format!("Perron {t:?}, √2 Perron {f}, √2 weak Perron exponent {w:?}"))
}

fn c8(run: &Run) -> bool {
    let q = |t: &str, p: &str| -> Result<Value, Error> {
        run.cli("C8", &["embed-oracle", "--set", "t0", "--target", t, "--hx", "0", "--hy", "log(2)", "--p", p, "--q", "1"])
    };
    let a = q("1/2*log(2)", "2").map(|r| (r["result"]["member"].clone(), r["result"]["witness"].clone()));
    let b = q("1/2*log(2)", "1").map(|r| r["result"]["member"].clone());
    let golden = run.file("golden_base.json", &json!({"poly": [-1, -1, 1], "interval": ["3/2", "2/1"]}));
    let c = q(&golden, "1").map(|r| r["result"]["member"].clone());
    let ok = matches!(&a, Ok((m, w)) if *m == json!(true) && *w == json!(2))
        && matches!(&b, Ok(m) if *m == json!(false))
        && matches!(&c, Ok(m) if *m == json!(true));
    report("C8", ok, format!("(log√2, p=2) → {a:?}; (log√2, p=1) → {b:?}; (log golden, p=1) → {c:?}"))
}

fn c9(run: &Run) -> bool {
    let zero = run.file("zero.json", &json!({"kind": "sft", "alphabet": ["0", "1"], "forbidden": [["1"]]}));
    let even = json!({"kind": "sofic", "states": ["a", "b"], "edges": [
        {"from": "a", "to": "a", "label": "0"}, {"from": "a", "to": "b", "label": "1"}, {"from": "b", "to": "a", "label": "1"}]});
    let even_f = run.file("even.json", &even);
    let mut ok = true;
    let mut parts = Vec::new();
    // 0.2, 0.3, 0.4 nats as logarithms of nearby rationals
    for (nats, p, q) in [(0.2, 11, 9), (0.3, 27, 20), (0.4, 82, 55)] {
        let r = format!("{p}/{q}");
        let t = run.file(&format!("t{q}.json"), &json!({"poly": [-p, q], "interval": [r, r]}));
        let r = run.cli("C9", &["between-search", "--input", &zero, "--y", &even_f, "--target", &t, "--epsilon", "1/20", "--require", "sft", "--budget-max-len", "8"]);
        let nf = matches!(r, Err(Error::NotFound(_)));
        ok &= nf;
        parts.push(format!("{nats}: {}", if nf { "NotFound".to_string() } else { format!("{r:?}").chars().take(80).collect() }));
    }
    let golden = run.file("golden_base.json", &json!({"poly": [-1, -1, 1], "interval": ["3/2", "2/1"]}));
    let s = run.cli("C9", &["between-search", "--input", &zero, "--y", &even_f, "--target", &golden, "--epsilon", "1/20", "--require", "sofic"]);
    let y_back = match &s {
        Ok(r) => language_eq(&shift_from_json(&r["result"]["shift"]).unwrap(), &shift_from_json(&even).unwrap()).unwrap(),
        Err(_) => false,
    };
    ok &= y_back;
    parts.push(format!("sofic at log golden returns Y: {y_back}"));
    report("C9", ok, parts.join(", "))
}

fn c10(run: &Run) -> bool {
    let golden = run.file("golden.json", &json!({"kind": "sft", "alphabet": ["0", "1"], "forbidden": [["1", "1"]]}));
    let f2 = run.file("full2.json", &full2());
    let a = run.cli("C10", &["embed-preconditions", "--input", &golden, "--y", &f2]);
    let b = run.cli("C10", &["embed-preconditions", "--input", &f2, "--y", &golden]);
    let ok_a = matches!(&a, Ok(r) if r["result"]["entropy_ok"] == json!(true) && r["result"]["census_ok"] == json!(true) && r["result"]["census_horizon"].is_u64());
    let ok_b = matches!(&b, Ok(r) if r["result"]["entropy_ok"] == json!(false));
    let k = a.as_ref().map(|r| r["result"]["census_horizon"].clone()).unwrap_or_default();
    report("C10", ok_a && ok_b, format!("golden ↪ full-2 certified with K* = {k}: {ok_a}; full-2 ↪ golden rejected on entropy: {ok_b}"))
}

fn mutant(base: &Value, f: impl Fn(&mut Value)) -> Value {
    let mut m = base.clone();
    f(&mut m);
    m
}

fn c11(run: &Run, decomposition: Option<&Value>) -> bool {
    let reports = run.reports.borrow().clone();
    let mut rejected = Vec::new();
    for (label, p) in &reports {
        if let Err(e) = verify_report(&read_json(p).unwrap()) {
            rejected.push(format!("{label}: {e}"));
        }
    }
    let Some(d) = decomposition else {
        return report("C11", false, "no decomposition report to mutate".into());
    };
    let flipped = mutant(d, |m| m["inputs"]["code"]["table"][1]["out"] = json!("1"));
    let interval = mutant(d, |m| {
        let iv = &mut m["result"]["intermediate_entropy"]["interval"];
        *iv = json!(["3/2", "2/1"]);
    });
    let dropped = mutant(d, |m| {
        let c = m["certificates"].as_array_mut().unwrap();
        c.retain(|c| c["check"] != "decomposition");
    });
    let outcomes: Vec<(&str, Result<_, Error>)> =
        vec![("flipped entry", verify_report(&flipped)), ("altered interval", verify_report(&interval)), ("dropped certificate", verify_report(&dropped))];
    let caught = outcomes.iter().all(|(_, r)| r.is_err());
    let desc: Vec<String> = outcomes
        .iter()
        .map(|(n, r)| match r {
            Err(e) => format!("{n} → exit {}", exit_code(e)),
            Ok(_) => format!("{n} → accepted"),
        })
        .collect();
    report(
        "C11",
        rejected.is_empty() && caught,
        format!(
            "{}/{} reports verified; mutants: {}{}",
            reports.len() - rejected.len(),
            reports.len(),
            desc.join(", "),
            if rejected.is_empty() { String::new() } else { format!("; rejected: {}", rejected.join("; ")) }
        ),
    )
}

fn main() {
    let run = Run { dir: tempfile::tempdir().unwrap(), count: RefCell::new(0), reports: RefCell::new(Vec::new()) };
    assert!(Path::new(run.dir.path()).is_dir());
    let (ok1, c1_reports) = c1(&run);
    let results = [
        ok1,
        c2(&run, &c1_reports),
        c3(),
        c4(&run),
        c5(),
        c6(&run),
        c7(),
        c8(&run),
        c9(&run),
        c10(&run),
        c11(&run, c1_reports.first()),
    ];
    let passed = results.iter().filter(|&&b| b).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
