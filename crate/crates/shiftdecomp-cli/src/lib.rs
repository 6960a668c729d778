//! Batch front end: reads shift and code files, runs one command and
//! writes a JSON report (or a plain table).
//!
//! Exit codes: 0 ok, 1 parse, 2 precondition, 3 budget, 4 inexact target,
//! 5 certificate failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use shift_decomp::json::{entropy_to_json, parse_text, shift_from_json, target_from_json, FORMAT_VERSION};
use shift_decomp::{Error, ErrorClass, Result};

pub mod commands;
mod table;

use commands::{compute, field, recheck_decomposition, RECOMPUTED};

pub use table::render_table;

#[derive(Parser, Debug)]
#[command(name = "shiftdecomp", version, about = "Exact decompositions of sliding block codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the report here (atomically) instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed echoed into the config; every search in this tool is deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Print a plain-text table to stdout.
    #[arg(long, global = true)]
    pub table: bool,
}

#[derive(Args, Debug, Clone)]
pub struct FactorArgs {
    /// Domain shift file.
    #[arg(long)]
    pub input: PathBuf,
    /// Code file for φ.
    #[arg(long)]
    pub code: PathBuf,
    /// Shift file for Y; the image of φ when omitted.
    #[arg(long)]
    pub y: Option<PathBuf>,
    /// Tolerance, e.g. "1/10*log(2)" or "1/1000".
    #[arg(long)]
    pub epsilon: String,
    #[arg(long)]
    pub budget_max_n: Option<u64>,
    #[arg(long)]
    pub budget_max_m: Option<u64>,
    #[arg(long)]
    pub budget_max_classes: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Entropy and structure of each input shift.
    Entropy {
        #[arg(long, required = true, num_args = 1..)]
        input: Vec<PathBuf>,
    },
    /// Least-period counts q_1..q_K.
    Census {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 12)]
        budget_horizon: usize,
    },
    /// Irreducibility, period, mixing and finite-type step.
    Structure {
        #[arg(long)]
        input: PathBuf,
    },
    /// The higher block shift X^[n].
    HigherBlock {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1 << 20)]
        budget_states: usize,
    },
    /// Forbids extra words; each --word is comma-separated symbols.
    Forbid {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "word", required = true)]
        words: Vec<String>,
    },
    /// Image of a code.
    Image {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        code: PathBuf,
    },
    /// outer ∘ inner; the outer code is read over the image of the inner.
    Compose {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        inner: PathBuf,
        #[arg(long)]
        outer: PathBuf,
    },
    /// Checks a code table and reports image and injectivity.
    VerifyCode {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        y: Option<PathBuf>,
    },
    /// Factors φ through an intermediate shift of finite type near the target.
    DecomposeFactor {
        #[command(flatten)]
        args: FactorArgs,
        /// Target entropy: expression, exact JSON object, or a file holding one.
        #[arg(long)]
        target: String,
    },
    /// Splits φ with an intermediate of finite type within ε of h(X).
    DecomposeSft {
        #[command(flatten)]
        args: FactorArgs,
    },
    /// Runs the decomposition over a grid of targets.
    SampleS0 {
        #[command(flatten)]
        args: FactorArgs,
        #[arg(long = "target", required = true)]
        grid: Vec<String>,
    },
    /// Blows up a periodic orbit; --orbit and --multipliers are comma-separated.
    Blowup {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        orbit: String,
        #[arg(long)]
        multipliers: String,
        #[arg(long, default_value_t = 12)]
        budget_horizon: usize,
    },
    /// The block-cyclic matrix B_n; --matrix is a JSON matrix or a file.
    BuildBn {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        n: usize,
    },
    /// Entropy and census conditions for X ↪ Y.
    EmbedPreconditions {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        y: PathBuf,
    },
    /// Membership in an entropy set of an embedding.
    EmbedOracle {
        #[arg(long)]
        set: String,
        #[arg(long)]
        target: String,
        /// h(X); taken from --x when omitted.
        #[arg(long)]
        hx: Option<String>,
        #[arg(long)]
        hy: Option<String>,
        #[arg(long)]
        x: Option<PathBuf>,
        #[arg(long)]
        y: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        q: u64,
        #[arg(long, default_value_t = u64::MAX)]
        budget_r: u64,
        #[arg(long)]
        x_irreducible: bool,
        #[arg(long)]
        nonwandering: bool,
    },
    /// Searches for X ⊂ Z ⊂ Y with h(Z) near the target.
    BetweenSearch {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        y: PathBuf,
        #[arg(long)]
        target: String,
        #[arg(long)]
        epsilon: String,
        #[arg(long, default_value = "none")]
        require: String,
        #[arg(long, default_value_t = 8)]
        budget_max_len: usize,
    },
    /// A mixing SFT W at the target entropy with X ↪ W ↪ Y conditions.
    CensusSandwich {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        y: PathBuf,
        #[arg(long)]
        target: String,
        #[arg(long)]
        matrix: Option<String>,
    },
    /// Re-checks a report from its serialized data.
    Verify {
        report: PathBuf,
    },
}

pub fn exit_code(e: &Error) -> i32 {
    match e.class() {
        ErrorClass::Parse => 1,
        ErrorClass::Precondition => 2,
        ErrorClass::Budget => 3,
        ErrorClass::InexactTarget => 4,
        ErrorClass::Certificate => 5,
    }
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_text(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        e => e,
    })
}

fn read_shift(path: &Path) -> Result<Value> {
    let v = read_json(path)?;
    shift_from_json(&v)?;
    Ok(v)
}

/// Inline JSON, a path to a JSON file, or an expression.
fn target_arg(s: &str) -> Result<Value> {
    let v = if s.trim_start().starts_with('{') {
        parse_text(s)?
    } else if Path::new(s).is_file() {
        read_json(Path::new(s))?
    } else {
        Value::String(s.to_string())
    };
    Ok(entropy_to_json(&target_from_json(&v)?))
}

fn json_arg(s: &str) -> Result<Value> {
    if Path::new(s).is_file() {
        read_json(Path::new(s))
    } else {
        parse_text(s)
    }
}

fn list(s: &str) -> Vec<String> {
    s.split(',').map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect()
}

fn factor_parts(a: &FactorArgs) -> Result<(Value, Value)> {
    let mut inputs = json!({ "domain": read_shift(&a.input)?, "code": read_json(&a.code)? });
    if let Some(y) = &a.y {
        inputs["y"] = read_shift(y)?;
    }
    let config = json!({
        "epsilon": a.epsilon,
        "budget_max_n": a.budget_max_n,
        "budget_max_m": a.budget_max_m,
        "budget_max_classes": a.budget_max_classes,
    });
    Ok((config, inputs))
}

/// Command name, config and inputs for a report-producing command.
pub fn prepare(cmd: &Command) -> Result<(&'static str, Value, Value)> {
    use Command::*;
    Ok(match cmd {
        Entropy { input } => {
            let shifts = input.iter().map(|p| read_shift(p)).collect::<Result<Vec<_>>>()?;
            let paths: Vec<String> = input.iter().map(|p| p.display().to_string()).collect();
            ("entropy", json!({ "paths": paths }), json!({ "shifts": shifts }))
        }
        Census { input, budget_horizon } => ("census", json!({ "horizon": budget_horizon }), json!({ "shift": read_shift(input)? })),
        Structure { input } => ("structure", json!({}), json!({ "shift": read_shift(input)? })),
        HigherBlock { input, n, budget_states } => {
            ("higher-block", json!({ "n": n, "state_budget": budget_states }), json!({ "shift": read_shift(input)? }))
        }
        Forbid { input, words } => {
            let w: Vec<Vec<String>> = words.iter().map(|w| list(w)).collect();
            ("forbid", json!({ "words": w }), json!({ "shift": read_shift(input)? }))
        }
        Image { input, code } => ("image", json!({}), json!({ "domain": read_shift(input)?, "code": read_json(code)? })),
        Compose { input, inner, outer } => (
            "compose",
            json!({}),
            json!({ "domain": read_shift(input)?, "inner": read_json(inner)?, "outer": read_json(outer)? }),
        ),
        VerifyCode { input, code, y } => {
            let mut inputs = json!({ "domain": read_shift(input)?, "code": read_json(code)? });
            if let Some(y) = y {
                inputs["y"] = read_shift(y)?;
            }
            ("verify-code", json!({}), inputs)
        }
        DecomposeFactor { args, target } => {
            let (mut config, inputs) = factor_parts(args)?;
            config["target"] = target_arg(target)?;
            ("decompose-factor", config, inputs)
        }
        DecomposeSft { args } => {
            let (config, inputs) = factor_parts(args)?;
            ("decompose-sft", config, inputs)
        }
        SampleS0 { args, grid } => {
            let (mut config, inputs) = factor_parts(args)?;
            config["grid"] = Value::Array(grid.iter().map(|t| target_arg(t)).collect::<Result<_>>()?);
            ("sample-s0", config, inputs)
        }
        Blowup { input, orbit, multipliers, budget_horizon } => {
            let m = list(multipliers)
                .iter()
                .map(|s| s.parse::<usize>().map_err(|_| Error::Parse(format!("bad multiplier {s:?}"))))
                .collect::<Result<Vec<_>>>()?;
            (
                "blowup",
                json!({ "orbit": list(orbit), "multipliers": m, "horizon": budget_horizon }),
                json!({ "shift": read_shift(input)? }),
            )
        }
        BuildBn { matrix, n } => ("build-bn", json!({ "matrix": json_arg(matrix)?, "n": n }), json!({})),
        EmbedPreconditions { input, y } => {
            ("embed-preconditions", json!({}), json!({ "x": read_shift(input)?, "y": read_shift(y)? }))
        }
        EmbedOracle { set, target, hx, hy, x, y, p, q, budget_r, x_irreducible, nonwandering } => {
            let side = |e: &Option<String>, s: &Option<PathBuf>, name: &str| -> Result<Value> {
                match (e, s) {
                    (Some(e), _) => target_arg(e),
                    (None, Some(p)) => {
                        let sh = shift_from_json(&read_shift(p)?)?;
                        Ok(entropy_to_json(&shift_decomp::algebra::entropy(&sh)?))
                    }
                    (None, None) => Err(Error::Parse(format!("give --h{name} or --{name}"))),
                }
            };
            let config = json!({
                "set": set,
                "h": target_arg(target)?,
                "hx": side(hx, x, "x")?,
                "hy": side(hy, y, "y")?,
                "p": p,
                "q": q,
                "r_bound": budget_r,
                "x_irreducible": x_irreducible,
                "nonwandering": nonwandering,
            });
            ("embed-oracle", config, json!({}))
        }
        BetweenSearch { input, y, target, epsilon, require, budget_max_len } => (
            "between-search",
            json!({ "target": target_arg(target)?, "tolerance": epsilon, "require": require, "max_len": budget_max_len }),
            json!({ "x": read_shift(input)?, "y": read_shift(y)? }),
        ),
        CensusSandwich { input, y, target, matrix } => {
            let m = matrix.as_deref().map(json_arg).transpose()?;
            (
                "census-sandwich",
                json!({ "target": target_arg(target)?, "matrix": m }),
                json!({ "x": read_shift(input)?, "y": read_shift(y)? }),
            )
        }
        Verify { .. } => return Err(Error::Precondition("verify does not produce a report".into())),
    })
}

/// Runs a command on prepared data and wraps the result in a report.
pub fn run_prepared(command: &str, mut config: Value, inputs: Value, seed: u64) -> Result<Value> {
    let c = compute(command, &config, &inputs)?;
    if let Some((i, bad)) = c.certificates.iter().enumerate().find(|(_, c)| c["holds"] == json!(false)) {
        return Err(Error::Certificate(format!("certificate {i} failed: {bad}")));
    }
    config["seed"] = json!(seed);
    Ok(json!({
        "format": "shiftdecomp-report",
        "version": FORMAT_VERSION,
        "command": command,
        "config": config,
        "inputs": inputs,
        "result": c.result,
        "certificates": c.certificates,
    }))
}

/// What [`verify_report`] re-checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub command: String,
    pub certificates: usize,
}

/// Re-checks a report from its serialized data alone.
///
/// Decomposition reports are checked certificate by certificate without
/// re-running the search; every other report is recomputed from its
/// config and inputs and must match exactly.
pub fn verify_report(report: &Value) -> Result<Verdict> {
    if report.get("format").and_then(Value::as_str) != Some("shiftdecomp-report") {
        return Err(Error::Parse("not a shiftdecomp report".into()));
    }
    match report.get("version").and_then(Value::as_u64) {
        Some(FORMAT_VERSION) => {}
        v => return Err(Error::Parse(format!("unsupported report version {v:?}; expected {FORMAT_VERSION}"))),
    }
    let command = field(report, "command")?.as_str().ok_or_else(|| Error::Parse("command must be a string".into()))?;
    let config = field(report, "config")?;
    let inputs = field(report, "inputs")?;
    let result = field(report, "result")?;
    let certs = field(report, "certificates")?
        .as_array()
        .ok_or_else(|| Error::Certificate("certificates section is missing".into()))?;
    if let Some(bad) = certs.iter().find(|c| c.get("holds") != Some(&json!(true))) {
        return Err(Error::Certificate(format!("recorded certificate does not hold: {bad}")));
    }
    let n = if command == "decompose-factor" || command == "decompose-sft" {
        recheck_decomposition(command, config, inputs, result, certs)?
    } else if RECOMPUTED.contains(&command) {
        let fresh = compute(command, config, inputs)?;
        if fresh.result != *result {
            return Err(Error::Certificate(format!("{command} result does not match its recomputation")));
        }
        if fresh.certificates.len() != certs.len() {
            return Err(Error::Certificate(format!(
                "{command} report has {} certificate(s), expected {}",
                certs.len(),
                fresh.certificates.len()
            )));
        }
        if let Some((c, _)) = fresh.certificates.iter().zip(certs).find(|(a, b)| a != b) {
            return Err(Error::Certificate(format!("certificate differs from recomputation: {c}")));
        }
        fresh.certificates.len() + 1
    } else {
        return Err(Error::Parse(format!("unknown command {command:?}")));
    };
    Ok(Verdict { command: command.to_string(), certificates: n })
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let mut f = fs::File::create(&tmp)?;
    f.write_all(bytes)?;
    f.sync_all()?;
    fs::rename(&tmp, path)
}

/// Runs the parsed command line. Returns the text for stdout.
pub fn execute(cli: &Cli) -> Result<String> {
    if let Command::Verify { report } = &cli.command {
        let v = verify_report(&read_json(report)?)?;
        return Ok(format!("ok: {} report, {} check(s) passed\n", v.command, v.certificates));
    }
    let (command, config, inputs) = prepare(&cli.command)?;
    let report = run_prepared(command, config, inputs, cli.seed)?;
    let mut text = serde_json::to_string_pretty(&report).expect("reports serialize");
    text.push('\n');
    if let Some(out) = &cli.out {
        write_atomic(out, text.as_bytes()).map_err(|e| Error::Parse(format!("{}: {e}", out.display())))?;
    }
    Ok(match (cli.table, &cli.out) {
        (true, _) => render_table(&report),
        (false, Some(_)) => String::new(),
        (false, None) => text,
    })
}
