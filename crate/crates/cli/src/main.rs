mod args;
mod output;

use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::Parser;
use opmeans::harness::{self, FuzzConfig, Suite};
use opmeans::matfun::{parse_spd_json, SpdMatrix};
use opmeans::operator::mean;
use opmeans::scalar::{PosReal, Weight};
use serde_json::{json, Value};

use args::{Cli, Command, SearchTarget, VerifyArgs};
use output::to_json;

/// `println!` that ignores a closed stdout.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

/// Input problems; everything else that stops a run is a violation.
#[derive(Debug)]
struct InputError(anyhow::Error);

enum Outcome {
    Ok,
    Violation,
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let json_mode = argv.iter().any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            if json_mode {
                eprintln!("{}", to_json(&json!({ "error": e.to_string().trim() })));
            } else {
                let _ = e.print();
            }
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Violation) => ExitCode::from(1),
        Err(InputError(e)) => {
            let msg = format!("{e:#}");
            if cli.json {
                eprintln!("{}", to_json(&json!({ "error": msg })));
            } else {
                eprintln!("error: {msg}");
            }
            ExitCode::from(2)
        }
    }
}

fn input<T>(r: anyhow::Result<T>) -> Result<T, InputError> {
    r.map_err(InputError)
}

/// Flags and file settings that are not part of [`FuzzConfig`].
#[derive(Default)]
struct Extras {
    json: Option<bool>,
    iters: Option<usize>,
}

fn load_config(cli: &Cli) -> anyhow::Result<(FuzzConfig, Extras)> {
    let mut extras = Extras::default();
    let mut cfg = match &cli.config {
        None => FuzzConfig::default(),
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let mut v: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
            if let Some(obj) = v.as_object_mut() {
                if let Some(j) = obj.remove("json") {
                    extras.json = Some(j.as_bool().context("config key json must be a boolean")?);
                }
                if let Some(i) = obj.remove("iters") {
                    extras.iters =
                        Some(i.as_u64().context("config key iters must be a non-negative integer")? as usize);
                }
            }
            serde_json::from_value(v).with_context(|| format!("invalid config {}", path.display()))?
        }
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(tol) = cli.tol {
        cfg.tol = tol;
    }
    Ok((cfg, extras))
}

fn run(cli: &Cli) -> Result<Outcome, InputError> {
    let (cfg, extras) = input(load_config(cli))?;
    let json_mode = cli.json || extras.json.unwrap_or(false);
    match &cli.command {
        Command::Scalar { kind, t, r, a, b } => input(cmd_scalar(kind, t, *r, *a, *b, json_mode)),
        Command::Matrix { kind, t, a, b, out } => input(cmd_matrix(kind, t, a, b, out.as_deref(), json_mode)),
        Command::Verify(v) => {
            let cfg = input(verify_config(cfg, v))?;
            input(cmd_verify(&cfg, json_mode))
        }
        Command::Search { target: SearchTarget::Heronian, iters, t } => {
            let iters = iters.or(extras.iters).unwrap_or(1000);
            let t = input(t.as_deref().map(args::parse_weight).transpose())?;
            input(cmd_search(cfg.seed, iters, t, json_mode))
        }
    }
}

fn cmd_scalar(kind: &str, t: &str, r: Option<f64>, a: f64, b: f64, json_mode: bool) -> anyhow::Result<Outcome> {
    let kind = args::scalar_kind(kind, r)?;
    let t = args::parse_weight(t)?;
    let value = kind.eval(PosReal::new(a)?, PosReal::new(b)?, t)?.value();
    if json_mode {
        let mut obj = json!({ "kind": kind.name(), "a": a, "b": b, "value": value });
        match r {
            Some(r) => obj["r"] = json!(r),
            None => obj["t"] = json!(t.value()),
        }
        out!("{}", to_json(&obj));
    } else {
        out!("{value}");
    }
    Ok(Outcome::Ok)
}

fn read_spd(path: &Path) -> anyhow::Result<SpdMatrix> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_spd_json(&text).with_context(|| format!("in {}", path.display()))
}

fn cmd_matrix(kind: &str, t: &str, a: &Path, b: &Path, out: Option<&Path>, json_mode: bool) -> anyhow::Result<Outcome> {
    let kind = args::operator_kind(kind)?;
    let t = args::parse_weight(t)?;
    let (a, b) = (read_spd(a)?, read_spd(b)?);
    let m = mean(&a, &b, kind, t)?;
    let text = to_json(&m.to_json());
    match out {
        Some(path) => {
            std::fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display()))?;
            if json_mode {
                out!("{}", to_json(&json!({ "kind": kind.name(), "t": t.value(), "out": path.display().to_string() })));
            } else {
                out!("wrote {}", path.display());
            }
        }
        None => out!("{text}"),
    }
    Ok(Outcome::Ok)
}

fn verify_config(mut cfg: FuzzConfig, v: &VerifyArgs) -> anyhow::Result<FuzzConfig> {
    cfg.suites = match v.suite.as_str() {
        "all" => Suite::ALL.to_vec(),
        s => vec![Suite::parse(s)?],
    };
    if let Some(d) = &v.dims {
        cfg.dims = d.clone();
    }
    if let Some(n) = v.trials {
        cfg.trials = n;
        cfg.monotone.trials = n;
    }
    if let Some(t) = &v.t {
        let t = args::parse_weight(t)?;
        cfg.t_grid = vec![t];
        cfg.block_t = t;
        cfg.monotone.t_values = vec![t];
    }
    if let Some(f) = &v.function {
        harness::test_fn(f, Weight::HALF)?;
        cfg.monotone.fns = vec![f.clone()];
        cfg.monotone.probes.clear();
        cfg.monotone.control = false;
    }
    if let Some(n) = v.order {
        if !(2..=8).contains(&n) {
            bail!("order {n} outside [2, 8]");
        }
        cfg.monotone.min_order = 2;
        cfg.monotone.max_order = n;
    }
    for (flag, slot) in [(&v.p, &mut cfg.invariance.p), (&v.q, &mut cfg.invariance.q), (&v.r, &mut cfg.invariance.r)] {
        if let Some(s) = flag {
            *slot = args::parse_weight(s)?;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn cmd_verify(cfg: &FuzzConfig, json_mode: bool) -> anyhow::Result<Outcome> {
    let start = Instant::now();
    let report = harness::run_suite(cfg)?;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    if json_mode {
        out!("{{\"report\":{},\"meta\":{}}}", to_json(&report), to_json(&json!({ "elapsed_ms": elapsed })));
    } else {
        out!("{}", output::report_table(&report).trim_end());
        out!("elapsed {:.1} s", elapsed / 1e3);
    }
    Ok(if report.pass { Outcome::Ok } else { Outcome::Violation })
}

fn cmd_search(seed: u64, iters: usize, t: Option<Weight>, json_mode: bool) -> anyhow::Result<Outcome> {
    let start = Instant::now();
    let report = harness::heronian_search(seed, iters, t)?;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    if json_mode {
        out!("{{\"report\":{},\"meta\":{}}}", to_json(&report), to_json(&json!({ "elapsed_ms": elapsed })));
    } else {
        let p = &report.probe;
        out!("paper probe a={} b={} t={}: L_t={} heronian={} gap={}", p.a, p.b, p.t, p.log_mean, p.heronian, p.gap);
        out!("{} of {} random triples with L_t above the weighted Heronian mean", report.found, report.iters);
        let mut top = report.findings.clone();
        top.sort_by(|x, y| (y.gap / y.a.max(y.b)).total_cmp(&(x.gap / x.a.max(x.b))));
        for f in top.iter().take(10) {
            out!("  a={:<12.6} b={:<12.6} t={:<8.6} gap={:.6e}", f.a, f.b, f.t, f.gap);
        }
    }
    Ok(Outcome::Ok)
}
