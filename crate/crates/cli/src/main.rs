use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use mdspace::complex::{Complex, ComplexDesc, NormalPath, PathExpr};
use mdspace::mooreflow::{self, CounitReport, FlowPresentation};
use mdspace::rational;
use mdspace::reedy::{Entry, Pushout, PushoutReport, ReedyElem};
use mdspace::selftest::{self, Check};

#[derive(Parser)]
#[command(
    name = "mdspace",
    version,
    about = "Exact path algebra on cellular multipointed d-spaces"
)]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a complex and report its size and loop-freeness.
    Validate { complex: PathBuf },
    /// Normalize a path expression.
    Normalize { complex: PathBuf, path: PathBuf },
    /// Moore-compose two path expressions, or normalized-compose with --normalized.
    Compose {
        complex: PathBuf,
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        normalized: bool,
    },
    /// List the carriers between two states.
    Carriers {
        complex: PathBuf,
        from: String,
        to: String,
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Presentation of the fundamental category.
    Fundcat { complex: PathBuf },
    /// Rewrite a pushout element to simplified form.
    ReedyNormalize {
        complex: PathBuf,
        elem: PathBuf,
        #[arg(long)]
        cell: String,
    },
    /// Compare carriers across the attachment of one cell.
    PushoutCheck {
        complex: PathBuf,
        #[arg(long)]
        cell: String,
        #[arg(long, default_value_t = 6)]
        bound: usize,
    },
    /// Run the pushout check at every attachment step.
    CounitCheck {
        complex: PathBuf,
        #[arg(long, default_value_t = 6)]
        bound: usize,
    },
    /// Seeded battery of engine checks.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

struct Failure {
    code: &'static str,
    detail: String,
}

fn fail(code: &'static str, detail: impl ToString) -> Failure {
    Failure {
        code,
        detail: detail.to_string(),
    }
}

struct Report {
    json: serde_json::Value,
    text: String,
    verified: bool,
}

impl Report {
    fn new(value: &impl Serialize, text: String) -> Self {
        Report {
            json: serde_json::to_value(value).expect("reports serialize"),
            text,
            verified: true,
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let raw = std::fs::read_to_string(path).map_err(|e| fail("io", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&raw).map_err(|e| fail("parse", format!("{}: {e}", path.display())))
}

fn load_complex(path: &Path) -> Result<Complex, Failure> {
    let desc: ComplexDesc = read_json(path)?;
    desc.validate().map_err(|e| fail("invalid_complex", e))
}

fn path_text(p: &NormalPath) -> String {
    let mut out = format!("{} -> {} length {}\n", p.from_state(), p.to_state(), p.total_len());
    for s in p.segs() {
        let z: Vec<String> = s.z.iter().map(rational::format).collect();
        let breaks: Vec<String> = s
            .chi
            .breaks()
            .iter()
            .map(|(x, y)| format!("({},{})", rational::format(x), rational::format(y)))
            .collect();
        let _ = writeln!(
            out,
            "  {} z=[{}] len {} chi {}",
            s.cell,
            z.join(","),
            s.len,
            breaks.join(" ")
        );
    }
    out
}

fn flow_text(f: &FlowPresentation) -> String {
    let mut out = String::new();
    for (k, classes) in &f.homs {
        let words: Vec<String> = classes.iter().map(|w| w.join(".")).collect();
        let _ = writeln!(out, "{k}: {} [{}]", classes.len(), words.join(", "));
    }
    out
}

fn pushout_text(r: &PushoutReport) -> String {
    let mut out = format!(
        "cell {} bound {}: {} carriers, {} simplified carriers, bijection {}\n",
        r.cell,
        r.bound,
        r.lhs_carriers.len(),
        r.rhs_carriers.len(),
        r.bijection
    );
    for m in &r.mismatches {
        let _ = writeln!(out, "  mismatch: {m}");
    }
    out
}

fn entry_text(e: &Entry) -> String {
    match e {
        Entry::Path(p) => format!("path {}", p.carrier().join(".")),
        Entry::Inj(p) => format!("inj {}", p.carrier().join(".")),
        Entry::Cell { z, .. } => {
            let z: Vec<String> = z.iter().map(rational::format).collect();
            format!("cell z=[{}]", z.join(","))
        }
    }
}

fn run(cmd: Cmd) -> Result<Report, Failure> {
    match cmd {
        Cmd::Validate { complex } => {
            let x = load_complex(&complex)?;
            let v = serde_json::json!({ "loop_free": x.loop_free(), "cells": x.cell_count() });
            Ok(Report::new(
                &v,
                format!("loop_free: {}\ncells: {}\n", x.loop_free(), x.cell_count()),
            ))
        }
        Cmd::Normalize { complex, path } => {
            let x = load_complex(&complex)?;
            let e: PathExpr = read_json(&path)?;
            let p = x.normalize(&e).map_err(|e| fail("invalid_path", e))?;
            Ok(Report::new(&p, path_text(&p)))
        }
        Cmd::Compose {
            complex,
            left,
            right,
            normalized,
        } => {
            let x = load_complex(&complex)?;
            let (l, r): (PathExpr, PathExpr) = (read_json(&left)?, read_json(&right)?);
            let e = if normalized {
                PathExpr::normcomp(l, r)
            } else {
                PathExpr::moore(l, r)
            };
            let p = x.normalize(&e).map_err(|e| fail("invalid_path", e))?;
            Ok(Report::new(&p, path_text(&p)))
        }
        Cmd::Carriers {
            complex,
            from,
            to,
            bound,
        } => {
            let x = load_complex(&complex)?;
            let cs = x
                .enumerate_carriers(&from, &to, bound)
                .map_err(|e| fail("enumeration", e))?;
            let text: String = cs.iter().map(|w| format!("{}\n", w.join("."))).collect();
            Ok(Report::new(&cs, text))
        }
        Cmd::Fundcat { complex } => {
            let desc: ComplexDesc = read_json(&complex)?;
            let f = mooreflow::fundamental_category(&desc).map_err(|e| fail("flow", e))?;
            Ok(Report::new(&f, flow_text(&f)))
        }
        Cmd::ReedyNormalize { complex, elem, cell } => {
            let x = load_complex(&complex)?;
            let e: ReedyElem = read_json(&elem)?;
            let po = Pushout::for_cell(&x, &cell).map_err(|e| fail("reedy", e))?;
            po.check(&e).map_err(|e| fail("invalid_element", e))?;
            let (n, degrees) = po.normalize_traced(&e).map_err(|e| fail("reedy", e))?;
            let realized = po.realize(&n).map_err(|e| fail("reedy", e))?;
            let v = serde_json::json!({ "normal_form": n, "degrees": degrees, "realized": realized });
            let degs: Vec<String> = degrees.iter().map(usize::to_string).collect();
            let mut text = format!("degrees: {}\n", degs.join(" "));
            for en in &n.entries {
                let _ = writeln!(text, "  {}", entry_text(en));
            }
            text.push_str(&path_text(&realized));
            Ok(Report::new(&v, text))
        }
        Cmd::PushoutCheck { complex, cell, bound } => {
            let x = load_complex(&complex)?;
            let po = Pushout::for_cell(&x, &cell).map_err(|e| fail("reedy", e))?;
            let r = po.pushout_check(bound).map_err(|e| fail("reedy", e))?;
            let mut rep = Report::new(&r, pushout_text(&r));
            rep.verified = r.bijection;
            Ok(rep)
        }
        Cmd::CounitCheck { complex, bound } => {
            let x = load_complex(&complex)?;
            let r: CounitReport = mooreflow::counit_check(&x, bound).map_err(|e| fail("flow", e))?;
            let mut text: String = r.steps.iter().map(pushout_text).collect();
            let _ = writeln!(text, "counit: {}", if r.ok { "ok" } else { "FAILED" });
            let mut rep = Report::new(&r, text);
            rep.verified = r.ok;
            Ok(rep)
        }
        Cmd::Selftest { seed } => {
            let checks: Vec<Check> = selftest::run(seed);
            let text = checks
                .iter()
                .map(|c| {
                    let tag = if c.passed { "PASS" } else { "FAIL" };
                    format!("{tag} {} ({} cases, {} failures)\n", c.name, c.cases, c.failures)
                })
                .collect();
            let verified = checks.iter().all(|c| c.passed);
            let mut rep = Report::new(&serde_json::json!({ "seed": seed, "checks": checks }), text);
            rep.verified = verified;
            Ok(rep)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let v = serde_json::json!({ "error": "usage", "detail": e.to_string().trim_end() });
            println!("{v}");
            eprint!("{e}");
            return ExitCode::from(2);
        }
    };
    match run(cli.cmd) {
        Ok(rep) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&rep.json).expect("json")),
                Format::Text => print!("{}", rep.text),
            }
            if rep.verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            println!("{}", serde_json::json!({ "error": f.code, "detail": f.detail }));
            eprintln!("error: {}: {}", f.code, f.detail);
            ExitCode::from(2)
        }
    }
}
