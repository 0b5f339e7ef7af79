//! `mfl`: batch front end for monomial Cuntz-algebra representations.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use mfl_core::closedform::{classify_case, closed_generator_apply};
use mfl_core::descriptor::{parse_descriptor, GRAMMAR};
use mfl_core::expr;
use mfl_core::verify::{run_suite, summarize, CatalogChoice, Status, SuiteConfig};
use mfl_core::{
    functor_apply, functor_extend, functor_restrict, BasisLabel, MonomialRep, MonomialTerm, Scalar,
    VectorSum,
};

#[global_allocator]
static GLOBAL: mimalloc::MiMalloc = mimalloc::MiMalloc;

#[derive(Parser)]
#[command(
    name = "mfl",
    version,
    about = "Exact computations with monomial representations of Cuntz algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the descriptor grammar and built-in representations.
    Reps {
        #[arg(long)]
        json: bool,
    },
    /// Evaluate an operator expression on a basis vector.
    Eval {
        #[arg(long)]
        rep: String,
        #[arg(long)]
        expr: String,
        /// Basis label as JSON, e.g. '{"word":[2,1]}'.
        #[arg(long)]
        vector: String,
    },
    /// Apply one generator of a functor image to a basis vector.
    Functor {
        /// Target arity: an integer n ≥ 2 or `inf`.
        #[arg(long)]
        to: Arity,
        /// Source arity: an integer m ≥ 2 or `inf`.
        #[arg(long)]
        from: Arity,
        #[arg(long)]
        rep: String,
        #[arg(long)]
        vector: String,
        #[arg(long)]
        generator: usize,
        #[arg(long)]
        adjoint: bool,
    },
    /// Evaluate a generator of F_{n,m}(π) through its closed form.
    Closedform {
        #[arg(long)]
        to: usize,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        rep: String,
        #[arg(long)]
        generator: usize,
        #[arg(long)]
        vector: String,
        /// Also compute the constructive image; exits 1 if the two disagree.
        #[arg(long)]
        compare: bool,
    },
    /// Dump a generator's action on every enumerated label.
    Table {
        #[arg(long)]
        rep: String,
        #[arg(long)]
        gen: usize,
        #[arg(long)]
        adjoint: bool,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the verification suite; exits 1 if any check fails.
    Verify {
        /// `all`, a check name, or a prefix such as `functor`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 5)]
        depth: usize,
        /// Comma-separated arities.
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,5")]
        grid: Vec<usize>,
        #[arg(long, value_enum, default_value_t = CatalogArg::Default)]
        catalog: CatalogArg,
        /// Custom catalog entries (repeatable); overrides `--catalog`.
        #[arg(long = "rep")]
        reps: Vec<String>,
        #[arg(long, default_value_t = 12)]
        j_bound: usize,
        /// Write all reports as JSON to this file.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Print every report, not only the ones that did not pass.
        #[arg(long)]
        verbose: bool,
        /// Treat findings as failures.
        #[arg(long)]
        strict_findings: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Arity {
    Finite(usize),
    Infinity,
}

impl std::str::FromStr for Arity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "inf" {
            return Ok(Arity::Infinity);
        }
        match s.parse::<usize>() {
            Ok(n) if n >= 2 => Ok(Arity::Finite(n)),
            _ => Err(format!("expected an integer ≥ 2 or `inf`, got `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CatalogArg {
    Default,
    Basic,
    Empty,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        // A closed pipe (`mfl reps | head`) is not an error.
        Err(e)
            if e.downcast_ref::<io::Error>()
                .is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) =>
        {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Reps { json } => cmd_reps(json),
        Command::Eval { rep, expr, vector } => cmd_eval(&rep, &expr, &vector),
        Command::Functor {
            to,
            from,
            rep,
            vector,
            generator,
            adjoint,
        } => cmd_functor(to, from, &rep, &vector, generator, adjoint),
        Command::Closedform {
            to,
            from,
            rep,
            generator,
            vector,
            compare,
        } => cmd_closedform(to, from, &rep, generator, &vector, compare),
        Command::Table {
            rep,
            gen,
            adjoint,
            depth,
            format,
            out,
        } => cmd_table(&rep, gen, adjoint, depth, format, out),
        Command::Verify {
            suite,
            depth,
            grid,
            catalog,
            reps,
            j_bound,
            json,
            verbose,
            strict_findings,
        } => {
            let catalog = if reps.is_empty() {
                match catalog {
                    CatalogArg::Default => CatalogChoice::Default,
                    CatalogArg::Basic => CatalogChoice::Basic,
                    CatalogArg::Empty => CatalogChoice::Empty,
                }
            } else {
                CatalogChoice::Custom(reps)
            };
            let config = SuiteConfig {
                grid,
                depth,
                catalog,
                j_bound,
                suite,
                ..SuiteConfig::default()
            };
            cmd_verify(&config, json, verbose, strict_findings)
        }
    }
}

fn parse_rep(desc: &str) -> Result<MonomialRep> {
    parse_descriptor(desc).with_context(|| format!("invalid descriptor `{desc}`"))
}

fn parse_label(text: &str) -> Result<BasisLabel> {
    BasisLabel::from_json(text).with_context(|| format!("invalid label JSON `{text}`"))
}

fn label_value(label: &BasisLabel) -> Value {
    serde_json::to_value(label).expect("labels always serialize")
}

fn scalar_value(z: Scalar) -> Value {
    json!([z.re, z.im])
}

fn term_value(term: &MonomialTerm) -> Value {
    match term {
        MonomialTerm::Zero => Value::Null,
        MonomialTerm::Basis { phase, label } => {
            json!({ "phase": scalar_value(*phase), "label": label_value(label) })
        }
    }
}

/// Keys are the labels' JSON encodings.
fn vector_value(v: &VectorSum) -> Value {
    let map: Map<String, Value> = v
        .iter()
        .map(|(x, c)| (x.to_json(), scalar_value(*c)))
        .collect();
    Value::Object(map)
}

fn print_json(value: &Value) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn grammar_rows() -> Vec<(&'static str, &'static str)> {
    GRAMMAR
        .lines()
        .filter_map(|line| {
            let (form, meaning) = line.split_once("  ")?;
            Some((form.trim(), meaning.trim()))
        })
        .collect()
}

const BUILTINS: [&str; 4] = ["std:N", "cyc:N:C:PHASE", "free:inf", "zero:N | zero:inf"];

fn cmd_reps(as_json: bool) -> Result<ExitCode> {
    if as_json {
        let grammar: Vec<Value> = grammar_rows()
            .into_iter()
            .map(|(form, meaning)| json!({ "form": form, "meaning": meaning }))
            .collect();
        print_json(&json!({ "grammar": grammar, "builtins": BUILTINS }))?;
    } else {
        let mut out = io::stdout().lock();
        writeln!(out, "Representation descriptors:\n\n{GRAMMAR}\n")?;
        writeln!(out, "Built-in families: {}", BUILTINS.join(", "))?;
        writeln!(
            out,
            "Labels are JSON: {{\"int\":x}} | {{\"word\":[l1,...]}} | {{\"pair\":[branch,label]}}"
        )?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_eval(rep: &str, text: &str, vector: &str) -> Result<ExitCode> {
    let rep = parse_rep(rep)?;
    let parsed = expr::parse(text).with_context(|| format!("invalid expression `{text}`"))?;
    let x = parse_label(vector)?;
    let v = expr::eval(&parsed, &rep, &VectorSum::basis(x))?;
    print_json(&vector_value(&v))?;
    Ok(ExitCode::SUCCESS)
}

fn functor_image(to: Arity, from: Arity, rep: &MonomialRep) -> Result<MonomialRep> {
    Ok(match (to, from) {
        (Arity::Finite(n), Arity::Finite(m)) => functor_apply(n, m, rep)?,
        (Arity::Infinity, Arity::Finite(n)) => functor_restrict(n, rep)?,
        (Arity::Finite(n), Arity::Infinity) => functor_extend(n, rep)?,
        (Arity::Infinity, Arity::Infinity) => {
            bail!("no functor from Rep O_inf to itself is defined")
        }
    })
}

fn cmd_functor(
    to: Arity,
    from: Arity,
    rep: &str,
    vector: &str,
    generator: usize,
    adjoint: bool,
) -> Result<ExitCode> {
    let image = functor_image(to, from, &parse_rep(rep)?)?;
    let x = parse_label(vector)?;
    let out = if adjoint {
        image.apply_adjoint(generator, &x)?
    } else {
        image.apply(generator, &x)?
    };
    print_json(&json!({
        "rep": image.describe(),
        "generator": generator,
        "adjoint": adjoint,
        "in": label_value(&x),
        "out": term_value(&out),
    }))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_closedform(
    n: usize,
    m: usize,
    rep: &str,
    generator: usize,
    vector: &str,
    compare: bool,
) -> Result<ExitCode> {
    let rep = parse_rep(rep)?;
    let x = parse_label(vector)?;
    let case = classify_case(n, m)?;
    let closed = closed_generator_apply(case, &rep, generator, &x)?;
    let mut report = json!({
        "case": case.to_string(),
        "generator": generator,
        "in": label_value(&x),
        "closed_form": term_value(&closed),
    });
    let mut agree = true;
    if compare {
        let constructive = functor_apply(n, m, &rep)?.apply(generator, &x)?;
        agree = closed.approx_eq(&constructive);
        report["constructive"] = term_value(&constructive);
        report["verdict"] = Value::from(if agree { "agree" } else { "disagree" });
    }
    print_json(&report)?;
    Ok(if agree {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn cmd_table(
    rep: &str,
    generator: usize,
    adjoint: bool,
    depth: usize,
    format: Format,
    out: Option<PathBuf>,
) -> Result<ExitCode> {
    let rep = parse_rep(rep)?;
    let mut rows = Vec::new();
    for x in rep.labels(depth) {
        let y = if adjoint {
            rep.apply_adjoint(generator, &x)?
        } else {
            rep.apply(generator, &x)?
        };
        rows.push((x, y));
    }
    let bytes = match format {
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|(x, y)| json!({ "in": label_value(x), "out": term_value(y) }))
                .collect();
            let table = json!({ "rep": rep.describe(), "gen": generator, "adjoint": adjoint, "rows": rows });
            let mut text = serde_json::to_vec_pretty(&table)?;
            text.push(b'\n');
            text
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["in", "phase_re", "phase_im", "out"])?;
            for (x, y) in &rows {
                match y {
                    MonomialTerm::Zero => w.write_record([x.to_json().as_str(), "", "", ""])?,
                    MonomialTerm::Basis { phase, label } => w.write_record([
                        x.to_json(),
                        phase.re.to_string(),
                        phase.im.to_string(),
                        label.to_json(),
                    ])?,
                }
            }
            w.into_inner()?
        }
    };
    match out {
        Some(path) => {
            fs::write(&path, bytes).with_context(|| format!("cannot write {}", path.display()))?
        }
        None => io::stdout().lock().write_all(&bytes)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(
    config: &SuiteConfig,
    json_out: Option<PathBuf>,
    verbose: bool,
    strict_findings: bool,
) -> Result<ExitCode> {
    let reports = run_suite(config)?;
    if reports.is_empty() {
        bail!("suite `{}` selects no checks", config.suite);
    }
    let mut out = io::stdout().lock();
    for r in &reports {
        if verbose || r.status != Status::Pass {
            writeln!(out, "{r}")?;
        }
    }
    let summary = summarize(&reports);
    writeln!(
        out,
        "{} reports: {} pass, {} fail, {} finding, {} vacuous",
        reports.len(),
        summary.pass,
        summary.fail,
        summary.finding,
        summary.vacuous
    )?;
    if let Some(path) = json_out {
        let body = json!({ "summary": summary, "reports": reports });
        fs::write(&path, serde_json::to_vec_pretty(&body)?)
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    let failed = summary.fail > 0 || (strict_findings && summary.finding > 0);
    Ok(if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    })
}
