//! `coxma`: build Coxeter arrangements, compute characteristic polynomials
//! and exponents, certify bases and run the verification suites.

mod input;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use coxma::algebra::parse_poly;
use coxma::arrangement::{arrangement_to_json, defining_poly, Arrangement, Multiplicity};
use coxma::dermod::{
    saito_check, saito_check_forms, DetectOptions, Derivation, LogForm1, SaitoCertificate,
};
use coxma::lattice::{char_poly, intersection_lattice};
use coxma::multichar::{char_poly_from_decomposition, decompose_quasi_constant, multi_char_poly, rank2_char_poly_oracle};
use coxma::primitive::{invariant_chart, nabla_d_power, pole_report, terao_basis, ChartType};
use coxma::verify::{poly_json, run_suite, transported_basis, Suite, VerificationReport, VerifyOptions};
use coxma::{Error, IntPoly};
use serde_json::{json, Value};

use input::{multiplicity_or, ArrangementInput};

#[derive(Parser, Debug)]
#[command(name = "coxma", version, about = "Exact computations on Coxeter multiarrangements")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for the random basis candidates used in certification.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Upper bound on the degree searched for generators.
    #[arg(long, global = true, value_name = "D")]
    max_degree: Option<u32>,
    /// Report wall-clock time.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print an arrangement as JSON.
    Build {
        #[command(flatten)]
        arr: ArrangementInput,
        /// Attach a multiplicity to the output.
        #[arg(long)]
        mult: Option<String>,
        /// Write to a file instead of stdout.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Characteristic polynomial from the intersection lattice.
    Charpoly {
        #[command(flatten)]
        arr: ArrangementInput,
        /// Include the lattice of flats with Möbius values (JSON only).
        #[arg(long)]
        lattice: bool,
    },
    /// Characteristic polynomial of a quasi-constant multiarrangement.
    Multicharpoly {
        #[command(flatten)]
        arr: ArrangementInput,
        #[arg(long)]
        mult: Option<String>,
        /// Also compute the rank-two Hilbert series polynomial and compare.
        #[arg(long)]
        oracle: bool,
    },
    /// Hilbert function, freeness and certified exponents of D(A,m).
    Exponents {
        #[command(flatten)]
        arr: ArrangementInput,
        #[arg(long)]
        mult: Option<String>,
    },
    /// Saito's criterion for explicit vector fields or forms.
    Saito {
        #[command(flatten)]
        arr: ArrangementInput,
        #[arg(long)]
        mult: Option<String>,
        /// One element per flag: comma-separated coefficients of dx_1.. or d/dx_1...
        #[arg(long = "element", required = true, allow_hyphen_values = true)]
        elements: Vec<String>,
        /// `derivation` takes coefficients; `form` takes numerators over Q(A,m).
        #[arg(long, value_enum, default_value = "derivation")]
        side: SideArg,
    },
    /// Primitive derivation computations on the A2 and B2 charts.
    Primitive {
        #[arg(long = "type", value_name = "TYPE")]
        chart: String,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, value_enum, conflicts_with = "check")]
        show: Option<Show>,
        #[arg(long, value_enum)]
        check: Option<Check>,
        /// Multiplicity for `--check theorem6` (constant) or `--check theorem10` ({0,1}).
        #[arg(long)]
        mult: Option<String>,
    },
    /// Run a named verification suite, or `all`.
    Verify {
        suite: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SideArg {
    Derivation,
    Form,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Show {
    Form,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Check {
    /// Exact pole orders of `D^k dP1`.
    #[value(name = "lemma8")]
    PoleOrders,
    /// Form basis for a constant multiplicity.
    #[value(name = "theorem6")]
    ConstantBasis,
    /// Image of a certified derivation basis.
    #[value(name = "theorem10")]
    Transport,
}

struct Output {
    json: Value,
    text: String,
    code: u8,
}

impl Output {
    fn ok(json: Value, text: String) -> Self {
        Output { json, text, code: 0 }
    }
}

fn detect_options(cli: &Cli) -> DetectOptions {
    DetectOptions { seed: cli.seed, max_degree: cli.max_degree, ..DetectOptions::default() }
}

fn show_poly(p: &IntPoly) -> String {
    p.display_in("t")
}

fn certificate_json(cert: &SaitoCertificate, side: &str) -> Value {
    let shape = match side {
        "form" => cert.constant.as_ref().map(|c| format!("{c}/Q")),
        _ => cert.constant.as_ref().map(|c| format!("{c}*Q")),
    };
    json!({
        "holds": cert.holds,
        "certificate": shape,
        "determinant": cert.determinant,
        "failures": cert.failures,
    })
}

fn build(arr: &ArrangementInput, mult: Option<&str>, out: Option<&PathBuf>) -> Result<Output> {
    let loaded = arr.load()?;
    let m = match mult {
        Some(s) => Some(input::parse_multiplicity(s, &loaded.arrangement)?),
        None => loaded.multiplicity.clone(),
    };
    let text = arrangement_to_json(&loaded.arrangement, m.as_ref());
    if let Some(path) = out {
        std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
        let note = format!("wrote {} hyperplanes to {}", loaded.arrangement.len(), path.display());
        return Ok(Output::ok(json!({ "written": path.display().to_string(), "hyperplanes": loaded.arrangement.len() }), note));
    }
    let value: Value = serde_json::from_str(&text)?;
    Ok(Output::ok(value, text))
}

fn charpoly(arr: &ArrangementInput, lattice: bool) -> Result<Output> {
    let a = arr.load()?.arrangement;
    let chi = char_poly(&a);
    let mut value = json!({ "chi": poly_json(&chi) });
    if lattice {
        value["lattice"] = intersection_lattice(&a).to_json();
    }
    Ok(Output::ok(value, format!("{}\nchi(t) = {}", poly_json(&chi), show_poly(&chi))))
}

fn multicharpoly(arr: &ArrangementInput, mult: Option<&str>, oracle: bool) -> Result<Output> {
    let loaded = arr.load()?;
    let a = &loaded.arrangement;
    let m = multiplicity_or(&loaded, mult, None)?;
    let dec = match decompose_quasi_constant(&m) {
        Ok(dec) => dec,
        Err(Error::NotQuasiConstant(_)) if oracle => {
            let o = rank2_char_poly_oracle(a, &m)?.poly;
            let value = json!({ "chi": poly_json(&o), "provenance": "rank2-oracle", "decomposition": null });
            let text = format!("{}\nchi(t) = {}\n(rank-two oracle; {m} is not quasi-constant)", poly_json(&o), show_poly(&o));
            return Ok(Output::ok(value, text));
        }
        Err(e) => return Err(e.into()),
    };
    let chi = multi_char_poly(a, &m)?.poly;
    let alternate = match &dec.alternate {
        Some(alt) => {
            let p = char_poly_from_decomposition(a, alt)?;
            if p != chi {
                return Err(Error::Internal(format!("decompositions of {m} disagree: {} vs {}", show_poly(&chi), show_poly(&p))).into());
            }
            true
        }
        None => false,
    };
    let mut value = json!({
        "chi": poly_json(&chi),
        "decomposition": { "k": dec.k, "sign": dec.sign.to_string(), "m": dec.m.values() },
        "alternate_checked": alternate,
    });
    let mut text = format!(
        "{}\nchi(t) = {}\nm~ = 2*{} {} {}",
        poly_json(&chi),
        show_poly(&chi),
        dec.k,
        if dec.sign == coxma::multichar::Sign::Plus { "+" } else { "-" },
        dec.m
    );
    if oracle {
        let o = rank2_char_poly_oracle(a, &m)?.poly;
        value["oracle"] = poly_json(&o);
        value["oracle_agrees"] = json!(o == chi);
        text.push_str(&format!("\noracle: {} ({})", poly_json(&o), if o == chi { "agrees" } else { "DIFFERS" }));
    }
    Ok(Output::ok(value, text))
}

fn exponents(cli: &Cli, arr: &ArrangementInput, mult: Option<&str>) -> Result<Output> {
    let loaded = arr.load()?;
    let m = multiplicity_or(&loaded, mult, None)?;
    let report = coxma::dermod::detect_free_basis(&loaded.arrangement, &m, &detect_options(cli));
    let hilbert: serde_json::Map<String, Value> = report.hilbert.iter().map(|(d, v)| (d.to_string(), json!(v))).collect();
    let value = json!({
        "free": report.free.is_some(),
        "exponents": report.free.as_ref().map(|f| json!(f.exponents.values())),
        "hilbert": hilbert,
        "certificate": report.free.as_ref().map(|f| format!("{}*Q", f.constant)),
        "basis": report.free.as_ref().map(|f| f.basis.iter().map(|t| t.to_string()).collect::<Vec<_>>()),
        "diagnostic": report.diagnostic,
    });
    let text = match &report.free {
        Some(f) => {
            let lines: Vec<String> = f.basis.iter().map(|t| format!("  {t}")).collect();
            format!("free, exponents {}\ndet = {}*Q(A,m)\nbasis:\n{}", f.exponents, f.constant, lines.join("\n"))
        }
        None => format!("not certified free: {}", report.diagnostic.as_deref().unwrap_or("")),
    };
    Ok(Output::ok(value, text))
}

fn parse_element(text: &str, n: usize) -> Result<Vec<coxma::Poly>> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != n {
        bail!(Error::Input(format!("`{text}` has {} coefficients, expected {n}", parts.len())));
    }
    Ok(parts.iter().map(|p| parse_poly(p, n)).collect::<coxma::Result<_>>()?)
}

fn saito(arr: &ArrangementInput, mult: Option<&str>, elements: &[String], side: SideArg) -> Result<Output> {
    let loaded = arr.load()?;
    let a: &Arrangement = &loaded.arrangement;
    let m = multiplicity_or(&loaded, mult, None)?;
    let n = a.ambient_dim();
    let (cert, name) = match side {
        SideArg::Derivation => {
            let thetas = elements
                .iter()
                .map(|e| Ok(Derivation::new(parse_element(e, n)?)?))
                .collect::<Result<Vec<_>>>()?;
            (saito_check(a, &m, &thetas), "derivation")
        }
        SideArg::Form => {
            let q = defining_poly(a, &m);
            let forms: Vec<_> = a.forms().cloned().collect();
            let omegas = elements
                .iter()
                .map(|e| Ok(LogForm1::from_quotient(parse_element(e, n)?, &q, &forms)?))
                .collect::<Result<Vec<_>>>()?;
            (saito_check_forms(a, &m, &omegas), "form")
        }
    };
    let value = certificate_json(&cert, name);
    let text = if cert.holds {
        format!("basis certified: det = {}", value["certificate"].as_str().unwrap_or(""))
    } else {
        format!("not a basis: {}", cert.failures.join("; "))
    };
    Ok(Output { json: value, text, code: if cert.holds { 0 } else { 1 } })
}

fn primitive(
    cli: &Cli,
    chart: &str,
    k: u32,
    check: Option<Check>,
    mult: Option<&str>,
) -> Result<Output> {
    let kind: ChartType = chart.parse()?;
    let chart = invariant_chart(kind);
    let forms = |orders: &[(coxma::algebra::LinearForm, u32, bool)]| -> Vec<Value> {
        orders.iter().map(|(f, o, ok)| json!({ "form": f.to_string(), "order": o, "exact": ok })).collect()
    };
    match check {
        None => {
            let omega = nabla_d_power(&chart, k)?;
            let report = pole_report(&chart, k)?;
            let value = json!({
                "chart": kind.to_string(),
                "k": k,
                "form": omega.to_string(),
                "degree": omega.degree(),
                "pole_orders": forms(&report.orders),
            });
            let orders: Vec<String> = report.orders.iter().map(|(f, o, _)| format!("{f}: {o}")).collect();
            Ok(Output::ok(value, format!("D^{k} dP1 = {omega}\npole orders: {}", orders.join(", "))))
        }
        Some(Check::PoleOrders) => {
            let report = pole_report(&chart, k)?;
            let ok = report.exact();
            let value = json!({
                "chart": kind.to_string(), "k": k, "expected_order": 2 * k - 1,
                "pole_orders": forms(&report.orders), "holds": ok,
            });
            let text = format!("pole order {} along every line: {}", 2 * k - 1, if ok { "yes" } else { "NO" });
            Ok(Output { json: value, text, code: if ok { 0 } else { 1 } })
        }
        Some(Check::ConstantBasis) => {
            let m = match mult {
                Some(s) => input::parse_multiplicity(s, &chart.arrangement)?,
                None => Multiplicity::constant(chart.arrangement.len(), 2 * k),
            };
            if m.min() != m.max() {
                bail!(Error::Input(format!("{m} is not constant")));
            }
            let (basis, cert) = terao_basis(&chart, m.max())?;
            let mut value = certificate_json(&cert, "form");
            value["basis"] = json!(basis.iter().map(|w| w.to_string()).collect::<Vec<_>>());
            let lines: Vec<String> = basis.iter().map(|w| format!("  {w}")).collect();
            Ok(Output::ok(value, format!("det = {}/Q(A,m)\n{}", cert.constant.map(|c| c.to_string()).unwrap_or_default(), lines.join("\n"))))
        }
        Some(Check::Transport) => {
            let m = match mult {
                Some(s) => input::parse_multiplicity(s, &chart.arrangement)?,
                None => Multiplicity::constant(chart.arrangement.len(), 0),
            };
            let (base, images, cert) = transported_basis(&chart, &m, k, &detect_options(cli))?;
            let mut value = certificate_json(&cert, "form");
            value["source_exponents"] = json!(base.exponents.values());
            value["image_degrees"] = json!(images.iter().map(|w| w.degree()).collect::<Vec<_>>());
            value["images"] = json!(images.iter().map(|w| w.to_string()).collect::<Vec<_>>());
            let lines: Vec<String> = images.iter().map(|w| format!("  {w}")).collect();
            let text = format!(
                "D(A,{m}) exponents {} -> basis of forms for {}: {}\n{}",
                base.exponents,
                m.subtracted_from(2 * k).expect("checked in transport"),
                if cert.holds { "certified" } else { "NOT certified" },
                lines.join("\n")
            );
            Ok(Output { json: value, text, code: if cert.holds { 0 } else { 1 } })
        }
    }
}

fn report_text(r: &VerificationReport) -> String {
    let mut lines = Vec::new();
    for c in &r.cases {
        let tag = match (c.passed(), r.informational) {
            (true, true) => "SAME",
            (false, true) => "DIFFERS",
            (true, false) => "PASS",
            (false, false) => "FAIL",
        };
        lines.push(format!("  [{tag}] {}", c.case));
    }
    let summary = if r.informational {
        if r.passed() { "all cases agree (informational)".to_string() } else { "DIFFERENCES FOUND (informational, not a failure)".to_string() }
    } else if r.passed() {
        "pass".to_string()
    } else {
        "FAIL".to_string()
    };
    let time = r.elapsed_ms.map(|ms| format!(" in {ms} ms")).unwrap_or_default();
    format!("{}: {summary}{time}\n{}", r.suite, lines.join("\n"))
}

fn verify(cli: &Cli, name: &str) -> Result<Output> {
    let suites: Vec<Suite> = if name == "all" { Suite::ALL.to_vec() } else { vec![name.parse()?] };
    let opts = VerifyOptions { seed: cli.seed };
    let mut reports = Vec::new();
    for s in suites {
        let start = Instant::now();
        let r = run_suite(s, &opts)?;
        reports.push(if cli.timing { r.with_elapsed(start.elapsed()) } else { r });
    }
    let failed = reports.iter().any(|r| !r.passed() && !r.informational);
    let text = reports.iter().map(report_text).collect::<Vec<_>>().join("\n");
    let json = if reports.len() == 1 { serde_json::to_value(&reports[0])? } else { serde_json::to_value(&reports)? };
    Ok(Output { json, text, code: if failed { 1 } else { 0 } })
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Build { arr, mult, out } => build(arr, mult.as_deref(), out.as_ref()),
        Command::Charpoly { arr, lattice } => charpoly(arr, *lattice),
        Command::Multicharpoly { arr, mult, oracle } => multicharpoly(arr, mult.as_deref(), *oracle),
        Command::Exponents { arr, mult } => exponents(cli, arr, mult.as_deref()),
        Command::Saito { arr, mult, elements, side } => saito(arr, mult.as_deref(), elements, *side),
        Command::Primitive { chart, k, show: _, check, mult } => primitive(cli, chart, *k, *check, mult.as_deref()),
        Command::Verify { suite } => verify(cli, suite),
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("COXMA_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0) {
        // a second initialization only happens in tests; ignore it
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Internal(_)) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let start = Instant::now();
    match run(&cli) {
        Ok(mut out) => {
            if cli.json {
                if cli.timing && !matches!(cli.command, Command::Verify { .. }) {
                    if let Value::Object(map) = &mut out.json {
                        map.insert("elapsed_ms".into(), json!(start.elapsed().as_millis()));
                    }
                }
                println!("{}", serde_json::to_string_pretty(&out.json).expect("JSON output"));
            } else {
                println!("{}", out.text);
                if cli.timing && !matches!(cli.command, Command::Verify { .. }) {
                    eprintln!("elapsed: {:?}", start.elapsed());
                }
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
