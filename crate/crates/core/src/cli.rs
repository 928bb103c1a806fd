//! Command-line front end.
//!
//! Exit codes: 0 ok, 1 verification mismatch, 2 inapplicable case,
//! 3 parse or domain error.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use crate::error::{Error, Result};
use crate::expr::{self, Value};
use crate::grr::{chern_from_character, grr_pushforward_with_todd};
use crate::ring::Rational;
use crate::space::AmbientSpace;
use crate::sw::{
    elliptic_cohomology_dims, expected_dims, hilbert_dims, segre_w1d, segre_w1d_degree,
    sw_elliptic, sw_elliptic_regular, sw_ruled_b2_total, sw_ruled_general, sw_section_invariant,
    EllipticSpec, JsonRational, RuledSpec, SWResult,
};
use crate::verify::{run_suites, Suite};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "chernalg", version, about = "Exact intersection theory and Seiberg-Witten invariant calculator")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an expression over an ambient space.
    Eval {
        expr: String,
        /// `P(a)`, `Cd(g,d)`, `Jac(g)` or a product such as `P(1)xCd(4,3)`.
        #[arg(long)]
        space: String,
    },
    /// Seiberg-Witten invariant pipelines.
    #[command(subcommand)]
    Sw(SwCommand),
    /// Class of W_{1,d}(V) in the Jacobian.
    Segre {
        #[arg(long)]
        g: i64,
        #[arg(long)]
        d: i64,
    },
    /// Total Chern class of the pushforward of the universal divisor.
    #[command(allow_negative_numbers = true)]
    Grr {
        #[arg(long)]
        chi: i64,
        #[arg(long)]
        g: u32,
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 0)]
        n: i64,
        /// Todd-class coefficient of the fiber, e.g. `5/3`.
        #[arg(long, default_value = "0")]
        r: String,
    },
    /// Dimension formulas.
    #[command(subcommand)]
    Dims(DimsCommand),
    /// Run verification sweeps.
    Verify {
        /// ring, lemma45, grr, elliptic, ruled, segre or all.
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum SwCommand {
    /// Regular elliptic surface with |D_0| = P^a.
    #[command(allow_negative_numbers = true)]
    EllipticRegular {
        #[arg(long)]
        pg: i64,
        #[arg(long)]
        a: i64,
    },
    /// Minimal elliptic surface over a genus-g curve.
    #[command(allow_negative_numbers = true)]
    Elliptic {
        #[arg(long)]
        chi: i64,
        #[arg(long)]
        g: i64,
        #[arg(long)]
        d: i64,
    },
    /// P^1 x C with b = 2, as a sum over moduli components.
    #[command(allow_negative_numbers = true)]
    Ruled {
        #[arg(long)]
        g: i64,
        #[arg(long)]
        d: i64,
    },
    /// P^1 x C, class of type (2a, 2b).
    #[command(allow_negative_numbers = true)]
    RuledGeneral {
        #[arg(long)]
        g: i64,
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
    },
    /// Sections of a general ruled surface over a genus-g curve.
    #[command(allow_negative_numbers = true)]
    Section {
        #[arg(long)]
        g: i64,
    },
}

#[derive(Debug, Subcommand)]
pub enum DimsCommand {
    /// h^0, h^1, h^2 of O(D_0) on a regular elliptic surface.
    #[command(allow_negative_numbers = true)]
    Elliptic {
        #[arg(long)]
        pg: i64,
        #[arg(long)]
        a: i64,
    },
    /// Expected dimensions for a class of type (2a, 2b) on P^1 x C.
    #[command(allow_negative_numbers = true)]
    Ruled {
        #[arg(long)]
        g: i64,
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
    },
    /// Tangent and obstruction dimensions of the Hilbert scheme.
    #[command(allow_negative_numbers = true)]
    Hilbert {
        #[arg(long)]
        b: i64,
        #[arg(long)]
        g: i64,
        #[arg(long)]
        d: i64,
        #[arg(long)]
        r: i64,
    },
}

/// A rendered command result.
struct Report {
    text: String,
    json: Json,
    csv: (Vec<String>, Vec<String>),
}

fn rat_json(q: &Rational) -> Json {
    serde_json::to_value(JsonRational(q)).expect("rational serializes")
}

fn sw_report(r: &SWResult) -> Report {
    let breakdown = r
        .breakdown
        .as_ref()
        .map(|b| {
            b.iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(";")
        })
        .unwrap_or_default();
    let mut text = format!(
        "{}\nmethod: {}\nverification_tier: {}\nexpected_dim: {}",
        r.value, r.method, r.verification_tier, r.expected_dim
    );
    if !breakdown.is_empty() {
        text.push_str(&format!("\nbreakdown: {}", breakdown.replace(';', " ")));
    }
    Report {
        text,
        json: serde_json::to_value(r).expect("result serializes"),
        csv: (
            ["value", "method", "expected_dim", "verification_tier", "breakdown"]
                .map(String::from)
                .to_vec(),
            vec![
                r.value.to_string(),
                r.method.to_string(),
                r.expected_dim.to_string(),
                r.verification_tier.to_string(),
                breakdown,
            ],
        ),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn simple_report(pairs: Vec<(&str, Json)>, text: String) -> Report {
    let header = pairs.iter().map(|(k, _)| k.to_string()).collect();
    let row = pairs
        .iter()
        .map(|(_, v)| match v {
            Json::String(s) => s.clone(),
            Json::Null => String::new(),
            other => other.to_string(),
        })
        .collect();
    let json = Json::Object(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect());
    Report {
        text,
        json,
        csv: (header, row),
    }
}

fn execute(command: &Command) -> Result<(Report, i32)> {
    let report = match command {
        Command::Eval { expr: src, space } => {
            let space = AmbientSpace::parse(space)?;
            let ast = expr::parse(src)?;
            let value = expr::evaluate(&ast, &space)?;
            let (kind, v) = match &value {
                Value::Scalar(q) => ("number", rat_json(q)),
                Value::Element(e) => ("class", Json::String(e.to_string())),
            };
            simple_report(
                vec![
                    ("space", Json::String(space.to_string())),
                    ("expression", Json::String(ast.to_string())),
                    ("kind", Json::String(kind.into())),
                    ("value", v),
                ],
                value.to_string(),
            )
        }
        Command::Sw(sub) => {
            let r = match *sub {
                SwCommand::EllipticRegular { pg, a } => sw_elliptic_regular(pg, a)?,
                SwCommand::Elliptic { chi, g, d } => sw_elliptic(&EllipticSpec::new(chi, g, d)?)?,
                SwCommand::Ruled { g, d } => sw_ruled_b2_total(g, d)?,
                SwCommand::RuledGeneral { g, a, b } => sw_ruled_general(&RuledSpec::new(g, a, b)?)?,
                SwCommand::Section { g } => sw_section_invariant(g)?,
            };
            sw_report(&r)
        }
        Command::Segre { g, d } => {
            let class = segre_w1d(*g, *d)?;
            let degree = if *g == 2 * d + 1 {
                Some(segre_w1d_degree(*g, *d)?)
            } else {
                None
            };
            let mut text = class.to_string();
            if let Some(n) = &degree {
                text.push_str(&format!("\ndegree: {n}"));
            }
            simple_report(
                vec![
                    ("g", json!(g)),
                    ("d", json!(d)),
                    ("codim", json!(2 * g - 2 * d - 1)),
                    ("class", Json::String(class.to_string())),
                    ("degree", degree.as_ref().map_or(Json::Null, rat_json)),
                ],
                text,
            )
        }
        Command::Grr { chi, g, d, n, r } => {
            let todd_r: Rational = r
                .parse()
                .map_err(|_| Error::Argument(format!("`{r}` is not a rational number")))?;
            let space = AmbientSpace::symmetric_product(*g, *d);
            let ch = grr_pushforward_with_todd(*chi, *n, &todd_r, &space)?;
            let c = chern_from_character(&ch, space.dim())?;
            simple_report(
                vec![
                    ("space", Json::String(space.to_string())),
                    ("chi", json!(chi)),
                    ("n", json!(n)),
                    ("r", Json::String(todd_r.to_string())),
                    ("chern_character", Json::String(ch.to_string())),
                    ("total_chern", Json::String(c.to_string())),
                ],
                c.to_string(),
            )
        }
        Command::Dims(sub) => match *sub {
            DimsCommand::Elliptic { pg, a } => {
                let (h0, h1, h2) = elliptic_cohomology_dims(pg, a)?;
                simple_report(
                    vec![("h0", json!(h0)), ("h1", json!(h1)), ("h2", json!(h2))],
                    format!("h0: {h0}\nh1: {h1}\nh2: {h2}"),
                )
            }
            DimsCommand::Ruled { g, a, b } => {
                let spec = RuledSpec::new(g, a, b)?;
                let (sw_dim, hilb) = expected_dims(&spec);
                simple_report(
                    vec![
                        ("d", json!(spec.d())),
                        ("sw_dim", json!(sw_dim)),
                        ("hilbert_dim", rat_json(&hilb)),
                    ],
                    format!("d: {}\nsw_dim: {sw_dim}\nhilbert_dim: {hilb}", spec.d()),
                )
            }
            DimsCommand::Hilbert { b, g, d, r } => {
                let (t, o) = hilbert_dims(b, g, d, r)?;
                simple_report(
                    vec![("tangent_dim", json!(t)), ("obstruction_dim", json!(o))],
                    format!("tangent_dim: {t}\nobstruction_dim: {o}"),
                )
            }
        },
        Command::Verify { suite } => {
            let reports = run_suites(&Suite::parse_list(suite)?);
            let ok = reports.iter().all(|r| r.passed());
            let mut text: Vec<String> = Vec::new();
            for r in &reports {
                text.push(r.to_string());
                text.extend(r.failures.iter().map(|f| format!("  {f}")));
            }
            let json = Json::Array(
                reports
                    .iter()
                    .map(|r| {
                        json!({
                            "suite": r.name,
                            "passed": r.passed(),
                            "cases": r.cases,
                            "failures": r.failures,
                        })
                    })
                    .collect(),
            );
            let rows: Vec<String> = reports
                .iter()
                .map(|r| format!("{},{},{},{}", r.name, r.passed(), r.cases, r.failures.len()))
                .collect();
            let report = Report {
                text: text.join("\n"),
                json,
                csv: (
                    ["suite", "passed", "cases", "failures"].map(String::from).to_vec(),
                    vec![rows.join("\n")],
                ),
            };
            return Ok((report, if ok { 0 } else { 1 }));
        }
    };
    Ok((report, 0))
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => report.text.clone(),
        Format::Json => serde_json::to_string(&report.json).expect("json value serializes"),
        Format::Csv => {
            let (header, row) = &report.csv;
            let line = |v: &[String]| v.iter().map(|s| csv_field(s)).collect::<Vec<_>>().join(",");
            // verify rows are pre-joined
            if header.len() != row.len() {
                format!("{}\n{}", line(header), row.join("\n"))
            } else {
                format!("{}\n{}", line(header), line(row))
            }
        }
    }
}

fn error_json(e: &Error) -> Json {
    let mut obj = json!({ "kind": e.kind(), "message": e.to_string(), "exit_code": e.exit_code() });
    if let Error::Parse { offset, expected, .. } = e {
        obj["offset"] = json!(offset);
        obj["expected"] = json!(expected);
    }
    json!({ "error": obj })
}

/// Parses `args` (including the program name), runs the command and writes
/// its report. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            if code == 0 {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            return code;
        }
    };
    match execute(&cli.command) {
        Ok((report, code)) => {
            let _ = writeln!(out, "{}", render(&report, cli.format));
            code
        }
        Err(e) => {
            match cli.format {
                Format::Json => {
                    let _ = writeln!(out, "{}", error_json(&e));
                }
                _ => {
                    let _ = writeln!(err, "error[{}]: {e}", e.kind());
                }
            }
            e.exit_code()
        }
    }
}
