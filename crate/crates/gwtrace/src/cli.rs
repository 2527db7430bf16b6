//! Command-line dispatch. [`run`] never exits the process; it returns the
//! exit code together with everything that should be printed.

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

use gwtrace_core::euler::{euler_char, expand};
use gwtrace_core::smp::{random_term, verify_splitting};
use gwtrace_core::transfer::{averaging_projector_check, maxrank_transfer_formula, torus_transfer_formula};
use gwtrace_core::weyl::{ParabolicSubset, WeylGroup};
use gwtrace_core::{hilbert_symbol, FieldSpec, GwElement, Place};

use crate::parse::{self, ErrorKind, ParseError};
use crate::render;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_PARSE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "gwtrace", version, about = "GW(k)-valued Euler characteristics and transfer-formula checks")]
struct Cli {
    /// Base field: Qbar, R, Q or F<q>.
    #[arg(long, global = true, default_value = "Qbar")]
    field: String,
    /// Emit a single JSON document.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Arithmetic in GW(k).
    Gw {
        #[command(subcommand)]
        op: GwOp,
    },
    /// Euler characteristic of a space expression.
    Euler { space: String },
    /// Bruhat cell decomposition of a space expression.
    Expand { space: String },
    /// Weyl group data.
    Weyl {
        what: WeylQuery,
        #[arg(value_name = "TYPE")]
        ty: String,
        #[command(flatten)]
        parabolic: ParabolicArg,
    },
    /// Double-coset transfer formulas.
    Dcoset {
        kind: DcosetKind,
        #[arg(value_name = "TYPE")]
        ty: String,
        #[command(flatten)]
        parabolic: ParabolicArg,
    },
    /// Averaging projector on the polynomial model.
    InvariantsCheck {
        #[arg(value_name = "TYPE")]
        ty: String,
        #[arg(long)]
        degree: u32,
    },
    /// Triangularity certificate for the stable splitting of BGL_n.
    SmpCheck { n: u32 },
    /// Randomized consistency checks driven by --seed.
    Selftest {
        #[arg(long, default_value_t = 200)]
        cases: u32,
    },
}

#[derive(Debug, Args)]
struct ParabolicArg {
    /// Simple roots generating the parabolic, e.g. "{1,3}".
    #[arg(long, allow_hyphen_values = true)]
    parabolic: Option<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WeylQuery {
    Order,
    Lengths,
    Cosets,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DcosetKind {
    Torus,
    Maxrank,
}

#[derive(Debug, Subcommand)]
enum GwOp {
    Add {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    Sub {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    Mul {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    Neg {
        #[arg(allow_hyphen_values = true)]
        a: String,
    },
    Scale {
        #[arg(allow_hyphen_values = true)]
        n: i64,
        #[arg(allow_hyphen_values = true)]
        a: String,
    },
    Equal {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    Invariants {
        #[arg(allow_hyphen_values = true)]
        a: String,
    },
    /// Hilbert symbol (a, b)_v of two rationals.
    Hilbert {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        /// A prime, or `inf` for the real place.
        #[arg(long, default_value = "inf")]
        place: String,
    },
}

/// Failure of a command, mapped to an exit code.
#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("parse error in {what}: {err}")]
    Parse { what: &'static str, err: ParseError },
    #[error("{0}")]
    Domain(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Parse { err, .. } if err.kind == ErrorKind::Domain => EXIT_DOMAIN,
            Failure::Parse { .. } => EXIT_PARSE,
            Failure::Domain(_) => EXIT_DOMAIN,
        }
    }
}

fn domain(e: impl std::fmt::Display) -> Failure {
    Failure::Domain(e.to_string())
}

fn parsed<T>(what: &'static str, r: Result<T, ParseError>) -> Result<T, Failure> {
    r.map_err(|err| Failure::Parse { what, err })
}

/// Result of one command: a text rendering and the JSON payload.
struct Outcome {
    text: String,
    result: Value,
    inputs: Value,
    p_inverted: bool,
}

impl Outcome {
    fn new(text: impl Into<String>, result: Value, inputs: Value, field: FieldSpec) -> Self {
        Self {
            text: text.into(),
            result,
            inputs,
            p_inverted: field.characteristic() > 0,
        }
    }
}

/// Runs the command line `argv` (including the program name).
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            return (code, e.render().to_string());
        }
    };
    let field = match parse::parse_field(&cli.field) {
        Ok(f) => f,
        Err(err) => {
            let f = Failure::Parse { what: "--field", err };
            return (f.code(), format!("error: {f}\n"));
        }
    };
    let name = command_name(&cli.command);
    match dispatch(&cli, field) {
        Ok(out) => {
            let text = if cli.json {
                let doc = json!({
                    "command": name,
                    "inputs": out.inputs,
                    "result": out.result,
                    "metadata": {
                        "p_inverted": out.p_inverted,
                        "field": field.to_string(),
                    },
                });
                serde_json::to_string_pretty(&doc).expect("JSON values serialize")
            } else {
                out.text
            };
            (EXIT_OK, text + "\n")
        }
        Err(f) => {
            let text = if cli.json {
                let doc = json!({
                    "command": name,
                    "error": f.to_string(),
                    "exit_code": f.code(),
                });
                serde_json::to_string_pretty(&doc).expect("JSON values serialize") + "\n"
            } else {
                format!("error: {f}\n")
            };
            (f.code(), text)
        }
    }
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Gw { op } => format!(
            "gw {}",
            match op {
                GwOp::Add { .. } => "add",
                GwOp::Sub { .. } => "sub",
                GwOp::Mul { .. } => "mul",
                GwOp::Neg { .. } => "neg",
                GwOp::Scale { .. } => "scale",
                GwOp::Equal { .. } => "equal",
                GwOp::Invariants { .. } => "invariants",
                GwOp::Hilbert { .. } => "hilbert",
            }
        ),
        Command::Euler { .. } => "euler".into(),
        Command::Expand { .. } => "expand".into(),
        Command::Weyl { what, .. } => format!("weyl {}", value_name(*what)),
        Command::Dcoset { kind, .. } => format!("dcoset {}", value_name(*kind)),
        Command::InvariantsCheck { .. } => "invariants-check".into(),
        Command::SmpCheck { .. } => "smp-check".into(),
        Command::Selftest { .. } => "selftest".into(),
    }
}

fn value_name(v: impl ValueEnum) -> String {
    v.to_possible_value().expect("no skipped variants").get_name().to_string()
}

fn dispatch(cli: &Cli, field: FieldSpec) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Gw { op } => gw(op, field),
        Command::Euler { space } => {
            let x = parsed("space expression", parse::parse_space(space))?;
            let ev = euler_char(&x, field).map_err(domain)?;
            Ok(Outcome {
                text: ev.value.to_string(),
                result: render::gw_json(&ev.value),
                inputs: json!({ "space": x.to_string() }),
                p_inverted: ev.p_inverted,
            })
        }
        Command::Expand { space } => {
            let x = parsed("space expression", parse::parse_space(space))?;
            let e = expand(&x).map_err(domain)?;
            Ok(Outcome::new(
                e.to_string(),
                json!({ "expansion": e.to_string() }),
                json!({ "space": x.to_string() }),
                field,
            ))
        }
        Command::Weyl { what, ty, parabolic } => {
            let t = parsed("Cartan type", parse::parse_cartan(ty))?;
            let inputs = json!({ "type": t.to_string(), "parabolic": parabolic.parabolic });
            match what {
                WeylQuery::Order => {
                    let order = WeylGroup::generate(&t).map_err(domain)?.order();
                    Ok(Outcome::new(order.to_string(), json!({ "order": order }), inputs, field))
                }
                WeylQuery::Lengths => {
                    let w = WeylGroup::generate(&t).map_err(domain)?;
                    let spec = w.length_spectrum();
                    let text = spec.iter().map(|(l, c)| format!("{l}: {c}")).collect::<Vec<_>>().join("\n");
                    let counts: Vec<u64> = spec.values().copied().collect();
                    Ok(Outcome::new(text, json!({ "length_counts": counts }), inputs, field))
                }
                WeylQuery::Cosets => {
                    let i = match &parabolic.parabolic {
                        Some(p) => parsed("--parabolic", parse::parse_parabolic(p, &t))?,
                        None => ParabolicSubset::empty(),
                    };
                    let w = WeylGroup::generate(&t).map_err(domain)?;
                    let reps: Vec<(String, u32)> = w
                        .min_coset_reps(&i)
                        .into_iter()
                        .map(|(x, l)| (render::word(&w.reduced_word(x)), l))
                        .collect();
                    let text = reps.iter().map(|(word, l)| format!("{l} {word}")).collect::<Vec<_>>().join("\n");
                    let result = json!({
                        "count": reps.len(),
                        "representatives": reps.iter().map(|(word, l)| json!({"word": word, "length": l})).collect::<Vec<_>>(),
                    });
                    Ok(Outcome::new(text, result, inputs, field))
                }
            }
        }
        Command::Dcoset { kind, ty, parabolic } => {
            let t = parsed("Cartan type", parse::parse_cartan(ty))?;
            let formula = match kind {
                DcosetKind::Torus => torus_transfer_formula(&t).map_err(domain)?,
                DcosetKind::Maxrank => {
                    let p = parabolic
                        .parabolic
                        .as_deref()
                        .ok_or_else(|| domain("dcoset maxrank needs --parabolic"))?;
                    let i = parsed("--parabolic", parse::parse_parabolic(p, &t))?;
                    maxrank_transfer_formula(&t, &i).map_err(domain)?
                }
            };
            Ok(Outcome::new(
                formula.to_string(),
                render::formula_json(&formula),
                json!({ "type": t.to_string(), "parabolic": parabolic.parabolic }),
                field,
            ))
        }
        Command::InvariantsCheck { ty, degree } => {
            let t = parsed("Cartan type", parse::parse_cartan(ty))?;
            let report = averaging_projector_check(&t, *degree).map_err(domain)?;
            Ok(Outcome::new(
                report.to_string(),
                render::report_json(&report),
                json!({ "type": t.to_string(), "degree": degree }),
                field,
            ))
        }
        Command::SmpCheck { n } => {
            let cert = verify_splitting(*n).map_err(domain)?;
            Ok(Outcome::new(
                cert.to_string(),
                render::certificate_json(&cert),
                json!({ "n": n }),
                field,
            ))
        }
        Command::Selftest { cases } => Ok(selftest(cli.seed, *cases, field)),
    }
}

fn gw(op: &GwOp, field: FieldSpec) -> Result<Outcome, Failure> {
    let p = |s: &str| parsed("GW element", parse::parse_gw(s, field));
    let value = |x: GwElement, inputs: Value| {
        Outcome::new(x.to_string(), render::gw_json(&x), inputs, field)
    };
    match op {
        GwOp::Add { a, b } => Ok(value(p(a)?.add(&p(b)?).map_err(domain)?, json!({"a": a, "b": b}))),
        GwOp::Sub { a, b } => Ok(value(p(a)?.sub(&p(b)?).map_err(domain)?, json!({"a": a, "b": b}))),
        GwOp::Mul { a, b } => Ok(value(p(a)?.mul(&p(b)?).map_err(domain)?, json!({"a": a, "b": b}))),
        GwOp::Neg { a } => Ok(value(p(a)?.neg(), json!({"a": a}))),
        GwOp::Scale { n, a } => Ok(value(p(a)?.scale(*n), json!({"n": n, "a": a}))),
        GwOp::Equal { a, b } => {
            let eq = p(a)?.is_equal(&p(b)?).map_err(domain)?;
            Ok(Outcome::new(eq.to_string(), json!({ "equal": eq }), json!({"a": a, "b": b}), field))
        }
        GwOp::Invariants { a } => {
            let inv = p(a)?.invariants();
            Ok(Outcome::new(
                render::invariants_text(&inv),
                render::invariants_json(&inv),
                json!({"a": a}),
                field,
            ))
        }
        GwOp::Hilbert { a, b, place } => {
            let r = |s: &str| parsed("rational", parse::parse_rational(s));
            let v = parsed("--place", parse::parse_place(place))?;
            let h = hilbert_symbol(r(a)?, r(b)?, v).map_err(domain)?;
            let place_name = match v {
                Place::Real => "inf".to_string(),
                Place::Prime(p) => p.to_string(),
            };
            Ok(Outcome::new(
                h.to_string(),
                json!({ "symbol": h }),
                json!({"a": a, "b": b, "place": place_name}),
                field,
            ))
        }
    }
}

fn random_gw(rng: &mut StdRng, field: FieldSpec) -> GwElement {
    let mut x = GwElement::zero(field);
    for _ in 0..rng.gen_range(0..4) {
        let a: i64 = rng.gen_range(1..=40) * if rng.gen() { 1 } else { -1 };
        if let Ok(u) = GwElement::unit_form(field, a) {
            x = x.add(&u.scale(rng.gen_range(-3..=3))).expect("same field");
        }
    }
    x
}

/// Ring axioms, render/parse round trips and rewrite confluence on
/// randomly drawn inputs.
fn selftest(seed: u64, cases: u32, field: FieldSpec) -> Outcome {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut ring = 0;
    let mut round_trip = 0;
    for _ in 0..cases {
        let (x, y, z) = (random_gw(&mut rng, field), random_gw(&mut rng, field), random_gw(&mut rng, field));
        let lhs = x.mul(&y.add(&z).unwrap()).unwrap();
        let rhs = x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap();
        let assoc = x.add(&y).unwrap().add(&z).unwrap().is_equal(&x.add(&y.add(&z).unwrap()).unwrap());
        if lhs.is_equal(&rhs).unwrap_or(false) && assoc.unwrap_or(false) {
            ring += 1;
        }
        if parse::parse_gw(&x.to_string(), field).as_ref() == Ok(&x) {
            round_trip += 1;
        }
    }
    let mut confluent = 0;
    for _ in 0..cases {
        let steps = rng.gen_range(1..=6);
        let term = random_term(&mut |k| rng.gen_range(0..k), 4, steps);
        let reference = term.normalize_with(|_| 0).expect("generated terms are well typed");
        let mut strategy = StdRng::seed_from_u64(rng.gen());
        let other = term
            .normalize_with(|k| strategy.gen_range(0..k))
            .expect("generated terms are well typed");
        if reference == other {
            confluent += 1;
        }
    }
    let checks = [("ring-axioms", ring), ("gw-round-trip", round_trip), ("rewrite-confluence", confluent)];
    let text = checks
        .iter()
        .map(|(name, ok)| format!("{name}: {}/{cases}", ok))
        .collect::<Vec<_>>()
        .join("\n");
    let result = json!({
        "seed": seed,
        "cases": cases,
        "passed": checks.iter().map(|(name, ok)| (name.to_string(), json!(ok))).collect::<serde_json::Map<_, _>>(),
    });
    Outcome::new(text, result, json!({ "seed": seed, "cases": cases }), field)
}
