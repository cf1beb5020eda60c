//! The `virtualk` command line.
//!
//! Every command returns a [`Report`]: a line of text (or several), the JSON
//! value behind it, and whether the check it performs passed. Exit codes are
//! 0 for success, 1 for a failed check and 2 for any error.

use std::io::Read;

use clap::{Args, Parser, Subcommand};
use num_traits::One;
use serde_json::{json, Value};

use crate::detfun::json::AnyComplex;
use crate::detfun::{self, direct_sum, predicted_ses_sign, BasedComplex, ComplexMap};
use crate::field::{format_rational, Field, Matrix};
use crate::gersten::{self, Place, RatFn};
use crate::kring::{self, EvalLimits, KElement, KRing, KRingPresentation};
use crate::pushpull;

/// Default cap on ring dimension and operation indices.
pub const DEFAULT_MAX_DEGREE: i64 = 24;

/// Environment variable overriding [`DEFAULT_MAX_DEGREE`].
pub const MAX_DEGREE_VAR: &str = "VIRTUALK_MAX_DEGREE";

#[derive(Debug, Parser)]
#[command(name = "virtualk", version, about = "Exact K-theory, determinant and Gersten calculus")]
struct Cli {
    /// Print {"ok": bool, "value": ...} instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Elements of K₀ of products of projective spaces.
    #[command(subcommand)]
    Kring(KringCmd),
    /// Torsion of based complexes read as JSON from stdin.
    #[command(subcommand)]
    Det(DetCmd),
    /// χ(ℙⁿ, O(d)).
    Chi {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
    /// Riemann–Roch for a sum of line bundles on ℙⁿ.
    Grr {
        #[arg(long)]
        n: usize,
        /// Comma-separated twists, e.g. -1,2.
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',', required = true)]
        bundle: Vec<i64>,
    },
    /// Zero-cycles and tame symbols on ℙ¹ over ℚ.
    #[command(subcommand)]
    Gersten(GerstenCmd),
}

#[derive(Debug, Args)]
struct RingArg {
    /// pt, P<n> or P<n>xP<m>...
    #[arg(long)]
    ring: String,
}

#[derive(Debug, Subcommand)]
enum KringCmd {
    /// Normal form of an expression.
    Eval {
        #[command(flatten)]
        ring: RingArg,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Ψᵏ∘Ψᵏ′ = Ψᵏᵏ′ on u and Ψᵏ(uv) = Ψᵏ(u)Ψᵏ(v).
    CheckAdams {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, default_value_t = 3, allow_hyphen_values = true)]
        k2: i64,
        #[arg(allow_hyphen_values = true)]
        u: String,
        /// Second factor; defaults to u.
        #[arg(allow_hyphen_values = true)]
        v: Option<String>,
    },
    /// Adams weight components u^(0) … u^(D).
    Eigen {
        #[command(flatten)]
        ring: RingArg,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// γ-filtration degree.
    Fildeg {
        #[command(flatten)]
        ring: RingArg,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
}

#[derive(Debug, Subcommand)]
enum DetCmd {
    /// Torsion of an acyclic complex.
    Torsion,
    /// Determinant-functor identities on an acyclic complex.
    Axioms,
}

#[derive(Debug, Subcommand)]
enum GerstenCmd {
    /// Divisor of a rational function.
    Div {
        #[arg(allow_hyphen_values = true)]
        f: String,
    },
    /// Tame symbol ∂_p{f, g}.
    Tame {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
        /// Monic irreducible polynomial or `inf`.
        place: String,
    },
    /// Weil reciprocity: Π_p N(∂_p{f, g}) = 1.
    Weil {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// c₁(O(d)) ∩ [ℙ¹] represented through a rational section.
    C1 {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, allow_hyphen_values = true)]
        section: String,
    },
}

/// Result of a successful command.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub ok: bool,
    pub text: String,
    pub value: Value,
}

impl Report {
    fn value(text: impl Into<String>, value: Value) -> Self {
        Report { ok: true, text: text.into(), value }
    }
}

/// Exit code and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the command line `argv` (including the program name), reading stdin
/// only for commands that need it, with the degree cap taken from the
/// environment.
pub fn run<I, S>(argv: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cap = std::env::var(MAX_DEGREE_VAR).ok();
    run_with(argv, stdin, cap.as_deref())
}

/// [`run`] with an explicit value for the degree cap.
pub fn run_with<I, S>(argv: I, stdin: &mut dyn Read, max_degree: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: e.render().to_string(), stderr: String::new() }
                }
                _ => {
                    // clap spreads the message over several lines before the usage block.
                    let rendered = e.render().to_string();
                    let msg: Vec<&str> =
                        rendered.lines().take_while(|l| !l.trim().is_empty()).map(str::trim).collect();
                    failure(msg.join(" ").trim_start_matches("error: "))
                }
            };
        }
    };
    let max = match parse_cap(max_degree) {
        Ok(m) => m,
        Err(msg) => return failure(&msg),
    };
    match execute(&cli.command, stdin, max) {
        Ok(r) => {
            let stdout = if cli.json {
                format!("{}\n", json!({"ok": r.ok, "value": r.value}))
            } else {
                format!("{}\n", r.text)
            };
            Outcome { code: if r.ok { 0 } else { 1 }, stdout, stderr: String::new() }
        }
        Err(msg) => failure(&msg),
    }
}

fn failure(msg: &str) -> Outcome {
    let line = msg.lines().next().unwrap_or("");
    Outcome { code: 2, stdout: String::new(), stderr: format!("error: {line}\n") }
}

fn parse_cap(raw: Option<&str>) -> Result<i64, String> {
    match raw {
        None => Ok(DEFAULT_MAX_DEGREE),
        Some(s) => match s.trim().parse::<i64>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(format!("{MAX_DEGREE_VAR} must be a positive integer, got {s:?}")),
        },
    }
}

fn execute(cmd: &Command, stdin: &mut dyn Read, max: i64) -> Result<Report, String> {
    match cmd {
        Command::Kring(k) => kring_cmd(k, max),
        Command::Det(d) => {
            let mut input = String::new();
            stdin.read_to_string(&mut input).map_err(|e| format!("reading stdin: {e}"))?;
            let c = AnyComplex::from_json_str(&input).map_err(|e| e.to_string())?;
            match c {
                AnyComplex::Rational(c) => det_cmd(d, &c),
                AnyComplex::Prime(c) => det_cmd(d, &c),
            }
        }
        Command::Chi { n, d } => {
            guard("n", *n as i64, max)?;
            let chi = pushpull::euler_characteristic(*n, *d).map_err(|e| e.to_string())?;
            Ok(Report::value(chi.to_string(), json!(chi.to_string())))
        }
        Command::Grr { n, bundle } => {
            guard("n", *n as i64, max)?;
            let r = pushpull::grr_check(*n, bundle).map_err(|e| e.to_string())?;
            let (lhs, rhs) = (format_rational(&r.lhs), format_rational(&r.rhs));
            let text = if r.holds() { format!("ok: {lhs} = {rhs}") } else { format!("fail: {lhs} != {rhs}") };
            Ok(Report { ok: r.holds(), text, value: json!({"lhs": lhs, "rhs": rhs}) })
        }
        Command::Gersten(g) => gersten_cmd(g),
    }
}

fn guard(what: &str, v: i64, max: i64) -> Result<(), String> {
    if v > max {
        return Err(format!("{what} = {v} exceeds {MAX_DEGREE_VAR} = {max}"));
    }
    Ok(())
}

fn ring(arg: &RingArg, max: i64) -> Result<KRing, String> {
    let r = KRingPresentation::parse(&arg.ring).map_err(|e| e.to_string())?;
    guard("ring dimension", r.dimension() as i64, max)?;
    Ok(r)
}

fn element(r: &KRing, s: &str, max: i64) -> Result<KElement, String> {
    kring::parse_element(r, s, EvalLimits { max_index: max }).map_err(|e| e.to_string())
}

fn kring_cmd(cmd: &KringCmd, max: i64) -> Result<Report, String> {
    let err = |e: kring::KError| e.to_string();
    match cmd {
        KringCmd::Eval { ring: ra, expr } => {
            let r = ring(ra, max)?;
            let u = element(&r, expr, max)?;
            Ok(Report::value(u.to_string(), json!(u.to_string())))
        }
        KringCmd::CheckAdams { ring: ra, k, k2, u, v } => {
            let r = ring(ra, max)?;
            for x in [k, k2] {
                guard("k", x.abs(), max)?;
            }
            let u = element(&r, u, max)?;
            let v = match v {
                Some(s) => element(&r, s, max)?,
                None => u.clone(),
            };
            let compose = kring::adams_compose_check(*k, *k2, &u).map_err(err)?;
            let mult = kring::adams_mult_check(*k, &u, &v).map_err(err)?;
            let verdict = |b: bool| if b { "ok" } else { "fail" };
            let text = format!(
                "psi({k})psi({k2}) = psi({}): {}\npsi({k})(u*v) = psi({k})(u)*psi({k})(v): {}",
                k * k2,
                verdict(compose),
                verdict(mult)
            );
            Ok(Report { ok: compose && mult, text, value: json!({"compose": compose, "multiplicative": mult}) })
        }
        KringCmd::Eigen { ring: ra, expr } => {
            let r = ring(ra, max)?;
            let u = element(&r, expr, max)?;
            let parts = kring::adams_decomposition(&u).map_err(err)?;
            let text: Vec<String> = parts.iter().enumerate().map(|(i, p)| format!("{i}: {p}")).collect();
            let value: Vec<String> = parts.iter().map(ToString::to_string).collect();
            Ok(Report::value(text.join("\n"), json!(value)))
        }
        KringCmd::Fildeg { ring: ra, expr } => {
            let r = ring(ra, max)?;
            let u = element(&r, expr, max)?;
            let d = kring::gamma_filtration_degree(&u).to_string();
            Ok(Report::value(d.clone(), json!(d)))
        }
    }
}

fn det_cmd<F: Field>(cmd: &DetCmd, c: &BasedComplex<F>) -> Result<Report, String> {
    let err = |e: detfun::DetError| e.to_string();
    let f = c.field();
    let tau = detfun::torsion(c).map_err(err)?;
    match cmd {
        DetCmd::Torsion => Ok(Report::value(f.format(&tau), json!(f.format(&tau)))),
        DetCmd::Axioms => {
            let mut checks: Vec<(&str, bool)> = Vec::new();

            let sum = detfun::torsion(&direct_sum(c, c).map_err(err)?).map_err(err)?;
            let mut expected = f.mul(&tau, &tau);
            if predicted_ses_sign(c, c) < 0 {
                expected = f.neg(&expected);
            }
            checks.push(("direct sum", sum == expected));

            let shifted = detfun::torsion(&c.shift(1)).map_err(err)?;
            checks.push(("shift inverts", f.is_one(&f.mul(&shifted, &tau))));

            let id = ComplexMap::identity(c);
            checks.push(("identity determinant", f.is_one(&detfun::det_of_quasi_iso(&id).map_err(err)?)));
            checks.push(("cone of identity", f.is_one(&detfun::torsion(&id.cone()).map_err(err)?)));

            // Doubling the first basis vector of every nonzero degree.
            let two = f.from_i64(2);
            let unit = if f.inv(&two).is_some() { two } else { f.one() };
            let mut predicted = tau.clone();
            let bases: Vec<_> = c
                .degrees()
                .map(|n| {
                    let dim = c.dim(n);
                    let mut u = Matrix::identity(f, dim);
                    if dim > 0 {
                        u.set(0, 0, unit.clone());
                        let factor = if n.rem_euclid(2) == 0 { unit.clone() } else { f.inv(&unit).unwrap() };
                        predicted = f.mul(&predicted, &factor);
                    }
                    u
                })
                .collect();
            let changed = detfun::torsion(&c.change_basis(&bases).map_err(err)?).map_err(err)?;
            checks.push(("base change", changed == predicted));

            let ok = checks.iter().all(|(_, b)| *b);
            let text: Vec<String> =
                checks.iter().map(|(name, b)| format!("{name}: {}", if *b { "ok" } else { "fail" })).collect();
            let value: serde_json::Map<String, Value> =
                checks.iter().map(|(name, b)| (name.to_string(), json!(b))).collect();
            let mut value = Value::Object(value);
            value["torsion"] = json!(f.format(&tau));
            Ok(Report { ok, text: text.join("\n"), value })
        }
    }
}

fn ratfn(s: &str) -> Result<RatFn, String> {
    RatFn::parse(s).map_err(|e| e.to_string())
}

fn gersten_cmd(cmd: &GerstenCmd) -> Result<Report, String> {
    match cmd {
        GerstenCmd::Div { f } => {
            let z = gersten::divisor(&ratfn(f)?).to_string();
            Ok(Report::value(z.clone(), json!(z)))
        }
        GerstenCmd::Tame { f, g, place } => {
            let p = Place::parse(place).map_err(|e| e.to_string())?;
            let r = gersten::tame_symbol(&ratfn(f)?, &ratfn(g)?, &p);
            let norm = format_rational(&r.norm());
            Ok(Report::value(r.to_string(), json!({"residue": r.to_string(), "norm": norm})))
        }
        GerstenCmd::Weil { f, g } => {
            let product = gersten::weil_product(&ratfn(f)?, &ratfn(g)?);
            let ok = product.is_one();
            let shown = format_rational(&product);
            let text = if ok { format!("ok: product = {shown}") } else { format!("fail: product = {shown}") };
            Ok(Report { ok, text, value: json!(shown) })
        }
        GerstenCmd::C1 { d, section } => {
            let z = gersten::c1_cap(*d, &ratfn(section)?).to_string();
            Ok(Report::value(z.clone(), json!(z)))
        }
    }
}
