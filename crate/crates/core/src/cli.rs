//! The `vdm` command line: argument parsing, dispatch and rendering.
//!
//! Every command produces a single JSON document. `--format text` renders
//! that same document as indented `key: value` lines.

use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::exponents::{affine_dimension, componentwise_min, d_gamma, normalize, Support};
use crate::irreducibility::{decide, verify_certificate_with_seed, FieldSpec, Verdict};
use crate::oracle::{
    classical_divisibility_check, jacobian_independence_evidence, leibniz_determinant,
    line_case_factor, polygon_indecomposability, PolygonVerdict, LEIBNIZ_MAX_N,
};
use crate::poly::Ring;
use crate::tropical::{decide_tropical_irreducibility, TropicalVerdict, MAX_SPAN_DIM};
use crate::vandermonde::{VandermondeInstance, MAX_N};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSIFIED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Largest N for which `verify` runs the Jacobian evidence.
const JACOBIAN_VERIFY_MAX_N: usize = 6;
const DEFAULT_MAX_VARS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum OracleName {
    /// Brute-force Leibniz determinant against the memoized one
    Leibniz,
    /// Division by the classical Vandermonde product (n = 1)
    Classical,
    /// Factoring of a collinear instance after specialization
    LineCase,
    /// Jacobian rank evidence for independence of the minors
    Jacobian {
        #[arg(long, default_value_t = 3)]
        trials: usize,
    },
    /// Newton polygon Minkowski indecomposability (n = 2)
    Polygon,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Decide absolute irreducibility and print the certificate
    Decide,
    /// Expand the determinant V(X, Γ)
    Expand,
    /// Build the tropical certificate from the Delaunay lifting
    Tropical,
    /// Run every consistency check on one support
    Verify,
    /// Run a single oracle
    #[command(subcommand)]
    Oracle(OracleName),
}

#[derive(Clone, Debug, Parser)]
#[command(name = "vdm", version, about = "Generalized Vandermonde determinants")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Field characteristic: 0 or a prime. Overrides "characteristic" in the input.
    #[arg(long = "char", global = true)]
    pub characteristic: Option<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Cap on the number of exponent vectors N
    #[arg(long = "max-n", global = true, default_value_t = MAX_N)]
    pub max_n: usize,
    /// Cap on the number of variables per row n
    #[arg(long = "max-vars", global = true, default_value_t = DEFAULT_MAX_VARS)]
    pub max_vars: usize,
    /// Read the support from this file instead of stdin
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Inline JSON support, e.g. '{"n":2,"exponents":[[2,0],[0,2],[2,2]]}'
    #[arg(long, global = true, conflicts_with = "input")]
    pub json: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn input_error(message: impl std::fmt::Display) -> Self {
        Outcome {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidSupport { .. }
            | Error::DegenerateSupport(_)
            | Error::NotPrime(_)
            | Error::SizeCap(_)
            | Error::Precondition(_)
            | Error::NotInRing(_)
    )
}

fn error_outcome(e: Error) -> Outcome {
    if is_input_error(&e) {
        Outcome::input_error(e)
    } else {
        Outcome {
            code: EXIT_FALSIFIED,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

struct Input {
    support: Support,
    field: FieldSpec,
}

fn load_input(cli: &Cli, stdin: &mut dyn Read) -> Result<Input, Outcome> {
    let text = match (&cli.json, &cli.input) {
        (Some(inline), _) => inline.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| Outcome::input_error(format!("cannot read {}: {e}", path.display())))?,
        (None, None) => {
            let mut buf = String::new();
            stdin
                .read_to_string(&mut buf)
                .map_err(|e| Outcome::input_error(format!("cannot read stdin: {e}")))?;
            buf
        }
    };
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Outcome::input_error(format!("invalid support at $: malformed JSON: {e}")))?;
    let support = Support::from_json_value(&value).map_err(Outcome::input_error)?;
    let from_input = match value.get("characteristic") {
        None | Some(Value::Null) => None,
        Some(c) => Some(c.as_u64().ok_or_else(|| {
            Outcome::input_error("invalid support at characteristic: expected 0 or a prime")
        })?),
    };
    let characteristic = cli.characteristic.or(from_input).unwrap_or(0);
    let field = FieldSpec::new(characteristic).map_err(Outcome::input_error)?;

    if cli.max_n > MAX_N {
        return Err(Outcome::input_error(format!(
            "--max-n {} exceeds the module limit {MAX_N}",
            cli.max_n
        )));
    }
    if support.len() > cli.max_n {
        return Err(Outcome::input_error(format!(
            "size cap exceeded: N = {} > --max-n {}",
            support.len(),
            cli.max_n
        )));
    }
    if support.n() > cli.max_vars {
        return Err(Outcome::input_error(format!(
            "size cap exceeded: n = {} > --max-vars {}",
            support.n(),
            cli.max_vars
        )));
    }
    Ok(Input { support, field })
}

/// Parses `args` (including the program name) and runs one command.
pub fn run_args<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, stdin),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                Outcome {
                    code,
                    stdout: rendered,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: rendered,
                }
            }
        }
    }
}

pub fn run(cli: &Cli, stdin: &mut dyn Read) -> Outcome {
    let input = match load_input(cli, stdin) {
        Ok(i) => i,
        Err(o) => return o,
    };
    let result = match cli.command {
        Command::Decide => cmd_decide(&input),
        Command::Expand => cmd_expand(&input),
        Command::Tropical => cmd_tropical(&input, cli.seed),
        Command::Verify => Ok(cmd_verify(&input, cli.seed)),
        Command::Oracle(name) => cmd_oracle(&input, name, cli.seed),
    };
    let (body, falsified) = match result {
        Ok(r) => r,
        Err(e) => return error_outcome(e),
    };
    let command = match cli.command {
        Command::Decide => "decide",
        Command::Expand => "expand",
        Command::Tropical => "tropical",
        Command::Verify => "verify",
        Command::Oracle(_) => "oracle",
    };
    let doc = json!({
        "command": command,
        "seed": cli.seed,
        "characteristic": input.field.characteristic(),
        "result": body,
    });
    let stdout = match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
            s.push('\n');
            s
        }
        Format::Text => render_text(&doc),
    };
    Outcome {
        code: if falsified { EXIT_FALSIFIED } else { EXIT_OK },
        stdout,
        stderr: String::new(),
    }
}

type CmdResult = crate::error::Result<(Value, bool)>;

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn cmd_decide(input: &Input) -> CmdResult {
    Ok((to_value(&decide(&input.support, input.field)), false))
}

fn cmd_expand(input: &Input) -> CmdResult {
    let inst = VandermondeInstance::new(input.support.clone(), input.field.ring())?;
    let v = inst.determinant();
    Ok((
        json!({
            "support": to_value(&input.support),
            "ring": inst.ring().to_string(),
            "num_terms": v.num_terms(),
            "polynomial": to_value(&v),
        }),
        false,
    ))
}

fn cmd_tropical(input: &Input, seed: u64) -> CmdResult {
    let cert = decide_tropical_irreducibility(&input.support, seed)?;
    Ok((to_value(&cert), false))
}

fn cmd_oracle(input: &Input, name: OracleName, seed: u64) -> CmdResult {
    let s = &input.support;
    match name {
        OracleName::Leibniz => {
            let inst = VandermondeInstance::new(s.clone(), input.field.ring())?;
            let brute = leibniz_determinant(&inst.build_matrix())?;
            let agrees = brute == inst.determinant();
            Ok((
                json!({"agrees_with_memoized": agrees, "determinant": to_value(&brute)}),
                !agrees,
            ))
        }
        OracleName::Classical => {
            let r = classical_divisibility_check(s)?;
            let ok = r.remultiplied;
            Ok((to_value(&r), !ok))
        }
        OracleName::LineCase => {
            let inst = VandermondeInstance::new(s.clone(), input.field.ring())?;
            Ok((to_value(&line_case_factor(&inst, seed)?), false))
        }
        OracleName::Jacobian { trials } => {
            let r = jacobian_independence_evidence(s, trials, seed)?;
            let mut v = to_value(&r);
            v["conclusive"] = Value::Bool(r.conclusive());
            Ok((v, false))
        }
        OracleName::Polygon => Ok((to_value(&polygon_indecomposability(s)?), false)),
    }
}

#[derive(Serialize)]
struct SuiteCheck {
    name: &'static str,
    status: &'static str,
    detail: String,
}

struct Suite(Vec<SuiteCheck>);

impl Suite {
    fn push(&mut self, name: &'static str, status: &'static str, detail: impl Into<String>) {
        self.0.push(SuiteCheck {
            name,
            status,
            detail: detail.into(),
        });
    }

    fn expect(&mut self, name: &'static str, ok: bool, detail: impl Into<String>) {
        self.push(name, if ok { "pass" } else { "fail" }, detail);
    }

    fn error(&mut self, name: &'static str, e: &Error) {
        let status = if is_input_error(e) { "skipped" } else { "fail" };
        self.push(name, status, e.to_string());
    }
}

/// The full consistency suite. Inconclusive evidence and checks outside
/// their caps are reported but never count as falsification.
fn cmd_verify(input: &Input, seed: u64) -> (Value, bool) {
    let s = &input.support;
    let f = input.field;
    let mut suite = Suite(Vec::new());
    let cert = decide(s, f);

    let inst = VandermondeInstance::new(s.clone(), f.ring());
    match &inst {
        Ok(inst) => match verify_certificate_with_seed(inst, &cert, seed) {
            Ok(report) => suite.expect(
                "certificate",
                report.passed(),
                format!(
                    "{} verdict, {} constructive checks",
                    cert.verdict,
                    report.checks.len()
                ),
            ),
            Err(e) => suite.error("certificate", &e),
        },
        Err(e) => suite.error("certificate", e),
    }

    if let Ok(inst) = &inst {
        if s.len() <= LEIBNIZ_MAX_N {
            match leibniz_determinant(&inst.build_matrix()) {
                Ok(brute) => suite.expect(
                    "leibniz_determinant",
                    brute == inst.determinant(),
                    "memoized determinant equals the Leibniz sum",
                ),
                Err(e) => suite.error("leibniz_determinant", &e),
            }
        } else {
            suite.push(
                "leibniz_determinant",
                "skipped",
                format!("N > {LEIBNIZ_MAX_N}"),
            );
        }
        if s.len() >= 2 {
            match inst.row_expansion() {
                Ok(exp) => {
                    let vanish = (2..=s.len()).all(|row| exp.reassemble(row).is_zero());
                    suite.expect(
                        "repeated_row_vanishing",
                        vanish,
                        "substituting X_ℓ for X_1 in the row expansion gives 0 for ℓ = 2..N",
                    );
                }
                Err(e) => suite.error("repeated_row_vanishing", &e),
            }
        }
    }

    if s.n() == 1 {
        match classical_divisibility_check(s) {
            Ok(r) => suite.expect(
                "classical_divisibility",
                r.remultiplied,
                "V is divisible by the classical Vandermonde product",
            ),
            Err(e) => suite.error("classical_divisibility", &e),
        }
    }

    let dim = affine_dimension(s);
    if s.len() >= 2 && dim <= MAX_SPAN_DIM {
        match decide_tropical_irreducibility(s, seed) {
            Ok(trop) => {
                let w = trop.witness.as_ref().expect("witness built for dim <= 3");
                let expected_gcd = d_gamma(&normalize(s).0).ok();
                suite.expect(
                    "tropical_witness",
                    w.witnesses_valid
                        && w.all_vertices_present
                        && w.covers_hull
                        && w.balancing.balanced,
                    "witness validity, all vertices present, coverage, balancing",
                );
                suite.expect(
                    "multiplicity_gcd",
                    trop.multiplicity_gcd == expected_gcd,
                    format!(
                        "multiplicity gcd {:?}, d_Γ {:?}",
                        trop.multiplicity_gcd, expected_gcd
                    ),
                );
                if dim >= 2 {
                    suite.expect(
                        "ridge_connected",
                        trop.ridge_connected == Some(true),
                        "facet graph is connected",
                    );
                }
                let char_zero = decide(s, FieldSpec::zero());
                let agree = match trop.verdict {
                    TropicalVerdict::Irreducible => char_zero.verdict == Verdict::Irreducible,
                    TropicalVerdict::Reducible => {
                        char_zero.verdict != Verdict::Irreducible
                            || char_zero.d_gamma.is_some_and(|d| d > 1)
                    }
                };
                suite.expect(
                    "tropical_agreement",
                    agree,
                    format!(
                        "tropical {:?}, char-0 verdict {}",
                        trop.verdict, char_zero.verdict
                    ),
                );
            }
            Err(e) => suite.error("tropical_witness", &e),
        }
    } else {
        suite.push(
            "tropical_witness",
            "skipped",
            format!("needs N ≥ 2 and affine dimension ≤ {MAX_SPAN_DIM}"),
        );
    }

    if (2..=JACOBIAN_VERIFY_MAX_N).contains(&s.len()) {
        match jacobian_independence_evidence(s, 3, seed) {
            Ok(r) => suite.push(
                "jacobian_evidence",
                if r.conclusive() {
                    "pass"
                } else {
                    "inconclusive"
                },
                format!(
                    "rank {} of {} after {} points",
                    r.achieved_rank, r.target_rank, r.trials
                ),
            ),
            Err(e) => suite.push("jacobian_evidence", "inconclusive", e.to_string()),
        }
    }

    if s.n() == 2 && dim == 2 {
        match polygon_indecomposability(s) {
            Ok(r) => {
                let content_free = componentwise_min(s).is_zero();
                let ok = r.verdict != PolygonVerdict::Indecomposable
                    || !content_free
                    || decide(s, FieldSpec::zero()).verdict == Verdict::Irreducible;
                suite.expect(
                    "polygon_consistency",
                    ok,
                    format!("polygon {:?}", r.verdict),
                );
            }
            Err(e) => suite.error("polygon_consistency", &e),
        }
    }

    if dim == 1 && s.len() >= 3 {
        let line =
            VandermondeInstance::new(normalize(s).0, Ring::prime_field(5).expect("5 is prime"))
                .and_then(|i| line_case_factor(&i, seed));
        match line {
            Ok(r) => suite.expect(
                "line_case_consistency",
                decide(s, f).normalized_verdict == Verdict::CollinearSplit,
                format!("{} factors over F_5", r.factors.len()),
            ),
            Err(e) => suite.error("line_case_consistency", &e),
        }
    }

    let falsified = suite.0.iter().any(|c| c.status == "fail");
    (
        json!({
            "support": to_value(s),
            "verdict": cert.verdict,
            "passed": !falsified,
            "checks": to_value(&suite.0),
        }),
        falsified,
    )
}

/// Indented `key: value` rendering of a JSON document.
pub fn render_text(doc: &Value) -> String {
    let mut out = String::new();
    render_into(doc, 0, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => Some(format!(
            "[{}]",
            a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")
        )),
        _ => None,
    }
}

fn render_into(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_into(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render_into(x, depth + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_with(args: &[&str], stdin: &str) -> Outcome {
        let mut argv = vec!["vdm"];
        argv.extend_from_slice(args);
        run_args(argv, &mut stdin.as_bytes())
    }

    const EVEN_TRIANGLE: &str = r#"{"n":2,"exponents":[[2,0],[0,2],[2,2]]}"#;

    #[test]
    fn decide_reads_characteristic_from_input() {
        let out = run_with(
            &["decide"],
            r#"{"n":2,"exponents":[[2,0],[0,2],[2,2]],"characteristic":2}"#,
        );
        assert_eq!(out.code, EXIT_OK);
        let doc: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(doc["result"]["verdict"], "PowerOfIrreducible");
        assert_eq!(doc["result"]["power_r"], 1);
        assert_eq!(doc["seed"], 0);
        // The flag wins over the input field.
        let out = run_with(
            &["decide", "--char", "3"],
            r#"{"n":2,"exponents":[[2,0],[0,2],[2,2]],"characteristic":2}"#,
        );
        let doc: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(doc["result"]["verdict"], "Irreducible");
    }

    #[test]
    fn input_errors_exit_two() {
        let out = run_with(&["decide"], r#"{"n":2,"exponents":[[2,0],[0,-2]]}"#);
        assert_eq!(out.code, EXIT_INPUT);
        assert!(out.stderr.contains("exponents[1][1]"), "{}", out.stderr);
        assert_eq!(
            run_with(&["decide", "--char", "4"], EVEN_TRIANGLE).code,
            EXIT_INPUT
        );
        assert_eq!(
            run_with(&["decide", "--max-n", "2"], EVEN_TRIANGLE).code,
            EXIT_INPUT
        );
        assert_eq!(
            run_with(&["decide", "--max-n", "13"], EVEN_TRIANGLE).code,
            EXIT_INPUT
        );
        assert_eq!(
            run_with(&["decide", "--max-vars", "1"], EVEN_TRIANGLE).code,
            EXIT_INPUT
        );
        assert_eq!(run_with(&["bogus"], EVEN_TRIANGLE).code, EXIT_INPUT);
        assert_eq!(run_with(&["decide"], "not json").code, EXIT_INPUT);
    }

    #[test]
    fn text_format_renders_the_same_document() {
        let out = run_with(&["decide", "--format", "text"], EVEN_TRIANGLE);
        assert_eq!(out.code, EXIT_OK);
        assert!(out.stdout.contains("verdict: Irreducible"));
        assert!(out.stdout.contains("seed: 0"));
    }

    #[test]
    fn verify_passes_on_even_triangle() {
        for p in ["0", "2", "3"] {
            let out = run_with(&["verify", "--char", p], EVEN_TRIANGLE);
            assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
        }
    }

    #[test]
    fn oracles_by_name() {
        for args in [
            &["oracle", "leibniz"][..],
            &["oracle", "polygon"],
            &["oracle", "jacobian", "--trials", "2"],
        ] {
            assert_eq!(run_with(args, EVEN_TRIANGLE).code, EXIT_OK, "{args:?}");
        }
        let line = r#"{"n":1,"exponents":[[0],[1],[2]]}"#;
        assert_eq!(run_with(&["oracle", "classical"], line).code, EXIT_OK);
        assert_eq!(
            run_with(&["oracle", "line-case", "--char", "3"], line).code,
            EXIT_OK
        );
        assert_eq!(run_with(&["oracle", "line-case"], line).code, EXIT_INPUT);
    }
}
