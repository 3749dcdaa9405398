//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 when a hypothesis or validation check fails,
//! 1 on unreadable or malformed input.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::asymptotics::{parse_index, propagate, verify_table, ExpansionSpec, Seed};
use crate::connection::{sigma_tau, ConnectionReport, MonomialMu};
use crate::error::Error;
use crate::exact::Rat;
use crate::exponent::{dependency, det_identity_check, validate_hypotheses, ExponentData};
use crate::families::{build, detect_family, family_a, family_b, FamilyReport, FamilyResult};
use crate::selftest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "abconn", version, about = "Exact lam-connection and Bernstein-type operators")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the rank hypotheses on an exponent file.
    Check { file: PathBuf },
    /// Dependency data, (sigma, tau), lam*nabla and the PDE for a monomial.
    Analyze { file: PathBuf },
    /// x^{2u} + y^{2v} + z^{2w} + lam*x^u*y^v*z^w
    FamilyA {
        #[arg(long)]
        u: i64,
        #[arg(long)]
        v: i64,
        #[arg(long)]
        w: i64,
    },
    /// x^{2p}*z^u + y^{2q}*z^v + z^{u+v} + lam*x^p*y^q
    FamilyB {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        q: i64,
        #[arg(long)]
        u: i64,
        #[arg(long)]
        v: i64,
    },
    /// Propagate expansion coefficients from seed values.
    Propagate {
        file: PathBuf,
        /// Emit the table as CSV instead.
        #[arg(long)]
        csv: bool,
    },
    /// Run the built-in golden checks.
    Selftest,
}

/// Exponent data with an optional monomial `mu` (defaults to 1).
#[derive(Debug, Clone, Deserialize)]
pub struct AnalyzeInput {
    #[serde(flatten)]
    pub exponents: ExponentData,
    #[serde(default)]
    pub mu: Option<MonomialMu>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct PropagateInput {
    #[serde(flatten)]
    pub spec: ExpansionSpec,
    #[serde(default)]
    pub seed: BTreeMap<String, Rat>,
}

impl PropagateInput {
    pub fn seed(&self) -> Result<Seed, Error> {
        self.seed
            .iter()
            .map(|(k, v)| Ok((parse_index(k)?, v.clone())))
            .collect()
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProblemFile {
    Analyze(AnalyzeInput),
    FamilyA { u: i64, v: i64, w: i64 },
    FamilyB { p: i64, q: i64, u: i64, v: i64 },
    Propagate(PropagateInput),
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::Hypothesis(_) | Error::Contract(_) => EXIT_VALIDATION,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

fn input_failure(message: String) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message,
    }
}

/// Output plus exit code of a successful dispatch; validation failures
/// still produce a report.
struct Outcome {
    code: i32,
    body: String,
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input_failure(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| input_failure(format!("{} is not valid JSON: {e}", path.display())))
}

fn schema(path: &Path, e: serde_json::Error) -> Failure {
    input_failure(format!("{}: schema violation: {e}", path.display()))
}

/// Reads either a `ProblemFile` (with `kind`) or a bare module input.
fn load_problem(path: &Path, bare: fn(Value) -> serde_json::Result<ProblemFile>) -> Result<ProblemFile, Failure> {
    let value = read_json(path)?;
    let parsed = if value.get("kind").is_some() {
        serde_json::from_value(value)
    } else {
        bare(value)
    };
    parsed.map_err(|e| schema(path, e))
}

fn load_analyze(path: &Path) -> Result<(ExponentData, Option<MonomialMu>), Failure> {
    match load_problem(path, |v| serde_json::from_value(v).map(ProblemFile::Analyze))? {
        ProblemFile::Analyze(input) => Ok((input.exponents, input.mu)),
        ProblemFile::FamilyA { u, v, w } => Ok((family_a(u, v, w)?.exponents, None)),
        ProblemFile::FamilyB { p, q, u, v } => Ok((family_b(p, q, u, v)?.exponents, None)),
        ProblemFile::Propagate(_) => Err(input_failure(format!(
            "{}: expected exponent data, found a propagate problem",
            path.display()
        ))),
    }
}

fn pretty(value: &impl Serialize) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

fn cmd_check(path: &Path, as_json: bool) -> Result<Outcome, Failure> {
    let (e, _) = load_analyze(path)?;
    let rep = validate_hypotheses(&e);
    let code = if rep.passes { EXIT_OK } else { EXIT_VALIDATION };
    let body = if as_json {
        pretty(&rep)
    } else {
        let mut s = format!(
            "hypothesis i):  {} (rank of bordered matrix {} of {})\n\
             hypothesis ii): {} (rank of base matrix {} of {})\n",
            pass_word(rep.hypothesis_i),
            rep.rank_bordered,
            e.n() + 2,
            pass_word(rep.hypothesis_ii),
            rep.rank_base,
            e.n() + 1
        );
        for m in &rep.messages {
            s.push_str(m);
            s.push('\n');
        }
        s
    };
    Ok(Outcome { code, body })
}

fn pass_word(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn cmd_analyze(path: &Path, as_json: bool) -> Result<Outcome, Failure> {
    let (e, mu) = load_analyze(path)?;
    let hyp = validate_hypotheses(&e);
    if !hyp.passes {
        let body = if as_json {
            pretty(&json!({ "hypotheses": hyp }))
        } else {
            hyp.messages.join("\n") + "\n"
        };
        return Ok(Outcome {
            code: EXIT_VALIDATION,
            body,
        });
    }
    let mu = mu.unwrap_or_else(|| MonomialMu::one(e.n() + 1));
    let dep = dependency(&e)?;
    let det = det_identity_check(&e, &dep.relation());
    let st = sigma_tau(&e, &mu)?;
    let conn = ConnectionReport::new(&st);
    let family = detect_family(&e).map(build).transpose()?;
    let family_report = family.as_ref().map(FamilyReport::new);
    let code = match &family_report {
        Some(f) if !f.cross_validation.passed => EXIT_VALIDATION,
        _ if !det.passes => EXIT_VALIDATION,
        _ => EXIT_OK,
    };
    let body = if as_json {
        pretty(&json!({
            "hypotheses": hyp,
            "dependency": dep,
            "det_identity": det,
            "connection": conn,
            "family": family_report,
        }))
    } else {
        let mut s = String::new();
        s.push_str(&format!(
            "r = {}, p = {:?}, d = {}, h = {}, case {}\n",
            dep.r, dep.p, dep.d, dep.h, dep.case_tag
        ));
        s.push_str(&format!(
            "sigma = {} (relation), {} (Cramer), det(M') = {}, det(M~) = {}\n",
            dep.sigma, conn.sigma, det.det_base, det.det_bordered
        ));
        s.push_str(&format!("mu = x^{:?}, k = {}, tau = {}\n", conn.mu, conn.k, conn.tau));
        s.push_str(&format!("lam*nabla[mu] = ({})[mu]\n", conn.nabla));
        s.push_str(&format!("nabla[mu] = (-1/lam)*({})[mu]\n", -&crate::connection::nabla_formula(&st)));
        s.push_str(&format!("PDE: {}\n     {}\n", conn.pde.instantiated, conn.pde.normalized));
        if let (Some(fr), Some(rep)) = (&family, &family_report) {
            s.push_str(&family_text(fr, rep));
        }
        s
    };
    Ok(Outcome { code, body })
}

fn family_text(fr: &FamilyResult, rep: &FamilyReport) -> String {
    let mut s = format!("family {}\n", fr.params);
    s.push_str(&format!("P = {}\n", rep.factored));
    s.push_str(&format!("  = {}\n", rep.expanded));
    s.push_str(&format!("lam*nabla[1] = ({})[1]\n", rep.nabla_one));
    let cands: Vec<String> = rep.monodromy_candidates.iter().map(Rat::to_string).collect();
    s.push_str(&format!("monodromy candidates (mod 1): {{{}}}\n", cands.join(", ")));
    for c in &rep.cross_validation.checks {
        s.push_str(&format!(
            "  [{}] {}: expected {}, got {}\n",
            if c.pass { "ok" } else { "FAIL" },
            c.name,
            c.expected,
            c.actual
        ));
    }
    s
}

fn cmd_family(fr: FamilyResult, as_json: bool) -> Outcome {
    let rep = FamilyReport::new(&fr);
    let code = if rep.cross_validation.passed {
        EXIT_OK
    } else {
        EXIT_VALIDATION
    };
    let body = if as_json {
        pretty(&rep)
    } else {
        family_text(&fr, &rep)
    };
    Outcome { code, body }
}

fn cmd_propagate(path: &Path, as_json: bool, csv: bool) -> Result<Outcome, Failure> {
    let input = match load_problem(path, |v| serde_json::from_value(v).map(ProblemFile::Propagate))? {
        ProblemFile::Propagate(input) => input,
        _ => {
            return Err(input_failure(format!(
                "{}: expected a propagate problem",
                path.display()
            )))
        }
    };
    let seed = input.seed()?;
    let table = propagate(&input.spec, &seed)?;
    let residuals = verify_table(&input.spec, &table);
    let code = if residuals.passes() {
        EXIT_OK
    } else {
        EXIT_VALIDATION
    };
    let body = if csv {
        table.to_csv(input.spec.order)
    } else if as_json {
        pretty(&json!({
            "table": table.to_json(),
            "residuals_zero": residuals.passes(),
            "checked": residuals.checked,
        }))
    } else {
        let mut s = String::from("c_m^{i,k} as polynomials in l = Log(lam/lam0)\n");
        for (&(i, k, m), p) in &table.entries {
            s.push_str(&format!("i={i} k={k} m={m}: {p}\n"));
        }
        s.push_str(&format!(
            "recursion residuals: {}\n",
            if residuals.passes() { "all zero" } else { "NONZERO" }
        ));
        s
    };
    Ok(Outcome { code, body })
}

fn cmd_selftest(as_json: bool) -> Outcome {
    let outcomes = selftest::run_all();
    let all = outcomes.iter().all(|o| o.pass);
    let body = if as_json {
        let items: Vec<Value> = outcomes
            .iter()
            .map(|o| json!({"name": o.name, "pass": o.pass, "detail": o.detail}))
            .collect();
        pretty(&json!({"passed": all, "checks": items}))
    } else {
        outcomes
            .iter()
            .map(|o| format!("[{}] {}: {}\n", if o.pass { "PASS" } else { "FAIL" }, o.name, o.detail))
            .collect()
    };
    Outcome {
        code: if all { EXIT_OK } else { EXIT_VALIDATION },
        body,
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// its report to `out`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    let as_json = cli.json;
    let result = match cli.command {
        Command::Check { file } => cmd_check(&file, as_json),
        Command::Analyze { file } => cmd_analyze(&file, as_json),
        Command::FamilyA { u, v, w } => family_a(u, v, w)
            .map(|fr| cmd_family(fr, as_json))
            .map_err(Failure::from),
        Command::FamilyB { p, q, u, v } => family_b(p, q, u, v)
            .map(|fr| cmd_family(fr, as_json))
            .map_err(Failure::from),
        Command::Propagate { file, csv } => cmd_propagate(&file, as_json, csv),
        Command::Selftest => Ok(cmd_selftest(as_json)),
    };
    match result {
        Ok(Outcome { code, body }) => {
            let _ = out.write_all(body.as_bytes());
            if !body.ends_with('\n') {
                let _ = writeln!(out);
            }
            code
        }
        Err(Failure { code, message }) => {
            if as_json {
                let _ = writeln!(out, "{}", pretty(&json!({"error": message, "exit_code": code})));
            }
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}
