//! Command-line front end: verification suites, protocol simulation and diagram evaluation.

pub mod suites;

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use parafermion::diagram::{self, evaluate, normalize, Evaluation};
use parafermion::pauli::Variant;
use parafermion::protocols::{self, Controlled, ProtocolReport};
use parafermion::report::Report;
use parafermion::scalars::{format_rounded, ScalarDoc};
use parafermion::Error;
use serde_json::{json, Value};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "parafermion",
    version,
    about = "Parafermion braids, qudit encodings and diagram rewriting"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Qudit dimension, at least 2.
    #[arg(long, global = true, default_value_t = 2)]
    pub d: u32,
    /// Number of parafermion modes for the randomized suites.
    #[arg(long, global = true, default_value_t = 3)]
    pub m: usize,
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub json: bool,
    /// Largest Hilbert-space dimension a command may allocate.
    #[arg(long, global = true, default_value_t = 1 << 22)]
    pub budget: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run an invariant suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Pauli construction: i, ii or kitaev.
        #[arg(long, default_value = "i")]
        variant: String,
    },
    /// Run an entanglement protocol and check its identity.
    Simulate {
        #[arg(value_enum)]
        protocol: Protocol,
        #[arg(long, default_value_t = 1)]
        helpers: usize,
        /// Input labels `i1,i2` for distribute.
        #[arg(long, default_value = "0,0")]
        input: String,
    },
    /// Evaluate or normalize a diagram file.
    Eval {
        #[arg(long)]
        file: std::path::PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Matrix)]
        mode: Mode,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Protocol {
    Distribute,
    Swap,
    Relay,
    DoubleBraid,
    ControlledX,
    ControlledY,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Matrix,
    Reduce,
}

/// Outcome of a command: text for the human summary, JSON for `--json`, and an exit code.
pub struct Outcome {
    pub code: i32,
    pub text: String,
    pub json: Value,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Resource(_) => EXIT_RESOURCE,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (including the program name), runs the command and writes the output.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(o) => {
            if cli.json {
                let text = serde_json::to_string_pretty(&o.json).expect("json");
                let _ = writeln!(out, "{text}");
            } else {
                let _ = write!(out, "{}", o.text);
            }
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn execute(cli: &Cli) -> parafermion::Result<Outcome> {
    if cli.d < 2 {
        return Err(Error::Domain(format!(
            "d must be at least 2, got {}",
            cli.d
        )));
    }
    if cli.tolerance.is_nan() || cli.tolerance <= 0.0 {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    match &cli.command {
        Command::Verify { suite, variant } => verify(cli, suite, variant),
        Command::Simulate {
            protocol,
            helpers,
            input,
        } => simulate(cli, *protocol, *helpers, input),
        Command::Eval { file, mode } => eval(cli, file, *mode),
    }
}

fn envelope(command: &str, cli: &Cli, body: Value) -> Value {
    json!({
        "schema": 1,
        "command": command,
        "d": cli.d,
        "seed": cli.seed,
        "tolerance": cli.tolerance,
        "result": body,
    })
}

fn verify(cli: &Cli, suite: &str, variant: &str) -> parafermion::Result<Outcome> {
    if !suites::SUITES.contains(&suite) {
        return Err(Error::Domain(format!(
            "unknown suite '{suite}', expected one of {}",
            suites::SUITES.join("|")
        )));
    }
    let variant: Variant = variant.parse()?;
    let cfg = suites::SuiteConfig {
        d: cli.d,
        m: cli.m,
        tolerance: cli.tolerance,
        seed: cli.seed,
        budget: cli.budget,
        variant,
    };
    let reports = suites::run_suite(suite, &cfg)?;
    let pass = reports.iter().all(Report::all_pass);
    let mut text = format!("seed {}\n", cli.seed);
    for r in &reports {
        text.push_str(&format_report(r));
    }
    text.push_str(if pass { "PASS\n" } else { "FAIL\n" });
    let body = json!({ "suite": suite, "pass": pass, "reports": reports });
    Ok(Outcome {
        code: if pass { EXIT_PASS } else { EXIT_FAIL },
        text,
        json: envelope("verify", cli, body),
    })
}

fn format_report(r: &Report) -> String {
    let mut s = format!("== {}\n", r.name);
    for c in &r.checks {
        s.push_str(&format!(
            "  [{}] {}  (deviation {:.3e}, tolerance {:.1e})\n",
            if c.pass { "pass" } else { "FAIL" },
            c.name,
            c.deviation,
            c.tolerance
        ));
    }
    for (k, v) in &r.info {
        s.push_str(&format!("  {k}: {v}\n"));
    }
    s
}

fn parse_input(input: &str) -> parafermion::Result<(u32, u32)> {
    let parts: Vec<&str> = input.split(',').map(str::trim).collect();
    let bad = || Error::Parse {
        position: "--input".into(),
        message: format!("expected i1,i2, got '{input}'"),
    };
    if parts.len() != 2 {
        return Err(bad());
    }
    let a = parts[0].parse().map_err(|_| bad())?;
    let b = parts[1].parse().map_err(|_| bad())?;
    Ok((a, b))
}

fn simulate(
    cli: &Cli,
    protocol: Protocol,
    helpers: usize,
    input: &str,
) -> parafermion::Result<Outcome> {
    let (d, tol, budget) = (cli.d, cli.tolerance, cli.budget);
    let (report, state) = match protocol {
        Protocol::Distribute => {
            let (i1, i2) = parse_input(input)?;
            let (s, r) = protocols::distribute(d, i1, i2, tol)?;
            (r, Some(s))
        }
        Protocol::Swap => (protocols::swap(d, tol, budget)?, None),
        Protocol::Relay => (protocols::relay(d, helpers, tol, budget)?, None),
        Protocol::DoubleBraid => (protocols::double_braid(d, tol, budget)?.1, None),
        Protocol::ControlledX => (
            protocols::conjugated_controlled(d, Controlled::X, tol, budget)?,
            None,
        ),
        Protocol::ControlledY => (
            protocols::conjugated_controlled(d, Controlled::Y, tol, budget)?,
            None,
        ),
    };
    let pass = report.all_pass();
    let mut text = format_protocol(&report);
    text.push_str(if pass { "PASS\n" } else { "FAIL\n" });
    let mut body = serde_json::to_value(&report).expect("json");
    if let Some(s) = &state {
        body["amplitudes"] = json!(s.to_pairs());
    }
    Ok(Outcome {
        code: if pass { EXIT_PASS } else { EXIT_FAIL },
        text,
        json: envelope("simulate", cli, body),
    })
}

fn format_protocol(r: &ProtocolReport) -> String {
    let mut s = format!("== {} d={}\n", r.protocol, r.d);
    for (k, v) in &r.inputs {
        s.push_str(&format!("  input {k} = {v}\n"));
    }
    if let Some(dg) = &r.reduced_diagram {
        s.push_str(&format!("  reduced diagram: {dg}\n"));
    }
    if let Some(sc) = &r.scalar {
        s.push_str(&format!(
            "  scalar: {} = {}\n",
            sc.text,
            format_rounded(parafermion::C64::new(sc.value[0], sc.value[1]))
        ));
    }
    if let Some(p) = &r.phase {
        s.push_str(&format!(
            "  phase: {}\n",
            format_rounded(parafermion::C64::new(p[0], p[1]))
        ));
    }
    for sp in &r.schmidt_spectra {
        let parts: Vec<String> = sp.iter().map(|x| format!("{x:.6}")).collect();
        s.push_str(&format!("  schmidt spectrum: [{}]\n", parts.join(", ")));
    }
    for c in &r.checks {
        s.push_str(&format!(
            "  [{}] {}  (deviation {:.3e})\n",
            if c.pass { "pass" } else { "FAIL" },
            c.name,
            c.deviation
        ));
    }
    for (k, v) in &r.info {
        s.push_str(&format!("  {k}: {v}\n"));
    }
    s
}

fn eval(cli: &Cli, file: &std::path::Path, mode: Mode) -> parafermion::Result<Outcome> {
    let text = std::fs::read_to_string(file).map_err(|e| Error::Parse {
        position: file.display().to_string(),
        message: e.to_string(),
    })?;
    let dg = diagram::parse(&text)?;
    let n_in = dg.wires_in;
    let n_out = dg.wires_out();
    let dims = (
        parafermion::fock::dim(dg.d, n_in),
        parafermion::fock::dim(dg.d, n_out),
    );
    if dims.0.max(dims.1) > cli.budget {
        return Err(Error::Resource(format!(
            "diagram needs dimension {}, above the budget of {}",
            dims.0.max(dims.1),
            cli.budget
        )));
    }
    match mode {
        Mode::Matrix => {
            let ev = evaluate(&dg)?;
            let op = ev.to_op();
            let mut rows = Vec::with_capacity(op.rows);
            let mut txt = format!("diagram {dg}\nmatrix {}x{}\n", op.rows, op.cols);
            for i in 0..op.rows {
                let row: Vec<[f64; 2]> = (0..op.cols)
                    .map(|j| {
                        let v = op.get(i, j);
                        [clean(v.re), clean(v.im)]
                    })
                    .collect();
                let cells: Vec<String> =
                    (0..op.cols).map(|j| format_rounded(op.get(i, j))).collect();
                txt.push_str(&format!("  {}\n", cells.join("  ")));
                rows.push(row);
            }
            let kind = match ev {
                Evaluation::Op(_) => "operator",
                Evaluation::State(_) => "state",
                Evaluation::Scalar(_) => "scalar",
            };
            let body = json!({ "mode": "matrix", "kind": kind, "rows": op.rows, "cols": op.cols, "matrix": rows });
            Ok(Outcome {
                code: EXIT_PASS,
                text: txt,
                json: envelope("eval", cli, body),
            })
        }
        Mode::Reduce => {
            let (out, steps) = normalize(&dg);
            let mut acc = parafermion::scalars::ExactScalar::one(dg.d);
            let mut txt = format!("diagram {dg}\n");
            let mut trace = Vec::new();
            for (n, st) in steps.iter().enumerate() {
                acc = acc * st.scalar;
                txt.push_str(&format!(
                    "  {:>3}. {} at slice {} wire {}  scalar {}\n",
                    n + 1,
                    st.rule.name(),
                    st.location.slice,
                    st.location.wire,
                    st.scalar
                ));
                trace.push(serde_json::to_value(st).expect("json"));
            }
            txt.push_str(&format!("normal form {out}\naccumulated scalar {acc}\n"));
            let dev = evaluate(&dg)?.max_abs_diff(&evaluate(&out)?)?;
            let sound = dev < cli.tolerance.max(1e-9);
            txt.push_str(&format!("evaluation check deviation {dev:.3e}\n"));
            txt.push_str(if sound { "PASS\n" } else { "FAIL\n" });
            let body = json!({
                "mode": "reduce",
                "input": diagram::serialize_value(&dg),
                "normal_form": diagram::serialize_value(&out),
                "normal_form_text": out.to_string(),
                "trace": trace,
                "accumulated_scalar": ScalarDoc::from(&acc),
                "accumulated_scalar_text": acc.to_string(),
                "evaluation_deviation": dev,
                "pass": sound,
            });
            Ok(Outcome {
                code: if sound { EXIT_PASS } else { EXIT_FAIL },
                text: txt,
                json: envelope("eval", cli, body),
            })
        }
    }
}

fn clean(x: f64) -> f64 {
    if x.abs() < 1e-15 {
        0.0
    } else {
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn input_pairs() {
        assert_eq!(parse_input("1, 2").unwrap(), (1, 2));
        assert!(parse_input("1").is_err());
        assert!(parse_input("a,b").is_err());
    }

    #[test]
    fn exit_codes_by_error_kind() {
        assert_eq!(exit_code(&Error::Resource("x".into())), EXIT_RESOURCE);
        assert_eq!(exit_code(&Error::Domain("x".into())), EXIT_USAGE);
    }

    #[test]
    fn help_goes_to_stdout_with_success() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(
            run(["parafermion", "--help"], &mut out, &mut err),
            EXIT_PASS
        );
        assert!(String::from_utf8(out).unwrap().contains("verify"));
    }
}
