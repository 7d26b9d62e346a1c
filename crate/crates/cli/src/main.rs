mod config;
mod spec;

use std::fmt;
use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lidstone::acceptance::{run_all, run_criterion, CriterionOutcome};
use lidstone::basis::{latex_entry, shared_table};
use lidstone::buck::{default_buck_radius, even_vanishing_violations, BuckExpansion};
use lidstone::contour::TruncationConfig;
use lidstone::expansion::Interpolation;
use lidstone::poly::rat_int;
use lidstone::{
    bound_check, derivative_data, expand_polynomial, lambda_t0_integral, lambda_t1_integral,
    lidstone_partial_sum, schoenberg_decompose, sparse_counterexample, whittaker_interpolate,
    ComplexValue, ContourConfig, CounterexampleSpec, ErrorClass,
};
use serde::Serialize;
use serde_json::json;

use config::Defaults;
use spec::{parse_complex, FunctionSpec, Num};

/// A malformed flag value or function description.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug)]
enum CliError {
    Input(InputError),
    Core(lidstone::Error),
    /// The computation finished but reported failure; payload already printed.
    Reported(u8, String),
}

impl From<InputError> for CliError {
    fn from(e: InputError) -> Self {
        CliError::Input(e)
    }
}

impl From<lidstone::Error> for CliError {
    fn from(e: lidstone::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Core(e) => match e.class() {
                ErrorClass::Input => 2,
                ErrorClass::NonConvergence => 3,
                ErrorClass::Hypothesis => 4,
                ErrorClass::Internal => 1,
            },
            CliError::Reported(code, _) => *code,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(e) => write!(f, "input error: {e}"),
            CliError::Core(e) => write!(f, "error: {e}"),
            CliError::Reported(_, msg) => f.write_str(msg),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Latex,
}

#[derive(Parser)]
#[command(
    name = "lidstone",
    version,
    about = "Lidstone polynomials and expansions of entire functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact basis polynomials Λ_{t,1}, Λ_{t,0} for even t ≤ max-t
    Basis {
        #[arg(long)]
        max_t: Option<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Lidstone expansion of a function, exact for polynomials
    Expand {
        #[arg(long)]
        function: String,
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        #[arg(long)]
        max_t: Option<usize>,
    },
    /// Solve the two-point even-derivative interpolation problem
    Interpolate {
        /// JSON list of f^(t)(0) for t = 0, 2, 4, ...
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        /// JSON list of f^(t)(1) for t = 0, 2, 4, ...
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long)]
        max_t: Option<usize>,
    },
    /// Compare the contour-integral formulas with exact basis values
    CheckIntegral {
        #[arg(long)]
        t: usize,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long = "K", visible_alias = "k", default_value_t = 1)]
        k: usize,
        #[arg(long)]
        nodes: Option<usize>,
        /// Which polynomial to check: 1, 0, or both when omitted
        #[arg(long)]
        index: Option<u8>,
    },
    /// Sample the sup-norm and sine-approximation bounds
    CheckBounds {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        r: f64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Buck kernel expansion with K sine terms
    Buck {
        #[arg(long)]
        function: String,
        #[arg(long = "K", visible_alias = "k", default_value_t = 1)]
        k: usize,
        /// Coefficient contour radius; defaults to the middle of (τ, (K+1)π)
        #[arg(long)]
        r: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long)]
        max_t: Option<usize>,
        #[arg(long)]
        nodes: Option<usize>,
    },
    /// Sine decomposition of a function whose even derivatives vanish at 0 and 1
    Schoenberg {
        #[arg(long)]
        function: String,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        t_check: Option<usize>,
    },
    /// Sparse counterexample polynomial for chosen conditions
    Counterexample {
        /// Comma-separated t:i pairs, e.g. 2:1,4:1
        #[arg(long)]
        indices: String,
        #[arg(long)]
        terms: Option<usize>,
    },
    /// Run the acceptance suite
    Reproduce {
        /// Run a single criterion
        #[arg(long)]
        criterion: Option<u8>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = Defaults::load()
        .map_err(CliError::from)
        .and_then(|d| run(cli.command, &d, &mut out));
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.as_bytes());
    let _ = stdout.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn emit<T: Serialize>(out: &mut String, value: &T) {
    out.push_str(&serde_json::to_string_pretty(value).expect("serializable output"));
    out.push('\n');
}

fn run(command: Command, defaults: &Defaults, out: &mut String) -> Result<(), CliError> {
    match command {
        Command::Basis { max_t, format } => basis(max_t.unwrap_or(defaults.t_max), format, out),
        Command::Expand { function, z, max_t } => {
            let z = z.as_deref().map(parse_complex).transpose()?;
            expand(&function, z, max_t.unwrap_or(defaults.t_max), out)
        }
        Command::Interpolate { a, b, z, max_t } => interpolate(
            &a,
            &b,
            parse_complex(&z)?,
            max_t.unwrap_or(defaults.t_max),
            out,
        ),
        Command::CheckIntegral {
            t,
            z,
            k,
            nodes,
            index,
        } => check_integral(
            t,
            parse_complex(&z)?,
            k,
            nodes.unwrap_or(defaults.nodes),
            index,
            out,
        ),
        Command::CheckBounds { t, r, samples } => {
            emit(out, &bound_check(t, r, samples)?);
            Ok(())
        }
        Command::Buck {
            function,
            k,
            r,
            z,
            max_t,
            nodes,
        } => {
            let f = FunctionSpec::parse(&function)?.model()?;
            let radius = r.unwrap_or_else(|| default_buck_radius(&f, k));
            let cfg = ContourConfig::new(radius, nodes.unwrap_or(defaults.nodes))?;
            let expansion = BuckExpansion::new(&f, k, max_t.unwrap_or(defaults.t_max), cfg)?;
            let eval = expansion.evaluate(&f, parse_complex(&z)?)?;
            emit(
                out,
                &json!({
                    "K": k,
                    "radius": radius,
                    "C": expansion.c,
                    "value": eval.value,
                    "direct": eval.direct,
                    "residual": eval.residual,
                    "tail_estimate": expansion.tail_estimate,
                }),
            );
            Ok(())
        }
        Command::Schoenberg {
            function,
            tol,
            t_check,
        } => {
            let f = FunctionSpec::parse(&function)?.model()?;
            let tol = tol.unwrap_or(defaults.tol);
            let t_check = t_check.unwrap_or(defaults.t_max);
            let violations = even_vanishing_violations(&f, t_check, tol)?;
            if !violations.is_empty() {
                emit(out, &json!({ "violations": violations }));
            }
            let d = schoenberg_decompose(&f, t_check, tol)?;
            emit(
                out,
                &json!({
                    "K": d.k,
                    "C": d.c,
                    "residual": d.residual,
                    "tau_estimate": d.tau_estimate,
                    "radius": d.radius,
                    "violations": violations,
                }),
            );
            Ok(())
        }
        Command::Counterexample { indices, terms } => {
            let indices = parse_indices(&indices)?;
            let spec = CounterexampleSpec {
                terms: terms.unwrap_or(indices.len()),
                indices,
            };
            emit(out, &sparse_counterexample(&spec)?);
            Ok(())
        }
        Command::Reproduce { criterion, format } => reproduce(criterion, format, out),
    }
}

fn basis(max_t: usize, format: Format, out: &mut String) -> Result<(), CliError> {
    let table = shared_table(max_t)?;
    let entries: Vec<_> = table.entries().iter().filter(|e| e.t <= max_t).collect();
    match format {
        Format::Json => emit(out, &entries),
        Format::Latex => {
            for e in entries {
                out.push_str(&latex_entry(e));
                out.push('\n');
            }
        }
        Format::Csv => {
            out.push_str("t,index,power,numerator,denominator\n");
            for e in entries {
                for (index, p) in [(1, &e.lambda1), (0, &e.lambda0)] {
                    for (power, c) in p.coeffs().iter().enumerate() {
                        if *c != rat_int(0) {
                            out.push_str(&format!(
                                "{},{index},{power},{},{}\n",
                                e.t,
                                c.numer(),
                                c.denom()
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn expand(
    function: &str,
    z: Option<ComplexValue>,
    max_t: usize,
    out: &mut String,
) -> Result<(), CliError> {
    let spec = FunctionSpec::parse(function)?;
    if let Some(p) = spec.polynomial()? {
        let e = expand_polynomial(&p)?;
        let value = z.map(|z| e.reconstruction.eval_complex(z));
        emit(
            out,
            &json!({
                "reconstruction": e.reconstruction.to_string(),
                "polynomial": e.reconstruction,
                "exact": p == e.reconstruction,
                "data": e.data,
                "value": value,
            }),
        );
        return Ok(());
    }
    let f = spec.model()?;
    let data = derivative_data(&f, max_t)?;
    let value = z
        .map(|z| -> Result<_, CliError> {
            let v = lidstone_partial_sum(&data, z, max_t)?;
            let direct = f.eval(z);
            Ok(json!({ "z": z, "value": v, "direct": direct, "abs_error": (v - direct).norm() }))
        })
        .transpose()?;
    emit(
        out,
        &json!({ "max_t": max_t, "data": data, "evaluation": value }),
    );
    Ok(())
}

fn interpolate(
    a: &str,
    b: &str,
    z: ComplexValue,
    max_t: usize,
    out: &mut String,
) -> Result<(), CliError> {
    let parse = |what: &str, s: &str| -> Result<Vec<ComplexValue>, InputError> {
        serde_json::from_str::<Vec<Num>>(s)
            .map(|v| v.into_iter().map(Into::into).collect())
            .map_err(|e| InputError(format!("invalid {what} list: {e}")))
    };
    let (a, b) = (parse("a", a)?, parse("b", b)?);
    match whittaker_interpolate(&a, &b, z, max_t) {
        Ok(Interpolation { value, report }) => {
            emit(
                out,
                &json!({ "value": value, "convergence_report": report, "converged": true }),
            );
            Ok(())
        }
        Err(lidstone::Error::DivergenceDetected { value, report }) => {
            emit(
                out,
                &json!({ "value": value, "convergence_report": report, "converged": false }),
            );
            Err(lidstone::Error::DivergenceDetected { value, report }.into())
        }
        Err(e) => Err(e.into()),
    }
}

fn check_integral(
    t: usize,
    z: ComplexValue,
    k: usize,
    nodes: usize,
    index: Option<u8>,
    out: &mut String,
) -> Result<(), CliError> {
    let trunc = TruncationConfig::new(k, t)?;
    let table = shared_table(t)?;
    let mut results = Vec::new();
    let which: &[u8] = match index {
        None => &[1, 0],
        Some(1) => &[1],
        Some(0) => &[0],
        Some(i) => return Err(InputError(format!("--index must be 0 or 1, got {i}")).into()),
    };
    for &i in which {
        let (exact, q) = if i == 1 {
            let p = table.lambda1(t).expect("table covers t");
            (p.eval_complex(z), lambda_t1_integral(t, z, &trunc, nodes)?)
        } else {
            let p = table.lambda0(t).expect("table covers t");
            (p.eval_complex(z), lambda_t0_integral(t, z, &trunc, nodes)?)
        };
        results.push(json!({
            "index": i,
            "exact": exact,
            "quadrature": q.value,
            "abs_error": (q.value - exact).norm(),
            "trigonometric": q.trigonometric,
            "contour": q.contour,
            "radius": q.radius,
            "nodes": q.nodes,
        }));
    }
    emit(out, &json!({ "t": t, "z": z, "K": k, "results": results }));
    Ok(())
}

fn parse_indices(text: &str) -> Result<Vec<(usize, u8)>, InputError> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|pair| {
            let (t, i) = pair
                .split_once(':')
                .ok_or_else(|| InputError(format!("expected t:i, got {pair:?}")))?;
            let t = t
                .trim()
                .parse()
                .map_err(|_| InputError(format!("bad t in {pair:?}")))?;
            let i = i
                .trim()
                .parse()
                .map_err(|_| InputError(format!("bad i in {pair:?}")))?;
            Ok((t, i))
        })
        .collect()
}

fn reproduce(criterion: Option<u8>, format: Format, out: &mut String) -> Result<(), CliError> {
    let outcomes: Vec<CriterionOutcome> = match criterion {
        Some(id) => {
            vec![run_criterion(id).ok_or_else(|| InputError(format!("no criterion {id}")))?]
        }
        None => run_all(),
    };
    match format {
        Format::Json => emit(out, &outcomes),
        Format::Csv => {
            out.push_str("id,name,passed\n");
            for o in &outcomes {
                out.push_str(&format!("{},{},{}\n", o.id, o.name, o.passed));
            }
        }
        Format::Latex => return Err(InputError("reproduce supports json and csv".into()).into()),
    }
    for o in &outcomes {
        eprintln!("{o} ({:.2?})", o.elapsed);
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    if failed > 0 {
        return Err(CliError::Reported(1, format!("{failed} criteria failed")));
    }
    Ok(())
}
