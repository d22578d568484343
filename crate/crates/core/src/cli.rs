//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 verification failure,
//! 3 resource limit exceeded.

use std::ffi::OsString;
use std::fmt::Write;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bell::{bell_general, bell_ordinary_direct, multinomial_via_main, BellQuery};
use crate::error::{Error, Result};
use crate::formula::{render, xk_formula_collapsed, xk_formula_direct, Format, FormulaCache};
use crate::limits::Limits;
use crate::rational::{self, Rational};
use crate::series::{
    averaged_tail_estimate, evaluate_formula, evaluate_formula_f64, truncated_product, truncation_sequence,
    RowGenerator, SeriesTable,
};
use crate::verify::{self, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;
pub const EXIT_RESOURCE_LIMIT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "prodseries", version, about = "Coefficients of products of power series with constant term one")]
pub struct RunConfig {
    #[command(flatten)]
    pub caps: CapArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CapArgs {
    /// Largest m for which S_m may be enumerated.
    #[arg(long, global = true)]
    pub max_perm: Option<usize>,
    /// Largest m for which set partitions of m elements may be enumerated.
    #[arg(long, global = true)]
    pub max_set_partition: Option<usize>,
    /// Longest partition expanded over permutations rather than set partitions.
    #[arg(long, global = true)]
    pub direct_max_len: Option<usize>,
}

impl CapArgs {
    fn limits(&self) -> Limits {
        let d = Limits::default();
        Limits {
            max_permutation_m: self.max_perm.unwrap_or(d.max_permutation_m),
            max_set_partition_m: self.max_set_partition.unwrap_or(d.max_set_partition_m),
            direct_max_len: self.direct_max_len.unwrap_or(d.direct_max_len),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Plain,
    Latex,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Plain => Format::Plain,
            FormatArg::Latex => Format::Latex,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Auto,
    Direct,
    Collapsed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the formula for X_k.
    Formula {
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "plain")]
        format: FormatArg,
        #[arg(long, value_enum, default_value = "auto")]
        route: RouteArg,
    },
    /// Evaluate X_1..X_{k-max} on a coefficient table.
    Eval {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k_max: usize,
        /// Also multiply the factors directly and compare.
        #[arg(long)]
        check: bool,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
    },
    /// Run the randomized consistency suites.
    Verify {
        #[arg(long, default_value_t = 5)]
        k_max: usize,
        #[arg(long, default_value_t = 5)]
        n_max: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Ordinary Bell polynomial B̂_{n,k}.
    Bell {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Leading argument; when given, --xs holds the remaining n-k arguments.
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<String>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        xs: Vec<String>,
    },
    /// (1 + a_1 + .. + a_α)^N through the coefficient formula.
    Multinomial {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        a: Vec<String>,
        #[arg(long = "N")]
        n: usize,
    },
    /// Truncated coefficients X_k^{(N)} for a built-in generator, as CSV.
    Converge {
        #[arg(long = "gen")]
        generator: String,
        #[arg(long)]
        k: usize,
        #[arg(long = "n", value_delimiter = ',', required = true)]
        ns: Vec<usize>,
        /// Append the mean of the last two truncations (heuristic, alternating generators).
        #[arg(long)]
        tail_average: bool,
    },
}

/// Text for standard output and the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: EXIT_OK }
    }
}

pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::ResourceLimit { .. } => EXIT_RESOURCE_LIMIT,
        _ => EXIT_USAGE,
    }
}

fn parse_list(items: &[String]) -> Result<Vec<Rational>> {
    items.iter().map(|s| rational::parse(s)).collect()
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    let limits = cfg.caps.limits();
    match &cfg.command {
        Command::Formula { k, format, route } => {
            let f = match route {
                RouteArg::Auto => (*FormulaCache::from_env().get(*k, &limits)?).clone(),
                RouteArg::Direct => xk_formula_direct(*k, &limits)?,
                RouteArg::Collapsed => xk_formula_collapsed(*k, &limits)?,
            };
            Ok(Outcome::ok(render(&f, (*format).into()) + "\n"))
        }
        Command::Eval {
            input,
            k_max,
            check,
            mode,
        } => cmd_eval(input, *k_max, *check, *mode, &limits),
        Command::Verify {
            k_max,
            n_max,
            trials,
            seed,
        } => {
            let vc = VerifyConfig {
                k_max: *k_max,
                n_max: *n_max,
                trials: *trials,
                seed: *seed,
                limits,
                cache: FormulaCache::from_env(),
            };
            let report = verify::run_all(&vc)?;
            Ok(Outcome {
                stdout: report.render(),
                code: if report.all_passed() { EXIT_OK } else { EXIT_VERIFY_FAILED },
            })
        }
        Command::Bell { n, k, x0, xs } => cmd_bell(*n, *k, x0.as_deref(), xs, &limits),
        Command::Multinomial { a, n } => {
            let v = multinomial_via_main(&parse_list(a)?, *n, &limits)?;
            Ok(Outcome::ok(rational::format(&v) + "\n"))
        }
        Command::Converge {
            generator,
            k,
            ns,
            tail_average,
        } => {
            let generator: RowGenerator = generator.parse()?;
            let seq = truncation_sequence(&generator, *k, ns, &limits)?;
            let mut out = String::from("N,value\n");
            for (n, v) in &seq {
                writeln!(out, "{n},{v}").unwrap();
            }
            if *tail_average {
                let last = *ns.last().expect("at least one N");
                let est = averaged_tail_estimate(&generator, *k, last, &limits)?;
                writeln!(out, "# heuristic tail average at N={last}: {est}").unwrap();
            }
            Ok(Outcome::ok(out))
        }
    }
}

fn cmd_eval(input: &PathBuf, k_max: usize, check: bool, mode: ModeArg, limits: &Limits) -> Result<Outcome> {
    let text = std::fs::read_to_string(input)?;
    let table = SeriesTable::from_json(&text)?;
    if k_max > table.num_cols() {
        return Err(Error::invalid(format!(
            "--k-max {k_max} exceeds the table truncation K = {}",
            table.num_cols()
        )));
    }
    let cache = FormulaCache::from_env();
    let oracle = if check { Some(truncated_product(&table, k_max)?) } else { None };
    let mut all_equal = true;
    let mut checks = Vec::new();
    let values = match mode {
        ModeArg::Exact => {
            let mut values = Vec::with_capacity(k_max);
            for k in 1..=k_max {
                let x = evaluate_formula(&*cache.get(k, limits)?, &table)?;
                if let Some(o) = &oracle {
                    let equal = x == o[k - 1];
                    all_equal &= equal;
                    checks.push(json!({"k": k, "oracle": rational::format(&o[k - 1]), "equal": equal}));
                }
                values.push(json!(rational::format(&x)));
            }
            values
        }
        ModeArg::Float => {
            let ft = table.to_float();
            let mut values = Vec::with_capacity(k_max);
            for k in 1..=k_max {
                let x = evaluate_formula_f64(&*cache.get(k, limits)?, &ft, ft.num_rows())?;
                if let Some(o) = &oracle {
                    let exact = rational::to_f64(&o[k - 1]);
                    let equal = (x - exact).abs() <= 1e-9 * exact.abs().max(1.0);
                    all_equal &= equal;
                    checks.push(json!({"k": k, "oracle": rational::format(&o[k - 1]), "equal": equal}));
                }
                values.push(json!(x));
            }
            values
        }
    };
    let doc = if check {
        json!({"k_max": k_max, "X": values, "check": checks, "all_equal": all_equal})
    } else {
        json!({"k_max": k_max, "X": values})
    };
    Ok(Outcome {
        stdout: doc.to_string() + "\n",
        code: if all_equal { EXIT_OK } else { EXIT_VERIFY_FAILED },
    })
}

fn cmd_bell(n: usize, k: usize, x0: Option<&str>, xs: &[String], limits: &Limits) -> Result<Outcome> {
    let xs = parse_list(xs)?;
    let (x0, rest) = match x0 {
        Some(x) => (rational::parse(x)?, xs),
        None => {
            let mut it = xs.into_iter();
            let first = it
                .next()
                .ok_or_else(|| Error::invalid("bell needs --x0 or a non-empty --xs"))?;
            (first, it.collect())
        }
    };
    let via_formula = bell_general(n, k, &x0, &rest, limits)?;
    let mut full = vec![x0];
    full.extend(rest);
    let direct = bell_ordinary_direct(&BellQuery::new(n, k, full)?);
    if via_formula != direct {
        return Ok(Outcome {
            stdout: format!(
                "mismatch: formula path {} != direct sum {}\n",
                rational::format(&via_formula),
                rational::format(&direct)
            ),
            code: EXIT_VERIFY_FAILED,
        });
    }
    Ok(Outcome::ok(rational::format(&via_formula) + "\n"))
}

/// Parses arguments, runs the command, writes its output once, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(&cfg) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(outcome.stdout.as_bytes());
            let _ = stdout.flush();
            outcome.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<Outcome> {
        let mut full = vec!["prodseries"];
        full.extend_from_slice(args);
        run(&RunConfig::try_parse_from(full).unwrap())
    }

    #[test]
    fn formula_plain() {
        let out = run_args(&["formula", "--k", "2", "--format", "plain"]).unwrap();
        assert_eq!(out.stdout, "1*S[2] + 1/2*S[1]*S[1] - 1/2*S[1,1]\n");
    }

    #[test]
    fn resource_limit_maps_to_exit_three() {
        let err = run_args(&["formula", "--k", "5", "--route", "direct", "--max-perm", "4"]).unwrap_err();
        assert_eq!(exit_code_for(&err), EXIT_RESOURCE_LIMIT);
    }

    #[test]
    fn bell_and_multinomial() {
        assert_eq!(run_args(&["bell", "--n", "4", "--k", "4", "--x0", "2"]).unwrap().stdout, "16\n");
        let out = run_args(&["bell", "--n", "5", "--k", "3", "--xs", "1,2,3"]).unwrap();
        assert_eq!(out.code, EXIT_OK);
        // coefficient of t^5 in (t + 2t^2 + 3t^3)^3
        assert_eq!(out.stdout, "21\n");
        assert_eq!(run_args(&["multinomial", "--a", "1,1", "--N", "2"]).unwrap().stdout, "9\n");
        assert_eq!(run_args(&["multinomial", "--a", "-1/2,1", "--N", "2"]).unwrap().stdout, "9/4\n");
    }

    #[test]
    fn converge_csv() {
        let out = run_args(&["converge", "--gen", "euler", "--k", "5", "--n", "5,6,10"]).unwrap();
        assert_eq!(out.stdout, "N,value\n5,1\n6,1\n10,1\n");
        assert!(run_args(&["converge", "--gen", "nope", "--k", "1", "--n", "3"]).is_err());
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(main_with_args(["prodseries", "formula"]), EXIT_USAGE);
        assert_eq!(main_with_args(["prodseries", "frobnicate"]), EXIT_USAGE);
    }
}
