use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use blochcert_core::floquet::DEFAULT_BUDGET;
use blochcert_core::laurent::variable_names;
use blochcert_core::oracle::{
    band_path, fermi_slice, monodromy_run_with, MonodromyConfig, DEFAULT_FERMI_TOL,
};
use blochcert_core::{certify, Error, FloquetSystem, LaurentPoly, OperatorModel};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

/// Irreducibility certificates and numerical checks for Bloch varieties of
/// periodic discrete Schrodinger operators.
#[derive(Parser, Debug)]
#[command(name = "blochcert", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Model file (.toml or .json)
    #[arg(value_name = "MODEL")]
    model_arg: Option<PathBuf>,

    /// Model file; alternative to the positional argument
    #[arg(long, value_name = "PATH", conflicts_with = "model_arg")]
    model: Option<PathBuf>,

    /// Write output here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

impl Common {
    fn load(&self) -> Result<OperatorModel, Error> {
        let path = self
            .model
            .as_ref()
            .or(self.model_arg.as_ref())
            .ok_or_else(|| Error::InvalidModel("no model file given".into()))?;
        OperatorModel::load(path)
    }

    fn emit(&self, text: &str) -> Result<(), Error> {
        match &self.out {
            Some(path) => fs::write(path, text)?,
            None => std::io::stdout().write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check (A1)/(A2) and write the certificate JSON.
    /// Exit 0 if certified, 2 if an assumption fails, 1 on bad input.
    Certify {
        #[command(flatten)]
        common: Common,
    },
    /// Print the symbol, lowest component, gamma profiles, the
    /// characteristic polynomial and its lift.
    Dump {
        #[command(flatten)]
        common: Common,
        /// Largest |W| for the symbolic determinant
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// Comma-separated sections to omit: symbol,h,gamma,ptilde,p
        #[arg(long, value_delimiter = ',', value_name = "SECTIONS")]
        skip: Vec<Section>,
        /// One term per line instead of a single line per section
        #[arg(long)]
        terms: bool,
    },
    /// Track eigenvalues around random loops and report the monodromy orbits.
    Monodromy {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        loops: usize,
        /// Perturbed retries per loop before it is abandoned
        #[arg(long, default_value_t = 10)]
        retries: usize,
        /// Loops over which an intransitive partition must stay unchanged
        #[arg(long, default_value_t = 8)]
        stable_loops: usize,
        /// Step budget per loop
        #[arg(long, default_value_t = 10_000)]
        max_steps: usize,
    },
    /// Band structure along a piecewise-linear k-path, as CSV.
    Bands {
        #[command(flatten)]
        common: Common,
        /// k-path nodes, e.g. "0,0:0.5,0.5:0.5,0" (default: origin to (1/2,...,1/2))
        #[arg(long, value_name = "NODES")]
        path: Option<String>,
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
    /// Real k on a grid of [0,1)^d where some eigenvalue equals lambda, as CSV.
    Fermi {
        #[command(flatten)]
        common: Common,
        /// Level as "re" or "re,im"
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, default_value_t = 32)]
        grid: usize,
        #[arg(long, default_value_t = DEFAULT_FERMI_TOL)]
        tol: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
enum Section {
    Symbol,
    H,
    Gamma,
    Ptilde,
    P,
}

fn parse_point(text: &str) -> Result<Vec<f64>, Error> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::InvalidModel(format!("bad number {s:?} in {text:?}: {e}")))
        })
        .collect()
}

fn parse_path(text: &str) -> Result<Vec<Vec<f64>>, Error> {
    text.split(':').map(parse_point).collect()
}

fn parse_lambda(text: &str) -> Result<Complex64, Error> {
    match parse_point(text)?.as_slice() {
        [re] => Ok(Complex64::new(*re, 0.0)),
        [re, im] => Ok(Complex64::new(*re, *im)),
        _ => Err(Error::InvalidModel(format!(
            "lambda must be \"re\" or \"re,im\", got {text:?}"
        ))),
    }
}

/// Names for the lifted variables: `w_j` where `q_j > 1`, otherwise `z_j`
/// (the lift does not change such a coordinate).
fn lifted_names(q: &[u32]) -> Vec<String> {
    let z = variable_names(q.len(), "z", true);
    let w = variable_names(q.len(), "w", true);
    let mut names: Vec<String> = q
        .iter()
        .enumerate()
        .map(|(j, &qj)| if qj > 1 { w[j].clone() } else { z[j].clone() })
        .collect();
    names.push(z[q.len()].clone());
    names
}

fn render<C: blochcert_core::Coefficient>(p: &LaurentPoly<C>, names: &[String], terms: bool) -> String {
    if terms {
        p.to_canonical_text(names)
    } else {
        let mut s = p.to_compact(names);
        s.push('\n');
        s
    }
}

fn format_profile(g: &[u32]) -> String {
    let parts: Vec<String> = g.iter().map(u32::to_string).collect();
    format!("({})\n", parts.join(", "))
}

fn dump(
    model: &OperatorModel,
    budget: usize,
    skip: &[Section],
    terms: bool,
) -> Result<(String, Option<String>), Error> {
    let d = model.d();
    let q = model.q();
    let znames = variable_names(d, "z", false);
    let zlnames = variable_names(d, "z", true);
    let mut out = String::new();
    out.push_str(&format!("# model sha256 {}\n", model.sha256()));
    let qs: Vec<String> = q.iter().map(u32::to_string).collect();
    out.push_str(&format!(
        "# d = {d}, q = ({}), |W| = {}\n",
        qs.join(", "),
        model.cells()
    ));
    let p = model.symbol()?;
    let h = p.lowest_component()?;
    let show = |s: Section| !skip.contains(&s);
    if show(Section::Symbol) {
        out.push_str("\n[symbol]\n");
        out.push_str(&render(&p, &znames, terms));
    }
    if show(Section::H) {
        out.push_str("\n[h]\n");
        out.push_str(&render(&h, &znames, terms));
    }
    if show(Section::Gamma) {
        out.push_str("\n[gamma]\n");
        out.push_str(&format_profile(&p.gamma_profile()?));
        out.push_str("\n[gamma_prime]\n");
        out.push_str(&format_profile(&h.gamma_profile()?));
    }
    if !show(Section::Ptilde) && !show(Section::P) {
        return Ok((out, None));
    }
    let mut sys = FloquetSystem::new(model)?.with_budget(budget);
    match sys.char_poly() {
        Ok(_) => {}
        Err(e @ Error::BudgetExceeded { .. }) => {
            out.push_str("\n# characteristic polynomial skipped: symbolic budget exceeded\n");
            return Ok((out, Some(e.to_string())));
        }
        Err(e) => return Err(e),
    }
    if show(Section::Ptilde) {
        out.push_str("\n[ptilde]\n");
        out.push_str(&render(sys.char_poly()?, &zlnames, terms));
    }
    if show(Section::P) {
        out.push_str("\n[P]\n");
        out.push_str(&render(sys.lift_char()?, &lifted_names(q), terms));
    }
    Ok((out, None))
}

fn default_path(d: usize) -> Vec<Vec<f64>> {
    vec![vec![0.0; d], vec![0.5; d]]
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Certify { common } => {
            let model = common.load()?;
            let cert = certify(&model)?;
            common.emit(&cert.to_json_pretty())?;
            Ok(if cert.verdict.is_certified() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::Dump {
            common,
            budget,
            skip,
            terms,
        } => {
            let model = common.load()?;
            let (text, warning) = dump(&model, budget, &skip, terms)?;
            common.emit(&text)?;
            if let Some(w) = warning {
                eprintln!("warning: {w}; ptilde and P sections omitted (raise --budget)");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Monodromy {
            common,
            seed,
            loops,
            retries,
            stable_loops,
            max_steps,
        } => {
            let model = common.load()?;
            let config = MonodromyConfig {
                loops,
                seed,
                retries,
                stable_loops,
                max_steps,
                ..MonodromyConfig::default()
            };
            let report = monodromy_run_with(&model, &config)?;
            common.emit(&report.to_json_pretty())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bands {
            common,
            path,
            samples,
        } => {
            let model = common.load()?;
            let nodes = match path {
                Some(p) => parse_path(&p)?,
                None => default_path(model.d()),
            };
            let table = band_path(&model, &nodes, samples)?;
            common.emit(&table.to_csv())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Fermi {
            common,
            lambda,
            grid,
            tol,
        } => {
            let model = common.load()?;
            let slice = fermi_slice(&model, parse_lambda(&lambda)?, grid, tol)?;
            common.emit(&slice.to_csv())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    // usage errors exit 1 like any other bad input; 2 is reserved for
    // failed assumptions
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
