mod render;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use indicial::adjoint_pairing::{gram_with, verify_signature_equals_sf, GramOptions, Verdict};
use indicial::cone_ode::{deficiency_indices, verify_null_cobordism_with, ConeRealization, DEFAULT_ODE_TOL};
use indicial::io::{parse_cone, parse_pencil, FixtureJson};
use indicial::model_zoo::{standard_fixtures, ZooConfig};
use indicial::pencil::{indicial_roots, normalize_strip};
use indicial::singular_functions::strip_decomposition_with;
use indicial::spectral_flow::{compare_methods, eigenvalue_curves, spectral_flow, write_curves_csv, SfTolerances};
use indicial::{Error, SelfAdjointPencil};
use serde_json::{json, Value};

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(name = "indicial", version, about = "Indicial roots, spectral flow and adjoint pairings of selfadjoint pencils")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Pencil (or cone) JSON file.
    input: PathBuf,
    /// Also write the JSON result to this path.
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    root_tol: Option<f64>,
    #[arg(long)]
    quad_tol: Option<f64>,
    #[arg(long)]
    ode_tol: Option<f64>,
    /// Relative zero tolerance for eigenvalue signs.
    #[arg(long)]
    zero_tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Indicial roots with multiplicities.
    Roots(Common),
    /// Spectral flow by all three methods, with an agreement flag.
    Sf {
        #[command(flatten)]
        common: Common,
        /// Write eigenvalue curves of p(σ) on [-T, T] as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = 201)]
        samples: usize,
        /// Half-width T of the curve window; defaults to the spectral flow window.
        #[arg(long)]
        window: Option<f64>,
    },
    /// Bases of the singular function spaces for all strip roots.
    Ebasis(Common),
    /// Gram matrix of the adjoint pairing and its signature.
    Gram {
        #[command(flatten)]
        common: Common,
        /// Rescale the pencil first so the strip holds only real roots.
        #[arg(long)]
        normalize: bool,
    },
    /// Check that the pairing signature equals the spectral flow.
    Verify(Common),
    /// Deficiency indices and the null-cobordism check for a first-order cone.
    Cone(Common),
    /// Write the standard fixture set into a directory.
    Zoo {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
}

enum Failure {
    Input(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NumericalFailure(_)
            | Error::QuadratureFailure { .. }
            | Error::WindowError(_)
            | Error::DegenerateCrossing(_)
            | Error::NotARoot(_)
            | Error::NotInMaxDomain(_)
            | Error::SingularPoint => Failure::Numerical(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<u8, Failure>;

impl Common {
    fn sf_tol(&self) -> SfTolerances {
        let mut t = SfTolerances::default();
        if let Some(r) = self.root_tol {
            t.root_tol = r;
        }
        if let Some(z) = self.zero_tol {
            t.zero_tol = z;
        }
        t
    }

    fn gram_opts(&self) -> GramOptions {
        let mut g = GramOptions::default();
        if let Some(r) = self.root_tol {
            g.root_tol = r;
        }
        if let Some(q) = self.quad_tol {
            g.quad_tol = q;
        }
        g
    }

    fn read(&self) -> Result<String, Failure> {
        fs::read_to_string(&self.input).map_err(|e| Failure::Input(format!("{}: {e}", self.input.display())))
    }

    fn pencil(&self) -> Result<SelfAdjointPencil, Failure> {
        Ok(parse_pencil(&self.read()?)?)
    }

    fn emit(&self, value: &Value) -> Result<(), Failure> {
        let text = serde_json::to_string_pretty(value).expect("JSON values serialize");
        print_stdout(&text);
        if let Some(path) = &self.json {
            write_file(path, text.as_bytes())?;
        }
        Ok(())
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn print_stdout(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}").and_then(|_| out.flush());
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Pass => 0,
        Verdict::Fail => EXIT_FAIL,
        Verdict::Inconclusive => EXIT_NUMERICAL,
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Roots(c) => {
            let p = c.pencil()?;
            let roots = indicial_roots(&p, c.sf_tol().root_tol)?;
            c.emit(&json!(roots))?;
            Ok(0)
        }
        Command::Sf { common: c, csv, samples, window } => {
            let p = c.pencil()?;
            let tol = c.sf_tol();
            let cmp = compare_methods(&p, &tol)?;
            let report = spectral_flow(&p, &tol)?;
            if let Some(path) = csv {
                if samples < 2 {
                    return Err(Failure::Input("--samples must be at least 2".into()));
                }
                let curves = eigenvalue_curves(&p, window.unwrap_or(cmp.window), samples)?;
                let mut buf = Vec::new();
                write_curves_csv(&mut buf, &curves).expect("writing to memory");
                write_file(&path, &buf)?;
            }
            c.emit(&json!({
                "value": report.value,
                "report": report,
                "window": cmp.window,
                "endpoint": cmp.endpoint,
                "partition": cmp.partition.as_ref().map(|r| json!(r)).unwrap_or_else(|e| json!({ "error": e })),
                "crossing_form": cmp.crossing_form.as_ref().map(|r| json!(r)).unwrap_or_else(|e| json!({ "error": e })),
                "agree": cmp.agree,
            }))?;
            Ok(if cmp.agree { 0 } else { EXIT_FAIL })
        }
        Command::Ebasis(c) => {
            let p = c.pencil()?;
            let opts = c.gram_opts();
            let bases = strip_decomposition_with(&p, opts.root_tol, opts.cutoff)?;
            c.emit(&render::bases(&bases))?;
            Ok(0)
        }
        Command::Gram { common: c, normalize } => {
            let p = c.pencil()?;
            let opts = c.gram_opts();
            let (t, p) = if normalize {
                let (t, pt) = normalize_strip(&p, opts.root_tol)?;
                (Some(t), pt)
            } else {
                (None, p)
            };
            let g = gram_with(&p, &opts)?;
            c.emit(&render::gram(&g, t))?;
            Ok(0)
        }
        Command::Verify(c) => {
            let p = c.pencil()?;
            let v = verify_signature_equals_sf(&p, &c.gram_opts(), &c.sf_tol());
            c.emit(&json!(v))?;
            if let Some(cause) = &v.cause {
                eprintln!("indicial: {cause}");
            }
            Ok(verdict_code(v.verdict))
        }
        Command::Cone(c) => {
            let cone: ConeRealization = parse_cone(&c.read()?)?;
            let ode_tol = c.ode_tol.unwrap_or(DEFAULT_ODE_TOL);
            let report = deficiency_indices(&cone, ode_tol)?;
            let verdict = cone
                .is_lagrangian()
                .then(|| verify_null_cobordism_with(&cone, ode_tol, &c.gram_opts(), &c.sf_tol()));
            c.emit(&json!({ "lagrangian": cone.is_lagrangian(), "deficiency": report, "verdict": verdict }))?;
            Ok(verdict.map_or(0, |v| verdict_code(v.verdict)))
        }
        Command::Zoo { out, seed, count } => {
            let cfg = ZooConfig { seed, random_pencils: count, random_diracs: count };
            fs::create_dir_all(&out).map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?;
            let mut names = Vec::new();
            for f in standard_fixtures(&cfg)? {
                let path = out.join(format!("{}.json", f.name));
                let text = serde_json::to_string_pretty(&FixtureJson::from_fixture(&f)).expect("fixtures serialize");
                write_file(&path, text.as_bytes())?;
                names.push(path.display().to_string());
            }
            print_stdout(&serde_json::to_string_pretty(&json!(names)).expect("JSON values serialize"));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(msg)) => {
            eprintln!("indicial: input error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("indicial: numerical failure: {msg}");
            ExitCode::from(EXIT_NUMERICAL)
        }
    }
}
