//! Command-line front end for `e3atlas`.
//!
//! Exit codes: 0 success, 1 input or usage error, 2 the invariant vector is
//! not in X, 3 a verification run found failures.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use e3atlas::io::{
    read_input, read_state2, read_state3, to_json, write_state2, write_state3,
    ClassificationOutput, InputFile, InvariantsOutput,
};
use e3atlas::mesh::{bubble_file_name, circle_file_name, tetra_file_name};
use e3atlas::*;

pub const TOL_ENV: &str = "E3_ATLAS_TOL";

#[derive(Parser, Debug)]
#[command(
    name = "e3atlas",
    version,
    about = "Local-unitary invariants and the three-qubit orbit space"
)]
struct Cli {
    /// Print one JSON document on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Absolute tolerance (overrides E3_ATLAS_TOL).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Worker threads for verification runs.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Invariants I1..I6 and J1..J6 of a state file.
    Invariants {
        #[arg(long = "in")]
        input: PathBuf,
        /// Also print the polynomial invariants I1..I6.
        #[arg(long = "raw-I")]
        raw_i: bool,
    },
    /// Cell of a state or invariant vector.
    Classify(PointArgs),
    /// Standard-form state realizing an invariant vector.
    Synthesize {
        #[arg(long, num_args = 6, required = true, allow_hyphen_values = true)]
        beta: Vec<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Standard-form representative of a state's orbit.
    Representative {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Concurrence and cell of a two-qubit state file.
    Concurrence {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Local-unitary orbit dimension of a two- or three-qubit state file.
    OrbitDim {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = e3atlas::analysis::DEFAULT_RANK_TOL)]
        rank_tol: f64,
    },
    /// Seeded Monte Carlo checks.
    Verify {
        #[command(subcommand)]
        check: VerifyCommand,
    },
    /// Writes Haar-random state files.
    Random {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(2..=3))]
        qubits: u8,
    },
    /// Samples orbit-space geometry to CSV or OBJ.
    Mesh {
        #[command(subcommand)]
        shape: MeshCommand,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct PointArgs {
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long, num_args = 6, allow_hyphen_values = true)]
    beta: Option<Vec<f64>>,
}

#[derive(Subcommand, Debug)]
enum VerifyCommand {
    Membership {
        #[arg(long)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Lu {
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Permutation {
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Obj,
}

impl From<Format> for MeshFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => MeshFormat::Csv,
            Format::Obj => MeshFormat::Obj,
        }
    }
}

#[derive(Args, Debug)]
struct MeshOut {
    /// Output file; defaults to the conventional name inside --out-dir.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 64)]
    resolution: usize,
}

#[derive(Subcommand, Debug)]
enum MeshCommand {
    Bubble {
        #[command(flatten)]
        out: MeshOut,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    Tetra {
        #[arg(long)]
        beta4: f64,
        #[command(flatten)]
        out: MeshOut,
        #[arg(long, value_enum, default_value_t = Format::Obj)]
        format: Format,
    },
    Circle {
        #[arg(long)]
        beta1: f64,
        #[arg(long)]
        beta2: f64,
        #[arg(long)]
        beta3: f64,
        #[arg(long)]
        beta4: f64,
        #[command(flatten)]
        out: MeshOut,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

/// A failed command: exit status, message, and optional JSON detail.
struct Failure {
    code: i32,
    message: String,
    detail: Option<serde_json::Value>,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
            detail: None,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match &e {
            Error::NotInOrbitSpace { violated } => Failure {
                code: 2,
                message: e.to_string(),
                detail: Some(json!({ "violated": violated })),
            },
            _ => Failure::input(e.to_string()),
        }
    }
}

type CmdResult = std::result::Result<Output, Failure>;

/// What a command produced: JSON document, human text, and exit status.
struct Output {
    json: serde_json::Value,
    text: String,
    code: i32,
}

fn ok(json: impl Serialize, text: String) -> CmdResult {
    Ok(Output {
        json: serde_json::to_value(json).expect("serializable"),
        text,
        code: 0,
    })
}

/// `%g`-style formatting with `digits` significant digits.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{exp}", trim(mant.to_string()))
    }
}

fn trim(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn tuple(v: &[f64], digits: usize) -> String {
    let parts: Vec<String> = v.iter().map(|x| fmt_sig(*x, digits)).collect();
    format!("({})", parts.join(", "))
}

fn read_file(p: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(p).map_err(|e| Failure::input(format!("{}: {e}", p.display())))
}

fn write_file(p: &Path, data: &[u8]) -> std::result::Result<(), Failure> {
    std::fs::write(p, data).map_err(|e| Failure::input(format!("{}: {e}", p.display())))
}

fn beta_of(v: &[f64]) -> Beta {
    Beta([v[0], v[1], v[2], v[3], v[4], v[5]])
}

fn invariants(input: &Path, raw_i: bool) -> CmdResult {
    let psi = read_state3(&read_file(input)?)?;
    let i = invariants_i(&psi);
    let j = invariants_j_from_i(&i)?;
    let mut text = String::new();
    if raw_i {
        text += &format!("I = {}\n", tuple(&i.to_array(), 17));
    }
    text += &format!("J = {}\n", tuple(&j.0, 17));
    ok(InvariantsOutput::new(&i, &j), text)
}

fn classify_cmd(args: &PointArgs, tol: f64) -> CmdResult {
    let beta = match (&args.input, &args.beta) {
        (Some(p), _) => match read_input(&read_file(p)?)? {
            InputFile::State(psi) => invariants_j(&psi),
            InputFile::Beta(b) => b,
        },
        (None, Some(v)) => beta_of(v),
        (None, None) => return Err(Failure::input("one of --in or --beta is required")),
    };
    let cell = classify(&beta, tol)?;
    let report = membership(&beta, tol);
    let out = ClassificationOutput::new(cell, report);
    let text = format!(
        "cell {}\nacin_type {}\nslocc {}\norbit_dim {}\n",
        out.cell, out.acin_type, out.slocc, out.orbit_dim
    );
    ok(out, text)
}

fn synthesis_text(r: &SynthesisResult) -> String {
    let s = &r.state;
    format!(
        "case {}\nlam0 {}\nc1 {} {}\nlam2 {}\nlam3 {}\nlam4 {}\n",
        r.case_label,
        fmt_sig(s.lam0, 6),
        fmt_sig(s.c1.re, 6),
        fmt_sig(s.c1.im, 6),
        fmt_sig(s.lam2, 6),
        fmt_sig(s.lam3, 6),
        fmt_sig(s.lam4, 6)
    )
}

fn synthesize_cmd(beta: &[f64], out: &Path, tol: f64) -> CmdResult {
    let b = beta_of(beta);
    let r = synthesize(&b, tol)?;
    let psi = r.state.to_state();
    write_file(out, write_state3(&psi).as_bytes())?;
    let miss = invariants_j(&psi).max_abs_diff(&b);
    let text = synthesis_text(&r) + &format!("wrote {}\n", out.display());
    ok(
        json!({ "case": r.case_label, "standard": r.state, "residual": miss, "out": out }),
        text,
    )
}

fn representative_cmd(input: &Path, out: &Path, tol: f64) -> CmdResult {
    let psi = read_state3(&read_file(input)?)?;
    let b = invariants_j(&psi);
    let r = synthesize(&b, tol)?;
    write_file(out, write_state3(&r.state.to_state()).as_bytes())?;
    let text = format!("J = {}\n", tuple(&b.0, 6))
        + &synthesis_text(&r)
        + &format!("wrote {}\n", out.display());
    ok(
        json!({ "J": b, "case": r.case_label, "standard": r.state, "out": out }),
        text,
    )
}

fn concurrence_cmd(input: &Path, tol: f64) -> CmdResult {
    let psi = read_state2(&read_file(input)?)?;
    let c = concurrence(&psi);
    let cell = classify_two_qubit(c, tol)?;
    let info = cell.info();
    let text = format!(
        "concurrence {}\ncell {}\nclass {}\norbit_dim {}\n",
        fmt_sig(c, 6),
        info.name,
        info.slocc_class,
        info.orbit_dimension
    );
    ok(
        json!({ "concurrence": c, "cell": info.name, "class": info.slocc_class, "orbit_dim": info.orbit_dimension }),
        text,
    )
}

fn orbit_dim_cmd(input: &Path, rank_tol: f64) -> CmdResult {
    let text = read_file(input)?;
    let r = match read_state3(&text) {
        Ok(psi) => orbit_dimension3(&psi, rank_tol),
        Err(Error::WrongLength { found: 4, .. }) => {
            orbit_dimension2(&read_state2(&text)?, rank_tol)
        }
        Err(e) => return Err(e.into()),
    };
    let sv: Vec<String> = r.singular_values.iter().map(|s| fmt_sig(*s, 6)).collect();
    let human = format!(
        "dimension {}\ngap {}\ndeterminate {}\nsingular_values {}\n",
        r.dimension,
        fmt_sig(r.gap, 6),
        r.determinate,
        sv.join(" ")
    );
    ok(&r, human)
}

fn report_output(rep: &VerificationReport, extra: Option<serde_json::Value>) -> CmdResult {
    let mut text = format!("samples {}\ntol {}\n", rep.samples, fmt_sig(rep.tol, 6));
    for (c, w) in &rep.worst {
        text += &format!("worst {c} {}\n", fmt_sig(*w, 6));
    }
    text += &format!("failures {}\n", rep.failure_count);
    for f in rep.failures.iter().take(10) {
        text += &format!(
            "  sample {} seed {} {} {}\n",
            f.sample,
            f.seed,
            f.condition,
            fmt_sig(f.residual, 6)
        );
    }
    let mut json = serde_json::to_value(rep).expect("serializable");
    if let Some(extra) = extra {
        json["cases"] = extra;
    }
    let code = if rep.passed() { 0 } else { 3 };
    Ok(Output { json, text, code })
}

fn verify_cmd(check: &VerifyCommand, tol: Option<f64>) -> CmdResult {
    let rep = match *check {
        VerifyCommand::Membership { samples, seed } => {
            monte_carlo_membership(samples, seed, tol.unwrap_or(DEFAULT_TOL))?
        }
        VerifyCommand::Lu { trials, seed } => {
            check_lu_invariance(trials, seed, tol.unwrap_or(1e-10))?
        }
        VerifyCommand::Permutation { trials, seed } => {
            check_permutation_law(trials, seed, tol.unwrap_or(1e-10))?
        }
    };
    report_output(&rep, None)
}

fn random_cmd(n: u64, seed: u64, dir: &Path, qubits: u8) -> CmdResult {
    std::fs::create_dir_all(dir).map_err(|e| Failure::input(format!("{}: {e}", dir.display())))?;
    let mut files = Vec::new();
    for m in 0..n {
        let s = e3atlas::qstate::derive_seed(seed, m);
        let text = if qubits == 2 {
            write_state2(&haar_random_state2(s))
        } else {
            write_state3(&haar_random_state3(s))
        };
        let path = dir.join(format!("state_{m:05}.json"));
        write_file(&path, text.as_bytes())?;
        files.push(path);
    }
    let text = files.iter().map(|p| format!("{}\n", p.display())).collect();
    ok(json!({ "files": files }), text)
}

fn mesh_cmd(shape: &MeshCommand) -> CmdResult {
    let (bytes, path, points, faces, meta) = match shape {
        MeshCommand::Bubble { out, format } => {
            let c = sample_bubble_surface(out.resolution)?;
            let name = bubble_file_name(out.resolution, (*format).into());
            (
                emit_mesh(&c, (*format).into())?,
                target(out, name),
                c.points.len(),
                c.faces.len(),
                c.meta,
            )
        }
        MeshCommand::Tetra { beta4, out, format } => {
            let c = sample_tetrahedron(*beta4, out.resolution)?;
            let name = tetra_file_name(*beta4, out.resolution, (*format).into());
            (
                emit_mesh(&c, (*format).into())?,
                target(out, name),
                c.points.len(),
                c.faces.len(),
                c.meta,
            )
        }
        MeshCommand::Circle {
            beta1,
            beta2,
            beta3,
            beta4,
            out,
            format,
        } => {
            let c = sample_fiber_circle(*beta1, *beta2, *beta3, *beta4, out.resolution)?;
            let name = circle_file_name(*beta1, *beta2, *beta3, *beta4, (*format).into());
            (
                emit_mesh(&c, (*format).into())?,
                target(out, name),
                c.points.len(),
                0,
                c.meta,
            )
        }
    };
    write_file(&path, &bytes)?;
    let mut text = format!(
        "wrote {}\npoints {points}\nfaces {faces}\nmax_residual {}\n",
        path.display(),
        fmt_sig(meta.max_residual, 6)
    );
    if let Some(b) = &meta.binding_constraint {
        text += &format!(
            "beta5 range [{}, {}] bounded below by {b}\n",
            fmt_sig(meta.params["beta5_min"], 6),
            fmt_sig(meta.params["beta5_max"], 6)
        );
    }
    ok(
        json!({ "out": path, "points": points, "faces": faces, "meta": meta }),
        text,
    )
}

fn target(out: &MeshOut, name: String) -> PathBuf {
    out.out.clone().unwrap_or_else(|| out.out_dir.join(name))
}

fn dispatch(cli: &Cli, tol: Option<f64>) -> CmdResult {
    let default_tol = tol.unwrap_or(DEFAULT_TOL);
    match &cli.command {
        Command::Invariants { input, raw_i } => invariants(input, *raw_i),
        Command::Classify(args) => classify_cmd(args, default_tol),
        Command::Synthesize { beta, out } => synthesize_cmd(beta, out, default_tol),
        Command::Representative { input, out } => representative_cmd(input, out, default_tol),
        Command::Concurrence { input } => concurrence_cmd(input, default_tol),
        Command::OrbitDim { input, rank_tol } => orbit_dim_cmd(input, *rank_tol),
        Command::Verify { check } => verify_cmd(check, tol),
        Command::Random {
            n,
            seed,
            out_dir,
            qubits,
        } => random_cmd(*n, *seed, out_dir, *qubits),
        Command::Mesh { shape } => mesh_cmd(shape),
    }
}

/// Runs the tool on `argv` (including the program name). `env_tol` is the
/// raw value of `E3_ATLAS_TOL`, if set.
pub fn run<I, T>(argv: I, env_tol: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    let tol = match (cli.tol, env_tol) {
        (Some(t), _) => Some(t),
        (None, Some(raw)) => match raw.trim().parse::<f64>() {
            Ok(t) => Some(t),
            Err(_) => {
                let _ = writeln!(err, "error: {TOL_ENV}={raw} is not a number");
                return 1;
            }
        },
        (None, None) => None,
    };
    if let Some(t) = tol {
        if !(t >= 0.0 && t.is_finite()) {
            let _ = writeln!(err, "error: tolerance must be a finite nonnegative number");
            return 1;
        }
    }

    let result = match cli.threads {
        Some(0) => Err(Failure::input("--threads must be at least 1")),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli, tol)),
            Err(e) => Err(Failure::input(e.to_string())),
        },
        None => dispatch(&cli, tol),
    };

    match result {
        Ok(o) => {
            if cli.json {
                let _ = write!(out, "{}", to_json(&o.json));
            } else {
                let _ = write!(out, "{}", o.text);
            }
            o.code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            if cli.json {
                let mut doc = json!({ "error": f.message, "exit_code": f.code });
                if let Some(serde_json::Value::Object(extra)) = f.detail {
                    for (k, v) in extra {
                        doc[k] = v;
                    }
                }
                let _ = write!(out, "{}", to_json(&doc));
            }
            f.code
        }
    }
}
