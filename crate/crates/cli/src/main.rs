mod output;

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;
use spectral_lab::cyclic::truncated_spectral_measure;
use spectral_lab::graph::{common_prefix_len, tree_path_length};
use spectral_lab::lattice::{plane_wave_residuals, symbol_samples};
use spectral_lab::measures::{mu_c_density, mu_cp_density, SpectralMeasure};
use spectral_lab::periodic::{detect_period, eigvec_generate, golden_eigenvalues};
use spectral_lab::resistance::{covariance, resistance_dist, resistance_dist_from_potentials};
use spectral_lab::walks::{laplacian_moment_from_paths, path_count, path_count_big, path_moment};
use spectral_lab::{run_suite, JacobiMatrix, LatticeTorus, SpectralError, Suite, VerifyOptions, Word};

use output::{checks_table, float_param, summary_line, Cell, RunReport, Table};

const THREADS_VAR: &str = "SPECTRAL_LAB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "spectral-lab", version, about = "Spectral measures, walks and resistance on N-ary trees and lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MeasureArg {
    #[value(name = "c")]
    Semicircle,
    #[value(name = "c+p")]
    Perturbed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Operators,
    Cyclic,
    Measures,
    Resistance,
    Walks,
    Eigen,
    Lattice,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Operators => Suite::Operators,
            SuiteArg::Cyclic => Suite::Cyclic,
            SuiteArg::Measures => Suite::Measures,
            SuiteArg::Resistance => Suite::Resistance,
            SuiteArg::Walks => Suite::Walks,
            SuiteArg::Eigen => Suite::Eigen,
            SuiteArg::Lattice => Suite::Lattice,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BlockArg {
    /// The block of the root, `D_Ω`.
    Omega,
    /// Every other block, `D`.
    D,
    /// `Re S`, whose spectral measure is the semicircle law.
    Semicircle,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Density of μ_c or μ_{c+p} on an even grid of [-1, 1].
    Density {
        #[arg(long = "N")]
        branching: usize,
        #[arg(long, value_enum)]
        measure: MeasureArg,
        #[arg(long, default_value_t = 201)]
        points: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Run an invariant suite and report every residual.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Restrict tree checks to one branching number.
        #[arg(long = "N")]
        branching: Option<usize>,
        /// Monte Carlo trials per walk length.
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Moments of μ_{c+p} three ways, with exact path and Laplacian moments.
    Moments {
        #[arg(long = "N")]
        branching: usize,
        #[arg(long, default_value_t = 16)]
        max: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Exact closed-walk counts at the root of the looped tree.
    Paths {
        #[arg(long = "N")]
        branching: usize,
        #[arg(long = "n")]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Resistance distance and covariance between two words.
    Resistance {
        #[arg(long = "N")]
        branching: usize,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Periodic eigenvector of the half-line Laplacian.
    Eigvec {
        /// `golden-`, `golden+` or a number.
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, default_value_t = 100)]
        len: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Spectral measure of a truncated Jacobi block.
    Jacobi {
        #[arg(long = "N", default_value_t = 1)]
        branching: usize,
        #[arg(long = "M")]
        size: usize,
        #[arg(long, value_enum, default_value_t = BlockArg::Omega)]
        block: BlockArg,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Plane-wave eigenvalues of the periodic lattice Laplacian.
    Lattice {
        #[arg(long = "d")]
        dim: usize,
        #[arg(long = "L")]
        side: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

enum Failure {
    Usage(String),
    Verification,
    Io(String),
}

impl From<SpectralError> for Failure {
    fn from(e: SpectralError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("{THREADS_VAR} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn params(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn emit(command: &str, parameters: BTreeMap<String, Value>, table: &Table, format: Format) -> String {
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => RunReport::new(command, parameters, table).to_json(),
    }
}

fn density(branching: usize, measure: MeasureArg, points: usize, format: Format) -> Result<String, Failure> {
    if branching == 0 {
        return Err(SpectralError::ZeroBranching.into());
    }
    if points < 2 {
        return Err(Failure::Usage(format!("--points must be at least 2, got {points}")));
    }
    let mut table = Table::new(&["x", "density"]);
    for i in 0..points {
        let x = -1.0 + 2.0 * i as f64 / (points - 1) as f64;
        let value = match measure {
            MeasureArg::Semicircle => mu_c_density(x),
            MeasureArg::Perturbed => mu_cp_density(x, branching),
        };
        table.push(vec![Cell::Float(x), Cell::Float(value)]);
    }
    let label = match measure {
        MeasureArg::Semicircle => "c",
        MeasureArg::Perturbed => "c+p",
    };
    let p = params(&[
        ("N", branching.into()),
        ("measure", label.into()),
        ("points", points.into()),
    ]);
    Ok(emit("density", p, &table, format))
}

fn verify(
    suite: SuiteArg,
    opts: VerifyOptions,
    out: Option<PathBuf>,
    format: Format,
) -> Result<String, Failure> {
    let suite = Suite::from(suite);
    let checks = run_suite(suite, &opts)?;
    let table = checks_table(&checks);
    let rendered = match format {
        Format::Csv => table.to_csv(),
        Format::Json => {
            let p = params(&[
                ("suite", suite.name().into()),
                ("N", opts.branching.map_or(Value::Null, Value::from)),
                ("trials", opts.trials.into()),
            ]);
            RunReport::new("verify", p, &Table::default())
                .with_checks(&checks)
                .with_seed(opts.seed)
                .to_json()
        }
    };
    eprintln!("{}", summary_line(suite.name(), &checks));
    let passed = checks.iter().all(|c| c.passed);
    let stdout = match out {
        Some(path) => {
            fs::write(&path, rendered).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            String::new()
        }
        None => rendered,
    };
    if passed {
        Ok(stdout)
    } else {
        print!("{stdout}");
        Err(Failure::Verification)
    }
}

fn moments(branching: usize, max: usize, format: Format) -> Result<String, Failure> {
    let mu = SpectralMeasure::perturbed(branching)?;
    let s = (branching as f64).sqrt();
    let mapped = JacobiMatrix::d_omega(branching, max / 2 + 1)?
        .affine((branching + 1) as f64 / (2.0 * s), -1.0 / (2.0 * s));
    let mut table = Table::new(&["n", "path_count", "laplacian_moment", "quadrature", "jacobi", "from_paths"]);
    for n in 0..=max {
        table.push(vec![
            Cell::Int(n as i128),
            Cell::Int(path_count(branching, n)? as i128),
            Cell::Int(laplacian_moment_from_paths(branching, n)?),
            Cell::Float(mu.moment(n)),
            Cell::Float(mapped.moment(n)?),
            Cell::Float(path_moment(branching, n)?),
        ]);
    }
    let p = params(&[("N", branching.into()), ("max", max.into())]);
    Ok(emit("moments", p, &table, format))
}

fn paths(branching: usize, steps: usize, format: Format) -> Result<String, Failure> {
    let mut table = Table::new(&["n", "count", "return_probability"]);
    for n in 0..=steps {
        let count = path_count_big(branching, n)?.to_string();
        let numerator: f64 = count.parse().unwrap_or(f64::INFINITY);
        let probability = numerator / ((branching + 1) as f64).powi(n as i32);
        table.push(vec![Cell::Int(n as i128), Cell::BigInt(count), Cell::Float(probability)]);
    }
    let p = params(&[("N", branching.into()), ("n", steps.into())]);
    Ok(emit("paths", p, &table, format))
}

fn parse_word(s: &str, branching: usize) -> Result<Word, Failure> {
    let w: Word = s.parse()?;
    w.check_alphabet(branching)?;
    Ok(w)
}

fn resistance(branching: usize, x: &str, y: &str, format: Format) -> Result<String, Failure> {
    let (wx, wy) = (parse_word(x, branching)?, parse_word(y, branching)?);
    let mut table = Table::new(&[
        "x",
        "y",
        "path_length",
        "common_prefix",
        "dist",
        "dist_from_potentials",
        "covariance",
    ]);
    table.push(vec![
        Cell::Text(wx.to_string()),
        Cell::Text(wy.to_string()),
        Cell::Int(tree_path_length(&wx, &wy) as i128),
        Cell::Int(common_prefix_len(&wx, &wy) as i128),
        Cell::Float(resistance_dist(&wx, &wy)),
        Cell::Float(resistance_dist_from_potentials(&wx, &wy)),
        Cell::Float(covariance(&wx, &wy)),
    ]);
    let p = params(&[("N", branching.into()), ("x", x.into()), ("y", y.into())]);
    Ok(emit("resistance", p, &table, format))
}

fn parse_lambda(raw: &str) -> Result<f64, Failure> {
    let (plus, minus) = golden_eigenvalues();
    match raw {
        "golden-" => Ok(minus),
        "golden+" => Ok(plus),
        other => other
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Failure::Usage(format!("--lambda must be golden-, golden+ or a number, got {other:?}"))),
    }
}

fn eigvec(raw: &str, len: usize, format: Format) -> Result<String, Failure> {
    let lambda = parse_lambda(raw)?;
    let seq = eigvec_generate(lambda, len)?;
    let period = if len >= 20 { detect_period(&seq.values)? } else { None };
    let period_cell = period.map_or(Cell::Text(String::new()), |q| Cell::Int(q as i128));
    let mut table = Table::new(&["lambda", "period", "k", "value"]);
    for (k, v) in seq.values.iter().enumerate() {
        table.push(vec![
            Cell::Float(lambda),
            period_cell.clone(),
            Cell::Int(k as i128),
            Cell::Float(*v),
        ]);
    }
    let p = params(&[
        ("lambda", float_param(lambda)),
        ("len", len.into()),
        ("period", period.map_or(Value::Null, Value::from)),
        ("residual", float_param(seq.residual())),
    ]);
    Ok(emit("eigvec", p, &table, format))
}

fn jacobi(branching: usize, size: usize, block: BlockArg, format: Format) -> Result<String, Failure> {
    let matrix = match block {
        BlockArg::Omega => JacobiMatrix::d_omega(branching, size)?,
        BlockArg::D => JacobiMatrix::d(branching, size)?,
        BlockArg::Semicircle => JacobiMatrix::shift_real_part(size)?,
    };
    let measure = match block {
        BlockArg::Omega => truncated_spectral_measure(branching, size)?,
        _ => matrix.spectral_measure()?,
    };
    let mut table = Table::new(&["j", "eigenvalue", "weight"]);
    for (j, (x, w)) in measure.atoms.iter().zip(&measure.weights).enumerate() {
        table.push(vec![Cell::Int(j as i128), Cell::Float(*x), Cell::Float(*w)]);
    }
    let block_name = match block {
        BlockArg::Omega => "omega",
        BlockArg::D => "d",
        BlockArg::Semicircle => "semicircle",
    };
    let p = params(&[
        ("N", branching.into()),
        ("M", size.into()),
        ("block", block_name.into()),
    ]);
    Ok(emit("jacobi", p, &table, format))
}

fn lattice(dim: usize, side: usize, format: Format) -> Result<String, Failure> {
    let torus = LatticeTorus::new(dim, side)?;
    let residuals = plane_wave_residuals(&torus)?;
    let samples = symbol_samples(&torus);
    let mut table = Table::new(&["frequency", "eigenvalue", "residual"]);
    for (m, (value, residual)) in samples.iter().zip(&residuals).enumerate() {
        let freq: Vec<String> = torus.coords(m).iter().map(|c| c.to_string()).collect();
        table.push(vec![Cell::Text(freq.join(" ")), Cell::Float(*value), Cell::Float(*residual)]);
    }
    let p = params(&[("d", dim.into()), ("L", side.into())]);
    Ok(emit("lattice", p, &table, format))
}

fn run(cli: Cli) -> Result<String, Failure> {
    configure_threads()?;
    match cli.command {
        Command::Density {
            branching,
            measure,
            points,
            format,
        } => density(branching, measure, points, format),
        Command::Verify {
            suite,
            seed,
            branching,
            trials,
            out,
            format,
        } => verify(suite, VerifyOptions { branching, trials, seed }, out, format),
        Command::Moments { branching, max, format } => moments(branching, max, format),
        Command::Paths {
            branching,
            steps,
            format,
        } => paths(branching, steps, format),
        Command::Resistance { branching, x, y, format } => resistance(branching, &x, &y, format),
        Command::Eigvec { lambda, len, format } => eigvec(&lambda, len, format),
        Command::Jacobi {
            branching,
            size,
            block,
            format,
        } => jacobi(branching, size, block, format),
        Command::Lattice { dim, side, format } => lattice(dim, side, format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification) => ExitCode::from(1),
    }
}
