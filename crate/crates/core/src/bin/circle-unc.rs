//! Command-line front end.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use circle_unc::acceptance;
use circle_unc::experiments::{
    default_delta0_moduli, delta0_text, estimate_delta0, figure1, figure2, figure3, fmt_num, scan_with_delta0,
    Family, FigureRange, Measure, ScanTable, SweepSpec, Varying,
};
use circle_unc::observables::density;
use circle_unc::oracle::{cross_check, DEFAULT_ORACLE_GRID};
use circle_unc::states::{CircleState, StateParams};
use circle_unc::uncertainty::{uncertainty_report, DEFAULT_DELTA0_SQ};

#[derive(Parser, Debug)]
#[command(name = "circle-unc", version, about = "Uncertainty relations for quantum states on a circle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dump the coefficients (or the angle density) of one state.
    State {
        #[command(flatten)]
        state: StateArgs,
        /// Dump the density p(phi) instead of the coefficients.
        #[arg(long)]
        density: bool,
        /// Number of density points over [-pi, pi].
        #[arg(long, default_value_t = 1024)]
        grid: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Write `state.csv` / `state.json` here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full uncertainty report of one state as JSON.
    Uncertainty {
        #[command(flatten)]
        state: StateArgs,
        /// Delta_0^2 used by the absolute squeezing criterion.
        #[arg(long, default_value_t = DEFAULT_DELTA0_SQ)]
        delta0: f64,
        /// Re-run every scalar through the quadrature oracle and report the
        /// largest discrepancy on stderr.
        #[arg(long)]
        oracle: bool,
        /// Oracle grid size (power of two, >= 4096).
        #[arg(long, default_value_t = DEFAULT_ORACLE_GRID)]
        grid: usize,
    },
    /// Sweep one parameter of a family and tabulate measures.
    Scan {
        #[command(flatten)]
        state: StateArgs,
        /// Parameter to sweep: a-real, a-imag, s, z-mod, z-arg.
        #[arg(long)]
        vary: String,
        #[arg(long, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, allow_hyphen_values = true)]
        hi: f64,
        #[arg(long)]
        count: usize,
        /// Log-spaced instead of linear parameter values.
        #[arg(long)]
        log: bool,
        /// Comma-separated measure names (e.g. kr_phi,kr_j,det_g).
        #[arg(long, value_delimiter = ',', default_value = "kr_phi,kr_j,kr_sum,var_phi,var_j,det_g")]
        measures: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_DELTA0_SQ)]
        delta0: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Write `scan.csv` / `scan.json` here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate the data behind one of the three figures.
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        number: u8,
        #[arg(long, allow_hyphen_values = true, default_value_t = -3.0)]
        lo: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 3.0)]
        hi: f64,
        #[arg(long, default_value_t = 601)]
        count: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Write `figN.csv` here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate Delta_0^2 over the coherent family.
    Delta0 {
        /// Write `delta0.txt` here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance suite; exits with status 1 if any criterion fails.
    Accept {
        /// Write `acceptance.json` here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct StateArgs {
    #[arg(long, value_enum, default_value_t = FamilyArg::Coherent)]
    family: FamilyArg,
    /// Coherent-state label as RE,IM.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "1,0")]
    z: Complex64,
    /// Squeeze parameter (squeezed family).
    #[arg(long, default_value_t = 1.0)]
    s: f64,
    /// Cat weight as RE,IM.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0,0")]
    a: Complex64,
    /// Angular momentum (fock family).
    #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
    m: i32,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    Coherent,
    Squeezed,
    Cat,
    Fock,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl StateArgs {
    fn family(&self) -> Family {
        match self.family {
            FamilyArg::Coherent => Family::Coherent,
            FamilyArg::Squeezed => Family::Squeezed,
            FamilyArg::Cat => Family::Cat,
            FamilyArg::Fock => Family::Fock,
        }
    }

    fn params(&self) -> StateParams {
        StateParams { z: self.z, s: self.s, a: self.a, m: self.m }
    }

    fn build(&self) -> Result<CircleState, Failure> {
        self.family().build(&self.params()).map_err(Failure::input)
    }
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("bad number '{t}': {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected RE,IM, got '{s}'")),
    }
}

/// Error with the exit status it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(e: impl std::fmt::Display) -> Self {
        Self { code: 2, message: e.to_string() }
    }

    fn runtime(e: impl std::fmt::Display) -> Self {
        Self { code: 1, message: e.to_string() }
    }
}

fn emit(out: Option<&Path>, file: &str, text: &str) -> Result<(), Failure> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(dir) => {
            fs::create_dir_all(dir).map_err(Failure::runtime)?;
            let path = dir.join(file);
            fs::write(&path, text).map_err(|e| Failure::runtime(format!("{}: {e}", path.display())))
        }
    }
}

fn table_text(t: &ScanTable, format: Format) -> String {
    match format {
        Format::Csv => t.to_csv(),
        Format::Json => t.to_json() + "\n",
    }
}

fn ext(format: Format) -> &'static str {
    match format {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

fn state_dump(args: &StateArgs, psi: &CircleState, format: Format) -> String {
    let family = args.family().name();
    let params = args.family().describe(&args.params());
    let norm = psi.norm_sqr();
    match format {
        Format::Csv => {
            let mut s = format!("# family={family}\n# params={params}\n# norm_check={}\nm,re,im,abs2\n", fmt_num(norm));
            for (m, c) in psi.coeffs().iter() {
                s.push_str(&format!("{m},{},{},{}\n", fmt_num(c.re), fmt_num(c.im), fmt_num(c.norm_sqr())));
            }
            s
        }
        Format::Json => {
            let coeffs: Vec<_> = psi
                .coeffs()
                .iter()
                .map(|(m, c)| serde_json::json!({ "m": m, "re": c.re, "im": c.im, "abs2": c.norm_sqr() }))
                .collect();
            let v = serde_json::json!({ "family": family, "params": params, "norm_check": norm, "coeffs": coeffs });
            serde_json::to_string_pretty(&v).expect("json") + "\n"
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::State { state, density: want_density, grid, format, out } => {
            let psi = state.build()?;
            let text = if want_density {
                if grid < 2 {
                    return Err(Failure::input("--grid must be at least 2"));
                }
                let phis: Vec<f64> = (0..grid)
                    .map(|k| {
                        if k == grid - 1 {
                            std::f64::consts::PI
                        } else {
                            -std::f64::consts::PI + 2.0 * std::f64::consts::PI * k as f64 / (grid - 1) as f64
                        }
                    })
                    .collect();
                let p = density(&psi, &phis);
                let t = ScanTable::new("phi", phis, vec![circle_unc::experiments::Column { name: "p".into(), values: p }])
                    .map_err(Failure::runtime)?
                    .with_provenance("family", state.family().name())
                    .with_provenance("params", state.family().describe(&state.params()));
                table_text(&t, format)
            } else {
                state_dump(&state, &psi, format)
            };
            emit(out.as_deref(), &format!("state.{}", ext(format)), &text)
        }
        Command::Uncertainty { state, delta0, oracle, grid } => {
            let psi = state.build()?;
            let report = uncertainty_report(&psi, delta0).map_err(Failure::input)?;
            println!("{}", serde_json::to_string_pretty(&report).map_err(Failure::runtime)?);
            if oracle {
                let chk = cross_check(&psi, grid).map_err(Failure::input)?;
                let worst = chk.worst().map(|w| w.name.clone()).unwrap_or_default();
                eprintln!(
                    "oracle: max_discrepancy={} worst={} grid={} centre_main={} centre_oracle={}",
                    fmt_num(chk.max_discrepancy()),
                    worst,
                    chk.grid_n,
                    fmt_num(chk.center_main),
                    fmt_num(chk.center_oracle)
                );
            }
            Ok(())
        }
        Command::Scan { state, vary, lo, hi, count, log, measures, delta0, format, out } => {
            let varying: Varying = vary.parse().map_err(Failure::input)?;
            let measures: Vec<Measure> =
                measures.iter().map(|m| m.parse()).collect::<Result<_, _>>().map_err(Failure::input)?;
            let mut spec = SweepSpec::new(state.family(), varying, (lo, hi, count), state.params());
            if log {
                spec = spec.log_spaced();
            }
            spec.validate().map_err(Failure::input)?;
            let t = scan_with_delta0(&spec, &measures, delta0).map_err(Failure::runtime)?;
            emit(out.as_deref(), &format!("scan.{}", ext(format)), &table_text(&t, format))
        }
        Command::Figure { number, lo, hi, count, format, out } => {
            let range = FigureRange { lo, hi, count };
            let t = match number {
                1 => figure1(range),
                2 => figure2(),
                _ => figure3(range),
            }
            .map_err(Failure::input)?;
            emit(out.as_deref(), &format!("fig{number}.{}", ext(format)), &table_text(&t, format))
        }
        Command::Delta0 { out } => {
            let est = estimate_delta0(&default_delta0_moduli(), &[0.0]).map_err(Failure::runtime)?;
            emit(out.as_deref(), "delta0.txt", &delta0_text(&est))
        }
        Command::Accept { out } => {
            let results = acceptance::run_all();
            for r in &results {
                println!("{}", r.line());
            }
            if let Some(dir) = out.as_deref() {
                let json = serde_json::to_string_pretty(&results).map_err(Failure::runtime)?;
                emit(Some(dir), "acceptance.json", &(json + "\n"))?;
            }
            let failed = results.iter().filter(|r| !r.passed).count();
            println!("{} of {} criteria passed", results.len() - failed, results.len());
            if failed > 0 {
                return Err(Failure { code: 1, message: format!("{failed} acceptance criteria failed") });
            }
            Ok(())
        }
    }
}

fn configure_threads() {
    if let Ok(v) = std::env::var("CIRCLE_UNC_THREADS") {
        match v.trim().parse::<usize>() {
            Ok(0) => {}
            Ok(n) => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            Err(_) => eprintln!("warning: ignoring CIRCLE_UNC_THREADS={v}"),
        }
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
