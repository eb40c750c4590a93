use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use plankcov::AnnulusConfig;
use plankcov_cli::commands::{self, CommandError, Exit, MethodChoice, Report, Theorem};
use plankcov_cli::scene::{parse_scene, Scene};
use plankcov_cli::{oracle, render};

#[derive(Parser)]
#[command(name = "plankcov", version, about = "Measure, check and certify wedge and strip coverings of a disc")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Closed,
    Quad,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum TheoremArg {
    Angular,
    Plank,
}

#[derive(Subcommand)]
enum Command {
    /// Measure of each domain and strip intersected with the inner disc.
    Measure {
        scene: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        method: MethodArg,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Decide whether the domains and strips cover the inner disc.
    CheckCoverage {
        scene: PathBuf,
        #[arg(long, default_value_t = commands::default_radial_steps())]
        radial_steps: usize,
    },
    /// Certify the angle-sum or width-sum inequality for a covering.
    Certify {
        scene: PathBuf,
        #[arg(long, value_enum, default_value = "angular")]
        theorem: TheoremArg,
        #[arg(long, default_value_t = commands::default_radial_steps())]
        radial_steps: usize,
    },
    /// Draw the scene as SVG.
    Render {
        scene: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Side length of the image in pixels.
        #[arg(long, default_value_t = 800)]
        resolution: u32,
        /// JSON output of `certify` or `check-coverage` whose witnesses are marked.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Compare closed forms with quadrature; the default scene is r = 1, R = 2.
    OracleCompare {
        scene: Option<PathBuf>,
        #[arg(long, default_value_t = oracle::DEFAULT_GRID)]
        grid: usize,
        #[arg(long, default_value_t = oracle::DEFAULT_SEED)]
        seed: u64,
    },
}

fn read(path: &Path) -> Result<String, CommandError> {
    std::fs::read_to_string(path).map_err(|source| CommandError::Io {
        context: format!("reading {}", path.display()),
        source,
    })
}

fn load(path: &Path) -> Result<Scene, CommandError> {
    Ok(parse_scene(&read(path)?)?)
}

fn run(cli: &Cli) -> Result<Report, CommandError> {
    match &cli.command {
        Command::Measure { scene, method, tol } => {
            let method = match method {
                MethodArg::Closed => MethodChoice::Closed,
                MethodArg::Quad => MethodChoice::Quad,
                MethodArg::Both => MethodChoice::Both,
            };
            commands::measure(&load(scene)?, method, *tol)
        }
        Command::CheckCoverage { scene, radial_steps } => commands::check_coverage_cmd(&load(scene)?, *radial_steps),
        Command::Certify { scene, theorem, radial_steps } => {
            let theorem = match theorem {
                TheoremArg::Angular => Theorem::Angular,
                TheoremArg::Plank => Theorem::Plank,
            };
            commands::certify(&load(scene)?, theorem, *radial_steps)
        }
        Command::Render { scene, out, resolution, certificate } => {
            let scene = load(scene)?;
            let witnesses = match certificate {
                Some(path) => {
                    let value: serde_json::Value = serde_json::from_str(&read(path)?)
                        .map_err(|e| CommandError::Usage(format!("{}: not valid JSON: {e}", path.display())))?;
                    commands::collect_witnesses(&value)
                }
                None => Vec::new(),
            };
            let svg = render::render_svg(&scene, &witnesses, *resolution);
            render::write_atomic(out, svg.as_bytes())?;
            Ok(Report {
                text: format!("wrote {} ({} witness markers)\n", out.display(), witnesses.len()),
                json: serde_json::json!({"out": out, "witnesses": witnesses}),
                exit: Exit::Ok,
            })
        }
        Command::OracleCompare { scene, grid, seed } => {
            let scene = match scene {
                Some(path) => load(path)?,
                None => Scene::empty(AnnulusConfig::new(1.0, 2.0).expect("default annulus")),
            };
            Ok(oracle::oracle_compare(&scene, *grid, *seed))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exit = match run(&cli) {
        Ok(report) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(report.render(cli.json).as_bytes()).and_then(|_| stdout.flush()).is_err() {
                Exit::Io
            } else {
                report.exit
            }
        }
        Err(err) => {
            if cli.json {
                let body = serde_json::json!({"error": err.to_string()});
                eprintln!("{body}");
            } else {
                eprintln!("error: {err}");
            }
            err.exit()
        }
    };
    ExitCode::from(exit.code() as u8)
}
