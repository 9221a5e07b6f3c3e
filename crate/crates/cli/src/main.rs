use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use vcfv_cli::checks::{self, BlastOptions, Check};
use vcfv_cli::output::write_atomic;
use vcfv_cli::{load_config, run_case, CliError};
use vcfv_core::case::{blast_domain, channel_domain, sod, test2};
use vcfv_core::interp::build_all_stencils;
use vcfv_core::mesh::validate_mesh;
use vcfv_core::*;

#[derive(Parser)]
#[command(name = "vcfv", version, about = "Vertex-centroid finite volume solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a case from a configuration file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides [output] directory).
        #[arg(long)]
        output: Option<PathBuf>,
        /// Mesh perturbation seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Shock tubes against the exact Riemann solution.
    VerifyRiemann {
        /// sod, test2 or all.
        #[arg(long, default_value = "all")]
        case: String,
        /// Axial cells of the channel.
        #[arg(long, default_value_t = 100)]
        cells: usize,
        /// Directory for centre-line profile CSVs.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Audit of the face-value truncation bounds on random simplices.
    VerifyBounds {
        /// 2 or 3; both when omitted.
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Grid convergence of periodic advection.
    VerifyConvergence {
        #[arg(long, value_delimiter = ',', default_value = "16,32,64")]
        levels: Vec<usize>,
        /// Directory for one CSV per reconstruction.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Taylor blast wave on a coarse cube.
    VerifyBlast {
        #[arg(long, default_value_t = 26)]
        cells: usize,
        #[arg(long, default_value_t = 0.5)]
        cfl: f64,
    },
    /// Every acceptance check; the blast case only with --blast.
    VerifyAll {
        #[arg(long)]
        blast: bool,
    },
    /// Mesh statistics and quality checks.
    MeshInfo(MeshArgs),
    /// Interpolation weight diagnostics for a mesh.
    InterpReport {
        #[command(flatten)]
        mesh: MeshArgs,
        /// Report every scheme instead of the two linear-exact ones.
        #[arg(long)]
        all: bool,
    },
}

#[derive(Args)]
struct MeshArgs {
    /// GMSH 2.2 file.
    #[arg(long, conflicts_with_all = ["config", "preset"])]
    mesh: Option<PathBuf>,
    /// Take the mesh from a run configuration.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// channel or blast.
    #[arg(long)]
    preset: Option<String>,
    /// Cells per side (axial cells for the channel).
    #[arg(long, default_value_t = 100)]
    cells: usize,
}

impl MeshArgs {
    fn build(&self) -> Result<Mesh, CliError> {
        let spec = if let Some(p) = &self.mesh {
            MeshSpec::gmsh(p)
        } else if let Some(c) = &self.config {
            load_config(c)?.run.mesh
        } else {
            match self.preset.as_deref() {
                Some("channel") => MeshSpec::boxed(channel_domain(self.cells)),
                Some("blast") => MeshSpec::boxed(blast_domain(self.cells)),
                Some(other) => return Err(CliError::Usage(format!("unknown mesh preset '{other}' (expected channel, blast)"))),
                None => return Err(CliError::Usage("give one of --mesh, --config or --preset".into())),
            }
        };
        Ok(spec.build().map_err(vcfv_core::Error::from)?)
    }
}

fn report(checks: &[Check]) -> bool {
    for c in checks {
        println!("{c}");
    }
    checks.iter().all(|c| c.passed)
}

fn write_file(path: PathBuf, text: &str) -> Result<(), CliError> {
    write_atomic(&path, |w| w.write_all(text.as_bytes())).map_err(|source| CliError::Io { path, source })
}

fn create_dir(dir: &PathBuf) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.clone(), source })
}

fn execute(cmd: Command) -> Result<bool, CliError> {
    match cmd {
        Command::Run { config, output, seed } => {
            let mut case = load_config(&config)?;
            if let Some(s) = seed {
                case.set_seed(s);
            }
            let summary = run_case(&case, output.as_deref())?;
            for w in &summary.warnings {
                eprintln!("warning: {w}");
            }
            print!("{}", summary.report);
            for (name, t) in &summary.taylor {
                match t.fit {
                    Some(f) if t.valid => println!("radial probe {name}: R ~ t^{:.3} over {} snapshots", f.slope, t.times.len()),
                    _ => println!("radial probe {name}: no fit ({})", t.note),
                }
            }
            if !summary.files.is_empty() {
                println!("wrote {} files", summary.files.len());
            }
            println!("{}", serde_json::to_string(&summary.json).expect("summary serializes"));
            Ok(true)
        }
        Command::VerifyRiemann { case, cells, output } => {
            let cases = match case.as_str() {
                "sod" => vec![6],
                "test2" => vec![7],
                "all" => vec![6, 7],
                other => return Err(CliError::Usage(format!("unknown case '{other}' (expected sod, test2, all)"))),
            };
            if let Some(dir) = &output {
                create_dir(dir)?;
                for &c in &cases {
                    let (name, ic, flux, t) =
                        if c == 6 { ("sod", sod(), FluxScheme::Roe, 0.2) } else { ("test2", test2(), FluxScheme::Kfvs, 0.15) };
                    for recon in [ReconScheme::Frink, ReconScheme::Upwind] {
                        let r = checks::shock_tube_run(ic.clone(), flux, recon, cells, t)?;
                        let mut csv = String::from("x,density,exact\n");
                        for (x, a, b) in &r.profile {
                            csv.push_str(&format!("{x:e},{a:e},{b:e}\n"));
                        }
                        write_file(dir.join(format!("{name}_{recon}.csv")), &csv)?;
                    }
                }
            }
            let results: Vec<Check> =
                cases.iter().map(|&c| if c == 6 { checks::sod_shock_tube(cells) } else { checks::test2_positivity(cells) }).collect();
            Ok(report(&results))
        }
        Command::VerifyBounds { dim, trials, seed } => {
            let dims = match dim {
                Some(d @ (2 | 3)) => vec![d],
                Some(d) => return Err(CliError::Usage(format!("--dim must be 2 or 3, got {d}"))),
                None => vec![2, 3],
            };
            Ok(report(&[checks::truncation_bounds_for(&dims, trials, seed)]))
        }
        Command::VerifyConvergence { levels, output } => {
            if levels.len() < 3 {
                return Err(CliError::Usage("need at least 3 levels".into()));
            }
            if let Some(dir) = &output {
                create_dir(dir)?;
                for (recon, res) in checks::convergence_results(&levels)? {
                    write_file(dir.join(format!("convergence_{recon}.csv")), &res.to_csv())?;
                }
            }
            Ok(report(&[checks::convergence(&levels)]))
        }
        Command::VerifyBlast { cells, cfl } => {
            Ok(report(&[checks::taylor_blast(BlastOptions { cells, cfl, ..BlastOptions::default() })]))
        }
        Command::VerifyAll { blast } => {
            let mut results = Vec::new();
            for check in checks::default_suite() {
                let c = check();
                println!("{c}");
                results.push(c);
            }
            if blast {
                let c = checks::taylor_blast(BlastOptions::default());
                println!("{c}");
                results.push(c);
            }
            Ok(results.iter().all(|c| c.passed))
        }
        Command::MeshInfo(args) => {
            let mesh = args.build()?;
            let rep = validate_mesh(&mesh);
            print!("{rep}");
            Ok(rep.inverted.is_empty())
        }
        Command::InterpReport { mesh, all } => {
            let mesh = mesh.build()?;
            let schemes: Vec<InterpScheme> =
                if all { InterpScheme::ALL.to_vec() } else { vec![InterpScheme::PseudoLaplacian, InterpScheme::ConsistentShepard] };
            println!("{} cells, {} vertices", mesh.n_cells(), mesh.n_vertices());
            println!("{}", InterpDiagnostics::CSV_HEADER);
            let mut rows = Vec::new();
            for s in schemes {
                let (_, diag) = build_all_stencils(&mesh, s).map_err(vcfv_core::Error::from)?;
                println!("{}", diag.csv_row());
                rows.push(diag);
            }
            println!();
            for d in rows {
                println!("{d}");
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
