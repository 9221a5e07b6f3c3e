//! Configuration parsing, output writers and acceptance checks behind the
//! `vcfv` command-line tool.

pub mod checks;
pub mod config;
pub mod output;

use std::path::{Path, PathBuf};

pub use config::{load_config, parse_config, CaseConfig, ConfigError};
use output::{summary_json, write_atomic, SnapshotWriter};
use vcfv_core::verify::{taylor_radius_check, TaylorReport};
use vcfv_core::{MonitorReport, Solver};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Config { path: PathBuf, source: ConfigError },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] vcfv_core::Error),
    #[error("{0}")]
    Usage(String),
}

impl From<ConfigError> for CliError {
    fn from(source: ConfigError) -> Self {
        CliError::Config { path: PathBuf::from("<config>"), source }
    }
}

/// What a finished run produced.
#[derive(Debug)]
pub struct RunSummary {
    pub report: MonitorReport,
    pub json: serde_json::Value,
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
    /// Shock-radius fit per radial probe, when enough snapshots exist.
    pub taylor: Vec<(String, TaylorReport)>,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

/// Runs a parsed case. With an output directory (from the argument or
/// the config) snapshots, probes, `summary.json` and, for monitored runs,
/// `violations.csv` are written there.
pub fn run_case(case: &CaseConfig, output: Option<&Path>) -> Result<RunSummary, CliError> {
    let cfg = &case.run;
    let mesh = cfg.mesh.build().map_err(vcfv_core::Error::from)?;
    let scheme = case.scheme_for(&mesh);
    let solver = Solver::new(&mesh, scheme.clone()).map_err(vcfv_core::Error::from)?;
    let prim = cfg.initial.sample(&mesh, &scheme.model).map_err(vcfv_core::Error::from)?;
    let mut fields = solver.fields_from_primitive(prim).map_err(vcfv_core::Error::from)?;
    let dir = output.map(Path::to_path_buf).or_else(|| cfg.output.directory.clone());

    let mut writer = SnapshotWriter::new(dir.clone().unwrap_or_default(), case.output_fields(), &cfg.output);
    let report = match &dir {
        Some(_) => solver.run(&mut fields, &mut writer),
        None => solver.run(&mut fields, &mut vcfv_core::solver::NoOutput),
    }
    .map_err(vcfv_core::Error::from)?;

    let mut json = summary_json(&report, solver.interp_diagnostics(), &mesh);
    let mut taylor = Vec::new();
    for probe in &cfg.output.radial_probes {
        let profiles: Vec<_> =
            writer.radial_profiles.iter().filter(|(n, _)| n == &probe.name).map(|(_, p)| p.clone()).collect();
        let rep = taylor_radius_check(&profiles);
        json["taylor"][&probe.name] = serde_json::json!({
            "valid": rep.valid,
            "slope": rep.fit.map(|f| f.slope),
            "snapshots": rep.times.len(),
        });
        taylor.push((probe.name.clone(), rep));
    }

    let mut files = writer.written;
    if let Some(dir) = &dir {
        let path = dir.join("summary.json");
        let text = serde_json::to_string_pretty(&json).expect("summary serializes");
        write_atomic(&path, |w| writeln!(w, "{text}")).map_err(io_err(&path))?;
        files.push(path);
        if scheme.monitor_max_principle {
            let path = dir.join("violations.csv");
            let csv = report.violations_csv();
            write_atomic(&path, |w| w.write_all(csv.as_bytes())).map_err(io_err(&path))?;
            files.push(path);
        }
    }
    Ok(RunSummary { report, json, files, warnings: writer.warnings, taylor })
}
