//! Run orchestration: config → sweeps → CSV/SVG/manifest on disk.

use std::path::{Path, PathBuf};
use std::time::Instant;

use starwire::{sweep, SweepSettings, TauMethod};

use crate::config::{parse_config, RunSpec};
use crate::csvout::emit_csv;
use crate::manifest::{emit_manifest, hash_file, now_unix_ms, Manifest, OutputEntry, Timing};
use crate::presets::{preset_text, PRESET_NAMES};
use crate::svg::render_svg;

/// CLI failure, bucketed by exit code: configuration 2, numeric 3, I/O 4.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Config(String),
    Numeric(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration: {m}"),
            CliError::Numeric(m) => write!(f, "numeric: {m}"),
            CliError::Io(m) => write!(f, "i/o: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<starwire::Error> for CliError {
    fn from(e: starwire::Error) -> Self {
        match e {
            starwire::Error::Domain(_) | starwire::Error::ParameterPath(_) => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

/// Options taken from the command line (not part of the config format).
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    pub svg: bool,
    pub method: TauMethod,
    pub jobs: usize,
}

/// What a run produced, for the final stdout report.
pub struct RunSummary {
    pub lines: Vec<String>,
}

pub fn run_preset(name: &str, options: &RunOptions) -> Result<RunSummary, CliError> {
    let Some(text) = preset_text(name) else {
        return Err(CliError::Config(format!(
            "unknown preset '{name}' (available: {})",
            PRESET_NAMES.join(", ")
        )));
    };
    let spec = parse_config(text).map_err(|e| CliError::Config(e.to_string()))?;
    execute(name, &spec, options)
}

pub fn run_config_file(path: &Path, options: &RunOptions) -> Result<RunSummary, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let spec = parse_config(&text).map_err(|e| CliError::Config(e.to_string()))?;
    execute("config", &spec, options)
}

pub fn execute(mode: &str, spec: &RunSpec, options: &RunOptions) -> Result<RunSummary, CliError> {
    let started_unix_ms = now_unix_ms();
    let clock = Instant::now();

    std::fs::create_dir_all(&options.out_dir).map_err(|e| {
        CliError::Io(format!(
            "cannot create output directory {}: {e}",
            options.out_dir.display()
        ))
    })?;

    let template = spec.template()?;
    let energy = spec.core_energy()?;
    let settings = SweepSettings {
        method: options.method,
        jobs: options.jobs,
        ..SweepSettings::default()
    };

    let mut outputs = Vec::new();
    let mut lines = Vec::new();
    for sweep_cfg in &spec.sweeps {
        let (axes, observables) = spec.lower_sweep(sweep_cfg)?;
        let table = sweep(&template, &axes, &observables, energy, &settings)?;
        let stem = spec.panel_stem(sweep_cfg);

        let csv_path = options.out_dir.join(format!("{stem}.csv"));
        emit_csv(&table, &csv_path)?;
        let (bytes, sha256) = hash_file(&csv_path)?;
        lines.push(format!(
            "wrote {} ({} rows)",
            csv_path.display(),
            table.rows.len()
        ));
        outputs.push(OutputEntry {
            file: format!("{stem}.csv"),
            kind: "csv".into(),
            bytes,
            sha256,
            rows: Some(table.rows.len()),
        });

        if options.svg {
            let x_label = axes.last().expect("sweeps have at least one axis").label.clone();
            let y_labels: Vec<&str> = observables.iter().map(|o| o.label.as_str()).collect();
            let svg_path = options.out_dir.join(format!("{stem}.svg"));
            render_svg(&table, &x_label, &y_labels, &svg_path)?;
            let (bytes, sha256) = hash_file(&svg_path)?;
            lines.push(format!("wrote {}", svg_path.display()));
            outputs.push(OutputEntry {
                file: format!("{stem}.svg"),
                kind: "svg".into(),
                bytes,
                sha256,
                rows: None,
            });
        }
    }

    let manifest = Manifest {
        tool: "starwire".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        mode: mode.to_string(),
        config: spec.to_config_text(),
        method: match options.method {
            TauMethod::Analytic => "analytic".into(),
            TauMethod::FiniteDifference => "fd".into(),
        },
        jobs: options.jobs,
        svg: options.svg,
        outputs,
        timing: Timing {
            started_unix_ms,
            total_ms: clock.elapsed().as_millis(),
        },
    };
    let manifest_path = options.out_dir.join(format!("{}_manifest.json", spec.prefix));
    emit_manifest(&manifest, &manifest_path)?;
    lines.push(format!("wrote {}", manifest_path.display()));

    Ok(RunSummary { lines })
}
