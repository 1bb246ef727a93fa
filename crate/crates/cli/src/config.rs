//! Run configuration: a small sectioned key-value format.
//!
//! ```text
//! # comment
//! [network]
//! E = 1.0            # incident energy, > 0
//! branches = 2       # number of side branches, >= 1
//!
//! [branch.1]         # barrier on branch 1; omit the section for a clean branch
//! V = 15.0           # strength (any finite real)
//! w = 2.0            # width, >= 0
//! lb = 2.5           # junction-to-barrier distance, >= 0
//!
//! [sweep.main]       # one table per sweep section ([sweep] for a single table)
//! axis.branch.1.w = 0:0.05:10      # range start:step:stop (inclusive)
//! axis.branch.2.V = 2.5,3.5,5.0    # or an explicit list
//! observables = tau.1, T.1         # tau | T | tau_s | R2, optional .branch,
//!                                  # optional "as LABEL" column rename
//!
//! [output]
//! prefix = fig4      # stem for emitted files
//! ```
//!
//! Other axis paths: `axis.N` (branch count, template must declare a single
//! prototype branch), `axis.E` (energy), and bare `axis.V` / `axis.w` /
//! `axis.lb` (set the same barrier parameter on every branch). Axes nest in
//! declaration order, first axis slowest. Parsing round-trips: serializing a
//! parsed [`RunSpec`] reproduces an equivalent document.

use std::fmt::Write as _;

use starwire::{
    Axis, BarrierSpec, BranchSpec, Energy, NetworkSpec, Observable, ObservableKind, ParamPath,
};

/// Configuration failure with the offending line when known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {n}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(line: Option<usize>, message: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError {
        line,
        message: message.into(),
    })
}

/// Barrier parameters as written in a `[branch.N]` section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierCfg {
    pub strength: f64,
    pub width: f64,
    pub offset: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BarrierField {
    Strength,
    Width,
    Offset,
}

impl BarrierField {
    fn key(self) -> &'static str {
        match self {
            BarrierField::Strength => "V",
            BarrierField::Width => "w",
            BarrierField::Offset => "lb",
        }
    }
}

/// A sweep axis target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathCfg {
    /// `branch.<n>.<V|w|lb>`, one-based branch index.
    Branch(usize, BarrierField),
    /// Bare `V|w|lb`: the same parameter on every branch.
    Shared(BarrierField),
    /// `N`: branch count (replicates the single prototype branch).
    Count,
    /// `E`: incident energy.
    Energy,
}

/// Axis values, kept symbolic so serialization is lossless.
#[derive(Debug, Clone, PartialEq)]
pub enum ValuesCfg {
    List(Vec<f64>),
    Range { start: f64, step: f64, stop: f64 },
}

impl ValuesCfg {
    /// Materialize the axis values. Ranges are inclusive of `stop` up to
    /// floating-point slack in the step count.
    pub fn expand(&self) -> Vec<f64> {
        match self {
            ValuesCfg::List(v) => v.clone(),
            ValuesCfg::Range { start, step, stop } => {
                let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
                (0..count).map(|i| start + i as f64 * step).collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxisCfg {
    pub path: PathCfg,
    pub values: ValuesCfg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObsKind {
    Tau,
    Transmission,
    TauSaturated,
    ReflectionProb,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObsCfg {
    pub kind: ObsKind,
    /// One-based branch index; `None` means branch 1 with an unindexed
    /// column label. Ignored by `R2`.
    pub branch: Option<usize>,
    /// Column rename from `as LABEL`.
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCfg {
    /// Panel name from `[sweep.<panel>]`; empty for a bare `[sweep]`.
    pub panel: String,
    pub axes: Vec<AxisCfg>,
    pub observables: Vec<ObsCfg>,
}

/// A parsed, fully validated run description.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub energy: f64,
    /// `branches[i]` is branch `i+1`; `None` = clean branch.
    pub branches: Vec<Option<BarrierCfg>>,
    pub sweeps: Vec<SweepCfg>,
    pub prefix: String,
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

struct RawSection {
    name: String,
    line: usize,
    entries: Vec<(usize, String, String)>,
}

fn split_sections(text: &str) -> Result<Vec<RawSection>, ConfigError> {
    let mut sections: Vec<RawSection> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let Some(name) = name.strip_suffix(']') else {
                return err(Some(line_no), format!("malformed section header '{raw}'"));
            };
            let name = name.trim().to_string();
            if name.is_empty() {
                return err(Some(line_no), "empty section name");
            }
            if sections.iter().any(|s| s.name == name) {
                return err(Some(line_no), format!("duplicate section [{name}]"));
            }
            sections.push(RawSection {
                name,
                line: line_no,
                entries: Vec::new(),
            });
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return err(Some(line_no), format!("expected 'key = value', got '{line}'"));
        };
        let Some(section) = sections.last_mut() else {
            return err(Some(line_no), "key-value pair before any [section]");
        };
        section
            .entries
            .push((line_no, key.trim().to_string(), value.trim().to_string()));
    }
    Ok(sections)
}

fn parse_f64(line: usize, field: &str, value: &str) -> Result<f64, ConfigError> {
    match value.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => err(
            Some(line),
            format!("{field}: expected a finite number, got '{value}'"),
        ),
    }
}

fn parse_usize(line: usize, field: &str, value: &str) -> Result<usize, ConfigError> {
    value.parse::<usize>().map_err(|_| ConfigError {
        line: Some(line),
        message: format!("{field}: expected a non-negative integer, got '{value}'"),
    })
}

fn parse_values(line: usize, value: &str) -> Result<ValuesCfg, ConfigError> {
    if value.contains(':') {
        let parts: Vec<&str> = value.split(':').collect();
        if parts.len() != 3 {
            return err(
                Some(line),
                format!("range must be start:step:stop, got '{value}'"),
            );
        }
        let start = parse_f64(line, "range start", parts[0].trim())?;
        let step = parse_f64(line, "range step", parts[1].trim())?;
        let stop = parse_f64(line, "range stop", parts[2].trim())?;
        if step <= 0.0 {
            return err(Some(line), format!("range step must be > 0, got {step}"));
        }
        if stop < start {
            return err(
                Some(line),
                format!("range stop {stop} is below start {start}"),
            );
        }
        Ok(ValuesCfg::Range { start, step, stop })
    } else {
        let mut values = Vec::new();
        for item in value.split(',') {
            values.push(parse_f64(line, "axis value", item.trim())?);
        }
        if values.is_empty() {
            return err(Some(line), "axis needs at least one value");
        }
        Ok(ValuesCfg::List(values))
    }
}

fn parse_barrier_field(token: &str) -> Option<BarrierField> {
    match token {
        "V" => Some(BarrierField::Strength),
        "w" => Some(BarrierField::Width),
        "lb" => Some(BarrierField::Offset),
        _ => None,
    }
}

fn parse_axis_path(line: usize, path: &str) -> Result<PathCfg, ConfigError> {
    if let Some(field) = parse_barrier_field(path) {
        return Ok(PathCfg::Shared(field));
    }
    match path {
        "N" => return Ok(PathCfg::Count),
        "E" => return Ok(PathCfg::Energy),
        _ => {}
    }
    if let Some(rest) = path.strip_prefix("branch.") {
        if let Some((index, field)) = rest.split_once('.') {
            let index = parse_usize(line, "axis branch index", index)?;
            if index == 0 {
                return err(Some(line), "branch indices are one-based");
            }
            if let Some(field) = parse_barrier_field(field) {
                return Ok(PathCfg::Branch(index, field));
            }
        }
    }
    err(
        Some(line),
        format!(
            "unknown axis path '{path}' (expected branch.<n>.<V|w|lb>, V, w, lb, N, or E)"
        ),
    )
}

fn parse_observables(line: usize, value: &str) -> Result<Vec<ObsCfg>, ConfigError> {
    let mut out = Vec::new();
    for item in value.split(',') {
        let item = item.trim();
        if item.is_empty() {
            return err(Some(line), "empty observable entry");
        }
        let (spec, label) = match item.split_once(" as ") {
            Some((s, l)) => {
                let l = l.trim();
                if l.is_empty() || !l.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return err(Some(line), format!("bad observable label '{l}'"));
                }
                (s.trim(), Some(l.to_string()))
            }
            None => (item, None),
        };
        let (name, branch) = match spec.split_once('.') {
            Some((n, b)) => {
                let idx = parse_usize(line, "observable branch index", b)?;
                if idx == 0 {
                    return err(Some(line), "branch indices are one-based");
                }
                (n, Some(idx))
            }
            None => (spec, None),
        };
        let kind = match name {
            "tau" => ObsKind::Tau,
            "T" => ObsKind::Transmission,
            "tau_s" => ObsKind::TauSaturated,
            "R2" => ObsKind::ReflectionProb,
            _ => {
                return err(
                    Some(line),
                    format!("unknown observable '{name}' (expected tau, T, tau_s, or R2)"),
                )
            }
        };
        if kind == ObsKind::ReflectionProb && branch.is_some() {
            return err(Some(line), "R2 does not take a branch index");
        }
        out.push(ObsCfg {
            kind,
            branch,
            label,
        });
    }
    Ok(out)
}

/// Parse and validate a config document.
pub fn parse_config(text: &str) -> Result<RunSpec, ConfigError> {
    let sections = split_sections(text)?;

    let mut energy: Option<f64> = None;
    let mut branch_count: Option<usize> = None;
    let mut barrier_sections: Vec<(usize, usize, BarrierCfg)> = Vec::new(); // (line, index, cfg)
    let mut sweeps: Vec<SweepCfg> = Vec::new();
    let mut prefix: Option<String> = None;

    let mut seen_network = false;
    let mut seen_output = false;

    for section in &sections {
        match section.name.as_str() {
            "network" => {
                seen_network = true;
                for (line, key, value) in &section.entries {
                    match key.as_str() {
                        "E" => {
                            let e = parse_f64(*line, "network.E", value)?;
                            if e <= 0.0 {
                                return err(Some(*line), format!("network.E must be > 0, got {e}"));
                            }
                            if energy.replace(e).is_some() {
                                return err(Some(*line), "duplicate key network.E");
                            }
                        }
                        "branches" => {
                            let n = parse_usize(*line, "network.branches", value)?;
                            if n == 0 {
                                return err(Some(*line), "network.branches must be >= 1");
                            }
                            if branch_count.replace(n).is_some() {
                                return err(Some(*line), "duplicate key network.branches");
                            }
                        }
                        other => {
                            return err(
                                Some(*line),
                                format!("unknown key network.{other} (expected E, branches)"),
                            )
                        }
                    }
                }
            }
            name if name.starts_with("branch.") => {
                let index_str = &name["branch.".len()..];
                let index = parse_usize(section.line, "branch section index", index_str)?;
                if index == 0 {
                    return err(Some(section.line), "branch sections are one-based");
                }
                let mut strength = None;
                let mut width = None;
                let mut offset = None;
                for (line, key, value) in &section.entries {
                    let field = format!("branch.{index}.{key}");
                    match key.as_str() {
                        "V" => strength = Some(parse_f64(*line, &field, value)?),
                        "w" => {
                            let w = parse_f64(*line, &field, value)?;
                            if w < 0.0 {
                                return err(Some(*line), format!("{field} must be >= 0, got {w}"));
                            }
                            width = Some(w);
                        }
                        "lb" => {
                            let lb = parse_f64(*line, &field, value)?;
                            if lb < 0.0 {
                                return err(
                                    Some(*line),
                                    format!("{field} must be >= 0, got {lb}"),
                                );
                            }
                            offset = Some(lb);
                        }
                        other => {
                            return err(
                                Some(*line),
                                format!("unknown key branch.{index}.{other} (expected V, w, lb)"),
                            )
                        }
                    }
                }
                let missing = [("V", strength), ("w", width), ("lb", offset)]
                    .iter()
                    .find(|(_, v)| v.is_none())
                    .map(|(k, _)| *k);
                if let Some(k) = missing {
                    return err(
                        Some(section.line),
                        format!("branch.{index} is missing required key {k}"),
                    );
                }
                barrier_sections.push((
                    section.line,
                    index,
                    BarrierCfg {
                        strength: strength.unwrap(),
                        width: width.unwrap(),
                        offset: offset.unwrap(),
                    },
                ));
            }
            name if name == "sweep" || name.starts_with("sweep.") => {
                let panel = name.strip_prefix("sweep.").unwrap_or("").to_string();
                if !panel.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return err(
                        Some(section.line),
                        format!("bad sweep panel name '{panel}'"),
                    );
                }
                let mut axes: Vec<AxisCfg> = Vec::new();
                let mut observables: Option<Vec<ObsCfg>> = None;
                for (line, key, value) in &section.entries {
                    if let Some(path) = key.strip_prefix("axis.") {
                        let path = parse_axis_path(*line, path)?;
                        if axes.iter().any(|a| a.path == path) {
                            return err(Some(*line), format!("duplicate axis '{key}'"));
                        }
                        axes.push(AxisCfg {
                            path,
                            values: parse_values(*line, value)?,
                        });
                    } else if key == "observables" {
                        if observables.is_some() {
                            return err(Some(*line), "duplicate key observables");
                        }
                        observables = Some(parse_observables(*line, value)?);
                    } else {
                        return err(
                            Some(*line),
                            format!(
                                "unknown key {key} in [{name}] (expected axis.<path>, observables)"
                            ),
                        );
                    }
                }
                let Some(observables) = observables else {
                    return err(
                        Some(section.line),
                        format!("[{name}] is missing the observables key"),
                    );
                };
                if axes.is_empty() {
                    return err(Some(section.line), format!("[{name}] declares no axes"));
                }
                sweeps.push(SweepCfg {
                    panel,
                    axes,
                    observables,
                });
            }
            "output" => {
                seen_output = true;
                for (line, key, value) in &section.entries {
                    match key.as_str() {
                        "prefix" => {
                            if value.is_empty()
                                || !value
                                    .chars()
                                    .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
                            {
                                return err(
                                    Some(*line),
                                    format!("output.prefix must be a bare file stem, got '{value}'"),
                                );
                            }
                            if prefix.replace(value.clone()).is_some() {
                                return err(Some(*line), "duplicate key output.prefix");
                            }
                        }
                        other => {
                            return err(
                                Some(*line),
                                format!("unknown key output.{other} (expected prefix)"),
                            )
                        }
                    }
                }
            }
            other => {
                return err(
                    Some(section.line),
                    format!(
                        "unknown section [{other}] (expected network, branch.<n>, sweep, output)"
                    ),
                )
            }
        }
    }

    if !seen_network {
        return err(None, "missing required section [network]");
    }
    let Some(energy) = energy else {
        return err(None, "missing required key network.E");
    };
    let Some(branch_count) = branch_count else {
        return err(None, "missing required key network.branches");
    };
    if !seen_output {
        return err(None, "missing required section [output]");
    }
    let Some(prefix) = prefix else {
        return err(None, "missing required key output.prefix");
    };
    if sweeps.is_empty() {
        return err(None, "no [sweep] section; nothing to compute");
    }

    let mut branches: Vec<Option<BarrierCfg>> = vec![None; branch_count];
    for (line, index, cfg) in barrier_sections {
        if index > branch_count {
            return err(
                Some(line),
                format!(
                    "[branch.{index}] is out of range: network.branches = {branch_count}"
                ),
            );
        }
        if branches[index - 1].replace(cfg).is_some() {
            return err(Some(line), format!("duplicate section [branch.{index}]"));
        }
    }

    let spec = RunSpec {
        energy,
        branches,
        sweeps,
        prefix,
    };
    // Surface path errors (bad branch indices, barrier fields on clean
    // branches) now, before any computation.
    for sweep in &spec.sweeps {
        spec.lower_sweep(sweep).map_err(|e| ConfigError {
            line: None,
            message: e.to_string(),
        })?;
    }
    Ok(spec)
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

fn write_values(out: &mut String, values: &ValuesCfg) {
    match values {
        ValuesCfg::List(v) => {
            let items: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
            out.push_str(&items.join(","));
        }
        ValuesCfg::Range { start, step, stop } => {
            let _ = write!(out, "{start}:{step}:{stop}");
        }
    }
}

fn path_key(path: &PathCfg) -> String {
    match path {
        PathCfg::Branch(n, f) => format!("branch.{n}.{}", f.key()),
        PathCfg::Shared(f) => f.key().to_string(),
        PathCfg::Count => "N".into(),
        PathCfg::Energy => "E".into(),
    }
}

fn obs_text(obs: &ObsCfg) -> String {
    let name = match obs.kind {
        ObsKind::Tau => "tau",
        ObsKind::Transmission => "T",
        ObsKind::TauSaturated => "tau_s",
        ObsKind::ReflectionProb => "R2",
    };
    let mut text = match obs.branch {
        Some(n) => format!("{name}.{n}"),
        None => name.to_string(),
    };
    if let Some(label) = &obs.label {
        let _ = write!(text, " as {label}");
    }
    text
}

impl RunSpec {
    /// Canonical config text; parsing it back yields an equal `RunSpec`.
    pub fn to_config_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "[network]");
        let _ = writeln!(out, "E = {}", self.energy);
        let _ = writeln!(out, "branches = {}", self.branches.len());
        for (i, barrier) in self.branches.iter().enumerate() {
            if let Some(b) = barrier {
                let _ = writeln!(out, "\n[branch.{}]", i + 1);
                let _ = writeln!(out, "V = {}", b.strength);
                let _ = writeln!(out, "w = {}", b.width);
                let _ = writeln!(out, "lb = {}", b.offset);
            }
        }
        for sweep in &self.sweeps {
            if sweep.panel.is_empty() {
                let _ = writeln!(out, "\n[sweep]");
            } else {
                let _ = writeln!(out, "\n[sweep.{}]", sweep.panel);
            }
            for axis in &sweep.axes {
                let _ = write!(out, "axis.{} = ", path_key(&axis.path));
                write_values(&mut out, &axis.values);
                out.push('\n');
            }
            let items: Vec<String> = sweep.observables.iter().map(obs_text).collect();
            let _ = writeln!(out, "observables = {}", items.join(", "));
        }
        let _ = writeln!(out, "\n[output]");
        let _ = writeln!(out, "prefix = {}", self.prefix);
        out
    }

    /// Network template described by the `[branch.N]` sections.
    pub fn template(&self) -> Result<NetworkSpec, starwire::Error> {
        let branches = self
            .branches
            .iter()
            .map(|b| match b {
                None => Ok(BranchSpec::free()),
                Some(cfg) => {
                    BarrierSpec::new(cfg.strength, cfg.width, cfg.offset)
                        .map(BranchSpec::with_barrier)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        NetworkSpec::new(branches)
    }

    pub fn core_energy(&self) -> Result<Energy, starwire::Error> {
        Energy::new(self.energy)
    }

    /// Translate one sweep section into core axes/observables with their
    /// deterministic column labels.
    pub fn lower_sweep(
        &self,
        sweep: &SweepCfg,
    ) -> Result<(Vec<Axis>, Vec<Observable>), starwire::Error> {
        let axes = sweep
            .axes
            .iter()
            .map(|a| {
                let (path, label) = match a.path {
                    PathCfg::Branch(n, BarrierField::Strength) => {
                        (ParamPath::BranchStrength(n - 1), format!("V{n}"))
                    }
                    PathCfg::Branch(n, BarrierField::Width) => {
                        (ParamPath::BranchWidth(n - 1), format!("w{n}"))
                    }
                    PathCfg::Branch(n, BarrierField::Offset) => {
                        (ParamPath::BranchOffset(n - 1), format!("lb{n}"))
                    }
                    PathCfg::Shared(BarrierField::Strength) => {
                        (ParamPath::SharedStrength, "V".into())
                    }
                    PathCfg::Shared(BarrierField::Width) => (ParamPath::SharedWidth, "w".into()),
                    PathCfg::Shared(BarrierField::Offset) => (ParamPath::SharedOffset, "lb".into()),
                    PathCfg::Count => (ParamPath::BranchCount, "N".into()),
                    PathCfg::Energy => (ParamPath::Energy, "E".into()),
                };
                Axis {
                    path,
                    label,
                    values: a.values.expand(),
                }
            })
            .collect::<Vec<_>>();

        let observables = sweep
            .observables
            .iter()
            .map(|o| {
                let branch = o.branch.unwrap_or(1) - 1;
                let (kind, base) = match o.kind {
                    ObsKind::Tau => (ObservableKind::Tau, "tau"),
                    ObsKind::Transmission => (ObservableKind::Transmission, "T"),
                    ObsKind::TauSaturated => (ObservableKind::TauSaturated, "tau_s"),
                    ObsKind::ReflectionProb => (ObservableKind::ReflectionProb, "R2"),
                };
                let label = o.label.clone().unwrap_or_else(|| match o.branch {
                    Some(n) if o.kind != ObsKind::ReflectionProb => format!("{base}{n}"),
                    _ => base.to_string(),
                });
                Observable {
                    kind,
                    branch,
                    label,
                }
            })
            .collect::<Vec<_>>();

        // Validate the paths against the template exactly the way the run
        // will: a throwaway sweep with empty work is not possible, so rely
        // on the sweep validator by constructing it here with one-row axes.
        let template = self.template()?;
        let probe_axes: Vec<Axis> = axes
            .iter()
            .map(|a| Axis {
                path: a.path,
                label: a.label.clone(),
                values: vec![a.values[0]],
            })
            .collect();
        starwire::sweep::validate_only(&template, &probe_axes, &observables, self.core_energy()?)?;
        Ok((axes, observables))
    }

    /// File stem for one sweep panel.
    pub fn panel_stem(&self, sweep: &SweepCfg) -> String {
        if sweep.panel.is_empty() {
            self.prefix.clone()
        } else {
            format!("{}_{}", self.prefix, sweep.panel)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
[network]
E = 1.0
branches = 1

[sweep]
axis.E = 0.5,1.0
observables = R2

[output]
prefix = smoke
";

    #[test]
    fn minimal_config_parses() {
        let spec = parse_config(MINIMAL).unwrap();
        assert_eq!(spec.branches.len(), 1);
        assert!(spec.branches[0].is_none());
        assert_eq!(spec.sweeps.len(), 1);
        assert_eq!(spec.prefix, "smoke");
    }

    #[test]
    fn round_trip_is_identity() {
        let spec = parse_config(MINIMAL).unwrap();
        let text = spec.to_config_text();
        assert_eq!(parse_config(&text).unwrap(), spec);
    }

    #[test]
    fn negative_width_names_the_field() {
        let bad = "\
[network]
E = 1.0
branches = 1

[branch.1]
V = 5.0
w = -1
lb = 0.0

[sweep]
axis.branch.1.w = 0,1
observables = tau.1

[output]
prefix = bad
";
        let e = parse_config(bad).unwrap_err();
        assert!(e.message.contains("branch.1.w"), "message: {e}");
        assert!(e.line.is_some());
    }

    #[test]
    fn unknown_key_is_rejected_with_line() {
        let bad = MINIMAL.replace("E = 1.0", "E = 1.0\nhbar = 2");
        let e = parse_config(&bad).unwrap_err();
        assert!(e.message.contains("hbar"), "message: {e}");
        assert_eq!(e.line, Some(3));
    }

    #[test]
    fn non_numeric_value_is_rejected() {
        let bad = MINIMAL.replace("E = 1.0", "E = one");
        let e = parse_config(&bad).unwrap_err();
        assert!(e.message.contains("network.E"), "message: {e}");
    }

    #[test]
    fn barrier_path_on_clean_branch_is_rejected() {
        let bad = "\
[network]
E = 1.0
branches = 2

[branch.1]
V = 5.0
w = 1.0
lb = 0.0

[sweep]
axis.branch.2.V = 1,2
observables = tau.1

[output]
prefix = bad
";
        let e = parse_config(bad).unwrap_err();
        assert!(e.message.contains("no barrier"), "message: {e}");
    }

    #[test]
    fn range_expansion_counts() {
        let r = ValuesCfg::Range {
            start: 0.0,
            step: 0.05,
            stop: 10.0,
        };
        assert_eq!(r.expand().len(), 201);
        let r = ValuesCfg::Range {
            start: 1.05,
            step: 0.05,
            stop: 15.0,
        };
        assert_eq!(r.expand().len(), 280);
        let r = ValuesCfg::Range {
            start: 2.0,
            step: 1.0,
            stop: 30.0,
        };
        assert_eq!(r.expand().len(), 29);
    }
}
