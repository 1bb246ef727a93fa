//! Cartesian parameter sweeps producing ordered observable tables.
//!
//! A sweep takes a network template, an ordered list of axes (each one a
//! parameter path plus the values it runs through), and a list of
//! observables. Rows are the full Cartesian product in row-major order:
//! the first declared axis varies slowest. Rows may be evaluated on
//! several threads, but the table is always assembled in declaration
//! order, so the output is identical for any thread count.

use crate::error::{Error, Result};
use crate::network::{BarrierSpec, BranchSpec, NetworkSpec};
use crate::phasetime::{
    hartman_scan, phase_time, transmission_probability, SaturationPolicy, TauMethod,
};
use crate::solver::solve_scattering;
use crate::units::Energy;

/// What a sweep axis varies.
///
/// Branch indices are zero-based here; the CLI layer exposes one-based
/// names. The `Shared*` variants set the same barrier parameter on every
/// branch, which is the natural axis for replicated-branch networks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamPath {
    BranchStrength(usize),
    BranchWidth(usize),
    BranchOffset(usize),
    SharedStrength,
    SharedWidth,
    SharedOffset,
    /// Number of branches; the template must consist of a single prototype
    /// branch, which is replicated.
    BranchCount,
    Energy,
}

/// One sweep axis: which parameter moves, the column label, the values.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub path: ParamPath,
    pub label: String,
    pub values: Vec<f64>,
}

/// What to record per row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObservableKind {
    /// Phase time `τ_n`.
    Tau,
    /// Transmission probability `|t_n|²`.
    Transmission,
    /// Saturated phase time via a nested width scan on branch `n`.
    TauSaturated,
    /// Reflection probability `|R|²` (branch index unused).
    ReflectionProb,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    pub kind: ObservableKind,
    /// Zero-based branch index; ignored by [`ObservableKind::ReflectionProb`].
    pub branch: usize,
    pub label: String,
}

/// Evaluation knobs shared by every row.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSettings {
    pub method: TauMethod,
    /// Worker threads for row evaluation; 1 = sequential. Output bytes do
    /// not depend on this.
    pub jobs: usize,
    /// Policy for nested saturation scans.
    pub saturation: SaturationPolicy,
}

impl Default for SweepSettings {
    fn default() -> Self {
        Self {
            method: TauMethod::Analytic,
            jobs: 1,
            saturation: SaturationPolicy::default(),
        }
    }
}

/// Run metadata carried along with the table.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub template: String,
    pub energy: f64,
    pub method: String,
    pub version: String,
}

/// Ordered sweep output: axis columns followed by observable columns, one
/// row per point of the Cartesian product, no missing cells.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub axis_labels: Vec<String>,
    pub observable_labels: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub provenance: Provenance,
}

impl SweepTable {
    pub fn column_labels(&self) -> Vec<&str> {
        self.axis_labels
            .iter()
            .chain(self.observable_labels.iter())
            .map(String::as_str)
            .collect()
    }

    pub fn column_index(&self, label: &str) -> Option<usize> {
        self.column_labels().iter().position(|l| *l == label)
    }
}

fn describe_template(template: &NetworkSpec) -> String {
    let parts: Vec<String> = template
        .branches()
        .iter()
        .map(|b| match b.barrier {
            None => "free".to_string(),
            Some(bar) => format!("V={},w={},lb={}", bar.strength, bar.width, bar.offset),
        })
        .collect();
    format!("[{}]", parts.join("; "))
}

fn is_positive_integer(v: f64) -> bool {
    v.is_finite() && v >= 1.0 && v.fract() == 0.0
}

fn validate(
    template: &NetworkSpec,
    axes: &[Axis],
    observables: &[Observable],
    energy: Energy,
) -> Result<()> {
    let _ = energy;
    let count_axes: Vec<&Axis> = axes
        .iter()
        .filter(|a| a.path == ParamPath::BranchCount)
        .collect();
    if count_axes.len() > 1 {
        return Err(Error::ParameterPath(
            "at most one branch-count axis is allowed".into(),
        ));
    }
    let mut min_branches = template.branch_count();
    if let Some(axis) = count_axes.first() {
        if template.branch_count() != 1 {
            return Err(Error::ParameterPath(format!(
                "a branch-count axis needs a single prototype branch in the template, \
                 the template has {}",
                template.branch_count()
            )));
        }
        if axis.values.is_empty() || !axis.values.iter().all(|&v| is_positive_integer(v)) {
            return Err(Error::ParameterPath(format!(
                "branch-count axis '{}' needs whole values >= 1",
                axis.label
            )));
        }
        min_branches = axis.values.iter().fold(usize::MAX, |m, &v| m.min(v as usize));
    }

    let branch_has_barrier = |index: usize| -> bool {
        let template_index = if count_axes.is_empty() { index } else { 0 };
        template.branches()[template_index].barrier.is_some()
    };

    for axis in axes {
        if axis.values.is_empty() {
            return Err(Error::ParameterPath(format!(
                "axis '{}' has no values",
                axis.label
            )));
        }
        if !axis.values.iter().all(|v| v.is_finite()) {
            return Err(Error::ParameterPath(format!(
                "axis '{}' contains non-finite values",
                axis.label
            )));
        }
        match axis.path {
            ParamPath::BranchStrength(i) | ParamPath::BranchWidth(i) | ParamPath::BranchOffset(i) => {
                if i >= min_branches {
                    return Err(Error::ParameterPath(format!(
                        "axis '{}' addresses branch {} but only {} branches exist",
                        axis.label,
                        i + 1,
                        min_branches
                    )));
                }
                if !branch_has_barrier(i) {
                    return Err(Error::ParameterPath(format!(
                        "axis '{}' addresses a barrier parameter on branch {}, \
                         which has no barrier",
                        axis.label,
                        i + 1
                    )));
                }
            }
            ParamPath::SharedStrength | ParamPath::SharedWidth | ParamPath::SharedOffset => {
                if !(0..template.branch_count()).all(branch_has_barrier) {
                    return Err(Error::ParameterPath(format!(
                        "axis '{}' sets a shared barrier parameter but some branch \
                         has no barrier",
                        axis.label
                    )));
                }
            }
            ParamPath::BranchCount => {}
            ParamPath::Energy => {
                if !axis.values.iter().all(|&v| v > 0.0) {
                    return Err(Error::ParameterPath(format!(
                        "axis '{}' contains non-positive energies",
                        axis.label
                    )));
                }
            }
        }
        let nonnegative = matches!(
            axis.path,
            ParamPath::BranchWidth(_)
                | ParamPath::BranchOffset(_)
                | ParamPath::SharedWidth
                | ParamPath::SharedOffset
        );
        if nonnegative && axis.values.iter().any(|&v| v < 0.0) {
            return Err(Error::ParameterPath(format!(
                "axis '{}' contains negative widths or offsets",
                axis.label
            )));
        }
    }

    for obs in observables {
        if obs.kind != ObservableKind::ReflectionProb && obs.branch >= min_branches {
            return Err(Error::ParameterPath(format!(
                "observable '{}' addresses branch {} but only {} branches exist",
                obs.label,
                obs.branch + 1,
                min_branches
            )));
        }
        if obs.kind == ObservableKind::TauSaturated && !branch_has_barrier(obs.branch) {
            return Err(Error::ParameterPath(format!(
                "observable '{}' scans the barrier width of branch {}, \
                 which has no barrier",
                obs.label,
                obs.branch + 1
            )));
        }
    }
    Ok(())
}

/// Check axes and observables against a template without evaluating
/// anything; lets configuration layers reject bad paths up front.
pub fn validate_only(
    template: &NetworkSpec,
    axes: &[Axis],
    observables: &[Observable],
    energy: Energy,
) -> Result<()> {
    validate(template, axes, observables, energy)
}

fn set_barrier(
    branches: &mut [BranchSpec],
    index: usize,
    apply: impl Fn(&BarrierSpec) -> Result<BarrierSpec>,
) -> Result<()> {
    let bar = branches[index]
        .barrier
        .as_mut()
        .expect("validated: branch has a barrier");
    *bar = apply(bar)?;
    Ok(())
}

/// Instantiate the template at one point of the Cartesian product.
fn realize(
    template: &NetworkSpec,
    axes: &[Axis],
    point: &[f64],
    base_energy: Energy,
) -> Result<(NetworkSpec, Energy)> {
    let mut energy = base_energy;
    // Replication first so indexed assignments land on the replicas.
    let mut branches: Vec<BranchSpec> = match axes
        .iter()
        .position(|a| a.path == ParamPath::BranchCount)
    {
        Some(i) => vec![template.branches()[0]; point[i] as usize],
        None => template.branches().to_vec(),
    };
    for (axis, &value) in axes.iter().zip(point) {
        match axis.path {
            ParamPath::BranchStrength(i) => set_barrier(&mut branches, i, |b| {
                BarrierSpec::new(value, b.width, b.offset)
            })?,
            ParamPath::BranchWidth(i) => set_barrier(&mut branches, i, |b| {
                BarrierSpec::new(b.strength, value, b.offset)
            })?,
            ParamPath::BranchOffset(i) => set_barrier(&mut branches, i, |b| {
                BarrierSpec::new(b.strength, b.width, value)
            })?,
            ParamPath::SharedStrength => {
                for i in 0..branches.len() {
                    set_barrier(&mut branches, i, |b| {
                        BarrierSpec::new(value, b.width, b.offset)
                    })?;
                }
            }
            ParamPath::SharedWidth => {
                for i in 0..branches.len() {
                    set_barrier(&mut branches, i, |b| {
                        BarrierSpec::new(b.strength, value, b.offset)
                    })?;
                }
            }
            ParamPath::SharedOffset => {
                for i in 0..branches.len() {
                    set_barrier(&mut branches, i, |b| {
                        BarrierSpec::new(b.strength, b.width, value)
                    })?;
                }
            }
            ParamPath::BranchCount => {}
            ParamPath::Energy => energy = Energy::new(value)?,
        }
    }
    Ok((NetworkSpec::new(branches)?, energy))
}

fn evaluate_row(
    template: &NetworkSpec,
    axes: &[Axis],
    observables: &[Observable],
    point: &[f64],
    base_energy: Energy,
    settings: &SweepSettings,
) -> Result<Vec<f64>> {
    let (network, energy) = realize(template, axes, point, base_energy)?;
    let mut row = Vec::with_capacity(point.len() + observables.len());
    row.extend_from_slice(point);
    for obs in observables {
        let value = match obs.kind {
            ObservableKind::Tau => phase_time(&network, energy, obs.branch, settings.method)?.tau,
            ObservableKind::Transmission => {
                transmission_probability(&network, energy, obs.branch)?
            }
            ObservableKind::TauSaturated => {
                hartman_scan(&network, energy, obs.branch, &settings.saturation, settings.method)?
                    .tau_s
            }
            ObservableKind::ReflectionProb => {
                solve_scattering(&network, energy)?.reflection.norm_sqr()
            }
        };
        row.push(value);
    }
    Ok(row)
}

/// Evaluate the full Cartesian product of `axes` over `template`.
///
/// All parameter paths are validated before any row is computed. Numeric
/// failures inside a row (for example a saturation scan on a branch whose
/// axis drove `V` below `E`) abort the sweep with the first failing row's
/// error.
pub fn sweep(
    template: &NetworkSpec,
    axes: &[Axis],
    observables: &[Observable],
    energy: Energy,
    settings: &SweepSettings,
) -> Result<SweepTable> {
    validate(template, axes, observables, energy)?;

    let total: usize = axes.iter().map(|a| a.values.len()).product();
    let point_of = |row: usize| -> Vec<f64> {
        let mut point = Vec::with_capacity(axes.len());
        let mut remainder = row;
        let mut stride = total;
        for axis in axes {
            stride /= axis.values.len();
            point.push(axis.values[remainder / stride]);
            remainder %= stride;
        }
        point
    };

    let jobs = settings.jobs.max(1).min(total.max(1));
    let mut rows: Vec<Result<Vec<f64>>> = Vec::with_capacity(total);
    if jobs <= 1 {
        for index in 0..total {
            rows.push(evaluate_row(
                template,
                axes,
                observables,
                &point_of(index),
                energy,
                settings,
            ));
        }
    } else {
        let chunk = total.div_ceil(jobs);
        let mut parts: Vec<Vec<Result<Vec<f64>>>> = Vec::with_capacity(jobs);
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..jobs)
                .map(|worker| {
                    let point_of = &point_of;
                    scope.spawn(move || {
                        let start = worker * chunk;
                        let end = (start + chunk).min(total);
                        (start..end)
                            .map(|index| {
                                evaluate_row(
                                    template,
                                    axes,
                                    observables,
                                    &point_of(index),
                                    energy,
                                    settings,
                                )
                            })
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for handle in handles {
                parts.push(handle.join().expect("sweep worker panicked"));
            }
        });
        rows = parts.into_iter().flatten().collect();
    }

    let rows = rows.into_iter().collect::<Result<Vec<Vec<f64>>>>()?;
    Ok(SweepTable {
        axis_labels: axes.iter().map(|a| a.label.clone()).collect(),
        observable_labels: observables.iter().map(|o| o.label.clone()).collect(),
        rows,
        provenance: Provenance {
            template: describe_template(template),
            energy: energy.value(),
            method: match settings.method {
                TauMethod::Analytic => "analytic".into(),
                TauMethod::FiniteDifference => "fd".into(),
            },
            version: env!("CARGO_PKG_VERSION").into(),
        },
    })
}
