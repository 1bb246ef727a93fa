//! Stationary quantum scattering on star networks of one-dimensional wires.
//!
//! A star network joins a semi-infinite base lead to `N` semi-infinite side
//! branches at a single junction. Each branch may carry one rectangular
//! potential barrier. A unit-amplitude plane wave comes in along the base
//! lead; this crate solves the full boundary-condition linear system for the
//! reflection amplitude and the per-branch transmission amplitudes, and
//! derives Wigner phase (group-delay) times from the energy dependence of
//! the transmission phases.
//!
//! Everything works in units `ħ = 1`, `2m = 1`, so the wavenumber is
//! `k = sqrt(E)` and a barrier of strength `V > E` has decay constant
//! `κ = sqrt(V − E)`.
//!
//! Module map:
//! - [`units`]: energy, wavenumber, decay constant, reporting conventions
//! - [`network`]: barrier / branch / network descriptions
//! - [`solver`]: direct linear-system solve, analytic energy derivatives,
//!   wavefunction evaluation
//! - [`oracle`]: closed-form single-barrier amplitudes and star composition,
//!   kept independent of the solver as a cross-check path
//! - [`phasetime`]: phase times, Hartman saturation scans, under-barrier
//!   probability
//! - [`sweep`]: parameter sweeps producing ordered observable tables

pub mod error;
pub mod network;
pub mod oracle;
pub mod phasetime;
pub mod solver;
pub mod sweep;
pub mod units;

pub use error::{Error, Result};
pub use network::{BarrierSpec, BranchSpec, NetworkSpec};
pub use phasetime::{
    hartman_scan, phase_time, transmission_probability, under_barrier_density, PhaseTimeResult,
    SaturationPolicy, SaturationResult, TauMethod,
};
pub use solver::{
    assemble_system, evaluate_wavefunction, evaluate_wavefunction_slope, flux_residual,
    solve_scattering, solve_scattering_derivative, BranchSolution, Location, ScatteringSolution,
    SolutionDerivative,
};
pub use sweep::{sweep, Axis, Observable, ObservableKind, ParamPath, SweepSettings, SweepTable};
pub use units::{kappa, normalize_report, velocity, wavenumber, Energy, Reported, HBAR, TWO_M};
