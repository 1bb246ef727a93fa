//! Phase (group-delay) times, Hartman saturation scans, and the
//! under-barrier probability diagnostic.
//!
//! The phase time of branch `n` is `τ_n = ħ · d Arg[t_n] / dE`. The default
//! route uses the analytic derivative `τ = ħ · Im[(dt/dE)/t]`, which needs
//! no phase unwrapping and no step-size tuning; a central-difference route
//! on the unwrapped phase serves as fallback near `V = E` and as an
//! independent cross-check everywhere else.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::network::NetworkSpec;
use crate::solver::{barrier_of, solve_scattering, solve_with_derivative, BranchSolution};
use crate::units::{kappa, Energy, HBAR};

/// How a phase time was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TauMethod {
    /// `τ = ħ · Im[(dt/dE)/t]` with the analytic matrix derivative.
    Analytic,
    /// Central difference of the unwrapped transmission phase.
    FiniteDifference,
}

/// Phase time of one branch, with the transmission probability at the same
/// energy and the method actually used (the analytic route downgrades to
/// finite differences next to a barrier top).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseTimeResult {
    pub branch: usize,
    pub tau: f64,
    pub method: TauMethod,
    /// `|t_n|²`
    pub transmission: f64,
}

/// Amplitudes below this magnitude have no usable phase.
const PHASE_FLOOR: f64 = 1e-300;

/// Map an angle increment into `(−π, π]`.
fn wrap_angle(mut d: f64) -> f64 {
    while d > PI {
        d -= 2.0 * PI;
    }
    while d <= -PI {
        d += 2.0 * PI;
    }
    d
}

fn check_phase_defined(t: Complex64, branch: usize) -> Result<()> {
    if t.norm() < PHASE_FLOOR {
        Err(Error::UndefinedPhase { branch })
    } else {
        Ok(())
    }
}

fn finite_difference_tau(network: &NetworkSpec, energy: Energy, branch: usize) -> Result<f64> {
    let e = energy.value();
    // Keep E − h positive for very small energies.
    let h = (1e-6 * e.max(1.0)).min(0.5 * e);
    let plus = solve_scattering(network, Energy::new(e + h)?)?;
    let minus = solve_scattering(network, Energy::new(e - h)?)?;
    let tp = plus.transmission(branch);
    let tm = minus.transmission(branch);
    check_phase_defined(tp, branch)?;
    check_phase_defined(tm, branch)?;
    Ok(HBAR * wrap_angle(tp.arg() - tm.arg()) / (2.0 * h))
}

/// Phase time `τ_n = ħ · d Arg[t_n] / dE` for one branch.
///
/// With [`TauMethod::Analytic`] the energy derivative of the whole linear
/// system is solved against the already-factored matrix; if some barrier
/// strength is within 1e-6 of the energy this falls back internally to the
/// finite-difference route and records that in the result.
pub fn phase_time(
    network: &NetworkSpec,
    energy: Energy,
    branch: usize,
    method: TauMethod,
) -> Result<PhaseTimeResult> {
    network.branch(branch)?;
    match method {
        TauMethod::Analytic => match solve_with_derivative(network, energy) {
            Ok((solution, derivative)) => {
                let t = solution.transmission(branch);
                check_phase_defined(t, branch)?;
                // Rescale by |t| before dividing: for opaque barriers t can
                // sit near 1e-250, where |t|² underflows inside the complex
                // division even though the ratio itself is O(1).
                let scale = t.norm();
                let ratio = (derivative.transmissions[branch] / scale) / (t / scale);
                Ok(PhaseTimeResult {
                    branch,
                    tau: HBAR * ratio.im,
                    method: TauMethod::Analytic,
                    transmission: t.norm_sqr(),
                })
            }
            Err(Error::NearBarrierTop { .. }) => {
                let solution = solve_scattering(network, energy)?;
                let t = solution.transmission(branch);
                check_phase_defined(t, branch)?;
                Ok(PhaseTimeResult {
                    branch,
                    tau: finite_difference_tau(network, energy, branch)?,
                    method: TauMethod::FiniteDifference,
                    transmission: t.norm_sqr(),
                })
            }
            Err(e) => Err(e),
        },
        TauMethod::FiniteDifference => {
            let solution = solve_scattering(network, energy)?;
            let t = solution.transmission(branch);
            check_phase_defined(t, branch)?;
            Ok(PhaseTimeResult {
                branch,
                tau: finite_difference_tau(network, energy, branch)?,
                method: TauMethod::FiniteDifference,
                transmission: t.norm_sqr(),
            })
        }
    }
}

/// `|t_n|²` of one branch.
pub fn transmission_probability(
    network: &NetworkSpec,
    energy: Energy,
    branch: usize,
) -> Result<f64> {
    network.branch(branch)?;
    Ok(solve_scattering(network, energy)?
        .transmission(branch)
        .norm_sqr())
}

/// Width-doubling schedule and stopping tolerances for [`hartman_scan`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaturationPolicy {
    pub initial_width: f64,
    pub growth: f64,
    pub max_steps: usize,
    pub eps_abs: f64,
    pub eps_rel: f64,
}

impl Default for SaturationPolicy {
    fn default() -> Self {
        Self {
            initial_width: 1.0,
            growth: 2.0,
            max_steps: 20,
            eps_abs: 1e-6,
            eps_rel: 1e-8,
        }
    }
}

/// Outcome of a saturation scan: the plateau value, the width at which it
/// was certified, and the full `(w, τ)` trace.
#[derive(Debug, Clone, PartialEq)]
pub struct SaturationResult {
    pub tau_s: f64,
    pub w_star: f64,
    pub converged: bool,
    pub trace: Vec<(f64, f64)>,
}

/// Certify the large-width plateau of `τ_branch` by evaluating it on a
/// geometric width ladder `w_j = w0 · growth^j`.
///
/// Saturation is certified once `|τ_{j+1} − τ_j| < max(eps_abs,
/// eps_rel·|τ_{j+1}|)` for two consecutive steps. A scan that exhausts
/// `max_steps` returns `converged = false` with the full trace rather than
/// an error. Requires the target branch to carry a barrier with `V > E`
/// (an evanescent interior); in the propagating regime no plateau exists.
pub fn hartman_scan(
    network: &NetworkSpec,
    energy: Energy,
    branch: usize,
    policy: &SaturationPolicy,
    method: TauMethod,
) -> Result<SaturationResult> {
    let bar = barrier_of(network, branch)?;
    if bar.strength <= energy.value() {
        return Err(Error::Domain(format!(
            "saturation scan needs V > E on branch {branch} (got V = {}, E = {})",
            bar.strength,
            energy.value()
        )));
    }
    if !(policy.initial_width > 0.0 && policy.growth > 1.0 && policy.max_steps >= 2) {
        return Err(Error::Domain(
            "saturation policy needs initial_width > 0, growth > 1, max_steps >= 2".into(),
        ));
    }

    let mut trace = Vec::with_capacity(policy.max_steps);
    let mut previous: Option<f64> = None;
    let mut previous_small = false;
    for step in 0..policy.max_steps {
        let width = policy.initial_width * policy.growth.powi(step as i32);
        let scaled = network.with_branch_width(branch, width)?;
        let tau = phase_time(&scaled, energy, branch, method)?.tau;
        trace.push((width, tau));
        if let Some(prev) = previous {
            let small = (tau - prev).abs() < policy.eps_abs.max(policy.eps_rel * tau.abs());
            if small && previous_small {
                return Ok(SaturationResult {
                    tau_s: tau,
                    w_star: width,
                    converged: true,
                    trace,
                });
            }
            previous_small = small;
        }
        previous = Some(tau);
    }
    let (w_star, tau_s) = *trace.last().expect("max_steps >= 2");
    Ok(SaturationResult {
        tau_s,
        w_star,
        converged: false,
        trace,
    })
}

/// `∫₀^w e^{a u} du`, exact at `a = 0`.
fn int_exp(a: Complex64, w: f64) -> Complex64 {
    if a == Complex64::new(0.0, 0.0) {
        Complex64::new(w, 0.0)
    } else {
        ((a * w).exp() - 1.0) / a
    }
}

/// Integrated probability `∫_{lb}^{lb+w} |ψ_II|² dx` inside the barrier of
/// one branch, in closed form from the scaled coefficients; finite for any
/// width. Its saturation with growing `w` is the stored-probability
/// mechanism behind the phase-time plateau.
pub fn under_barrier_density(network: &NetworkSpec, energy: Energy, branch: usize) -> Result<f64> {
    let bar = barrier_of(network, branch)?;
    let solution = solve_scattering(network, energy)?;
    let BranchSolution::Barrier {
        decaying: c,
        growing: d,
        ..
    } = solution.branches[branch]
    else {
        unreachable!("barrier_of checked the branch");
    };
    let w = bar.width;
    let kap = kappa(bar.strength, energy);
    if kap == Complex64::new(0.0, 0.0) {
        // Linear region: |C + D'u|² integrates termwise.
        let cross = (c * d.conj()).re;
        return Ok(c.norm_sqr() * w + cross * w * w + d.norm_sqr() * w * w * w / 3.0);
    }
    // |C|² e^{−(κ+κ̄)u}  +  |D'|² e^{(κ+κ̄)(u−w)}  +  2 Re[C D̄' e^{(κ̄−κ)u − κ̄w}]
    let decay = int_exp(-(kap + kap.conj()), w).re;
    let cross = 2.0 * (c * d.conj() * (-kap.conj() * w).exp() * int_exp(kap.conj() - kap, w)).re;
    Ok((c.norm_sqr() + d.norm_sqr()) * decay + cross)
}
