//! Direct solve of the junction + barrier-interface boundary conditions.
//!
//! For a network with `nb` barrier branches and `nf` free branches the
//! unknown vector has dimension `5·nb + nf + 1`, ordered as
//!
//! ```text
//! [ R, then per branch in order:  A, B, C, D', t   (barrier branch)
//!                                 t               (free branch) ]
//! ```
//!
//! where on a barrier branch the ansatz per region is
//!
//! ```text
//! region I   (0 ≤ x < lb):       A e^{ikx} + B e^{−ikx}
//! region II  (lb ≤ x < lb+w):    C e^{−κ(x−lb)} + D' e^{κ(x−lb−w)}
//! region III (x ≥ lb+w):         t e^{ik(x−lb−w)}
//! ```
//!
//! Region II uses the rescaled coefficient `D' = D e^{κw}` so that every
//! matrix entry stays bounded by `max(1, k, |κ|)` no matter how wide the
//! barrier is; the textbook basis overflows doubles once `κw ≳ 700` while
//! opaque-barrier scans need `κw` in the hundreds. At `κ = 0` the
//! exponentials degenerate and region II switches to the exact linear
//! solution `C + D'(x − lb)`.
//!
//! The junction rows implement wavefunction continuity across all leads and
//! the Kirchhoff current rule: the base-lead derivative taken toward the
//! junction equals the sum of the branch derivatives taken away from it.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::network::{BarrierSpec, NetworkSpec};
use crate::units::{kappa, Energy};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Where each branch's unknowns start in the global vector.
fn column_offsets(network: &NetworkSpec) -> (Vec<usize>, usize) {
    let mut offsets = Vec::with_capacity(network.branch_count());
    let mut next = 1; // column 0 is R
    for branch in network.branches() {
        offsets.push(next);
        next += if branch.barrier.is_some() { 5 } else { 1 };
    }
    (offsets, next)
}

/// Build the boundary-condition system `M x = b` at energy `E`.
///
/// The system is square with dimension `5·(#barrier branches) +
/// (#free branches) + 1` and every entry is bounded by `max(1, k, |κ_n|)`.
pub fn assemble_system(
    network: &NetworkSpec,
    energy: Energy,
) -> (DMatrix<Complex64>, DVector<Complex64>) {
    let k = energy.wavenumber();
    let ik = I * k;
    let (offsets, dim) = column_offsets(network);
    let mut m = DMatrix::zeros(dim, dim);
    let mut b = DVector::zeros(dim);
    let mut row = 0;

    // Junction continuity, one row per branch: psi_n(0) = 1 + R.
    for (branch, &o) in network.branches().iter().zip(&offsets) {
        m[(row, 0)] = -ONE;
        if branch.barrier.is_some() {
            m[(row, o)] = ONE; // A
            m[(row, o + 1)] = ONE; // B
        } else {
            m[(row, o)] = ONE; // t
        }
        b[row] = ONE;
        row += 1;
    }

    // Current conservation, divided through by ik: R + sum_n (A−B | t) = 1.
    m[(row, 0)] = ONE;
    for (branch, &o) in network.branches().iter().zip(&offsets) {
        if branch.barrier.is_some() {
            m[(row, o)] = ONE;
            m[(row, o + 1)] = -ONE;
        } else {
            m[(row, o)] = ONE;
        }
    }
    b[row] = ONE;
    row += 1;

    // Interface matching, four rows per barrier branch.
    for (branch, &o) in network.branches().iter().zip(&offsets) {
        let Some(bar) = branch.barrier else { continue };
        let kap = kappa(bar.strength, energy);
        let ep = (I * k * bar.offset).exp();
        let em = (-I * k * bar.offset).exp();
        if kap == Complex64::new(0.0, 0.0) {
            // Linear region II: psi = C + D'(x − lb).
            m[(row, o)] = ep;
            m[(row, o + 1)] = em;
            m[(row, o + 2)] = -ONE;
            row += 1;
            m[(row, o)] = ik * ep;
            m[(row, o + 1)] = -ik * em;
            m[(row, o + 3)] = -ONE;
            row += 1;
            m[(row, o + 2)] = ONE;
            m[(row, o + 3)] = Complex64::new(bar.width, 0.0);
            m[(row, o + 4)] = -ONE;
            row += 1;
            m[(row, o + 3)] = ONE;
            m[(row, o + 4)] = -ik;
            row += 1;
        } else {
            let ew = (-kap * bar.width).exp();
            // Continuity at the barrier front.
            m[(row, o)] = ep;
            m[(row, o + 1)] = em;
            m[(row, o + 2)] = -ONE;
            m[(row, o + 3)] = -ew;
            row += 1;
            // Derivative at the barrier front.
            m[(row, o)] = ik * ep;
            m[(row, o + 1)] = -ik * em;
            m[(row, o + 2)] = kap;
            m[(row, o + 3)] = -kap * ew;
            row += 1;
            // Continuity at the barrier exit.
            m[(row, o + 2)] = ew;
            m[(row, o + 3)] = ONE;
            m[(row, o + 4)] = -ONE;
            row += 1;
            // Derivative at the barrier exit.
            m[(row, o + 2)] = -kap * ew;
            m[(row, o + 3)] = kap;
            m[(row, o + 4)] = -ik;
            row += 1;
        }
    }
    debug_assert_eq!(row, dim);
    (m, b)
}

/// Entry-wise derivative `dM/dE` of the assembled matrix. The right-hand
/// side is constant in `E`, so `d(Mx)/dE = 0` gives `M x' = −M' x`.
///
/// Requires every barrier to satisfy `V ≠ E` (the caller guards with a gap
/// threshold); uses `dk/dE = 1/(2k)` and `dκ/dE = −1/(2κ)`.
fn assemble_energy_derivative(network: &NetworkSpec, energy: Energy) -> DMatrix<Complex64> {
    let k = energy.wavenumber();
    let ik = I * k;
    let dk = 1.0 / (2.0 * k);
    let (offsets, dim) = column_offsets(network);
    let mut m = DMatrix::zeros(dim, dim);

    // Junction rows are constant in E.
    let mut row = network.branch_count() + 1;

    for (branch, &o) in network.branches().iter().zip(&offsets) {
        let Some(bar) = branch.barrier else { continue };
        let kap = kappa(bar.strength, energy);
        let dkap = -ONE / (2.0 * kap);
        let ep = (I * k * bar.offset).exp();
        let em = (-I * k * bar.offset).exp();
        let dep = I * bar.offset * dk * ep;
        let dem = -I * bar.offset * dk * em;
        let ew = (-kap * bar.width).exp();
        let dew = -bar.width * dkap * ew;

        m[(row, o)] = dep;
        m[(row, o + 1)] = dem;
        m[(row, o + 3)] = -dew;
        row += 1;
        m[(row, o)] = I * dk * ep + ik * dep;
        m[(row, o + 1)] = -(I * dk * em + ik * dem);
        m[(row, o + 2)] = dkap;
        m[(row, o + 3)] = -(dkap * ew + kap * dew);
        row += 1;
        m[(row, o + 2)] = dew;
        row += 1;
        m[(row, o + 2)] = -(dkap * ew + kap * dew);
        m[(row, o + 3)] = dkap;
        m[(row, o + 4)] = -I * dk;
        row += 1;
    }
    debug_assert_eq!(row, dim);
    m
}

/// Solved coefficients on one branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BranchSolution {
    /// Barrier-free branch: a single outgoing wave `t e^{ikx}`, so the
    /// transmission amplitude is referenced at the junction.
    Free { transmitted: Complex64 },
    /// Barrier branch, coefficients in the scaled region-II basis.
    Barrier {
        /// `A`: region-I wave moving from the junction toward the barrier.
        outgoing: Complex64,
        /// `B`: region-I wave reflected back toward the junction.
        returning: Complex64,
        /// `C`: coefficient of `e^{−κ(x−lb)}`.
        decaying: Complex64,
        /// `D' = D e^{κw}`: coefficient of `e^{κ(x−lb−w)}`.
        growing: Complex64,
        /// `t`: transmitted amplitude referenced at the barrier exit.
        transmitted: Complex64,
    },
}

impl BranchSolution {
    pub fn transmitted(&self) -> Complex64 {
        match *self {
            BranchSolution::Free { transmitted } => transmitted,
            BranchSolution::Barrier { transmitted, .. } => transmitted,
        }
    }
}

/// Full scattering state of the network at one energy.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringSolution {
    pub energy: Energy,
    /// Reflection amplitude in the base lead.
    pub reflection: Complex64,
    pub branches: Vec<BranchSolution>,
}

impl ScatteringSolution {
    pub fn transmission(&self, branch: usize) -> Complex64 {
        self.branches[branch].transmitted()
    }

    /// `| |R|² + Σ|t_n|² − 1 |`; zero for a unitary solution.
    pub fn flux_residual(&self) -> f64 {
        flux_residual(self)
    }
}

/// Unitarity defect of a solution: `| |R|² + Σ_n |t_n|² − 1 |`.
pub fn flux_residual(solution: &ScatteringSolution) -> f64 {
    let total: f64 = solution.reflection.norm_sqr()
        + solution
            .branches
            .iter()
            .map(|b| b.transmitted().norm_sqr())
            .sum::<f64>();
    (total - 1.0).abs()
}

fn lu_solve(
    m: &DMatrix<Complex64>,
    rhs: &DVector<Complex64>,
    lu: &nalgebra::LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>,
) -> Result<DVector<Complex64>> {
    lu.solve(rhs).ok_or_else(|| {
        let diag: Vec<f64> = (0..m.nrows()).map(|i| lu.u()[(i, i)].norm()).collect();
        let pmin = diag.iter().cloned().fold(f64::INFINITY, f64::min);
        let pmax = diag.iter().cloned().fold(0.0, f64::max);
        Error::Numeric(format!(
            "singular boundary-condition matrix (dim {}, pivot range {pmin:.3e}..{pmax:.3e})",
            m.nrows()
        ))
    })
}

fn extract_solution(
    network: &NetworkSpec,
    energy: Energy,
    x: &DVector<Complex64>,
) -> ScatteringSolution {
    let (offsets, _) = column_offsets(network);
    let branches = network
        .branches()
        .iter()
        .zip(&offsets)
        .map(|(branch, &o)| {
            if branch.barrier.is_some() {
                BranchSolution::Barrier {
                    outgoing: x[o],
                    returning: x[o + 1],
                    decaying: x[o + 2],
                    growing: x[o + 3],
                    transmitted: x[o + 4],
                }
            } else {
                BranchSolution::Free { transmitted: x[o] }
            }
        })
        .collect();
    ScatteringSolution {
        energy,
        reflection: x[0],
        branches,
    }
}

/// Solve the boundary-condition system by dense LU with partial pivoting.
pub fn solve_scattering(network: &NetworkSpec, energy: Energy) -> Result<ScatteringSolution> {
    let (m, b) = assemble_system(network, energy);
    let lu = m.clone().lu();
    let x = lu_solve(&m, &b, &lu)?;
    Ok(extract_solution(network, energy, &x))
}

/// Energy derivatives of the reflection and transmission amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionDerivative {
    /// `dR/dE`
    pub reflection: Complex64,
    /// `dt_n/dE` per branch.
    pub transmissions: Vec<Complex64>,
}

/// Minimum allowed `|V_n − E|` for the analytic derivative; below this the
/// `dκ/dE = −1/(2κ)` factors lose accuracy and callers should use finite
/// differences instead.
pub const DERIVATIVE_GAP: f64 = 1e-6;

fn check_derivative_gap(network: &NetworkSpec, energy: Energy) -> Result<()> {
    for (n, branch) in network.branches().iter().enumerate() {
        if let Some(bar) = branch.barrier {
            let gap = (bar.strength - energy.value()).abs();
            if gap <= DERIVATIVE_GAP {
                return Err(Error::NearBarrierTop { branch: n, gap });
            }
        }
    }
    Ok(())
}

/// Solution and its analytic energy derivative from one factorization:
/// solve `M x = b`, then `M x' = −(dM/dE) x`.
pub(crate) fn solve_with_derivative(
    network: &NetworkSpec,
    energy: Energy,
) -> Result<(ScatteringSolution, SolutionDerivative)> {
    check_derivative_gap(network, energy)?;
    let (m, b) = assemble_system(network, energy);
    let lu = m.clone().lu();
    let x = lu_solve(&m, &b, &lu)?;
    let mprime = assemble_energy_derivative(network, energy);
    let rhs = -(&mprime * &x);
    let xp = lu_solve(&m, &rhs, &lu)?;

    let (offsets, _) = column_offsets(network);
    let transmissions = network
        .branches()
        .iter()
        .zip(&offsets)
        .map(|(branch, &o)| {
            if branch.barrier.is_some() {
                xp[o + 4]
            } else {
                xp[o]
            }
        })
        .collect();
    Ok((
        extract_solution(network, energy, &x),
        SolutionDerivative {
            reflection: xp[0],
            transmissions,
        },
    ))
}

/// Analytic energy derivative of every scattering amplitude.
///
/// Errors with [`Error::NearBarrierTop`] when some `|V_n − E| ≤ 1e-6`; the
/// caller is expected to fall back to finite differences there.
pub fn solve_scattering_derivative(
    network: &NetworkSpec,
    energy: Energy,
) -> Result<SolutionDerivative> {
    solve_with_derivative(network, energy).map(|(_, d)| d)
}

/// Which wire a wavefunction sample refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    /// The base lead; the coordinate is the distance from the junction,
    /// increasing toward the source of the incident wave.
    Base,
    /// Side branch by index; the coordinate is the distance from the
    /// junction along the branch.
    Branch(usize),
}

/// Evaluate the scattering wavefunction at distance `x ≥ 0` from the
/// junction along the chosen wire.
///
/// On a barrier branch the region is selected by comparing `x` with `lb`
/// and `lb + w`; region II uses the scaled basis so the value stays finite
/// for arbitrarily wide barriers.
pub fn evaluate_wavefunction(
    network: &NetworkSpec,
    solution: &ScatteringSolution,
    location: Location,
    x: f64,
) -> Complex64 {
    assert!(x >= 0.0, "coordinate must be >= 0, got {x}");
    let k = solution.energy.wavenumber();
    match location {
        Location::Base => (-I * k * x).exp() + solution.reflection * (I * k * x).exp(),
        Location::Branch(n) => {
            let branch = &network.branches()[n];
            match (branch.barrier, &solution.branches[n]) {
                (None, BranchSolution::Free { transmitted }) => transmitted * (I * k * x).exp(),
                (
                    Some(bar),
                    BranchSolution::Barrier {
                        outgoing,
                        returning,
                        decaying,
                        growing,
                        transmitted,
                    },
                ) => {
                    if x < bar.offset {
                        outgoing * (I * k * x).exp() + returning * (-I * k * x).exp()
                    } else if x < bar.offset + bar.width {
                        let u = x - bar.offset;
                        let kap = kappa(bar.strength, solution.energy);
                        if kap == Complex64::new(0.0, 0.0) {
                            decaying + growing * u
                        } else {
                            decaying * (-kap * u).exp() + growing * (kap * (u - bar.width)).exp()
                        }
                    } else {
                        transmitted * (I * k * (x - bar.offset - bar.width)).exp()
                    }
                }
                _ => unreachable!("solution does not match network"),
            }
        }
    }
}

/// Spatial derivative `dψ/dx` of [`evaluate_wavefunction`] with respect to
/// the same coordinate (for [`Location::Base`] that coordinate increases
/// away from the junction, so the derivative toward the junction is the
/// negative of this value).
pub fn evaluate_wavefunction_slope(
    network: &NetworkSpec,
    solution: &ScatteringSolution,
    location: Location,
    x: f64,
) -> Complex64 {
    assert!(x >= 0.0, "coordinate must be >= 0, got {x}");
    let k = solution.energy.wavenumber();
    let ik = I * k;
    match location {
        Location::Base => {
            -ik * (-I * k * x).exp() + ik * solution.reflection * (I * k * x).exp()
        }
        Location::Branch(n) => {
            let branch = &network.branches()[n];
            match (branch.barrier, &solution.branches[n]) {
                (None, BranchSolution::Free { transmitted }) => {
                    ik * transmitted * (I * k * x).exp()
                }
                (
                    Some(bar),
                    BranchSolution::Barrier {
                        outgoing,
                        returning,
                        decaying,
                        growing,
                        transmitted,
                    },
                ) => {
                    if x < bar.offset {
                        ik * outgoing * (I * k * x).exp() - ik * returning * (-I * k * x).exp()
                    } else if x < bar.offset + bar.width {
                        let u = x - bar.offset;
                        let kap = kappa(bar.strength, solution.energy);
                        if kap == Complex64::new(0.0, 0.0) {
                            *growing
                        } else {
                            -kap * decaying * (-kap * u).exp()
                                + kap * growing * (kap * (u - bar.width)).exp()
                        }
                    } else {
                        ik * transmitted * (I * k * (x - bar.offset - bar.width)).exp()
                    }
                }
                _ => unreachable!("solution does not match network"),
            }
        }
    }
}

/// Largest magnitude over all solved coefficients; the scale against which
/// boundary residuals are judged.
pub fn coefficient_scale(solution: &ScatteringSolution) -> f64 {
    let mut scale: f64 = 1.0_f64.max(solution.reflection.norm());
    for b in &solution.branches {
        match *b {
            BranchSolution::Free { transmitted } => scale = scale.max(transmitted.norm()),
            BranchSolution::Barrier {
                outgoing,
                returning,
                decaying,
                growing,
                transmitted,
            } => {
                for c in [outgoing, returning, decaying, growing, transmitted] {
                    scale = scale.max(c.norm());
                }
            }
        }
    }
    scale
}

pub(crate) fn barrier_of(network: &NetworkSpec, branch: usize) -> Result<BarrierSpec> {
    network
        .branch(branch)?
        .barrier
        .ok_or_else(|| Error::Domain(format!("branch {branch} has no barrier")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{BarrierSpec, BranchSpec};
    use approx::assert_relative_eq;

    fn energy(e: f64) -> Energy {
        Energy::new(e).unwrap()
    }

    fn barrier(v: f64, w: f64, lb: f64) -> BranchSpec {
        BranchSpec::with_barrier(BarrierSpec::new(v, w, lb).unwrap())
    }

    #[test]
    fn system_dimensions() {
        let free2 = NetworkSpec::new(vec![BranchSpec::free(), BranchSpec::free()]).unwrap();
        assert_eq!(assemble_system(&free2, energy(1.0)).0.nrows(), 3);

        let mixed = NetworkSpec::new(vec![barrier(5.0, 1.0, 0.0), BranchSpec::free()]).unwrap();
        assert_eq!(assemble_system(&mixed, energy(1.0)).0.nrows(), 7);

        let nine = NetworkSpec::identical(barrier(5.0, 100.0, 1.0), 9).unwrap();
        assert_eq!(assemble_system(&nine, energy(1.0)).0.nrows(), 46);
    }

    #[test]
    fn transparent_junction_two_branches() {
        let net = NetworkSpec::new(vec![BranchSpec::free(), BranchSpec::free()]).unwrap();
        let sol = solve_scattering(&net, energy(1.0)).unwrap();
        assert_relative_eq!(sol.reflection.re, -1.0 / 3.0, epsilon = 1e-14);
        assert_relative_eq!(sol.reflection.im, 0.0, epsilon = 1e-14);
        for n in 0..2 {
            assert_relative_eq!(sol.transmission(n).re, 2.0 / 3.0, epsilon = 1e-14);
            assert_relative_eq!(sol.transmission(n).im, 0.0, epsilon = 1e-14);
        }
        assert!(flux_residual(&sol) < 1e-15);
    }

    #[test]
    fn transparent_junction_three_branches() {
        let net = NetworkSpec::identical(BranchSpec::free(), 3).unwrap();
        let sol = solve_scattering(&net, energy(1.0)).unwrap();
        assert_relative_eq!(sol.reflection.re, -0.5, epsilon = 1e-14);
        for n in 0..3 {
            assert_relative_eq!(sol.transmission(n).re, 0.5, epsilon = 1e-14);
        }
    }

    #[test]
    fn single_barrier_matches_closed_form_magnitude() {
        // 1/t = cosh(kw) + (i/2)(k/κ... ) evaluated independently gives
        // |t|^2 = 1 / (cosh²(2) + (0.75 sinh(2))²) for V=5, w=1, E=1.
        let net = NetworkSpec::new(vec![barrier(5.0, 1.0, 0.0)]).unwrap();
        let sol = solve_scattering(&net, energy(1.0)).unwrap();
        let c2 = 2.0_f64.cosh();
        let s2 = 2.0_f64.sinh();
        let expect = 1.0 / (c2 * c2 + 0.5625 * s2 * s2);
        assert_relative_eq!(sol.transmission(0).norm_sqr(), expect, epsilon = 1e-12);
        assert!((sol.transmission(0).norm_sqr() - 0.0464).abs() < 1e-4);
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let net = NetworkSpec::new(vec![barrier(5.0, 1.0, 0.0)]).unwrap();
        let e = energy(1.0);
        let d = solve_scattering_derivative(&net, e).unwrap();
        let h = 1e-6;
        let plus = solve_scattering(&net, energy(1.0 + h)).unwrap();
        let minus = solve_scattering(&net, energy(1.0 - h)).unwrap();
        let fd_t = (plus.transmission(0) - minus.transmission(0)) / (2.0 * h);
        let fd_r = (plus.reflection - minus.reflection) / (2.0 * h);
        assert!((d.transmissions[0] - fd_t).norm() <= 1e-6 * fd_t.norm().max(1.0));
        assert!((d.reflection - fd_r).norm() <= 1e-6 * fd_r.norm().max(1.0));
    }

    #[test]
    fn derivative_constant_for_free_network() {
        let net = NetworkSpec::identical(BranchSpec::free(), 2).unwrap();
        let d = solve_scattering_derivative(&net, energy(1.3)).unwrap();
        for dt in &d.transmissions {
            assert!(dt.norm() < 1e-14);
        }
        assert!(d.reflection.norm() < 1e-14);
    }

    #[test]
    fn derivative_respects_symmetry() {
        // Identical branches give identical derivatives up to the pivoting
        // tolerance of the elimination.
        let net =
            NetworkSpec::new(vec![barrier(5.0, 2.0, 1.0), barrier(5.0, 2.0, 1.0)]).unwrap();
        let d = solve_scattering_derivative(&net, energy(1.0)).unwrap();
        assert!((d.transmissions[0] - d.transmissions[1]).norm() < 1e-12);
    }

    #[test]
    fn derivative_refuses_barrier_top() {
        let net = NetworkSpec::new(vec![barrier(1.0 + 1e-9, 1.0, 0.0)]).unwrap();
        match solve_scattering_derivative(&net, energy(1.0)) {
            Err(Error::NearBarrierTop { branch: 0, .. }) => {}
            other => panic!("expected NearBarrierTop, got {other:?}"),
        }
    }

    #[test]
    fn wavefunction_anchors() {
        let net = NetworkSpec::new(vec![barrier(5.0, 1.5, 2.0), BranchSpec::free()]).unwrap();
        let sol = solve_scattering(&net, energy(1.0)).unwrap();
        // Base lead at the junction: 1 + R.
        let at_junction = evaluate_wavefunction(&net, &sol, Location::Base, 0.0);
        assert!((at_junction - (ONE + sol.reflection)).norm() < 1e-14);
        // Barrier exit: the transmitted amplitude itself.
        let at_exit = evaluate_wavefunction(&net, &sol, Location::Branch(0), 3.5);
        assert!((at_exit - sol.transmission(0)).norm() < 1e-14);
    }

    #[test]
    fn wavefunction_continuity_at_interfaces() {
        // Region-I value written out by hand from the solved coefficients
        // against the function's region-II/III evaluation at the interface.
        let net = NetworkSpec::new(vec![barrier(6.5, 2.3, 1.7), barrier(2.0, 0.9, 0.4)]).unwrap();
        let sol = solve_scattering(&net, energy(1.3)).unwrap();
        let k = 1.3_f64.sqrt();
        for (n, bar) in [(0usize, (6.5, 2.3, 1.7)), (1, (2.0, 0.9, 0.4))] {
            let BranchSolution::Barrier {
                outgoing,
                returning,
                decaying,
                growing,
                ..
            } = sol.branches[n]
            else {
                unreachable!()
            };
            let (_, w, lb) = bar;
            let region1_at_front =
                outgoing * (I * k * lb).exp() + returning * (-I * k * lb).exp();
            let at_front = evaluate_wavefunction(&net, &sol, Location::Branch(n), lb);
            assert!(
                (region1_at_front - at_front).norm() < 1e-10,
                "branch {n}: {region1_at_front} vs {at_front}"
            );
            let kap = kappa(net.branches()[n].barrier.unwrap().strength, sol.energy);
            let region2_at_exit = decaying * (-kap * w).exp() + growing;
            let at_exit = evaluate_wavefunction(&net, &sol, Location::Branch(n), lb + w);
            assert!((region2_at_exit - at_exit).norm() < 1e-10);
        }
    }

    #[test]
    fn junction_current_balances() {
        let net = NetworkSpec::new(vec![barrier(6.5, 2.3, 1.7), BranchSpec::free()]).unwrap();
        let sol = solve_scattering(&net, energy(1.3)).unwrap();
        // Derivative toward the junction on the base side equals the sum of
        // outward branch derivatives.
        let toward_junction = -evaluate_wavefunction_slope(&net, &sol, Location::Base, 0.0);
        let outward: Complex64 = (0..2)
            .map(|n| evaluate_wavefunction_slope(&net, &sol, Location::Branch(n), 0.0))
            .sum();
        assert!((toward_junction - outward).norm() < 1e-12);
    }

    #[test]
    fn wavefunction_continuous_at_barrier_top_energy() {
        // V = E exactly: region II is the linear solution.
        let net = NetworkSpec::new(vec![barrier(1.0, 2.0, 1.0), BranchSpec::free()]).unwrap();
        let sol = solve_scattering(&net, energy(1.0)).unwrap();
        assert!(flux_residual(&sol) < 1e-12);
        for (a, b) in [(1.0 - 1e-9, 1.0 + 1e-9), (3.0 - 1e-9, 3.0 + 1e-9)] {
            let lo = evaluate_wavefunction(&net, &sol, Location::Branch(0), a);
            let hi = evaluate_wavefunction(&net, &sol, Location::Branch(0), b);
            assert!((lo - hi).norm() < 1e-7, "jump at {a}..{b}: {lo} vs {hi}");
        }
    }

    #[test]
    fn entries_stay_bounded_for_huge_widths() {
        let net = NetworkSpec::new(vec![barrier(5.0, 1e6, 1.0), BranchSpec::free()]).unwrap();
        let e = energy(1.0);
        let (m, _) = assemble_system(&net, e);
        let bound = 1.0_f64.max(e.wavenumber()).max(2.0) + 1e-12;
        for entry in m.iter() {
            assert!(entry.norm() <= bound, "entry {entry} above {bound}");
        }
    }
}
