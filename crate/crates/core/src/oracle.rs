//! Closed-form cross-check path, independent of the linear-system solver.
//!
//! A single rectangular barrier has well-known reflection and transmission
//! amplitudes; a star junction with Kirchhoff boundary conditions has a
//! closed-form scattering matrix. Composing the two reproduces the full
//! network amplitudes for any network with at most one barrier per branch,
//! by resumming the multiple reflections between each barrier and the
//! junction. The formulas here are short enough to audit by hand, which is
//! the point: the solver is validated against them to 1e-10.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::network::{BranchSpec, NetworkSpec};
use crate::units::{kappa, Energy};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Scattering amplitudes of one rectangular barrier on an infinite wire.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierAmplitudes {
    /// Transmission amplitude with the phase referenced at the barrier exit
    /// (free flight across the barrier interval is excluded).
    pub transmitted: Complex64,
    /// Reflection amplitude with the phase referenced at the barrier front.
    pub reflected: Complex64,
}

/// Closed-form amplitudes of a rectangular barrier of strength `V` and
/// width `w` at energy `E`:
///
/// ```text
/// 1/t = cosh(κw) + (i/2)(κ/k − k/κ) sinh(κw)
/// r   = −(i/2)(κ/k + k/κ) sinh(κw) · t
/// ```
///
/// evaluated in the overflow-safe form obtained by multiplying through by
/// `e^{−κw}`, valid uniformly for `V > E`, `V < E` (κ imaginary), and at
/// `V = E` via the `κ → 0` limit `t = 1/(1 − i k w / 2)`.
pub fn barrier_amplitudes(energy: Energy, strength: f64, width: f64) -> BarrierAmplitudes {
    let k = energy.wavenumber();
    let kap = kappa(strength, energy);
    if kap == Complex64::new(0.0, 0.0) {
        let t = ONE / (ONE - I * (k * width / 2.0));
        return BarrierAmplitudes {
            transmitted: t,
            reflected: -I * (k * width / 2.0) * t,
        };
    }
    let ratio_diff = kap / k - k / kap;
    let ratio_sum = kap / k + k / kap;
    let ew = (-kap * width).exp();
    let plus = ONE + (I / 2.0) * ratio_diff;
    let minus = ONE - (I / 2.0) * ratio_diff;
    let denom = plus + ew * ew * minus;
    BarrierAmplitudes {
        transmitted: 2.0 * ew / denom,
        reflected: -(I / 2.0) * ratio_sum * (ONE - ew * ew) / denom,
    }
}

/// Reflection a branch presents to the junction: `ρ = r e^{2ik·lb}` for a
/// barrier branch (the round trip junction → barrier front → junction),
/// zero for a barrier-free branch.
pub fn branch_load_reflection(energy: Energy, branch: &BranchSpec) -> Complex64 {
    match branch.barrier {
        None => Complex64::new(0.0, 0.0),
        Some(bar) => {
            let amps = barrier_amplitudes(energy, bar.strength, bar.width);
            let k = energy.wavenumber();
            amps.reflected * (2.0 * I * k * bar.offset).exp()
        }
    }
}

/// Network amplitudes by algebraic resummation of the junction conditions
/// with each branch replaced by its load reflection:
///
/// ```text
/// u = 2 / (1 + Σ_n (1 − ρ_n)/(1 + ρ_n)),   A_n = u/(1 + ρ_n),
/// R = u − 1,   t_n = A_n e^{ik·lb_n} t̄_n  (barrier)  or  A_n  (free).
/// ```
pub fn compose_star(network: &NetworkSpec, energy: Energy) -> Result<(Complex64, Vec<Complex64>)> {
    let k = energy.wavenumber();
    let loads: Vec<Complex64> = network
        .branches()
        .iter()
        .map(|b| branch_load_reflection(energy, b))
        .collect();
    for (n, rho) in loads.iter().enumerate() {
        if (ONE + rho).norm() < 1e-13 {
            return Err(Error::Numeric(format!(
                "branch {n} is perfectly reflecting at antiresonance (1 + rho ~ 0); \
                 the star composition is singular"
            )));
        }
    }
    let sum: Complex64 = loads.iter().map(|rho| (ONE - rho) / (ONE + rho)).sum();
    let u = 2.0 * ONE / (ONE + sum);
    let reflection = u - ONE;
    let transmissions = network
        .branches()
        .iter()
        .zip(&loads)
        .map(|(branch, rho)| {
            let a = u / (ONE + rho);
            match branch.barrier {
                None => a,
                Some(bar) => {
                    let amps = barrier_amplitudes(energy, bar.strength, bar.width);
                    a * (I * k * bar.offset).exp() * amps.transmitted
                }
            }
        })
        .collect();
    Ok((reflection, transmissions))
}

/// Scattering matrix of a bare Kirchhoff vertex joining `leads` identical
/// leads: `S = (2/leads) J − I` with `J` the all-ones matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct JunctionSMatrix {
    pub dimension: usize,
    pub matrix: DMatrix<f64>,
}

pub fn junction_smatrix(leads: usize) -> Result<JunctionSMatrix> {
    if leads < 2 {
        return Err(Error::Domain(format!(
            "a junction needs at least 2 leads, got {leads}"
        )));
    }
    let g = 2.0 / leads as f64;
    let matrix = DMatrix::from_fn(leads, leads, |i, j| if i == j { g - 1.0 } else { g });
    Ok(JunctionSMatrix {
        dimension: leads,
        matrix,
    })
}

/// Phase of the closed-form transmitted amplitude, used by phase-time
/// reduction oracles (wrapped to (−π, π]).
pub fn barrier_phase(energy: Energy, strength: f64, width: f64) -> f64 {
    barrier_amplitudes(energy, strength, width).transmitted.arg()
}

/// Closed-form 1D phase time `τ̄ = ħ d Arg[t̄]/dE` by direct differentiation
/// of the amplitude formula: with `D = P + e^{−2κw} M`,
///
/// ```text
/// (dt̄/dE)/t̄ = −w κ' − D'/D,    κ' = −1/(2κ),
/// ```
///
/// so `τ̄ = Im[−w κ' − D'/D]`. Exact to rounding; an algebraic route fully
/// independent of the network solver. Errors at `V = E` where `κ'` blows up.
pub fn barrier_phase_time(energy: Energy, strength: f64, width: f64) -> Result<f64> {
    let k = energy.wavenumber();
    let kap = kappa(strength, energy);
    if kap == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain(
            "closed-form phase time is singular at V = E".into(),
        ));
    }
    let dk = 1.0 / (2.0 * k);
    let dkap = -ONE / (2.0 * kap);
    let delta = kap / k - k / kap;
    let ddelta = dkap / k - kap * dk / (k * k) - dk / kap + k * dkap / (kap * kap);
    let p = ONE + (I / 2.0) * delta;
    let m = ONE - (I / 2.0) * delta;
    let dp = (I / 2.0) * ddelta;
    let dm = -(I / 2.0) * ddelta;
    let ex = (-2.0 * kap * width).exp();
    let dex = -2.0 * width * dkap * ex;
    let d = p + ex * m;
    let dd = dp + dex * m + ex * dm;
    Ok((-width * dkap - dd / d).im)
}

/// Opaque-barrier (w → ∞) limit of the 1D transmission phase time,
/// `τ = 1/(kκ)`, valid for `V > E`.
pub fn opaque_phase_time_limit(energy: Energy, strength: f64) -> Result<f64> {
    let e = energy.value();
    if strength <= e {
        return Err(Error::Domain(format!(
            "opaque limit needs V > E, got V = {strength}, E = {e}"
        )));
    }
    let k = energy.wavenumber();
    let kap = kappa(strength, energy).re;
    Ok(1.0 / (k * kap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::BarrierSpec;
    use approx::assert_relative_eq;

    fn energy(e: f64) -> Energy {
        Energy::new(e).unwrap()
    }

    #[test]
    fn zero_width_is_transparent() {
        let amps = barrier_amplitudes(energy(1.0), 5.0, 0.0);
        assert!((amps.transmitted - ONE).norm() < 1e-15);
        assert!(amps.reflected.norm() < 1e-15);
    }

    #[test]
    fn textbook_point_v5_w1() {
        // cosh(2) ≈ 3.7622, sinh(2) ≈ 3.6269 give |t|² ≈ 0.0464.
        let amps = barrier_amplitudes(energy(1.0), 5.0, 1.0);
        let c2 = 2.0_f64.cosh();
        let s2 = 2.0_f64.sinh();
        let t2 = 1.0 / (c2 * c2 + 0.5625 * s2 * s2);
        assert_relative_eq!(amps.transmitted.norm_sqr(), t2, epsilon = 1e-13);
        assert_relative_eq!(amps.reflected.norm_sqr(), 1.0 - t2, epsilon = 1e-13);
        assert!((amps.transmitted.norm_sqr() - 0.0464).abs() < 1e-4);
    }

    #[test]
    fn barrier_top_limit() {
        // κ → 0 with k·w/2 = 1: t = 1/(1 − i), |t|² = 1/2.
        let amps = barrier_amplitudes(energy(1.0), 1.0, 2.0);
        let expect = ONE / (ONE - I);
        assert!((amps.transmitted - expect).norm() < 1e-15);
        assert_relative_eq!(amps.transmitted.norm_sqr(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn unitary_across_regimes() {
        for v in [-2.0, 0.0, 0.3, 1.0, 1.0 + 1e-8, 1.0 - 1e-8, 5.0, 20.0] {
            for w in [0.0, 0.1, 1.0, 10.0, 100.0, 700.0] {
                let amps = barrier_amplitudes(energy(1.0), v, w);
                let total = amps.transmitted.norm_sqr() + amps.reflected.norm_sqr();
                assert!(
                    (total - 1.0).abs() < 1e-12,
                    "V={v} w={w}: |t|²+|r|² = {total}"
                );
            }
        }
    }

    #[test]
    fn continuous_across_barrier_top() {
        let at = barrier_amplitudes(energy(1.0), 1.0, 2.0).transmitted;
        let above = barrier_amplitudes(energy(1.0), 1.0 + 1e-8, 2.0).transmitted;
        let below = barrier_amplitudes(energy(1.0), 1.0 - 1e-8, 2.0).transmitted;
        assert!((above - at).norm() < 1e-6);
        assert!((below - at).norm() < 1e-6);
    }

    #[test]
    fn load_reflection_cases() {
        let e = energy(1.0);
        assert_eq!(
            branch_load_reflection(e, &BranchSpec::free()),
            Complex64::new(0.0, 0.0)
        );
        let zero_w =
            BranchSpec::with_barrier(BarrierSpec::new(5.0, 0.0, 2.0).unwrap());
        assert!(branch_load_reflection(e, &zero_w).norm() < 1e-15);
        let bar = BranchSpec::with_barrier(BarrierSpec::new(5.0, 1.0, 0.0).unwrap());
        let rho = branch_load_reflection(e, &bar);
        let amps = barrier_amplitudes(e, 5.0, 1.0);
        assert_eq!(rho, amps.reflected);
        assert!((rho.norm_sqr() - 0.9536).abs() < 1e-4);
    }

    #[test]
    fn free_star_composition() {
        let net = NetworkSpec::identical(BranchSpec::free(), 2).unwrap();
        let (r, ts) = compose_star(&net, energy(1.0)).unwrap();
        assert!((r - Complex64::new(-1.0 / 3.0, 0.0)).norm() < 1e-15);
        for t in ts {
            assert!((t - Complex64::new(2.0 / 3.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn two_lead_junction_is_transparent() {
        // N = 1: t_1 = e^{ik·lb} t̄ exactly.
        let e = energy(1.0);
        let bar = BarrierSpec::new(5.0, 1.0, 3.0).unwrap();
        let net = NetworkSpec::new(vec![BranchSpec::with_barrier(bar)]).unwrap();
        let (_, ts) = compose_star(&net, e).unwrap();
        let amps = barrier_amplitudes(e, 5.0, 1.0);
        let expect = (I * e.wavenumber() * 3.0).exp() * amps.transmitted;
        assert!((ts[0] - expect).norm() < 1e-14);
    }

    #[test]
    fn closed_form_phase_time_matches_finite_differences() {
        for (v, w, e) in [
            (5.0, 1.0, 1.0),
            (5.0, 60.0, 1.0),
            (0.73, 10.87, 0.95),
            (2.0, 3.0, 4.0),
            (-1.5, 2.0, 1.3),
        ] {
            let energy = Energy::new(e).unwrap();
            let tau = barrier_phase_time(energy, v, w).unwrap();
            let h = 1e-6 * e.max(1.0);
            let mut dphi = barrier_phase(Energy::new(e + h).unwrap(), v, w)
                - barrier_phase(Energy::new(e - h).unwrap(), v, w);
            while dphi > std::f64::consts::PI {
                dphi -= 2.0 * std::f64::consts::PI;
            }
            while dphi <= -std::f64::consts::PI {
                dphi += 2.0 * std::f64::consts::PI;
            }
            let fd = dphi / (2.0 * h);
            assert!(
                (tau - fd).abs() < 1e-5 * tau.abs().max(1.0),
                "V={v} w={w} E={e}: closed {tau} vs fd {fd}"
            );
        }
    }

    #[test]
    fn closed_form_phase_time_opaque_limit() {
        // Saturates to 1/(kκ) = 0.5 for V = 5, E = 1.
        let tau = barrier_phase_time(Energy::new(1.0).unwrap(), 5.0, 60.0).unwrap();
        assert_relative_eq!(tau, 0.5, epsilon = 1e-10);
        let limit = opaque_phase_time_limit(Energy::new(1.0).unwrap(), 5.0).unwrap();
        assert_relative_eq!(limit, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn junction_smatrix_small_cases() {
        assert!(junction_smatrix(1).is_err());
        let s2 = junction_smatrix(2).unwrap();
        assert_eq!(s2.matrix[(0, 0)], 0.0);
        assert_eq!(s2.matrix[(0, 1)], 1.0);
        assert_eq!(s2.matrix[(1, 0)], 1.0);
        assert_eq!(s2.matrix[(1, 1)], 0.0);
        let s3 = junction_smatrix(3).unwrap();
        assert_relative_eq!(s3.matrix[(0, 0)], -1.0 / 3.0);
        assert_relative_eq!(s3.matrix[(0, 1)], 2.0 / 3.0);
    }

    #[test]
    fn junction_smatrix_unitary_and_symmetric() {
        for leads in [2, 3, 7, 10] {
            let s = junction_smatrix(leads).unwrap();
            let product = &s.matrix * s.matrix.transpose();
            for i in 0..leads {
                for j in 0..leads {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((product[(i, j)] - expect).abs() < 1e-14);
                }
                let row_sum: f64 = s.matrix.row(i).iter().sum();
                assert!((row_sum - 1.0).abs() < 1e-14);
            }
        }
    }
}
