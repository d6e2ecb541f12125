//! Canonical-ensemble quantities for the two-anyon spectrum.
//!
//! Everything depends on temperature only through the dimensionless
//! combination `x = βħω`. Geometric resummation of the two ladders gives
//! closed forms,
//!
//! ```text
//! Z(nu, x)        = cosh((1 - nu)x) / (8 sinh²(x/2) sinh²x)
//! E(nu, nu', x)   = 3 coth x + 1/sinh x + (nu - 1) tanh((1 - nu')x)
//! S(nu, x)        = x·E(nu, nu, x) + ln Z(nu, x)
//! ```
//!
//! `E(nu, nu', x)` is the cross energy: the mean energy of the
//! `nu`-spectrum carrying the Boltzmann populations of a `nu'`-equilibrium
//! at `x`, the situation right after a sudden statistics ramp. The
//! diagonal `nu' = nu` is the thermal mean energy `-∂ ln Z/∂x`. Energies
//! are in units of ħω, entropy in units of k_B.
//!
//! Evaluation is log-space throughout (`ln cosh`, `ln sinh` written
//! overflow-free), so the forms stay usable deep in the quantum regime
//! where `Z` itself underflows. The [`series`] module recomputes every
//! quantity by direct summation over the ladders with certified tail
//! bounds; [`crate::verify`] confronts the two paths.

pub mod series;

use std::f64::consts::LN_2;

use crate::spectrum::{EnergyScale, LevelIndex, StatisticsParameter};
use crate::{require_positive, Result};

/// Inverse temperature as the dimensionless `x = βħω = ħω/(k_B T)`.
/// Strictly positive and finite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct InverseTemperature(f64);

impl InverseTemperature {
    pub fn new(x: f64) -> Result<Self> {
        require_positive("beta", x)?;
        Ok(InverseTemperature(x))
    }

    /// From a physical temperature and scale, `x = ħω/(k_B T)`.
    pub fn from_temperature(t: f64, scale: EnergyScale) -> Result<Self> {
        require_positive("temperature", t)?;
        let x = scale.hbar_omega() / (scale.k_b() * t);
        require_positive("temperature", x)?;
        Ok(InverseTemperature(x))
    }

    pub fn x(self) -> f64 {
        self.0
    }
}

// ---- overflow-free hyperbolic helpers -------------------------------------

/// ln cosh u = |u| + ln(1 + e^(-2|u|)) - ln 2, exact for any magnitude.
fn ln_cosh(u: f64) -> f64 {
    let a = u.abs();
    a + (-2.0 * a).exp().ln_1p() - LN_2
}

/// ln sinh u = u + ln(1 - e^(-2u)) - ln 2 for u > 0.
fn ln_sinh(u: f64) -> f64 {
    u + (-(-2.0 * u).exp()).ln_1p() - LN_2
}

/// 1/sinh x = 2 e^(-x) / (1 - e^(-2x)), stable for tiny and huge x > 0.
fn inv_sinh(x: f64) -> f64 {
    2.0 * (-x).exp() / (-(-2.0 * x).exp_m1())
}

// ---- closed forms ----------------------------------------------------------

/// ln Z(nu, x), evaluated as
/// `ln cosh((1 - nu)x) - ln 8 - 2 ln sinh(x/2) - 2 ln sinh x`.
pub fn log_partition_closed(nu: StatisticsParameter, beta: InverseTemperature) -> f64 {
    let x = beta.x();
    ln_cosh((1.0 - nu.value()) * x) - 3.0 * LN_2 - 2.0 * ln_sinh(0.5 * x) - 2.0 * ln_sinh(x)
}

/// Z(nu, x). Underflows to 0 for x beyond roughly 300 even though the
/// exact value is positive; [`log_partition_closed`] is the robust form.
pub fn partition_closed(nu: StatisticsParameter, beta: InverseTemperature) -> f64 {
    log_partition_closed(nu, beta).exp()
}

/// Cross energy E(nu, nu', x) in units of ħω: the `nu`-spectrum averaged
/// over populations frozen from a `nu'`-equilibrium at the same `x`.
pub fn cross_mean_energy_closed(
    nu: StatisticsParameter,
    nu_prime: StatisticsParameter,
    beta: InverseTemperature,
) -> f64 {
    let x = beta.x();
    3.0 / x.tanh() + inv_sinh(x) + (nu.value() - 1.0) * ((1.0 - nu_prime.value()) * x).tanh()
}

/// Thermal mean energy ⟨E⟩ = -∂ ln Z/∂x in units of ħω.
pub fn mean_energy_closed(nu: StatisticsParameter, beta: InverseTemperature) -> f64 {
    cross_mean_energy_closed(nu, nu, beta)
}

/// Entropy S = x·⟨E⟩ + ln Z in units of k_B.
pub fn entropy_closed(nu: StatisticsParameter, beta: InverseTemperature) -> f64 {
    beta.x() * mean_energy_closed(nu, beta) + log_partition_closed(nu, beta)
}

/// Thermal occupation probability of one level, e^(-xE)/Z, evaluated as
/// exp(-xE - ln Z) so numerator and denominator underflow together.
pub fn occupation(level: &LevelIndex, nu: StatisticsParameter, beta: InverseTemperature) -> f64 {
    (-beta.x() * level.energy(nu) - log_partition_closed(nu, beta)).exp()
}

/// One equilibrium state of the medium: everything the cycle needs about
/// a (nu, x) corner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalPoint {
    pub nu: StatisticsParameter,
    pub beta: InverseTemperature,
    pub log_z: f64,
    /// exp(log_z); may underflow to 0 deep in the quantum regime.
    pub z: f64,
    /// Units of ħω.
    pub mean_energy: f64,
    /// Units of k_B.
    pub entropy: f64,
}

/// Evaluates all closed-form quantities at one (nu, x) point.
pub fn thermal_point(nu: StatisticsParameter, beta: InverseTemperature) -> ThermalPoint {
    let log_z = log_partition_closed(nu, beta);
    let mean_energy = mean_energy_closed(nu, beta);
    ThermalPoint {
        nu,
        beta,
        log_z,
        z: log_z.exp(),
        mean_energy,
        entropy: beta.x() * mean_energy + log_z,
    }
}

#[cfg(test)]
mod tests {
    // frozen reference digits are kept at full oracle length
    #![allow(clippy::excessive_precision)]

    use super::*;
    use crate::spectrum::enumerate_levels;
    use proptest::prelude::*;

    fn nu(v: f64) -> StatisticsParameter {
        StatisticsParameter::new(v).unwrap()
    }

    fn x(v: f64) -> InverseTemperature {
        InverseTemperature::new(v).unwrap()
    }

    fn rel_err(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    // Reference values computed with a 50-digit arbitrary-precision
    // pipeline (independent summation over the ladders).
    #[test]
    fn partition_matches_high_precision_references() {
        assert!(rel_err(partition_closed(nu(1.0), x(1.0)), 0.333_312_225_914_958_51) < 1e-15);
        assert!(rel_err(partition_closed(nu(0.0), x(1.0)), 0.514_327_641_156_536_13) < 1e-15);
        assert!(rel_err(partition_closed(nu(0.5), x(1.0)), 0.375_851_520_462_442_34) < 1e-15);
        assert!(rel_err(partition_closed(nu(0.5), x(0.25)), 125.691_033_172_091_96) < 1e-15);
        assert!(
            (log_partition_closed(nu(0.5), x(1.0)) - (-0.978_561_105_969_895_27)).abs() < 1e-14
        );
    }

    #[test]
    fn energies_match_high_precision_references() {
        assert!(rel_err(mean_energy_closed(nu(0.5), x(1.0)), 4.558_965_406_107_310_6) < 1e-15);
        assert!(rel_err(mean_energy_closed(nu(0.0), x(1.0)), 4.028_429_828_781_550_6) < 1e-15);
        assert!(rel_err(mean_energy_closed(nu(1.0), x(0.5)), 8.410_894_992_550_902_3) < 1e-15);
        assert!(
            rel_err(
                cross_mean_energy_closed(nu(0.25), nu(0.75), x(2.0)),
                3.041_076_859_009_420_2
            ) < 1e-15
        );
    }

    #[test]
    fn entropy_matches_high_precision_references() {
        assert!(rel_err(entropy_closed(nu(0.5), x(1.0)), 3.580_404_300_137_415_3) < 5e-15);
        assert!(rel_err(entropy_closed(nu(1.0), x(1.0)), 3.691_348_371_809_142_7) < 5e-15);
    }

    #[test]
    fn mean_energy_is_log_partition_slope() {
        // central difference in x; the identity ⟨E⟩ = -∂ ln Z/∂x
        for nu_v in [0.0, 0.3, 0.5, 1.0, 1.6] {
            for x_v in [0.3, 1.0, 2.5, 6.0] {
                let h = 1e-6 * x_v;
                let up = log_partition_closed(nu(nu_v), x(x_v + h));
                let down = log_partition_closed(nu(nu_v), x(x_v - h));
                let slope = -(up - down) / (2.0 * h);
                let direct = mean_energy_closed(nu(nu_v), x(x_v));
                assert!(
                    rel_err(slope, direct) < 1e-9,
                    "nu = {nu_v}, x = {x_v}: {slope} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn deep_quantum_limits() {
        let cold = x(20.0);
        // bosonic ground 2ħω, fermionic ground 3ħω
        let e_bose = mean_energy_closed(StatisticsParameter::BOSE, cold);
        let e_fermi = mean_energy_closed(StatisticsParameter::FERMI, cold);
        assert!((2.0..2.0 + 1e-6).contains(&e_bose), "{e_bose}");
        assert!((3.0..3.0 + 1e-6).contains(&e_fermi), "{e_fermi}");
        // generic nu: ground at 2 + nu (for nu <= 1)
        let e_half = mean_energy_closed(nu(0.5), cold);
        assert!((e_half - 2.5).abs() < 1e-6, "{e_half}");

        // fermionic point: the two ladder grounds are degenerate, S -> ln 2;
        // elsewhere the ground is unique and S -> 0
        let s_fermi = entropy_closed(StatisticsParameter::FERMI, cold);
        assert!((s_fermi - LN_2).abs() < 1e-6, "{s_fermi}");
        let s_half = entropy_closed(nu(0.5), cold);
        assert!(s_half.abs() < 1e-6, "{s_half}");
        let s_bose = entropy_closed(StatisticsParameter::BOSE, cold);
        assert!(s_bose.abs() < 1e-6, "{s_bose}");
    }

    #[test]
    fn energy_and_entropy_grow_with_temperature() {
        for nu_v in [0.0, 0.5, 1.0] {
            let mut last_e = 0.0;
            let mut last_s = 0.0;
            // x descending = temperature ascending
            for x_v in [8.0, 4.0, 2.0, 1.0, 0.5, 0.25] {
                let e = mean_energy_closed(nu(nu_v), x(x_v));
                let s = entropy_closed(nu(nu_v), x(x_v));
                assert!(e > last_e, "nu = {nu_v}, x = {x_v}");
                assert!(s > last_s, "nu = {nu_v}, x = {x_v}");
                last_e = e;
                last_s = s;
            }
        }
    }

    #[test]
    fn occupations_normalize_and_obey_boltzmann_ratios() {
        let nu_v = nu(0.3);
        let beta = x(2.0);
        // excitation cutoff 40 at x = 2 leaves a tail < e^-80 of the norm
        let levels = enumerate_levels(nu_v, 2.3 + 40.0).unwrap();
        let total: f64 = levels.iter().map(|lv| occupation(lv, nu_v, beta)).sum();
        assert!((total - 1.0).abs() < 1e-12, "sum p = {total}");

        let ground = levels[0];
        let p0 = occupation(&ground, nu_v, beta);
        for lv in &levels {
            let expect = p0
                * (-beta.x() * f64::from(lv.excitation())).exp()
                * (-beta.x() * (lv.class.ground_offset(nu_v) - ground.energy(nu_v))).exp();
            assert!((occupation(lv, nu_v, beta) - expect).abs() < 1e-15 * p0);
        }
    }

    #[test]
    fn swap_symmetry_of_closed_forms() {
        for nu_v in [0.0, 0.2, 0.5, 0.9, 1.0, 1.4, 2.0] {
            let a = nu(nu_v);
            let b = a.conjugate();
            for x_v in [0.25, 1.0, 4.0] {
                let beta = x(x_v);
                assert!(rel_err(partition_closed(a, beta), partition_closed(b, beta)) < 1e-13);
                assert!(rel_err(mean_energy_closed(a, beta), mean_energy_closed(b, beta)) < 1e-13);
                assert!(rel_err(entropy_closed(a, beta), entropy_closed(b, beta)) < 1e-13);
            }
        }
    }

    #[test]
    fn thermal_point_is_self_consistent() {
        let pt = thermal_point(nu(0.7), x(1.3));
        assert_eq!(pt.log_z, log_partition_closed(nu(0.7), x(1.3)));
        assert!((pt.z - pt.log_z.exp()).abs() == 0.0);
        assert!((pt.entropy - (1.3 * pt.mean_energy + pt.log_z)).abs() < 1e-15);
    }

    proptest! {
        // The cross energy is an average over the nu-spectrum, so it can
        // never drop below the lower of the two ladder grounds.
        #[test]
        fn cross_energy_never_below_ground(
            nu_v in 0.0..=2.0f64,
            nup_v in 0.0..=2.0f64,
            x_v in 0.05..=12.0f64,
        ) {
            let e = cross_mean_energy_closed(nu(nu_v), nu(nup_v), x(x_v));
            let floor = (2.0 + nu_v).min(4.0 - nu_v);
            prop_assert!(e >= floor - 1e-12, "E = {e}, floor = {floor}");
        }

        #[test]
        fn partition_is_positive_and_swap_symmetric(
            nu_v in 0.0..=1.0f64,
            x_v in 0.05..=12.0f64,
        ) {
            let beta = x(x_v);
            let z = partition_closed(nu(nu_v), beta);
            prop_assert!(z > 0.0);
            let z_swapped = partition_closed(nu(nu_v).conjugate(), beta);
            prop_assert!(rel_err(z, z_swapped) < 1e-12);
        }
    }
}
