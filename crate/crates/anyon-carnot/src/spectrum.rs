//! Exact relative-motion spectrum of two anyons in a 2D harmonic trap.
//!
//! After separating the centre of mass, the interacting pair reduces to one
//! planar particle whose exchange phase is set by the statistics parameter
//! `nu`: 0 is bosonic, 1 fermionic, intermediate values interpolate
//! continuously. The bound spectrum splits into two ladders,
//!
//! ```text
//! class I : E = (2 + nu + j + k + 2l + 2m) ħω
//! class II: E = (4 - nu + j + k + 2l + 2m) ħω      j, k, l, m ≥ 0
//! ```
//!
//! so every level moves linearly in `nu` with slope +1 (class I) or -1
//! (class II), and the map `nu ↔ 2 - nu` exchanges the ladders level by
//! level. Energies are kept in units of ħω throughout the crate;
//! [`EnergyScale`] converts only at reporting boundaries.

use std::fmt;

use crate::{require_finite, require_positive, Error, Result};

/// Statistics parameter of the pair. The physically distinct range is
/// `[0, 1]`; the spectrum formulas extend smoothly to `[0, 2]`, where
/// `nu` and `2 - nu` describe the same ladder set with classes swapped,
/// and this type accepts the full closed interval.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct StatisticsParameter(f64);

impl StatisticsParameter {
    /// Bosonic endpoint.
    pub const BOSE: Self = StatisticsParameter(0.0);
    /// Fermionic endpoint.
    pub const FERMI: Self = StatisticsParameter(1.0);

    pub fn new(nu: f64) -> Result<Self> {
        Self::new_named("nu", nu)
    }

    /// Same validation, but diagnostics cite `field` (`nu_a`, ...).
    pub fn new_named(field: &'static str, nu: f64) -> Result<Self> {
        require_finite(field, nu)?;
        if (0.0..=2.0).contains(&nu) {
            Ok(StatisticsParameter(nu))
        } else {
            Err(Error::domain(
                field,
                format!("statistics parameter must lie in [0, 2], got {nu}"),
            ))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// The partner `2 - nu` under the ladder-swap symmetry.
    pub fn conjugate(self) -> Self {
        StatisticsParameter(2.0 - self.0)
    }
}

impl fmt::Display for StatisticsParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Physical scales: the level spacing ħω and Boltzmann's constant. The
/// default is natural units (both 1), in which temperatures are measured
/// in units of ħω/k_B and heats in units of ħω.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyScale {
    hbar_omega: f64,
    k_b: f64,
}

impl EnergyScale {
    pub const fn natural() -> Self {
        EnergyScale {
            hbar_omega: 1.0,
            k_b: 1.0,
        }
    }

    pub fn new(hbar_omega: f64, k_b: f64) -> Result<Self> {
        require_positive("hbar_omega", hbar_omega)?;
        require_positive("k_b", k_b)?;
        Ok(EnergyScale { hbar_omega, k_b })
    }

    pub fn hbar_omega(self) -> f64 {
        self.hbar_omega
    }

    pub fn k_b(self) -> f64 {
        self.k_b
    }
}

impl Default for EnergyScale {
    fn default() -> Self {
        EnergyScale::natural()
    }
}

/// Which of the two ladders a level belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LevelClass {
    I,
    II,
}

impl LevelClass {
    /// Ground-level energy of the ladder in units of ħω.
    ///
    /// Class II is written as `2 + (2 - nu)` rather than `4 - nu`: the two
    /// are equal in exact arithmetic, and this form makes the swap
    /// `nu ↔ 2 - nu` map the ladders onto each other bit for bit.
    pub fn ground_offset(self, nu: StatisticsParameter) -> f64 {
        match self {
            LevelClass::I => 2.0 + nu.value(),
            LevelClass::II => 2.0 + nu.conjugate().value(),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            LevelClass::I => "I",
            LevelClass::II => "II",
        }
    }
}

impl fmt::Display for LevelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One eigenstate of the relative motion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LevelIndex {
    pub class: LevelClass,
    pub j: u32,
    pub k: u32,
    pub l: u32,
    pub m: u32,
}

impl LevelIndex {
    /// Total excitation above the ladder ground, `n = j + k + 2l + 2m`.
    pub fn excitation(&self) -> u32 {
        self.j + self.k + 2 * self.l + 2 * self.m
    }

    /// Energy in units of ħω.
    pub fn energy(&self, nu: StatisticsParameter) -> f64 {
        self.class.ground_offset(nu) + f64::from(self.excitation())
    }

    /// The level this one maps to under `nu ↔ 2 - nu` (classes swap,
    /// quantum numbers stay).
    pub fn swapped(&self) -> LevelIndex {
        LevelIndex {
            class: match self.class {
                LevelClass::I => LevelClass::II,
                LevelClass::II => LevelClass::I,
            },
            ..*self
        }
    }
}

/// Number of states with total excitation `n` within one ladder:
/// the count of `(j, k, l, m) ≥ 0` with `j + k + 2l + 2m = n`. Summing
/// over the even part `2(l + m) = 2t` leaves `t + 1` splittings of the
/// pair `(l, m)` times `n - 2t + 1` splittings of `(j, k)`, and the
/// resulting `Σ (t+1)(n-2t+1)` telescopes to a cubic in `m = ⌊n/2⌋ + 1`.
pub fn degeneracy(n: u32) -> u64 {
    let m = u128::from(n / 2 + 1);
    // 3n + 7 - 4m is n + 3 for even n, n + 5 for odd: never negative
    let g = m * (m + 1) * (3 * u128::from(n) + 7 - 4 * m) / 6;
    u64::try_from(g).expect("degeneracy exceeds u64 beyond n ~ 5e6")
}

/// Total number of levels (both ladders) with excitation `≤ n_max`.
/// Useful for sizing enumerations before allocating.
pub fn level_count_through_excitation(n_max: u32) -> u128 {
    2 * (0..=n_max).map(|n| u128::from(degeneracy(n))).sum::<u128>()
}

/// All levels with energy `≤ e_max` (in units of ħω), in the canonical
/// order: class I before class II, excitation ascending, then `(j, k, l,
/// m)` lexicographic. The order is part of the contract; emitters and
/// goldens rely on it.
pub fn enumerate_levels(nu: StatisticsParameter, e_max: f64) -> Result<Vec<LevelIndex>> {
    require_finite("e_max", e_max)?;
    let mut out = Vec::new();
    for class in [LevelClass::I, LevelClass::II] {
        let budget = e_max - class.ground_offset(nu);
        if budget < 0.0 {
            continue;
        }
        let n_top = budget.floor().min(u32::MAX as f64) as u32;
        for n in 0..=n_top {
            push_excitation_block(&mut out, class, n);
        }
    }
    Ok(out)
}

/// All levels of both ladders with excitation `≤ n_max`, same canonical
/// order as [`enumerate_levels`]. This variant is `nu`-independent.
pub fn levels_through_excitation(n_max: u32) -> Vec<LevelIndex> {
    let mut out = Vec::new();
    for class in [LevelClass::I, LevelClass::II] {
        for n in 0..=n_max {
            push_excitation_block(&mut out, class, n);
        }
    }
    out
}

/// Appends every `(j, k, l, m)` with `j + k + 2l + 2m = n` in
/// lexicographic order. For fixed `(j, k)` the remainder must be even and
/// is split between `l` (ascending) and `m` (determined).
fn push_excitation_block(out: &mut Vec<LevelIndex>, class: LevelClass, n: u32) {
    for j in 0..=n {
        for k in 0..=(n - j) {
            let rest = n - j - k;
            if !rest.is_multiple_of(2) {
                continue;
            }
            for l in 0..=(rest / 2) {
                let m = rest / 2 - l;
                out.push(LevelIndex { class, j, k, l, m });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Brute-force count of quadruples with j + k + 2l + 2m = n.
    fn degeneracy_exhaustive(n: u32) -> u64 {
        let mut count = 0;
        for j in 0..=n {
            for k in 0..=n {
                for l in 0..=n {
                    for m in 0..=n {
                        if j + k + 2 * l + 2 * m == n {
                            count += 1;
                        }
                    }
                }
            }
        }
        count
    }

    #[test]
    fn degeneracy_matches_exhaustive_count() {
        for n in 0..=12 {
            assert_eq!(degeneracy(n), degeneracy_exhaustive(n), "n = {n}");
        }
        // first few values, frozen
        let expected = [1, 2, 5, 8, 14, 20, 30, 40, 55];
        for (n, want) in expected.iter().enumerate() {
            assert_eq!(degeneracy(n as u32), *want);
        }
    }

    #[test]
    fn degeneracy_closed_form_matches_the_defining_sum() {
        // the production closed form against the literal sum it replaces
        let by_sum = |n: u32| -> u64 {
            (0..=n / 2)
                .map(|t| u64::from(t + 1) * u64::from(n - 2 * t + 1))
                .sum()
        };
        for n in [13, 100, 101, 999, 1000, 54321] {
            assert_eq!(degeneracy(n), by_sum(n), "n = {n}");
        }
    }

    #[test]
    fn ground_energies_interpolate_bose_to_fermi() {
        let ground = LevelIndex {
            class: LevelClass::I,
            j: 0,
            k: 0,
            l: 0,
            m: 0,
        };
        assert_eq!(ground.energy(StatisticsParameter::BOSE), 2.0);
        assert_eq!(ground.energy(StatisticsParameter::FERMI), 3.0);
        let second = LevelIndex {
            class: LevelClass::II,
            ..ground
        };
        assert_eq!(second.energy(StatisticsParameter::BOSE), 4.0);
        assert_eq!(second.energy(StatisticsParameter::FERMI), 3.0);
        // at the fermionic point the two ladder grounds are degenerate
        let nu = StatisticsParameter::new(0.5).unwrap();
        assert_eq!(ground.energy(nu), 2.5);
        assert_eq!(second.energy(nu), 3.5);
    }

    #[test]
    fn levels_move_linearly_with_unit_slope() {
        let level = LevelIndex {
            class: LevelClass::I,
            j: 1,
            k: 0,
            l: 2,
            m: 0,
        };
        let e0 = level.energy(StatisticsParameter::new(0.2).unwrap());
        let e1 = level.energy(StatisticsParameter::new(0.7).unwrap());
        assert!((e1 - e0 - 0.5).abs() < 1e-15);
        let mirrored = level.swapped();
        let f0 = mirrored.energy(StatisticsParameter::new(0.2).unwrap());
        let f1 = mirrored.energy(StatisticsParameter::new(0.7).unwrap());
        assert!((f1 - f0 + 0.5).abs() < 1e-15);
    }

    #[test]
    fn swap_symmetry_is_bit_exact() {
        for nu_raw in [0.0, 0.1, 0.3, 0.5, 0.77, 1.0, 1.31, 2.0] {
            let nu = StatisticsParameter::new(nu_raw).unwrap();
            for level in levels_through_excitation(5) {
                let direct = level.energy(nu);
                let swapped = level.swapped().energy(nu.conjugate());
                assert_eq!(direct.to_bits(), swapped.to_bits(), "nu = {nu_raw}");
            }
        }
    }

    #[test]
    fn enumeration_is_complete_sorted_and_duplicate_free() {
        let nu = StatisticsParameter::new(0.5).unwrap();
        let e_max = 10.0;
        let levels = enumerate_levels(nu, e_max).unwrap();

        // no duplicates
        let set: HashSet<_> = levels.iter().copied().collect();
        assert_eq!(set.len(), levels.len());

        // canonical order: class, then excitation, then lexicographic index
        for pair in levels.windows(2) {
            let key = |lv: &LevelIndex| (lv.class, lv.excitation(), lv.j, lv.k, lv.l, lv.m);
            assert!(
                key(&pair[0]) < key(&pair[1]),
                "{:?} !< {:?}",
                pair[0],
                pair[1]
            );
        }

        // every enumerated level is within budget, and nothing is missing:
        // cross-check against a brute-force quadruple scan
        let mut brute = Vec::new();
        for class in [LevelClass::I, LevelClass::II] {
            for j in 0..=12 {
                for k in 0..=12 {
                    for l in 0..=6 {
                        for m in 0..=6 {
                            let lv = LevelIndex { class, j, k, l, m };
                            if lv.energy(nu) <= e_max {
                                brute.push(lv);
                            }
                        }
                    }
                }
            }
        }
        assert_eq!(set, brute.into_iter().collect::<HashSet<_>>());

        // per-excitation block sizes match the degeneracy formula
        for n in 0..=7 {
            let in_class_one = levels
                .iter()
                .filter(|lv| lv.class == LevelClass::I && lv.excitation() == n)
                .count();
            assert_eq!(in_class_one as u64, degeneracy(n));
        }
    }

    #[test]
    fn enumeration_respects_energy_budget_edges() {
        // e_max = 2.5 at nu = 0: only the class-I ground fits
        let levels = enumerate_levels(StatisticsParameter::BOSE, 2.5).unwrap();
        assert_eq!(levels.len(), 1);
        assert_eq!(levels[0].class, LevelClass::I);
        assert_eq!(levels[0].excitation(), 0);

        // e_max = 3.0 at nu = 1: both ladder grounds, exactly at the edge
        let levels = enumerate_levels(StatisticsParameter::FERMI, 3.0).unwrap();
        assert_eq!(levels.len(), 2);
        assert!(levels
            .iter()
            .all(|lv| lv.energy(StatisticsParameter::FERMI) == 3.0));

        // below every ground: empty
        let levels = enumerate_levels(StatisticsParameter::BOSE, 1.9).unwrap();
        assert!(levels.is_empty());
    }

    #[test]
    fn level_count_matches_enumeration() {
        for n_max in [0, 1, 4, 9] {
            let count = level_count_through_excitation(n_max);
            assert_eq!(count, levels_through_excitation(n_max).len() as u128);
        }
    }

    #[test]
    fn parameter_validation_rejects_out_of_range() {
        assert!(StatisticsParameter::new(-0.1).is_err());
        assert!(StatisticsParameter::new(2.1).is_err());
        assert!(StatisticsParameter::new(f64::NAN).is_err());
        assert!(StatisticsParameter::new(2.0).is_ok());
        let err = StatisticsParameter::new_named("nu_b", 3.0).unwrap_err();
        assert!(err.to_string().starts_with("nu_b:"), "{err}");

        assert!(EnergyScale::new(0.0, 1.0).is_err());
        assert!(EnergyScale::new(1.0, -2.0).is_err());
        assert!(EnergyScale::new(6.6e-34, 1.4e-23).is_ok());
    }
}
