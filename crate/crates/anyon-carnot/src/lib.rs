//! Thermodynamics of a two-anyon working medium driven through a
//! Carnot-type cycle.
//!
//! Two particles with fractional exchange statistics in a two-dimensional
//! harmonic trap have an exactly solvable relative-motion spectrum that
//! splits into two equally spaced ladders. Sweeping the statistics
//! parameter shifts the ladders linearly, which lets the statistics play
//! the role the volume plays in a gas engine: the four-stroke cycle
//! modeled here couples the pair to hot and cold baths at fixed statistics
//! and ramps the statistics in between, with populations frozen during the
//! ramps.
//!
//! Module map:
//!
//! - [`spectrum`]: exact levels, degeneracies, deterministic enumeration
//! - [`statmech`]: closed-form partition function, mean and cross energies,
//!   entropy; [`statmech::series`] re-derives them by direct Boltzmann sums
//!   with certified truncation tails
//! - [`cycle`]: heats, work, efficiency and flags for one cycle
//! - [`sweep`]: deterministic parameter grids and optimum refinement
//! - [`verify`]: closed-form vs series cross-checks over a grid
//! - [`report`]: CSV/JSON emission with exact round-trip float formatting
//! - [`cli`]: command-line front end

pub mod cli;
pub mod cycle;
pub mod report;
pub mod spectrum;
pub mod statmech;
pub mod sweep;
pub mod verify;

pub use cycle::{
    bath_heats, classical_efficiency, heat_in, heat_out, run_cycle, CycleConfig, CycleFlags,
    CycleReport, CycleRow, HeatExchange,
};
pub use spectrum::{EnergyScale, LevelClass, LevelIndex, StatisticsParameter};
pub use statmech::{InverseTemperature, ThermalPoint};
pub use sweep::{refine_optimum, run_sweep, Objective, ParamAxis, SweepResult, SweepSpec};
pub use verify::{run_verify, Quantity, VerifyReport, VerifySpec};

/// Library-wide error type.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A parameter failed domain validation. `field` is the name the
    /// parameter carries in config files and CSV headers, so diagnostics
    /// can cite it verbatim.
    #[error("{field}: {message}")]
    Domain {
        field: &'static str,
        message: String,
    },
    /// A grid or enumeration would exceed a resource cap.
    #[error("{what} would produce {size} items, exceeding the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        size: u128,
        cap: u64,
    },
    /// Refinement needs exactly one ranged parameter to bracket.
    #[error("refinement requires exactly one ranged parameter, found {0}")]
    RefineNeedsSingleRange(usize),
    /// Refinement without an objective has nothing to improve.
    #[error("refinement requires an objective other than none")]
    RefineNeedsObjective,
    /// No grid point produced a row admissible under the objective.
    #[error("no grid point satisfied the objective")]
    NoAdmissibleRow,
}

impl Error {
    pub(crate) fn domain(field: &'static str, message: impl Into<String>) -> Self {
        Error::Domain {
            field,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Rejects NaN and infinities up front so the physics code never sees them.
pub(crate) fn require_finite(field: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::domain(field, format!("must be finite, got {value}")))
    }
}

/// Finite and strictly positive.
pub(crate) fn require_positive(field: &'static str, value: f64) -> Result<f64> {
    require_finite(field, value)?;
    if value > 0.0 {
        Ok(value)
    } else {
        Err(Error::domain(
            field,
            format!("must be strictly positive, got {value}"),
        ))
    }
}
