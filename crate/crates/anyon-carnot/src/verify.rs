//! Closed-form vs truncated-series cross-checks over a parameter grid.
//!
//! For each grid point the closed form and the series oracle (at an
//! adaptively chosen cutoff) are evaluated side by side. A point passes
//! when the relative discrepancy is within the requested tolerance; the
//! certified relative tail bound is reported alongside so a failure can
//! be attributed to truncation (rel_err of order tail_bound) or to a
//! genuine disagreement (rel_err far above it).

use crate::spectrum::StatisticsParameter;
use crate::statmech::series::{
    adaptive_cutoff, cross_mean_energy_truncated, entropy_truncated, partition_truncated,
};
use crate::statmech::{
    cross_mean_energy_closed, entropy_closed, mean_energy_closed, partition_closed,
    InverseTemperature,
};
use crate::{require_positive, Error, Result};

/// Which quantity a verification row checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Partition,
    MeanEnergy,
    CrossMeanEnergy,
    Entropy,
}

impl Quantity {
    pub const ALL: [Quantity; 4] = [
        Quantity::Partition,
        Quantity::MeanEnergy,
        Quantity::CrossMeanEnergy,
        Quantity::Entropy,
    ];

    /// Wire name used in tables and CLI flags.
    pub fn label(self) -> &'static str {
        match self {
            Quantity::Partition => "partition",
            Quantity::MeanEnergy => "mean_energy",
            Quantity::CrossMeanEnergy => "cross_mean_energy",
            Quantity::Entropy => "entropy",
        }
    }

    pub fn parse(label: &str) -> Result<Self> {
        match label {
            "partition" => Ok(Quantity::Partition),
            "mean_energy" => Ok(Quantity::MeanEnergy),
            "cross_mean_energy" => Ok(Quantity::CrossMeanEnergy),
            "entropy" => Ok(Quantity::Entropy),
            other => Err(Error::domain(
                "quantity",
                format!(
                    "expected partition, mean_energy, cross_mean_energy or entropy, got {other:?}"
                ),
            )),
        }
    }
}

/// Grid and tolerances for a verification run.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifySpec {
    pub quantities: Vec<Quantity>,
    pub nu_grid: Vec<f64>,
    /// Second statistics axis, used by the cross energy only.
    pub nu_prime_grid: Vec<f64>,
    /// Values of x = βħω.
    pub x_grid: Vec<f64>,
    /// Relative agreement demanded of each row.
    pub tolerance: f64,
    /// Relative tail target handed to the adaptive cutoff search.
    pub tail_tol: f64,
}

impl Default for VerifySpec {
    fn default() -> Self {
        VerifySpec {
            quantities: Quantity::ALL.to_vec(),
            nu_grid: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            nu_prime_grid: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            x_grid: vec![0.25, 0.5, 1.0, 2.0, 4.0],
            tolerance: 1e-9,
            tail_tol: 1e-12,
        }
    }
}

/// One grid-point comparison. For the diagonal quantities `nu_prime`
/// repeats `nu`, keeping the tabular output fully numeric. `tail_bound`
/// is the certified truncation error relative to the closed value, so it
/// compares directly against `rel_err` when diagnosing a failed row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyRow {
    pub quantity: Quantity,
    pub nu: f64,
    pub nu_prime: f64,
    pub x: f64,
    pub closed: f64,
    pub truncated: f64,
    pub rel_err: f64,
    pub tail_bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub rows: Vec<VerifyRow>,
    pub failures: usize,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.failures == 0
    }
}

/// Runs every requested comparison in deterministic order (quantity,
/// then nu, then nu', then x, each in the given grid order).
pub fn run_verify(spec: &VerifySpec) -> Result<VerifyReport> {
    require_positive("tolerance", spec.tolerance)?;
    if spec.quantities.is_empty() {
        return Err(Error::domain("quantity", "at least one quantity required"));
    }
    if spec.nu_grid.is_empty() || spec.x_grid.is_empty() {
        return Err(Error::domain("nu", "grids must not be empty"));
    }
    let nus: Vec<StatisticsParameter> = spec
        .nu_grid
        .iter()
        .map(|v| StatisticsParameter::new(*v))
        .collect::<Result<_>>()?;
    let nu_primes: Vec<StatisticsParameter> = spec
        .nu_prime_grid
        .iter()
        .map(|v| StatisticsParameter::new(*v))
        .collect::<Result<_>>()?;
    let betas: Vec<InverseTemperature> = spec
        .x_grid
        .iter()
        .map(|v| InverseTemperature::new(*v))
        .collect::<Result<_>>()?;
    // the cutoff depends on x alone; resolve once per grid column
    let cutoffs: Vec<usize> = betas
        .iter()
        .map(|beta| adaptive_cutoff(*beta, spec.tail_tol))
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    for &quantity in &spec.quantities {
        for &nu in &nus {
            let prime_axis: &[StatisticsParameter] = match quantity {
                Quantity::CrossMeanEnergy => &nu_primes,
                _ => std::slice::from_ref(&nu),
            };
            for &nu_prime in prime_axis {
                for (beta, cutoff) in betas.iter().zip(&cutoffs) {
                    rows.push(compare(
                        quantity,
                        nu,
                        nu_prime,
                        *beta,
                        *cutoff,
                        spec.tolerance,
                    ));
                }
            }
        }
    }
    let failures = rows.iter().filter(|row| !row.pass).count();
    Ok(VerifyReport { rows, failures })
}

fn compare(
    quantity: Quantity,
    nu: StatisticsParameter,
    nu_prime: StatisticsParameter,
    beta: InverseTemperature,
    cutoff: usize,
    tolerance: f64,
) -> VerifyRow {
    let (closed, series) = match quantity {
        Quantity::Partition => (
            partition_closed(nu, beta),
            partition_truncated(nu, beta, cutoff),
        ),
        Quantity::MeanEnergy => (
            mean_energy_closed(nu, beta),
            cross_mean_energy_truncated(nu, nu, beta, cutoff),
        ),
        Quantity::CrossMeanEnergy => (
            cross_mean_energy_closed(nu, nu_prime, beta),
            cross_mean_energy_truncated(nu, nu_prime, beta, cutoff),
        ),
        Quantity::Entropy => (
            entropy_closed(nu, beta),
            entropy_truncated(nu, beta, cutoff),
        ),
    };
    let rel_err = (closed - series.value).abs() / closed.abs();
    let tail_bound = series.tail_bound / closed.abs();
    let pass = rel_err.is_finite() && rel_err <= tolerance;
    VerifyRow {
        quantity,
        nu: nu.value(),
        nu_prime: nu_prime.value(),
        x: beta.x(),
        closed,
        truncated: series.value,
        rel_err,
        tail_bound,
        pass,
    }
}
