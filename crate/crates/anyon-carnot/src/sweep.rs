//! Deterministic parameter sweeps over the cycle and optimum refinement.
//!
//! A sweep fixes or ranges each of the six cycle parameters and evaluates
//! every grid point in row-major order with the parameter order
//! `t_h, t_c, nu_a, nu_b, nu_c, nu_d` (the last varying fastest). Grid
//! points whose configuration fails validation are skipped and counted,
//! not errored: ranges are allowed to brush against invalid territory
//! (for example a `t_c` range crossing `t_h`).
//!
//! Output order is a function of the spec alone. The parallel evaluator
//! maps index-to-row and reassembles in index order, so enabling it
//! changes no output bytes; [`run_sweep_serial`] exists to prove that in
//! tests.

use rayon::prelude::*;

use crate::cycle::{run_cycle, CycleConfig, CycleRow};
use crate::spectrum::EnergyScale;
use crate::{require_finite, Error, Result};

/// Default ceiling on the number of grid points.
pub const DEFAULT_GRID_CAP: u64 = 1_000_000;

/// What a sweep should hunt for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// Just tabulate; no best row is selected.
    None,
    /// Largest work output.
    MaxWork,
    /// Largest defined efficiency among positive-work rows.
    MaxEfficiency,
}

impl Objective {
    /// Wire name used in config files and summaries.
    pub fn label(self) -> &'static str {
        match self {
            Objective::None => "none",
            Objective::MaxWork => "max_work",
            Objective::MaxEfficiency => "max_efficiency",
        }
    }

    pub fn parse(label: &str) -> Result<Self> {
        match label {
            "none" => Ok(Objective::None),
            "max_work" => Ok(Objective::MaxWork),
            "max_efficiency" => Ok(Objective::MaxEfficiency),
            other => Err(Error::domain(
                "objective",
                format!("expected none, max_work or max_efficiency, got {other:?}"),
            )),
        }
    }
}

/// One swept or fixed parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamAxis {
    Fixed(f64),
    /// `count` evenly spaced values from `start` to `stop` inclusive.
    Range {
        start: f64,
        stop: f64,
        count: usize,
    },
}

impl ParamAxis {
    pub fn len(&self) -> usize {
        match self {
            ParamAxis::Fixed(_) => 1,
            ParamAxis::Range { count, .. } => *count,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_range(&self) -> bool {
        matches!(self, ParamAxis::Range { .. })
    }

    /// The i-th grid value. Endpoints are returned exactly so that range
    /// edges like `nu = 1` do not drift out of the valid domain.
    pub fn value(&self, i: usize) -> f64 {
        match *self {
            ParamAxis::Fixed(v) => v,
            ParamAxis::Range { start, stop, count } => {
                if count == 1 || i == 0 {
                    start
                } else if i + 1 == count {
                    stop
                } else {
                    start + (stop - start) * (i as f64) / ((count - 1) as f64)
                }
            }
        }
    }

    fn validate(&self, field: &'static str) -> Result<()> {
        match *self {
            ParamAxis::Fixed(v) => {
                require_finite(field, v)?;
            }
            ParamAxis::Range { start, stop, count } => {
                require_finite(field, start)?;
                require_finite(field, stop)?;
                if count == 0 {
                    return Err(Error::domain(field, "range count must be at least 1"));
                }
                if start > stop {
                    return Err(Error::domain(
                        field,
                        format!("range start must not exceed stop, got {start}..{stop}"),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Full description of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub t_h: ParamAxis,
    pub t_c: ParamAxis,
    pub nu_a: ParamAxis,
    pub nu_b: ParamAxis,
    pub nu_c: ParamAxis,
    pub nu_d: ParamAxis,
    pub scale: EnergyScale,
    pub objective: Objective,
    pub grid_cap: u64,
}

impl SweepSpec {
    /// A spec with every parameter fixed; the natural starting point for
    /// programmatic sweeps.
    pub fn all_fixed(t_h: f64, t_c: f64, nus: [f64; 4], scale: EnergyScale) -> Self {
        SweepSpec {
            t_h: ParamAxis::Fixed(t_h),
            t_c: ParamAxis::Fixed(t_c),
            nu_a: ParamAxis::Fixed(nus[0]),
            nu_b: ParamAxis::Fixed(nus[1]),
            nu_c: ParamAxis::Fixed(nus[2]),
            nu_d: ParamAxis::Fixed(nus[3]),
            scale,
            objective: Objective::None,
            grid_cap: DEFAULT_GRID_CAP,
        }
    }

    /// Axes in canonical sweep order, slowest first.
    pub fn axes(&self) -> [(&'static str, &ParamAxis); 6] {
        [
            ("t_h", &self.t_h),
            ("t_c", &self.t_c),
            ("nu_a", &self.nu_a),
            ("nu_b", &self.nu_b),
            ("nu_c", &self.nu_c),
            ("nu_d", &self.nu_d),
        ]
    }

    pub fn grid_size(&self) -> u128 {
        self.axes()
            .iter()
            .map(|(_, axis)| axis.len() as u128)
            .product()
    }

    pub fn validate(&self) -> Result<()> {
        for (field, axis) in self.axes() {
            axis.validate(field)?;
        }
        Ok(())
    }

    /// The six parameter values at a flat row-major grid index.
    fn values_at(&self, index: u64) -> [f64; 6] {
        let axes = self.axes();
        let mut out = [0.0; 6];
        let mut rest = index;
        for slot in (0..6).rev() {
            let len = axes[slot].1.len() as u64;
            out[slot] = axes[slot].1.value((rest % len) as usize);
            rest /= len;
        }
        out
    }

    fn evaluate(&self, index: u64) -> Option<CycleRow> {
        let [t_h, t_c, nu_a, nu_b, nu_c, nu_d] = self.values_at(index);
        CycleConfig::new(t_h, t_c, nu_a, nu_b, nu_c, nu_d, self.scale)
            .ok()
            .map(|config| run_cycle(&config).row())
    }
}

/// Outcome of a sweep: surviving rows in grid order, bookkeeping, and the
/// index of the objective's best row.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<CycleRow>,
    pub grid_size: u64,
    pub skipped: u64,
    pub best: Option<usize>,
}

impl SweepResult {
    pub fn best_row(&self) -> Option<&CycleRow> {
        self.best.map(|i| &self.rows[i])
    }
}

/// Runs the sweep with data-parallel evaluation. Row order, skip counts
/// and every byte of downstream serialization are identical to
/// [`run_sweep_serial`].
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    let total = prepare(spec)?;
    let evaluated: Vec<Option<CycleRow>> = (0..total)
        .into_par_iter()
        .map(|i| spec.evaluate(i))
        .collect();
    Ok(assemble(spec, total, evaluated))
}

/// Single-threaded twin of [`run_sweep`].
pub fn run_sweep_serial(spec: &SweepSpec) -> Result<SweepResult> {
    let total = prepare(spec)?;
    let evaluated: Vec<Option<CycleRow>> = (0..total).map(|i| spec.evaluate(i)).collect();
    Ok(assemble(spec, total, evaluated))
}

fn prepare(spec: &SweepSpec) -> Result<u64> {
    spec.validate()?;
    let size = spec.grid_size();
    if size > u128::from(spec.grid_cap) {
        return Err(Error::CapExceeded {
            what: "sweep grid",
            size,
            cap: spec.grid_cap,
        });
    }
    Ok(size as u64)
}

fn assemble(spec: &SweepSpec, total: u64, evaluated: Vec<Option<CycleRow>>) -> SweepResult {
    let rows: Vec<CycleRow> = evaluated.into_iter().flatten().collect();
    let skipped = total - rows.len() as u64;
    let best = select_best(spec.objective, &rows);
    SweepResult {
        rows,
        grid_size: total,
        skipped,
        best,
    }
}

/// Index of the best admissible row; ties keep the earliest row, so the
/// result is independent of evaluation order.
fn select_best(objective: Objective, rows: &[CycleRow]) -> Option<usize> {
    let score = |row: &CycleRow| -> Option<f64> {
        match objective {
            Objective::None => None,
            Objective::MaxWork => Some(row.work),
            Objective::MaxEfficiency => {
                if row.flags.positive_work {
                    row.eta_qce
                } else {
                    None
                }
            }
        }
    };
    let mut best: Option<(usize, f64)> = None;
    for (i, row) in rows.iter().enumerate() {
        if let Some(s) = score(row) {
            if best.is_none_or(|(_, incumbent)| s > incumbent) {
                best = Some((i, s));
            }
        }
    }
    best.map(|(i, _)| i)
}

/// Outcome of iterative grid refinement.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinedOptimum {
    /// Best row seen over all scans (never worse than the coarse scan).
    pub row: CycleRow,
    /// Which parameter was refined.
    pub axis: &'static str,
    /// Final bracketing interval scanned around the optimum.
    pub interval: (f64, f64),
    /// Number of grid scans performed.
    pub scans: u32,
}

/// Iteratively shrinks the single ranged axis around the best row and
/// re-scans. Each pass divides the bracketing interval by 4 while keeping
/// the point count, clamped to the original range, so `iterations` passes
/// narrow the interval by `4^(iterations-1)`.
pub fn refine_optimum(spec: &SweepSpec, iterations: u32) -> Result<RefinedOptimum> {
    spec.validate()?;
    if spec.objective == Objective::None {
        return Err(Error::RefineNeedsObjective);
    }
    if iterations == 0 {
        return Err(Error::domain("iterations", "must be at least 1"));
    }
    let ranged: Vec<&'static str> = spec
        .axes()
        .iter()
        .filter(|(_, axis)| axis.is_range())
        .map(|(name, _)| *name)
        .collect();
    if ranged.len() != 1 {
        return Err(Error::RefineNeedsSingleRange(ranged.len()));
    }
    let axis_name = ranged[0];
    let (start0, stop0, count) = match *axis_of(spec, axis_name) {
        ParamAxis::Range { start, stop, count } => (start, stop, count),
        ParamAxis::Fixed(_) => unreachable!(),
    };

    let mut work_spec = spec.clone();
    let mut best: Option<(f64, CycleRow)> = None;
    let mut bracket = (start0, stop0);
    for pass in 0..iterations {
        let result = run_sweep(&work_spec)?;
        if let Some(row) = result.best_row() {
            let s = score_for(spec.objective, row);
            if best.as_ref().is_none_or(|(incumbent, _)| s > *incumbent) {
                best = Some((s, *row));
            }
        }
        let Some((_, row)) = best else {
            return Err(Error::NoAdmissibleRow);
        };
        if pass + 1 == iterations {
            // the reported bracket is the one the final scan covered
            break;
        }
        // shrink the window around the incumbent, staying inside the
        // original range
        let center = param_of(&row, axis_name);
        let (start, stop) = bracket;
        let width = (stop - start) / 4.0;
        let mut lo = (center - width / 2.0).max(start0);
        let hi = (lo + width).min(stop0);
        lo = (hi - width).max(start0);
        bracket = (lo, hi);
        *axis_of_mut(&mut work_spec, axis_name) = ParamAxis::Range {
            start: lo,
            stop: hi,
            count,
        };
    }
    let (_, row) = best.expect("loop either set best or returned");
    Ok(RefinedOptimum {
        row,
        axis: axis_name,
        interval: bracket,
        scans: iterations,
    })
}

fn score_for(objective: Objective, row: &CycleRow) -> f64 {
    match objective {
        Objective::MaxWork => row.work,
        Objective::MaxEfficiency => row.eta_qce.expect("admissible row has eta"),
        Objective::None => unreachable!("rejected before scanning"),
    }
}

fn axis_of<'a>(spec: &'a SweepSpec, name: &str) -> &'a ParamAxis {
    match name {
        "t_h" => &spec.t_h,
        "t_c" => &spec.t_c,
        "nu_a" => &spec.nu_a,
        "nu_b" => &spec.nu_b,
        "nu_c" => &spec.nu_c,
        "nu_d" => &spec.nu_d,
        _ => unreachable!(),
    }
}

fn axis_of_mut<'a>(spec: &'a mut SweepSpec, name: &str) -> &'a mut ParamAxis {
    match name {
        "t_h" => &mut spec.t_h,
        "t_c" => &mut spec.t_c,
        "nu_a" => &mut spec.nu_a,
        "nu_b" => &mut spec.nu_b,
        "nu_c" => &mut spec.nu_c,
        "nu_d" => &mut spec.nu_d,
        _ => unreachable!(),
    }
}

fn param_of(row: &CycleRow, name: &str) -> f64 {
    match name {
        "t_h" => row.t_h,
        "t_c" => row.t_c,
        "nu_a" => row.nu_a,
        "nu_b" => row.nu_b,
        "nu_c" => row.nu_c,
        "nu_d" => row.nu_d,
        _ => unreachable!(),
    }
}
