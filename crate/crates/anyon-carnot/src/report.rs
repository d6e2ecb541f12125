//! CSV and JSON emission.
//!
//! Every float is printed with 17 significant digits (`{:.16e}`), enough
//! for exact f64 round-trips, and both formats print the same digits for
//! the same run. JSON is written by hand: the payloads are small flat
//! objects, and owning the writer keeps the byte stream deterministic,
//! which the golden-file tests rely on. Undefined efficiencies become
//! `null` in JSON and `nan` in CSV.

use crate::cycle::CycleRow;
use crate::spectrum::{LevelIndex, StatisticsParameter};
use crate::sweep::{Objective, SweepResult};
use crate::verify::VerifyReport;

pub const CYCLE_CSV_HEADER: &str =
    "t_h,t_c,nu_a,nu_b,nu_c,nu_d,q_in,q_out,work,eta_qce,eta_cce,valid";
pub const SPECTRUM_CSV_HEADER: &str = "class,j,k,l,m,energy";
pub const VERIFY_CSV_HEADER: &str =
    "quantity,nu,nu_prime,x,closed,truncated,rel_err,tail_bound,pass";

/// 17 significant digits; round-trips any finite f64 exactly.
pub fn fmt_float(value: f64) -> String {
    if value.is_nan() {
        "nan".to_string()
    } else {
        format!("{value:.16e}")
    }
}

fn fmt_optional(value: Option<f64>) -> String {
    value.map_or_else(|| "nan".to_string(), fmt_float)
}

fn json_optional(value: Option<f64>) -> String {
    value.map_or_else(|| "null".to_string(), fmt_float)
}

/// `valid` means the row describes a functioning engine: heat flows in
/// from the hot bath and net work comes out.
fn row_valid(row: &CycleRow) -> bool {
    row.flags.q_in_positive && row.flags.positive_work
}

pub fn cycle_csv_row(row: &CycleRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{}",
        fmt_float(row.t_h),
        fmt_float(row.t_c),
        fmt_float(row.nu_a),
        fmt_float(row.nu_b),
        fmt_float(row.nu_c),
        fmt_float(row.nu_d),
        fmt_float(row.q_in),
        fmt_float(row.q_out),
        fmt_float(row.work),
        fmt_optional(row.eta_qce),
        fmt_float(row.eta_cce),
        row_valid(row)
    )
}

/// Header plus one row.
pub fn cycle_csv(row: &CycleRow) -> String {
    format!("{CYCLE_CSV_HEADER}\n{}\n", cycle_csv_row(row))
}

fn cycle_json_object(row: &CycleRow) -> String {
    format!(
        concat!(
            "{{\"t_h\":{},\"t_c\":{},\"nu_a\":{},\"nu_b\":{},\"nu_c\":{},\"nu_d\":{},",
            "\"q_in\":{},\"q_out\":{},\"work\":{},\"eta_qce\":{},\"eta_cce\":{},",
            "\"flags\":{{\"positive_work\":{},\"q_in_positive\":{},\"eta_below_carnot\":{}}}}}"
        ),
        fmt_float(row.t_h),
        fmt_float(row.t_c),
        fmt_float(row.nu_a),
        fmt_float(row.nu_b),
        fmt_float(row.nu_c),
        fmt_float(row.nu_d),
        fmt_float(row.q_in),
        fmt_float(row.q_out),
        fmt_float(row.work),
        json_optional(row.eta_qce),
        fmt_float(row.eta_cce),
        row.flags.positive_work,
        row.flags.q_in_positive,
        row.flags.eta_below_carnot
    )
}

pub fn cycle_json(row: &CycleRow) -> String {
    format!("{}\n", cycle_json_object(row))
}

/// Rows in grid order, then comment-prefixed summary lines.
pub fn sweep_csv(result: &SweepResult, objective: Objective) -> String {
    let mut out = String::from(CYCLE_CSV_HEADER);
    out.push('\n');
    for row in &result.rows {
        out.push_str(&cycle_csv_row(row));
        out.push('\n');
    }
    out.push_str(&format!(
        "# grid_size={} rows={} skipped={}\n",
        result.grid_size,
        result.rows.len(),
        result.skipped
    ));
    if objective != Objective::None {
        match result.best_row() {
            Some(best) => out.push_str(&format!(
                "# best objective={} {}\n",
                objective.label(),
                cycle_csv_row(best)
            )),
            None => out.push_str(&format!("# best objective={} none\n", objective.label())),
        }
    }
    out
}

/// `{"rows": [...], "metadata": {...}}` with one row object per line.
pub fn sweep_json(result: &SweepResult, objective: Objective) -> String {
    let mut out = String::from("{\"rows\":[");
    for (i, row) in result.rows.iter().enumerate() {
        out.push_str(if i == 0 { "\n" } else { ",\n" });
        out.push_str(&cycle_json_object(row));
    }
    if !result.rows.is_empty() {
        out.push('\n');
    }
    out.push_str(&format!(
        "],\"metadata\":{{\"grid_size\":{},\"rows\":{},\"skipped\":{},\"objective\":\"{}\",\"best\":{}}}}}\n",
        result.grid_size,
        result.rows.len(),
        result.skipped,
        objective.label(),
        result
            .best_row()
            .map_or_else(|| "null".to_string(), cycle_json_object)
    ));
    out
}

pub fn spectrum_csv(levels: &[LevelIndex], nu: StatisticsParameter) -> String {
    let mut out = String::from(SPECTRUM_CSV_HEADER);
    out.push('\n');
    for level in levels {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            level.class,
            level.j,
            level.k,
            level.l,
            level.m,
            fmt_float(level.energy(nu))
        ));
    }
    out
}

pub fn spectrum_json(levels: &[LevelIndex], nu: StatisticsParameter) -> String {
    let mut out = String::from("[");
    for (i, level) in levels.iter().enumerate() {
        out.push_str(if i == 0 { "\n" } else { ",\n" });
        out.push_str(&format!(
            "{{\"class\":\"{}\",\"j\":{},\"k\":{},\"l\":{},\"m\":{},\"energy\":{}}}",
            level.class,
            level.j,
            level.k,
            level.l,
            level.m,
            fmt_float(level.energy(nu))
        ));
    }
    out.push_str(if levels.is_empty() { "]\n" } else { "\n]\n" });
    out
}

pub fn verify_csv(report: &VerifyReport) -> String {
    let mut out = String::from(VERIFY_CSV_HEADER);
    out.push('\n');
    for row in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            row.quantity.label(),
            fmt_float(row.nu),
            fmt_float(row.nu_prime),
            fmt_float(row.x),
            fmt_float(row.closed),
            fmt_float(row.truncated),
            fmt_float(row.rel_err),
            fmt_float(row.tail_bound),
            row.pass
        ));
    }
    out.push_str(&format!(
        "# rows={} failures={}\n",
        report.rows.len(),
        report.failures
    ));
    out
}

pub fn verify_json(report: &VerifyReport) -> String {
    let mut out = String::from("{\"rows\":[");
    for (i, row) in report.rows.iter().enumerate() {
        out.push_str(if i == 0 { "\n" } else { ",\n" });
        out.push_str(&format!(
            concat!(
                "{{\"quantity\":\"{}\",\"nu\":{},\"nu_prime\":{},\"x\":{},",
                "\"closed\":{},\"truncated\":{},\"rel_err\":{},\"tail_bound\":{},\"pass\":{}}}"
            ),
            row.quantity.label(),
            fmt_float(row.nu),
            fmt_float(row.nu_prime),
            fmt_float(row.x),
            fmt_float(row.closed),
            fmt_float(row.truncated),
            fmt_float(row.rel_err),
            fmt_float(row.tail_bound),
            row.pass
        ));
    }
    if !report.rows.is_empty() {
        out.push('\n');
    }
    out.push_str(&format!(
        "],\"failures\":{},\"pass\":{}}}\n",
        report.failures,
        report.all_pass()
    ));
    out
}
