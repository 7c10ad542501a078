//! State-complexity measurements for the lower-bound witness family.
//!
//! Each row runs the full pipeline on one family member and records the
//! intermediate sizes next to the proven bounds, so a regression in any
//! stage shows up as a bound violation rather than a silent slowdown.

use std::fmt::Write as _;
use std::time::Instant;

use crate::error::Result;
use crate::inf::inf_o;
use crate::mask::Mask;
use crate::witness::lower_bound;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportRow {
    pub n: usize,
    pub input_states: usize,
    pub gh_nfa_states: usize,
    pub subset_states: usize,
    pub marked_subsets: usize,
    pub final_states: usize,
    /// 3/4 * 2^n - 1, the proven floor for the minimal result.
    pub lower_bound: usize,
    /// 2^n + 1, the proven ceiling.
    pub upper_bound: usize,
    pub wall_ms: u128,
}

impl ReportRow {
    /// Errs with a description when the measured size escapes the bounds.
    pub fn check(&self) -> std::result::Result<(), String> {
        if self.final_states < self.lower_bound || self.final_states > self.upper_bound {
            return Err(format!(
                "n={}: {} states outside [{}, {}]",
                self.n, self.final_states, self.lower_bound, self.upper_bound
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Default)]
pub struct ComplexityReport {
    pub rows: Vec<ReportRow>,
}

impl ComplexityReport {
    /// First bound violation across all rows, if any.
    pub fn check(&self) -> std::result::Result<(), String> {
        for row in &self.rows {
            row.check()?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "n,input_states,gh_nfa_states,subset_states,marked_subsets,final_states,lower_bound,upper_bound,wall_ms\n",
        );
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                r.n,
                r.input_states,
                r.gh_nfa_states,
                r.subset_states,
                r.marked_subsets,
                r.final_states,
                r.lower_bound,
                r.upper_bound,
                r.wall_ms
            )
            .expect("writing to a String cannot fail");
        }
        out
    }
}

/// Bounds for family size n, valid for n >= 2: 2^n scaled by 3/4, less one,
/// and 2^n plus one.
pub fn complexity_bounds(n: usize) -> (usize, usize) {
    (3 * (1usize << n) / 4 - 1, (1usize << n) + 1)
}

/// Runs the pipeline on the size-n lower-bound witness under the projection
/// that erases c, and records every intermediate size.
pub fn lower_bound_row(n: usize) -> Result<ReportRow> {
    let d = lower_bound(n)?;
    let m = Mask::projection(d.alphabet(), &["a", "b"])?;
    let start = Instant::now();
    let result = inf_o(&d, &m)?;
    let wall_ms = start.elapsed().as_millis();
    let (lo, hi) = complexity_bounds(n);
    Ok(ReportRow {
        n,
        input_states: result.stats.input_states,
        gh_nfa_states: result.stats.gh_nfa_states,
        subset_states: result.stats.subset_states,
        marked_subsets: result.stats.marked_subsets,
        final_states: result.stats.final_states,
        lower_bound: lo,
        upper_bound: hi,
        wall_ms,
    })
}

/// Rows for every family size in the inclusive range.
pub fn lower_bound_report(n_min: usize, n_max: usize) -> Result<ComplexityReport> {
    let mut rows = Vec::new();
    for n in n_min..=n_max {
        rows.push(lower_bound_row(n)?);
    }
    Ok(ComplexityReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_match_closed_forms() {
        assert_eq!(complexity_bounds(2), (2, 5));
        assert_eq!(complexity_bounds(3), (5, 9));
        assert_eq!(complexity_bounds(4), (11, 17));
        assert_eq!(complexity_bounds(10), (767, 1025));
    }

    #[test]
    fn small_rows_sit_inside_the_bounds() {
        let report = lower_bound_report(2, 6).unwrap();
        assert_eq!(report.rows.len(), 5);
        report.check().unwrap();
        for row in &report.rows {
            assert_eq!(row.input_states, row.n);
            assert_eq!(row.gh_nfa_states, row.n + 1);
        }
    }

    #[test]
    fn csv_has_header_and_one_line_per_row() {
        let report = lower_bound_report(2, 4).unwrap();
        let csv = report.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("n,input_states,"));
        assert!(lines[1].starts_with("2,"));
    }

    #[test]
    fn check_reports_violations() {
        let mut row = lower_bound_row(3).unwrap();
        row.final_states = row.upper_bound + 1;
        assert!(row.check().is_err());
    }
}
