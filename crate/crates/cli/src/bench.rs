//! Wall-clock comparison of the two class number methods. Timings depend on
//! the machine and load and are not reproducible; only the schema and the
//! agreement of the two values are.

use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use stickel_core::conductor::valid_conductors;
use stickel_core::{h_minus_analytic, h_minus_det, Conductor};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub m: u64,
    pub factorization: String,
    pub phi: u64,
    pub time_analytic_s: f64,
    pub time_det_s: f64,
    /// Decimal string; values outgrow every fixed-width integer.
    pub h_minus: String,
}

pub const CSV_HEADER: [&str; 6] = [
    "m",
    "factorization",
    "phi",
    "time_analytic_s",
    "time_det_s",
    "h_minus",
];

/// Times both methods on `m`; a disagreement is a verification failure.
pub fn bench_row(m: u64) -> Result<BenchRow, CliError> {
    let c = Conductor::new(m)?;
    let t = Instant::now();
    let analytic = h_minus_analytic(m)?;
    let time_analytic_s = t.elapsed().as_secs_f64();
    let t = Instant::now();
    let det = h_minus_det(m)?;
    let time_det_s = t.elapsed().as_secs_f64();
    if analytic.h_minus != det.h_minus {
        return Err(CliError::Verification(format!(
            "m = {m}: determinant gives {}, analytic gives {}",
            det.h_minus, analytic.h_minus
        )));
    }
    Ok(BenchRow {
        m,
        factorization: c.factorization_string(),
        phi: c.phi(),
        time_analytic_s,
        time_det_s,
        h_minus: det.h_minus.to_string(),
    })
}

/// Rows for every valid conductor in `[min, max]`, one at a time so the
/// timings do not compete for cores, written as CSV as they finish. Stops
/// at the first disagreement.
pub fn run_bench(min: u64, max: u64, out: impl Write) -> Result<Vec<BenchRow>, CliError> {
    if min > max {
        return Err(CliError::Input(format!(
            "empty range: --min {min} exceeds --max {max}"
        )));
    }
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    let mut rows = Vec::new();
    for m in valid_conductors(min, max) {
        let row = bench_row(m)?;
        w.serialize(&row)?;
        w.flush()?;
        rows.push(row);
    }
    w.flush()?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_range_round_trips_through_csv() {
        let mut buf = Vec::new();
        let rows = run_bench(20, 24, &mut buf).unwrap();
        assert_eq!(
            rows.iter().map(|r| r.m).collect::<Vec<_>>(),
            vec![20, 21, 23, 24]
        );
        assert_eq!(rows[2].h_minus, "3");
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
        assert_eq!(text.lines().count(), 5);
        let mut rdr = csv::Reader::from_reader(text.as_bytes());
        let back: Vec<BenchRow> = rdr.deserialize().collect::<Result<_, _>>().unwrap();
        assert_eq!(back.len(), 4);
        assert_eq!(back[2].factorization, rows[2].factorization);
    }

    #[test]
    fn empty_range_is_an_input_error() {
        assert!(matches!(
            run_bench(10, 5, Vec::new()),
            Err(CliError::Input(_))
        ));
    }
}
