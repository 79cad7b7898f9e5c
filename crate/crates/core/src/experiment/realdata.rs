use std::path::Path;

use serde::{Deserialize, Serialize};

use super::mle::{fit_mo_exponential, MoMleFit};
use super::output::OutputSink;
use super::svg::line_plot;
use crate::error::{GmoError, Result};
use crate::estimators::{empirical_joint_survival, empirical_survival, kendall_tau_hat, JointSurvivalEstimate};
use crate::metrics::{ise, kl, GridSpec};
use crate::model::Margin;
use crate::sampling::{from_bivariate, from_status_coded, ObservedSample};

const TIME_COLUMNS: [&str; 5] = ["tenure", "time", "length", "years", "duration"];
const STATUS_COLUMNS: [&str; 3] = ["status", "event", "censor"];

fn open(path: &Path) -> Result<csv::Reader<std::fs::File>> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| GmoError::data(format!("cannot read {}: {e}", path.display())))
}

fn parse_field(record: &csv::StringRecord, col: usize, line: usize) -> Result<f64> {
    let raw = record.get(col).ok_or_else(|| GmoError::data(format!("line {line}: missing column {}", col + 1)))?;
    let v: f64 = raw.parse().map_err(|_| GmoError::data(format!("line {line}: `{raw}` is not a number")))?;
    if !(v.is_finite() && v >= 0.0) {
        return Err(GmoError::data(format!("line {line}: times must be finite and nonnegative, got {v}")));
    }
    Ok(v)
}

/// Reads `(T, C)` pairs from the first two columns of a CSV file with a header row.
pub fn read_pairs_csv(path: &Path) -> Result<Vec<(f64, f64)>> {
    let mut rdr = open(path)?;
    let mut pairs = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        pairs.push((parse_field(&rec, 0, line)?, parse_field(&rec, 1, line)?));
    }
    if pairs.is_empty() {
        return Err(GmoError::data(format!("{} contains no rows", path.display())));
    }
    Ok(pairs)
}

fn find_column(headers: &csv::StringRecord, names: &[&str], fallback: usize) -> usize {
    headers
        .iter()
        .position(|h| names.iter().any(|n| h.eq_ignore_ascii_case(n)))
        .unwrap_or(fallback)
}

/// Reads durations and status codes in `{0, 1, 2}`. Columns are located by
/// header name (`tenure`/`time`/…, `status`/`event`) or else taken as the
/// first two.
pub fn read_status_csv(path: &Path) -> Result<(Vec<f64>, Vec<u8>)> {
    let mut rdr = open(path)?;
    let headers = rdr.headers()?.clone();
    let tcol = find_column(&headers, &TIME_COLUMNS, 0);
    let scol = find_column(&headers, &STATUS_COLUMNS, 1);
    let (mut times, mut status) = (Vec::new(), Vec::new());
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        times.push(parse_field(&rec, tcol, line)?);
        let raw = rec.get(scol).unwrap_or("");
        match raw.parse::<u8>() {
            Ok(code @ 0..=2) => status.push(code),
            _ => return Err(GmoError::data(format!("line {line}: unknown status `{raw}` (expected 0, 1 or 2)"))),
        }
    }
    if times.is_empty() {
        return Err(GmoError::data(format!("{} contains no rows", path.display())));
    }
    Ok((times, status))
}

/// One row of a curve table. Columns that do not apply are left empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub t: f64,
    pub km_t: f64,
    pub km_c: f64,
    pub empirical_t: Option<f64>,
    pub alpha1: Option<f64>,
    pub alpha2: Option<f64>,
}

fn curves(sample: &ObservedSample, est: &JointSurvivalEstimate, t_values: Option<&[f64]>) -> Result<Vec<CurvePoint>> {
    let emp = t_values.map(empirical_survival).transpose()?;
    let mut grid = vec![0.0];
    for &y in sample.y() {
        if grid.last() != Some(&y) {
            grid.push(y);
        }
    }
    Ok(grid
        .into_iter()
        .map(|t| CurvePoint {
            t,
            km_t: est.km_t().eval(t),
            km_c: est.km_c().eval(t),
            empirical_t: emp.as_ref().map(|e| e.eval(t)),
            alpha1: est.alpha(Margin::T, t),
            alpha2: est.alpha(Margin::C, t),
        })
        .collect())
}

fn curve_svgs(sink: &mut OutputSink, label: &str, rows: &[CurvePoint]) -> Result<()> {
    let pts = |f: &dyn Fn(&CurvePoint) -> Option<f64>| {
        rows.iter().map(|r| (r.t, f(r).unwrap_or(f64::NAN))).collect::<Vec<_>>()
    };
    let mut series = vec![("KM T", pts(&|r| Some(r.km_t))), ("KM C", pts(&|r| Some(r.km_c)))];
    if rows.iter().any(|r| r.empirical_t.is_some()) {
        series.push(("empirical T", pts(&|r| r.empirical_t)));
    }
    sink.write_svg(&format!("{label}_survival"), &line_plot(&format!("{label}: marginal survival"), &series))?;
    let alpha = line_plot(
        &format!("{label}: alpha functions"),
        &[("alpha1", pts(&|r| r.alpha1)), ("alpha2", pts(&|r| r.alpha2))],
    );
    sink.write_svg(&format!("{label}_alpha"), &alpha)?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UefaReport {
    pub n: usize,
    pub mle: MoMleFit,
    pub tau_n: f64,
    pub grid: GridSpec,
    pub ise_gmo: f64,
    pub ise_ml: f64,
    pub kl_gmo: f64,
    pub kl_ml: f64,
    pub curves: Vec<CurvePoint>,
}

/// Compares the nonparametric and exponential-MO fits of `P(T > t, C > s)`
/// against the empirical joint survival of the pairs in `path`.
pub fn run_uefa(path: &Path, grid_points: usize) -> Result<UefaReport> {
    let pairs = read_pairs_csv(path)?;
    let (t, c): (Vec<f64>, Vec<f64>) = pairs.iter().copied().unzip();
    let sample = from_bivariate(&t, &c)?;
    let est = JointSurvivalEstimate::new(&sample)?;
    let mle = fit_mo_exponential(&sample)?;
    let grid = GridSpec::from_observations(sample.y(), grid_points)?;
    let gmo = |a, b| est.eval(a, b);
    let ml = |a, b| mle.joint_survival(a, b);
    let em = |a, b| empirical_joint_survival(&pairs, a, b);
    Ok(UefaReport {
        n: sample.len(),
        tau_n: kendall_tau_hat(&sample)?,
        ise_gmo: ise(gmo, em, &grid),
        ise_ml: ise(ml, em, &grid),
        kl_gmo: kl(gmo, em, &grid),
        kl_ml: kl(ml, em, &grid),
        curves: curves(&sample, &est, Some(&t))?,
        grid,
        mle,
    })
}

impl UefaReport {
    pub fn write(&self, sink: &mut OutputSink) -> Result<()> {
        sink.write_json("uefa_summary", self)?;
        sink.write_table("uefa_curves", &self.curves)?;
        curve_svgs(sink, "uefa", &self.curves)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JudgesReport {
    pub n: usize,
    pub tau_n: f64,
    /// Range of α̂₁ and α̂₂ over observed times between the 10% and 90%
    /// quantiles of `Y`.
    pub alpha1_central_range: f64,
    pub alpha2_central_range: f64,
    pub curves: Vec<CurvePoint>,
}

fn central_range(rows: &[CurvePoint], lo: f64, hi: f64, f: fn(&CurvePoint) -> Option<f64>) -> f64 {
    let vals: Vec<f64> = rows.iter().filter(|r| r.t >= lo && r.t <= hi).filter_map(f).collect();
    if vals.is_empty() {
        return f64::NAN;
    }
    let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    max - min
}

/// Marginal Kaplan–Meier curves, α̂ curves and `τₙ` for status-coded data
/// (0: both ends at once, 1: `T` observed, 2: `C` observed).
pub fn run_judges(path: &Path) -> Result<JudgesReport> {
    let (times, status) = read_status_csv(path)?;
    let sample = from_status_coded(&times, &status)?;
    let est = JointSurvivalEstimate::new(&sample)?;
    let rows = curves(&sample, &est, None)?;
    let y = sample.y();
    let q = |p: f64| y[((y.len() - 1) as f64 * p).round() as usize];
    let (lo, hi) = (q(0.1), q(0.9));
    Ok(JudgesReport {
        n: sample.len(),
        tau_n: kendall_tau_hat(&sample)?,
        alpha1_central_range: central_range(&rows, lo, hi, |r| r.alpha1),
        alpha2_central_range: central_range(&rows, lo, hi, |r| r.alpha2),
        curves: rows,
    })
}

impl JudgesReport {
    pub fn write(&self, sink: &mut OutputSink) -> Result<()> {
        sink.write_json("judges_summary", self)?;
        sink.write_table("judges_curves", &self.curves)?;
        curve_svgs(sink, "judges", &self.curves)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn csv_file(body: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(body.as_bytes()).unwrap();
        f
    }

    #[test]
    fn pairs_reader() {
        let f = csv_file("kick,home\n10,20\n 5 , 5\n");
        assert_eq!(read_pairs_csv(f.path()).unwrap(), vec![(10.0, 20.0), (5.0, 5.0)]);
        let bad = csv_file("kick,home\n10,abc\n");
        assert!(matches!(read_pairs_csv(bad.path()), Err(GmoError::Data(_))));
        let empty = csv_file("kick,home\n");
        assert!(read_pairs_csv(empty.path()).is_err());
    }

    #[test]
    fn status_reader_by_header() {
        let f = csv_file("name,status,tenure\nx,1,10.5\ny,0,3\n");
        assert_eq!(read_status_csv(f.path()).unwrap(), (vec![10.5, 3.0], vec![1, 0]));
        let bad = csv_file("tenure,status\n1,7\n");
        assert!(read_status_csv(bad.path()).is_err());
    }
}
