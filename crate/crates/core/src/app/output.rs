use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use crate::darboux::{accumulate_i, lambda_sweep, SweepRow};
use crate::error::{Error, Result};

use super::model::Model;

pub const EXCLUDED_TOKEN: &str = "inf-excluded";

/// Writes `contents` to a temporary file next to `path` and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}

fn num(v: f64) -> String {
    format!("{v:.12e}")
}

/// Formats `exp(ln)` like [`num`], continuing with a decimal exponent below
/// the range of `f64` instead of printing zero.
pub fn num_from_ln(ln: f64) -> String {
    let v = ln.exp();
    if v.is_normal() {
        return num(v);
    }
    let mut k = (ln / std::f64::consts::LN_10).floor();
    let mut mant = (ln - k * std::f64::consts::LN_10).exp();
    if format!("{mant:.12}").starts_with("10") {
        mant /= 10.0;
        k += 1.0;
    }
    format!("{mant:.12}e{k}")
}

/// CSV body of figure `id`: 1 potential, 2 ground state, 3 deformed
/// potential, 4 deformed ground state, 5 the integral `I`.
pub fn figure_csv(model: &Model, id: u8) -> Result<String> {
    let mut out = String::from("xi,value\n");
    let grid = model.grid;
    let row = |out: &mut String, i: usize, v: &str| {
        let _ = writeln!(out, "{},{v}", num(grid.point(i)));
    };
    match id {
        2 => {
            for i in 0..grid.len() {
                row(&mut out, i, &num_from_ln(model.params.ln_ground_state(grid.point(i))));
            }
        }
        1 | 5 => {
            let field = match id {
                1 => model.u.clone(),
                _ => accumulate_i(&model.phi0, model.deformation.convention()),
            };
            for (i, v) in field.values().iter().enumerate() {
                row(&mut out, i, &num(*v));
            }
        }
        3 | 4 => {
            let family = model.family()?;
            let field = if id == 3 { &family.u_lambda } else { &family.phi0_lambda };
            let mut excluded = 0;
            for (i, v) in field.values().iter().enumerate() {
                if family.is_excluded(i) || !v.is_finite() {
                    excluded += 1;
                    row(&mut out, i, EXCLUDED_TOKEN);
                } else {
                    row(&mut out, i, &num(*v));
                }
            }
            let _ = writeln!(out, "# excluded={excluded}");
        }
        other => return Err(Error::Config(format!("figure id must be 1..5, got {other}"))),
    }
    Ok(out)
}

pub fn sweep_rows(model: &Model, lambdas: &[f64]) -> Result<Vec<SweepRow>> {
    lambda_sweep(&model.r, &model.u, &model.phi0, lambdas, model.deformation.convention())
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("lambda,sup_dev_u,xi_star,norm_check\n");
    for r in rows {
        let xs = r.xi_star.map(num).unwrap_or_default();
        let _ = writeln!(out, "{},{},{},{}", num(r.lambda), num(r.sup_dev_u), xs, num(r.norm_check));
    }
    out
}

/// Parses a comma-separated list of lambdas.
pub fn parse_lambdas(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| Error::Config(format!("bad lambda `{s}`"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::app::config::{EffectiveConfig, RunConfig};

    fn model_with(sets: &[&str]) -> Model {
        let mut rc = RunConfig::default();
        for s in sets {
            rc.set(s).unwrap();
        }
        Model::build(&rc.resolve().unwrap()).unwrap()
    }

    #[test]
    fn extended_range_numbers() {
        assert_eq!(num_from_ln(0.0), "1.000000000000e0");
        assert_eq!(num_from_ln(2.5f64.ln()), num(2.5));
        assert_eq!(num_from_ln(-1000.0 * std::f64::consts::LN_10), "1.000000000000e-1000");
        let three = num_from_ln(-1000.0 * std::f64::consts::LN_10 + 3f64.ln());
        let (m, e) = three.split_once('e').unwrap();
        assert!((m.parse::<f64>().unwrap() - 3.0).abs() < 1e-10);
        assert_eq!(e, "-1000");
        let tiny = num_from_ln(-800.0);
        let (m, e) = tiny.split_once('e').unwrap();
        assert!(m.parse::<f64>().unwrap() >= 1.0 && m.parse::<f64>().unwrap() < 10.0);
        assert_eq!(e, "-348");
    }

    #[test]
    fn figure_layout() {
        let m = model_with(&["n=201"]);
        let csv = figure_csv(&m, 2).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "xi,value");
        assert_eq!(lines.len(), 202);
        assert_eq!(lines[101], "0.000000000000e0,1.000000000000e0");
        assert!(!csv.contains('\r'));
        assert!(figure_csv(&m, 6).is_err());
        assert!(figure_csv(&m, 0).is_err());
    }

    #[test]
    fn singular_rows_are_marked() {
        let m = model_with(&["lambda=5", "n=801"]);
        let csv = figure_csv(&m, 3).unwrap();
        let marked = csv.lines().filter(|l| l.ends_with(EXCLUDED_TOKEN)).count();
        assert!((10..=11).contains(&marked));
        assert_eq!(csv.lines().last().unwrap(), format!("# excluded={marked}"));
        let calm = figure_csv(&Model::build(&EffectiveConfig::defaults()).unwrap(), 4).unwrap();
        assert!(calm.ends_with("# excluded=0\n"));
    }

    #[test]
    fn sweep_table() {
        let m = model_with(&["n=801"]);
        let rows = sweep_rows(&m, &[1e3, 5.0, 1e2]).unwrap();
        let csv = sweep_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "lambda,sup_dev_u,xi_star,norm_check");
        assert!(lines[1].starts_with("5.000000000000e0,"));
        assert!(!lines[1].contains(",,"));
        assert!(lines[2].contains(",,"));
        assert!(matches!(sweep_rows(&m, &[-0.5]), Err(Error::LambdaForbidden(_))));
        assert_eq!(parse_lambdas("1, 2.5,-3").unwrap(), vec![1.0, 2.5, -3.0]);
        assert!(parse_lambdas("1,,2").is_err());
    }
}
