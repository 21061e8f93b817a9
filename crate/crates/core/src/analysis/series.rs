use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::StarModel;

use super::quantity::QuantityCatalog;
use super::scenario::{Scenario, Trajectory};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub values: Vec<f64>,
}

/// Named columns sampled on a uniform time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub grid: Vec<f64>,
    pub columns: Vec<Column>,
}

impl TimeSeries {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.values.as_slice())
    }

    pub fn step(&self) -> f64 {
        if self.grid.len() < 2 {
            0.0
        } else {
            self.grid[1] - self.grid[0]
        }
    }

    /// CSV with a `t,<name>…` header, `%.12g`-style numbers and LF endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for c in &self.columns {
            out.push(',');
            out.push_str(&c.name);
        }
        out.push('\n');
        for (k, t) in self.grid.iter().enumerate() {
            out.push_str(&format_sig(*t, 12));
            for c in &self.columns {
                out.push(',');
                out.push_str(&format_sig(c.values[k], 12));
            }
            out.push('\n');
        }
        out
    }
}

/// Uniform grid of `steps` points on `[0, t_max]`.
pub fn uniform_grid(t_max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::InvalidArgument(format!(
            "steps must be >= 2, got {steps}"
        )));
    }
    if !t_max.is_finite() || t_max <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "t_max must be positive, got {t_max}"
        )));
    }
    let h = t_max / (steps - 1) as f64;
    Ok((0..steps).map(|k| k as f64 * h).collect())
}

/// Sample `quantities` along the trajectory of `scenario`.
///
/// Grid points are evaluated in parallel and assembled in grid order, so the
/// output does not depend on the thread count.
pub fn scan(
    model: &StarModel,
    scenario: &Scenario,
    t_max: f64,
    steps: usize,
    quantities: &[String],
) -> Result<TimeSeries> {
    let trajectory = Trajectory::new(model, scenario)?;
    scan_trajectory(&trajectory, &uniform_grid(t_max, steps)?, quantities)
}

pub fn scan_trajectory(
    trajectory: &Trajectory,
    grid: &[f64],
    quantities: &[String],
) -> Result<TimeSeries> {
    let resolved = QuantityCatalog::global().resolve(quantities, trajectory.roles())?;
    let rows: Vec<Vec<f64>> = grid
        .par_iter()
        .map(|&t| {
            let snap = trajectory.snapshot(t)?;
            resolved
                .iter()
                .map(|q| q.evaluate(&snap))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let columns = quantities
        .iter()
        .enumerate()
        .map(|(c, name)| Column {
            name: name.clone(),
            values: rows.iter().map(|r| r[c]).collect(),
        })
        .collect();
    Ok(TimeSeries {
        grid: grid.to_vec(),
        columns,
    })
}

/// Format like C's `%.{sig}g`: shortest of fixed or exponent notation, trailing zeros trimmed.
pub fn format_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sig = sig.max(1);
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn format_matches_printf_g() {
        assert_eq!(format_sig(0.0, 12), "0");
        assert_eq!(format_sig(1.0, 12), "1");
        assert_eq!(format_sig(PI, 12), "3.14159265359");
        assert_eq!(format_sig(-0.25, 12), "-0.25");
        assert_eq!(format_sig(1.5e-7, 12), "1.5e-07");
        assert_eq!(format_sig(123456789012345.0, 12), "1.23456789012e+14");
        assert_eq!(format_sig(0.0001, 12), "0.0001");
        assert_eq!(format_sig(1.46928204126e-5, 12), "1.46928204126e-05");
        assert_eq!(format_sig(9.9999999999999, 12), "10");
    }

    #[test]
    fn grid_validation() {
        assert!(uniform_grid(1.0, 1).is_err());
        assert!(uniform_grid(0.0, 10).is_err());
        let g = uniform_grid(2.0, 5).unwrap();
        assert_eq!(g, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
    }

    #[test]
    fn cops_ligand_pair_column() {
        let names = vec!["c_ucp_l".to_string(), "c_l_l".to_string()];
        let ts = scan(
            &StarModel::default(),
            &Scenario::Cops,
            2.0 * PI,
            2001,
            &names,
        )
        .unwrap();
        let cll = ts.column("c_l_l").unwrap();
        for (t, c) in ts.grid.iter().zip(cll) {
            assert!((c - t.sin().powi(2) / 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn unknown_quantity_rejected() {
        let err = scan(
            &StarModel::default(),
            &Scenario::Cops,
            1.0,
            3,
            &["bogus".into()],
        )
        .unwrap_err();
        assert_eq!(err, Error::UnknownQuantity("bogus".into()));
    }

    #[test]
    fn csv_layout() {
        let ts = TimeSeries {
            grid: vec![0.0, 0.5],
            columns: vec![Column {
                name: "p_ucp".into(),
                values: vec![1.0, 0.25],
            }],
        };
        assert_eq!(ts.to_csv(), "t,p_ucp\n0,1\n0.5,0.25\n");
    }
}
