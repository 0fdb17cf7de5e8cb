//! Two-dimensional parameter scans of a scalar metric.
//!
//! Axis values are dimensionless (in units of Ω) and are multiplied by the
//! template's `omega` before substitution. Cells are evaluated in parallel and
//! stored row-major with x fastest, so a grid does not depend on the order in
//! which its cells were computed.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::blockade::BlockadeModel;
use crate::error::{Error, Result};
use crate::hamiltonian::ModelParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AxisParam {
    DeltaOverOmega,
    /// Sets g_ac and g_bd together.
    GOverOmega,
    GBdOverOmega,
    DriveOffsetOverOmega,
}

impl AxisParam {
    pub fn name(self) -> &'static str {
        match self {
            AxisParam::DeltaOverOmega => "delta_over_omega",
            AxisParam::GOverOmega => "g_over_omega",
            AxisParam::GBdOverOmega => "g_bd_over_omega",
            AxisParam::DriveOffsetOverOmega => "drive_offset_over_omega",
        }
    }

    pub fn apply(self, params: &mut ModelParams, ratio: f64) {
        let value = ratio * params.omega;
        match self {
            AxisParam::DeltaOverOmega => params.delta = value,
            AxisParam::GOverOmega => {
                params.g_ac = value;
                params.g_bd = value;
            }
            AxisParam::GBdOverOmega => params.g_bd = value,
            AxisParam::DriveOffsetOverOmega => params.drive_offset = value,
        }
    }
}

impl fmt::Display for AxisParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AxisParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "delta_over_omega" => Ok(AxisParam::DeltaOverOmega),
            "g_over_omega" => Ok(AxisParam::GOverOmega),
            "g_bd_over_omega" => Ok(AxisParam::GBdOverOmega),
            "drive_offset_over_omega" => Ok(AxisParam::DriveOffsetOverOmega),
            other => Err(Error::InvalidAxis(format!("unknown parameter `{other}`"))),
        }
    }
}

/// Linearly spaced axis, `count` points from `start` to `stop` inclusive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub param: AxisParam,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(param: AxisParam, start: f64, stop: f64, count: usize) -> Result<Self> {
        let axis = Axis {
            param,
            start,
            stop,
            count,
        };
        axis.validate()?;
        Ok(axis)
    }

    /// Single-point axis.
    pub fn fixed(param: AxisParam, value: f64) -> Self {
        Axis {
            param,
            start: value,
            stop: value,
            count: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidAxis(format!("{}: count must be >= 1", self.param)));
        }
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::InvalidAxis(format!("{}: bounds must be finite", self.param)));
        }
        if self.start > self.stop {
            return Err(Error::InvalidAxis(format!(
                "{}: start {} exceeds stop {}",
                self.param, self.start, self.stop
            )));
        }
        Ok(())
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.count == 1 {
            self.start
        } else if i + 1 == self.count {
            self.stop
        } else {
            self.start + (self.stop - self.start) * i as f64 / (self.count - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Metric {
    RhoExc1,
    RhoExc2,
    /// Smallest |Re E|/Ω over the two-quanta manifold.
    MinAbsRealEnergy,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::RhoExc1 => "rho_exc_1",
            Metric::RhoExc2 => "rho_exc_2",
            Metric::MinAbsRealEnergy => "min_abs_real_energy",
        }
    }

    fn is_population(self) -> bool {
        matches!(self, Metric::RhoExc1 | Metric::RhoExc2)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rho_exc_1" => Ok(Metric::RhoExc1),
            "rho_exc_2" => Ok(Metric::RhoExc2),
            "min_abs_real_energy" => Ok(Metric::MinAbsRealEnergy),
            other => Err(Error::UnknownMetric(other.to_string())),
        }
    }
}

/// Evaluates `metric` at one parameter point.
pub fn evaluate_metric(model: &BlockadeModel, params: &ModelParams, metric: Metric) -> Result<f64> {
    match metric {
        Metric::RhoExc1 => Ok(model.rho_exc_1(params)?.0),
        Metric::RhoExc2 => Ok(model.evaluate(params)?.rho_exc_2),
        Metric::MinAbsRealEnergy => {
            params.validate()?;
            Ok(model.two_quanta_spectrum(params)?.min_abs_shift() / params.omega)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub x: Axis,
    pub y: Axis,
    pub n_atoms: usize,
    pub metric: Metric,
    /// Row-major, x fastest: `values[iy * x.count + ix]`.
    pub values: Vec<f64>,
    /// Template the axis values were substituted into.
    pub params: ModelParams,
}

impl Grid {
    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.x.count + ix]
    }

    pub fn cell_params(&self, ix: usize, iy: usize) -> ModelParams {
        cell_params(&self.params, &self.x, &self.y, ix, iy)
    }

    /// Values along x at fixed `iy`.
    pub fn row(&self, iy: usize) -> &[f64] {
        &self.values[iy * self.x.count..(iy + 1) * self.x.count]
    }
}

fn cell_params(template: &ModelParams, x: &Axis, y: &Axis, ix: usize, iy: usize) -> ModelParams {
    let mut p = *template;
    x.param.apply(&mut p, x.value(ix));
    y.param.apply(&mut p, y.value(iy));
    p
}

fn check_axes(x: &Axis, y: &Axis) -> Result<()> {
    x.validate()?;
    y.validate()?;
    if x.param == y.param {
        return Err(Error::InvalidAxis(format!("both axes scan {}", x.param)));
    }
    Ok(())
}

fn eval_cell(
    model: &BlockadeModel,
    template: &ModelParams,
    x: &Axis,
    y: &Axis,
    metric: Metric,
    k: usize,
) -> Result<f64> {
    let (ix, iy) = (k % x.count, k / x.count);
    let value = evaluate_metric(model, &cell_params(template, x, y, ix, iy), metric)?;
    let in_range = !metric.is_population() || (0.0..=0.5).contains(&value);
    if !value.is_finite() || !in_range {
        return Err(Error::BadCell {
            metric: metric.name().to_string(),
            ix,
            iy,
            value,
        });
    }
    Ok(value)
}

pub fn scan(template: &ModelParams, x: Axis, y: Axis, metric: Metric, n_atoms: usize) -> Result<Grid> {
    check_axes(&x, &y)?;
    template.validate()?;
    let model = BlockadeModel::new(n_atoms)?;
    let values = (0..x.count * y.count)
        .into_par_iter()
        .map(|k| eval_cell(&model, template, &x, &y, metric, k))
        .collect::<Result<Vec<f64>>>()?;
    Ok(Grid {
        x,
        y,
        n_atoms,
        metric,
        values,
        params: *template,
    })
}

/// Sequential scan visiting cells in the given order (a permutation of the
/// row-major cell indices). The result is identical to [`scan`].
pub fn scan_in_order(
    template: &ModelParams,
    x: Axis,
    y: Axis,
    metric: Metric,
    n_atoms: usize,
    order: &[usize],
) -> Result<Grid> {
    check_axes(&x, &y)?;
    template.validate()?;
    let len = x.count * y.count;
    let mut seen = vec![false; len];
    if order.len() != len || order.iter().any(|&k| k >= len || std::mem::replace(&mut seen[k], true)) {
        return Err(Error::InvalidAxis("cell order is not a permutation of the grid".into()));
    }
    let model = BlockadeModel::new(n_atoms)?;
    let mut values = vec![0.0; len];
    for &k in order {
        values[k] = eval_cell(&model, template, &x, &y, metric, k)?;
    }
    Ok(Grid {
        x,
        y,
        n_atoms,
        metric,
        values,
        params: *template,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Extrema {
    pub min: f64,
    /// (ix, iy)
    pub min_at: (usize, usize),
    pub max: f64,
    pub max_at: (usize, usize),
}

impl Extrema {
    pub fn min_coords(&self, grid: &Grid) -> (f64, f64) {
        (grid.x.value(self.min_at.0), grid.y.value(self.min_at.1))
    }

    pub fn max_coords(&self, grid: &Grid) -> (f64, f64) {
        (grid.x.value(self.max_at.0), grid.y.value(self.max_at.1))
    }
}

/// Exact minimum and maximum over stored values; the first occurrence in
/// row-major order wins ties.
pub fn extrema(grid: &Grid) -> Extrema {
    assert!(!grid.values.is_empty(), "extrema of an empty grid");
    let (mut min_k, mut max_k) = (0, 0);
    for (k, &v) in grid.values.iter().enumerate() {
        if v < grid.values[min_k] {
            min_k = k;
        }
        if v > grid.values[max_k] {
            max_k = k;
        }
    }
    let at = |k: usize| (k % grid.x.count, k / grid.x.count);
    Extrema {
        min: grid.values[min_k],
        min_at: at(min_k),
        max: grid.values[max_k],
        max_at: at(max_k),
    }
}

/// Default axes for the ρ_exc maps of figures 5-7.
pub mod defaults {
    use super::{Axis, AxisParam};

    pub const POINTS: usize = 201;

    pub fn fig5() -> (Axis, Axis) {
        (
            Axis {
                param: AxisParam::DeltaOverOmega,
                start: -10.0,
                stop: 10.0,
                count: POINTS,
            },
            Axis {
                param: AxisParam::GOverOmega,
                start: 0.1,
                stop: 10.0,
                count: POINTS,
            },
        )
    }

    pub fn fig6() -> (Axis, Axis) {
        (
            Axis {
                param: AxisParam::DeltaOverOmega,
                start: -50.0,
                stop: 50.0,
                count: POINTS,
            },
            Axis {
                param: AxisParam::GOverOmega,
                start: 0.1,
                stop: 20.0,
                count: POINTS,
            },
        )
    }

    pub fn fig7() -> (Axis, Axis) {
        (
            Axis {
                param: AxisParam::DeltaOverOmega,
                start: -680.0,
                stop: -640.0,
                count: POINTS,
            },
            Axis {
                param: AxisParam::GOverOmega,
                start: 0.1,
                stop: 20.0,
                count: POINTS,
            },
        )
    }
}
