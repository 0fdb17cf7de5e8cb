//! Datasets behind figures 2-7: eigenvalue curves for the one- and
//! two-quanta manifolds and ρ_exc maps.
//!
//! Each figure is a list of panels. An axis from the job config replaces a
//! panel axis that scans the same parameter, which is how reduced or
//! extended ranges are requested.

use std::fs;
use std::path::{Path, PathBuf};

use crate::blockade::{two_state_population, BlockadeModel};
use crate::config::JobConfig;
use crate::error::{Error, Result};
use crate::hamiltonian::{build_block, ModelParams};
use crate::manifold::{AnnihilationMap, Manifold};
use crate::output::{write_curves, write_grid, CurvePoint, Meta};
use crate::spectra::{
    annihilation_overlap, classify_active, diagonalize, DressedState, Spectrum, DEFAULT_ACTIVITY_THRESHOLD,
};
use crate::sweep::{defaults, extrema, scan, Axis, AxisParam, Grid, Metric};

const CURVE_POINTS: usize = 201;
/// Δ/Ω held fixed in the two-quanta curves.
const FIXED_BIG_DELTA: f64 = 2.0;

#[derive(Clone, Debug, PartialEq)]
pub struct CurvePanel {
    pub name: String,
    pub params: ModelParams,
    pub n_atoms: usize,
    pub quanta: usize,
    pub axis: Axis,
    /// Δ held at this value while the axis moves δ.
    pub big_delta: Option<f64>,
    pub active_only: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridPanel {
    pub name: String,
    pub params: ModelParams,
    pub n_atoms: usize,
    pub metric: Metric,
    pub x: Axis,
    pub y: Axis,
}

/// Caption parameters of figures 2-4: g_ac = Γ_c = 10Γ_cav = 1, 0.1, 0.01.
fn spectrum_params() -> ModelParams {
    ModelParams {
        g_ac: 1.0,
        g_bd: 1.0,
        gamma_c: 0.1,
        gamma_d: 0.1,
        gamma_cav: 0.01,
        ..ModelParams::default()
    }
}

fn with_override(axis: Axis, config: Option<Axis>) -> Axis {
    match config {
        Some(c) if c.param == axis.param => c,
        _ => axis,
    }
}

fn restrict<T>(id: u32, panels: Vec<T>, atoms: Option<usize>, n_of: impl Fn(&T) -> usize) -> Result<Vec<T>> {
    let Some(n) = atoms else { return Ok(panels) };
    if panels.is_empty() {
        return Ok(panels);
    }
    let kept: Vec<T> = panels.into_iter().filter(|p| n_of(p) == n).collect();
    if kept.is_empty() {
        return Err(Error::config(
            "n_atoms",
            format!("figure {id} has no panel with {n} atoms"),
        ));
    }
    Ok(kept)
}

pub fn curve_panels(id: u32, config: &JobConfig) -> Result<Vec<CurvePanel>> {
    let delta = with_override(
        Axis::new(AxisParam::DeltaOverOmega, -5.0, 5.0, CURVE_POINTS)?,
        config.grid_x,
    );
    let g_bd = with_override(
        Axis::new(AxisParam::GBdOverOmega, 0.0, 5.0, CURVE_POINTS)?,
        config.grid_x,
    );
    let p = spectrum_params();
    let panel = |name: &str, params: ModelParams, n_atoms, quanta, axis, big_delta, active_only| CurvePanel {
        name: name.to_string(),
        params,
        n_atoms,
        quanta,
        axis,
        big_delta,
        active_only,
    };
    let two = |d: f64| p.with_delta(d).with_big_delta(FIXED_BIG_DELTA);
    let panels = match id {
        2 => vec![
            panel("fig2a_n1", p, 1, 1, delta, None, true),
            panel("fig2b_n2", p, 2, 1, delta, None, true),
        ],
        3 => vec![
            panel("fig3a_n1", two(0.0), 1, 2, delta, Some(FIXED_BIG_DELTA), false),
            panel("fig3b_n1", two(0.0), 1, 2, g_bd, None, false),
        ],
        4 => vec![
            panel("fig4a_n2", two(0.0), 2, 2, g_bd, None, true),
            panel("fig4b_n2", two(0.5), 2, 2, g_bd, None, true),
        ],
        5..=7 => Vec::new(),
        other => return Err(Error::UnsupportedFigure(other)),
    };
    restrict(id, panels, config.n_atoms, |p| p.n_atoms)
}

pub fn grid_panels(id: u32, config: &JobConfig) -> Result<Vec<GridPanel>> {
    let (x, y, params, entries): (_, _, _, &[(char, usize, Metric)]) = match id {
        2..=4 => return Ok(Vec::new()),
        5 => {
            let (x, y) = defaults::fig5();
            let e: &[_] = &[
                ('a', 1, Metric::RhoExc2),
                ('b', 2, Metric::RhoExc2),
                ('c', 3, Metric::RhoExc2),
            ];
            (x, y, ModelParams::ideal(), e)
        }
        6 => {
            let (x, y) = defaults::fig6();
            let e: &[_] = &[
                ('a', 1, Metric::RhoExc1),
                ('b', 1, Metric::RhoExc2),
                ('c', 2, Metric::RhoExc2),
            ];
            (x, y, ModelParams::rubidium(), e)
        }
        7 => {
            let (x, y) = defaults::fig7();
            let e: &[_] = &[
                ('a', 1, Metric::RhoExc2),
                ('b', 2, Metric::RhoExc2),
                ('c', 3, Metric::RhoExc2),
            ];
            (x, y, ModelParams::rubidium(), e)
        }
        other => return Err(Error::UnsupportedFigure(other)),
    };
    let (x, y) = (with_override(x, config.grid_x), with_override(y, config.grid_y));
    let panels = entries
        .iter()
        .map(|&(tag, n_atoms, metric)| GridPanel {
            name: format!("fig{id}{tag}_n{n_atoms}_{metric}"),
            params,
            n_atoms,
            metric,
            x,
            y,
        })
        .collect();
    restrict(id, panels, config.n_atoms, |p| p.n_atoms)
}

fn spectrum_at(params: &ModelParams, manifold: &Manifold) -> Result<Spectrum> {
    diagonalize(&build_block(params, manifold))
}

/// Occupied state of the manifold below `quanta`: the ground state, |G₁⟩,
/// then the most strongly driven state of each further rung.
fn reference_state(params: &ModelParams, n_atoms: usize, quanta: usize) -> Result<DressedState> {
    let mut state = DressedState::ground();
    if quanta < 2 {
        return Ok(state);
    }
    state = BlockadeModel::new(n_atoms)?.rho_exc_1(params)?.1;
    for q in 2..quanta {
        let lower = Manifold::new(n_atoms, q - 1)?;
        let upper = Manifold::new(n_atoms, q)?;
        let a_map = AnnihilationMap::new(&upper, &lower)?;
        let spectrum = spectrum_at(params, &upper)?;
        let mut best = (f64::NEG_INFINITY, 0);
        for (k, s) in spectrum.states().iter().enumerate() {
            let omega_e = params.beta * annihilation_overlap(&state.vector, &a_map, &s.vector)?.norm();
            let rho = two_state_population(
                omega_e,
                s.energy.re - state.energy.re - params.drive_offset,
                -s.energy.im,
            );
            if rho > best.0 {
                best = (rho, k);
            }
        }
        state = spectrum.states()[best.1].clone();
    }
    Ok(state)
}

/// Dressed energies of the `quanta` manifold along `axis`, in units of Ω.
/// Activity is judged against the occupied state one rung below.
pub fn eigen_curves(
    template: &ModelParams,
    n_atoms: usize,
    quanta: usize,
    axis: &Axis,
    big_delta: Option<f64>,
    active_only: bool,
) -> Result<Vec<CurvePoint>> {
    template.validate()?;
    axis.validate()?;
    let manifold = Manifold::new(n_atoms, quanta)?;
    let a_map = match quanta {
        0 => None,
        q => Some(AnnihilationMap::new(&manifold, &Manifold::new(n_atoms, q - 1)?)?),
    };
    let mut points = Vec::new();
    for x in axis.values() {
        let mut p = *template;
        axis.param.apply(&mut p, x);
        if let Some(d) = big_delta {
            p = p.with_big_delta(d * p.omega);
        }
        let mut spectrum = spectrum_at(&p, &manifold)?;
        if let Some(a_map) = &a_map {
            let lower = reference_state(&p, n_atoms, quanta)?;
            spectrum = classify_active(spectrum, &lower, a_map, DEFAULT_ACTIVITY_THRESHOLD)?;
        }
        for (branch, s) in spectrum.states().iter().enumerate() {
            let active = a_map.is_none() || s.active;
            if active || !active_only {
                points.push(CurvePoint {
                    x,
                    energy: s.energy / p.omega,
                    branch,
                    active,
                });
            }
        }
    }
    Ok(points)
}

pub fn curve_meta(id: u32, panel: &CurvePanel) -> Meta {
    let mut m = Meta::new();
    m.push("figure", id)
        .push("panel", &panel.name)
        .push("n_atoms", panel.n_atoms)
        .push("quanta", panel.quanta)
        .params(&panel.params)
        .axis("x", &panel.axis)
        .push("active_only", panel.active_only)
        .push("activity_threshold", DEFAULT_ACTIVITY_THRESHOLD);
    if let Some(d) = panel.big_delta {
        m.push("fixed_big_delta_over_omega", d);
    }
    m
}

pub fn grid_meta(id: u32, name: &str, grid: &Grid) -> Meta {
    let mut m = Meta::new();
    m.push("figure", id).push("panel", name).grid(grid);
    m
}

pub fn compute_grid(panel: &GridPanel) -> Result<Grid> {
    scan(&panel.params, panel.x, panel.y, panel.metric, panel.n_atoms)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct FigureOutput {
    pub files: Vec<PathBuf>,
    /// One human-readable line per panel.
    pub summary: Vec<String>,
}

fn grid_summary(name: &str, grid: &Grid) -> String {
    let e = extrema(grid);
    let (min_x, min_y) = e.min_coords(grid);
    let (max_x, max_y) = e.max_coords(grid);
    format!(
        "{name}: min {} at ({}={min_x}, {}={min_y}); max {} at ({}={max_x}, {}={max_y})",
        e.min, grid.x.param, grid.y.param, e.max, grid.x.param, grid.y.param
    )
}

/// Writes every panel of figure `id` into the directory `config.out`
/// (default: the working directory).
pub fn run_figure(id: u32, config: &JobConfig) -> Result<FigureOutput> {
    if !(2..=7).contains(&id) {
        return Err(Error::UnsupportedFigure(id));
    }
    let dir = config.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)?;
    let mut out = FigureOutput::default();
    for panel in curve_panels(id, config)? {
        let points = eigen_curves(
            &panel.params,
            panel.n_atoms,
            panel.quanta,
            &panel.axis,
            panel.big_delta,
            panel.active_only,
        )?;
        let path = dir.join(format!("{}.csv", panel.name));
        out.files.extend(write_curves(&path, &points, &curve_meta(id, &panel))?);
        out.summary.push(format!("{}: {} points", panel.name, points.len()));
    }
    for panel in grid_panels(id, config)? {
        let grid = compute_grid(&panel)?;
        let path: &Path = &dir.join(format!("{}.csv", panel.name));
        out.files.extend(write_grid(
            path,
            &grid,
            &grid_meta(id, &panel.name, &grid),
            config.heatmap,
        )?);
        out.summary.push(grid_summary(&panel.name, &grid));
    }
    Ok(out)
}
