//! Job configuration: a line-oriented `key = value` file plus command-line
//! overrides.
//!
//! Every rate and detuning is given in units of Ω, so the parsed
//! [`ModelParams`] always has `omega = 1`. With `absolute_mhz` set, the same
//! keys are read as MHz and divided by `omega_mhz`.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hamiltonian::ModelParams;
use crate::manifold::ManifoldLimits;
use crate::sweep::{Axis, AxisParam, Metric};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Command {
    Spectrum,
    Rho,
    Scan,
    Figure,
    Selectivity,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Rho => "rho",
            Command::Scan => "scan",
            Command::Figure => "figure",
            Command::Selectivity => "selectivity",
        }
    }
}

/// Every key accepted in a config file, in rendering order.
pub const KEYS: [&str; 17] = [
    "omega_mhz",
    "g_over_omega",
    "g_ac_over_omega",
    "g_bd_over_omega",
    "delta_over_omega",
    "delta_omega_over_omega",
    "gamma_c_over_omega",
    "gamma_d_over_omega",
    "gamma_cav_over_omega",
    "beta_over_omega",
    "drive_offset_over_omega",
    "n_atoms",
    "quanta",
    "grid_x",
    "grid_y",
    "metric",
    "out",
];

/// Command-line flag that overrides `key`.
pub fn flag_name(key: &str) -> String {
    format!("--{}", key.replace('_', "-"))
}

#[derive(Clone, Debug, PartialEq)]
pub struct JobConfig {
    pub command: Command,
    /// Ω in MHz. Only needed to interpret absolute inputs.
    pub omega_mhz: Option<f64>,
    /// In units of Ω (`omega == 1`).
    pub params: ModelParams,
    /// `None` when not given; jobs default to one atom.
    pub n_atoms: Option<usize>,
    pub quanta: usize,
    pub grid_x: Option<Axis>,
    pub grid_y: Option<Axis>,
    pub metric: Metric,
    pub out: Option<PathBuf>,
    pub figure: Option<u32>,
    pub heatmap: bool,
}

impl JobConfig {
    pub fn n_atoms(&self) -> usize {
        self.n_atoms.unwrap_or(1)
    }
}

/// Values that only come from the command line, plus per-key overrides
/// given as `(key, raw value)` and applied after the file in order.
#[derive(Clone, Debug, PartialEq)]
pub struct Flags {
    pub command: Command,
    pub figure: Option<u32>,
    pub heatmap: bool,
    pub absolute_mhz: bool,
    pub overrides: Vec<(String, String)>,
}

impl Flags {
    pub fn new(command: Command) -> Self {
        Flags {
            command,
            figure: None,
            heatmap: false,
            absolute_mhz: false,
            overrides: Vec::new(),
        }
    }

    /// Flags that reproduce the command-line-only fields of `config`.
    pub fn for_config(config: &JobConfig) -> Self {
        Flags {
            figure: config.figure,
            heatmap: config.heatmap,
            ..Flags::new(config.command)
        }
    }

    pub fn set(mut self, key: &str, value: impl Into<String>) -> Self {
        self.overrides.push((key.to_string(), value.into()));
        self
    }
}

struct Entry {
    key: String,
    value: String,
    location: String,
}

fn file_entries(text: &str) -> Result<Vec<Entry>> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let location = format!("line {}", i + 1);
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::config(
                location,
                format!("expected `key = value`, found `{line}`"),
            ));
        };
        entries.push(Entry {
            key: key.trim().to_string(),
            value: value.trim().to_string(),
            location,
        });
    }
    Ok(entries)
}

fn number(entry: &Entry) -> Result<f64> {
    let v = f64::from_str(&entry.value).map_err(|_| {
        Error::config(
            &entry.location,
            format!("{}: `{}` is not a number", entry.key, entry.value),
        )
    })?;
    if !v.is_finite() {
        return Err(Error::config(
            &entry.location,
            format!("{}: value must be finite", entry.key),
        ));
    }
    Ok(v)
}

fn count(entry: &Entry) -> Result<usize> {
    entry.value.parse().map_err(|_| {
        Error::config(
            &entry.location,
            format!("{}: `{}` is not a non-negative integer", entry.key, entry.value),
        )
    })
}

/// `start:stop:count`, optionally prefixed by a parameter name.
fn axis(entry: &Entry, default: AxisParam, scale: f64) -> Result<Axis> {
    let bad = |msg: String| Error::config(&entry.location, format!("{}: {msg}", entry.key));
    let parts: Vec<&str> = entry.value.split(':').map(str::trim).collect();
    let (param, rest) = match parts.len() {
        3 => (default, &parts[..]),
        4 => (
            AxisParam::from_str(parts[0]).map_err(|e| bad(e.to_string()))?,
            &parts[1..],
        ),
        _ => return Err(bad(format!("expected `start:stop:count`, found `{}`", entry.value))),
    };
    let bound = |s: &str| {
        f64::from_str(s)
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| bad(format!("`{s}` is not a number")))
    };
    let n = rest[2]
        .parse::<usize>()
        .map_err(|_| bad(format!("`{}` is not a point count", rest[2])))?;
    Axis::new(param, bound(rest[0])? / scale, bound(rest[1])? / scale, n).map_err(|e| bad(e.to_string()))
}

pub fn parse_config(text: &str, flags: &Flags) -> Result<JobConfig> {
    let mut entries = file_entries(text)?;
    entries.extend(flags.overrides.iter().map(|(k, v)| Entry {
        key: k.clone(),
        value: v.clone(),
        location: format!("flag {}", flag_name(k)),
    }));
    if let Some(e) = entries.iter().find(|e| !KEYS.contains(&e.key.as_str())) {
        return Err(Error::config(&e.location, format!("unknown key `{}`", e.key)));
    }

    let mut omega_mhz = None;
    for e in entries.iter().filter(|e| e.key == "omega_mhz") {
        let v = number(e)?;
        if v <= 0.0 {
            return Err(Error::config(&e.location, "omega_mhz must be positive"));
        }
        omega_mhz = Some(v);
    }
    let scale = if flags.absolute_mhz {
        omega_mhz
            .ok_or_else(|| Error::config("omega_mhz", "missing required key (absolute MHz inputs need omega_mhz)"))?
    } else {
        1.0
    };

    let mut params = ModelParams {
        beta: 1.0,
        ..ModelParams::default()
    };
    let (mut g_ac, mut g_bd) = (None, None);
    let mut config = JobConfig {
        command: flags.command,
        omega_mhz,
        params,
        n_atoms: None,
        quanta: 1,
        grid_x: None,
        grid_y: None,
        metric: Metric::RhoExc2,
        out: None,
        figure: flags.figure,
        heatmap: flags.heatmap,
    };
    for e in &entries {
        match e.key.as_str() {
            "omega_mhz" => {}
            "g_over_omega" => {
                let v = number(e)? / scale;
                g_ac = Some(v);
                g_bd = Some(v);
            }
            "g_ac_over_omega" => g_ac = Some(number(e)? / scale),
            "g_bd_over_omega" => g_bd = Some(number(e)? / scale),
            "delta_over_omega" => params.delta = number(e)? / scale,
            "delta_omega_over_omega" => params.delta_omega = number(e)? / scale,
            "gamma_c_over_omega" => params.gamma_c = number(e)? / scale,
            "gamma_d_over_omega" => params.gamma_d = number(e)? / scale,
            "gamma_cav_over_omega" => params.gamma_cav = number(e)? / scale,
            "beta_over_omega" => params.beta = number(e)? / scale,
            "drive_offset_over_omega" => params.drive_offset = number(e)? / scale,
            "n_atoms" => {
                let n = count(e)?;
                let max = ManifoldLimits::default().max_atoms;
                if n == 0 || n > max {
                    return Err(Error::config(&e.location, format!("n_atoms must be in 1..={max}")));
                }
                config.n_atoms = Some(n);
            }
            "quanta" => {
                let q = count(e)?;
                let max = ManifoldLimits::default().max_quanta;
                if q > max {
                    return Err(Error::config(&e.location, format!("quanta must be at most {max}")));
                }
                config.quanta = q;
            }
            "grid_x" => config.grid_x = Some(axis(e, AxisParam::DeltaOverOmega, scale)?),
            "grid_y" => config.grid_y = Some(axis(e, AxisParam::GOverOmega, scale)?),
            "metric" => {
                config.metric = Metric::from_str(&e.value).map_err(|err| Error::config(&e.location, err.to_string()))?
            }
            "out" => {
                if e.value.is_empty() {
                    return Err(Error::config(&e.location, "out: empty path"));
                }
                config.out = Some(PathBuf::from(&e.value));
            }
            _ => unreachable!("keys were checked above"),
        }
    }

    let grid_sets_g = [config.grid_x, config.grid_y]
        .iter()
        .flatten()
        .any(|a| a.param == AxisParam::GOverOmega);
    match (g_ac, g_bd) {
        (Some(a), b) => {
            params.g_ac = a;
            params.g_bd = b.unwrap_or(a);
        }
        (None, b) if flags.command == Command::Figure || grid_sets_g => {
            params.g_bd = b.unwrap_or(0.0);
        }
        (None, _) => {
            return Err(Error::config(
                "g_over_omega",
                "missing required key (or g_ac_over_omega)",
            ));
        }
    }
    params
        .validate()
        .map_err(|e| Error::config("parameters", e.to_string()))?;
    config.params = params;

    if flags.command != Command::Figure && omega_mhz.is_none() {
        return Err(Error::config("omega_mhz", "missing required key"));
    }
    if let Some(id) = flags.figure {
        if !(2..=7).contains(&id) {
            return Err(Error::UnsupportedFigure(id));
        }
    }
    match flags.command {
        Command::Figure if flags.figure.is_none() => {
            return Err(Error::config("flag --figure", "the figure command needs a figure id"));
        }
        Command::Scan => {
            let (Some(x), Some(y)) = (config.grid_x, config.grid_y) else {
                return Err(Error::config("grid_x/grid_y", "a scan needs both axes"));
            };
            if x.param == y.param {
                return Err(Error::config("grid_y", format!("both axes scan {}", x.param)));
            }
        }
        _ => {}
    }
    Ok(config)
}

fn render_axis(axis: &Axis, default: AxisParam) -> String {
    let prefix = if axis.param == default {
        String::new()
    } else {
        format!("{}:", axis.param)
    };
    format!("{prefix}{}:{}:{}", axis.start, axis.stop, axis.count)
}

/// Config-file text for `config`, in Ω units. Parsing it back with
/// [`Flags::for_config`] reproduces `config` exactly.
pub fn render(config: &JobConfig) -> String {
    let p = &config.params;
    let mut s = String::new();
    let mut line = |k: &str, v: String| {
        let _ = writeln!(s, "{k} = {v}");
    };
    if let Some(w) = config.omega_mhz {
        line("omega_mhz", w.to_string());
    }
    line("g_ac_over_omega", p.g_ac.to_string());
    line("g_bd_over_omega", p.g_bd.to_string());
    line("delta_over_omega", p.delta.to_string());
    line("delta_omega_over_omega", p.delta_omega.to_string());
    line("gamma_c_over_omega", p.gamma_c.to_string());
    line("gamma_d_over_omega", p.gamma_d.to_string());
    line("gamma_cav_over_omega", p.gamma_cav.to_string());
    line("beta_over_omega", p.beta.to_string());
    line("drive_offset_over_omega", p.drive_offset.to_string());
    if let Some(n) = config.n_atoms {
        line("n_atoms", n.to_string());
    }
    line("quanta", config.quanta.to_string());
    if let Some(x) = &config.grid_x {
        line("grid_x", render_axis(x, AxisParam::DeltaOverOmega));
    }
    if let Some(y) = &config.grid_y {
        line("grid_y", render_axis(y, AxisParam::GOverOmega));
    }
    line("metric", config.metric.to_string());
    if let Some(out) = &config.out {
        line("out", out.display().to_string());
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rho() -> Flags {
        Flags::new(Command::Rho)
    }

    fn location(err: Error) -> String {
        match err {
            Error::Config { location, .. } => location,
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn cavity_decay_is_scaled_by_omega() {
        let c = parse_config(
            "omega_mhz = 10\ng_over_omega = 1\ngamma_cav_over_omega = 0.01\n",
            &rho(),
        )
        .unwrap();
        assert_eq!(c.params.gamma_cav, 0.01);
        assert_eq!(c.params.omega, 1.0);
    }

    #[test]
    fn defaults_are_applied() {
        let c = parse_config("omega_mhz = 10\ng_over_omega = 2\n", &rho()).unwrap();
        assert_eq!(c.params.drive_offset, 0.0);
        assert_eq!(c.params.delta_omega, 0.0);
        assert_eq!(c.params.beta, 1.0);
        assert_eq!((c.params.g_ac, c.params.g_bd), (2.0, 2.0));
        assert_eq!(c.n_atoms(), 1);
        assert_eq!(c.quanta, 1);
        assert_eq!(c.metric, Metric::RhoExc2);
    }

    #[test]
    fn empty_file_needs_omega() {
        let err = parse_config("", &rho().set("g_over_omega", "1")).unwrap_err();
        assert_eq!(location(err), "omega_mhz");
    }

    #[test]
    fn flag_overrides_file() {
        let text = "omega_mhz = 10\ng_over_omega = 1\n";
        let c = parse_config(text, &rho().set("g_over_omega", "12")).unwrap();
        assert_eq!(c.params.g_ac, 12.0);
        assert_eq!(c.params.g_bd, 12.0);
    }

    #[test]
    fn errors_name_the_line() {
        let text = "omega_mhz = 10\n# comment\ng_over_omega = 1\nbogus = 3\n";
        assert_eq!(location(parse_config(text, &rho()).unwrap_err()), "line 4");
        let text = "omega_mhz = 10\ng_over_omega = one\n";
        assert_eq!(location(parse_config(text, &rho()).unwrap_err()), "line 2");
        let text = "omega_mhz = 10\ng_over_omega\n";
        assert_eq!(location(parse_config(text, &rho()).unwrap_err()), "line 2");
        let err = parse_config("omega_mhz = 10\n", &rho().set("g_over_omega", "x")).unwrap_err();
        assert_eq!(location(err), "flag --g-over-omega");
    }

    #[test]
    fn trailing_comments_are_ignored() {
        let c = parse_config("omega_mhz = 10 # MHz\ng_over_omega = 3 # strong\n", &rho()).unwrap();
        assert_eq!(c.params.g_ac, 3.0);
    }

    #[test]
    fn absolute_mode_divides_by_omega() {
        let text = "omega_mhz = 10\ng_over_omega = 120\ngamma_cav_over_omega = 40\ngrid_x = -100:100:5\n";
        let flags = Flags {
            absolute_mhz: true,
            ..rho()
        };
        let c = parse_config(text, &flags).unwrap();
        assert_eq!(c.params.g_ac, 12.0);
        assert_eq!(c.params.gamma_cav, 4.0);
        let x = c.grid_x.unwrap();
        assert_eq!((x.start, x.stop, x.count), (-10.0, 10.0, 5));
    }

    #[test]
    fn axes_accept_a_parameter_prefix() {
        let text = "omega_mhz = 1\ng_over_omega = 1\ngrid_x = g_bd_over_omega:0:5:11\ngrid_y = -1:1:3\n";
        let c = parse_config(text, &Flags::new(Command::Scan)).unwrap();
        assert_eq!(c.grid_x.unwrap().param, AxisParam::GBdOverOmega);
        assert_eq!(c.grid_y.unwrap().param, AxisParam::GOverOmega);
    }

    #[test]
    fn scan_needs_two_distinct_axes() {
        let text = "omega_mhz = 1\ngrid_x = -1:1:3\n";
        assert!(parse_config(text, &Flags::new(Command::Scan)).is_err());
        let text = "omega_mhz = 1\ng_over_omega = 1\ngrid_x = -1:1:3\ngrid_y = delta_over_omega:0:1:2\n";
        assert!(parse_config(text, &Flags::new(Command::Scan)).is_err());
    }

    #[test]
    fn figure_ids_are_checked() {
        let flags = Flags {
            figure: Some(8),
            ..Flags::new(Command::Figure)
        };
        assert!(matches!(parse_config("", &flags), Err(Error::UnsupportedFigure(8))));
        let flags = Flags {
            figure: Some(5),
            ..Flags::new(Command::Figure)
        };
        assert!(parse_config("", &flags).is_ok());
    }

    #[test]
    fn rejects_bad_values() {
        for text in [
            "omega_mhz = -1\ng_over_omega = 1\n",
            "omega_mhz = 1\ng_over_omega = 1\nn_atoms = 0\n",
            "omega_mhz = 1\ng_over_omega = 1\nquanta = 9\n",
            "omega_mhz = 1\ng_over_omega = 1\ngamma_c_over_omega = -0.1\n",
            "omega_mhz = 1\ng_over_omega = 1\nmetric = purity\n",
            "omega_mhz = 1\ng_over_omega = inf\n",
        ] {
            assert!(parse_config(text, &rho()).is_err(), "{text}");
        }
    }

    #[test]
    fn render_round_trips() {
        let text = "omega_mhz = 10\ng_ac_over_omega = 0.1\ng_bd_over_omega = 12\ndelta_over_omega = -660.5\n\
                    gamma_cav_over_omega = 4\nn_atoms = 3\nquanta = 2\ngrid_x = -1:1:3\n\
                    grid_y = drive_offset_over_omega:0:2:5\nmetric = rho_exc_1\nout = runs/a.csv\n";
        let c = parse_config(text, &Flags::new(Command::Scan)).unwrap();
        assert_eq!(parse_config(&render(&c), &Flags::for_config(&c)).unwrap(), c);
    }
}
