use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nblockade::blockade::{atom_number_selectivity, BlockadeModel};
use nblockade::config::{parse_config, render, Command, Flags, JobConfig};
use nblockade::figures::{eigen_curves, run_figure};
use nblockade::output::{sidecar, write_atomic, write_curves, write_grid, Meta};
use nblockade::sweep::{extrema, scan, Axis, AxisParam, Grid};
use nblockade::{Error, Result};

/// Dressed-state spectra and photon-blockade maps for N-configuration atoms
/// in a driven cavity. Rates and detunings are in units of Ω unless
/// --absolute-mhz is given.
#[derive(Parser)]
#[command(name = "nblockade", version)]
struct Cli {
    #[command(subcommand)]
    job: Job,
}

#[derive(Subcommand)]
enum Job {
    /// Dressed energies of one manifold, at a point or along grid_x.
    Spectrum(Common),
    /// ρ_exc^(1), ρ_exc^(2) and the transition table at one point.
    Rho(Common),
    /// A metric over the grid_x × grid_y plane.
    Scan(Common),
    /// Regenerate the dataset of a figure (2-7).
    Figure(Common),
    /// ρ_exc^(1) for 0..=n_atoms atoms at the configured drive offset.
    Selectivity(Common),
}

#[derive(Args)]
struct Common {
    /// `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    figure: Option<u32>,
    /// Atom number (overrides n_atoms).
    #[arg(long)]
    atoms: Option<String>,
    #[arg(long)]
    metric: Option<String>,
    #[arg(long)]
    out: Option<String>,
    /// Also write a .ppm heatmap next to each grid CSV.
    #[arg(long)]
    heatmap: bool,
    /// Read rates and detunings in MHz and divide by omega_mhz.
    #[arg(long)]
    absolute_mhz: bool,
    /// Print the effective configuration before running.
    #[arg(long)]
    show_config: bool,

    #[arg(long, allow_hyphen_values = true)]
    omega_mhz: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    g_over_omega: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    g_ac_over_omega: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    g_bd_over_omega: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    delta_over_omega: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    delta_omega_over_omega: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    gamma_c_over_omega: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    gamma_d_over_omega: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    gamma_cav_over_omega: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta_over_omega: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    drive_offset_over_omega: Option<String>,
    #[arg(long)]
    n_atoms: Option<String>,
    #[arg(long)]
    quanta: Option<String>,
    /// `[param:]start:stop:count`
    #[arg(long, allow_hyphen_values = true)]
    grid_x: Option<String>,
    /// `[param:]start:stop:count`
    #[arg(long, allow_hyphen_values = true)]
    grid_y: Option<String>,
}

impl Common {
    fn flags(&self, command: Command) -> Flags {
        let pairs = [
            ("omega_mhz", &self.omega_mhz),
            ("g_over_omega", &self.g_over_omega),
            ("g_ac_over_omega", &self.g_ac_over_omega),
            ("g_bd_over_omega", &self.g_bd_over_omega),
            ("delta_over_omega", &self.delta_over_omega),
            ("delta_omega_over_omega", &self.delta_omega_over_omega),
            ("gamma_c_over_omega", &self.gamma_c_over_omega),
            ("gamma_d_over_omega", &self.gamma_d_over_omega),
            ("gamma_cav_over_omega", &self.gamma_cav_over_omega),
            ("beta_over_omega", &self.beta_over_omega),
            ("drive_offset_over_omega", &self.drive_offset_over_omega),
            ("n_atoms", &self.n_atoms),
            ("n_atoms", &self.atoms),
            ("quanta", &self.quanta),
            ("grid_x", &self.grid_x),
            ("grid_y", &self.grid_y),
            ("metric", &self.metric),
            ("out", &self.out),
        ];
        Flags {
            figure: self.figure,
            heatmap: self.heatmap,
            absolute_mhz: self.absolute_mhz,
            overrides: pairs
                .into_iter()
                .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
                .collect(),
            ..Flags::new(command)
        }
    }

    fn load(&self, command: Command) -> Result<JobConfig> {
        let text = match &self.config {
            Some(path) => {
                fs::read_to_string(path).map_err(|e| Error::config(path.display().to_string(), e.to_string()))?
            }
            None => String::new(),
        };
        parse_config(&text, &self.flags(command))
    }
}

fn write_report(config: &JobConfig, text: &str) -> Result<()> {
    print!("{text}");
    if let Some(out) = &config.out {
        write_atomic(out, text.as_bytes())?;
    }
    Ok(())
}

fn spectrum(config: &JobConfig) -> Result<()> {
    let axis = config
        .grid_x
        .unwrap_or_else(|| Axis::fixed(AxisParam::DeltaOverOmega, config.params.delta));
    let points = eigen_curves(&config.params, config.n_atoms(), config.quanta, &axis, None, false)?;
    match &config.out {
        Some(out) => {
            let mut meta = Meta::new();
            meta.push("command", "spectrum")
                .push("n_atoms", config.n_atoms())
                .push("quanta", config.quanta)
                .params(&config.params)
                .axis("x", &axis);
            for f in write_curves(out, &points, &meta)? {
                println!("wrote {}", f.display());
            }
        }
        None => {
            println!(
                "{:>12} {:>6} {:>16} {:>16} active",
                axis.param.name(),
                "branch",
                "Re E/Ω",
                "Im E/Ω"
            );
            for p in &points {
                println!(
                    "{:>12} {:>6} {:>16.10} {:>16.10} {}",
                    p.x, p.branch, p.energy.re, p.energy.im, p.active
                );
            }
        }
    }
    Ok(())
}

fn rho(config: &JobConfig) -> Result<()> {
    let model = BlockadeModel::new(config.n_atoms())?;
    let report = model.evaluate(&config.params)?;
    let one = model.one_quantum_spectrum(&config.params)?;
    let two = model.two_quanta_spectrum(&config.params)?;
    let mut s = String::new();
    let _ = writeln!(s, "n_atoms = {}", config.n_atoms());
    let _ = writeln!(s, "rho_exc_1 = {}", report.rho_exc_1);
    let _ = writeln!(s, "rho_exc_2 = {}", report.rho_exc_2);
    let g1 = &one.states()[report.g1_index];
    let _ = writeln!(s, "g1_energy_over_omega = {} {:+}i", g1.energy.re, g1.energy.im);
    for (title, states, metrics) in [
        ("one quantum (from ground)", one.states(), &report.one_quantum),
        ("two quanta (from G1)", two.states(), &report.two_quanta),
    ] {
        let _ = writeln!(s, "\n# {title}");
        let _ = writeln!(
            s,
            "# {:>14} {:>14} {:>12} {:>12} {:>12}",
            "Re E/Ω", "Im E/Ω", "Ω_e/Ω", "Δ_e/Ω", "rho"
        );
        for (st, m) in states.iter().zip(metrics.iter()) {
            let _ = writeln!(
                s,
                "  {:>14.8} {:>14.8} {:>12.6e} {:>12.6} {:>12.6e}",
                st.energy.re, st.energy.im, m.omega_e, m.delta_e, m.rho
            );
        }
    }
    write_report(config, &s)
}

fn scan_job(config: &JobConfig) -> Result<()> {
    let (Some(x), Some(y)) = (config.grid_x, config.grid_y) else {
        return Err(Error::config("grid_x/grid_y", "a scan needs both axes"));
    };
    let out = config
        .out
        .clone()
        .ok_or_else(|| Error::config("out", "missing required key for scan"))?;
    let grid: Grid = scan(&config.params, x, y, config.metric, config.n_atoms())?;
    let mut meta = Meta::new();
    meta.push("command", "scan").grid(&grid);
    if let Some(w) = config.omega_mhz {
        meta.push("omega_mhz", w);
    }
    for f in write_grid(&out, &grid, &meta, config.heatmap)? {
        println!("wrote {}", f.display());
    }
    let e = extrema(&grid);
    let (min_x, min_y) = e.min_coords(&grid);
    let (max_x, max_y) = e.max_coords(&grid);
    println!(
        "{}: min {} at ({min_x}, {min_y}); max {} at ({max_x}, {max_y})",
        grid.metric, e.min, e.max
    );
    Ok(())
}

fn selectivity(config: &JobConfig) -> Result<()> {
    let counts: Vec<usize> = (0..=config.n_atoms()).collect();
    let rows = atom_number_selectivity(&config.params, config.params.drive_offset, &counts)?;
    let mut s = format!(
        "# drive_offset_over_omega = {}\nn_atoms,rho_exc_1\n",
        config.params.drive_offset
    );
    for (n, r) in rows {
        let _ = writeln!(s, "{n},{r}");
    }
    write_report(config, &s)
}

fn figure(config: &JobConfig) -> Result<()> {
    let id = config
        .figure
        .ok_or_else(|| Error::config("flag --figure", "the figure command needs a figure id"))?;
    let out = run_figure(id, config)?;
    for line in &out.summary {
        println!("{line}");
    }
    for f in &out.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let (command, common) = match &cli.job {
        Job::Spectrum(c) => (Command::Spectrum, c),
        Job::Rho(c) => (Command::Rho, c),
        Job::Scan(c) => (Command::Scan, c),
        Job::Figure(c) => (Command::Figure, c),
        Job::Selectivity(c) => (Command::Selectivity, c),
    };
    let config = common.load(command)?;
    if common.show_config {
        eprint!("{}", render(&config));
    }
    if let (Command::Scan, Some(out)) = (command, &config.out) {
        // fail on an unwritable destination before the scan runs
        write_atomic(&sidecar(out, "meta"), b"")?;
    }
    match command {
        Command::Spectrum => spectrum(&config),
        Command::Rho => rho(&config),
        Command::Scan => scan_job(&config),
        Command::Figure => figure(&config),
        Command::Selectivity => selectivity(&config),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
