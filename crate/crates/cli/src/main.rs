//! Batch front-end: reproducible experiments over the cluster-gas library.
//!
//! Every subcommand reads optional defaults from `--config`, applies flag
//! overrides, and emits CSV/JSON artifacts stamped with the tool version,
//! the hash of the resolved configuration, and the seed.
//!
//! Exit codes: 0 success, 1 runtime error, 2 invalid input or enumeration
//! cap, 3 convergence-condition failure.

mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use cluster_gas::correlations::{
    decay_profile, psi_coefficients, truncated_two_point, DecayParams, PsiRequest, SourceBall,
};
use cluster_gas::expansion::{free_energy_series, kp_check, stirling_correction};
use cluster_gas::graphs;
use cluster_gas::mc::McConfig;
use cluster_gas::oracle;
use cluster_gas::potential::{BoundaryCondition, PairPotential};
use cluster_gas::weights::{
    irreducible_coefficient, irreducible_coefficient_mc, WeightRecord,
};

use config::{config_hash, make_box, parse_bc, resolve_potential, ConfigFile};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "cluster-gas", version, about = "Cluster-expansion experiments for finite-range gases")]
struct Cli {
    /// TOML file with defaults; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed recorded in every output.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo stream count (results are deterministic per count).
    #[arg(long, global = true)]
    workers: Option<u32>,
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GraphClass {
    Connected,
    Biconnected,
    Trees,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BcChoice {
    Periodic,
    Zero,
    Both,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count (and optionally dump) labeled graphs of a class.
    Graphs {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        class: GraphClass,
        /// Write one graph per line to this file.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Irreducible coefficient of the given order.
    Beta {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        potential: Option<PathBuf>,
        #[arg(long)]
        beta: Option<f64>,
        /// Dimension; defaults to the config's box dimension, then 1.
        #[arg(long)]
        d: Option<usize>,
        /// Force the Monte Carlo route.
        #[arg(long)]
        mc: bool,
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Convergence-condition report at the given density.
    KpReport {
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long)]
        potential: Option<PathBuf>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 0.0)]
        c: f64,
        #[arg(long, default_value_t = 1)]
        d: usize,
    },
    /// Finite-volume free-energy scan over a list of box sides.
    FreeEnergyScan {
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        ell: Vec<f64>,
        #[arg(long, value_enum, default_value_t = BcChoice::Both)]
        bc: BcChoice,
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        #[arg(long)]
        potential: Option<PathBuf>,
        #[arg(long)]
        beta: Option<f64>,
    },
    /// Generating-function coefficients and derived correlation values.
    Correlations {
        /// Particle count; defaults to the config's thermo.n.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        ell: Option<f64>,
        #[arg(long)]
        q1: f64,
        #[arg(long)]
        q2: f64,
        #[arg(long, default_value_t = 0.1)]
        eta: f64,
        #[arg(long)]
        potential: Option<PathBuf>,
        #[arg(long)]
        beta: Option<f64>,
        /// Force the Monte Carlo route.
        #[arg(long)]
        mc: bool,
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Truncated-correlation decay table from a Markov chain.
    Decay {
        /// Particle count; defaults to the config's thermo.n.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        ell: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        r: Vec<f64>,
        #[arg(long)]
        sweeps: Option<usize>,
        #[arg(long)]
        stride: Option<usize>,
        #[arg(long)]
        potential: Option<PathBuf>,
        #[arg(long)]
        beta: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = err
                .downcast_ref::<cluster_gas::Error>()
                .map(|e| match e {
                    cluster_gas::Error::CapExceeded { .. }
                    | cluster_gas::Error::InvalidInput(_)
                    | cluster_gas::Error::Parse(_) => 2u8,
                    cluster_gas::Error::Convergence(_) => 3,
                    _ => 1,
                })
                .unwrap_or(1);
            ExitCode::from(code)
        }
    }
}

struct Resolved {
    file: ConfigFile,
    seed: u64,
    workers: u32,
    out: Option<PathBuf>,
}

impl Resolved {
    fn beta_or(&self, flag: Option<f64>) -> f64 {
        flag.or(self.file.thermo.beta).unwrap_or(1.0)
    }

    fn dim_or(&self, flag: Option<usize>) -> usize {
        flag.or(self.file.r#box.dim).unwrap_or(1)
    }

    fn particles_or(&self, flag: Option<usize>) -> Result<usize> {
        flag.or(self.file.thermo.n).context("particle count required (--n or thermo.n)")
    }

    fn potential(&self, flag: &Option<PathBuf>) -> Result<PairPotential> {
        if let Some(path) = flag {
            return Ok(PairPotential::from_toml_path(path)?);
        }
        resolve_potential(&self.file.potential)
    }

    fn mc_config(&self, samples: Option<u64>) -> McConfig {
        let samples = samples.or(self.file.budget.samples).unwrap_or(1_000_000);
        McConfig::new(samples, self.seed).with_workers(self.workers)
    }

    fn header(&self, canonical: &str) -> String {
        format!(
            "# cluster-gas v{VERSION} config={:016x} seed={} workers={}\n",
            config_hash(canonical),
            self.seed,
            self.workers
        )
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => {
                if let Some(parent) = path.parent() {
                    if !parent.as_os_str().is_empty() {
                        std::fs::create_dir_all(parent)?;
                    }
                }
                let mut f = std::fs::File::create(path)
                    .with_context(|| format!("creating {}", path.display()))?;
                f.write_all(text.as_bytes())?;
                Ok(())
            }
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let resolved = Resolved {
        seed: cli.seed.or(file.seed).unwrap_or(0),
        workers: cli.workers.or(file.workers).unwrap_or(1).max(1),
        out: cli.out.clone().or_else(|| {
            file.out_dir.as_ref().map(|dir| dir.join(default_name(&cli.command)))
        }),
        file,
    };
    match cli.command {
        Command::Graphs { n, class, dump } => cmd_graphs(&resolved, n, class, dump),
        Command::Beta { n, potential, beta, d, mc, samples } => {
            cmd_beta(&resolved, n, &potential, beta, d, mc, samples)
        }
        Command::KpReport { rho, potential, beta, a, c, d } => {
            cmd_kp_report(&resolved, rho, &potential, beta, a, c, d)
        }
        Command::FreeEnergyScan { rho, ell, bc, n_max, potential, beta } => {
            cmd_free_energy_scan(&resolved, rho, &ell, bc, n_max, &potential, beta)
        }
        Command::Correlations { n, ell, q1, q2, eta, potential, beta, mc, samples } => {
            cmd_correlations(&resolved, n, ell, q1, q2, eta, &potential, beta, mc, samples)
        }
        Command::Decay { n, ell, r, sweeps, stride, potential, beta } => {
            cmd_decay(&resolved, n, ell, &r, sweeps, stride, &potential, beta)
        }
    }
}

fn default_name(command: &Command) -> &'static str {
    match command {
        Command::Graphs { .. } => "graphs.txt",
        Command::Beta { .. } => "beta.json",
        Command::KpReport { .. } => "kp_report.json",
        Command::FreeEnergyScan { .. } => "free_energy_scan.csv",
        Command::Correlations { .. } => "correlations.json",
        Command::Decay { .. } => "decay.csv",
    }
}

fn cmd_graphs(res: &Resolved, n: usize, class: GraphClass, dump: Option<PathBuf>) -> Result<()> {
    let graphs = match class {
        GraphClass::Connected => graphs::enumerate_connected(n)?,
        GraphClass::Biconnected => graphs::enumerate_biconnected(n)?,
        GraphClass::Trees => graphs::enumerate_trees(n)?,
    };
    if let Some(path) = dump {
        let canonical = format!("graphs n={n} class={class:?}");
        let mut text = res.header(&canonical);
        for g in &graphs {
            text.push_str(&g.dump_line());
            text.push('\n');
        }
        std::fs::write(&path, text)?;
    }
    println!("{}", graphs.len());
    Ok(())
}

fn cmd_beta(
    res: &Resolved,
    n: usize,
    potential: &Option<PathBuf>,
    beta: Option<f64>,
    d: Option<usize>,
    force_mc: bool,
    samples: Option<u64>,
) -> Result<()> {
    let pot = res.potential(potential)?;
    let beta = res.beta_or(beta);
    let d = res.dim_or(d);
    let canonical = format!("beta n={n} beta={beta} d={d} pot={pot:?} mc={force_mc}");
    let measurement = if force_mc {
        irreducible_coefficient_mc(n, &pot, beta, d, res.mc_config(samples))?
    } else {
        irreducible_coefficient(n, &pot, beta, d)?
    };
    let record = WeightRecord::new(
        "irreducible-coefficient",
        serde_json::json!({
            "n": n, "beta": beta, "d": d,
            "tool": format!("cluster-gas v{VERSION}"),
            "config_hash": format!("{:016x}", config_hash(&canonical)),
            "seed": res.seed,
            "workers": res.workers,
        }),
        &measurement,
    );
    res.emit(&format!("{}\n", serde_json::to_string_pretty(&record)?))
}

fn cmd_kp_report(
    res: &Resolved,
    rho: Option<f64>,
    potential: &Option<PathBuf>,
    beta: Option<f64>,
    a: f64,
    c: f64,
    d: usize,
) -> Result<()> {
    let pot = res.potential(potential)?;
    let beta = res.beta_or(beta);
    let rho = rho.or(res.file.thermo.rho).context("kp-report needs --rho")?;
    let canonical = format!("kp rho={rho} beta={beta} a={a} c={c} d={d} pot={pot:?}");
    let report = kp_check(&pot, beta, rho, d, a, c)?;
    let mut value = serde_json::to_value(&report)?;
    value.as_object_mut().unwrap().insert(
        "meta".into(),
        serde_json::json!({
            "tool": format!("cluster-gas v{VERSION}"),
            "config_hash": format!("{:016x}", config_hash(&canonical)),
            "seed": res.seed,
        }),
    );
    res.emit(&format!("{}\n", serde_json::to_string_pretty(&value)?))?;
    if !report.geometric_converges {
        bail!(cluster_gas::Error::Convergence(format!(
            "delta' e = {:.6} >= 1",
            report.delta_prime * std::f64::consts::E
        )));
    }
    Ok(())
}

fn cmd_free_energy_scan(
    res: &Resolved,
    rho: Option<f64>,
    ell_flag: &[f64],
    bc: BcChoice,
    n_max: usize,
    potential: &Option<PathBuf>,
    beta: Option<f64>,
) -> Result<()> {
    let pot = res.potential(potential)?;
    let beta = res.beta_or(beta);
    let rho = rho.or(res.file.thermo.rho).context("free-energy-scan needs --rho")?;
    let ells: Vec<f64> = if ell_flag.is_empty() {
        res.file
            .r#box
            .ell_list
            .clone()
            .or_else(|| res.file.r#box.ell.map(|e| vec![e]))
            .context("free-energy-scan needs --ell")?
    } else {
        ell_flag.to_vec()
    };
    let bcs: Vec<BoundaryCondition> = match bc {
        BcChoice::Periodic => vec![BoundaryCondition::Periodic],
        BcChoice::Zero => vec![BoundaryCondition::Zero],
        BcChoice::Both => vec![BoundaryCondition::Periodic, BoundaryCondition::Zero],
    };
    let series = free_energy_series(rho, beta, &pot, n_max, 1, 1.0)?;
    let series_log_z = series.log_z_per_volume();
    let canonical =
        format!("scan rho={rho} beta={beta} n_max={n_max} ells={ells:?} bc={bc:?} pot={pot:?}");
    let mut text = res.header(&canonical);
    text.push_str("bc,ell,n,log_z_per_vol,series,error,err_corrected,ell_err_corrected,note\n");
    for &ell in &ells {
        let n = (rho * ell).round() as usize;
        for &b in &bcs {
            let bc_name = match b {
                BoundaryCondition::Periodic => "periodic",
                BoundaryCondition::Zero => "zero",
            };
            let log_z = if pot.is_hard_core() {
                oracle::hard_rod_log_z(n, ell, pot.range(), b)?.log_z
            } else if pot.is_ideal() {
                oracle::log_ideal_partition(n, ell)
            } else {
                oracle::partition_bruteforce_mc(
                    n,
                    &make_box(ell, 1, b)?,
                    &pot,
                    beta,
                    res.mc_config(None),
                )?
                .log_z
            };
            if log_z.is_infinite() {
                text.push_str(&format!("{bc_name},{ell},{n},,,,,,jammed\n"));
                continue;
            }
            let per_vol = log_z / ell;
            let error = per_vol - series_log_z;
            let corrected = error + stirling_correction(n, ell);
            text.push_str(&format!(
                "{bc_name},{ell},{n},{per_vol:.12e},{series_log_z:.12e},{error:.12e},{corrected:.12e},{:.12e},\n",
                ell * corrected
            ));
        }
    }
    res.emit(&text)
}

#[allow(clippy::too_many_arguments)]
fn cmd_correlations(
    res: &Resolved,
    n: Option<usize>,
    ell: Option<f64>,
    q1: f64,
    q2: f64,
    eta: f64,
    potential: &Option<PathBuf>,
    beta: Option<f64>,
    force_mc: bool,
    samples: Option<u64>,
) -> Result<()> {
    let pot = res.potential(potential)?;
    let beta = res.beta_or(beta);
    let n = res.particles_or(n)?;
    let ell = ell.or(res.file.r#box.ell).context("correlations needs --ell")?;
    let bc = match res.file.r#box.bc.as_deref() {
        Some(name) => parse_bc(name)?,
        None => BoundaryCondition::Periodic,
    };
    let bx = make_box(ell, 1, bc)?;
    let req = PsiRequest {
        n,
        bx,
        potential: &pot,
        beta,
        source1: Some(SourceBall::new(vec![q1], eta, &bx)?),
        source2: Some(SourceBall::new(vec![q2], eta, &bx)?),
    };
    let cfg = if force_mc { Some(res.mc_config(samples)) } else { None };
    let coeffs = psi_coefficients(&req, cfg)?;
    let truncated = truncated_two_point(&req, cfg)?;
    let canonical =
        format!("corr n={n} ell={ell} q1={q1} q2={q2} eta={eta} beta={beta} pot={pot:?}");
    let out = serde_json::json!({
        "meta": {
            "tool": format!("cluster-gas v{VERSION}"),
            "config_hash": format!("{:016x}", config_hash(&canonical)),
            "seed": res.seed,
            "workers": res.workers,
        },
        "psi": coeffs,
        "truncated_two_point": truncated,
    });
    res.emit(&format!("{}\n", serde_json::to_string_pretty(&out)?))
}

#[allow(clippy::too_many_arguments)]
fn cmd_decay(
    res: &Resolved,
    n: Option<usize>,
    ell: Option<f64>,
    r_list: &[f64],
    sweeps: Option<usize>,
    stride: Option<usize>,
    potential: &Option<PathBuf>,
    beta: Option<f64>,
) -> Result<()> {
    let pot = res.potential(potential)?;
    let beta = res.beta_or(beta);
    let n = res.particles_or(n)?;
    let ell = ell.or(res.file.r#box.ell).context("decay needs --ell")?;
    let separations: Vec<f64> = if r_list.is_empty() {
        (2..=10).map(|k| k as f64 * pot.range()).collect()
    } else {
        r_list.to_vec()
    };
    let sweeps = sweeps.or(res.file.budget.sweeps).unwrap_or(1_000_000);
    let stride = stride.or(res.file.budget.stride_sweeps).unwrap_or(10 * n);
    let params = DecayParams {
        n,
        bx: make_box(ell, 1, BoundaryCondition::Periodic)?,
        potential: &pot,
        beta,
        separations,
        sweeps,
        stride_sweeps: stride,
        seed: res.seed,
    };
    let profile = decay_profile(&params)?;
    let canonical = format!(
        "decay n={n} ell={ell} beta={beta} sweeps={sweeps} stride={stride} pot={pot:?} r={:?}",
        params.separations
    );
    let mut text = res.header(&canonical);
    text.push_str(&profile.to_csv());
    res.emit(&text)
}
