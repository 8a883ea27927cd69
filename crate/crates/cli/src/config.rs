//! Experiment configuration: a flat TOML file of defaults that command-line
//! flags override. Every output embeds the resolved configuration's hash and
//! seed so runs can be replayed byte for byte.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use cluster_gas::potential::{BoundaryCondition, BoxSpec, PairPotential};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub workers: Option<u32>,
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub potential: PotentialSection,
    #[serde(default)]
    pub r#box: BoxSection,
    #[serde(default)]
    pub thermo: ThermoSection,
    #[serde(default)]
    pub budget: BudgetSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSection {
    pub path: Option<PathBuf>,
    pub kind: Option<String>,
    pub range: Option<f64>,
    pub stability: Option<f64>,
    pub depth: Option<f64>,
    pub table: Option<Vec<(f64, f64)>>,
    pub table_csv: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxSection {
    pub ell: Option<f64>,
    pub ell_list: Option<Vec<f64>>,
    pub dim: Option<usize>,
    pub bc: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThermoSection {
    pub beta: Option<f64>,
    pub rho: Option<f64>,
    pub n: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetSection {
    pub samples: Option<u64>,
    pub sweeps: Option<usize>,
    pub stride_sweeps: Option<usize>,
}

impl ConfigFile {
    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

/// Resolves the potential described by the config (a referenced file wins
/// over inline fields; the default is hard rods of unit length).
pub fn resolve_potential(section: &PotentialSection) -> Result<PairPotential> {
    if let Some(path) = &section.path {
        return Ok(PairPotential::from_toml_path(path)?);
    }
    let kind = section.kind.as_deref().unwrap_or("hard-core");
    let range = section.range.unwrap_or(1.0);
    let stability = section.stability.unwrap_or(0.0);
    Ok(match kind {
        "ideal" => PairPotential::ideal(),
        "hard-core" => PairPotential::hard_core(range)?,
        "square-well" => {
            let depth = section
                .depth
                .context("square-well potential needs a depth")?;
            PairPotential::square_well(range, depth, stability)?
        }
        "tabulated" => {
            let points = if let Some(points) = &section.table {
                points.clone()
            } else if let Some(csv) = &section.table_csv {
                cluster_gas::potential::load_table_csv(csv)?
            } else {
                bail!("tabulated potential needs table or table_csv");
            };
            PairPotential::tabulated(points, range, stability)?
        }
        other => bail!("unknown potential kind {other:?}"),
    })
}

pub fn parse_bc(name: &str) -> Result<BoundaryCondition> {
    match name {
        "periodic" => Ok(BoundaryCondition::Periodic),
        "zero" => Ok(BoundaryCondition::Zero),
        other => bail!("unknown boundary condition {other:?} (periodic | zero)"),
    }
}

pub fn make_box(ell: f64, dim: usize, bc: BoundaryCondition) -> Result<BoxSpec> {
    Ok(BoxSpec::new(ell, dim, bc)?)
}

/// FNV-1a hash of the resolved configuration string; stable across runs and
/// platforms.
pub fn config_hash(canonical: &str) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in canonical.as_bytes() {
        hash ^= u64::from(*byte);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}
