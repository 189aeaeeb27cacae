//! Resolved experiment parameters: flags override config-file keys, which override
//! defaults.

use std::path::{Path, PathBuf};

use gridgame::grid::generate_synthetic;
use gridgame::{load_network, GridNetwork, NodeSet, OracleKind};
use serde::Deserialize;

use crate::args::{BudgetMode, CommonArgs, SideArg};
use crate::record::OutputFormat;
use crate::CliError;

pub const DEFAULT_ALPHA: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub enum GridSource {
    File(PathBuf),
    Synthetic {
        nodes: usize,
        edges: usize,
        source_fraction: f64,
        load_fraction: f64,
    },
}

impl GridSource {
    pub fn parse_synthetic(params: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = params.split(',').map(str::trim).collect();
        let bad = || CliError::Usage(format!("--synthetic expects N,M,SRC,LD, got `{params}`"));
        if parts.len() != 4 {
            return Err(bad());
        }
        Ok(GridSource::Synthetic {
            nodes: parts[0].parse().map_err(|_| bad())?,
            edges: parts[1].parse().map_err(|_| bad())?,
            source_fraction: parts[2].parse().map_err(|_| bad())?,
            load_fraction: parts[3].parse().map_err(|_| bad())?,
        })
    }

    pub fn label(&self) -> String {
        match self {
            GridSource::File(p) => p.display().to_string(),
            GridSource::Synthetic {
                nodes,
                edges,
                source_fraction,
                load_fraction,
            } => {
                format!("synthetic:{nodes},{edges},{source_fraction},{load_fraction}")
            }
        }
    }

    pub fn load(&self, seed: u64) -> Result<GridNetwork, CliError> {
        match self {
            GridSource::File(path) => {
                let text = read(path)?;
                load_network(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
            }
            &GridSource::Synthetic {
                nodes,
                edges,
                source_fraction,
                load_fraction,
            } => Ok(generate_synthetic(nodes, edges, source_fraction, load_fraction, seed)?),
        }
    }
}

/// Keys accepted in a `--config` TOML file; names follow the long flags with `_` for `-`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub grid: Option<PathBuf>,
    pub synthetic: Option<String>,
    pub seed: Option<u64>,
    pub alpha: Option<f64>,
    pub ka: Option<usize>,
    pub kd: Option<usize>,
    pub oracle: Option<String>,
    pub max_iters: Option<usize>,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
    pub timings: Option<bool>,
    pub attack: Option<String>,
    pub defend: Option<String>,
    pub side: Option<SideArg>,
    pub alphas: Option<Vec<f64>>,
    pub budgets: Option<Vec<usize>>,
    pub budget_mode: Option<BudgetMode>,
}

impl FileConfig {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        toml::from_str(&read(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub grid: GridSource,
    pub seed: u64,
    pub alpha: f64,
    pub ka: usize,
    pub kd: usize,
    pub oracle: OracleKind,
    pub max_iters: usize,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub timings: bool,
    /// Raw `--attack` / `--defend` lists; checked against the network once loaded.
    pub attack: Option<String>,
    pub defend: Option<String>,
    pub side: SideArg,
    pub alphas: Vec<f64>,
    pub budgets: Option<Vec<usize>>,
    pub budget_mode: BudgetMode,
}

/// Command-specific flags layered on top of [`CommonArgs`].
#[derive(Debug, Default)]
pub struct ExtraFlags {
    pub attack: Option<String>,
    pub defend: Option<String>,
    pub side: Option<SideArg>,
    pub alphas: Option<Vec<f64>>,
    pub budgets: Option<Vec<usize>>,
    pub budget_mode: Option<BudgetMode>,
}

impl ExperimentConfig {
    pub fn resolve(flags: &CommonArgs, extra: ExtraFlags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => FileConfig::read(path)?,
            None => FileConfig::default(),
        };

        let grid = match (&flags.grid, &flags.synthetic) {
            (Some(path), None) => GridSource::File(path.clone()),
            (None, Some(params)) => GridSource::parse_synthetic(params)?,
            (Some(_), Some(_)) => return Err(CliError::Usage("give either --grid or --synthetic, not both".into())),
            (None, None) => match (&file.grid, &file.synthetic) {
                (Some(path), None) => GridSource::File(path.clone()),
                (None, Some(params)) => GridSource::parse_synthetic(params)?,
                (Some(_), Some(_)) => {
                    return Err(CliError::Usage("config file sets both `grid` and `synthetic`".into()))
                }
                (None, None) => {
                    return Err(CliError::Usage(
                        "no grid given (use --grid FILE or --synthetic N,M,SRC,LD)".into(),
                    ))
                }
            },
        };

        let alpha = flags.alpha.or(file.alpha).unwrap_or(DEFAULT_ALPHA);
        let alphas = extra.alphas.or(file.alphas).unwrap_or_else(|| vec![alpha]);
        if alphas.is_empty() {
            return Err(CliError::Usage("alpha list is empty".into()));
        }
        if let Some(a) = alphas.iter().chain([&alpha]).find(|a| **a < 0.0 || !a.is_finite()) {
            return Err(CliError::Usage(format!(
                "capacity margin must be finite and non-negative, got {a}"
            )));
        }
        let budgets = extra.budgets.or(file.budgets);
        if budgets.as_ref().is_some_and(Vec::is_empty) {
            return Err(CliError::Usage("budget list is empty".into()));
        }
        let oracle = match flags.oracle.as_ref().or(file.oracle.as_ref()) {
            Some(name) => name
                .parse()
                .map_err(|e: gridgame::Error| CliError::Usage(e.to_string()))?,
            None => OracleKind::Exact,
        };
        let max_iters = flags
            .max_iters
            .or(file.max_iters)
            .unwrap_or(gridgame::game::DEFAULT_MAX_ITERS);
        if max_iters == 0 {
            return Err(CliError::Usage("--max-iters must be at least 1".into()));
        }

        Ok(ExperimentConfig {
            grid,
            seed: flags.seed.or(file.seed).unwrap_or(0),
            alpha,
            ka: flags.ka.or(file.ka).unwrap_or(1),
            kd: flags.kd.or(file.kd).unwrap_or(1),
            oracle,
            max_iters,
            format: flags.format.or(file.format).unwrap_or_default(),
            out: flags.out.clone().or(file.out),
            timings: flags.timings || file.timings.unwrap_or(false),
            attack: extra.attack.or(file.attack),
            defend: extra.defend.or(file.defend),
            side: extra.side.or(file.side).unwrap_or(SideArg::Attacker),
            alphas,
            budgets,
            budget_mode: extra.budget_mode.or(file.budget_mode).unwrap_or(BudgetMode::Equal),
        })
    }

    /// `(alpha, k_a, k_d)` points of a sweep, alpha-major.
    pub fn sweep_points(&self) -> Vec<(f64, usize, usize)> {
        let budgets: Vec<(usize, usize)> = match &self.budgets {
            None => vec![(self.ka, self.kd)],
            Some(list) => list
                .iter()
                .map(|&b| match self.budget_mode {
                    BudgetMode::Equal => (b, b),
                    BudgetMode::VaryKd => (self.ka, b),
                    BudgetMode::VaryKa => (b, self.kd),
                })
                .collect(),
        };
        self.alphas
            .iter()
            .flat_map(|&a| budgets.iter().map(move |&(ka, kd)| (a, ka, kd)))
            .collect()
    }
}

/// Parses a comma-separated id list and checks every id against the network.
pub fn parse_nodes(list: &str, g: &GridNetwork) -> Result<NodeSet, CliError> {
    let mut ids = Vec::new();
    for part in list.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let id = part
            .parse()
            .map_err(|_| CliError::Usage(format!("`{part}` is not a node id")))?;
        if !g.contains(id) {
            return Err(CliError::Usage(format!("unknown node id {id}")));
        }
        ids.push(id);
    }
    Ok(ids.into_iter().collect())
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags() -> CommonArgs {
        CommonArgs {
            synthetic: Some("10,12,0.3,0.3".into()),
            ..Default::default()
        }
    }

    #[test]
    fn flags_override_file_override_defaults() {
        let dir = std::env::temp_dir().join(format!("gridgame-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("exp.toml");
        std::fs::write(&path, "alpha = 2.0\nka = 3\noracle = \"greedy\"\n").unwrap();
        let mut f = flags();
        f.config = Some(path);
        f.ka = Some(2);
        let c = ExperimentConfig::resolve(&f, ExtraFlags::default()).unwrap();
        assert_eq!((c.alpha, c.ka, c.kd, c.oracle), (2.0, 2, 1, OracleKind::Greedy));
        assert_eq!(c.alphas, vec![2.0]);
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn rejects_bad_input() {
        let mut f = flags();
        f.alpha = Some(-1.0);
        assert!(ExperimentConfig::resolve(&f, ExtraFlags::default()).is_err());
        let extra = ExtraFlags {
            alphas: Some(vec![]),
            ..Default::default()
        };
        assert!(ExperimentConfig::resolve(&flags(), extra).is_err());
        assert!(ExperimentConfig::resolve(&CommonArgs::default(), ExtraFlags::default()).is_err());
        assert!(GridSource::parse_synthetic("10,12,0.3").is_err());
    }

    #[test]
    fn sweep_points_follow_budget_mode() {
        let extra = ExtraFlags {
            alphas: Some(vec![0.0, 1.0]),
            budgets: Some(vec![1, 2]),
            budget_mode: Some(BudgetMode::VaryKd),
            ..Default::default()
        };
        let mut f = flags();
        f.ka = Some(3);
        let c = ExperimentConfig::resolve(&f, extra).unwrap();
        assert_eq!(
            c.sweep_points(),
            vec![(0.0, 3, 1), (0.0, 3, 2), (1.0, 3, 1), (1.0, 3, 2)]
        );
    }
}
