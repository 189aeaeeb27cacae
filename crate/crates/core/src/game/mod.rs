//! Minimax solving: restricted matrix games, the double-oracle loop and exhaustive
//! solving for small instances.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::grid::NodeSet;
use crate::par;
use crate::strategy::{subsets_lexicographic, subsets_up_to, GridGame, MixedStrategy, PureStrategy, Side};

pub use crate::strategy::OracleKind;

pub mod lp;

/// Tolerance used to declare restricted and best-response values equal.
pub const VALUE_GAP_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_ITERS: usize = 200;
/// Default cap on payoff-matrix entries for exhaustive solving.
pub const DEFAULT_MATRIX_LIMIT: u128 = 250_000;

/// Payoffs of every (attack, defense) pair of two option lists.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffMatrix {
    attacks: Vec<PureStrategy>,
    defenses: Vec<PureStrategy>,
    // entries[a][d]
    entries: Vec<Vec<f64>>,
}

impl PayoffMatrix {
    pub fn build(game: &GridGame, attacks: Vec<PureStrategy>, defenses: Vec<PureStrategy>) -> Result<Self> {
        let cols = defenses.len();
        let flat = par::map_range(attacks.len() * cols, |i| {
            game.payoff(attacks[i / cols].nodes(), defenses[i % cols].nodes())
                .map(|p| p as f64)
        });
        let flat = flat.into_iter().collect::<Result<Vec<f64>>>()?;
        let entries = if cols == 0 {
            vec![Vec::new(); attacks.len()]
        } else {
            flat.chunks(cols).map(<[f64]>::to_vec).collect()
        };
        Ok(PayoffMatrix {
            attacks,
            defenses,
            entries,
        })
    }

    pub fn attacks(&self) -> &[PureStrategy] {
        &self.attacks
    }

    pub fn defenses(&self) -> &[PureStrategy] {
        &self.defenses
    }

    pub fn entries(&self) -> &[Vec<f64>] {
        &self.entries
    }

    pub fn get(&self, attack: usize, defense: usize) -> f64 {
        self.entries[attack][defense]
    }

    pub fn contains_attack(&self, nodes: &NodeSet) -> bool {
        self.attacks.iter().any(|s| s.nodes() == nodes)
    }

    pub fn contains_defense(&self, nodes: &NodeSet) -> bool {
        self.defenses.iter().any(|s| s.nodes() == nodes)
    }

    /// Appends an attack row unless an attack with the same node set is present.
    pub fn add_attack(&mut self, game: &GridGame, attack: PureStrategy) -> Result<bool> {
        if self.contains_attack(attack.nodes()) {
            return Ok(false);
        }
        let row = par::map(&self.defenses, |d| {
            game.payoff(attack.nodes(), d.nodes()).map(|p| p as f64)
        });
        self.entries.push(row.into_iter().collect::<Result<_>>()?);
        self.attacks.push(attack);
        Ok(true)
    }

    /// Appends a defense column unless a defense with the same node set is present.
    pub fn add_defense(&mut self, game: &GridGame, defense: PureStrategy) -> Result<bool> {
        if self.contains_defense(defense.nodes()) {
            return Ok(false);
        }
        let col = par::map(&self.attacks, |a| {
            game.payoff(a.nodes(), defense.nodes()).map(|p| p as f64)
        });
        for (row, v) in self.entries.iter_mut().zip(col) {
            row.push(v?);
        }
        self.defenses.push(defense);
        Ok(true)
    }

    fn check_nonempty(&self) -> Result<()> {
        if self.attacks.is_empty() || self.defenses.is_empty() {
            return Err(Error::invalid(
                "payoff matrix needs at least one attack and one defense",
            ));
        }
        Ok(())
    }
}

fn to_mixed(options: &[PureStrategy], weights: &[f64]) -> MixedStrategy {
    let kept: Vec<(PureStrategy, f64)> = options
        .iter()
        .zip(weights)
        .filter(|(_, &w)| w > 1e-15)
        .map(|(s, &w)| (s.clone(), w))
        .collect();
    let total: f64 = kept.iter().map(|(_, w)| w).sum();
    let support = kept.into_iter().map(|(s, w)| (s, w / total)).collect();
    MixedStrategy::new(support).expect("LP mixes are distributions over distinct options")
}

/// Defender's minimax mix over the matrix's defense options.
pub fn solve_restricted_defender(m: &PayoffMatrix) -> Result<(f64, MixedStrategy)> {
    m.check_nonempty()?;
    let sol = lp::minimize_max(&m.entries);
    Ok((sol.value, to_mixed(&m.defenses, &sol.mix)))
}

/// Attacker's maximin mix over the matrix's attack options.
pub fn solve_restricted_attacker(m: &PayoffMatrix) -> Result<(f64, MixedStrategy)> {
    m.check_nonempty()?;
    let sol = lp::maximize_min(&m.entries);
    Ok((sol.value, to_mixed(&m.attacks, &sol.mix)))
}

/// Per-iteration record of the double-oracle loop.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationDiagnostics {
    pub iteration: usize,
    pub restricted_value: f64,
    /// Attacker's best-response value against the restricted defender mix.
    pub attacker_response_value: f64,
    /// Defender's best-response value against the restricted attacker mix.
    pub defender_response_value: f64,
    pub attacker_response: NodeSet,
    pub defender_response: NodeSet,
    pub attacks: usize,
    pub defenses: usize,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameSolution {
    pub value: f64,
    pub attacker_mix: MixedStrategy,
    pub defender_mix: MixedStrategy,
    pub iterations: usize,
    pub converged: bool,
    pub diagnostics: Vec<IterationDiagnostics>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleOracleConfig {
    pub max_iters: usize,
    pub oracle: OracleKind,
}

impl Default for DoubleOracleConfig {
    fn default() -> Self {
        DoubleOracleConfig {
            max_iters: DEFAULT_MAX_ITERS,
            oracle: OracleKind::Exact,
        }
    }
}

/// Greedy oracles give up after this many consecutive identical restricted values.
const STALL_WINDOW: usize = 3;

/// Double-oracle minimax solver.
///
/// Both restricted sets start as `{∅}`. Each iteration solves the restricted game for
/// both players, asks the oracle for each side's best response to the other's mix, and
/// stops once both responses are already known (or their values close the gap to the
/// restricted value). Otherwise both responses are added and the loop repeats, up to
/// `max_iters` iterations.
pub fn double_oracle(game: &GridGame, k_a: usize, k_d: usize, config: &DoubleOracleConfig) -> Result<GameSolution> {
    let n = game.network().node_count();
    if k_a > n || k_d > n {
        return Err(Error::invalid(format!("budgets ({k_a}, {k_d}) exceed node count {n}")));
    }
    if config.max_iters == 0 {
        return Err(Error::invalid("max_iters must be at least 1"));
    }

    let mut matrix = PayoffMatrix::build(game, vec![PureStrategy::empty(k_a)], vec![PureStrategy::empty(k_d)])?;
    let mut diagnostics = Vec::new();
    let mut converged = false;

    for iteration in 1..=config.max_iters {
        let started = Instant::now();
        let (value, defender_mix) = solve_restricted_defender(&matrix)?;
        let (_, attacker_mix) = solve_restricted_attacker(&matrix)?;

        let attack = config.oracle.respond(game, &defender_mix, k_a, Side::Attacker)?;
        let defense = config.oracle.respond(game, &attacker_mix, k_d, Side::Defender)?;

        let known =
            matrix.contains_attack(attack.strategy.nodes()) && matrix.contains_defense(defense.strategy.nodes());
        let gap_closed = attack.value <= value + VALUE_GAP_TOL && defense.value >= value - VALUE_GAP_TOL;

        let mut record = IterationDiagnostics {
            iteration,
            restricted_value: value,
            attacker_response_value: attack.value,
            defender_response_value: defense.value,
            attacker_response: attack.strategy.nodes().clone(),
            defender_response: defense.strategy.nodes().clone(),
            attacks: matrix.attacks().len(),
            defenses: matrix.defenses().len(),
            seconds: 0.0,
        };

        if known || gap_closed {
            record.seconds = started.elapsed().as_secs_f64();
            diagnostics.push(record);
            converged = true;
            return Ok(GameSolution {
                value,
                attacker_mix,
                defender_mix,
                iterations: iteration,
                converged,
                diagnostics,
            });
        }

        matrix.add_attack(game, attack.strategy)?;
        matrix.add_defense(game, defense.strategy)?;
        record.seconds = started.elapsed().as_secs_f64();
        diagnostics.push(record);

        if config.oracle == OracleKind::Greedy && stalled(&diagnostics) {
            break;
        }
    }

    let (value, defender_mix) = solve_restricted_defender(&matrix)?;
    let (_, attacker_mix) = solve_restricted_attacker(&matrix)?;
    Ok(GameSolution {
        value,
        attacker_mix,
        defender_mix,
        iterations: diagnostics.len(),
        converged,
        diagnostics,
    })
}

fn stalled(diagnostics: &[IterationDiagnostics]) -> bool {
    if diagnostics.len() < STALL_WINDOW {
        return false;
    }
    let tail = &diagnostics[diagnostics.len() - STALL_WINDOW..];
    tail.iter()
        .all(|d| (d.restricted_value - tail[0].restricted_value).abs() <= VALUE_GAP_TOL)
}

/// Solves the game over every budget-feasible attack and defense.
pub fn solve_full_enumeration(game: &GridGame, k_a: usize, k_d: usize) -> Result<GameSolution> {
    solve_full_enumeration_with_limit(game, k_a, k_d, DEFAULT_MATRIX_LIMIT)
}

pub fn solve_full_enumeration_with_limit(
    game: &GridGame,
    k_a: usize,
    k_d: usize,
    matrix_limit: u128,
) -> Result<GameSolution> {
    let nodes = game.network().node_set();
    let count = subsets_up_to(nodes.len(), k_a).saturating_mul(subsets_up_to(nodes.len(), k_d));
    if count > matrix_limit {
        return Err(Error::EnumerationLimit {
            count,
            limit: matrix_limit,
        });
    }
    let started = Instant::now();
    let options = |budget: usize| {
        subsets_lexicographic(&nodes, budget)
            .into_iter()
            .map(|s| PureStrategy::new(s, budget))
            .collect::<Result<Vec<_>>>()
    };
    let matrix = PayoffMatrix::build(game, options(k_a)?, options(k_d)?)?;
    let (value, defender_mix) = solve_restricted_defender(&matrix)?;
    let (attacker_value, attacker_mix) = solve_restricted_attacker(&matrix)?;
    let diagnostics = vec![IterationDiagnostics {
        iteration: 1,
        restricted_value: value,
        attacker_response_value: value,
        defender_response_value: attacker_value,
        attacker_response: NodeSet::new(),
        defender_response: NodeSet::new(),
        attacks: matrix.attacks().len(),
        defenses: matrix.defenses().len(),
        seconds: started.elapsed().as_secs_f64(),
    }];
    Ok(GameSolution {
        value,
        attacker_mix,
        defender_mix,
        iterations: 1,
        converged: true,
        diagnostics,
    })
}
