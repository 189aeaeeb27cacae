//! Command implementations. Each returns its rows in a fixed order so that identical
//! configurations produce identical output.

use std::time::Instant;

use gridgame::cascade::{self, capacities, edge_loads, nodal_loads};
use gridgame::strategy::{dlb_defense, uniform_load_attack, UniformAttackConfig};
use gridgame::{
    double_oracle, DoubleOracleConfig, GameSolution, GridGame, GridNetwork, MixedStrategy, NodeSet, PureStrategy, Side,
};

use crate::args::SideArg;
use crate::config::{parse_nodes, ExperimentConfig};
use crate::record::ResultRecord;
use crate::CliError;

struct Rows<'a> {
    config: &'a ExperimentConfig,
    command: &'static str,
    rows: Vec<ResultRecord>,
}

impl<'a> Rows<'a> {
    fn new(config: &'a ExperimentConfig, command: &'static str) -> Self {
        Rows {
            config,
            command,
            rows: Vec::new(),
        }
    }

    /// Starts a row for `(alpha, ka, kd)`; the caller fills in the measured columns.
    fn row(&self, alpha: f64, ka: usize, kd: usize, kind: &str, subject: String, value: f64) -> ResultRecord {
        ResultRecord {
            command: self.command.to_owned(),
            grid: self.config.grid.label(),
            seed: self.config.seed,
            alpha,
            ka,
            kd,
            oracle: None,
            kind: kind.to_owned(),
            subject,
            value,
            secondary: None,
            lower: None,
            upper: None,
            iterations: None,
            converged: None,
            seconds: 0.0,
        }
    }

    fn seconds(&self, started: Instant) -> f64 {
        if self.config.timings {
            started.elapsed().as_secs_f64()
        } else {
            0.0
        }
    }
}

fn network(config: &ExperimentConfig) -> Result<GridNetwork, CliError> {
    config.grid.load(config.seed)
}

/// Payoff of one explicit attack/defense pair, followed by one row per cascade round.
pub fn simulate(config: &ExperimentConfig) -> Result<Vec<ResultRecord>, CliError> {
    let g = network(config)?;
    let attack_list = config
        .attack
        .as_deref()
        .ok_or_else(|| CliError::Usage("simulate needs --attack".into()))?;
    let attack = parse_nodes(attack_list, &g)?;
    let defend = parse_nodes(config.defend.as_deref().unwrap_or(""), &g)?;
    let mut out = Rows::new(config, "simulate");
    let started = Instant::now();
    let caps = capacities(&g, config.alpha)?;
    let (payoff, trace) = cascade::simulate(&g, &caps, &attack, &defend)?;

    let mut row = out.row(
        config.alpha,
        attack.len(),
        defend.len(),
        "payoff",
        format!("attack {attack} defend {defend}"),
        payoff as f64,
    );
    row.iterations = Some(trace.rounds.len());
    row.seconds = out.seconds(started);
    out.rows.push(row);
    for (i, round) in trace.rounds.iter().enumerate() {
        let edges: Vec<String> = round.iter().map(ToString::to_string).collect();
        let mut row = out.row(
            config.alpha,
            attack.len(),
            defend.len(),
            "round",
            edges.join(" "),
            (i + 1) as f64,
        );
        row.secondary = Some(round.len() as f64);
        out.rows.push(row);
    }
    Ok(out.rows)
}

/// Node rows carry nodal load and the payoff of attacking that node alone; edge rows
/// carry edge load and capacity. An edgeless network has nothing to report.
pub fn loads(config: &ExperimentConfig) -> Result<Vec<ResultRecord>, CliError> {
    let g = network(config)?;
    let mut out = Rows::new(config, "loads");
    if g.edge_count() == 0 {
        return Ok(out.rows);
    }
    let game = GridGame::new(g.clone(), config.alpha)?;
    let nodal = nodal_loads(&g);
    for (&v, &load) in &nodal {
        let mut row = out.row(config.alpha, 1, 0, "node", v.to_string(), load);
        row.secondary = Some(game.payoff(&NodeSet::singleton(v), &NodeSet::new())? as f64);
        out.rows.push(row);
    }
    let caps = game.capacities();
    for (edge, load) in edge_loads(&g).iter() {
        let mut row = out.row(config.alpha, 0, 0, "edge", edge.to_string(), load);
        row.secondary = caps.get(edge);
        out.rows.push(row);
    }
    Ok(out.rows)
}

/// Best response of `--side` against an explicit opponent list, or against DLB
/// (attacker side) / the uniform load attack (defender side) when none is given.
pub fn respond(config: &ExperimentConfig) -> Result<Vec<ResultRecord>, CliError> {
    let g = network(config)?;
    let (ka, kd) = (config.ka, config.kd);
    let game = GridGame::new(g.clone(), config.alpha)?;
    let mut out = Rows::new(config, "respond");
    let started = Instant::now();
    let (side, budget, opponent, kind) = match config.side {
        SideArg::Attacker => {
            let defense = match &config.defend {
                Some(list) => PureStrategy::new(parse_nodes(list, &g)?, kd)?,
                None => dlb_defense(&g, kd)?,
            };
            (Side::Attacker, ka, MixedStrategy::pure(defense), "attacker_response")
        }
        SideArg::Defender => {
            let attack = match &config.attack {
                Some(list) => MixedStrategy::pure(PureStrategy::new(parse_nodes(list, &g)?, ka)?),
                None => uniform_load_attack(&g, ka, &uniform_config(config))?,
            };
            (Side::Defender, kd, attack, "defender_response")
        }
    };
    let br = config.oracle.respond(&game, &opponent, budget, side)?;
    let mut row = out.row(config.alpha, ka, kd, kind, br.strategy.nodes().to_string(), br.value);
    row.oracle = Some(config.oracle.to_string());
    row.secondary = Some(opponent.len() as f64);
    row.seconds = out.seconds(started);
    out.rows.push(row);
    Ok(out.rows)
}

/// Game value, both equilibrium mixes and per-iteration diagnostics.
pub fn solve(config: &ExperimentConfig) -> Result<Vec<ResultRecord>, CliError> {
    let g = network(config)?;
    let game = GridGame::new(g, config.alpha)?;
    let mut out = Rows::new(config, "solve");
    let started = Instant::now();
    let sol = run_double_oracle(config, &game, config.ka, config.kd)?;
    let total = out.seconds(started);
    push_solution(&mut out, config.alpha, config.ka, config.kd, &sol, total);
    for (kind, mix) in [("attacker_mix", &sol.attacker_mix), ("defender_mix", &sol.defender_mix)] {
        for (s, p) in mix.support() {
            let mut row = out.row(config.alpha, config.ka, config.kd, kind, s.nodes().to_string(), *p);
            row.oracle = Some(config.oracle.to_string());
            out.rows.push(row);
        }
    }
    for d in &sol.diagnostics {
        let subject = format!("attack {} defend {}", d.attacker_response, d.defender_response);
        let mut row = out.row(
            config.alpha,
            config.ka,
            config.kd,
            "iteration",
            subject,
            d.restricted_value,
        );
        row.oracle = Some(config.oracle.to_string());
        row.secondary = Some((d.attacks * d.defenses) as f64);
        row.lower = Some(d.defender_response_value);
        row.upper = Some(d.attacker_response_value);
        row.iterations = Some(d.iteration);
        row.seconds = if config.timings { d.seconds } else { 0.0 };
        out.rows.push(row);
    }
    Ok(out.rows)
}

/// For every `(alpha, k_a, k_d)` point: the minimax value, DLB against the minimax
/// attack, DLB against the attacker's best response to it, and the uniform load attack
/// against the defender's best response (with its lower bound in `lower`).
pub fn sweep(config: &ExperimentConfig) -> Result<Vec<ResultRecord>, CliError> {
    let g = network(config)?;
    let mut out = Rows::new(config, "sweep");
    let oracle = config.oracle.to_string();
    let mut game: Option<GridGame> = None;
    for (alpha, ka, kd) in config.sweep_points() {
        // one game per margin so budgets at the same margin share the payoff cache
        if game.as_ref().is_none_or(|gm| gm.alpha() != alpha) {
            game = Some(GridGame::new(g.clone(), alpha)?);
        }
        let game = game.as_ref().expect("set above");

        let started = Instant::now();
        let sol = run_double_oracle(config, game, ka, kd)?;
        let secs = out.seconds(started);
        push_solution(&mut out, alpha, ka, kd, &sol, secs);

        let dlb = dlb_defense(&g, kd)?;
        let dlb_mix = MixedStrategy::pure(dlb.clone());
        let vs_minimax = game.expected_payoff(&sol.attacker_mix, &dlb_mix)?;
        let mut row = out.row(
            alpha,
            ka,
            kd,
            "dlb_vs_minimax_attack",
            dlb.nodes().to_string(),
            vs_minimax,
        );
        row.oracle = Some(oracle.clone());
        out.rows.push(row);

        let br = config.oracle.respond(game, &dlb_mix, ka, Side::Attacker)?;
        let mut row = out.row(
            alpha,
            ka,
            kd,
            "dlb_vs_best_response",
            br.strategy.nodes().to_string(),
            br.value,
        );
        row.oracle = Some(oracle.clone());
        row.secondary = Some(sol.value);
        out.rows.push(row);

        let load_count = g.loads().len();
        if ka <= load_count && load_count > 0 {
            let uniform = uniform_load_attack(&g, ka, &uniform_config(config))?;
            let br = config.oracle.respond(game, &uniform, kd, Side::Defender)?;
            let bound = ka as f64 * (1.0 - kd as f64 / load_count as f64);
            let mut row = out.row(
                alpha,
                ka,
                kd,
                "uniform_baseline",
                br.strategy.nodes().to_string(),
                br.value,
            );
            row.oracle = Some(oracle.clone());
            row.secondary = Some(uniform.len() as f64);
            row.lower = Some(bound);
            out.rows.push(row);
        }
    }
    Ok(out.rows)
}

/// Grid-file text of a seeded synthetic network.
pub fn generate(params: &str, seed: u64) -> Result<String, CliError> {
    let source = crate::config::GridSource::parse_synthetic(params)?;
    Ok(source.load(seed)?.to_grid_file())
}

fn run_double_oracle(
    config: &ExperimentConfig,
    game: &GridGame,
    ka: usize,
    kd: usize,
) -> Result<GameSolution, CliError> {
    let do_config = DoubleOracleConfig {
        max_iters: config.max_iters,
        oracle: config.oracle,
    };
    Ok(double_oracle(game, ka, kd, &do_config)?)
}

fn push_solution(out: &mut Rows<'_>, alpha: f64, ka: usize, kd: usize, sol: &GameSolution, seconds: f64) {
    let kind = if out.command == "solve" {
        "value"
    } else {
        "minimax_value"
    };
    let mut row = out.row(alpha, ka, kd, kind, String::new(), sol.value);
    row.oracle = Some(out.config.oracle.to_string());
    row.iterations = Some(sol.iterations);
    row.converged = Some(sol.converged);
    row.seconds = seconds;
    out.rows.push(row);
}

fn uniform_config(config: &ExperimentConfig) -> UniformAttackConfig {
    UniformAttackConfig {
        seed: config.seed,
        ..Default::default()
    }
}
