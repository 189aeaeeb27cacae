//! Pure and mixed strategies, expected payoff and best-response oracles.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::RwLock;

use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cascade::{capacities, nodal_loads, payoff, CapacityMap};
use crate::error::{Error, Result};
use crate::grid::{GridNetwork, NodeId, NodeSet};
use crate::par;

/// Slack for comparing expected payoffs assembled from different float sums.
pub const TIE_EPS: f64 = 1e-12;
/// Default cap on the number of candidate subsets an exhaustive search may visit.
pub const DEFAULT_ENUMERATION_LIMIT: u128 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Attacker,
    Defender,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Attacker => "attacker",
            Side::Defender => "defender",
        })
    }
}

/// A node subset played deterministically, with the budget it was chosen under.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PureStrategy {
    nodes: NodeSet,
    budget: usize,
}

impl PureStrategy {
    pub fn new(nodes: NodeSet, budget: usize) -> Result<Self> {
        if nodes.len() > budget {
            return Err(Error::InvalidStrategy(format!("{nodes} exceeds budget {budget}")));
        }
        Ok(PureStrategy { nodes, budget })
    }

    pub fn empty(budget: usize) -> Self {
        PureStrategy {
            nodes: NodeSet::new(),
            budget,
        }
    }

    pub fn nodes(&self) -> &NodeSet {
        &self.nodes
    }

    pub fn budget(&self) -> usize {
        self.budget
    }
}

/// Probability distribution over distinct pure strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedStrategy {
    support: Vec<(PureStrategy, f64)>,
}

impl MixedStrategy {
    pub fn new(support: Vec<(PureStrategy, f64)>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidStrategy("empty support".into()));
        }
        let mut seen = BTreeSet::new();
        let mut total = 0.0;
        for (s, p) in &support {
            if !(-1e-9..=1.0 + 1e-9).contains(p) {
                return Err(Error::InvalidStrategy(format!("probability {p} outside [0, 1]")));
            }
            if !seen.insert(s.nodes.clone()) {
                return Err(Error::InvalidStrategy(format!(
                    "{} appears twice in the support",
                    s.nodes
                )));
            }
            total += p;
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidStrategy(format!("probabilities sum to {total}")));
        }
        Ok(MixedStrategy { support })
    }

    pub fn pure(strategy: PureStrategy) -> Self {
        MixedStrategy {
            support: vec![(strategy, 1.0)],
        }
    }

    /// Equal weight on each (distinct) strategy.
    pub fn uniform(strategies: Vec<PureStrategy>) -> Result<Self> {
        let w = 1.0 / strategies.len() as f64;
        Self::new(strategies.into_iter().map(|s| (s, w)).collect())
    }

    pub fn support(&self) -> &[(PureStrategy, f64)] {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn probability_of(&self, nodes: &NodeSet) -> f64 {
        self.support
            .iter()
            .find(|(s, _)| &s.nodes == nodes)
            .map_or(0.0, |(_, p)| *p)
    }
}

/// Result of a best-response search: the strategy and its expected payoff against the
/// opponent's mix.
#[derive(Debug, Clone, PartialEq)]
pub struct BestResponse {
    pub strategy: PureStrategy,
    pub value: f64,
}

/// The initial network with its frozen capacities and a payoff cache keyed on the
/// effective removal set `attack \ defense`.
#[derive(Debug)]
pub struct GridGame {
    network: GridNetwork,
    capacities: CapacityMap,
    loads: NodeSet,
    enumeration_limit: u128,
    cache: RwLock<HashMap<NodeSet, usize>>,
}

impl GridGame {
    pub fn new(network: GridNetwork, alpha: f64) -> Result<Self> {
        let caps = capacities(&network, alpha)?;
        Ok(Self::with_capacities(network, caps))
    }

    pub fn with_capacities(network: GridNetwork, capacities: CapacityMap) -> Self {
        let loads = network.loads();
        GridGame {
            network,
            capacities,
            loads,
            enumeration_limit: DEFAULT_ENUMERATION_LIMIT,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn with_enumeration_limit(mut self, limit: u128) -> Self {
        self.enumeration_limit = limit;
        self
    }

    pub fn network(&self) -> &GridNetwork {
        &self.network
    }

    pub fn capacities(&self) -> &CapacityMap {
        &self.capacities
    }

    pub fn alpha(&self) -> f64 {
        self.capacities.alpha()
    }

    pub fn loads(&self) -> &NodeSet {
        &self.loads
    }

    pub fn enumeration_limit(&self) -> u128 {
        self.enumeration_limit
    }

    /// Distinct removal sets evaluated so far.
    pub fn cached_payoffs(&self) -> usize {
        self.cache.read().map(|c| c.len()).unwrap_or(0)
    }

    fn check_nodes(&self, nodes: &NodeSet) -> Result<()> {
        match nodes.iter().find(|&n| !self.network.contains(n)) {
            Some(n) => Err(Error::UnknownNode(n)),
            None => Ok(()),
        }
    }

    fn removal_payoff(&self, removed: NodeSet) -> Result<usize> {
        if let Some(p) = self.cache.read().ok().and_then(|c| c.get(&removed).copied()) {
            return Ok(p);
        }
        let p = payoff(&self.network, &self.capacities, &removed, &NodeSet::new())?;
        if let Ok(mut cache) = self.cache.write() {
            cache.insert(removed, p);
        }
        Ok(p)
    }

    /// Disconnected loads after attacking `attack \ defense`.
    pub fn payoff(&self, attack: &NodeSet, defense: &NodeSet) -> Result<usize> {
        self.check_nodes(attack)?;
        self.check_nodes(defense)?;
        self.removal_payoff(attack.difference(defense))
    }

    /// Probability-weighted payoff over the product of both supports.
    pub fn expected_payoff(&self, attack: &MixedStrategy, defense: &MixedStrategy) -> Result<f64> {
        let pairs: Vec<(&NodeSet, &NodeSet, f64)> = attack
            .support
            .iter()
            .cartesian_product(defense.support.iter())
            .map(|((a, pa), (d, pd))| (&a.nodes, &d.nodes, pa * pd))
            .collect();
        let values = par::map(&pairs, |&(a, d, _)| self.payoff(a, d));
        let mut total = 0.0;
        for (v, (_, _, w)) in values.into_iter().zip(&pairs) {
            total += w * v? as f64;
        }
        Ok(total)
    }

    /// Expected payoff of `nodes` played by `side` against the opponent's mix.
    pub fn value_against(&self, side: Side, nodes: &NodeSet, opponent: &MixedStrategy) -> Result<f64> {
        let mut total = 0.0;
        for (s, p) in &opponent.support {
            let v = match side {
                Side::Attacker => self.payoff(nodes, &s.nodes)?,
                Side::Defender => self.payoff(&s.nodes, nodes)?,
            };
            total += p * v as f64;
        }
        Ok(total)
    }

    fn validate_opponent(&self, opponent: &MixedStrategy) -> Result<()> {
        opponent
            .support
            .iter()
            .try_for_each(|(s, _)| self.check_nodes(&s.nodes))
    }
}

/// Number of subsets of an `n`-set with at most `k` elements.
pub fn subsets_up_to(n: usize, k: usize) -> u128 {
    let mut total: u128 = 0;
    let mut term: u128 = 1;
    for j in 0..=k.min(n) {
        total = total.saturating_add(term);
        term = term.saturating_mul((n - j) as u128) / (j as u128 + 1);
    }
    total
}

/// Number of `k`-subsets of an `n`-set, saturating.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc.saturating_mul((n - j) as u128) / (j as u128 + 1);
    }
    acc
}

/// All subsets of `nodes` with at most `k` elements, in lexicographic order.
pub fn subsets_lexicographic(nodes: &NodeSet, k: usize) -> Vec<NodeSet> {
    let mut all: Vec<NodeSet> = (0..=k.min(nodes.len()))
        .flat_map(|size| nodes.iter().combinations(size).map(NodeSet::from_iter))
        .collect();
    all.sort_unstable();
    all
}

/// Defends the `k_d` nodes with the highest nodal load, breaking ties by smaller id.
pub fn dlb_defense(g0: &GridNetwork, k_d: usize) -> Result<PureStrategy> {
    if k_d > g0.node_count() {
        return Err(Error::invalid(format!(
            "defender budget {k_d} exceeds node count {}",
            g0.node_count()
        )));
    }
    let mut ranked: Vec<(NodeId, f64)> = nodal_loads(g0).into_iter().collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    PureStrategy::new(ranked.into_iter().take(k_d).map(|(n, _)| n).collect(), k_d)
}

/// Greedy defender best response: repeatedly hardens the node that lowers the expected
/// payoff most (zero improvement accepted, smallest id on ties) until the budget is
/// spent or the attacker's expected payoff reaches zero.
///
/// Two cases are answered directly because greedy is known to be exact there: a single
/// attack the budget can fully cover is defended outright, and an attacker mixing only
/// single-node attacks is answered with the top-`k_d` nodes by weighted damage.
pub fn greedy_defender_response(game: &GridGame, attack: &MixedStrategy, k_d: usize) -> Result<BestResponse> {
    game.validate_opponent(attack)?;
    let finish = |nodes: NodeSet| -> Result<BestResponse> {
        let value = game.value_against(Side::Defender, &nodes, attack)?;
        Ok(BestResponse {
            strategy: PureStrategy::new(nodes, k_d)?,
            value,
        })
    };

    if let [(only, _)] = attack.support() {
        if only.nodes.len() <= k_d {
            return finish(only.nodes.clone());
        }
    }
    if attack.support().iter().all(|(s, _)| s.nodes.len() <= 1) {
        let baseline = game.payoff(&NodeSet::new(), &NodeSet::new())? as f64;
        let mut gains = Vec::new();
        for (s, p) in attack.support() {
            if let Some(v) = s.nodes.iter().next() {
                let damage = game.payoff(&s.nodes, &NodeSet::new())? as f64;
                gains.push((v, p * (damage - baseline)));
            }
        }
        gains.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        return finish(
            gains
                .into_iter()
                .filter(|&(_, g)| g > 0.0)
                .take(k_d)
                .map(|(v, _)| v)
                .collect(),
        );
    }

    let mut chosen = NodeSet::new();
    let mut current = game.value_against(Side::Defender, &chosen, attack)?;
    while chosen.len() < k_d && current > TIE_EPS {
        let candidates: Vec<NodeId> = game.network().nodes().filter(|&v| !chosen.contains(v)).collect();
        let values = par::map(&candidates, |&v| {
            game.value_against(Side::Defender, &chosen.with(v), attack)
        });
        let mut best: Option<(NodeId, f64, f64)> = None;
        for (&v, value) in candidates.iter().zip(values) {
            let value = value?;
            let reduction = current - value;
            if reduction >= -TIE_EPS && best.is_none_or(|(_, r, _)| reduction > r + TIE_EPS) {
                best = Some((v, reduction, value));
            }
        }
        let Some((v, _, value)) = best else { break };
        chosen = chosen.with(v);
        current = value;
    }
    Ok(BestResponse {
        strategy: PureStrategy::new(chosen, k_d)?,
        value: current,
    })
}

/// Greedy attacker best response, the mirror image of [`greedy_defender_response`]:
/// adds the node that raises the expected payoff most until the budget is spent or
/// every load is disconnected.
pub fn greedy_attacker_response(game: &GridGame, defense: &MixedStrategy, k_a: usize) -> Result<BestResponse> {
    game.validate_opponent(defense)?;
    let ceiling = game.loads().len() as f64;
    let mut chosen = NodeSet::new();
    let mut current = game.value_against(Side::Attacker, &chosen, defense)?;
    while chosen.len() < k_a && current < ceiling - TIE_EPS {
        let candidates: Vec<NodeId> = game.network().nodes().filter(|&v| !chosen.contains(v)).collect();
        let values = par::map(&candidates, |&v| {
            game.value_against(Side::Attacker, &chosen.with(v), defense)
        });
        let mut best: Option<(NodeId, f64, f64)> = None;
        for (&v, value) in candidates.iter().zip(values) {
            let value = value?;
            let gain = value - current;
            if gain >= -TIE_EPS && best.is_none_or(|(_, g, _)| gain > g + TIE_EPS) {
                best = Some((v, gain, value));
            }
        }
        let Some((v, _, value)) = best else { break };
        chosen = chosen.with(v);
        current = value;
    }
    Ok(BestResponse {
        strategy: PureStrategy::new(chosen, k_a)?,
        value: current,
    })
}

/// Exhaustive best response over every node subset of size at most `budget`; ties go to
/// the lexicographically smallest set.
pub fn exact_best_response(
    game: &GridGame,
    opponent: &MixedStrategy,
    budget: usize,
    side: Side,
) -> Result<BestResponse> {
    game.validate_opponent(opponent)?;
    let nodes = game.network().node_set();
    let count = subsets_up_to(nodes.len(), budget);
    if count > game.enumeration_limit() {
        return Err(Error::EnumerationLimit {
            count,
            limit: game.enumeration_limit(),
        });
    }
    let candidates = subsets_lexicographic(&nodes, budget);
    let values = par::map(&candidates, |c| game.value_against(side, c, opponent));
    let mut best: Option<(usize, f64)> = None;
    for (i, value) in values.into_iter().enumerate() {
        let value = value?;
        let better = match (best, side) {
            (None, _) => true,
            (Some((_, b)), Side::Attacker) => value > b + TIE_EPS,
            (Some((_, b)), Side::Defender) => value < b - TIE_EPS,
        };
        if better {
            best = Some((i, value));
        }
    }
    let (i, value) = best.expect("the empty set is always a candidate");
    Ok(BestResponse {
        strategy: PureStrategy::new(candidates[i].clone(), budget)?,
        value,
    })
}

/// Either best-response oracle, selected at run time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OracleKind {
    Exact,
    Greedy,
}

impl OracleKind {
    pub fn respond(self, game: &GridGame, opponent: &MixedStrategy, budget: usize, side: Side) -> Result<BestResponse> {
        match (self, side) {
            (OracleKind::Exact, _) => exact_best_response(game, opponent, budget, side),
            (OracleKind::Greedy, Side::Attacker) => greedy_attacker_response(game, opponent, budget),
            (OracleKind::Greedy, Side::Defender) => greedy_defender_response(game, opponent, budget),
        }
    }
}

impl fmt::Display for OracleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleKind::Exact => "exact",
            OracleKind::Greedy => "greedy",
        })
    }
}

impl std::str::FromStr for OracleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(OracleKind::Exact),
            "greedy" => Ok(OracleKind::Greedy),
            other => Err(Error::invalid(format!(
                "unknown oracle `{other}` (expected exact or greedy)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformAttackConfig {
    /// Largest number of load subsets enumerated exactly.
    pub limit: u128,
    /// Subsets drawn when the exact distribution is too large.
    pub samples: usize,
    pub seed: u64,
}

impl Default for UniformAttackConfig {
    fn default() -> Self {
        UniformAttackConfig {
            limit: DEFAULT_ENUMERATION_LIMIT,
            samples: 1000,
            seed: 0,
        }
    }
}

/// Uniform attack over all `k_a`-subsets of the load nodes, or over a seeded sample of
/// distinct subsets when there are more than `config.limit`.
pub fn uniform_load_attack(g0: &GridNetwork, k_a: usize, config: &UniformAttackConfig) -> Result<MixedStrategy> {
    let loads: Vec<NodeId> = g0.loads().iter().collect();
    if k_a > loads.len() {
        return Err(Error::invalid(format!(
            "attacker budget {k_a} exceeds the {} load nodes",
            loads.len()
        )));
    }
    let count = binomial(loads.len(), k_a);
    let subsets: Vec<NodeSet> = if count <= config.limit {
        loads
            .iter()
            .copied()
            .combinations(k_a)
            .map(NodeSet::from_iter)
            .collect()
    } else {
        let wanted = config.samples.max(1);
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut seen = BTreeSet::new();
        let mut drawn = Vec::with_capacity(wanted);
        while drawn.len() < wanted {
            let pick: NodeSet = rand::seq::index::sample(&mut rng, loads.len(), k_a)
                .into_iter()
                .map(|i| loads[i])
                .collect();
            if seen.insert(pick.clone()) {
                drawn.push(pick);
            }
        }
        drawn
    };
    let strategies = subsets
        .into_iter()
        .map(|s| PureStrategy::new(s, k_a))
        .collect::<Result<Vec<_>>>()?;
    MixedStrategy::uniform(strategies)
}
