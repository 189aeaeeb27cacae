//! Load-driven cascading failure.
//!
//! Edge load weights each load node's nearest sources equally and splits each
//! source–load demand over all shortest paths. Capacities are fixed from the initial
//! network; the failure operator repeatedly drops every edge whose current load strictly
//! exceeds its capacity until nothing changes.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::grid::{Edge, GridNetwork, NodeId, NodeSet};
use crate::par;

/// Per-edge load aligned with the network's edge order.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeLoadMap {
    edges: Vec<Edge>,
    values: Vec<f64>,
}

impl EdgeLoadMap {
    pub fn get(&self, edge: Edge) -> Option<f64> {
        self.edges.binary_search(&edge).ok().map(|i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (Edge, f64)> + '_ {
        self.edges.iter().copied().zip(self.values.iter().copied())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Capacities of the initial network's edges, `(1 + alpha) * initial load`.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityMap {
    alpha: f64,
    edges: Vec<Edge>,
    values: Vec<f64>,
}

impl CapacityMap {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn get(&self, edge: Edge) -> Option<f64> {
        self.edges.binary_search(&edge).ok().map(|i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (Edge, f64)> + '_ {
        self.edges.iter().copied().zip(self.values.iter().copied())
    }
}

/// Edges removed in each round of the cascade, and the network left standing.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadeTrace {
    pub rounds: Vec<Vec<Edge>>,
    pub network: GridNetwork,
}

impl CascadeTrace {
    pub fn removed_edges(&self) -> usize {
        self.rounds.iter().map(Vec::len).sum()
    }
}

/// Shortest-path DAG from one origin, truncated after `max_level` when given.
struct ShortestPaths {
    levels: Vec<Vec<NodeId>>,
    sigma: Vec<f64>,
    // (predecessor, edge index)
    preds: Vec<Vec<(NodeId, usize)>>,
}

impl ShortestPaths {
    /// BFS from `origin`, stopping after the first level that satisfies `stop`.
    fn explore(g: &GridNetwork, origin: NodeId, stop: impl Fn(&[NodeId]) -> bool) -> Self {
        let n = g.universe();
        let mut level_of = vec![usize::MAX; n];
        let mut sigma = vec![0.0; n];
        let mut preds = vec![Vec::new(); n];
        level_of[origin] = 0;
        sigma[origin] = 1.0;
        let mut levels = vec![vec![origin]];
        loop {
            let depth = levels.len();
            let mut next = Vec::new();
            for &v in &levels[depth - 1] {
                for &(w, e) in g.neighbors(v) {
                    if level_of[w] == usize::MAX {
                        level_of[w] = depth;
                        next.push(w);
                    }
                    if level_of[w] == depth {
                        sigma[w] += sigma[v];
                        preds[w].push((v, e));
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            let done = stop(&next);
            levels.push(next);
            if done {
                break;
            }
        }
        ShortestPaths { levels, sigma, preds }
    }

    /// Pushes `inject` weights back toward the origin. Calls `on_edge` with each edge's
    /// share and returns the accumulated dependency of every node.
    fn back_propagate(&self, inject: &[f64], mut on_edge: impl FnMut(usize, f64)) -> Vec<f64> {
        let mut delta = vec![0.0; self.sigma.len()];
        for level in self.levels.iter().skip(1).rev() {
            for &w in level {
                let total = inject[w] + delta[w];
                if total == 0.0 {
                    continue;
                }
                for &(v, e) in &self.preds[w] {
                    let share = self.sigma[v] / self.sigma[w] * total;
                    on_edge(e, share);
                    delta[v] += share;
                }
            }
        }
        delta
    }
}

fn load_contribution(g: &GridNetwork, load: NodeId) -> Vec<(usize, f64)> {
    let is_other_source = |v: NodeId| v != load && g.role(v).source;
    let paths = ShortestPaths::explore(g, load, |level| level.iter().any(|&v| is_other_source(v)));
    let Some(last) = paths.levels.last().filter(|_| paths.levels.len() > 1) else {
        return Vec::new();
    };
    let nearest: Vec<NodeId> = last.iter().copied().filter(|&v| is_other_source(v)).collect();
    if nearest.is_empty() {
        return Vec::new();
    }
    let mut inject = vec![0.0; g.universe()];
    let weight = 1.0 / nearest.len() as f64;
    for &s in &nearest {
        inject[s] = weight;
    }
    let mut shares = Vec::new();
    paths.back_propagate(&inject, |e, share| shares.push((e, share)));
    shares
}

/// Edge load of every edge of `g`.
pub fn edge_loads(g: &GridNetwork) -> EdgeLoadMap {
    let loads: Vec<NodeId> = g.loads().iter().collect();
    let parts = par::map(&loads, |&t| load_contribution(g, t));
    let mut values = vec![0.0; g.edge_count()];
    for part in parts {
        for (e, share) in part {
            values[e] += share;
        }
    }
    EdgeLoadMap {
        edges: g.edges().to_vec(),
        values,
    }
}

fn nodal_contribution(g: &GridNetwork, source: NodeId) -> Vec<(NodeId, f64)> {
    let paths = ShortestPaths::explore(g, source, |_| false);
    let mut inject = vec![0.0; g.universe()];
    for level in paths.levels.iter().skip(1) {
        for &t in level {
            if g.role(t).load {
                inject[t] = 1.0;
            }
        }
    }
    let delta = paths.back_propagate(&inject, |_, _| {});
    paths
        .levels
        .iter()
        .skip(1)
        .flatten()
        .map(|&v| (v, delta[v]))
        .filter(|&(_, d)| d != 0.0)
        .collect()
}

/// Betweenness of every node restricted to source–load pairs, endpoints excluded.
pub fn nodal_loads(g: &GridNetwork) -> BTreeMap<NodeId, f64> {
    let sources: Vec<NodeId> = g.sources().iter().collect();
    let parts = par::map(&sources, |&s| nodal_contribution(g, s));
    let mut values = vec![0.0; g.universe()];
    for part in parts {
        for (v, d) in part {
            values[v] += d;
        }
    }
    g.nodes().map(|v| (v, values[v])).collect()
}

/// Capacities of `g0`'s edges with margin `alpha`.
pub fn capacities(g0: &GridNetwork, alpha: f64) -> Result<CapacityMap> {
    if alpha < 0.0 || !alpha.is_finite() {
        return Err(Error::invalid(format!(
            "capacity margin must be a finite non-negative number, got {alpha}"
        )));
    }
    let loads = edge_loads(g0);
    let values = loads.values.iter().map(|l| (1.0 + alpha) * l).collect();
    Ok(CapacityMap {
        alpha,
        edges: loads.edges,
        values,
    })
}

fn overloaded(g: &GridNetwork, caps: &CapacityMap) -> Result<Vec<bool>> {
    let loads = edge_loads(g);
    g.edges()
        .iter()
        .zip(loads.values())
        .map(|(&e, &load)| {
            let cap = caps.get(e).ok_or(Error::MissingCapacity(e))?;
            Ok(load > cap)
        })
        .collect()
}

/// One synchronous failure round: drops every edge whose load exceeds its capacity.
pub fn failure_step(g: &GridNetwork, caps: &CapacityMap) -> Result<GridNetwork> {
    let fails = overloaded(g, caps)?;
    Ok(g.retain_edges(|i| !fails[i]))
}

/// Applies the failure operator until the network stops changing.
pub fn cascade_fixpoint(g: &GridNetwork, caps: &CapacityMap) -> Result<CascadeTrace> {
    let mut current = g.clone();
    let mut rounds = Vec::new();
    loop {
        let fails = overloaded(&current, caps)?;
        if !fails.contains(&true) {
            break;
        }
        let removed = current
            .edges()
            .iter()
            .zip(&fails)
            .filter(|(_, &f)| f)
            .map(|(&e, _)| e)
            .collect();
        rounds.push(removed);
        current = current.retain_edges(|i| !fails[i]);
    }
    Ok(CascadeTrace {
        rounds,
        network: current,
    })
}

/// Attacks `attack \ defense`, runs the cascade and returns the surviving network's
/// trace alongside the disconnected-load count.
pub fn simulate(
    g0: &GridNetwork,
    caps: &CapacityMap,
    attack: &NodeSet,
    defense: &NodeSet,
) -> Result<(usize, CascadeTrace)> {
    if let Some(n) = attack.iter().chain(defense.iter()).find(|&n| !g0.contains(n)) {
        return Err(Error::UnknownNode(n));
    }
    let hit = g0.remove_nodes(&attack.difference(defense));
    let trace = cascade_fixpoint(&hit, caps)?;
    Ok((trace.network.disc(&g0.loads()), trace))
}

/// Number of loads of `g0` disconnected after attacking `attack \ defense` and letting
/// the cascade settle.
pub fn payoff(g0: &GridNetwork, caps: &CapacityMap, attack: &NodeSet, defense: &NodeSet) -> Result<usize> {
    simulate(g0, caps, attack, defense).map(|(p, _)| p)
}
