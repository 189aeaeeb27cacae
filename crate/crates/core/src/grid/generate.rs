//! Synthetic grids and covering-problem embeddings.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GridNetwork, NodeId, Role};
use crate::error::{Error, Result};

/// A network together with the budgets and capacity margin of an embedded instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionInstance {
    pub network: GridNetwork,
    pub attacker_budget: usize,
    pub defender_budget: usize,
    pub alpha: f64,
}

/// Random connected grid: a random recursive spanning tree plus uniformly drawn extra
/// edges, with roles assigned to disjoint random node subsets. Same arguments, same
/// network.
pub fn generate_synthetic(
    n: usize,
    m: usize,
    source_fraction: f64,
    load_fraction: f64,
    seed: u64,
) -> Result<GridNetwork> {
    if n < 2 {
        return Err(Error::invalid("synthetic grid needs at least 2 nodes"));
    }
    let max_edges = n * (n - 1) / 2;
    if m < n - 1 || m > max_edges {
        return Err(Error::invalid(format!(
            "edge count {m} outside the feasible range [{}, {max_edges}] for {n} nodes",
            n - 1
        )));
    }
    let fractions_ok = source_fraction > 0.0 && load_fraction > 0.0 && source_fraction + load_fraction <= 1.0 + 1e-12;
    if !fractions_ok {
        return Err(Error::invalid(format!(
            "role fractions must be positive with sum at most 1 (got {source_fraction}, {load_fraction})"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<NodeId> = (0..n).collect();
    order.shuffle(&mut rng);

    let mut edges: HashSet<(NodeId, NodeId)> = HashSet::with_capacity(m);
    let mut edge_list = Vec::with_capacity(m);
    let mut push = |a: NodeId, b: NodeId, edges: &mut HashSet<_>| {
        let key = (a.min(b), a.max(b));
        if edges.insert(key) {
            edge_list.push(key);
            true
        } else {
            false
        }
    };
    for i in 1..n {
        let parent = order[rng.random_range(0..i)];
        push(order[i], parent, &mut edges);
    }
    let extra = m - (n - 1);
    if extra > 0 {
        if 2 * m <= max_edges {
            let mut added = 0;
            while added < extra {
                let a = rng.random_range(0..n);
                let b = rng.random_range(0..n);
                if a != b && push(a, b, &mut edges) {
                    added += 1;
                }
            }
        } else {
            let mut free: Vec<(NodeId, NodeId)> = (0..n)
                .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                .filter(|p| !edges.contains(p))
                .collect();
            free.shuffle(&mut rng);
            for &(a, b) in free.iter().take(extra) {
                push(a, b, &mut edges);
            }
        }
    }

    let sources = ((source_fraction * n as f64).round() as usize).clamp(1, n - 1);
    let loads = ((load_fraction * n as f64).round() as usize).clamp(1, n - sources);
    let mut ranked: Vec<NodeId> = (0..n).collect();
    ranked.shuffle(&mut rng);
    let mut roles = vec![Role::TRANSMISSION; n];
    for &v in &ranked[..sources] {
        roles[v] = Role::SOURCE;
    }
    for &v in &ranked[sources..sources + loads] {
        roles[v] = Role::LOAD;
    }

    GridNetwork::new(roles.into_iter().enumerate(), edge_list)
}

/// Embeds a set-cover instance: one source per subset, one load per ground element,
/// and an edge wherever the element belongs to the subset. Subset `j` becomes node
/// `j`; element `i` becomes node `sets.len() + i`.
pub fn generate_set_cover_instance(ground_size: usize, sets: &[Vec<usize>], k: usize) -> Result<ReductionInstance> {
    let h = sets.len();
    let mut covered = vec![false; ground_size];
    let mut edges = Vec::new();
    for (j, set) in sets.iter().enumerate() {
        for &s in set {
            if s >= ground_size {
                return Err(Error::invalid(format!(
                    "element {s} outside ground set of size {ground_size}"
                )));
            }
            covered[s] = true;
            edges.push((j, h + s));
        }
    }
    if let Some(s) = covered.iter().position(|&c| !c) {
        return Err(Error::invalid(format!("element {s} is not covered by any subset")));
    }
    let nodes = (0..h)
        .map(|j| (j, Role::SOURCE))
        .chain((0..ground_size).map(|s| (h + s, Role::LOAD)));
    Ok(ReductionInstance {
        network: GridNetwork::new(nodes, edges)?,
        attacker_budget: h,
        defender_budget: k,
        alpha: (h + ground_size) as f64,
    })
}

/// Embeds a vertex-cover instance: the graph itself with every node both source and
/// load, no defender budget and capacity margin equal to the edge count.
pub fn generate_vertex_cover_instance(
    node_count: usize,
    edges: &[(NodeId, NodeId)],
    k: usize,
) -> Result<ReductionInstance> {
    if let Some(&(a, _)) = edges.iter().find(|(a, b)| a == b) {
        return Err(Error::invalid(format!("self-loop on node {a}")));
    }
    let network = GridNetwork::new((0..node_count).map(|v| (v, Role::SOURCE_LOAD)), edges.iter().copied())?;
    let alpha = network.edge_count() as f64;
    Ok(ReductionInstance {
        network,
        attacker_budget: k,
        defender_budget: 0,
        alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn connected(g: &GridNetwork) -> bool {
        let label = g.components();
        g.nodes().all(|n| label[n] == 0)
    }

    #[test]
    fn synthetic_is_deterministic() {
        let a = generate_synthetic(6, 7, 0.34, 0.34, 42).unwrap();
        let b = generate_synthetic(6, 7, 0.34, 0.34, 42).unwrap();
        assert_eq!(a.to_grid_file(), b.to_grid_file());
        assert_eq!(a.edge_count(), 7);
        assert!(connected(&a));
    }

    #[test]
    fn synthetic_minimal() {
        let g = generate_synthetic(2, 1, 0.5, 0.5, 1).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.sources().len(), 1);
        assert_eq!(g.loads().len(), 1);
    }

    #[test]
    fn synthetic_rejects_infeasible() {
        assert!(generate_synthetic(5, 11, 0.2, 0.2, 0).is_err());
        assert!(generate_synthetic(5, 3, 0.2, 0.2, 0).is_err());
        assert!(generate_synthetic(1, 0, 0.5, 0.5, 0).is_err());
        assert!(generate_synthetic(5, 5, 0.7, 0.7, 0).is_err());
        assert!(generate_synthetic(5, 5, 0.0, 0.5, 0).is_err());
    }

    #[test]
    fn synthetic_dense_and_sparse() {
        for seed in 0..20 {
            let full = generate_synthetic(7, 21, 0.3, 0.3, seed).unwrap();
            assert_eq!(full.edge_count(), 21);
            let sparse = generate_synthetic(40, 45, 0.36, 0.31, seed).unwrap();
            assert_eq!(sparse.edge_count(), 45);
            assert!(connected(&sparse));
            assert_eq!(sparse.sources().len(), 14);
            assert_eq!(sparse.loads().len(), 12);
        }
    }

    #[test]
    fn set_cover_embedding() {
        let inst = generate_set_cover_instance(3, &[vec![0, 1], vec![1, 2]], 1).unwrap();
        assert_eq!(inst.network.node_count(), 5);
        assert_eq!(inst.network.edge_count(), 4);
        assert_eq!((inst.attacker_budget, inst.defender_budget, inst.alpha), (2, 1, 5.0));
        assert_eq!(inst.network.sources().as_slice(), &[0, 1]);
        assert_eq!(inst.network.loads().as_slice(), &[2, 3, 4]);

        let tiny = generate_set_cover_instance(1, &[vec![0]], 1).unwrap();
        assert_eq!((tiny.network.node_count(), tiny.network.edge_count()), (2, 1));
        assert_eq!((tiny.attacker_budget, tiny.defender_budget, tiny.alpha), (1, 1, 2.0));

        assert!(generate_set_cover_instance(2, &[vec![0]], 1).is_err());
    }

    #[test]
    fn vertex_cover_embedding() {
        let inst = generate_vertex_cover_instance(3, &[(0, 1), (1, 2), (0, 2)], 2).unwrap();
        assert_eq!(inst.network.node_count(), 3);
        assert!(inst
            .network
            .nodes()
            .all(|n| inst.network.is_source(n) && inst.network.is_load(n)));
        assert_eq!((inst.attacker_budget, inst.defender_budget, inst.alpha), (2, 0, 3.0));

        let edge = generate_vertex_cover_instance(2, &[(0, 1)], 1).unwrap();
        assert_eq!(edge.alpha, 1.0);
        assert!(generate_vertex_cover_instance(2, &[(0, 1), (1, 1)], 1).is_err());
    }
}
