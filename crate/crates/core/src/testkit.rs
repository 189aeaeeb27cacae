//! Brute-force oracles and fixtures for tests. Nothing here shares code with the
//! shortest-path accumulation used by the library; paths are enumerated explicitly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid::{
    generate_set_cover_instance, generate_vertex_cover_instance, GridNetwork, NodeId, ReductionInstance, Role,
};

pub mod fixtures {
    use super::*;

    /// s(0) – m(1) – t(2)
    pub fn p3() -> GridNetwork {
        GridNetwork::new(
            [(0, Role::SOURCE), (1, Role::TRANSMISSION), (2, Role::LOAD)],
            [(0, 1), (1, 2)],
        )
        .unwrap()
    }

    /// s1(0) – t(2) – s2(1)
    pub fn v2() -> GridNetwork {
        GridNetwork::new(
            [(0, Role::SOURCE), (1, Role::SOURCE), (2, Role::LOAD)],
            [(0, 2), (1, 2)],
        )
        .unwrap()
    }

    /// sources 0, 1; loads 2, 3; all source–load edges
    pub fn k22() -> GridNetwork {
        GridNetwork::new(
            [(0, Role::SOURCE), (1, Role::SOURCE), (2, Role::LOAD), (3, Role::LOAD)],
            [(0, 2), (0, 3), (1, 2), (1, 3)],
        )
        .unwrap()
    }

    /// h1 = {s1, s2}, h2 = {s2, s3}, k = 1: nodes h1=0, h2=1, s1=2, s2=3, s3=4.
    pub fn sc1() -> ReductionInstance {
        generate_set_cover_instance(3, &[vec![0, 1], vec![1, 2]], 1).unwrap()
    }

    pub fn triangle_vertex_cover(k: usize) -> ReductionInstance {
        generate_vertex_cover_instance(3, &[(0, 1), (1, 2), (0, 2)], k).unwrap()
    }
}

/// All simple paths from `from` to `to` with exactly `len` edges.
pub fn paths_of_length(g: &GridNetwork, from: NodeId, to: NodeId, len: usize) -> Vec<Vec<NodeId>> {
    fn walk(g: &GridNetwork, path: &mut Vec<NodeId>, to: NodeId, left: usize, out: &mut Vec<Vec<NodeId>>) {
        let here = *path.last().unwrap();
        if left == 0 {
            if here == to {
                out.push(path.clone());
            }
            return;
        }
        for &(next, _) in g.neighbors(here) {
            if !path.contains(&next) {
                path.push(next);
                walk(g, path, to, left - 1, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    if g.contains(from) && g.contains(to) {
        walk(g, &mut vec![from], to, len, &mut out);
    }
    out
}

/// Shortest paths between two nodes found by iterative deepening, as node sequences.
pub fn shortest_paths(g: &GridNetwork, from: NodeId, to: NodeId) -> Vec<Vec<NodeId>> {
    for len in 0..g.universe() {
        let paths = paths_of_length(g, from, to, len);
        if !paths.is_empty() {
            return paths;
        }
    }
    Vec::new()
}

/// Sources other than `t` at minimum path length, found by explicit enumeration.
pub fn naive_nearest_sources(g: &GridNetwork, t: NodeId) -> Vec<NodeId> {
    let mut best: Option<usize> = None;
    let mut found = Vec::new();
    for s in g.nodes().filter(|&s| s != t && g.is_source(s)) {
        if let Some(p) = shortest_paths(g, s, t).first() {
            let d = p.len() - 1;
            match best {
                Some(b) if d > b => {}
                Some(b) if d == b => found.push(s),
                _ => {
                    best = Some(d);
                    found = vec![s];
                }
            }
        }
    }
    found
}

fn path_uses_edge(path: &[NodeId], a: NodeId, b: NodeId) -> bool {
    path.windows(2)
        .any(|w| (w[0] == a && w[1] == b) || (w[0] == b && w[1] == a))
}

/// Edge loads aligned with `g.edges()`.
pub fn naive_edge_loads(g: &GridNetwork) -> Vec<f64> {
    let mut loads = vec![0.0; g.edge_count()];
    for t in g.nodes().filter(|&t| g.is_load(t)) {
        let nearest = naive_nearest_sources(g, t);
        for &s in &nearest {
            let paths = shortest_paths(g, s, t);
            for (i, e) in g.edges().iter().enumerate() {
                let (a, b) = e.endpoints();
                let through = paths.iter().filter(|p| path_uses_edge(p, a, b)).count();
                loads[i] += through as f64 / (nearest.len() as f64 * paths.len() as f64);
            }
        }
    }
    loads
}

/// Nodal loads indexed by node id (zero for absent ids).
pub fn naive_nodal_loads(g: &GridNetwork) -> Vec<f64> {
    let mut loads = vec![0.0; g.universe()];
    for s in g.nodes().filter(|&s| g.is_source(s)) {
        for t in g.nodes().filter(|&t| t != s && g.is_load(t)) {
            let paths = shortest_paths(g, s, t);
            if paths.is_empty() {
                continue;
            }
            for v in g.nodes() {
                let through = paths.iter().filter(|p| p[1..p.len() - 1].contains(&v)).count();
                loads[v] += through as f64 / paths.len() as f64;
            }
        }
    }
    loads
}

/// Loads of `all_loads` that are absent or see no other source, by enumeration.
pub fn naive_disc(g: &GridNetwork, all_loads: &[NodeId]) -> usize {
    all_loads
        .iter()
        .filter(|&&t| !g.contains(t) || naive_nearest_sources(g, t).is_empty())
        .count()
}

/// Role assignment drawn from a seed; every role (including source+load) is possible.
pub fn random_roles(n: usize, rng: &mut impl Rng) -> Vec<(NodeId, Role)> {
    const ROLES: [Role; 5] = [
        Role::SOURCE,
        Role::LOAD,
        Role::LOAD,
        Role::TRANSMISSION,
        Role::SOURCE_LOAD,
    ];
    (0..n).map(|v| (v, ROLES[rng.random_range(0..ROLES.len())])).collect()
}

/// Graph on `n` nodes whose edges are the set bits of `mask` over pairs (i < j) in
/// lexicographic order.
pub fn graph_from_mask(n: usize, mask: u64, roles: Vec<(NodeId, Role)>) -> GridNetwork {
    let pairs = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
    let edges = pairs.enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| p);
    GridNetwork::new(roles, edges).unwrap()
}

pub fn is_connected(g: &GridNetwork) -> bool {
    let label = g.components();
    g.nodes().all(|n| label[n] == 0)
}

/// Random connected graph with random roles: a spanning tree plus edges kept with
/// probability `p`.
pub fn random_connected_grid(n: usize, p: f64, seed: u64) -> GridNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.random_range(0..v), v));
    }
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(p) {
                edges.push((a, b));
            }
        }
    }
    let roles = random_roles(n, &mut rng);
    GridNetwork::new(roles, edges).unwrap()
}

/// Random connected grid that has at least one pure source and one pure load.
pub fn random_game_grid(n: usize, p: f64, seed: u64) -> GridNetwork {
    let g = random_connected_grid(n, p, seed);
    let mut roles: Vec<(NodeId, Role)> = g.nodes().map(|v| (v, g.role(v))).collect();
    roles[0].1 = Role::SOURCE;
    roles[n - 1].1 = Role::LOAD;
    let edges: Vec<_> = g.edges().iter().map(|e| e.endpoints()).collect();
    GridNetwork::new(roles, edges).unwrap()
}

/// Smallest number of subsets covering the ground set, by exhaustive search.
pub fn min_set_cover(ground: usize, sets: &[Vec<usize>]) -> Option<usize> {
    let full: u64 = (1 << ground) - 1;
    let masks: Vec<u64> = sets.iter().map(|s| s.iter().fold(0, |m, &e| m | 1 << e)).collect();
    (0u64..1 << sets.len())
        .filter(|pick| {
            let cover = masks
                .iter()
                .enumerate()
                .filter(|(i, _)| pick >> i & 1 == 1)
                .fold(0, |m, (_, s)| m | s);
            cover == full
        })
        .map(|pick| pick.count_ones() as usize)
        .min()
}

/// Size of a minimum vertex cover, by exhaustive search.
pub fn min_vertex_cover(n: usize, edges: &[(NodeId, NodeId)]) -> usize {
    (0u64..1 << n)
        .filter(|pick| edges.iter().all(|&(a, b)| pick >> a & 1 == 1 || pick >> b & 1 == 1))
        .map(|pick| pick.count_ones() as usize)
        .min()
        .unwrap_or(0)
}
