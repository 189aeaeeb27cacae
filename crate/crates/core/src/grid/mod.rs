//! Grid topology: nodes with source/load roles, undirected edges, node removal and
//! connectivity accounting.
//!
//! Node ids are dense integers fixed when a network is built. Removing nodes marks them
//! absent rather than renumbering, so a strategy's node set means the same thing on
//! every subgraph of the original network.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

mod format;
mod generate;

pub use format::load_network;
pub use generate::{
    generate_set_cover_instance, generate_synthetic, generate_vertex_cover_instance, ReductionInstance,
};

pub type NodeId = usize;

/// Undirected edge stored with its smaller endpoint first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(NodeId, NodeId);

impl Edge {
    pub fn new(a: NodeId, b: NodeId) -> Self {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn endpoints(self) -> (NodeId, NodeId) {
        (self.0, self.1)
    }

    pub fn is_loop(self) -> bool {
        self.0 == self.1
    }

    pub fn touches(self, node: NodeId) -> bool {
        self.0 == node || self.1 == node
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

/// Role flags of a node. Neither flag set means a transmission node.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Role {
    pub source: bool,
    pub load: bool,
}

impl Role {
    pub const TRANSMISSION: Role = Role {
        source: false,
        load: false,
    };
    pub const SOURCE: Role = Role {
        source: true,
        load: false,
    };
    pub const LOAD: Role = Role {
        source: false,
        load: true,
    };
    pub const SOURCE_LOAD: Role = Role {
        source: true,
        load: true,
    };

    /// Code used by the grid file format.
    pub fn code(self) -> &'static str {
        match (self.source, self.load) {
            (false, false) => "T",
            (true, false) => "S",
            (false, true) => "L",
            (true, true) => "SL",
        }
    }

    pub fn from_code(code: &str) -> Option<Role> {
        match code {
            "T" => Some(Role::TRANSMISSION),
            "S" => Some(Role::SOURCE),
            "L" => Some(Role::LOAD),
            "SL" | "LS" => Some(Role::SOURCE_LOAD),
            _ => None,
        }
    }
}

/// Sorted, duplicate-free set of node ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeSet(Vec<NodeId>);

impl NodeSet {
    pub fn new() -> Self {
        NodeSet(Vec::new())
    }

    pub fn singleton(node: NodeId) -> Self {
        NodeSet(vec![node])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.0.binary_search(&node).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[NodeId] {
        &self.0
    }

    pub fn with(&self, node: NodeId) -> NodeSet {
        let mut nodes = self.0.clone();
        if let Err(pos) = nodes.binary_search(&node) {
            nodes.insert(pos, node);
        }
        NodeSet(nodes)
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        self.iter().chain(other.iter()).collect()
    }

    pub fn difference(&self, other: &NodeSet) -> NodeSet {
        NodeSet(self.iter().filter(|&n| !other.contains(n)).collect())
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.iter().all(|n| other.contains(n))
    }
}

impl FromIterator<NodeId> for NodeSet {
    fn from_iter<I: IntoIterator<Item = NodeId>>(iter: I) -> Self {
        let mut nodes: Vec<NodeId> = iter.into_iter().collect();
        nodes.sort_unstable();
        nodes.dedup();
        NodeSet(nodes)
    }
}

impl<const N: usize> From<[NodeId; N]> for NodeSet {
    fn from(nodes: [NodeId; N]) -> Self {
        nodes.into_iter().collect()
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}")?;
        }
        f.write_str("}")
    }
}

/// Undirected power-grid network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridNetwork {
    present: Vec<bool>,
    roles: Vec<Role>,
    edges: Vec<Edge>,
    // (neighbor, edge index), sorted by neighbor
    adjacency: Vec<Vec<(NodeId, usize)>>,
}

impl GridNetwork {
    /// Builds a network from role-annotated nodes and an edge list. Duplicate edges are
    /// collapsed; self-loops, duplicate nodes and dangling endpoints are rejected.
    pub fn new<N, E>(nodes: N, edges: E) -> Result<Self>
    where
        N: IntoIterator<Item = (NodeId, Role)>,
        E: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let nodes: Vec<(NodeId, Role)> = nodes.into_iter().collect();
        let universe = nodes.iter().map(|&(id, _)| id + 1).max().unwrap_or(0);
        let mut present = vec![false; universe];
        let mut roles = vec![Role::TRANSMISSION; universe];
        for (id, role) in nodes {
            if present[id] {
                return Err(Error::invalid(format!("node {id} given twice")));
            }
            present[id] = true;
            roles[id] = role;
        }
        let mut edge_list = Vec::new();
        for (a, b) in edges {
            for n in [a, b] {
                if !present.get(n).copied().unwrap_or(false) {
                    return Err(Error::UnknownNode(n));
                }
            }
            if a == b {
                return Err(Error::invalid(format!("self-loop on node {a}")));
            }
            edge_list.push(Edge::new(a, b));
        }
        Ok(Self::from_parts(present, roles, edge_list))
    }

    fn from_parts(present: Vec<bool>, roles: Vec<Role>, mut edges: Vec<Edge>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        let mut adjacency = vec![Vec::new(); present.len()];
        for (idx, e) in edges.iter().enumerate() {
            let (a, b) = e.endpoints();
            adjacency[a].push((b, idx));
            adjacency[b].push((a, idx));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        GridNetwork {
            present,
            roles,
            edges,
            adjacency,
        }
    }

    /// One past the largest node id ever declared; stable under removal.
    pub fn universe(&self) -> usize {
        self.present.len()
    }

    pub fn node_count(&self) -> usize {
        self.present.iter().filter(|&&p| p).count()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.present.get(node).copied().unwrap_or(false)
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.present.iter().enumerate().filter(|(_, &p)| p).map(|(i, _)| i)
    }

    pub fn node_set(&self) -> NodeSet {
        self.nodes().collect()
    }

    /// Role of a node id, present or not.
    pub fn role(&self, node: NodeId) -> Role {
        self.roles.get(node).copied().unwrap_or_default()
    }

    pub fn is_source(&self, node: NodeId) -> bool {
        self.contains(node) && self.roles[node].source
    }

    pub fn is_load(&self, node: NodeId) -> bool {
        self.contains(node) && self.roles[node].load
    }

    pub fn sources(&self) -> NodeSet {
        self.nodes().filter(|&n| self.roles[n].source).collect()
    }

    pub fn loads(&self) -> NodeSet {
        self.nodes().filter(|&n| self.roles[n].load).collect()
    }

    /// Edges in ascending order; an edge's position is its index.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_index(&self, edge: Edge) -> Option<usize> {
        self.edges.binary_search(&edge).ok()
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.edge_index(Edge::new(a, b)).is_some()
    }

    /// `(neighbor, edge index)` pairs of a node, by ascending neighbor id.
    pub fn neighbors(&self, node: NodeId) -> &[(NodeId, usize)] {
        self.adjacency.get(node).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.neighbors(node).len()
    }

    /// Drops the given nodes and every edge touching them. Ids not in the network are
    /// ignored; survivors keep their ids and roles.
    pub fn remove_nodes(&self, removed: &NodeSet) -> GridNetwork {
        if removed.iter().all(|n| !self.contains(n)) {
            return self.clone();
        }
        let mut present = self.present.clone();
        for n in removed.iter() {
            if let Some(p) = present.get_mut(n) {
                *p = false;
            }
        }
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|e| {
                let (a, b) = e.endpoints();
                present[a] && present[b]
            })
            .collect();
        Self::from_parts(present, self.roles.clone(), edges)
    }

    /// Keeps the edges whose index satisfies `keep`; nodes are untouched.
    pub fn retain_edges(&self, mut keep: impl FnMut(usize) -> bool) -> GridNetwork {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| keep(*i))
            .map(|(_, &e)| e)
            .collect();
        Self::from_parts(self.present.clone(), self.roles.clone(), edges)
    }

    /// Hop distances from `origin` to every node (`None` when unreachable or absent).
    pub fn hop_distances(&self, origin: NodeId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.universe()];
        if !self.contains(origin) {
            return dist;
        }
        dist[origin] = Some(0);
        let mut queue = VecDeque::from([origin]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap_or(0) + 1;
            for &(w, _) in self.neighbors(v) {
                if dist[w].is_none() {
                    dist[w] = Some(d);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Sources other than `node` at minimum hop distance from it.
    pub fn nearest_sources(&self, node: NodeId) -> Result<NodeSet> {
        if !self.contains(node) {
            return Err(Error::UnknownNode(node));
        }
        let mut seen = vec![false; self.universe()];
        seen[node] = true;
        let mut frontier = vec![node];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &v in &frontier {
                for &(w, _) in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        next.push(w);
                    }
                }
            }
            let found: NodeSet = next.iter().copied().filter(|&w| self.roles[w].source).collect();
            if !found.is_empty() {
                return Ok(found);
            }
            frontier = next;
        }
        Ok(NodeSet::new())
    }

    /// Connected-component label per node id (`usize::MAX` for absent nodes).
    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.universe()];
        let mut next = 0;
        for start in self.nodes() {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &(w, _) in self.neighbors(v) {
                    if label[w] == usize::MAX {
                        label[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    /// Number of loads in `all_loads` that are absent from this network or cannot reach
    /// any source other than themselves.
    pub fn disc(&self, all_loads: &NodeSet) -> usize {
        let label = self.components();
        let groups = label.iter().filter(|&&l| l != usize::MAX).max().map_or(0, |m| m + 1);
        let mut sources_in = vec![0usize; groups];
        for s in self.nodes().filter(|&n| self.roles[n].source) {
            sources_in[label[s]] += 1;
        }
        all_loads
            .iter()
            .filter(|&t| {
                if !self.contains(t) {
                    return true;
                }
                let own = usize::from(self.roles[t].source);
                sources_in[label[t]] <= own
            })
            .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> GridNetwork {
        GridNetwork::new(
            [(0, Role::SOURCE), (1, Role::TRANSMISSION), (2, Role::LOAD)],
            [(0, 1), (1, 2)],
        )
        .unwrap()
    }

    fn v2() -> GridNetwork {
        GridNetwork::new(
            [(0, Role::SOURCE), (1, Role::SOURCE), (2, Role::LOAD)],
            [(0, 2), (1, 2)],
        )
        .unwrap()
    }

    fn k22() -> GridNetwork {
        GridNetwork::new(
            [(0, Role::SOURCE), (1, Role::SOURCE), (2, Role::LOAD), (3, Role::LOAD)],
            [(0, 2), (0, 3), (1, 2), (1, 3)],
        )
        .unwrap()
    }

    #[test]
    fn remove_middle_of_path() {
        let g = p3().remove_nodes(&NodeSet::from([1]));
        assert_eq!(g.node_set(), NodeSet::from([0, 2]));
        assert_eq!(g.edge_count(), 0);
        assert!(g.is_source(0) && g.is_load(2));
    }

    #[test]
    fn remove_nothing_is_identity() {
        assert_eq!(v2().remove_nodes(&NodeSet::new()), v2());
        assert_eq!(v2().remove_nodes(&NodeSet::from([42])), v2());
    }

    #[test]
    fn remove_load_from_k22() {
        let g = k22().remove_nodes(&NodeSet::from([2]));
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edges(), &[Edge::new(0, 3), Edge::new(1, 3)]);
    }

    #[test]
    fn nearest_sources_cases() {
        assert_eq!(p3().nearest_sources(2).unwrap(), NodeSet::from([0]));
        assert_eq!(v2().nearest_sources(2).unwrap(), NodeSet::from([0, 1]));
        let cut = p3().remove_nodes(&NodeSet::from([0]));
        assert!(cut.nearest_sources(2).unwrap().is_empty());
        assert_eq!(p3().nearest_sources(7), Err(Error::UnknownNode(7)));
        assert_eq!(cut.nearest_sources(0), Err(Error::UnknownNode(0)));
    }

    #[test]
    fn nearest_sources_skips_self() {
        let g = GridNetwork::new(
            [(0, Role::SOURCE_LOAD), (1, Role::TRANSMISSION), (2, Role::SOURCE)],
            [(0, 1), (1, 2)],
        )
        .unwrap();
        assert_eq!(g.nearest_sources(0).unwrap(), NodeSet::from([2]));
        let alone = GridNetwork::new([(0, Role::SOURCE_LOAD)], []).unwrap();
        assert!(alone.nearest_sources(0).unwrap().is_empty());
        assert_eq!(alone.disc(&NodeSet::from([0])), 1);
    }

    #[test]
    fn disc_cases() {
        assert_eq!(v2().disc(&NodeSet::from([2])), 0);
        let bare = v2().remove_nodes(&NodeSet::from([0, 1]));
        assert_eq!(bare.disc(&NodeSet::from([2])), 1);
        let k = k22().remove_nodes(&NodeSet::from([2]));
        assert_eq!(k.disc(&NodeSet::from([2, 3])), 1);
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert!(GridNetwork::new([(0, Role::LOAD)], [(0, 0)]).is_err());
        assert_eq!(
            GridNetwork::new([(0, Role::LOAD)], [(0, 3)]),
            Err(Error::UnknownNode(3))
        );
        assert!(GridNetwork::new([(0, Role::LOAD), (0, Role::SOURCE)], []).is_err());
    }

    #[test]
    fn node_set_ops() {
        let a = NodeSet::from([3, 1, 1]);
        assert_eq!(a.as_slice(), &[1, 3]);
        assert_eq!(a.with(2).as_slice(), &[1, 2, 3]);
        assert_eq!(a.difference(&NodeSet::from([3])), NodeSet::from([1]));
        assert_eq!(a.to_string(), "{1,3}");
        assert!(NodeSet::from([0]) < NodeSet::from([0, 1]));
        assert!(NodeSet::from([0, 1]) < NodeSet::from([1]));
    }
}
