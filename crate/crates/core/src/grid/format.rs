//! Line-oriented grid file format:
//!
//! ```text
//! # comment
//! node <id> <S|L|T|SL>
//! edge <id> <id>
//! ```
//!
//! Declarations may come in any order; every edge endpoint must be declared.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{GridNetwork, NodeId, Role};
use crate::error::{Error, Result};

pub fn load_network(text: &str) -> Result<GridNetwork> {
    let mut nodes: BTreeMap<NodeId, Role> = BTreeMap::new();
    let mut edges: Vec<(usize, NodeId, NodeId)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let parse_id = |s: &str| {
            s.parse::<NodeId>().map_err(|_| Error::Parse {
                line,
                message: format!("expected a non-negative node id, found `{s}`"),
            })
        };
        match fields.as_slice() {
            ["node", id, role] => {
                let id = parse_id(id)?;
                let role = Role::from_code(role).ok_or_else(|| Error::Parse {
                    line,
                    message: format!("unknown role `{role}` (expected S, L, T or SL)"),
                })?;
                if nodes.insert(id, role).is_some() {
                    return Err(Error::DuplicateNode { line, node: id });
                }
            }
            ["edge", a, b] => {
                let (a, b) = (parse_id(a)?, parse_id(b)?);
                if a == b {
                    return Err(Error::Parse {
                        line,
                        message: format!("self-loop on node {a}"),
                    });
                }
                edges.push((line, a, b));
            }
            _ => {
                return Err(Error::Parse {
                    line,
                    message: format!("expected `node <id> <role>` or `edge <id> <id>`, found `{content}`"),
                })
            }
        }
    }

    for &(line, a, b) in &edges {
        for node in [a, b] {
            if !nodes.contains_key(&node) {
                return Err(Error::UndeclaredNode { line, node });
            }
        }
    }
    GridNetwork::new(nodes, edges.into_iter().map(|(_, a, b)| (a, b)))
}

impl GridNetwork {
    /// Serializes present nodes and edges in ascending order.
    pub fn to_grid_file(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {} nodes, {} edges", self.node_count(), self.edge_count());
        for n in self.nodes() {
            let _ = writeln!(out, "node {n} {}", self.role(n).code());
        }
        for e in self.edges() {
            let (a, b) = e.endpoints();
            let _ = writeln!(out, "edge {a} {b}");
        }
        out
    }
}

impl std::str::FromStr for GridNetwork {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        load_network(s)
    }
}
