//! Attacker/defender game over cascading failures in power-grid networks.
//!
//! The attacker destroys up to `k_a` nodes, the defender hardens up to `k_d` nodes, and
//! the payoff is the number of load nodes left without a source once load-driven edge
//! failures have cascaded to a fixed point. The crate provides the cascade model,
//! pure and mixed strategies with greedy and exhaustive best responses, and a
//! double-oracle solver for the minimax mixed strategies.

pub mod cascade;
pub mod error;
pub mod game;
pub mod grid;
mod par;
pub mod strategy;
#[cfg(feature = "testkit")]
pub mod testkit;

pub use cascade::{capacities, edge_loads, nodal_loads, payoff, CapacityMap, CascadeTrace, EdgeLoadMap};
pub use error::{Error, Result};
pub use game::{double_oracle, solve_full_enumeration, DoubleOracleConfig, GameSolution, PayoffMatrix};
pub use grid::{load_network, Edge, GridNetwork, NodeId, NodeSet, Role};
pub use strategy::{BestResponse, GridGame, MixedStrategy, OracleKind, PureStrategy, Side};
