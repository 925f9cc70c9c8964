//! Exact graph invariants around domination: solvers, induced-subgraph
//! classification, Cartesian product lower bounds in rational arithmetic,
//! and fair receptions, all sized for exhaustive checks on small graphs.

pub mod bitset;
pub mod bounds;
pub mod census;
pub mod classify;
pub mod domination;
pub mod fair;
pub mod graph;
pub mod graph6;

pub use bitset::VertexSet;
pub use graph::{Graph, GraphError};

/// Work limits for the exact solvers. `max_nodes` bounds search-tree
/// expansions per call; `enum_cap` bounds how many sets an enumeration may
/// collect. Hitting either limit is a reported failure, never a silent
/// approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
    pub enum_cap: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: 50_000_000,
            enum_cap: 1_000_000,
        }
    }
}

impl Budget {
    pub fn with_max_nodes(max_nodes: u64) -> Self {
        Budget {
            max_nodes,
            ..Budget::default()
        }
    }
}

/// Node-expansion meter shared by the search routines.
pub(crate) struct Work {
    pub(crate) used: u64,
    max: u64,
}

impl Work {
    pub(crate) fn new(budget: &Budget) -> Self {
        Work {
            used: 0,
            max: budget.max_nodes,
        }
    }

    /// Account one expansion; false once the budget is gone.
    #[must_use]
    pub(crate) fn spend(&mut self) -> bool {
        self.used += 1;
        self.used <= self.max
    }
}
