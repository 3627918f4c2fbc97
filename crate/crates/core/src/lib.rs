//! Valuation networks.
//!
//! Factored uncertain knowledge (probability, Spohn kappa ranks, or
//! possibility) is held as a bipartite network of variables and valuation
//! nodes. Marginals are computed by fusion (variable elimination over
//! valuations), and conditional-independence statements are derived by
//! fusing away every variable outside the query and testing cut-set
//! separation in what remains. Undirected graphs, DAGs, directed balloon
//! graphs and recursive causal graphs convert into networks, and
//! d-separation, moralization and a brute-force numeric test are provided
//! as independent oracles.

pub mod algebra;
pub mod cli;
pub mod converters;
pub mod dot;
pub mod error;
pub mod fusion;
pub mod independence;
pub mod model;
pub mod network;
pub mod random;

pub use algebra::{var_set, AlgebraKind, Domain, Rank, Table, Valuation, VarSet, Variable};
pub use error::{Error, Result};
pub use network::{ValuationNetwork, ValuationNode};
