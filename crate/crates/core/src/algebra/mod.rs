//! The valuation algebra: variables, domains, dense tables and the three
//! primitive operations (combination, marginalization, removal) for the
//! probability, kappa and possibility instantiations.

mod domain;
mod rank;
mod valuation;

pub use domain::{fmt_set, Domain, VarSet, Variable};
pub(crate) use domain::validate_name;
pub use rank::Rank;
pub use valuation::{close, AlgebraKind, Table, Valuation, API_TOLERANCE};

/// Builds a [`VarSet`] from anything string-like.
pub fn var_set<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> VarSet {
    names.into_iter().map(|n| n.as_ref().to_string()).collect()
}
