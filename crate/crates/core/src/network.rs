//! Valuation networks: variables, valuation nodes, edges and arcs.
//!
//! A node is either plain (empty head) or a conditional for its head given
//! its tail. Edges join a node to its tail (or, for plain nodes, to its whole
//! domain); arcs join a conditional to its head variables.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use crate::algebra::{fmt_set, validate_name, AlgebraKind, Domain, VarSet, Valuation, Variable, API_TOLERANCE};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ValuationNode {
    name: String,
    domain: Domain,
    head: VarSet,
    table: Option<Valuation>,
}

impl ValuationNode {
    /// A structure-only node; `head` empty means a plain valuation.
    pub fn new(name: impl Into<String>, domain: Domain, head: VarSet) -> Result<Self> {
        let name = name.into();
        validate_name(&name)?;
        if let Some(h) = head.iter().find(|h| !domain.contains(h)) {
            return Err(Error::Domain(format!("head variable {h} of {name} is not in its domain")));
        }
        Ok(Self { name, domain, head, table: None })
    }

    pub fn plain(name: impl Into<String>, domain: Domain) -> Result<Self> {
        Self::new(name, domain, VarSet::new())
    }

    pub fn conditional(name: impl Into<String>, domain: Domain, head: VarSet) -> Result<Self> {
        if head.is_empty() {
            return Err(Error::Domain("a conditional needs a non-empty head".into()));
        }
        Self::new(name, domain, head)
    }

    /// Attaches a table; its domain must be set-equal to the node's domain
    /// and it is re-laid-out in the node's variable order.
    pub fn with_table(mut self, table: Valuation) -> Result<Self> {
        if !table.domain().set_eq(&self.domain) {
            return Err(Error::Domain(format!(
                "table domain {} does not match node {} domain {}",
                table.domain(),
                self.name,
                self.domain
            )));
        }
        self.table = Some(table.reorder(&self.domain)?);
        Ok(self)
    }

    pub(crate) fn from_parts(name: String, domain: Domain, head: VarSet, table: Option<Valuation>) -> Self {
        Self { name, domain, head, table }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn head(&self) -> &VarSet {
        &self.head
    }

    pub fn tail(&self) -> VarSet {
        self.domain
            .names()
            .filter(|n| !self.head.contains(*n))
            .map(str::to_string)
            .collect()
    }

    pub fn is_conditional(&self) -> bool {
        !self.head.is_empty()
    }

    pub fn table(&self) -> Option<&Valuation> {
        self.table.as_ref()
    }

    pub fn contains(&self, var: &str) -> bool {
        self.domain.contains(var)
    }

    pub fn without_table(&self) -> Self {
        Self { table: None, ..self.clone() }
    }
}

impl fmt::Display for ValuationNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_conditional() {
            write!(f, "{}({} | {})", self.name, fmt_set(&self.head), fmt_set(&self.tail()))
        } else {
            write!(f, "{}{}", self.name, fmt_set(&self.domain.name_set()))
        }
    }
}

/// The four-tuple of variables, nodes, edges and arcs. Edges and arcs are
/// derived from node domains and heads, so they always agree with them.
#[derive(Debug, Clone, PartialEq)]
pub struct ValuationNetwork {
    variables: Vec<Variable>,
    nodes: Vec<ValuationNode>,
    kind: Option<AlgebraKind>,
}

impl ValuationNetwork {
    /// Validates and builds a network. Rejects unknown or mismatched
    /// variables, duplicate names, a variable heading two nodes, cyclic
    /// conditional structure, mixed algebra kinds, and conditional tables
    /// that are not normalized over their heads.
    pub fn build(variables: Vec<Variable>, nodes: Vec<ValuationNode>) -> Result<Self> {
        let declared = Domain::new(variables.clone())?;
        let mut names = VarSet::new();
        let mut owner: BTreeMap<&str, &str> = BTreeMap::new();
        let mut kind = None;
        for node in &nodes {
            if !names.insert(node.name.clone()) {
                return Err(Error::DuplicateNode(node.name.clone()));
            }
            for v in node.domain.vars() {
                match declared.get(v.name()) {
                    None => return Err(Error::UnknownVariable(v.name().to_string())),
                    Some(d) if d.frame_size() != v.frame_size() => {
                        return Err(Error::Domain(format!(
                            "node {} uses {} with frame size {}, declared {}",
                            node.name,
                            v.name(),
                            v.frame_size(),
                            d.frame_size()
                        )))
                    }
                    Some(_) => {}
                }
            }
            for h in &node.head {
                if let Some(first) = owner.insert(h, &node.name) {
                    return Err(Error::HeadConflict {
                        var: h.clone(),
                        first: first.to_string(),
                        second: node.name.clone(),
                    });
                }
            }
            if let Some(t) = &node.table {
                match kind {
                    None => kind = Some(t.kind()),
                    Some(k) if k != t.kind() => return Err(Error::AlgebraMismatch(k, t.kind())),
                    Some(_) => {}
                }
                if node.is_conditional() {
                    let deviation = t.kernel_deviation(&node.head, false)?;
                    if deviation > API_TOLERANCE {
                        return Err(Error::NotNormalized { node: node.name.clone(), deviation });
                    }
                }
            }
        }
        check_acyclic(&nodes)?;
        Ok(Self { variables, nodes, kind })
    }

    pub(crate) fn from_parts(variables: Vec<Variable>, nodes: Vec<ValuationNode>, kind: Option<AlgebraKind>) -> Self {
        Self { variables, nodes, kind }
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, name: &str) -> Option<&Variable> {
        self.variables.iter().find(|v| v.name() == name)
    }

    pub fn variable_names(&self) -> VarSet {
        self.variables.iter().map(|v| v.name().to_string()).collect()
    }

    pub fn nodes(&self) -> &[ValuationNode] {
        &self.nodes
    }

    pub fn node(&self, name: &str) -> Option<&ValuationNode> {
        self.nodes.iter().find(|n| n.name == name)
    }

    /// Algebra kind of the attached tables, if any node carries one.
    pub fn kind(&self) -> Option<AlgebraKind> {
        self.kind
    }

    /// True when every node carries a table.
    pub fn has_tables(&self) -> bool {
        self.nodes.iter().all(|n| n.table.is_some())
    }

    /// The same network with all tables stripped.
    pub fn structure(&self) -> ValuationNetwork {
        ValuationNetwork {
            variables: self.variables.clone(),
            nodes: self.nodes.iter().map(ValuationNode::without_table).collect(),
            kind: None,
        }
    }

    /// `(node, variable)` pairs for tail membership (whole domain for plain nodes).
    pub fn edges(&self) -> Vec<(String, String)> {
        self.nodes
            .iter()
            .flat_map(|n| {
                n.domain
                    .names()
                    .filter(|v| !n.head.contains(*v))
                    .map(|v| (n.name.clone(), v.to_string()))
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    /// `(node, variable)` pairs for head membership.
    pub fn arcs(&self) -> Vec<(String, String)> {
        self.nodes
            .iter()
            .flat_map(|n| n.head.iter().map(|v| (n.name.clone(), v.clone())).collect::<Vec<_>>())
            .collect()
    }

    /// Number of nodes whose domain contains `var`.
    pub fn degree(&self, var: &str) -> usize {
        self.nodes.iter().filter(|n| n.contains(var)).count()
    }

    /// Re-checks every structural invariant. Used after transformations.
    pub fn check_invariants(&self) -> Result<()> {
        let declared = self.variable_names();
        let mut owner = VarSet::new();
        for node in &self.nodes {
            if let Some(v) = node.domain.names().find(|v| !declared.contains(*v)) {
                return Err(Error::UnknownVariable(v.to_string()));
            }
            if let Some(h) = node.head.iter().find(|h| !node.domain.contains(h)) {
                return Err(Error::Domain(format!("head {h} outside domain of {}", node.name)));
            }
            for h in &node.head {
                if !owner.insert(h.clone()) {
                    return Err(Error::HeadConflict { var: h.clone(), first: "?".into(), second: node.name.clone() });
                }
            }
            let incident: VarSet = self
                .edges()
                .into_iter()
                .chain(self.arcs())
                .filter(|(n, _)| *n == node.name)
                .map(|(_, v)| v)
                .collect();
            if incident != node.domain.name_set() {
                return Err(Error::Domain(format!("edges and arcs of {} do not match its domain", node.name)));
            }
        }
        check_acyclic(&self.nodes)
    }

    fn check_query(&self, sets: [&VarSet; 3]) -> Result<()> {
        let known = self.variable_names();
        for set in sets {
            if let Some(v) = set.iter().find(|v| !known.contains(*v)) {
                return Err(Error::UnknownVariable(v.clone()));
            }
        }
        check_disjoint(sets[0], sets[1], sets[2])
    }

    /// Cut-set separation in the bipartite node–variable graph: true iff
    /// every path from a variable in `r` to a variable in `s` passes through
    /// a variable in `v`. Arc directions are ignored.
    pub fn separated(&self, r: &VarSet, s: &VarSet, v: &VarSet) -> Result<bool> {
        self.check_query([r, s, v])?;
        let mut seen_vars: VarSet = r.clone();
        let mut seen_nodes = vec![false; self.nodes.len()];
        let mut queue: VecDeque<&str> = r.iter().map(String::as_str).collect();
        while let Some(x) = queue.pop_front() {
            if s.contains(x) {
                return Ok(false);
            }
            for (i, node) in self.nodes.iter().enumerate() {
                if seen_nodes[i] || !node.contains(x) {
                    continue;
                }
                seen_nodes[i] = true;
                for y in node.domain.names() {
                    if !v.contains(y) && seen_vars.insert(y.to_string()) {
                        queue.push_back(y);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Combination of every node's table.
    pub fn joint(&self) -> Result<Valuation> {
        let mut tables = self.nodes.iter().map(|n| n.table.as_ref().ok_or_else(|| Error::StructureOnly(n.name.clone())));
        let first = match tables.next() {
            Some(t) => t?.clone(),
            None => return Err(Error::StructureOnly("<empty network>".into())),
        };
        tables.try_fold(first, |acc, t| acc.combine(t?))
    }
}

impl fmt::Display for ValuationNetwork {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nodes: Vec<String> = self.nodes.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", nodes.join(", "))
    }
}

pub(crate) fn check_disjoint(r: &VarSet, s: &VarSet, v: &VarSet) -> Result<()> {
    for (a, b) in [(r, s), (r, v), (s, v)] {
        if let Some(x) = a.intersection(b).next() {
            return Err(Error::Overlap(format!("{x} appears in {} and {}", fmt_set(a), fmt_set(b))));
        }
    }
    Ok(())
}

/// Tail-to-head dependencies across conditionals must form a DAG.
pub(crate) fn check_acyclic(nodes: &[ValuationNode]) -> Result<()> {
    let mut succ: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    let mut indegree: BTreeMap<&str, usize> = BTreeMap::new();
    for node in nodes.iter().filter(|n| n.is_conditional()) {
        for t in node.domain.names().filter(|v| !node.head.contains(*v)) {
            for h in &node.head {
                succ.entry(t).or_default().push(h);
                *indegree.entry(h).or_default() += 1;
                indegree.entry(t).or_default();
            }
        }
    }
    let mut queue: VecDeque<&str> = indegree.iter().filter(|(_, &d)| d == 0).map(|(&v, _)| v).collect();
    let mut done = 0;
    while let Some(v) = queue.pop_front() {
        done += 1;
        for &w in succ.get(v).into_iter().flatten() {
            let d = indegree.get_mut(w).expect("registered");
            *d -= 1;
            if *d == 0 {
                queue.push_back(w);
            }
        }
    }
    if done < indegree.len() {
        let stuck: Vec<&str> = indegree.iter().filter(|(_, &d)| d > 0).map(|(&v, _)| v).collect();
        return Err(Error::ConditionalCycle(stuck.join(",")));
    }
    Ok(())
}
