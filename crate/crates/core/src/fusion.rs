//! Fusion: eliminating a variable by combining every node that contains it
//! and marginalizing it out, with head/tail bookkeeping for conditionals.
//!
//! When all fused nodes are conditionals, the result is labelled a
//! conditional for the union of their heads (minus the eliminated variable)
//! given the rest, provided the network stays acyclic. A conditional whose
//! head becomes empty is an identity and is dropped. Anything else yields a
//! plain node, which can only hide separations, never invent them.

use std::fmt;

use crate::algebra::{fmt_set, Domain, VarSet, Valuation};
use crate::error::{Error, Result};
use crate::network::{check_acyclic, ValuationNetwork, ValuationNode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FusionOptions {
    /// Drop conditionals whose head has been fully marginalized away.
    pub drop_identities: bool,
}

impl Default for FusionOptions {
    fn default() -> Self {
        Self { drop_identities: true }
    }
}

/// Variables to eliminate, in order. Each appears once and exists in the
/// network it was built for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationOrder {
    vars: Vec<String>,
}

impl EliminationOrder {
    pub fn new<S: AsRef<str>>(network: &ValuationNetwork, vars: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut seen = VarSet::new();
        let mut out = Vec::new();
        for v in vars {
            let v = v.as_ref();
            if network.variable(v).is_none() {
                return Err(Error::UnknownVariable(v.to_string()));
            }
            if !seen.insert(v.to_string()) {
                return Err(Error::DuplicateVariable(v.to_string()));
            }
            out.push(v.to_string());
        }
        Ok(Self { vars: out })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }
}

/// The node produced by one fusion step.
#[derive(Debug, Clone, PartialEq)]
pub struct FusedNode {
    pub name: String,
    pub domain: VarSet,
    pub head: VarSet,
    pub dropped: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FusionStep {
    pub var: String,
    /// Names of the nodes that contained `var`, in network order.
    pub combined: Vec<String>,
    /// `None` when no node contained `var`.
    pub result: Option<FusedNode>,
}

impl fmt::Display for FusionStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fuse {}: combine {}", self.var, fmt_set(&self.combined))?;
        match &self.result {
            None => f.write_str(" -> none"),
            Some(r) => {
                write!(f, " -> domain {} head {}", fmt_set(&r.domain), fmt_set(&r.head))?;
                if r.dropped {
                    f.write_str(" dropped")?;
                }
                Ok(())
            }
        }
    }
}

/// One line per fusion step.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FusionTrace {
    pub steps: Vec<FusionStep>,
}

impl FusionTrace {
    /// Re-runs the recorded eliminations on `network`, failing if any step
    /// comes out differently.
    pub fn replay(&self, network: &ValuationNetwork, options: FusionOptions) -> Result<ValuationNetwork> {
        let mut net = network.clone();
        for step in &self.steps {
            let (next, got) = fuse_step(&net, &step.var, options)?;
            if got != *step {
                return Err(Error::Domain(format!("replay diverged at `{step}`: got `{got}`")));
            }
            net = next;
        }
        Ok(net)
    }
}

impl fmt::Display for FusionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            writeln!(f, "{step}")?;
        }
        Ok(())
    }
}

/// `Fus_var`: the network after eliminating `var`.
pub fn fuse_var(network: &ValuationNetwork, var: &str) -> Result<ValuationNetwork> {
    fuse_step(network, var, FusionOptions::default()).map(|(n, _)| n)
}

pub fn fuse_step(network: &ValuationNetwork, var: &str, options: FusionOptions) -> Result<(ValuationNetwork, FusionStep)> {
    if network.variable(var).is_none() {
        return Err(Error::UnknownVariable(var.to_string()));
    }
    let variables = network.variables().iter().filter(|v| v.name() != var).cloned().collect();
    let (hit, rest): (Vec<&ValuationNode>, Vec<&ValuationNode>) = network.nodes().iter().partition(|n| n.contains(var));
    let combined: Vec<String> = hit.iter().map(|n| n.name().to_string()).collect();
    if hit.is_empty() {
        let net = ValuationNetwork::from_parts(variables, network.nodes().to_vec(), network.kind());
        return Ok((net, FusionStep { var: var.to_string(), combined, result: None }));
    }

    let mut domain = Domain::empty();
    for n in &hit {
        domain = domain.union(n.domain())?;
    }
    let domain = domain.without(var);
    let table = if hit.iter().all(|n| n.table().is_some()) {
        let mut acc: Option<Valuation> = None;
        for n in &hit {
            let t = n.table().expect("checked");
            acc = Some(match acc {
                None => t.clone(),
                Some(a) => a.combine(t)?,
            });
        }
        Some(acc.expect("non-empty").marginalize(&domain)?)
    } else {
        None
    };
    let name = combined.join("+");
    let mut head: VarSet = hit.iter().flat_map(|n| n.head().iter().cloned()).collect();
    head.remove(var);

    let first = network.nodes().iter().position(|n| n.contains(var)).expect("non-empty");
    let assemble = |fused: Option<ValuationNode>| -> Vec<ValuationNode> {
        let mut nodes: Vec<ValuationNode> = rest.iter().map(|n| (*n).clone()).collect();
        if let Some(f) = fused {
            let at = network.nodes()[..first].iter().filter(|n| !n.contains(var)).count();
            nodes.insert(at, f);
        }
        nodes
    };

    let mut conditional = hit.iter().all(|n| n.is_conditional());
    if conditional && !head.is_empty() {
        let candidate = ValuationNode::from_parts(name.clone(), domain.clone(), head.clone(), None);
        conditional = check_acyclic(&assemble(Some(candidate))).is_ok();
    }
    let dropped = conditional && head.is_empty() && options.drop_identities;
    if !conditional {
        head.clear();
    }
    let step = FusionStep {
        var: var.to_string(),
        combined,
        result: Some(FusedNode { name: name.clone(), domain: domain.name_set(), head: head.clone(), dropped }),
    };
    let fused = (!dropped).then(|| ValuationNode::from_parts(name, domain, head, table));
    let net = ValuationNetwork::from_parts(variables, assemble(fused), network.kind());
    Ok((net, step))
}

/// Sequential fusion along `order`.
pub fn eliminate(network: &ValuationNetwork, order: &EliminationOrder) -> Result<(ValuationNetwork, FusionTrace)> {
    eliminate_with(network, order, FusionOptions::default())
}

pub fn eliminate_with(
    network: &ValuationNetwork,
    order: &EliminationOrder,
    options: FusionOptions,
) -> Result<(ValuationNetwork, FusionTrace)> {
    let mut net = network.clone();
    let mut trace = FusionTrace::default();
    for var in order.vars() {
        let (next, step) = fuse_step(&net, var, options)?;
        trace.steps.push(step);
        net = next;
    }
    Ok((net, trace))
}

/// Greedy min-degree ordering of the variables outside `keep`: at each step
/// the variable contained in the fewest nodes of the partially fused network
/// goes next, ties broken by name.
pub fn pick_order(network: &ValuationNetwork, keep: &VarSet) -> Result<EliminationOrder> {
    if let Some(k) = keep.iter().find(|k| network.variable(k).is_none()) {
        return Err(Error::UnknownVariable(k.clone()));
    }
    let mut net = network.structure();
    let mut remaining: VarSet = network.variable_names().difference(keep).cloned().collect();
    let mut order = Vec::with_capacity(remaining.len());
    while let Some(next) = remaining.iter().min_by_key(|v| (net.degree(v), v.as_str())).cloned() {
        net = fuse_step(&net, &next, FusionOptions::default())?.0;
        remaining.remove(&next);
        order.push(next);
    }
    Ok(EliminationOrder { vars: order })
}

/// Marginal of the network's joint valuation for `target`, computed by
/// local computation; the result is laid out in `target`'s order.
pub fn marginal<S: AsRef<str>>(network: &ValuationNetwork, target: impl IntoIterator<Item = S>) -> Result<Valuation> {
    if let Some(n) = network.nodes().iter().find(|n| n.table().is_none()) {
        return Err(Error::StructureOnly(n.name().to_string()));
    }
    let kind = network.kind().ok_or_else(|| Error::StructureOnly("<empty network>".into()))?;
    let declared = Domain::new(network.variables().to_vec())?;
    let target = declared.select(target)?;
    let (fused, _) = eliminate(network, &pick_order(network, &target.name_set())?)?;
    let mut acc = Valuation::identity(kind, target.clone());
    for n in fused.nodes() {
        acc = acc.combine(n.table().expect("tables checked"))?;
    }
    acc.marginalize(&target)
}
