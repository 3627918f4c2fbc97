//! Valuation networks from graphical models, and two DAG separation oracles.

mod graphs;

use std::collections::BTreeSet;

pub use graphs::{Balloon, BalloonGraph, Dag, RecursiveCausalGraph, UndirectedGraph};
pub(crate) use graphs::reaches;

use crate::algebra::{Domain, VarSet, Variable};
use crate::error::Result;
use crate::network::{ValuationNetwork, ValuationNode};

/// Domain over `members` in the order of `vars`.
fn domain_in_order<'a>(vars: &[Variable], members: impl IntoIterator<Item = &'a str>) -> Domain {
    let members: BTreeSet<&str> = members.into_iter().collect();
    Domain::new(vars.iter().filter(|v| members.contains(v.name())).cloned().collect()).expect("distinct variables")
}

fn fresh_name(base: String, taken: &mut VarSet) -> String {
    let mut name = base;
    while taken.contains(&name) {
        name.push('_');
    }
    taken.insert(name.clone());
    name
}

fn clique_nodes(vars: &[Variable], graph: &UndirectedGraph, taken: &mut VarSet) -> Result<Vec<ValuationNode>> {
    graph
        .maximal_cliques()
        .into_iter()
        .enumerate()
        .map(|(i, clique)| {
            let name = fresh_name(format!("c{}", i + 1), taken);
            ValuationNode::plain(name, domain_in_order(vars, clique.iter().map(String::as_str)))
        })
        .collect()
}

fn conditional_node(vars: &[Variable], name: &str, head: &VarSet, tail: &VarSet) -> Result<ValuationNode> {
    let domain = domain_in_order(vars, head.iter().chain(tail).map(String::as_str));
    ValuationNode::conditional(name, domain, head.clone())
}

/// One plain node per maximal clique, named `c1`, `c2`, ….
pub fn from_ug(g: &UndirectedGraph) -> Result<ValuationNetwork> {
    let nodes = clique_nodes(g.vars(), g, &mut VarSet::new())?;
    ValuationNetwork::build(g.vars().to_vec(), nodes)
}

/// One conditional per variable given its parents, named after the variable.
pub fn from_dag(g: &Dag) -> Result<ValuationNetwork> {
    let nodes = g
        .vars()
        .iter()
        .map(|v| {
            let head = VarSet::from([v.name().to_string()]);
            conditional_node(g.vars(), v.name(), &head, &g.parents(v.name()))
        })
        .collect::<Result<_>>()?;
    ValuationNetwork::build(g.vars().to_vec(), nodes)
}

/// One conditional per balloon given its parents, named after the balloon.
pub fn from_dbg(g: &BalloonGraph) -> Result<ValuationNetwork> {
    let nodes = g
        .balloons()
        .iter()
        .map(|b| {
            let head: VarSet = b.members.iter().cloned().collect();
            let tail: VarSet = b.parents.iter().cloned().collect();
            conditional_node(g.vars(), &b.name, &head, &tail)
        })
        .collect::<Result<_>>()?;
    ValuationNetwork::build(g.vars().to_vec(), nodes)
}

/// Plain clique nodes over the exogenous part and one conditional per
/// endogenous variable. A lone exogenous variable becomes a conditional with
/// empty tail, so DAG-shaped inputs agree with [`from_dag`].
pub fn from_rcg(g: &RecursiveCausalGraph) -> Result<ValuationNetwork> {
    let vars = g.vars();
    let mut taken: VarSet = g.endogenous().into_iter().map(str::to_string).collect();
    let mut nodes = if g.exogenous().len() == 1 {
        let x = g.exogenous().iter().next().expect("one");
        taken.insert(x.clone());
        vec![conditional_node(vars, x, &VarSet::from([x.clone()]), &VarSet::new())?]
    } else {
        clique_nodes(vars, &g.exogenous_graph(), &mut taken)?
    };
    for x in g.endogenous() {
        nodes.push(conditional_node(vars, x, &VarSet::from([x.to_string()]), &g.parents(x))?);
    }
    // conditional nodes follow declaration order of their heads
    let order = |n: &ValuationNode| {
        n.head()
            .iter()
            .filter_map(|h| vars.iter().position(|v| v.name() == h))
            .min()
            .unwrap_or(usize::MAX)
    };
    if g.exogenous().len() == 1 {
        nodes.sort_by_key(order);
    }
    ValuationNetwork::build(vars.to_vec(), nodes)
}

/// d-separation of `a` and `b` given `c`, by reachability over
/// (vertex, direction) states.
pub fn d_separated(g: &Dag, a: &VarSet, b: &VarSet, c: &VarSet) -> Result<bool> {
    g.check_query(a, b, c)?;
    let evidence_ancestors = g.ancestral_set(c);
    #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
    enum Dir {
        FromChild,
        FromParent,
    }
    let mut stack: Vec<(String, Dir)> = a.iter().map(|x| (x.clone(), Dir::FromChild)).collect();
    let mut visited = BTreeSet::new();
    while let Some((y, dir)) = stack.pop() {
        if !visited.insert((y.clone(), dir)) {
            continue;
        }
        let observed = c.contains(&y);
        if !observed && b.contains(&y) {
            return Ok(false);
        }
        match dir {
            Dir::FromChild if !observed => {
                stack.extend(g.parents(&y).into_iter().map(|p| (p, Dir::FromChild)));
                stack.extend(g.children(&y).into_iter().map(|ch| (ch, Dir::FromParent)));
            }
            Dir::FromChild => {}
            Dir::FromParent => {
                if !observed {
                    stack.extend(g.children(&y).into_iter().map(|ch| (ch, Dir::FromParent)));
                }
                if evidence_ancestors.contains(&y) {
                    stack.extend(g.parents(&y).into_iter().map(|p| (p, Dir::FromChild)));
                }
            }
        }
    }
    Ok(true)
}

/// Separation in the moral graph of the ancestral set of `a ∪ b ∪ c`.
pub fn moral_separated(g: &Dag, a: &VarSet, b: &VarSet, c: &VarSet) -> Result<bool> {
    g.check_query(a, b, c)?;
    let all: VarSet = a.iter().chain(b).chain(c).cloned().collect();
    let keep = g.ancestral_set(&all);
    let mut edges: BTreeSet<(String, String)> = BTreeSet::new();
    let mut link = |x: &String, y: &String| {
        edges.insert((x.clone(), y.clone()));
        edges.insert((y.clone(), x.clone()));
    };
    for x in &keep {
        let parents: Vec<String> = g.parents(x).into_iter().collect();
        for (i, p) in parents.iter().enumerate() {
            link(p, x);
            for q in &parents[i + 1..] {
                link(p, q);
            }
        }
    }
    let neighbors =
        |x: &str| -> VarSet { edges.iter().filter(|(p, _)| p == x).map(|(_, q)| q.clone()).collect() };
    Ok(!reaches(a, b, c, neighbors))
}
