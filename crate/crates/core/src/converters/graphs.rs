use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::algebra::{validate_name, Domain, VarSet, Variable};
use crate::error::{Error, Result};

fn check_vars(vars: &[Variable]) -> Result<()> {
    Domain::new(vars.to_vec()).map(|_| ())
}

fn known(vars: &[Variable], name: &str) -> Result<()> {
    if vars.iter().any(|v| v.name() == name) {
        Ok(())
    } else {
        Err(Error::UnknownVariable(name.to_string()))
    }
}

fn ordered_pair(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

/// Kahn's algorithm over `vertices`; `Err` names the vertices left on a cycle.
pub(crate) fn topological_order<'a>(
    vertices: impl IntoIterator<Item = &'a str>,
    arcs: impl IntoIterator<Item = (&'a str, &'a str)>,
) -> Result<Vec<&'a str>, Vec<&'a str>> {
    let mut indegree: BTreeMap<&str, usize> = vertices.into_iter().map(|v| (v, 0)).collect();
    let mut succ: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (a, b) in arcs {
        succ.entry(a).or_default().push(b);
        *indegree.entry(b).or_default() += 1;
        indegree.entry(a).or_default();
    }
    let mut queue: VecDeque<&str> = indegree.iter().filter(|(_, &d)| d == 0).map(|(&v, _)| v).collect();
    let mut order = Vec::with_capacity(indegree.len());
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &w in succ.get(v).into_iter().flatten() {
            let d = indegree.get_mut(w).expect("registered");
            *d -= 1;
            if *d == 0 {
                queue.push_back(w);
            }
        }
    }
    if order.len() < indegree.len() {
        return Err(indegree.into_iter().filter(|(_, d)| *d > 0).map(|(v, _)| v).collect());
    }
    Ok(order)
}

/// Simple undirected graph on variables. Edges are stored with endpoints in
/// name order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    vars: Vec<Variable>,
    edges: BTreeSet<(String, String)>,
}

impl UndirectedGraph {
    pub fn new<S: AsRef<str>>(vars: Vec<Variable>, edges: impl IntoIterator<Item = (S, S)>) -> Result<Self> {
        check_vars(&vars)?;
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            known(&vars, a)?;
            known(&vars, b)?;
            if a == b {
                return Err(Error::Graph(format!("self-loop on {a}")));
            }
            set.insert(ordered_pair(a, b));
        }
        Ok(Self { vars, edges: set })
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn edges(&self) -> &BTreeSet<(String, String)> {
        &self.edges
    }

    pub fn adjacent(&self, a: &str, b: &str) -> bool {
        self.edges.contains(&ordered_pair(a, b))
    }

    pub fn neighbors(&self, x: &str) -> VarSet {
        self.edges
            .iter()
            .filter_map(|(a, b)| {
                if a == x {
                    Some(b.clone())
                } else if b == x {
                    Some(a.clone())
                } else {
                    None
                }
            })
            .collect()
    }

    /// Maximal cliques (Bron–Kerbosch with pivoting). Each clique lists its
    /// variables in declaration order; cliques are sorted by those lists of
    /// declaration indices.
    pub fn maximal_cliques(&self) -> Vec<Vec<String>> {
        let n = self.vars.len();
        let index: BTreeMap<&str, usize> = self.vars.iter().enumerate().map(|(i, v)| (v.name(), i)).collect();
        let mut adj = vec![BTreeSet::new(); n];
        for (a, b) in &self.edges {
            let (i, j) = (index[a.as_str()], index[b.as_str()]);
            adj[i].insert(j);
            adj[j].insert(i);
        }
        let mut found = Vec::new();
        bron_kerbosch(&adj, Vec::new(), (0..n).collect(), BTreeSet::new(), &mut found);
        for c in &mut found {
            c.sort_unstable();
        }
        found.sort();
        found
            .into_iter()
            .map(|c| c.into_iter().map(|i| self.vars[i].name().to_string()).collect())
            .collect()
    }

    /// Vertex separation: every path from `a` to `b` meets `c`.
    pub fn separated(&self, a: &VarSet, b: &VarSet, c: &VarSet) -> Result<bool> {
        for x in a.iter().chain(b).chain(c) {
            known(&self.vars, x)?;
        }
        crate::network::check_disjoint(a, b, c)?;
        Ok(!reaches(a, b, c, |x| self.neighbors(x)))
    }
}

fn bron_kerbosch(
    adj: &[BTreeSet<usize>],
    clique: Vec<usize>,
    mut candidates: BTreeSet<usize>,
    mut excluded: BTreeSet<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if candidates.is_empty() {
        if excluded.is_empty() {
            out.push(clique);
        }
        return;
    }
    let pivot = *candidates
        .union(&excluded)
        .max_by_key(|&&u| candidates.intersection(&adj[u]).count())
        .expect("non-empty");
    let branch: Vec<usize> = candidates.difference(&adj[pivot]).copied().collect();
    for v in branch {
        let mut next = clique.clone();
        next.push(v);
        bron_kerbosch(
            adj,
            next,
            candidates.intersection(&adj[v]).copied().collect(),
            excluded.intersection(&adj[v]).copied().collect(),
            out,
        );
        candidates.remove(&v);
        excluded.insert(v);
    }
}

/// Breadth-first search from `from` that never enters `blocked`; true if it
/// reaches any vertex of `to`.
pub(crate) fn reaches(from: &VarSet, to: &VarSet, blocked: &VarSet, neighbors: impl Fn(&str) -> VarSet) -> bool {
    let mut seen: VarSet = from.iter().filter(|x| !blocked.contains(*x)).cloned().collect();
    let mut queue: VecDeque<String> = seen.iter().cloned().collect();
    while let Some(x) = queue.pop_front() {
        if to.contains(&x) {
            return true;
        }
        for y in neighbors(&x) {
            if !blocked.contains(&y) && seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    false
}

/// Directed acyclic graph; arcs are `(parent, child)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    vars: Vec<Variable>,
    arcs: BTreeSet<(String, String)>,
}

impl Dag {
    pub fn new<S: AsRef<str>>(vars: Vec<Variable>, arcs: impl IntoIterator<Item = (S, S)>) -> Result<Self> {
        check_vars(&vars)?;
        let mut set = BTreeSet::new();
        for (a, b) in arcs {
            let (a, b) = (a.as_ref(), b.as_ref());
            known(&vars, a)?;
            known(&vars, b)?;
            if a == b {
                return Err(Error::Graph(format!("self-loop on {a}")));
            }
            set.insert((a.to_string(), b.to_string()));
        }
        topological_order(vars.iter().map(Variable::name), set.iter().map(|(a, b)| (a.as_str(), b.as_str())))
            .map_err(|stuck| Error::Graph(format!("cycle through {}", stuck.join(","))))?;
        Ok(Self { vars, arcs: set })
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn arcs(&self) -> &BTreeSet<(String, String)> {
        &self.arcs
    }

    pub fn parents(&self, x: &str) -> VarSet {
        self.arcs.iter().filter(|(_, c)| c == x).map(|(p, _)| p.clone()).collect()
    }

    pub fn children(&self, x: &str) -> VarSet {
        self.arcs.iter().filter(|(p, _)| p == x).map(|(_, c)| c.clone()).collect()
    }

    /// `set` together with all of its ancestors.
    pub fn ancestral_set(&self, set: &VarSet) -> VarSet {
        let mut out = set.clone();
        let mut stack: Vec<String> = set.iter().cloned().collect();
        while let Some(x) = stack.pop() {
            for p in self.parents(&x) {
                if out.insert(p.clone()) {
                    stack.push(p);
                }
            }
        }
        out
    }

    pub(crate) fn check_query(&self, a: &VarSet, b: &VarSet, c: &VarSet) -> Result<()> {
        for x in a.iter().chain(b).chain(c) {
            known(&self.vars, x)?;
        }
        crate::network::check_disjoint(a, b, c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Balloon {
    pub name: String,
    pub members: Vec<String>,
    pub parents: Vec<String>,
}

/// Directed balloon graph: a partition of the variables into balloons, each
/// with a parent set outside itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalloonGraph {
    vars: Vec<Variable>,
    balloons: Vec<Balloon>,
}

impl BalloonGraph {
    pub fn new(vars: Vec<Variable>, balloons: Vec<Balloon>) -> Result<Self> {
        check_vars(&vars)?;
        let mut owner: BTreeMap<&str, &str> = BTreeMap::new();
        let mut names = VarSet::new();
        for b in &balloons {
            validate_name(&b.name)?;
            if !names.insert(b.name.clone()) {
                return Err(Error::Graph(format!("duplicate balloon {}", b.name)));
            }
            if b.members.is_empty() {
                return Err(Error::Graph(format!("balloon {} is empty", b.name)));
            }
            for m in &b.members {
                known(&vars, m)?;
                if let Some(other) = owner.insert(m, &b.name) {
                    return Err(Error::Graph(format!("{m} is in balloons {other} and {}", b.name)));
                }
            }
        }
        if let Some(v) = vars.iter().find(|v| !owner.contains_key(v.name())) {
            return Err(Error::Graph(format!("{} is in no balloon", v.name())));
        }
        let mut arcs = Vec::new();
        for b in &balloons {
            for p in &b.parents {
                known(&vars, p)?;
                let from = owner[p.as_str()];
                if from == b.name {
                    return Err(Error::Graph(format!("{p} is both member and parent of {}", b.name)));
                }
                arcs.push((from, b.name.as_str()));
            }
        }
        topological_order(balloons.iter().map(|b| b.name.as_str()), arcs)
            .map_err(|stuck| Error::Graph(format!("balloon cycle through {}", stuck.join(","))))?;
        Ok(Self { vars, balloons })
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn balloons(&self) -> &[Balloon] {
        &self.balloons
    }
}

/// Recursive causal graph: an undirected graph on the exogenous variables
/// and directed arcs into endogenous ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecursiveCausalGraph {
    vars: Vec<Variable>,
    exogenous: VarSet,
    edges: BTreeSet<(String, String)>,
    arcs: BTreeSet<(String, String)>,
}

impl RecursiveCausalGraph {
    pub fn new<S: AsRef<str>>(
        vars: Vec<Variable>,
        exogenous: VarSet,
        edges: impl IntoIterator<Item = (S, S)>,
        arcs: impl IntoIterator<Item = (S, S)>,
    ) -> Result<Self> {
        check_vars(&vars)?;
        for x in &exogenous {
            known(&vars, x)?;
        }
        let mut edge_set = BTreeSet::new();
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            known(&vars, a)?;
            known(&vars, b)?;
            if a == b {
                return Err(Error::Graph(format!("self-loop on {a}")));
            }
            if !exogenous.contains(a) || !exogenous.contains(b) {
                return Err(Error::Graph(format!("undirected edge {a} - {b} touches an endogenous variable")));
            }
            edge_set.insert(ordered_pair(a, b));
        }
        let mut arc_set = BTreeSet::new();
        for (a, b) in arcs {
            let (a, b) = (a.as_ref(), b.as_ref());
            known(&vars, a)?;
            known(&vars, b)?;
            if exogenous.contains(b) {
                return Err(Error::Graph(format!("arc {a} -> {b} points to an exogenous variable")));
            }
            if a == b {
                return Err(Error::Graph(format!("self-loop on {a}")));
            }
            arc_set.insert((a.to_string(), b.to_string()));
        }
        topological_order(vars.iter().map(Variable::name), arc_set.iter().map(|(a, b)| (a.as_str(), b.as_str())))
            .map_err(|stuck| Error::Graph(format!("cycle through {}", stuck.join(","))))?;
        Ok(Self { vars, exogenous, edges: edge_set, arcs: arc_set })
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn exogenous(&self) -> &VarSet {
        &self.exogenous
    }

    pub fn edges(&self) -> &BTreeSet<(String, String)> {
        &self.edges
    }

    pub fn arcs(&self) -> &BTreeSet<(String, String)> {
        &self.arcs
    }

    /// Endogenous variables in declaration order.
    pub fn endogenous(&self) -> Vec<&str> {
        self.vars.iter().map(Variable::name).filter(|v| !self.exogenous.contains(*v)).collect()
    }

    pub fn parents(&self, x: &str) -> VarSet {
        self.arcs.iter().filter(|(_, c)| c == x).map(|(p, _)| p.clone()).collect()
    }

    /// The undirected part restricted to exogenous variables.
    pub fn exogenous_graph(&self) -> UndirectedGraph {
        let vars = self.vars.iter().filter(|v| self.exogenous.contains(v.name())).cloned().collect();
        UndirectedGraph::new(vars, self.edges.iter().map(|(a, b)| (a.as_str(), b.as_str()))).expect("validated")
    }
}
