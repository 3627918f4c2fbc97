//! Seeded random models. The seed fully determines the output.
//!
//! Probability tables are strictly positive: entries are drawn from
//! `[0.1, 1]` and conditionals are normalized per tail configuration.
//! Kappa conditionals are shifted so each tail configuration has minimum
//! rank 0; possibility conditionals are scaled so each has maximum 1.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraKind, Domain, Rank, Table, Valuation, VarSet, Variable};
use crate::converters::{self, Balloon, BalloonGraph, Dag, RecursiveCausalGraph, UndirectedGraph};
use crate::error::Result;
use crate::model::{Model, ModelFile, ModelKind};
use crate::network::{ValuationNetwork, ValuationNode};

pub type ModelRng = ChaCha8Rng;

pub fn rng(seed: u64) -> ModelRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableOptions {
    pub kind: AlgebraKind,
    /// Allow infinite kappa ranks (never an entire tail row).
    pub infinite_ranks: bool,
}

impl TableOptions {
    pub fn new(kind: AlgebraKind) -> Self {
        Self { kind, infinite_ranks: true }
    }
}

/// Variables `X1..Xn` with frame sizes drawn from `2..=max_frame`.
pub fn variables(rng: &mut ModelRng, n: usize, max_frame: usize) -> Vec<Variable> {
    (1..=n)
        .map(|i| Variable::new(format!("X{i}"), rng.gen_range(2..=max_frame.max(2))).expect("valid"))
        .collect()
}

fn random_subset<'a>(rng: &mut ModelRng, pool: &'a [String], max: usize) -> Vec<&'a String> {
    let k = rng.gen_range(0..=max.min(pool.len()));
    let mut picked: Vec<&String> = pool.choose_multiple(rng, k).collect();
    picked.sort();
    picked
}

pub fn random_ug(rng: &mut ModelRng, vars: Vec<Variable>, edge_prob: f64) -> UndirectedGraph {
    let mut edges = Vec::new();
    for i in 0..vars.len() {
        for j in i + 1..vars.len() {
            if rng.gen_bool(edge_prob) {
                edges.push((vars[i].name().to_string(), vars[j].name().to_string()));
            }
        }
    }
    UndirectedGraph::new(vars, edges).expect("valid by construction")
}

/// Arcs only go from earlier to later variables.
pub fn random_dag(rng: &mut ModelRng, vars: Vec<Variable>, arc_prob: f64) -> Dag {
    let mut arcs = Vec::new();
    for j in 0..vars.len() {
        for i in 0..j {
            if rng.gen_bool(arc_prob) {
                arcs.push((vars[i].name().to_string(), vars[j].name().to_string()));
            }
        }
    }
    Dag::new(vars, arcs).expect("acyclic by construction")
}

/// Consecutive runs of one to three variables, each with parents drawn
/// from earlier balloons.
pub fn random_dbg(rng: &mut ModelRng, vars: Vec<Variable>) -> BalloonGraph {
    let names: Vec<String> = vars.iter().map(|v| v.name().to_string()).collect();
    let mut balloons = Vec::new();
    let mut start = 0;
    while start < names.len() {
        let len = rng.gen_range(1..=3).min(names.len() - start);
        let parents = random_subset(rng, &names[..start], 2).into_iter().cloned().collect();
        balloons.push(Balloon {
            name: format!("b{}", balloons.len() + 1),
            members: names[start..start + len].to_vec(),
            parents,
        });
        start += len;
    }
    BalloonGraph::new(vars, balloons).expect("valid by construction")
}

/// The first `1..=n` variables are exogenous; each endogenous variable gets
/// up to three parents among earlier variables.
pub fn random_rcg(rng: &mut ModelRng, vars: Vec<Variable>) -> RecursiveCausalGraph {
    let names: Vec<String> = vars.iter().map(|v| v.name().to_string()).collect();
    let k = rng.gen_range(1..=names.len().max(1)).min(names.len());
    let mut edges = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            if rng.gen_bool(0.5) {
                edges.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    let mut arcs = Vec::new();
    for j in k..names.len() {
        for p in random_subset(rng, &names[..j], 3) {
            arcs.push((p.clone(), names[j].clone()));
        }
    }
    let exo = names[..k].iter().cloned().collect();
    RecursiveCausalGraph::new(vars, exo, edges, arcs).expect("valid by construction")
}

/// A structure-only network shaped like a recursive causal model: plain
/// nodes covering a prefix of exogenous variables (never more plain nodes
/// than exogenous variables), then conditionals for runs of one or two
/// later variables with tails drawn from earlier ones. At most `n` nodes.
pub fn random_vn_structure(rng: &mut ModelRng, vars: Vec<Variable>) -> ValuationNetwork {
    let names: Vec<String> = vars.iter().map(|v| v.name().to_string()).collect();
    let n = names.len();
    let domain_of = |members: &[&String]| -> Domain {
        Domain::new(vars.iter().filter(|v| members.iter().any(|m| *m == v.name())).cloned().collect()).expect("distinct")
    };
    let k = if n == 0 { 0 } else { rng.gen_range(1..=n.min(3)) };
    let plain_count = if k == 0 { 0 } else { rng.gen_range(1..=k) };
    let mut plain: Vec<Vec<&String>> = vec![Vec::new(); plain_count];
    for (i, x) in names[..k].iter().enumerate() {
        // every exogenous variable lands in at least one plain node
        let home = if i < plain_count { i } else { rng.gen_range(0..plain_count) };
        plain[home].push(x);
        for (j, group) in plain.iter_mut().enumerate() {
            if j != home && rng.gen_bool(0.3) {
                group.push(x);
            }
        }
    }
    let mut nodes = Vec::new();
    for (i, members) in plain.iter().enumerate() {
        nodes.push(ValuationNode::plain(format!("p{}", i + 1), domain_of(members)).expect("valid"));
    }
    let mut start = k;
    while start < n {
        let len = rng.gen_range(1..=2).min(n - start);
        let head: Vec<&String> = names[start..start + len].iter().collect();
        let tail = random_subset(rng, &names[..start], 2);
        let all: Vec<&String> = head.iter().copied().chain(tail).collect();
        let head_set: VarSet = head.into_iter().cloned().collect();
        let name = format!("k{}", nodes.len() + 1);
        nodes.push(ValuationNode::conditional(name, domain_of(&all), head_set).expect("valid"));
        start += len;
    }
    ValuationNetwork::build(vars, nodes).expect("valid by construction")
}

fn draw_real(rng: &mut ModelRng, kind: AlgebraKind) -> f64 {
    match kind {
        AlgebraKind::Possibility => rng.gen_range(0.0..=1.0),
        _ => rng.gen_range(0.1..=1.0),
    }
}

fn draw_rank(rng: &mut ModelRng, infinite: bool) -> Rank {
    if infinite && rng.gen_bool(0.1) {
        Rank::Infinite
    } else {
        Rank::Finite(rng.gen_range(0..=4))
    }
}

/// A random table over `domain`, a kernel over `head` when `head` is
/// non-empty.
pub fn random_valuation(rng: &mut ModelRng, domain: &Domain, head: &VarSet, options: TableOptions) -> Valuation {
    let size = domain.size();
    let tail = domain.restrict(domain.names().filter(|n| !head.contains(*n)).collect::<Vec<_>>());
    let rows = domain.projection(&tail);
    let table = match options.kind {
        AlgebraKind::Kappa => {
            let mut ranks: Vec<Rank> = (0..size).map(|_| draw_rank(rng, options.infinite_ranks)).collect();
            if !head.is_empty() {
                for row in 0..tail.size() {
                    let members: Vec<usize> = (0..size).filter(|&i| rows[i] == row).collect();
                    let min = members.iter().map(|&i| ranks[i]).min().unwrap_or(Rank::ZERO);
                    match min {
                        Rank::Finite(m) => {
                            for &i in &members {
                                if let Rank::Finite(r) = ranks[i] {
                                    ranks[i] = Rank::Finite(r - m);
                                }
                            }
                        }
                        Rank::Infinite => ranks[members[rng.gen_range(0..members.len())]] = Rank::ZERO,
                    }
                }
            }
            Table::Rank(ranks)
        }
        kind => {
            let mut values: Vec<f64> = (0..size).map(|_| draw_real(rng, kind)).collect();
            if !head.is_empty() {
                let mut agg = vec![0.0f64; tail.size()];
                for (i, &v) in values.iter().enumerate() {
                    agg[rows[i]] = match kind {
                        AlgebraKind::Possibility => agg[rows[i]].max(v),
                        _ => agg[rows[i]] + v,
                    };
                }
                for (i, v) in values.iter_mut().enumerate() {
                    let a = agg[rows[i]];
                    *v = if a > 0.0 { *v / a } else { 1.0 };
                }
            }
            Table::Real(values)
        }
    };
    Valuation::new(options.kind, domain.clone(), table).expect("valid by construction")
}

pub fn attach_tables(rng: &mut ModelRng, network: &ValuationNetwork, options: TableOptions) -> Result<ValuationNetwork> {
    let nodes = network
        .nodes()
        .iter()
        .map(|n| {
            let v = random_valuation(rng, n.domain(), n.head(), options);
            n.without_table().with_table(v)
        })
        .collect::<Result<Vec<_>>>()?;
    ValuationNetwork::build(network.variables().to_vec(), nodes)
}

/// A random normalized joint valuation over `vars`. Kappa joints are
/// finite unless `options.infinite_ranks`.
pub fn random_joint(rng: &mut ModelRng, vars: Vec<Variable>, options: TableOptions) -> Valuation {
    let domain = Domain::new(vars).expect("distinct");
    let v = random_valuation(rng, &domain, &VarSet::new(), options);
    v.normalize().expect("non-zero")
}

/// A random model file of the given shape with `n` variables.
pub fn random_model(kind: ModelKind, n: usize, seed: u64, algebra: AlgebraKind, tables: bool) -> Result<ModelFile> {
    random_model_with(&mut rng(seed), kind, n, 2, algebra, tables)
}

pub fn random_model_with(
    rng: &mut ModelRng,
    kind: ModelKind,
    n: usize,
    max_frame: usize,
    algebra: AlgebraKind,
    tables: bool,
) -> Result<ModelFile> {
    let vars = variables(rng, n, max_frame);
    let model = match kind {
        ModelKind::Vn => Model::Vn(random_vn_structure(rng, vars)),
        ModelKind::Ug => Model::Ug(random_ug(rng, vars, 0.4)),
        ModelKind::Dag => Model::Dag(random_dag(rng, vars, 0.4)),
        ModelKind::Dbg => Model::Dbg(random_dbg(rng, vars)),
        ModelKind::Rcg => Model::Rcg(random_rcg(rng, vars)),
    };
    let mut file = ModelFile { kind: algebra, model, tables: Default::default(), source: String::new() };
    if tables {
        let net = attach_tables(rng, &file.model.structure()?, TableOptions::new(algebra))?;
        file.tables = ModelFile::from_network(&net).tables;
    }
    Ok(file)
}

/// The network of a random model, converted through its graph shape.
pub fn random_network(rng: &mut ModelRng, kind: ModelKind, n: usize, options: TableOptions) -> Result<ValuationNetwork> {
    let vars = variables(rng, n, 2);
    let structure = match kind {
        ModelKind::Vn => random_vn_structure(rng, vars),
        ModelKind::Ug => converters::from_ug(&random_ug(rng, vars, 0.4))?,
        ModelKind::Dag => converters::from_dag(&random_dag(rng, vars, 0.4))?,
        ModelKind::Dbg => converters::from_dbg(&random_dbg(rng, vars))?,
        ModelKind::Rcg => converters::from_rcg(&random_rcg(rng, vars))?,
    };
    attach_tables(rng, &structure, options)
}
