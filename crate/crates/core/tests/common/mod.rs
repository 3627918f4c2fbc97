//! Brute-force oracles that share nothing with the library's algorithms
//! beyond reading tables.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use valnet::converters::Dag;
use valnet::{Rank, Table, ValuationNetwork, VarSet};

pub fn model_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("models").join(name)
}

pub fn load(name: &str) -> valnet::model::ModelFile {
    valnet::model::parse_model(&std::fs::read_to_string(model_path(name)).unwrap()).unwrap()
}

pub fn set(names: &[&str]) -> VarSet {
    names.iter().map(|s| s.to_string()).collect()
}

/// Odometer over mixed-radix configurations, last position fastest.
pub fn configurations(sizes: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = sizes.iter().product();
    let mut out = Vec::with_capacity(total);
    let mut c = vec![0; sizes.len()];
    for _ in 0..total {
        out.push(c.clone());
        for k in (0..sizes.len()).rev() {
            c[k] += 1;
            if c[k] < sizes[k] {
                break;
            }
            c[k] = 0;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub enum Joint {
    Real(Vec<f64>),
    Rank(Vec<Rank>),
}

/// Entry of a node table at a full assignment (indexed by network variable order).
fn lookup(net: &ValuationNetwork, node: usize, full: &[usize]) -> (Option<f64>, Option<Rank>) {
    let n = &net.nodes()[node];
    let t = n.table().unwrap();
    let mut idx = 0;
    for v in t.domain().vars() {
        let pos = net.variables().iter().position(|w| w.name() == v.name()).unwrap();
        idx = idx * v.frame_size() + full[pos];
    }
    match t.table() {
        Table::Real(x) => (Some(x[idx]), None),
        Table::Rank(x) => (None, Some(x[idx])),
    }
}

/// The joint over all variables, by explicit enumeration.
pub fn brute_joint(net: &ValuationNetwork, possibility: bool) -> Joint {
    let sizes: Vec<usize> = net.variables().iter().map(|v| v.frame_size()).collect();
    let configs = configurations(&sizes);
    let is_rank = matches!(net.nodes()[0].table().unwrap().table(), Table::Rank(_));
    if is_rank {
        Joint::Rank(
            configs
                .iter()
                .map(|c| {
                    (0..net.nodes().len()).fold(Rank::Finite(0), |acc, i| match (acc, lookup(net, i, c).1.unwrap()) {
                        (Rank::Finite(a), Rank::Finite(b)) => Rank::Finite(a + b),
                        _ => Rank::Infinite,
                    })
                })
                .collect(),
        )
    } else {
        Joint::Real(
            configs
                .iter()
                .map(|c| {
                    (0..net.nodes().len()).fold(1.0, |acc: f64, i| {
                        let x = lookup(net, i, c).0.unwrap();
                        if possibility {
                            acc.min(x)
                        } else {
                            acc * x
                        }
                    })
                })
                .collect(),
        )
    }
}

/// Marginal of a joint (over `net`'s variables) onto `target`, in target order.
pub fn brute_marginal(net: &ValuationNetwork, joint: &Joint, target: &[&str], possibility: bool) -> Joint {
    let sizes: Vec<usize> = net.variables().iter().map(|v| v.frame_size()).collect();
    let pos: Vec<usize> = target
        .iter()
        .map(|t| net.variables().iter().position(|v| v.name() == *t).unwrap())
        .collect();
    let tsizes: Vec<usize> = pos.iter().map(|&p| sizes[p]).collect();
    let n: usize = tsizes.iter().product();
    let index = |c: &[usize]| pos.iter().zip(&tsizes).fold(0, |acc, (&p, &s)| acc * s + c[p]);
    let configs = configurations(&sizes);
    match joint {
        Joint::Real(j) => {
            let mut out = vec![0.0f64; n];
            for (c, x) in configs.iter().zip(j) {
                let i = index(c);
                out[i] = if possibility { out[i].max(*x) } else { out[i] + x };
            }
            Joint::Real(out)
        }
        Joint::Rank(j) => {
            let mut out = vec![Rank::Infinite; n];
            for (c, x) in configs.iter().zip(j) {
                let i = index(c);
                out[i] = out[i].min(*x);
            }
            Joint::Rank(out)
        }
    }
}

pub fn max_rel_error(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| if x == y { 0.0 } else { (x - y).abs() / x.abs().max(y.abs()) })
        .fold(0.0, f64::max)
}

/// d-separation straight from the path definition: enumerate every simple
/// path of the skeleton between `a` and `b` and check whether one is active.
pub fn path_dsep(g: &Dag, a: &VarSet, b: &VarSet, c: &VarSet) -> bool {
    let names: Vec<String> = g.vars().iter().map(|v| v.name().to_string()).collect();
    let arcs: BTreeSet<(String, String)> = g.arcs().clone();
    let descendants = |x: &str| -> VarSet {
        let mut out = VarSet::new();
        let mut stack = vec![x.to_string()];
        while let Some(y) = stack.pop() {
            for (p, ch) in &arcs {
                if *p == y && out.insert(ch.clone()) {
                    stack.push(ch.clone());
                }
            }
        }
        out
    };
    let adjacent = |x: &str, y: &str| arcs.contains(&(x.to_string(), y.to_string())) || arcs.contains(&(y.to_string(), x.to_string()));

    fn extend(
        path: &mut Vec<String>,
        names: &[String],
        adjacent: &dyn Fn(&str, &str) -> bool,
        visit: &mut dyn FnMut(&[String]) -> bool,
    ) -> bool {
        if visit(path) {
            return true;
        }
        let last = path.last().unwrap().clone();
        for n in names {
            if !path.contains(n) && adjacent(&last, n) {
                path.push(n.clone());
                if extend(path, names, adjacent, visit) {
                    return true;
                }
                path.pop();
            }
        }
        false
    }

    let mut active = |path: &[String]| -> bool {
        let end = path.last().unwrap();
        if path.len() < 2 || !b.contains(end) {
            return false;
        }
        (1..path.len() - 1).all(|i| {
            let (prev, mid, next) = (&path[i - 1], &path[i], &path[i + 1]);
            let collider = arcs.contains(&(prev.clone(), mid.clone())) && arcs.contains(&(next.clone(), mid.clone()));
            if collider {
                c.contains(mid) || descendants(mid).iter().any(|d| c.contains(d))
            } else {
                !c.contains(mid)
            }
        })
    };
    for start in a {
        let mut path = vec![start.clone()];
        if extend(&mut path, &names, &adjacent, &mut active) {
            return false;
        }
    }
    true
}

/// Pointwise probability CI on a joint over `net`'s variables.
pub fn brute_ci_real(net: &ValuationNetwork, joint: &[f64], r: &VarSet, s: &VarSet, v: &VarSet) -> bool {
    let names: Vec<&str> = net.variables().iter().map(|x| x.name()).collect();
    let pick = |set: &VarSet| -> Vec<&str> { names.iter().copied().filter(|n| set.contains(*n)).collect() };
    let all: VarSet = r.iter().chain(s).chain(v).cloned().collect();
    let rv: VarSet = r.union(v).cloned().collect();
    let sv: VarSet = s.union(v).cloned().collect();
    let j = Joint::Real(joint.to_vec());
    let m = |set: &VarSet| match brute_marginal(net, &j, &pick(set), false) {
        Joint::Real(x) => x,
        _ => unreachable!(),
    };
    let (p, prv, psv, pv) = (m(&all), m(&rv), m(&sv), m(v));
    let sizes: Vec<usize> = net.variables().iter().map(|x| x.frame_size()).collect();
    let idx = |set: &VarSet, c: &[usize]| {
        names
            .iter()
            .enumerate()
            .filter(|(_, n)| set.contains(**n))
            .fold(0, |acc, (i, _)| acc * sizes[i] + c[i])
    };
    configurations(&sizes).iter().all(|c| {
        let lhs = p[idx(&all, c)] * pv[idx(v, c)];
        let rhs = prv[idx(&rv, c)] * psv[idx(&sv, c)];
        lhs == rhs || (lhs - rhs).abs() <= 1e-9 * lhs.abs().max(rhs.abs())
    })
}
