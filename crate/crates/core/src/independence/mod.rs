//! Conditional independence.
//!
//! [`ci_structural`] fuses every variable outside the query out of a
//! network and then tests cut-set separation. It is sound but incomplete,
//! hence the `not-derivable` verdict. [`ci_numeric`] checks the
//! factorization pointwise on an explicit joint valuation and serves as the
//! ground-truth oracle.

mod graphoid;
mod factorization;

use std::collections::HashMap;
use std::fmt;

use crate::algebra::{close, fmt_set, AlgebraKind, Rank, Table, VarSet, Valuation, API_TOLERANCE};
use crate::error::{Error, Result};
use crate::fusion::{eliminate, pick_order};
use crate::network::{check_disjoint, ValuationNetwork};

pub use graphoid::{check_semigraphoid, Axiom, SemigraphoidReport, Triple, Violation};
pub use factorization::{verify_factorization, StatementCheck, FactorizationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Independent,
    /// Structural criteria could not establish independence. Not a claim of dependence.
    NotDerivable,
    /// The numeric test found the factorization fails.
    NotIndependent,
}

impl Verdict {
    pub fn is_independent(self) -> bool {
        self == Verdict::Independent
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Independent => "independent",
            Verdict::NotDerivable => "not-derivable",
            Verdict::NotIndependent => "not-independent",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Criterion {
    VnSeparation,
    DSeparation,
    Moralization,
    Numeric,
}

impl Criterion {
    pub fn as_str(self) -> &'static str {
        match self {
            Criterion::VnSeparation => "vn-separation",
            Criterion::DSeparation => "d-separation",
            Criterion::Moralization => "moralization",
            Criterion::Numeric => "numeric",
        }
    }

    /// Structural criteria answer `not-derivable` rather than `not-independent`.
    pub fn verdict(self, holds: bool) -> Verdict {
        match (holds, self) {
            (true, _) => Verdict::Independent,
            (false, Criterion::Numeric) => Verdict::NotIndependent,
            (false, _) => Verdict::NotDerivable,
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A verdict on `r ⊥ s | v` together with the criterion that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CiStatement {
    pub r: VarSet,
    pub s: VarSet,
    pub v: VarSet,
    pub verdict: Verdict,
    pub criterion: Criterion,
}

impl fmt::Display for CiStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "r={} s={} v={} verdict={} criterion={}",
            fmt_set(&self.r),
            fmt_set(&self.s),
            fmt_set(&self.v),
            self.verdict,
            self.criterion
        )
    }
}

/// `σ(b|a) = σ↓(a∪b) ⊖ σ↓a`.
#[derive(Debug, Clone, PartialEq)]
pub struct Conditional {
    pub valuation: Valuation,
    pub head: VarSet,
    pub tail: VarSet,
    /// Domain of the valuation the conditional was derived from.
    pub source: String,
}

impl Conditional {
    /// Largest deviation from normalization over the head, ignoring tail
    /// configurations where the source marginal vanishes.
    pub fn normalization_deviation(&self) -> Result<f64> {
        self.valuation.kernel_deviation(&self.head, true)
    }
}

fn check_subsets(sigma: &Valuation, sets: &[&VarSet]) -> Result<()> {
    for set in sets {
        if let Some(x) = set.iter().find(|x| !sigma.domain().contains(x)) {
            return Err(Error::UnknownVariable(x.clone()));
        }
    }
    Ok(())
}

fn check_removable(kind: AlgebraKind, op: &'static str) -> Result<()> {
    if kind.supports_removal() {
        Ok(())
    } else {
        Err(Error::Unsupported { op, kind })
    }
}

pub fn conditional_of(sigma: &Valuation, head: &VarSet, tail: &VarSet) -> Result<Conditional> {
    check_removable(sigma.kind(), "conditioning")?;
    check_subsets(sigma, &[head, tail])?;
    check_disjoint(head, tail, &VarSet::new())?;
    let both: VarSet = head.union(tail).cloned().collect();
    let joint = sigma.marginalize_to(&both)?;
    let marginal = sigma.marginalize_to(tail)?;
    Ok(Conditional {
        valuation: joint.remove(&marginal)?,
        head: head.clone(),
        tail: tail.clone(),
        source: sigma.domain().to_string(),
    })
}

fn require_nonempty(r: &VarSet, s: &VarSet) -> Result<()> {
    if r.is_empty() || s.is_empty() {
        return Err(Error::Domain("r and s must be non-empty".into()));
    }
    Ok(())
}

/// Fuse out everything but `r ∪ s ∪ v` (min-degree order), then test
/// whether `v` separates `r` from `s`.
pub fn ci_structural(network: &ValuationNetwork, r: &VarSet, s: &VarSet, v: &VarSet) -> Result<CiStatement> {
    StructuralOracle::new(network).statement(r, s, v)
}

/// Structural CI queries against one network, caching the fused network
/// per kept-variable set so that enumerations stay cheap.
pub struct StructuralOracle {
    network: ValuationNetwork,
    fused: HashMap<VarSet, ValuationNetwork>,
}

impl StructuralOracle {
    pub fn new(network: &ValuationNetwork) -> Self {
        Self { network: network.structure(), fused: HashMap::new() }
    }

    pub fn network(&self) -> &ValuationNetwork {
        &self.network
    }

    pub fn holds(&mut self, r: &VarSet, s: &VarSet, v: &VarSet) -> Result<bool> {
        require_nonempty(r, s)?;
        let known = self.network.variable_names();
        if let Some(x) = r.iter().chain(s).chain(v).find(|x| !known.contains(*x)) {
            return Err(Error::UnknownVariable(x.clone()));
        }
        check_disjoint(r, s, v)?;
        let keep: VarSet = r.iter().chain(s).chain(v).cloned().collect();
        if !self.fused.contains_key(&keep) {
            let order = pick_order(&self.network, &keep)?;
            let (net, _) = eliminate(&self.network, &order)?;
            self.fused.insert(keep.clone(), net);
        }
        self.fused[&keep].separated(r, s, v)
    }

    pub fn statement(&mut self, r: &VarSet, s: &VarSet, v: &VarSet) -> Result<CiStatement> {
        let holds = self.holds(r, s, v)?;
        Ok(CiStatement {
            r: r.clone(),
            s: s.clone(),
            v: v.clone(),
            verdict: Criterion::VnSeparation.verdict(holds),
            criterion: Criterion::VnSeparation,
        })
    }
}

/// Pointwise factorization test on an explicit joint:
/// probability `p(rsv)·p(v) = p(rv)·p(sv)` within 1e-9 relative;
/// kappa `κ(rsv)+κ(v) = κ(rv)+κ(sv)` exactly, vacuous where `κ(v) = ∞`.
pub fn ci_numeric(tau: &Valuation, r: &VarSet, s: &VarSet, v: &VarSet) -> Result<CiStatement> {
    let holds = numeric_holds(tau, r, s, v)?;
    Ok(CiStatement {
        r: r.clone(),
        s: s.clone(),
        v: v.clone(),
        verdict: Criterion::Numeric.verdict(holds),
        criterion: Criterion::Numeric,
    })
}

pub fn numeric_holds(tau: &Valuation, r: &VarSet, s: &VarSet, v: &VarSet) -> Result<bool> {
    check_removable(tau.kind(), "numeric independence testing")?;
    check_subsets(tau, &[r, s, v])?;
    check_disjoint(r, s, v)?;
    let all: VarSet = r.iter().chain(s).chain(v).cloned().collect();
    let rv: VarSet = r.union(v).cloned().collect();
    let sv: VarSet = s.union(v).cloned().collect();
    let full = tau.marginalize_to(&all)?;
    let m_rv = full.marginalize_to(&rv)?;
    let m_sv = full.marginalize_to(&sv)?;
    let m_v = full.marginalize_to(v)?;
    let d = full.domain();
    let (ir, is, iv) = (d.projection(m_rv.domain()), d.projection(m_sv.domain()), d.projection(m_v.domain()));
    let ok = match (full.table(), m_rv.table(), m_sv.table(), m_v.table()) {
        (Table::Real(p), Table::Real(prv), Table::Real(psv), Table::Real(pv)) => (0..p.len())
            .all(|i| close(p[i] * pv[iv[i]], prv[ir[i]] * psv[is[i]], API_TOLERANCE)),
        (Table::Rank(k), Table::Rank(krv), Table::Rank(ksv), Table::Rank(kv)) => (0..k.len()).all(|i| {
            kv[iv[i]] == Rank::Infinite || k[i].plus(kv[iv[i]]) == krv[ir[i]].plus(ksv[is[i]])
        }),
        _ => unreachable!("uniform kind"),
    };
    Ok(ok)
}

/// All ordered disjoint triples with `1 ≤ |r|, |s| ≤ max_set_size` (any
/// `v`), evaluated structurally and sorted by their report line.
pub fn enumerate_ci(network: &ValuationNetwork, max_set_size: usize) -> Result<Vec<CiStatement>> {
    let names: Vec<String> = network.variable_names().into_iter().collect();
    let mut oracle = StructuralOracle::new(network);
    let mut out = Vec::new();
    for (r, s, v) in disjoint_triples(&names, max_set_size) {
        out.push(oracle.statement(&r, &s, &v)?);
    }
    out.sort_by_cached_key(ToString::to_string);
    Ok(out)
}

/// Every ordered triple of pairwise disjoint subsets of `names` with
/// `r` and `s` non-empty and at most `max_set_size` elements.
pub fn disjoint_triples(names: &[String], max_set_size: usize) -> Vec<(VarSet, VarSet, VarSet)> {
    let n = names.len();
    let mut out = Vec::new();
    let total = 4usize.pow(n as u32);
    for code in 0..total {
        let (mut r, mut s, mut v) = (VarSet::new(), VarSet::new(), VarSet::new());
        let mut c = code;
        for name in names {
            match c % 4 {
                1 => r.insert(name.clone()),
                2 => s.insert(name.clone()),
                3 => v.insert(name.clone()),
                _ => false,
            };
            c /= 4;
        }
        if !r.is_empty() && !s.is_empty() && r.len() <= max_set_size && s.len() <= max_set_size {
            out.push((r, s, v));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{var_set, Domain, Variable};
    use crate::network::ValuationNode;

    fn dom(names: &[&str]) -> Domain {
        Domain::new(names.iter().map(|n| Variable::binary(*n).unwrap()).collect()).unwrap()
    }

    fn cond(name: &str, head: &[&str], tail: &[&str]) -> ValuationNode {
        let all: Vec<&str> = tail.iter().chain(head).copied().collect();
        ValuationNode::conditional(name, dom(&all), var_set(head)).unwrap()
    }

    fn fork() -> ValuationNetwork {
        ValuationNetwork::build(
            dom(&["V", "W", "X", "Y", "Z"]).vars().to_vec(),
            vec![
                cond("alpha", &["V"], &[]),
                cond("beta", &["W"], &["V"]),
                cond("gamma", &["X"], &["V"]),
                cond("delta", &["Y"], &["W", "X"]),
                cond("eps", &["Z"], &["Y"]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn conditional_of_probability() {
        let s = Valuation::probability(dom(&["A", "B"]), vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let c = conditional_of(&s, &var_set(["B"]), &var_set(["A"])).unwrap();
        let expected = Valuation::probability(dom(&["A", "B"]), vec![1.0 / 3.0, 2.0 / 3.0, 3.0 / 7.0, 4.0 / 7.0]).unwrap();
        assert!(c.valuation.approx_eq(&expected, 1e-12));
        assert!(c.normalization_deviation().unwrap() < 1e-12);
        let u = Valuation::probability(dom(&["A", "B"]), vec![0.25; 4]).unwrap();
        let c = conditional_of(&u, &var_set(["B"]), &var_set(["A"])).unwrap();
        assert_eq!(c.valuation.reals().unwrap(), &[0.5; 4]);
    }

    #[test]
    fn conditional_of_kappa() {
        let s = Valuation::kappa_finite(dom(&["A", "B"]), &[0, 2, 1, 3]).unwrap();
        let c = conditional_of(&s, &var_set(["B"]), &var_set(["A"])).unwrap();
        assert_eq!(c.valuation, Valuation::kappa_finite(dom(&["A", "B"]), &[0, 2, 0, 2]).unwrap());
    }

    #[test]
    fn conditional_of_errors() {
        let s = Valuation::probability(dom(&["A", "B"]), vec![0.25; 4]).unwrap();
        assert!(matches!(conditional_of(&s, &var_set(["A"]), &var_set(["A"])), Err(Error::Overlap(_))));
        let p = Valuation::from_reals(AlgebraKind::Possibility, dom(&["A"]), vec![1.0, 0.5]).unwrap();
        assert!(matches!(conditional_of(&p, &var_set(["A"]), &VarSet::new()), Err(Error::Unsupported { .. })));
    }

    #[test]
    fn structural_fork() {
        let net = fork();
        let st = ci_structural(&net, &var_set(["W"]), &var_set(["X"]), &var_set(["V"])).unwrap();
        assert_eq!(st.verdict, Verdict::Independent);
        assert_eq!(st.to_string(), "r={W} s={X} v={V} verdict=independent criterion=vn-separation");
        let st = ci_structural(&net, &var_set(["W"]), &var_set(["X"]), &var_set(["V", "Z"])).unwrap();
        assert_eq!(st.verdict, Verdict::NotDerivable);
    }

    #[test]
    fn structural_errors() {
        let net = fork();
        assert!(ci_structural(&net, &var_set(["W"]), &var_set(["W"]), &VarSet::new()).is_err());
        assert!(ci_structural(&net, &var_set(["Q"]), &var_set(["W"]), &VarSet::new()).is_err());
        assert!(ci_structural(&net, &VarSet::new(), &var_set(["W"]), &VarSet::new()).is_err());
    }

    #[test]
    fn numeric_examples() {
        let a = Valuation::probability(dom(&["A"]), vec![0.3, 0.7]).unwrap();
        let b = Valuation::probability(dom(&["B"]), vec![0.6, 0.4]).unwrap();
        let tau = a.combine(&b).unwrap();
        assert!(numeric_holds(&tau, &var_set(["A"]), &var_set(["B"]), &VarSet::new()).unwrap());
        let tau = Valuation::probability(dom(&["A", "B"]), vec![0.4, 0.1, 0.1, 0.4]).unwrap();
        let st = ci_numeric(&tau, &var_set(["A"]), &var_set(["B"]), &VarSet::new()).unwrap();
        assert_eq!(st.verdict, Verdict::NotIndependent);
    }

    #[test]
    fn numeric_kappa_vacuous_where_conditioning_impossible() {
        // V = 1 is impossible; given V = 0, A and B are independent
        let inf = Rank::Infinite;
        let f = Rank::Finite;
        let tau = Valuation::kappa(
            dom(&["V", "A", "B"]),
            vec![f(0), f(1), f(2), f(3), inf, inf, inf, inf],
        )
        .unwrap();
        assert!(numeric_holds(&tau, &var_set(["A"]), &var_set(["B"]), &var_set(["V"])).unwrap());
        let dep = Valuation::kappa(dom(&["A", "B"]), vec![f(0), f(1), f(1), f(0)]).unwrap();
        assert!(!numeric_holds(&dep, &var_set(["A"]), &var_set(["B"]), &VarSet::new()).unwrap());
    }

    #[test]
    fn enumerate_single_variable_is_empty() {
        let net = ValuationNetwork::build(dom(&["A"]).vars().to_vec(), vec![cond("a", &["A"], &[])]).unwrap();
        assert!(enumerate_ci(&net, 2).unwrap().is_empty());
    }

    #[test]
    fn enumerate_is_sorted_and_symmetric() {
        let out = enumerate_ci(&fork(), 1).unwrap();
        let lines: Vec<String> = out.iter().map(ToString::to_string).collect();
        let mut sorted = lines.clone();
        sorted.sort();
        assert_eq!(lines, sorted);
        for st in &out {
            let mirror = out.iter().find(|o| o.r == st.s && o.s == st.r && o.v == st.v).unwrap();
            assert_eq!(mirror.verdict, st.verdict);
        }
    }
}
