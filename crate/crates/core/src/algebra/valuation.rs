use std::fmt;
use std::str::FromStr;

use super::domain::{Domain, VarSet};
use super::rank::Rank;
use crate::error::{Error, Result};

/// Relative tolerance used when comparing probability valuations at API level.
pub const API_TOLERANCE: f64 = 1e-9;

/// The uncertainty calculus a valuation lives in.
///
/// | kind        | combine | marginalize | removal     | identity |
/// |-------------|---------|-------------|-------------|----------|
/// | probability | `×`     | `Σ`         | `÷`         | 1        |
/// | kappa       | `+`     | `min`       | `−`         | 0        |
/// | possibility | `min`   | `max`       | unsupported | 1        |
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgebraKind {
    Probability,
    Kappa,
    Possibility,
}

impl AlgebraKind {
    pub fn as_str(self) -> &'static str {
        match self {
            AlgebraKind::Probability => "probability",
            AlgebraKind::Kappa => "kappa",
            AlgebraKind::Possibility => "possibility",
        }
    }

    pub fn supports_removal(self) -> bool {
        !matches!(self, AlgebraKind::Possibility)
    }
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AlgebraKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "probability" => Ok(AlgebraKind::Probability),
            "kappa" => Ok(AlgebraKind::Kappa),
            "possibility" => Ok(AlgebraKind::Possibility),
            _ => Err(format!("unknown algebra kind {s:?}")),
        }
    }
}

/// Dense table storage. Probability and possibility tables hold reals,
/// kappa tables hold ranks.
#[derive(Debug, Clone, PartialEq)]
pub enum Table {
    Real(Vec<f64>),
    Rank(Vec<Rank>),
}

impl Table {
    pub fn len(&self) -> usize {
        match self {
            Table::Real(v) => v.len(),
            Table::Rank(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn fits(&self, kind: AlgebraKind) -> bool {
        matches!(
            (self, kind),
            (Table::Rank(_), AlgebraKind::Kappa)
                | (Table::Real(_), AlgebraKind::Probability | AlgebraKind::Possibility)
        )
    }

    /// Formats entries separated by single spaces (shortest round-trip form).
    pub fn format_entries(&self) -> String {
        match self {
            Table::Real(v) => v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "),
            Table::Rank(v) => v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "),
        }
    }

    /// Parses whitespace-separated entries for the given kind.
    pub fn parse_entries<'a>(
        kind: AlgebraKind,
        tokens: impl IntoIterator<Item = &'a str>,
    ) -> Result<Table, String> {
        match kind {
            AlgebraKind::Kappa => tokens
                .into_iter()
                .map(str::parse::<Rank>)
                .collect::<Result<Vec<_>, _>>()
                .map(Table::Rank),
            _ => tokens
                .into_iter()
                .map(|t| t.parse::<f64>().map_err(|_| format!("invalid number {t:?}")))
                .collect::<Result<Vec<_>, _>>()
                .map(Table::Real),
        }
    }
}

fn rel_diff(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    (a - b).abs() / a.abs().max(b.abs())
}

/// True when `a` and `b` agree within relative tolerance `tol`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    rel_diff(a, b) <= tol
}

/// A table over the product frame of its domain, tagged with its algebra.
/// Immutable once built; every operation returns a new valuation.
#[derive(Debug, Clone, PartialEq)]
pub struct Valuation {
    kind: AlgebraKind,
    domain: Domain,
    table: Table,
}

impl Valuation {
    pub fn new(kind: AlgebraKind, domain: Domain, table: Table) -> Result<Self> {
        if !table.fits(kind) {
            return Err(Error::InvalidValuation(format!(
                "table storage does not match kind {kind}"
            )));
        }
        if table.len() != domain.size() {
            return Err(Error::InvalidValuation(format!(
                "{} entries for domain {} of size {}",
                table.len(),
                domain,
                domain.size()
            )));
        }
        if let Table::Real(values) = &table {
            let upper = if kind == AlgebraKind::Possibility { 1.0 } else { f64::INFINITY };
            if let Some(bad) = values.iter().find(|x| !(x.is_finite() && **x >= 0.0 && **x <= upper)) {
                return Err(Error::InvalidValuation(format!("entry {bad} out of range for {kind}")));
            }
        }
        Ok(Self { kind, domain, table })
    }

    pub fn from_reals(kind: AlgebraKind, domain: Domain, values: Vec<f64>) -> Result<Self> {
        Self::new(kind, domain, Table::Real(values))
    }

    pub fn probability(domain: Domain, values: Vec<f64>) -> Result<Self> {
        Self::new(AlgebraKind::Probability, domain, Table::Real(values))
    }

    pub fn kappa(domain: Domain, values: Vec<Rank>) -> Result<Self> {
        Self::new(AlgebraKind::Kappa, domain, Table::Rank(values))
    }

    /// Kappa valuation from finite ranks.
    pub fn kappa_finite(domain: Domain, values: &[u64]) -> Result<Self> {
        Self::kappa(domain, values.iter().map(|&k| Rank::Finite(k)).collect())
    }

    /// The neutral element of combination on `domain`.
    pub fn identity(kind: AlgebraKind, domain: Domain) -> Self {
        let n = domain.size();
        let table = match kind {
            AlgebraKind::Kappa => Table::Rank(vec![Rank::ZERO; n]),
            _ => Table::Real(vec![1.0; n]),
        };
        Self { kind, domain, table }
    }

    /// The absorbing element of combination on `domain`.
    pub fn zero(kind: AlgebraKind, domain: Domain) -> Self {
        let n = domain.size();
        let table = match kind {
            AlgebraKind::Kappa => Table::Rank(vec![Rank::Infinite; n]),
            _ => Table::Real(vec![0.0; n]),
        };
        Self { kind, domain, table }
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    pub fn reals(&self) -> Option<&[f64]> {
        match &self.table {
            Table::Real(v) => Some(v),
            Table::Rank(_) => None,
        }
    }

    pub fn ranks(&self) -> Option<&[Rank]> {
        match &self.table {
            Table::Rank(v) => Some(v),
            Table::Real(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.table {
            Table::Real(v) => v.iter().all(|&x| x == 0.0),
            Table::Rank(v) => v.iter().all(|&x| x == Rank::Infinite),
        }
    }

    pub fn is_identity(&self) -> bool {
        match &self.table {
            Table::Real(v) => v.iter().all(|&x| x == 1.0),
            Table::Rank(v) => v.iter().all(|&x| x == Rank::ZERO),
        }
    }

    fn check_kind(&self, other: &Valuation) -> Result<()> {
        if self.kind != other.kind {
            return Err(Error::AlgebraMismatch(self.kind, other.kind));
        }
        Ok(())
    }

    /// Combination `self ⊕ other` on the union of the two domains.
    pub fn combine(&self, other: &Valuation) -> Result<Valuation> {
        self.check_kind(other)?;
        let domain = self.domain.union(&other.domain)?;
        let left = domain.projection(&self.domain);
        let right = domain.projection(&other.domain);
        let pairs = left.iter().zip(&right);
        let table = match (&self.table, &other.table) {
            (Table::Real(a), Table::Real(b)) => {
                let op: fn(f64, f64) -> f64 = match self.kind {
                    AlgebraKind::Possibility => f64::min,
                    _ => |x, y| x * y,
                };
                Table::Real(pairs.map(|(&i, &j)| op(a[i], b[j])).collect())
            }
            (Table::Rank(a), Table::Rank(b)) => {
                Table::Rank(pairs.map(|(&i, &j)| a[i].plus(b[j])).collect())
            }
            _ => unreachable!("kind checked"),
        };
        Ok(Valuation { kind: self.kind, domain, table })
    }

    /// Marginal of `self` for `target`, laid out in `target`'s order.
    pub fn marginalize(&self, target: &Domain) -> Result<Valuation> {
        if !target.is_subset(&self.domain) {
            return Err(Error::Domain(format!(
                "{} is not a subset of {}",
                target, self.domain
            )));
        }
        let target = self.domain.select(target.names())?;
        let map = self.domain.projection(&target);
        let n = target.size();
        let table = match &self.table {
            Table::Real(a) => {
                let mut out = vec![0.0f64; n];
                match self.kind {
                    AlgebraKind::Possibility => {
                        for (&i, &x) in map.iter().zip(a) {
                            out[i] = out[i].max(x);
                        }
                    }
                    _ => {
                        for (&i, &x) in map.iter().zip(a) {
                            out[i] += x;
                        }
                    }
                }
                Table::Real(out)
            }
            Table::Rank(a) => {
                let mut out = vec![Rank::Infinite; n];
                for (&i, &x) in map.iter().zip(a) {
                    out[i] = out[i].min(x);
                }
                Table::Rank(out)
            }
        };
        Ok(Valuation { kind: self.kind, domain: target, table })
    }

    /// Marginal onto the named variables, keeping `self`'s variable order.
    pub fn marginalize_to(&self, keep: &VarSet) -> Result<Valuation> {
        if let Some(missing) = keep.iter().find(|n| !self.domain.contains(n)) {
            return Err(Error::Domain(format!("{missing} is not in {}", self.domain)));
        }
        self.marginalize(&self.domain.restrict(keep))
    }

    /// Deletes a single variable.
    pub fn eliminate(&self, var: &str) -> Result<Valuation> {
        if !self.domain.contains(var) {
            return Err(Error::Domain(format!("{var} is not in {}", self.domain)));
        }
        self.marginalize(&self.domain.without(var))
    }

    /// Removal `self ⊖ other`; `other`'s domain must be a subset of `self`'s.
    /// Uses `0/0 = 0` and `∞ − ∞ = 0`.
    pub fn remove(&self, other: &Valuation) -> Result<Valuation> {
        self.check_kind(other)?;
        if !self.kind.supports_removal() {
            return Err(Error::Unsupported { op: "removal", kind: self.kind });
        }
        if !other.domain.is_subset(&self.domain) {
            return Err(Error::Domain(format!(
                "cannot remove {} from {}",
                other.domain, self.domain
            )));
        }
        let map = self.domain.projection(&other.domain);
        let table = match (&self.table, &other.table) {
            (Table::Real(a), Table::Real(b)) => Table::Real(
                a.iter()
                    .zip(&map)
                    .map(|(&x, &j)| {
                        let y = b[j];
                        if y != 0.0 {
                            Ok(x / y)
                        } else if x == 0.0 {
                            Ok(0.0)
                        } else {
                            Err(Error::InconsistentRemoval { value: x.to_string() })
                        }
                    })
                    .collect::<Result<_>>()?,
            ),
            (Table::Rank(a), Table::Rank(b)) => Table::Rank(
                a.iter()
                    .zip(&map)
                    .map(|(&x, &j)| {
                        x.minus(b[j])
                            .ok_or_else(|| Error::InconsistentRemoval { value: format!("{x} - {}", b[j]) })
                    })
                    .collect::<Result<_>>()?,
            ),
            _ => unreachable!("kind checked"),
        };
        Ok(Valuation { kind: self.kind, domain: self.domain.clone(), table })
    }

    /// Rescales to a normal valuation: probabilities sum to 1, the minimum
    /// rank is 0, the maximum possibility is 1.
    pub fn normalize(&self) -> Result<Valuation> {
        if self.is_zero() {
            return Err(Error::CannotNormalize);
        }
        let table = match (&self.table, self.kind) {
            (Table::Real(a), AlgebraKind::Possibility) => {
                let m = a.iter().copied().fold(0.0, f64::max);
                Table::Real(a.iter().map(|x| x / m).collect())
            }
            (Table::Real(a), _) => {
                let s: f64 = a.iter().sum();
                Table::Real(a.iter().map(|x| x / s).collect())
            }
            (Table::Rank(a), _) => {
                let m = *a.iter().min().expect("nonempty table");
                Table::Rank(a.iter().map(|x| x.minus(m).expect("min")).collect())
            }
        };
        Ok(Valuation { kind: self.kind, domain: self.domain.clone(), table })
    }

    /// Same valuation with the domain permuted to `order` (which must be
    /// set-equal to the current domain).
    pub fn reorder(&self, order: &Domain) -> Result<Valuation> {
        if !order.set_eq(&self.domain) {
            return Err(Error::Domain(format!("{} is not a permutation of {}", order, self.domain)));
        }
        let order = self.domain.select(order.names())?;
        let map = order.projection(&self.domain);
        let table = match &self.table {
            Table::Real(a) => Table::Real(map.iter().map(|&i| a[i]).collect()),
            Table::Rank(a) => Table::Rank(map.iter().map(|&i| a[i]).collect()),
        };
        Ok(Valuation { kind: self.kind, domain: order, table })
    }

    /// Largest entrywise deviation from `other` after aligning domains:
    /// relative for real tables, absolute for ranks (`∞` on finite/infinite
    /// mismatch).
    pub fn deviation(&self, other: &Valuation) -> Result<f64> {
        self.check_kind(other)?;
        let other = other.reorder(&self.domain)?;
        Ok(match (&self.table, &other.table) {
            (Table::Real(a), Table::Real(b)) => {
                a.iter().zip(b).map(|(&x, &y)| rel_diff(x, y)).fold(0.0, f64::max)
            }
            (Table::Rank(a), Table::Rank(b)) => {
                a.iter().zip(b).map(|(&x, &y)| x.distance(y)).fold(0.0, f64::max)
            }
            _ => unreachable!("kind checked"),
        })
    }

    /// Equality up to domain order, within `tol` for real tables and exact
    /// for ranks.
    pub fn approx_eq(&self, other: &Valuation, tol: f64) -> bool {
        match self.deviation(other) {
            Ok(d) if self.kind == AlgebraKind::Kappa => d == 0.0,
            Ok(d) => d <= tol,
            Err(_) => false,
        }
    }

    /// How far `self` is from being a conditional with the given head: per
    /// tail configuration, the head aggregate must be the identity value
    /// (sum 1, min rank 0, max possibility 1). When `allow_null_rows` is set,
    /// tail configurations whose head aggregate is the zero value are skipped.
    pub fn kernel_deviation(&self, head: &VarSet, allow_null_rows: bool) -> Result<f64> {
        let tail: VarSet = self.domain.names().filter(|n| !head.contains(*n)).map(str::to_string).collect();
        let agg = self.marginalize_to(&tail)?;
        Ok(match agg.table {
            Table::Real(v) => v
                .iter()
                .filter(|&&x| !(allow_null_rows && x == 0.0))
                .map(|&x| (x - 1.0).abs())
                .fold(0.0, f64::max),
            Table::Rank(v) => v
                .iter()
                .filter(|&&x| !(allow_null_rows && x == Rank::Infinite))
                .map(|&x| x.distance(Rank::ZERO))
                .fold(0.0, f64::max),
        })
    }

    /// Entry at a configuration given as per-variable outcomes in domain order.
    pub fn real_at(&self, config: &[usize]) -> Option<f64> {
        self.reals().map(|v| v[self.domain.index(config)])
    }

    pub fn rank_at(&self, config: &[usize]) -> Option<Rank> {
        self.ranks().map(|v| v[self.domain.index(config)])
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use super::*;
    use crate::algebra::Variable;

    fn dom(names: &[&str]) -> Domain {
        Domain::new(names.iter().map(|n| Variable::binary(*n).unwrap()).collect()).unwrap()
    }

    fn prob(names: &[&str], v: &[f64]) -> Valuation {
        Valuation::probability(dom(names), v.to_vec()).unwrap()
    }

    fn kappa(names: &[&str], v: &[u64]) -> Valuation {
        Valuation::kappa_finite(dom(names), v).unwrap()
    }

    /// Brute-force oracle: value of a binary-variable table at a named
    /// assignment, by explicit bit arithmetic over the listed order.
    fn at(names: &[&str], v: &[f64], assignment: &HashMap<&str, usize>) -> f64 {
        let idx = names.iter().fold(0, |acc, n| acc * 2 + assignment[n]);
        v[idx]
    }

    #[test]
    fn identity_is_neutral() {
        let s = prob(&["X"], &[0.3, 0.7]);
        let id = Valuation::identity(AlgebraKind::Probability, dom(&["X"]));
        assert_eq!(id.reals().unwrap(), &[1.0, 1.0]);
        assert_eq!(s.combine(&id).unwrap(), s);
        assert_eq!(
            Valuation::identity(AlgebraKind::Kappa, Domain::empty()).ranks().unwrap(),
            &[Rank::ZERO]
        );
        let xy = Domain::new(vec![Variable::new("X", 2).unwrap(), Variable::new("Y", 3).unwrap()]).unwrap();
        assert_eq!(
            Valuation::identity(AlgebraKind::Probability, xy).reals().unwrap(),
            &[1.0; 6]
        );
    }

    #[test]
    fn combine_matches_brute_force_product() {
        let a = [0.2, 0.8];
        let b = [0.5, 0.5, 0.3, 0.7];
        // oracle: enumerate all joint configurations of {X,Y}
        let mut expected = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                let asg = HashMap::from([("X", x), ("Y", y)]);
                expected.push(at(&["X"], &a, &asg) * at(&["X", "Y"], &b, &asg));
            }
        }
        let got = prob(&["X"], &a).combine(&prob(&["X", "Y"], &b)).unwrap();
        assert_eq!(got.domain(), &dom(&["X", "Y"]));
        assert!(got.approx_eq(&prob(&["X", "Y"], &expected), 1e-12));
        assert!(got.approx_eq(&prob(&["X", "Y"], &[0.10, 0.10, 0.24, 0.56]), 1e-12));
    }

    #[test]
    fn zero_absorbs() {
        let z = Valuation::zero(AlgebraKind::Probability, dom(&["W"]));
        let s = prob(&["X"], &[0.3, 0.7]);
        let c = z.combine(&s).unwrap();
        assert!(c.is_zero());
        assert!(c.domain().set_eq(&dom(&["W", "X"])));
        let zk = Valuation::zero(AlgebraKind::Kappa, dom(&["W"]));
        assert!(zk.combine(&kappa(&["X"], &[0, 4])).unwrap().is_zero());
    }

    #[test]
    fn kind_mismatch() {
        let a = prob(&["X"], &[0.5, 0.5]);
        let b = kappa(&["X"], &[0, 1]);
        assert_eq!(
            a.combine(&b),
            Err(Error::AlgebraMismatch(AlgebraKind::Probability, AlgebraKind::Kappa))
        );
    }

    #[test]
    fn marginalize_examples() {
        let p = prob(&["X", "Y"], &[0.10, 0.10, 0.24, 0.56]);
        let m = p.marginalize(&dom(&["X"])).unwrap();
        assert!(m.approx_eq(&prob(&["X"], &[0.2, 0.8]), 1e-12));
        let k = kappa(&["X", "Y"], &[0, 2, 1, 3]).marginalize(&dom(&["X"])).unwrap();
        assert_eq!(k, kappa(&["X"], &[0, 1]));
        // min and max are idempotent, so identities marginalize to identities
        let idk = Valuation::identity(AlgebraKind::Kappa, dom(&["X", "Y"]));
        assert!(idk.marginalize(&dom(&["X"])).unwrap().is_identity());
        let idp = Valuation::identity(AlgebraKind::Possibility, dom(&["X", "Y"]));
        assert!(idp.marginalize(&dom(&["X"])).unwrap().is_identity());
        // summing out a binary Y from the all-ones table gives 2 per X value
        let id = Valuation::identity(AlgebraKind::Probability, dom(&["X", "Y"]));
        assert_eq!(id.marginalize(&dom(&["X"])).unwrap().reals().unwrap(), &[2.0, 2.0]);
        assert_eq!(id.marginalize(&dom(&["X", "Y"])).unwrap(), id);
        assert!(p.marginalize(&dom(&["Z"])).is_err());
    }

    #[test]
    fn marginalize_permutes_to_target_order() {
        let p = prob(&["X", "Y"], &[0.1, 0.2, 0.3, 0.4]);
        let r = p.marginalize(&dom(&["Y", "X"])).unwrap();
        assert_eq!(r.reals().unwrap(), &[0.1, 0.3, 0.2, 0.4]);
    }

    #[test]
    fn removal_examples() {
        let k = kappa(&["X"], &[3, 5]).remove(&kappa(&["X"], &[1, 2])).unwrap();
        assert_eq!(k, kappa(&["X"], &[2, 3]));
        let p = prob(&["X"], &[0.0, 0.4]).remove(&prob(&["X"], &[0.0, 0.4])).unwrap();
        assert_eq!(p.reals().unwrap(), &[0.0, 1.0]);
        assert!(matches!(
            prob(&["X"], &[0.1, 0.4]).remove(&prob(&["X"], &[0.0, 0.4])),
            Err(Error::InconsistentRemoval { .. })
        ));
        let a = Valuation::from_reals(AlgebraKind::Possibility, dom(&["X"]), vec![1.0, 0.5]).unwrap();
        assert!(matches!(a.remove(&a), Err(Error::Unsupported { .. })));
    }

    #[test]
    fn removal_undoes_combination_on_positive_tables() {
        let s = prob(&["A"], &[0.25, 0.75]);
        let r = prob(&["B"], &[0.4, 0.6]);
        let back = s.combine(&r).unwrap().remove(&r).unwrap();
        let expected = prob(&["A", "B"], &[0.25, 0.25, 0.75, 0.75]);
        assert!(back.approx_eq(&expected, 1e-12));
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(prob(&["X"], &[1.0, 3.0]).normalize().unwrap().reals().unwrap(), &[0.25, 0.75]);
        assert_eq!(kappa(&["X"], &[2, 5]).normalize().unwrap(), kappa(&["X"], &[0, 3]));
        assert_eq!(prob(&["X"], &[0.0, 0.0]).normalize(), Err(Error::CannotNormalize));
        let p = Valuation::from_reals(AlgebraKind::Possibility, dom(&["X"]), vec![0.2, 0.5]).unwrap();
        assert_eq!(p.normalize().unwrap().reals().unwrap(), &[0.4, 1.0]);
    }

    #[test]
    fn rejects_out_of_range_entries() {
        assert!(Valuation::probability(dom(&["X"]), vec![-0.1, 1.0]).is_err());
        assert!(Valuation::probability(dom(&["X"]), vec![f64::NAN, 1.0]).is_err());
        assert!(Valuation::from_reals(AlgebraKind::Possibility, dom(&["X"]), vec![1.5, 1.0]).is_err());
        assert!(Valuation::probability(dom(&["X"]), vec![1.0]).is_err());
        assert!(Valuation::new(AlgebraKind::Kappa, dom(&["X"]), Table::Real(vec![0.0, 1.0])).is_err());
    }

    #[test]
    fn possibility_uses_min_and_max() {
        let a = Valuation::from_reals(AlgebraKind::Possibility, dom(&["X"]), vec![1.0, 0.3]).unwrap();
        let b = Valuation::from_reals(AlgebraKind::Possibility, dom(&["X", "Y"]), vec![0.5, 1.0, 1.0, 0.2]).unwrap();
        let c = a.combine(&b).unwrap();
        assert_eq!(c.reals().unwrap(), &[0.5, 1.0, 0.3, 0.2]);
        assert_eq!(c.marginalize(&dom(&["Y"])).unwrap().reals().unwrap(), &[0.5, 1.0]);
    }

    #[test]
    fn kernel_deviation_detects_unnormalized_rows() {
        let head: VarSet = ["Y".to_string()].into();
        let good = prob(&["X", "Y"], &[0.5, 0.5, 0.3, 0.7]);
        assert!(good.kernel_deviation(&head, false).unwrap() < 1e-12);
        let bad = prob(&["X", "Y"], &[0.5, 0.6, 0.0, 0.0]);
        assert!(bad.kernel_deviation(&head, false).unwrap() > 0.09);
        assert!((bad.kernel_deviation(&head, true).unwrap() - 0.1).abs() < 1e-12);
    }
}
