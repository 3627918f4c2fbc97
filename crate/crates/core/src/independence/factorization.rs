use std::fmt;

use super::conditional_of;
use crate::algebra::{AlgebraKind, VarSet, Valuation, API_TOLERANCE};
use crate::error::Result;
use crate::network::check_disjoint;

#[derive(Debug, Clone, PartialEq)]
pub struct StatementCheck {
    /// Roman numeral of the statement, `"i"` through `"vii"`.
    pub statement: &'static str,
    pub passed: bool,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationReport {
    pub checks: Vec<StatementCheck>,
}

impl FactorizationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for FactorizationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "({}) {} deviation={:e}",
                c.statement,
                if c.passed { "pass" } else { "FAIL" },
                c.deviation
            )?;
        }
        Ok(())
    }
}

fn union(sets: &[&VarSet]) -> VarSet {
    sets.iter().flat_map(|s| s.iter().cloned()).collect()
}

/// Numerically checks the seven properties of conditionals on `sigma`
/// (normalized first) for disjoint `a`, `b`, `c`:
///
/// 1. `σ(a) = σ↓a`
/// 2. `σ(a) ⊕ σ(b|a) = σ(a∪b)`
/// 3. `σ(b|a) ⊕ σ(c|a∪b) = σ(b∪c|a)`
/// 4. `σ(b|a)↓(a∪b') = σ(b'|a)` for every `b' ⊆ b`
/// 5. `(σ(b|a) ⊕ σ(c|a∪b))↓(a∪c) = σ(c|a)`
/// 6. `σ(b|a)↓a ⊕ σ(a) = σ(a)`
/// 7. `σ(b|a)` is normalized over `b` wherever `σ↓a` is non-null
///
/// Probability passes at 1e-9 relative deviation, kappa only when exact.
pub fn verify_factorization(sigma: &Valuation, a: &VarSet, b: &VarSet, c: &VarSet) -> Result<FactorizationReport> {
    check_disjoint(a, b, c)?;
    let sigma = sigma.normalize()?;
    let empty = VarSet::new();
    let cond = |head: &VarSet, tail: &VarSet| conditional_of(&sigma, head, tail).map(|c| c.valuation);
    let tol = match sigma.kind() {
        AlgebraKind::Kappa => 0.0,
        _ => API_TOLERANCE,
    };
    let ab = union(&[a, b]);
    let ac = union(&[a, c]);
    let bc = union(&[b, c]);

    let s_a = cond(a, &empty)?;
    let b_a = cond(b, a)?;
    let c_ab = cond(c, &ab)?;

    let mut deviations: Vec<(&'static str, f64)> = Vec::with_capacity(7);
    deviations.push(("i", s_a.deviation(&sigma.marginalize_to(a)?)?));
    deviations.push(("ii", s_a.combine(&b_a)?.deviation(&cond(&ab, &empty)?)?));
    let chained = b_a.combine(&c_ab)?;
    deviations.push(("iii", chained.deviation(&cond(&bc, a)?)?));

    let members: Vec<&String> = b.iter().collect();
    let mut worst = 0.0f64;
    for mask in 0..(1usize << members.len()) {
        let sub: VarSet = members
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, m)| (*m).clone())
            .collect();
        let lhs = b_a.marginalize_to(&union(&[a, &sub]))?;
        worst = worst.max(lhs.deviation(&cond(&sub, a)?)?);
    }
    deviations.push(("iv", worst));
    deviations.push(("v", chained.marginalize_to(&ac)?.deviation(&cond(c, a)?)?));
    deviations.push(("vi", b_a.marginalize_to(a)?.combine(&s_a)?.deviation(&s_a)?));
    deviations.push(("vii", b_a.kernel_deviation(b, true)?));

    Ok(FactorizationReport {
        checks: deviations
            .into_iter()
            .map(|(statement, deviation)| StatementCheck { statement, passed: deviation <= tol, deviation })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{var_set, Domain, Variable};

    fn dom(names: &[&str]) -> Domain {
        Domain::new(names.iter().map(|n| Variable::binary(*n).unwrap()).collect()).unwrap()
    }

    #[test]
    fn uniform_passes_exactly() {
        let s = Valuation::probability(dom(&["A", "B", "C"]), vec![0.125; 8]).unwrap();
        let report = verify_factorization(&s, &var_set(["A"]), &var_set(["B"]), &var_set(["C"])).unwrap();
        assert_eq!(report.checks.len(), 7);
        assert!(report.all_passed(), "{report}");
        assert!(report.checks.iter().all(|c| c.deviation == 0.0), "{report}");
    }

    #[test]
    fn positive_table_passes() {
        let v = vec![0.05, 0.1, 0.15, 0.2, 0.08, 0.12, 0.17, 0.13];
        let s = Valuation::probability(dom(&["A", "B", "C"]), v).unwrap();
        let report = verify_factorization(&s, &var_set(["A"]), &var_set(["B"]), &var_set(["C"])).unwrap();
        assert!(report.all_passed(), "{report}");
    }

    #[test]
    fn zero_slice_still_satisfies_chain_rule() {
        // A = 1 has probability zero
        let s = Valuation::probability(dom(&["A", "B"]), vec![0.3, 0.7, 0.0, 0.0]).unwrap();
        let report = verify_factorization(&s, &var_set(["A"]), &var_set(["B"]), &VarSet::new()).unwrap();
        assert!(report.checks[1].passed, "{report}");
        assert!(report.all_passed(), "{report}");
        // brute-force both sides of (ii): p(a) · p(b|a) against p(a,b)
        let pa = [1.0, 0.0];
        let pb_a = [0.3, 0.7, 0.0, 0.0];
        let lhs: Vec<f64> = (0..4).map(|i| pa[i / 2] * pb_a[i]).collect();
        assert_eq!(lhs, vec![0.3, 0.7, 0.0, 0.0]);
    }

    #[test]
    fn kappa_with_infinite_ranks() {
        use crate::algebra::Rank::{Finite as F, Infinite as I};
        let s = Valuation::kappa(dom(&["A", "B", "C"]), vec![F(0), F(2), I, F(1), I, I, F(3), F(5)]).unwrap();
        let report = verify_factorization(&s, &var_set(["A"]), &var_set(["B"]), &var_set(["C"])).unwrap();
        assert!(report.all_passed(), "{report}");
    }
}
